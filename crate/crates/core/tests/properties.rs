use std::collections::HashMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use tracecode::bounds::Bounds;
use tracecode::code::{
    codeword, defining_set, enumerate_code, generator_matrix, polynomial_basis, weight,
};
use tracecode::counting::count_n_brute;
use tracecode::field::FieldCtx;
use tracecode::job::{from_json, run, to_json, ASpec, JobConfig, Task};
use tracecode::FieldElement;

const FIELDS: [(u32, usize); 5] = [(3, 3), (3, 4), (3, 5), (5, 3), (7, 3)];

/// A field from the grid and an index used to pick `a` outside `GF(p)`.
fn field_and_a() -> impl Strategy<Value = (FieldCtx, FieldElement)> {
    (0..FIELDS.len(), any::<u64>()).prop_map(|(i, r)| {
        let (p, m) = FIELDS[i];
        let ctx = FieldCtx::new(p, m, None).unwrap();
        let outside: Vec<FieldElement> = ctx
            .elements()
            .filter(|x| !ctx.is_prime_field_element(x))
            .collect();
        let a = outside[(r % outside.len() as u64) as usize].clone();
        (ctx, a)
    })
}

/// Ordered pairs of distinct proportional generator columns.
fn proportional_pairs(gen: &[Vec<u32>], p: u32) -> u64 {
    let n = gen[0].len();
    let mut classes: HashMap<Vec<u32>, u64> = HashMap::new();
    for j in 0..n {
        let col: Vec<u32> = gen.iter().map(|row| row[j]).collect();
        let lead = *col.iter().find(|&&c| c != 0).expect("nonzero column");
        let inv = (1..p).find(|&x| x * lead % p == 1).unwrap();
        *classes
            .entry(col.iter().map(|&c| c * inv % p).collect())
            .or_insert(0) += 1;
    }
    classes.values().map(|&c| c * (c - 1)).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weight_distribution_counts_every_codeword((ctx, a) in field_and_a()) {
        let (wd, _) = enumerate_code(&ctx, &a, &Bounds::default()).unwrap();
        prop_assert_eq!(wd.total(), ctx.order());
    }

    #[test]
    fn first_two_power_moments((ctx, a) in field_and_a()) {
        let (wd, _) = enumerate_code(&ctx, &a, &Bounds::default()).unwrap();
        let ds = defining_set(&ctx, &a).unwrap();
        let gen = generator_matrix(&ctx, &ds, &polynomial_basis(&ctx)).unwrap();
        let (p, k, n) = (BigInt::from(ctx.p()), ctx.m() as u32, BigInt::from(ds.len()));
        let q1 = &p - 1;
        // Every coordinate is a nonzero functional, so it is nonzero on (p-1)p^(k-1) words.
        prop_assert_eq!(wd.moment(1), &n * &q1 * p.pow(k - 1));
        // Pairs of coordinates: independent pairs are jointly nonzero on (p-1)^2 p^(k-2) words,
        // proportional ones on (p-1)p^(k-1).
        let prop_pairs = BigInt::from(proportional_pairs(&gen, ctx.p()));
        let ordered = &n * (&n - 1u32);
        let expected = &n * &q1 * p.pow(k - 1)
            + (&ordered - &prop_pairs) * &q1 * &q1 * p.pow(k - 2)
            + &prop_pairs * &q1 * p.pow(k - 1);
        prop_assert_eq!(wd.moment(2), expected);
    }

    #[test]
    fn cwe_marginal_is_weight_distribution((ctx, a) in field_and_a()) {
        let (wd, cwe) = enumerate_code(&ctx, &a, &Bounds::default()).unwrap();
        prop_assert_eq!(cwe.marginal(wd.k), wd);
    }

    #[test]
    fn cwe_invariant_under_scaling((ctx, a) in field_and_a(), l in 1u32..7) {
        let (_, cwe) = enumerate_code(&ctx, &a, &Bounds::default()).unwrap();
        let lambda = 1 + l % (ctx.p() - 1);
        prop_assert_eq!(cwe.scaled(lambda), cwe);
    }

    #[test]
    fn counts_over_rho_sum_to_code_length((ctx, a) in field_and_a(), r in any::<u64>()) {
        let b = ctx.element_at(1 + r % (ctx.order() - 1));
        let total: u64 = (0..ctx.p()).map(|rho| count_n_brute(&ctx, &a, &b, rho).unwrap()).sum();
        prop_assert_eq!(total, (ctx.p() as u64).pow(ctx.m() as u32 - 2));
    }

    #[test]
    fn weight_is_length_minus_zero_count((ctx, a) in field_and_a(), seed in any::<u64>()) {
        let ds = defining_set(&ctx, &a).unwrap();
        let mut x = seed;
        for _ in 0..100 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = ctx.element_at(1 + (x >> 11) % (ctx.order() - 1));
            let w = weight(&codeword(&ctx, &ds, &b).unwrap());
            prop_assert_eq!(w as u64, ds.len() as u64 - count_n_brute(&ctx, &a, &b, 0).unwrap());
        }
    }

    #[test]
    fn report_json_round_trips(i in 0..FIELDS.len(), k in 1i64..200, seed in any::<u64>()) {
        let (p, m) = FIELDS[i];
        let mut cfg = JobConfig::new(p, m, ASpec::Exponent(k), vec![Task::Enumerate, Task::Predict, Task::Dual]);
        cfg.seed = seed;
        match run(&cfg) {
            Ok(report) => prop_assert_eq!(from_json(&to_json(&report)).unwrap(), report),
            Err(e) => prop_assert_eq!(e, tracecode::Error::AInPrimeField),
        }
    }
}
