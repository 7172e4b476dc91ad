//! The code `C_{D_a} = {(Tr(b x^2))_{x in D_a} : b in GF(p^m)}`, its weight
//! distribution and complete weight enumerator, and low-weight counts of its dual.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{guard, Bounds};
use crate::error::{Error, Result};
use crate::field::{fp_inv, FieldCtx, FieldElement};

/// `D_a = {x : Tr(x) = 1, Tr(a x) = 0}` in field enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefiningSet {
    pub a: FieldElement,
    pub elements: Vec<FieldElement>,
}

impl DefiningSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

pub fn defining_set(ctx: &FieldCtx, a: &FieldElement) -> Result<DefiningSet> {
    ctx.check(a)?;
    if ctx.m() < 3 {
        return Err(Error::DegreeTooSmall(ctx.m()));
    }
    if ctx.is_prime_field_element(a) {
        return Err(Error::AInPrimeField);
    }
    let elements = ctx
        .elements()
        .filter(|x| ctx.trace_linear(x) == 1 && ctx.trace_linear(&ctx.mul(a, x)) == 0)
        .collect();
    Ok(DefiningSet {
        a: a.clone(),
        elements,
    })
}

/// `(Tr(b d^2))_{d in D}`.
pub fn codeword(ctx: &FieldCtx, ds: &DefiningSet, b: &FieldElement) -> Result<Vec<u32>> {
    ctx.check(b)?;
    Ok(ds
        .elements
        .iter()
        .map(|d| ctx.trace_linear(&ctx.mul(b, &ctx.square(d))))
        .collect())
}

pub fn weight(word: &[u32]) -> usize {
    word.iter().filter(|&&c| c != 0).count()
}

/// Symbol counts `(t_0, ..., t_{p-1})` of a word.
pub fn composition(word: &[u32], p: u32) -> Vec<u32> {
    let mut t = vec![0u32; p as usize];
    for &c in word {
        t[c as usize] += 1;
    }
    t
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub n: usize,
    pub k: usize,
    /// Weight to number of codewords, including weight 0.
    pub entries: BTreeMap<usize, u64>,
}

impl WeightDistribution {
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Weights with nonzero frequency, excluding 0.
    pub fn nonzero_weights(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|(&w, &c)| w > 0 && c > 0)
            .map(|(&w, _)| w)
            .collect()
    }

    /// Smallest nonzero weight that occurs.
    pub fn min_distance(&self) -> Option<usize> {
        self.nonzero_weights().first().copied()
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.nonzero_weights().last().copied()
    }

    /// Drops zero-frequency rows and returns their weights.
    pub fn realized(&self) -> (WeightDistribution, Vec<usize>) {
        let vanishing = self
            .entries
            .iter()
            .filter(|(_, &c)| c == 0)
            .map(|(&w, _)| w)
            .collect();
        let entries = self
            .entries
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&w, &c)| (w, c))
            .collect();
        (
            WeightDistribution {
                entries,
                ..self.clone()
            },
            vanishing,
        )
    }

    /// `sum_w w^r A_w`.
    pub fn moment(&self, r: u32) -> BigInt {
        self.entries
            .iter()
            .map(|(&w, &c)| BigInt::from(w).pow(r) * BigInt::from(c))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteWeightEnumerator {
    pub p: u32,
    pub n: usize,
    /// Composition `(t_0, ..., t_{p-1})` to number of codewords.
    pub terms: BTreeMap<Vec<u32>, u64>,
}

impl CompleteWeightEnumerator {
    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }

    /// Weight distribution through `w = n - t_0`.
    pub fn marginal(&self, k: usize) -> WeightDistribution {
        let mut entries = BTreeMap::new();
        for (t, &c) in &self.terms {
            *entries.entry(self.n - t[0] as usize).or_insert(0) += c;
        }
        WeightDistribution {
            n: self.n,
            k,
            entries,
        }
    }

    /// The enumerator of the scaled code: index `rho` moves to `lambda rho`.
    pub fn scaled(&self, lambda: u32) -> CompleteWeightEnumerator {
        let p = self.p as usize;
        let mut terms = BTreeMap::new();
        for (t, &c) in &self.terms {
            let mut s = vec![0u32; p];
            for (rho, &v) in t.iter().enumerate() {
                s[rho * lambda as usize % p] = v;
            }
            *terms.entry(s).or_insert(0) += c;
        }
        CompleteWeightEnumerator {
            p: self.p,
            n: self.n,
            terms,
        }
    }

    /// Renders `count*w0^t0*w1^t1...` terms separated by ` + `.
    pub fn render(&self) -> String {
        let mut out = Vec::new();
        for (t, c) in &self.terms {
            let mono: Vec<String> = t
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, e)| format!("w{i}^{e}"))
                .collect();
            if mono.is_empty() {
                out.push(c.to_string());
            } else {
                out.push(format!("{c}*{}", mono.join("*")));
            }
        }
        out.join(" + ")
    }
}

/// `m x n` matrix with entry `(j, i) = Tr(v_j d_i^2)`.
pub fn generator_matrix(
    ctx: &FieldCtx,
    ds: &DefiningSet,
    basis: &[FieldElement],
) -> Result<Vec<Vec<u32>>> {
    if basis.len() != ctx.m() {
        return Err(Error::NotABasis);
    }
    for v in basis {
        ctx.check(v)?;
    }
    let coords: Vec<Vec<u32>> = basis.iter().map(|v| v.coeffs().to_vec()).collect();
    if rank_mod_p(&coords, ctx.p()) != ctx.m() {
        return Err(Error::NotABasis);
    }
    let squares: Vec<FieldElement> = ds.elements.iter().map(|d| ctx.square(d)).collect();
    Ok(basis
        .iter()
        .map(|v| {
            squares
                .iter()
                .map(|d2| ctx.trace_linear(&ctx.mul(v, d2)))
                .collect()
        })
        .collect())
}

/// `1, x, ..., x^(m-1)`.
pub fn polynomial_basis(ctx: &FieldCtx) -> Vec<FieldElement> {
    (0..ctx.m())
        .map(|j| {
            let mut c = vec![0u32; ctx.m()];
            c[j] = 1;
            ctx.element(&c).expect("unit vector is a valid element")
        })
        .collect()
}

/// Rank over `GF(p)` by Gaussian elimination.
pub fn rank_mod_p(rows: &[Vec<u32>], p: u32) -> usize {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as u64 % p as u64).collect())
        .collect();
    let cols = a.first().map_or(0, |r| r.len());
    let pp = p as u64;
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = fp_inv(a[rank][col] as u32, p) as u64;
        for x in a[rank].iter_mut() {
            *x = *x * inv % pp;
        }
        for r in 0..a.len() {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col];
                let pivot = a[rank].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x = (*x + pp * pp - f * y) % pp;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Codeword of the message `coeffs` (row combination of the generator matrix).
pub fn encode(gen: &[Vec<u32>], coeffs: &[u32], p: u32) -> Vec<u32> {
    let n = gen.first().map_or(0, |r| r.len());
    let mut out = vec![0u32; n];
    for (row, &c) in gen.iter().zip(coeffs) {
        if c != 0 {
            for (o, &g) in out.iter_mut().zip(row) {
                *o = (*o + c * g) % p;
            }
        }
    }
    out
}

/// Calls `f(index, word)` for every `b`, where `index` is the enumeration index of `b`.
/// Words for consecutive values of the last coefficient are built incrementally.
pub fn for_each_codeword<F>(ctx: &FieldCtx, gen: &[Vec<u32>], mut f: F)
where
    F: FnMut(u64, &[u32]),
{
    let p = ctx.p();
    let m = ctx.m();
    let prefixes = ctx.order() / p as u64;
    for prefix in 0..prefixes {
        let mut word = prefix_word(gen, prefix, p, m);
        for last in 0..p as u64 {
            if last > 0 {
                add_row(&mut word, &gen[m - 1], p);
            }
            f(prefix * p as u64 + last, &word);
        }
    }
}

fn prefix_word(gen: &[Vec<u32>], prefix: u64, p: u32, m: usize) -> Vec<u32> {
    let mut coeffs = vec![0u32; m];
    let mut rest = prefix;
    for j in (0..m - 1).rev() {
        coeffs[j] = (rest % p as u64) as u32;
        rest /= p as u64;
    }
    encode(gen, &coeffs, p)
}

fn add_row(word: &mut [u32], row: &[u32], p: u32) {
    for (w, &g) in word.iter_mut().zip(row) {
        *w += g;
        if *w >= p {
            *w -= p;
        }
    }
}

/// Enumerates all `p^m` codewords in parallel and tallies compositions.
pub fn enumerate_code(
    ctx: &FieldCtx,
    a: &FieldElement,
    bounds: &Bounds,
) -> Result<(WeightDistribution, CompleteWeightEnumerator)> {
    guard(ctx.order(), bounds.max_field)?;
    let ds = defining_set(ctx, a)?;
    let gen = generator_matrix(ctx, &ds, &polynomial_basis(ctx))?;
    let p = ctx.p();
    let m = ctx.m();
    let n = ds.len();
    let prefixes = ctx.order() / p as u64;
    let (terms, kernel) = (0..prefixes)
        .into_par_iter()
        .fold(
            || (HashMap::<Vec<u32>, u64>::new(), 0u64),
            |(mut acc, mut kernel), prefix| {
                let mut word = prefix_word(&gen, prefix, p, m);
                for last in 0..p {
                    if last > 0 {
                        add_row(&mut word, &gen[m - 1], p);
                    }
                    let t = composition(&word, p);
                    if t[0] as usize == n && (prefix > 0 || last > 0) {
                        kernel += 1;
                    }
                    *acc.entry(t).or_insert(0) += 1;
                }
                (acc, kernel)
            },
        )
        .reduce(
            || (HashMap::new(), 0),
            |(mut x, kx), (y, ky)| {
                for (t, c) in y {
                    *x.entry(t).or_insert(0) += c;
                }
                (x, kx + ky)
            },
        );
    if kernel > 0 {
        return Err(Error::DimensionMismatch { kernel: kernel + 1 });
    }
    let cwe = CompleteWeightEnumerator {
        p,
        n,
        terms: terms.into_iter().collect(),
    };
    let wd = cwe.marginal(m);
    Ok((wd, cwe))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DualMethod {
    Columns,
    Moments,
}

/// `A_1`, `A_2`, `A_3` of the dual code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualLowWeights {
    pub a1: u64,
    pub a2: u64,
    pub a3: u64,
    pub method: DualMethod,
}

impl DualLowWeights {
    pub fn same_counts(&self, other: &DualLowWeights) -> bool {
        (self.a1, self.a2, self.a3) == (other.a1, other.a2, other.a3)
    }
}

/// First nonzero coefficient scaled to 1.
fn projective_rep(ctx: &FieldCtx, x: &FieldElement) -> FieldElement {
    match x.coeffs().iter().find(|&&c| c != 0) {
        Some(&c) => ctx.scale(fp_inv(c, ctx.p()), x),
        None => x.clone(),
    }
}

/// Dual low-weight counts from the columns `Tr(v_j d_i^2)`, working with
/// `d_i^2` directly since the trace coordinate map is invertible.
pub fn dual_low_weights_columns(
    ctx: &FieldCtx,
    a: &FieldElement,
    bounds: &Bounds,
) -> Result<DualLowWeights> {
    let ds = defining_set(ctx, a)?;
    let n = ds.len();
    guard(n as u64, bounds.max_triple_n as u64)?;
    let p = ctx.p() as u64;
    let cols: Vec<FieldElement> = ds.elements.iter().map(|d| ctx.square(d)).collect();
    let reps: Vec<FieldElement> = cols.iter().map(|c| projective_rep(ctx, c)).collect();

    let zero_cols = cols.iter().filter(|c| c.is_zero()).count() as u64;
    let mut classes: HashMap<&FieldElement, Vec<usize>> = HashMap::new();
    for (i, r) in reps.iter().enumerate() {
        if !cols[i].is_zero() {
            classes.entry(r).or_default().push(i);
        }
    }
    let choose = |k: u64, r: u64| -> u64 {
        match r {
            2 => k * k.saturating_sub(1) / 2,
            _ => k * k.saturating_sub(1) * k.saturating_sub(2) / 6,
        }
    };
    let prop_pairs: u64 = classes.values().map(|v| choose(v.len() as u64, 2)).sum();
    let prop_triples: u64 = classes.values().map(|v| choose(v.len() as u64, 3)).sum();

    // triples with pairwise non-proportional columns and a dependency
    // d_i^2 + beta d_j^2 + gamma d_k^2 = 0, counted once via i < j < k
    let general: u64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut count = 0u64;
            if cols[i].is_zero() {
                return 0;
            }
            for j in i + 1..n {
                if cols[j].is_zero() || reps[i] == reps[j] {
                    continue;
                }
                for beta in 1..p as u32 {
                    let y = ctx.neg(&ctx.add(&cols[i], &ctx.scale(beta, &cols[j])));
                    if let Some(ks) = classes.get(&projective_rep(ctx, &y)) {
                        count += ks.iter().filter(|&&k| k > j).count() as u64;
                    }
                }
            }
            count
        })
        .sum();

    Ok(DualLowWeights {
        a1: (p - 1) * zero_cols,
        a2: (p - 1) * prop_pairs,
        a3: (p - 1) * general + (p - 1) * (p - 2) * prop_triples,
        method: DualMethod::Columns,
    })
}

fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn to_count(x: &BigRational, what: &str) -> Result<u64> {
    if !x.is_integer() || x.is_negative() {
        return Err(Error::InconsistentMoments(format!("{what} = {x}")));
    }
    x.to_integer()
        .to_u64()
        .ok_or_else(|| Error::InconsistentMoments(format!("{what} = {x} overflows")))
}

/// Solves the first four power moment identities for `A_1`, `A_2`, `A_3`
/// of the dual, exactly.
pub fn dual_low_weights_moments(wd: &WeightDistribution, p: u32) -> Result<DualLowWeights> {
    let k = wd.k as i32;
    let n = big(wd.n as i64);
    let pr = big(p as i64);
    let total = wd.total();
    let p_k = BigInt::from(p).pow(wd.k as u32);
    if BigInt::from(total) != p_k {
        return Err(Error::InconsistentMoments(format!(
            "sum of A_w is {total}, expected {p_k}"
        )));
    }
    let pw = |e: i32| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(BigInt::from(p).pow(e as u32))
        } else {
            BigRational::from_integer(BigInt::from(1))
                / BigRational::from_integer(BigInt::from(p).pow((-e) as u32))
        }
    };
    let s1 = BigRational::from_integer(wd.moment(1));
    let s2 = BigRational::from_integer(wd.moment(2));
    let s3 = BigRational::from_integer(wd.moment(3));
    let one = big(1);
    let two = big(2);
    let three = big(3);
    let six = big(6);
    let pn = &pr * &n;

    let a1 = (pw(k - 1) * (&pn - &n) - &s1) / pw(k - 1);
    let a2 = (&s2 / pw(k - 2) - (&pr - &one) * &n * (&pn - &n + &one)
        + (&two * &pn - &pr - &two * &n + &two) * &a1)
        / &two;
    let c0 = (&pr - &one)
        * &n
        * (&pr * &pr * &n * &n - &two * &pr * &n * &n + &three * &pn - &pr + &n * &n - &three * &n
            + &two);
    let c1 = &three * &pr * &pr * &n * &n - &three * &pr * &pr * &n - big(6) * &pr * &n * &n
        + big(12) * &pn
        + &pr * &pr
        - big(6) * &pr
        + &three * &n * &n
        - big(9) * &n
        + big(6);
    let c2 = &six * (&pn - &pr - &n + &two);
    let a3 = (c0 - c1 * &a1 + c2 * &a2 - &s3 / pw(k - 3)) / &six;
    Ok(DualLowWeights {
        a1: to_count(&a1, "A1")?,
        a2: to_count(&a2, "A2")?,
        a3: to_count(&a3, "A3")?,
        method: DualMethod::Moments,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DualDistance {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = ">3")]
    MoreThanThree,
}

impl std::fmt::Display for DualDistance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DualDistance::One => "1",
            DualDistance::Two => "2",
            DualDistance::Three => "3",
            DualDistance::MoreThanThree => ">3",
        })
    }
}

pub fn min_distance(wd: &WeightDistribution) -> Option<usize> {
    wd.min_distance()
}

pub fn dual_min_distance_upto3(d: &DualLowWeights) -> DualDistance {
    if d.a1 > 0 {
        DualDistance::One
    } else if d.a2 > 0 {
        DualDistance::Two
    } else if d.a3 > 0 {
        DualDistance::Three
    } else {
        DualDistance::MoreThanThree
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, m: usize) -> FieldCtx {
        FieldCtx::new(p, m, None).unwrap()
    }

    #[test]
    fn defining_set_sizes() {
        let c = f(3, 3);
        let ds = defining_set(&c, &c.generator()).unwrap();
        assert_eq!(ds.len(), 3);
        for x in &ds.elements {
            assert_eq!(c.trace(x).unwrap().value(), 1);
            assert_eq!(c.trace(&c.mul(&ds.a, x)).unwrap().value(), 0);
        }
        assert_eq!(defining_set(&c, &c.one()), Err(Error::AInPrimeField));
        let small = f(3, 2);
        assert_eq!(
            defining_set(&small, &small.generator()),
            Err(Error::DegreeTooSmall(2))
        );
    }

    #[test]
    fn odd_m_table_values() {
        let c = f(3, 5);
        let (wd, cwe) = enumerate_code(&c, &c.generator(), &Bounds::default()).unwrap();
        let want: BTreeMap<usize, u64> = [(0, 1), (15, 60), (18, 116), (21, 66)]
            .into_iter()
            .collect();
        assert_eq!(wd.entries, want);
        assert_eq!(cwe.total(), 243);
        assert_eq!(cwe.marginal(5), wd);
    }

    #[test]
    fn encoding_matches_trace_definition() {
        let c = f(3, 4);
        let a = c.element(&[0, 1, 1, 0]).unwrap();
        let ds = defining_set(&c, &a).unwrap();
        let gen = generator_matrix(&c, &ds, &polynomial_basis(&c)).unwrap();
        assert_eq!(rank_mod_p(&gen, 3), 4);
        for_each_codeword(&c, &gen, |idx, w| {
            let b = c.element_at(idx);
            assert_eq!(w, codeword(&c, &ds, &b).unwrap().as_slice());
        });
    }

    #[test]
    fn non_basis_rejected() {
        let c = f(3, 3);
        let ds = defining_set(&c, &c.generator()).unwrap();
        let bad = vec![c.one(), c.from_prime(2), c.generator()];
        assert_eq!(generator_matrix(&c, &ds, &bad), Err(Error::NotABasis));
    }

    #[test]
    fn rank_oracle() {
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 1]], 3), 1);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 2]], 3), 2);
        assert_eq!(rank_mod_p(&[vec![0, 0]], 5), 0);
    }

    #[test]
    fn too_large_guard() {
        let c = f(3, 5);
        let b = Bounds {
            max_field: 100,
            ..Bounds::default()
        };
        assert_eq!(
            enumerate_code(&c, &c.generator(), &b),
            Err(Error::TooLarge {
                size: 243,
                bound: 100
            })
        );
    }

    #[test]
    fn dual_methods_agree_odd_m() {
        let c = f(3, 5);
        let a = c.generator();
        let (wd, _) = enumerate_code(&c, &a, &Bounds::default()).unwrap();
        let mo = dual_low_weights_moments(&wd, 3).unwrap();
        let co = dual_low_weights_columns(&c, &a, &Bounds::default()).unwrap();
        assert!(mo.same_counts(&co), "{mo:?} {co:?}");
        assert_eq!((co.a1, co.a2), (0, 0));
        assert_eq!(dual_min_distance_upto3(&co), DualDistance::Three);
    }

    #[test]
    fn dual_methods_agree_with_proportional_columns() {
        let c = f(3, 6);
        let a = c.nonzero_elements().find(|x| c.degree_of(x) == 3).unwrap();
        let (wd, _) = enumerate_code(&c, &a, &Bounds::default()).unwrap();
        let mo = dual_low_weights_moments(&wd, 3).unwrap();
        let co = dual_low_weights_columns(&c, &a, &Bounds::default()).unwrap();
        assert!(mo.same_counts(&co), "{mo:?} {co:?}");
        assert_eq!(co.a2, 18);
        assert_eq!(dual_min_distance_upto3(&co), DualDistance::Two);
    }

    #[test]
    fn moments_of_full_space() {
        // GF(3)^3 itself: weights by binomial counts
        let entries: BTreeMap<usize, u64> = [(0, 1), (1, 6), (2, 12), (3, 8)].into_iter().collect();
        let wd = WeightDistribution {
            n: 3,
            k: 3,
            entries,
        };
        let d = dual_low_weights_moments(&wd, 3).unwrap();
        assert_eq!((d.a1, d.a2, d.a3), (0, 0, 0));
        assert_eq!(dual_min_distance_upto3(&d), DualDistance::MoreThanThree);
    }

    #[test]
    fn moments_reject_bad_distribution() {
        let entries: BTreeMap<usize, u64> = [(0, 1), (1, 7), (2, 1)].into_iter().collect();
        let wd = WeightDistribution {
            n: 3,
            k: 2,
            entries,
        };
        assert!(matches!(
            dual_low_weights_moments(&wd, 3),
            Err(Error::InconsistentMoments(_))
        ));
    }

    #[test]
    fn scaling_and_render() {
        let c = f(3, 3);
        let (_, cwe) = enumerate_code(&c, &c.generator(), &Bounds::default()).unwrap();
        assert_eq!(cwe.scaled(2), cwe);
        assert!(cwe.render().split(" + ").any(|t| t == "1*w0^3"));
    }
}
