//! Minimal codewords for secret sharing, and sum sets built from the
//! generator columns.

use std::collections::HashSet;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{guard, Bounds};
use crate::code::{
    defining_set, enumerate_code, for_each_codeword, generator_matrix, polynomial_basis,
    WeightDistribution,
};
use crate::error::{Error, Result};
use crate::field::{fp_inv, FieldCtx, FieldElement};
use crate::gauss::{rat, Rat};

/// Result of the exact test `w_min / w_max > (p - 1) / p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbRatio {
    pub passes: bool,
    pub w_min: usize,
    pub w_max: usize,
}

pub fn ab_ratio(wd: &WeightDistribution, p: u32) -> Result<AbRatio> {
    let (Some(w_min), Some(w_max)) = (wd.min_distance(), wd.max_weight()) else {
        return Err(Error::EmptyCode);
    };
    let passes = w_min as u128 * p as u128 > w_max as u128 * (p as u128 - 1);
    Ok(AbRatio {
        passes,
        w_min,
        w_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityReport {
    pub w_min: usize,
    pub w_max: usize,
    pub ab_ratio_passes: bool,
    pub exhaustive_checked: bool,
    pub non_minimal_count: u64,
}

impl MinimalityReport {
    /// False only when the ratio test passes but enumeration finds a non-minimal word.
    pub fn consistent(&self) -> bool {
        !(self.ab_ratio_passes && self.exhaustive_checked && self.non_minimal_count > 0)
    }
}

fn support(word: &[u32]) -> Vec<u64> {
    let mut s = vec![0u64; word.len().div_ceil(64)];
    for (i, &c) in word.iter().enumerate() {
        if c != 0 {
            s[i / 64] |= 1 << (i % 64);
        }
    }
    s
}

fn covers(big: &[u64], small: &[u64]) -> bool {
    big.iter().zip(small).all(|(b, s)| s & !b == 0)
}

/// Scales the first nonzero entry to 1.
fn normalize(word: &[u32], p: u32) -> Vec<u32> {
    match word.iter().find(|&&c| c != 0) {
        Some(&c) => {
            let inv = fp_inv(c, p) as u64;
            word.iter()
                .map(|&x| (x as u64 * inv % p as u64) as u32)
                .collect()
        }
        None => word.to_vec(),
    }
}

/// Number of nonzero words `c1` in the list whose support contains the
/// support of some nonzero `c2` that is not a multiple of `c1`.
/// The list is taken to be the whole code.
pub fn count_non_minimal(words: &[Vec<u32>], p: u32) -> u64 {
    let nonzero: Vec<&Vec<u32>> = words.iter().filter(|w| w.iter().any(|&c| c != 0)).collect();
    let supports: Vec<Vec<u64>> = nonzero.iter().map(|w| support(w)).collect();
    let classes: Vec<Vec<u32>> = nonzero.iter().map(|w| normalize(w, p)).collect();
    (0..nonzero.len())
        .into_par_iter()
        .filter(|&i| {
            (0..nonzero.len())
                .any(|j| classes[j] != classes[i] && covers(&supports[i], &supports[j]))
        })
        .count() as u64
}

pub fn minimal_codewords_exhaustive(
    ctx: &FieldCtx,
    a: &FieldElement,
    bounds: &Bounds,
) -> Result<MinimalityReport> {
    guard(ctx.order(), bounds.max_minimality)?;
    guard(ctx.order(), bounds.max_field)?;
    let (wd, _) = enumerate_code(ctx, a, bounds)?;
    let ab = ab_ratio(&wd, ctx.p())?;
    let ds = defining_set(ctx, a)?;
    let gen = generator_matrix(ctx, &ds, &polynomial_basis(ctx))?;
    let mut words = Vec::with_capacity(ctx.order() as usize);
    for_each_codeword(ctx, &gen, |_, w| words.push(w.to_vec()));
    Ok(MinimalityReport {
        w_min: ab.w_min,
        w_max: ab.w_max,
        ab_ratio_passes: ab.passes,
        exhaustive_checked: true,
        non_minimal_count: count_non_minimal(&words, ctx.p()),
    })
}

/// Ratio test always; the pairwise check only when `p^m` is within the bound.
pub fn minimality_report(
    ctx: &FieldCtx,
    a: &FieldElement,
    bounds: &Bounds,
) -> Result<MinimalityReport> {
    if ctx.order() <= bounds.max_minimality {
        return minimal_codewords_exhaustive(ctx, a, bounds);
    }
    let (wd, _) = enumerate_code(ctx, a, bounds)?;
    let ab = ab_ratio(&wd, ctx.p())?;
    Ok(MinimalityReport {
        w_min: ab.w_min,
        w_max: ab.w_max,
        ab_ratio_passes: ab.passes,
        exhaustive_checked: false,
        non_minimal_count: 0,
    })
}

/// `{lambda g_i}` with the generator columns `g_i`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Omega {
    pub p: u32,
    pub m: usize,
    pub vectors: Vec<Vec<u32>>,
    pub warnings: Vec<String>,
}

pub fn build_omega(
    ctx: &FieldCtx,
    a: &FieldElement,
    basis: Option<&[FieldElement]>,
) -> Result<Omega> {
    let m = ctx.m();
    let mut warnings = Vec::new();
    if m.is_multiple_of(2) {
        return Err(Error::OutOfRegime(format!(
            "sum-set construction needs odd m, got m = {m}"
        )));
    }
    if m == 3 {
        warnings.push(
            "m = 3: projectivity is not covered by the dual-distance statement (needs m >= 4)"
                .to_string(),
        );
    }
    let p = ctx.p();
    let ds = defining_set(ctx, a)?;
    let default_basis;
    let basis = match basis {
        Some(b) => b,
        None => {
            default_basis = polynomial_basis(ctx);
            &default_basis
        }
    };
    let gen = generator_matrix(ctx, &ds, basis)?;
    let cols: Vec<Vec<u32>> = (0..ds.len())
        .map(|i| gen.iter().map(|row| row[i]).collect())
        .collect();
    let mut classes = HashSet::new();
    for c in &cols {
        if c.iter().all(|&x| x == 0) || !classes.insert(normalize(c, p)) {
            return Err(Error::NotProjective);
        }
    }
    let mut vectors: Vec<Vec<u32>> = cols
        .iter()
        .flat_map(|c| (1..p).map(move |l| c.iter().map(|&x| x * l % p).collect::<Vec<u32>>()))
        .collect();
    vectors.sort();
    vectors.dedup();
    Ok(Omega {
        p,
        m,
        vectors,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumSetReport {
    pub omega_size: usize,
    pub s: u32,
    /// Representation count for nonzero `h` in `Omega`.
    pub sigma0: Option<u64>,
    /// Representation count for nonzero `h` outside `Omega`.
    pub sigma1: Option<u64>,
    pub is_sum_set: bool,
    /// Filled in by [`sum_set_pipeline`].
    pub lsss_preconditions: Option<bool>,
}

fn to_index(v: &[u32], p: u32) -> usize {
    v.iter()
        .fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

fn from_index(mut i: usize, p: u32, m: usize) -> Vec<u32> {
    let mut v = vec![0u32; m];
    for j in (0..m).rev() {
        v[j] = (i % p as usize) as u32;
        i /= p as usize;
    }
    v
}

/// Counts ordered representations `h = x_1 + ... + x_s` with all `x_i` in
/// `omega`, for every nonzero `h`, and checks they depend only on `h in omega`.
pub fn sum_set_check(
    omega: &[Vec<u32>],
    s: u32,
    p: u32,
    m: usize,
    bounds: &Bounds,
) -> Result<SumSetReport> {
    if s < 3 || s.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "s must be odd and > 1, got {s}"
        )));
    }
    let size = omega.len();
    let budget = (bounds.max_omega as u128).pow(2);
    if (size as u128).checked_pow(s - 1).is_none_or(|c| c > budget) {
        return Err(Error::BudgetExceeded(format!(
            "|Omega|^(s-1) with |Omega| = {size}, s = {s}"
        )));
    }
    let q = (p as usize).pow(m as u32);
    let mut member = vec![false; q];
    let mut idx = Vec::with_capacity(size);
    for v in omega {
        if v.len() != m || v.iter().any(|&c| c >= p) {
            return Err(Error::InvalidArgument(
                "omega vector outside GF(p)^m".into(),
            ));
        }
        let i = to_index(v, p);
        member[i] = true;
        idx.push(v.clone());
    }
    let sub = |x: &[u32], y: &[u32]| -> Vec<u32> {
        x.iter().zip(y).map(|(a, b)| (a + p - b) % p).collect()
    };

    let counts: Vec<u128> = if s == 3 {
        (1..q)
            .into_par_iter()
            .map(|h| {
                let hv = from_index(h, p, m);
                let mut c = 0u128;
                for x1 in &idx {
                    let r1 = sub(&hv, x1);
                    for x2 in &idx {
                        if member[to_index(&sub(&r1, x2), p)] {
                            c += 1;
                        }
                    }
                }
                c
            })
            .collect()
    } else {
        // iterated convolution with the indicator of omega
        let mut cur: Vec<u128> = member.iter().map(|&b| b as u128).collect();
        for _ in 1..s {
            let next: Vec<u128> = (0..q)
                .into_par_iter()
                .map(|h| {
                    let hv = from_index(h, p, m);
                    idx.iter().map(|x| cur[to_index(&sub(&hv, x), p)]).sum()
                })
                .collect();
            cur = next;
        }
        cur[1..].to_vec()
    };

    let mut sigma = [None::<u64>, None];
    for (k, &c) in counts.iter().enumerate() {
        let h = k + 1;
        let class = if member[h] { 0 } else { 1 };
        let c = c as u64;
        match sigma[class] {
            None => sigma[class] = Some(c),
            Some(expected) if expected != c => {
                return Err(Error::NotASumSet {
                    h: from_index(h, p, m),
                    count: c,
                    expected,
                });
            }
            _ => {}
        }
    }
    Ok(SumSetReport {
        omega_size: size,
        s,
        sigma0: sigma[0],
        sigma1: sigma[1],
        is_sum_set: true,
        lsss_preconditions: None,
    })
}

/// Checks of `w2 = n(p-1)/p` and `w1 + w3 = 2n(p-1)/p` for a three-weight code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LsssChecks {
    pub middle: bool,
    pub sum: bool,
}

impl LsssChecks {
    pub fn holds(&self) -> bool {
        self.middle && self.sum
    }
}

pub fn lsss_checks(wd: &WeightDistribution, n: usize, p: u32) -> Result<LsssChecks> {
    let w = wd.nonzero_weights();
    if w.len() != 3 {
        return Err(Error::NotThreeWeight(w.len()));
    }
    let target: Rat = rat(n as i128) * rat(p as i128 - 1) / rat(p as i128);
    Ok(LsssChecks {
        middle: rat(w[1] as i128) == target,
        sum: rat((w[0] + w[2]) as i128) == target * rat(2),
    })
}

pub fn lsss_preconditions(wd: &WeightDistribution, n: usize, p: u32) -> Result<bool> {
    Ok(lsss_checks(wd, n, p)?.holds())
}

/// `Omega`, the sum-set check and the weight preconditions for one code.
pub fn sum_set_pipeline(
    ctx: &FieldCtx,
    a: &FieldElement,
    s: u32,
    bounds: &Bounds,
) -> Result<(Omega, SumSetReport)> {
    let omega = build_omega(ctx, a, None)?;
    guard(omega.vectors.len() as u64, bounds.max_omega as u64)?;
    let mut report = sum_set_check(&omega.vectors, s, ctx.p(), ctx.m(), bounds)?;
    let (wd, _) = enumerate_code(ctx, a, bounds)?;
    report.lsss_preconditions = Some(lsss_preconditions(&wd, wd.n, ctx.p())?);
    Ok((omega, report))
}

/// True if `lambda * omega = omega` for every nonzero `lambda`.
pub fn is_scalar_stable(omega: &[Vec<u32>], p: u32) -> bool {
    let set: HashSet<&Vec<u32>> = omega.iter().collect();
    (2..p).all(|l| {
        omega
            .iter()
            .all(|v| set.contains(&v.iter().map(|&x| x * l % p).collect::<Vec<u32>>()))
    }) && omega.iter().all(|v| !v.iter().all(|x| x.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn wd_of(n: usize, k: usize, e: &[(usize, u64)]) -> WeightDistribution {
        WeightDistribution {
            n,
            k,
            entries: e.iter().copied().collect::<BTreeMap<_, _>>(),
        }
    }

    #[test]
    fn ratio_examples() {
        let w = wd_of(
            81,
            6,
            &[(0, 1), (48, 90), (51, 216), (54, 80), (57, 270), (60, 72)],
        );
        let r = ab_ratio(&w, 3).unwrap();
        assert!(r.passes);
        assert_eq!((r.w_min, r.w_max), (48, 60));
        let toy = wd_of(3, 2, &[(0, 1), (1, 4), (3, 4)]);
        assert!(!ab_ratio(&toy, 3).unwrap().passes);
        assert_eq!(ab_ratio(&wd_of(3, 0, &[(0, 1)]), 3), Err(Error::EmptyCode));
    }

    #[test]
    fn toy_code_with_non_minimal_word() {
        // span of (1,1,1) and (1,0,0) over GF(3)
        let mut words = Vec::new();
        for x in 0..3u32 {
            for y in 0..3u32 {
                words.push(vec![(x + y) % 3, x, x]);
            }
        }
        assert!(count_non_minimal(&words, 3) > 0);
    }

    #[test]
    fn multiples_do_not_count() {
        let words = vec![vec![0, 0], vec![1, 1], vec![2, 2]];
        assert_eq!(count_non_minimal(&words, 3), 0);
    }

    #[test]
    fn omega_odd_m() {
        let f = FieldCtx::new(3, 5, None).unwrap();
        let om = build_omega(&f, &f.generator(), None).unwrap();
        assert_eq!(om.vectors.len(), 54);
        assert!(is_scalar_stable(&om.vectors, 3));
        assert!(om.warnings.is_empty());
        let g = FieldCtx::new(3, 3, None).unwrap();
        assert_eq!(
            build_omega(&g, &g.generator(), None)
                .unwrap()
                .warnings
                .len(),
            1
        );
    }

    #[test]
    fn full_space_is_sum_set() {
        let all: Vec<Vec<u32>> = (1..9).map(|i| from_index(i, 3, 2)).collect();
        let r = sum_set_check(&all, 3, 3, 2, &Bounds::default()).unwrap();
        assert!(r.is_sum_set);
        assert_eq!(r.sigma1, None);
        let r5 = sum_set_check(&all, 5, 3, 2, &Bounds::default()).unwrap();
        assert!(r5.is_sum_set);
    }

    #[test]
    fn unstable_set_rejected() {
        let om = vec![vec![1, 0], vec![0, 1]];
        assert!(matches!(
            sum_set_check(&om, 3, 3, 2, &Bounds::default()),
            Err(Error::NotASumSet { .. })
        ));
        assert!(matches!(
            sum_set_check(&om, 2, 3, 2, &Bounds::default()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn iterated_convolution_matches_pair_method() {
        let f = FieldCtx::new(3, 5, None).unwrap();
        let om = build_omega(&f, &f.generator(), None).unwrap();
        let b = Bounds::default();
        let direct = sum_set_check(&om.vectors, 3, 3, 5, &b).unwrap();
        // s = 3 through the convolution branch
        let q = 243usize;
        let member: Vec<bool> = {
            let mut v = vec![false; q];
            for x in &om.vectors {
                v[to_index(x, 3)] = true;
            }
            v
        };
        let conv = |cur: &Vec<u64>| -> Vec<u64> {
            (0..q)
                .map(|h| {
                    let hv = from_index(h, 3, 5);
                    om.vectors
                        .iter()
                        .map(|x| {
                            let d: Vec<u32> =
                                hv.iter().zip(x).map(|(a, b)| (a + 3 - b) % 3).collect();
                            cur[to_index(&d, 3)]
                        })
                        .sum()
                })
                .collect()
        };
        let one: Vec<u64> = member.iter().map(|&b| b as u64).collect();
        let three = conv(&conv(&one));
        let in_o = (1..q).find(|&h| member[h]).unwrap();
        let out_o = (1..q).find(|&h| !member[h]).unwrap();
        assert_eq!(direct.sigma0, Some(three[in_o]));
        assert_eq!(direct.sigma1, Some(three[out_o]));
    }

    #[test]
    fn lsss_examples() {
        let w = wd_of(27, 5, &[(0, 1), (15, 60), (18, 116), (21, 66)]);
        assert!(lsss_preconditions(&w, 27, 3).unwrap());
        let bad = wd_of(3, 2, &[(0, 1), (1, 2), (2, 4), (4, 2)]);
        let c = lsss_checks(&bad, 3, 3).unwrap();
        assert!(!c.holds());
        assert!(!c.sum);
        let two = wd_of(3, 2, &[(0, 1), (1, 2)]);
        assert_eq!(
            lsss_preconditions(&two, 3, 3),
            Err(Error::NotThreeWeight(1))
        );
    }
}
