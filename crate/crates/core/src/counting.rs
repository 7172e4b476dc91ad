//! The counts `N_a(b, rho)`, the case split of `b`, the region sizes
//! `|M1|..|M4|` and the auxiliary counts `T_a`, `L_a`, each by enumeration and
//! in closed form.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charsum::{numeric_scale, quadratic_relation};
use crate::error::{Error, Result};
use crate::field::{fp_inv, legendre, FieldCtx, FieldElement};
use crate::gauss::{pow_i, rat, rat_to_int, ComplexApprox, GaussValue, Rat, REL_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
    Case4,
}

/// Trace data of `b^-1` that decides the shape of `N_a(b, .)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BCase {
    /// `Tr(b^-1)`
    pub tr_binv: u32,
    /// `Tr(a b^-1)`
    pub tr_abinv: u32,
    /// `Tr(a^2 b^-1)`
    pub tr_a2binv: u32,
    /// `(Tr(b^-1) Tr(a^2 b^-1) - Tr(a b^-1)^2) / Tr(a^2 b^-1)` when the denominator is nonzero.
    pub t_ab: Option<u32>,
    pub eta_b: i8,
    pub case_id: CaseId,
}

impl BCase {
    fn from_traces(p: u32, t0: u32, t1: u32, t2: u32, eta_b: i8) -> BCase {
        let pi = p as u64;
        let t_ab = (t2 != 0).then(|| {
            let num = (t0 as u64 * t2 as u64 + pi * pi - t1 as u64 * t1 as u64 % pi) % pi;
            (num * fp_inv(t2, p) as u64 % pi) as u32
        });
        let case_id = match t_ab {
            Some(0) => CaseId::Case1,
            Some(_) => CaseId::Case4,
            None if t1 != 0 => CaseId::Case3,
            None if t0 != 0 => CaseId::Case2,
            None => CaseId::Case1,
        };
        BCase {
            tr_binv: t0,
            tr_abinv: t1,
            tr_a2binv: t2,
            t_ab,
            eta_b,
            case_id,
        }
    }
}

fn require_a(ctx: &FieldCtx, a: &FieldElement) -> Result<()> {
    ctx.check(a)?;
    if ctx.is_prime_field_element(a) {
        return Err(Error::AInPrimeField);
    }
    Ok(())
}

fn require_b(ctx: &FieldCtx, b: &FieldElement) -> Result<()> {
    ctx.check(b)?;
    if b.is_zero() {
        return Err(Error::BZero);
    }
    Ok(())
}

fn check_rho(ctx: &FieldCtx, rho: u32) -> Result<()> {
    if rho >= ctx.p() {
        return Err(Error::CoefficientOutOfRange {
            value: rho as u64,
            p: ctx.p(),
        });
    }
    Ok(())
}

pub fn classify_b(ctx: &FieldCtx, a: &FieldElement, b: &FieldElement) -> Result<BCase> {
    require_a(ctx, a)?;
    require_b(ctx, b)?;
    let binv = ctx.inv(b)?;
    let ab = ctx.mul(a, &binv);
    let a2b = ctx.mul(a, &ab);
    Ok(BCase::from_traces(
        ctx.p(),
        ctx.trace_linear(&binv),
        ctx.trace_linear(&ab),
        ctx.trace_linear(&a2b),
        ctx.eta(b),
    ))
}

/// `|{x : Tr(b x^2) = rho, Tr(x) = 1, Tr(a x) = 0}|` by running over the whole field.
pub fn count_n_brute(ctx: &FieldCtx, a: &FieldElement, b: &FieldElement, rho: u32) -> Result<u64> {
    require_a(ctx, a)?;
    require_b(ctx, b)?;
    check_rho(ctx, rho)?;
    let mut count = 0;
    for x in ctx.elements() {
        if ctx.trace_linear(&x) == 1
            && ctx.trace_linear(&ctx.mul(a, &x)) == 0
            && ctx.trace_linear(&ctx.mul(b, &ctx.square(&x))) == rho
        {
            count += 1;
        }
    }
    Ok(count)
}

/// Reuses the set `{x : Tr(x) = 1, Tr(a x) = 0}` to histogram `Tr(b x^2)` for many `b`.
pub struct NCounter<'a> {
    ctx: &'a FieldCtx,
    squares: Vec<FieldElement>,
}

impl<'a> NCounter<'a> {
    pub fn new(ctx: &'a FieldCtx, a: &FieldElement) -> Result<Self> {
        require_a(ctx, a)?;
        let squares = ctx
            .elements()
            .filter(|x| ctx.trace_linear(x) == 1 && ctx.trace_linear(&ctx.mul(a, x)) == 0)
            .map(|x| ctx.square(&x))
            .collect();
        Ok(NCounter { ctx, squares })
    }

    /// `N_a(b, rho)` for every `rho`, indexed by `rho`.
    pub fn histogram(&self, b: &FieldElement) -> Vec<u64> {
        let mut h = vec![0u64; self.ctx.p() as usize];
        for x2 in &self.squares {
            h[self.ctx.trace_linear(&self.ctx.mul(b, x2)) as usize] += 1;
        }
        h
    }
}

/// Closed form of `N_a(b, rho)` for the case and parity of `m`, with all
/// Gauss-sum factors reduced exactly.
pub fn count_n_closed(
    ctx: &FieldCtx,
    a: &FieldElement,
    b: &FieldElement,
    rho: u32,
) -> Result<i128> {
    if ctx.m() < 3 {
        return Err(Error::DegreeTooSmall(ctx.m()));
    }
    check_rho(ctx, rho)?;
    let c = classify_b(ctx, a, b)?;
    n_closed_from_case(ctx, &c, rho)
}

pub fn n_closed_from_case(ctx: &FieldCtx, c: &BCase, rho: u32) -> Result<i128> {
    let p = ctx.p();
    let m = ctx.m();
    let pi = p as i64;
    let eta1 = |x: i64| legendre(x, p) as i64;
    let base = rat(pow_i(p, (m - 3) as u32));
    let gm = GaussValue::closed(p, m);
    let g1 = GaussValue::closed(p, 1);
    let eta_b = c.eta_b as i64;
    let (t0, t2) = (c.tr_binv as i64, c.tr_a2binv as i64);
    let rho_i = rho as i64;
    let value: Rat = if m % 2 == 1 {
        let x = (gm * g1).scale_p(-2).rational("G_m G_1 / p^2")?;
        match c.case_id {
            CaseId::Case1 => base,
            CaseId::Case2 => {
                let coef = rat((eta_b * eta1(-t0)) as i128) * x;
                if rho == fp_inv(c.tr_binv, p) {
                    base + coef * rat(pi as i128 - 1)
                } else {
                    base - coef
                }
            }
            CaseId::Case3 => {
                if rho == 0 {
                    base
                } else {
                    // the sign here follows direct evaluation of the character sum
                    base + rat((eta_b * eta1(-rho_i)) as i128) * x
                }
            }
            CaseId::Case4 => {
                let t = c.t_ab.unwrap();
                if rho == fp_inv(t, p) {
                    base
                } else {
                    let s = eta_b * eta1(t2) * eta1(t as i64 * rho_i - 1);
                    base + rat(s as i128) * x
                }
            }
        }
    } else {
        let y = gm.scale_p(-1).rational("G_m / p")?;
        let z = gm.scale_p(-2).rational("G_m / p^2")?;
        match c.case_id {
            CaseId::Case1 => base,
            CaseId::Case2 => {
                if rho == fp_inv(c.tr_binv, p) {
                    base
                } else {
                    base + rat((eta_b * eta1(1 - rho_i * t0)) as i128) * y
                }
            }
            CaseId::Case3 => {
                if rho == 0 {
                    base + rat((eta_b * (pi - 1)) as i128) * z
                } else {
                    base - rat(eta_b as i128) * z
                }
            }
            CaseId::Case4 => {
                let t = c.t_ab.unwrap();
                let s = eta1(-1) * eta_b * eta1(t2) * eta1(t as i64);
                if rho == fp_inv(t, p) {
                    base + rat((s * (pi - 1)) as i128) * z
                } else {
                    base - rat(s as i128) * z
                }
            }
        }
    };
    rat_to_int(value, "N_a(b, rho)")
}

/// Sizes of the regions `M1`, `M2(eps, gamma)`, `M3(eps)`, `M4(eps, gamma)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionSizes {
    pub m1: i128,
    pub m2: BTreeMap<(i8, u32), i128>,
    pub m3: BTreeMap<i8, i128>,
    pub m4: BTreeMap<(i8, u32), i128>,
}

impl RegionSizes {
    fn empty(p: u32) -> Self {
        let mut r = RegionSizes {
            m1: 0,
            m2: BTreeMap::new(),
            m3: BTreeMap::new(),
            m4: BTreeMap::new(),
        };
        for eps in [-1i8, 1] {
            r.m3.insert(eps, 0);
            for g in 1..p {
                r.m2.insert((eps, g), 0);
                r.m4.insert((eps, g), 0);
            }
        }
        r
    }

    pub fn total(&self) -> i128 {
        self.m1
            + self.m2.values().sum::<i128>()
            + self.m3.values().sum::<i128>()
            + self.m4.values().sum::<i128>()
    }
}

/// Trace triples `(Tr(b^-1), Tr(a b^-1), Tr(a^2 b^-1))` and `eta(b)` for every
/// nonzero `b`, in enumeration order, computed in parallel.
pub fn classify_all(ctx: &FieldCtx, a: &FieldElement) -> Result<Vec<BCase>> {
    require_a(ctx, a)?;
    let a2 = ctx.square(a);
    (1..ctx.order())
        .into_par_iter()
        .map(|i| {
            let b = ctx.element_at(i);
            let binv = ctx.inv(&b)?;
            Ok(BCase::from_traces(
                ctx.p(),
                ctx.trace_linear(&binv),
                ctx.trace_linear(&ctx.mul(a, &binv)),
                ctx.trace_linear(&ctx.mul(&a2, &binv)),
                ctx.eta(&b),
            ))
        })
        .collect()
}

pub fn region_sizes_brute(ctx: &FieldCtx, a: &FieldElement) -> Result<RegionSizes> {
    let p = ctx.p();
    let mut r = RegionSizes::empty(p);
    for c in classify_all(ctx, a)? {
        match c.case_id {
            CaseId::Case1 => r.m1 += 1,
            CaseId::Case2 => *r.m2.get_mut(&(c.eta_b, c.tr_binv)).unwrap() += 1,
            CaseId::Case3 => *r.m3.get_mut(&c.eta_b).unwrap() += 1,
            CaseId::Case4 => {
                let eps = c.eta_b * legendre(c.tr_a2binv as i64, p);
                *r.m4.get_mut(&(eps, c.t_ab.unwrap())).unwrap() += 1;
            }
        }
    }
    Ok(r)
}

/// Closed forms of the region sizes from `I1(a)`, `I2(a)`.
pub fn region_sizes_closed(
    ctx: &FieldCtx,
    a: &FieldElement,
    i1: i64,
    i2: i64,
) -> Result<RegionSizes> {
    require_a(ctx, a)?;
    if ctx.m() < 3 {
        return Err(Error::DegreeTooSmall(ctx.m()));
    }
    let p = ctx.p();
    let m = ctx.m() as u32;
    let pi = p as i128;
    let odd = m % 2 == 1;
    let in_fp2 = !odd && ctx.in_subfield(a, 2)?;
    let eta_a = ctx.eta(a) as i128;
    let (i1, i2) = (i1 as i128, i2 as i128);
    let eta1 = |x: i64| legendre(x, p) as i128;
    let pw = |e: u32| rat(pow_i(p, e));
    let gm = GaussValue::closed(p, m as usize);
    let g1 = GaussValue::closed(p, 1);

    let mut r = RegionSizes::empty(p);
    r.m1 = if in_fp2 {
        pow_i(p, m - 2) - 1
    } else {
        pow_i(p, m - 1) - pow_i(p, m - 2) + pow_i(p, m - 3) - 1
    };

    for eps in [-1i8, 1] {
        let e = eps as i128;
        let m3 = if odd {
            rat(pi - 1) * pw(m - 2) / rat(2)
        } else {
            let g = gm.rational("G_m")?;
            rat(pi - 1) * (pw(m) + rat(e) * g * rat((pi - 1) - eta_a * i1)) / (rat(2) * pw(2))
        };
        r.m3.insert(eps, rat_to_int(m3, "|M3|")?);

        for gamma in 1..p {
            let gi = gamma as i64;
            let m2 = if odd {
                let g = (g1 * gm).rational("G_1 G_m")?;
                (pw(m) + rat(e * eta1(-gi) * i2) * g) / (rat(2) * pw(3))
            } else if in_fp2 {
                rat(0)
            } else {
                let g = gm.rational("G_m")?;
                let k = (pi - 1) * (1 + eta_a * i1) - i2;
                (pw(m) + rat(e * k) * g) / (rat(2) * pw(3))
            };
            r.m2.insert((eps, gamma), rat_to_int(m2, "|M2|")?);

            let m4 = if odd {
                let g = (g1 * gm).rational("G_1 G_m")?;
                (rat(pi - 1) * pw(m + 1) + rat(e * eta1(-1) * (i2 - pi)) * g) / (rat(2) * pw(3))
            } else {
                let g = gm.rational("G_m")?;
                let lead = if in_fp2 {
                    pw(m + 1)
                } else {
                    rat(pi - 1) * pw(m)
                };
                (lead + rat(e * eta1(-gi) * (pi * pi - i2)) * g) / (rat(2) * pw(2))
            };
            r.m4.insert((eps, gamma), rat_to_int(m4, "|M4|")?);
        }
    }
    Ok(r)
}

/// `(p - 1)(eta(a) I1 + 1) - I2`, which vanishes for even `m` and `a` in `GF(p^2) \ GF(p)`.
pub fn nonsquare_residual(ctx: &FieldCtx, a: &FieldElement, i1: i64, i2: i64) -> i64 {
    (ctx.p() as i64 - 1) * (ctx.eta(a) as i64 * i1 + 1) - i2
}

/// Counts of `T_a(gammas)` and optionally `L_a(eps, gammas)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxCounts {
    pub t_brute: u64,
    pub t_closed: i128,
    pub l_brute: Option<u64>,
    /// Numeric evaluation of the character-sum expression for `|L_a|`; only
    /// checked within the numeric tolerance, never symbolically.
    pub l_numeric: Option<ComplexApprox>,
}

impl AuxCounts {
    pub fn t_matches(&self) -> bool {
        self.t_brute as i128 == self.t_closed
    }

    pub fn l_matches(&self, ctx: &FieldCtx) -> bool {
        match (self.l_brute, self.l_numeric) {
            (Some(b), Some(n)) => {
                n.approx_eq(ComplexApprox::real(b as f64), REL_TOL, numeric_scale(ctx))
            }
            _ => true,
        }
    }
}

pub fn t_closed(ctx: &FieldCtx, a: &FieldElement, gammas: (u32, u32, u32)) -> Result<i128> {
    require_a(ctx, a)?;
    let p = ctx.p();
    let m = ctx.m() as u32;
    let zero = gammas == (0, 0, 0);
    if m.is_multiple_of(2) && ctx.in_subfield(a, 2)? {
        let (b1, b0) = quadratic_relation(ctx, a)?;
        let (g0, g1, g2) = gammas;
        let lin = (g2 as u64 + b1 as u64 * g1 as u64 + b0 as u64 * g0 as u64) % p as u64;
        Ok(if zero {
            pow_i(p, m - 2) - 1
        } else if lin == 0 {
            pow_i(p, m - 2)
        } else {
            0
        })
    } else {
        Ok(pow_i(p, m - 3) - if zero { 1 } else { 0 })
    }
}

/// Enumerates `T_a(gamma0, gamma1, gamma2)` (and `L_a(eps, ...)` when `eps` is
/// given) and evaluates the closed count and the character-sum expression.
pub fn aux_counts(
    ctx: &FieldCtx,
    a: &FieldElement,
    gammas: (u32, u32, u32),
    eps: Option<i8>,
) -> Result<AuxCounts> {
    require_a(ctx, a)?;
    let p = ctx.p();
    let (g0, g1, g2) = gammas;
    if g0 >= p || g1 >= p || g2 >= p {
        return Err(Error::InvalidArgument("gammas must lie in [0, p)".into()));
    }
    if let Some(e) = eps {
        if e != 1 && e != -1 {
            return Err(Error::InvalidArgument("eps must be +1 or -1".into()));
        }
    }
    let all = classify_all(ctx, a)?;
    let hits = all
        .iter()
        .filter(|c| (c.tr_binv, c.tr_abinv, c.tr_a2binv) == gammas);
    let mut t_brute = 0u64;
    let mut l_brute = 0u64;
    for c in hits {
        t_brute += 1;
        if Some(c.eta_b) == eps {
            l_brute += 1;
        }
    }
    let tc = t_closed(ctx, a, gammas)?;
    let l_numeric = eps.map(|e| {
        let a2 = ctx.square(a);
        let pi = p as i64;
        let mut hist = vec![0i64; p as usize];
        for z2 in 0..p {
            for z1 in 0..p {
                let base = ctx.add(&ctx.scale(z2, &a2), &ctx.scale(z1, a));
                for z0 in 0..p {
                    let v = ctx.eta(&ctx.add(&base, &ctx.from_prime(z0 as i64))) as i64;
                    let k =
                        -(g2 as i64 * z2 as i64 + g1 as i64 * z1 as i64 + g0 as i64 * z0 as i64);
                    hist[k.rem_euclid(pi) as usize] += v;
                }
            }
        }
        let s = ComplexApprox::from_zeta_histogram(p, &hist);
        let g = GaussValue::closed(p, ctx.m()).to_complex();
        let denom = 2.0 * (p as f64).powi(3);
        ComplexApprox::real(tc as f64 / 2.0) + (g * s).scale(e as f64 / denom)
    });
    Ok(AuxCounts {
        t_brute,
        t_closed: tc,
        l_brute: eps.map(|_| l_brute),
        l_numeric,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outside(ctx: &FieldCtx, want_fp2: Option<bool>) -> Vec<FieldElement> {
        ctx.nonzero_elements()
            .filter(|x| !ctx.is_prime_field_element(x))
            .filter(|x| match want_fp2 {
                None => true,
                Some(w) => ctx.in_subfield(x, 2).unwrap_or(false) == w,
            })
            .collect()
    }

    #[test]
    fn n_sums_to_defining_set_size() {
        let f = FieldCtx::new(3, 3, None).unwrap();
        let a = f.generator();
        for b in f.nonzero_elements() {
            let total: u64 = (0..3).map(|r| count_n_brute(&f, &a, &b, r).unwrap()).sum();
            assert_eq!(total, 3);
        }
    }

    #[test]
    fn closed_equals_brute_small_grid() {
        for (p, m) in [(3u32, 3usize), (3, 4), (5, 3)] {
            let f = FieldCtx::new(p, m, None).unwrap();
            let cands = outside(&f, None);
            for a in cands.iter().step_by(cands.len() / 3 + 1) {
                let counter = NCounter::new(&f, a).unwrap();
                for b in f.nonzero_elements() {
                    let h = counter.histogram(&b);
                    for rho in 0..p {
                        let closed = count_n_closed(&f, a, &b, rho).unwrap();
                        assert_eq!(
                            closed, h[rho as usize] as i128,
                            "p={p} m={m} b={b:?} rho={rho}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn counter_agrees_with_full_enumeration() {
        let f = FieldCtx::new(3, 4, None).unwrap();
        let a = outside(&f, Some(false))[0].clone();
        let counter = NCounter::new(&f, &a).unwrap();
        for b in f.nonzero_elements().step_by(7) {
            let h = counter.histogram(&b);
            for rho in 0..3 {
                assert_eq!(h[rho as usize], count_n_brute(&f, &a, &b, rho).unwrap());
            }
        }
    }

    #[test]
    fn classification_against_frobenius_traces() {
        let f = FieldCtx::new(3, 4, None).unwrap();
        let a = outside(&f, Some(false))[0].clone();
        for b in f.nonzero_elements().step_by(5) {
            let c = classify_b(&f, &a, &b).unwrap();
            let binv = f.inv(&b).unwrap();
            assert_eq!(c.tr_binv, f.trace(&binv).unwrap().value());
            assert_eq!(c.tr_abinv, f.trace(&f.mul(&a, &binv)).unwrap().value());
            assert_eq!(
                c.tr_a2binv,
                f.trace(&f.mul(&f.square(&a), &binv)).unwrap().value()
            );
            if c.tr_binv == 0 && c.tr_abinv == 0 && c.tr_a2binv == 0 {
                assert_eq!(c.case_id, CaseId::Case1);
            }
        }
    }

    #[test]
    fn errors() {
        let f = FieldCtx::new(3, 3, None).unwrap();
        let a = f.generator();
        assert_eq!(classify_b(&f, &a, &f.zero()), Err(Error::BZero));
        assert_eq!(
            classify_b(&f, &f.one(), &f.one()),
            Err(Error::AInPrimeField)
        );
        assert_eq!(
            count_n_brute(&f, &f.one(), &f.one(), 0),
            Err(Error::AInPrimeField)
        );
    }

    #[test]
    fn region_sizes_partition_and_match() {
        for (p, m) in [(3u32, 3usize), (3, 4), (5, 3), (5, 4)] {
            let f = FieldCtx::new(p, m, None).unwrap();
            for a in outside(&f, None).iter().step_by(7).take(6) {
                let brute = region_sizes_brute(&f, a).unwrap();
                assert_eq!(brute.total(), f.order() as i128 - 1);
                let i1 = crate::charsum::i1(&f, a).unwrap();
                let i2 = crate::charsum::i2(&f, a).unwrap();
                let closed = region_sizes_closed(&f, a, i1, i2).unwrap();
                assert_eq!(brute, closed, "p={p} m={m} a={a:?}");
            }
        }
    }

    #[test]
    fn region_examples() {
        let f = FieldCtx::new(3, 4, None).unwrap();
        let a = outside(&f, Some(true))[0].clone();
        let r = region_sizes_brute(&f, &a).unwrap();
        assert!(r.m2.values().all(|&v| v == 0));
        let g = FieldCtx::new(3, 5, None).unwrap();
        let r = region_sizes_brute(&g, &g.generator()).unwrap();
        assert_eq!(r.m3[&1], 27);
        assert_eq!(r.m3[&-1], 27);
        assert_eq!(r.m1, 81 - 27 + 9 - 1);
    }

    #[test]
    fn nonsquare_identity_even_m() {
        for (p, m) in [(3u32, 4usize), (5, 4)] {
            let f = FieldCtx::new(p, m, None).unwrap();
            for a in outside(&f, Some(true)) {
                let i1 = crate::charsum::i1(&f, &a).unwrap();
                let i2 = crate::charsum::i2(&f, &a).unwrap();
                assert_eq!(nonsquare_residual(&f, &a, i1, i2), 0);
            }
        }
    }

    #[test]
    fn aux_count_examples() {
        let f = FieldCtx::new(3, 5, None).unwrap();
        let a = f.generator();
        let c = aux_counts(&f, &a, (0, 0, 0), Some(1)).unwrap();
        assert_eq!(c.t_brute, 8);
        assert!(c.t_matches());
        assert!(c.l_matches(&f));
        let other = aux_counts(&f, &a, (0, 0, 0), Some(-1)).unwrap();
        assert_eq!(c.l_brute.unwrap() + other.l_brute.unwrap(), c.t_brute);

        let g = FieldCtx::new(3, 4, None).unwrap();
        let a = outside(&g, Some(true))[0].clone();
        let (b1, b0) = quadratic_relation(&g, &a).unwrap();
        for g0 in 0..3u32 {
            for g1 in 0..3u32 {
                for g2 in 0..3u32 {
                    let c = aux_counts(&g, &a, (g0, g1, g2), Some(1)).unwrap();
                    assert!(c.t_matches(), "{g0} {g1} {g2}");
                    assert!(c.l_matches(&g));
                    if (g0, g1, g2) != (0, 0, 0) && (g2 + b1 * g1 + b0 * g0) % 3 != 0 {
                        assert_eq!(c.t_brute, 0);
                    }
                }
            }
        }
    }
}
