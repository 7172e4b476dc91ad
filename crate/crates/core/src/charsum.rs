//! Quadratic characters, Gauss and Weil sums, and the sums `I1(a)`, `I2(a)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{legendre, FieldCtx, FieldElement};
use crate::gauss::{ComplexApprox, GaussValue, REL_TOL};

/// Largest field for which Gauss sums are evaluated numerically.
pub const NUMERIC_LIMIT: u64 = 59_049;

/// Quadratic character by Euler's criterion, `eta(0) = 0`.
pub fn quadratic_character(ctx: &FieldCtx, x: &FieldElement) -> Result<i8> {
    ctx.check(x)?;
    if x.is_zero() {
        return Ok(0);
    }
    let r = ctx.pow(x, ((ctx.order() - 1) / 2) as i64)?;
    if r == ctx.one() {
        Ok(1)
    } else if r == ctx.neg(&ctx.one()) {
        Ok(-1)
    } else {
        Err(Error::Internal(format!(
            "x^((q-1)/2) = {:?} is not +-1",
            r.coeffs()
        )))
    }
}

pub fn gauss_sum_closed(p: u32, m: usize) -> GaussValue {
    GaussValue::closed(p, m)
}

/// `sum_x eta(x) zeta^Tr(x)` evaluated in floating point.
pub fn gauss_sum_numeric(ctx: &FieldCtx) -> Result<ComplexApprox> {
    if ctx.order() > NUMERIC_LIMIT {
        return Err(Error::TooLarge {
            size: ctx.order(),
            bound: NUMERIC_LIMIT,
        });
    }
    let mut hist = vec![0i64; ctx.p() as usize];
    for x in ctx.nonzero_elements() {
        hist[ctx.trace_linear(&x) as usize] += ctx.eta(&x) as i64;
    }
    Ok(ComplexApprox::from_zeta_histogram(ctx.p(), &hist))
}

/// Tolerance scale `p^(m/2)` for numeric comparisons in `GF(p^m)`.
pub fn numeric_scale(ctx: &FieldCtx) -> f64 {
    (ctx.p() as f64).powf(ctx.m() as f64 / 2.0)
}

pub fn within_tolerance(ctx: &FieldCtx, a: ComplexApprox, b: ComplexApprox) -> bool {
    a.approx_eq(b, REL_TOL, numeric_scale(ctx))
}

/// Both sides of the quadratic Weil sum identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeilSum {
    pub numeric: ComplexApprox,
    pub closed: ComplexApprox,
}

impl WeilSum {
    pub fn agrees(&self, ctx: &FieldCtx) -> bool {
        within_tolerance(ctx, self.numeric, self.closed)
    }
}

/// `sum_x chi(a2 x^2 + a1 x + a0)` and its closed form
/// `G_m eta(a2) chi(a0 - a1^2 / (4 a2))`.
pub fn weil_quadratic_sum(
    ctx: &FieldCtx,
    a2: &FieldElement,
    a1: &FieldElement,
    a0: &FieldElement,
) -> Result<WeilSum> {
    ctx.check(a2)?;
    ctx.check(a1)?;
    ctx.check(a0)?;
    if a2.is_zero() {
        return Err(Error::InvalidArgument(
            "leading coefficient a2 must be nonzero".into(),
        ));
    }
    let mut hist = vec![0i64; ctx.p() as usize];
    for x in ctx.elements() {
        let v = ctx.add(
            &ctx.add(&ctx.mul(a2, &ctx.square(&x)), &ctx.mul(a1, &x)),
            a0,
        );
        hist[ctx.trace_linear(&v) as usize] += 1;
    }
    let numeric = ComplexApprox::from_zeta_histogram(ctx.p(), &hist);
    let four_a2 = ctx.scale(4, a2);
    let shift = ctx.sub(a0, &ctx.mul(&ctx.square(a1), &ctx.inv(&four_a2)?));
    let tr = ctx.trace(&shift)?.value();
    let g = GaussValue::closed(ctx.p(), ctx.m()).to_complex();
    let closed = (g * ComplexApprox::zeta(ctx.p(), tr as i64)).scale(ctx.eta(a2) as f64);
    Ok(WeilSum { numeric, closed })
}

fn require_outside_prime_field(ctx: &FieldCtx, a: &FieldElement) -> Result<()> {
    ctx.check(a)?;
    if ctx.is_prime_field_element(a) {
        return Err(Error::AInPrimeField);
    }
    Ok(())
}

/// `I1(a) = sum_{z1} eta(z1 a + 1)`.
pub fn i1(ctx: &FieldCtx, a: &FieldElement) -> Result<i64> {
    require_outside_prime_field(ctx, a)?;
    let one = ctx.one();
    Ok((0..ctx.p())
        .map(|z1| ctx.eta(&ctx.add(&ctx.scale(z1, a), &one)) as i64)
        .sum())
}

/// `I2(a) = sum_{z2, z1} eta(z2 a^2 + z1 a + 1)`.
pub fn i2(ctx: &FieldCtx, a: &FieldElement) -> Result<i64> {
    require_outside_prime_field(ctx, a)?;
    let one = ctx.one();
    let a2 = ctx.square(a);
    let mut s = 0i64;
    for z2 in 0..ctx.p() {
        let base = ctx.add(&ctx.scale(z2, &a2), &one);
        for z1 in 0..ctx.p() {
            s += ctx.eta(&ctx.add(&base, &ctx.scale(z1, a))) as i64;
        }
    }
    Ok(s)
}

/// Which closed-form statement produced a prediction of `I1`, `I2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IClause {
    /// `s > 2`, `s | m/2`, `a` in `GF(p^s)` but not `GF(p^2)`.
    ProperSubfield { s: usize },
    /// `4 | m`, `a` in `GF(p^2) \ GF(p)`.
    FourDividesM,
    /// Even `m`, `a` in `GF(p^2) \ GF(p)`, `eta(a) = -1`.
    NonSquare,
    /// `m = 3`, where only `I2 = p` is predicted.
    DegreeThree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IPrediction {
    pub i1: Option<i64>,
    pub i2: i64,
    pub clause: IClause,
}

/// Smallest `s > 2` with `s | m/2` and `a` in `GF(p^s) \ GF(p^2)`.
pub fn proper_subfield_degree(ctx: &FieldCtx, a: &FieldElement) -> Result<Option<usize>> {
    let m = ctx.m();
    if !m.is_multiple_of(2) || ctx.in_subfield(a, 2)? {
        return Ok(None);
    }
    for s in 3..=m / 2 {
        if (m / 2).is_multiple_of(s) && ctx.in_subfield(a, s)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Closed-form values of `I1`, `I2` where a known statement applies.
pub fn predict_i(ctx: &FieldCtx, a: &FieldElement) -> Result<Option<IPrediction>> {
    require_outside_prime_field(ctx, a)?;
    let p = ctx.p() as i64;
    let m = ctx.m();
    if m == 3 {
        return Ok(Some(IPrediction {
            i1: None,
            i2: p,
            clause: IClause::DegreeThree,
        }));
    }
    if !m.is_multiple_of(2) {
        return Ok(None);
    }
    if ctx.in_subfield(a, 2)? {
        if m.is_multiple_of(4) {
            return Ok(Some(IPrediction {
                i1: Some(p),
                i2: p * p - 1,
                clause: IClause::FourDividesM,
            }));
        }
        if ctx.eta(a) == -1 {
            return Ok(Some(IPrediction {
                i1: Some(1),
                i2: 0,
                clause: IClause::NonSquare,
            }));
        }
        return Ok(None);
    }
    Ok(proper_subfield_degree(ctx, a)?.map(|s| IPrediction {
        i1: Some(p),
        i2: p * p,
        clause: IClause::ProperSubfield { s },
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharSumReport {
    pub i1: i64,
    pub i2: i64,
    pub eta_a: i8,
    pub prediction: Option<IPrediction>,
}

impl CharSumReport {
    /// True unless a prediction exists and disagrees with the computed sums.
    pub fn prediction_holds(&self) -> bool {
        match &self.prediction {
            None => true,
            Some(pr) => pr.i2 == self.i2 && pr.i1.is_none_or(|v| v == self.i1),
        }
    }
}

pub fn char_sum_report(ctx: &FieldCtx, a: &FieldElement) -> Result<CharSumReport> {
    Ok(CharSumReport {
        i1: i1(ctx, a)?,
        i2: i2(ctx, a)?,
        eta_a: ctx.eta(a),
        prediction: predict_i(ctx, a)?,
    })
}

/// Coefficients `(b1, b0)` with `a^2 + b1 a + b0 = 0`, `b0 != 0`, by exhaustive search.
pub fn quadratic_relation(ctx: &FieldCtx, a: &FieldElement) -> Result<(u32, u32)> {
    ctx.check(a)?;
    if ctx.is_prime_field_element(a) {
        return Err(Error::NoQuadraticRelation);
    }
    let a2 = ctx.square(a);
    for b1 in 0..ctx.p() {
        let partial = ctx.add(&a2, &ctx.scale(b1, a));
        for b0 in 1..ctx.p() {
            if ctx.add(&partial, &ctx.from_prime(b0 as i64)).is_zero() {
                return Ok((b1, b0));
            }
        }
    }
    Err(Error::NoQuadraticRelation)
}

/// `eta_m(z2 a^2 + z1 a + z0)` for all triples, indexed by `(z2 p + z1) p + z0`.
fn eta_triples(ctx: &FieldCtx, a: &FieldElement) -> Vec<i8> {
    let p = ctx.p();
    let a2 = ctx.square(a);
    let mut out = Vec::with_capacity((p * p * p) as usize);
    for z2 in 0..p {
        for z1 in 0..p {
            let base = ctx.add(&ctx.scale(z2, &a2), &ctx.scale(z1, a));
            for z0 in 0..p {
                out.push(ctx.eta(&ctx.add(&base, &ctx.from_prime(z0 as i64))));
            }
        }
    }
    out
}

/// Numeric value and closed form of one auxiliary triple sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumCheck {
    pub numeric: ComplexApprox,
    pub closed: ComplexApprox,
}

impl SumCheck {
    pub fn agrees(&self, ctx: &FieldCtx) -> bool {
        within_tolerance(ctx, self.numeric, self.closed)
    }
}

fn e_sum_over(
    ctx: &FieldCtx,
    gamma: u32,
    eta: &[i8],
    include: impl Fn(u32, u32, u32) -> bool,
) -> ComplexApprox {
    let p = ctx.p();
    let pi = p as i64;
    let mut hist = vec![0i64; p as usize];
    for g1 in 0..p {
        for g2 in 1..p {
            let chi = legendre(g2 as i64, p) as i64;
            let g2_inv = crate::field::fp_inv(g2, p) as i64;
            let c0 = ((g1 as i64 * g1 as i64 % pi) * g2_inv + gamma as i64) % pi;
            for z2 in 0..p {
                for z1 in 0..p {
                    for z0 in 0..p {
                        if !include(z0, z1, z2) {
                            continue;
                        }
                        let e = eta[((z2 * p + z1) * p + z0) as usize] as i64;
                        if e == 0 {
                            continue;
                        }
                        let k = -(g2 as i64 * z2 as i64 + g1 as i64 * z1 as i64 + c0 * z0 as i64);
                        hist[k.rem_euclid(pi) as usize] += chi * e;
                    }
                }
            }
        }
    }
    ComplexApprox::from_zeta_histogram(p, &hist)
}

/// `E1(gamma)` by direct summation, with its closed form
/// `eta_1(-gamma)(p^2 - I2) p` (even `m`) or `eta_1(-1)(I2 - p) G_1` (odd `m`).
pub fn e1_sum(ctx: &FieldCtx, a: &FieldElement, gamma: u32) -> Result<SumCheck> {
    require_outside_prime_field(ctx, a)?;
    let p = ctx.p();
    if gamma.is_multiple_of(p) {
        return Err(Error::InvalidArgument("gamma must be nonzero".into()));
    }
    let eta = eta_triples(ctx, a);
    let numeric = e_sum_over(ctx, gamma, &eta, |z0, z1, z2| (z0, z1, z2) != (0, 0, 0));
    let i2v = i2(ctx, a)?;
    let pi = p as i64;
    let closed = if ctx.m().is_multiple_of(2) {
        ComplexApprox::real((legendre(-(gamma as i64), p) as i64 * (pi * pi - i2v) * pi) as f64)
    } else {
        GaussValue::closed(p, 1)
            .to_complex()
            .scale((legendre(-1, p) as i64 * (i2v - pi)) as f64)
    };
    Ok(SumCheck { numeric, closed })
}

/// `E2(gamma)`, defined for even `m` and `a` in `GF(p^2) \ GF(p)`; its closed form is 0.
pub fn e2_sum(ctx: &FieldCtx, a: &FieldElement, gamma: u32) -> Result<SumCheck> {
    require_outside_prime_field(ctx, a)?;
    if !ctx.m().is_multiple_of(2) || !ctx.in_subfield(a, 2)? {
        return Err(Error::NoQuadraticRelation);
    }
    let p = ctx.p();
    if gamma.is_multiple_of(p) {
        return Err(Error::InvalidArgument("gamma must be nonzero".into()));
    }
    let (b1, b0) = quadratic_relation(ctx, a)?;
    let eta = eta_triples(ctx, a);
    let numeric = e_sum_over(ctx, gamma, &eta, |z0, z1, z2| {
        z1 == z2 * b1 % p && z0 == z2 * b0 % p
    });
    Ok(SumCheck {
        numeric,
        closed: ComplexApprox::ZERO,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ESums {
    pub e1: SumCheck,
    pub e2: Option<SumCheck>,
}

/// Both auxiliary sums; `e2` is present only where it is defined.
pub fn e_sums(ctx: &FieldCtx, a: &FieldElement, gamma: u32) -> Result<ESums> {
    let e1 = e1_sum(ctx, a, gamma)?;
    let e2 = match e2_sum(ctx, a, gamma) {
        Ok(s) => Some(s),
        Err(Error::NoQuadraticRelation) => None,
        Err(e) => return Err(e),
    };
    Ok(ESums { e1, e2 })
}
