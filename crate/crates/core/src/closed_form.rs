//! Regime classification of `(p, m, a)` and the predicted weight distribution,
//! complete weight enumerator and dual parameters for each regime.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::charsum::{i1, i2, proper_subfield_degree};
use crate::code::{CompleteWeightEnumerator, DualDistance, WeightDistribution};
use crate::error::{Error, Result};
use crate::field::{legendre, FieldCtx, FieldElement};
use crate::gauss::{pow_i, pow_rat, rat, rat_to_int, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseLabel {
    /// Odd `m`.
    #[serde(rename = "T1_oddM")]
    T1OddM,
    /// Even `m`, `a` in `GF(p^2) \ GF(p)`.
    #[serde(rename = "T2_evenM_aInFp2")]
    T2EvenMAInFp2,
    /// Even `m`, `a` outside `GF(p^2)`.
    #[serde(rename = "T3_evenM_aNotInFp2")]
    T3EvenMANotInFp2,
    /// `4 | m`, `a` in `GF(p^2) \ GF(p)`.
    #[serde(rename = "C2_4divM_aInFp2")]
    C24DivMAInFp2,
    /// `s > 2`, `s | m/2`, `a` in `GF(p^s) \ GF(p^2)`.
    #[serde(rename = "C3_sDivHalfM")]
    C3SDivHalfM,
    /// Even `m`, `a` in `GF(p^2) \ GF(p)` with `eta(a) = -1`.
    #[serde(rename = "C4_etaMinus1")]
    C4EtaMinus1,
    /// `m = 3`.
    #[serde(rename = "MDS_m3")]
    MdsM3,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::T1OddM => "T1_oddM",
            CaseLabel::T2EvenMAInFp2 => "T2_evenM_aInFp2",
            CaseLabel::T3EvenMANotInFp2 => "T3_evenM_aNotInFp2",
            CaseLabel::C24DivMAInFp2 => "C2_4divM_aInFp2",
            CaseLabel::C3SDivHalfM => "C3_sDivHalfM",
            CaseLabel::C4EtaMinus1 => "C4_etaMinus1",
            CaseLabel::MdsM3 => "MDS_m3",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCase {
    /// Most specific applicable regime.
    pub label: CaseLabel,
    /// The general regime for the parity of `m` and the position of `a`.
    pub general: CaseLabel,
    pub p: u32,
    pub m: usize,
    pub s: Option<usize>,
    pub eta_a: i8,
    pub i1: i64,
    pub i2: i64,
}

impl TheoremCase {
    /// The same parameters under a different label.
    pub fn with_label(&self, label: CaseLabel) -> TheoremCase {
        TheoremCase { label, ..*self }
    }
}

pub fn classify_case(ctx: &FieldCtx, a: &FieldElement) -> Result<TheoremCase> {
    ctx.check(a)?;
    if ctx.is_prime_field_element(a) {
        return Err(Error::AInPrimeField);
    }
    let m = ctx.m();
    if m < 3 {
        return Err(Error::DegreeTooSmall(m));
    }
    let eta_a = ctx.eta(a);
    let (i1v, i2v) = (i1(ctx, a)?, i2(ctx, a)?);
    let mut s = None;
    let (label, general) = if m % 2 == 1 {
        let label = if m == 3 {
            CaseLabel::MdsM3
        } else {
            CaseLabel::T1OddM
        };
        (label, CaseLabel::T1OddM)
    } else if ctx.in_subfield(a, 2)? {
        let label = if m.is_multiple_of(4) {
            CaseLabel::C24DivMAInFp2
        } else if eta_a == -1 {
            CaseLabel::C4EtaMinus1
        } else {
            CaseLabel::T2EvenMAInFp2
        };
        (label, CaseLabel::T2EvenMAInFp2)
    } else {
        s = proper_subfield_degree(ctx, a)?;
        let label = if s.is_some() {
            CaseLabel::C3SDivHalfM
        } else {
            CaseLabel::T3EvenMANotInFp2
        };
        (label, CaseLabel::T3EvenMANotInFp2)
    };
    Ok(TheoremCase {
        label,
        general,
        p: ctx.p(),
        m,
        s,
        eta_a,
        i1: i1v,
        i2: i2v,
    })
}

/// Weight distribution, complete weight enumerator and the regime that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedTables {
    pub wd: WeightDistribution,
    pub cwe: CompleteWeightEnumerator,
    pub source: CaseLabel,
}

pub fn predict(case: &TheoremCase) -> Result<PredictedTables> {
    Ok(PredictedTables {
        wd: predict_wd(case)?,
        cwe: predict_cwe(case)?,
        source: case.label,
    })
}

struct Params {
    p: u32,
    m: u32,
    pr: Rat,
    n: i128,
    q: i128,
    eta: Rat,
    i1: Rat,
    i2: Rat,
}

impl Params {
    fn new(c: &TheoremCase) -> Result<Params> {
        if c.m < 3 {
            return Err(Error::DegreeTooSmall(c.m));
        }
        let odd = c.m % 2 == 1;
        let needs_odd = matches!(c.label, CaseLabel::T1OddM | CaseLabel::MdsM3);
        if odd != needs_odd || (c.label == CaseLabel::MdsM3 && c.m != 3) {
            return Err(Error::OutOfRegime(format!(
                "{} does not apply to m = {}",
                c.label, c.m
            )));
        }
        let m = c.m as u32;
        Ok(Params {
            p: c.p,
            m,
            pr: rat(c.p as i128),
            n: pow_i(c.p, m - 2),
            q: pow_i(c.p, m - 3),
            eta: rat(c.eta_a as i128),
            i1: rat(c.i1 as i128),
            i2: rat(c.i2 as i128),
        })
    }

    /// `p^(k/2)` for even `k`, which may be negative.
    fn ph(&self, k: i32) -> Rat {
        debug_assert!(k % 2 == 0);
        pow_rat(self.p, k / 2)
    }

    fn pw(&self, k: u32) -> Rat {
        rat(pow_i(self.p, k))
    }

    fn exp(&self, r: Rat) -> Result<i128> {
        rat_to_int(r, "weight")
    }
}

fn half() -> Rat {
    Rat::new(1, 2)
}

fn to_frequency(r: Rat, what: &str) -> Result<u64> {
    if !r.denom().is_one() {
        return Err(Error::NonIntegerFrequency(format!("{what} = {r}")));
    }
    if r.is_negative() {
        return Err(Error::NegativeFrequency(format!("{what} = {r}")));
    }
    Ok(*r.numer() as u64)
}

fn build_wd(p: &Params, rows: Vec<(Rat, Rat)>) -> Result<WeightDistribution> {
    let mut acc: BTreeMap<i128, Rat> = BTreeMap::new();
    acc.insert(0, Rat::one());
    for (w, f) in rows {
        let w = p.exp(w)?;
        if w < 0 || w > p.n {
            return Err(Error::OutOfRegime(format!(
                "weight {w} outside [0, {}]",
                p.n
            )));
        }
        *acc.entry(w).or_insert_with(Rat::zero) += f;
    }
    let mut entries = BTreeMap::new();
    for (w, f) in acc {
        entries.insert(w as usize, to_frequency(f, &format!("A_{w}"))?);
    }
    Ok(WeightDistribution {
        n: p.n as usize,
        k: p.m as usize,
        entries,
    })
}

/// Predicted weight distribution from the table of the case's label.
/// Rows whose frequency evaluates to zero are kept, so vanishing rows are visible.
pub fn predict_wd(case: &TheoremCase) -> Result<WeightDistribution> {
    let p = Params::new(case)?;
    let (pr, n, q) = (p.pr, rat(p.n), rat(p.q));
    let m = p.m as i32;
    let one = Rat::one();
    let pm2 = p.pw(p.m - 2);
    let pm1 = p.pw(p.m - 1);
    let rows: Vec<(Rat, Rat)> = match case.label {
        CaseLabel::T1OddM | CaseLabel::MdsM3 => {
            let e = p.ph(m - 3);
            vec![
                (n - q - e, half() * (pr - one) * ((pr - one) * pm2 + q - e)),
                (n - q, rat(2) * (pr - one) * pm2 + q - one),
                (n - q + e, half() * (pr - one) * ((pr - one) * pm2 + q + e)),
            ]
        }
        CaseLabel::T2EvenMAInFp2 => {
            let e = p.ph(m - 4);
            let k1 = (pr - one) - p.eta * p.i1;
            let k2 = pr * pr - p.i2;
            vec![
                (n - q - (pr - one) * e, half() * (pr - one) * (pm2 + e * k1)),
                (n - q - e, half() * (pr - one) * (pm1 - e * k2)),
                (n - q, pm2 - one),
                (n - q + e, half() * (pr - one) * (pm1 + e * k2)),
                (n - q + (pr - one) * e, half() * (pr - one) * (pm2 - e * k1)),
            ]
        }
        CaseLabel::T3EvenMANotInFp2 => {
            let e = p.ph(m - 4);
            let f = p.ph(m - 2);
            let g = p.ph(m - 6);
            let k1 = (pr - one) - p.eta * p.i1;
            let k2 = pr * pr - p.i2;
            let k3 = (pr - one) * (one + p.eta * p.i1) - p.i2;
            vec![
                (n - q - f, half() * (pr - one) * (q + g * k3)),
                (n - q - (pr - one) * e, half() * (pr - one) * (pm2 + e * k1)),
                (n - q - e, half() * (pr - one) * ((pr - one) * pm2 - e * k2)),
                (n - q, pm1 - pm2 + q - one),
                (n - q + e, half() * (pr - one) * ((pr - one) * pm2 + e * k2)),
                (n - q + (pr - one) * e, half() * (pr - one) * (pm2 - e * k1)),
                (n - q + f, half() * (pr - one) * (q - g * k3)),
            ]
        }
        CaseLabel::C24DivMAInFp2 => {
            let e = p.ph(m - 4);
            vec![
                (n - q - (pr - one) * e, half() * (pr - one) * (pm2 - e)),
                (n - q - e, half() * (pr - one) * (pm1 - e)),
                (n - q, pm2 - one),
                (n - q + e, half() * (pr - one) * (pm1 + e)),
                (n - q + (pr - one) * e, half() * (pr - one) * (pm2 + e)),
            ]
        }
        CaseLabel::C3SDivHalfM => {
            let e = p.ph(m - 4);
            let f = p.ph(m - 2);
            let g = p.ph(m - 6);
            vec![
                (n - q - f, half() * (pr - one) * (q - g)),
                (n - q - (pr - one) * e, half() * (pr - one) * (pm2 - e)),
                (n - q - e, half() * (pr - one) * (pr - one) * pm2),
                (n - q, pm1 - pm2 + q - one),
                (n - q + e, half() * (pr - one) * (pr - one) * pm2),
                (n - q + (pr - one) * e, half() * (pr - one) * (pm2 + e)),
                (n - q + f, half() * (pr - one) * (q + g)),
            ]
        }
        CaseLabel::C4EtaMinus1 => {
            let e = p.ph(m - 4);
            let hm = p.ph(m);
            let hm2 = p.ph(m - 2);
            vec![
                (n - q - (pr - one) * e, half() * (pr - one) * (pm2 + hm2)),
                (n - q - e, half() * (pr - one) * (pm1 - hm)),
                (n - q, pm2 - one),
                (n - q + e, half() * (pr - one) * (pm1 + hm)),
                (n - q + (pr - one) * e, half() * (pr - one) * (pm2 - hm2)),
            ]
        }
    };
    build_wd(&p, rows)
}

/// One display term: a multiplicity and the exponents of `w_0, ..., w_{p-1}`.
type Term = (Rat, Vec<Rat>);

struct CweBuilder<'a> {
    p: &'a Params,
    terms: Vec<Term>,
}

impl<'a> CweBuilder<'a> {
    fn new(p: &'a Params) -> Self {
        let mut zero = vec![Rat::zero(); p.p as usize];
        zero[0] = rat(p.n);
        CweBuilder {
            p,
            terms: vec![(Rat::one(), zero)],
        }
    }

    fn eta1(&self, x: i64) -> Rat {
        rat(legendre(x, self.p.p) as i128)
    }

    /// `coef * prod_rho w_rho^e`.
    fn uniform(&mut self, coef: Rat, e: Rat) {
        self.terms.push((coef, vec![e; self.p.p as usize]));
    }

    /// `coef * w_0^t0 * prod_{rho != 0} w_rho^f(rho)`.
    fn zero_special(&mut self, coef: Rat, t0: Rat, f: impl Fn(i64) -> Rat) {
        let mut t = vec![t0];
        t.extend((1..self.p.p as i64).map(f));
        self.terms.push((coef, t));
    }

    /// `coef * sum_{gamma != 0} w_gamma^g(gamma) * prod_{rho != gamma} w_rho^f(rho, gamma)`.
    fn gamma_sum(&mut self, coef: Rat, g: impl Fn(i64) -> Rat, f: impl Fn(i64, i64) -> Rat) {
        let p = self.p.p as i64;
        for gamma in 1..p {
            let t = (0..p)
                .map(|rho| {
                    if rho == gamma {
                        g(gamma)
                    } else {
                        f(rho, gamma)
                    }
                })
                .collect();
            self.terms.push((coef, t));
        }
    }

    fn finish(self) -> Result<CompleteWeightEnumerator> {
        let mut acc: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (coef, exps) in self.terms {
            if coef.is_zero() {
                continue;
            }
            let mut t = Vec::with_capacity(exps.len());
            for e in exps {
                let v = rat_to_int(e, "exponent")?;
                if v < 0 {
                    return Err(Error::NegativeFrequency(format!(
                        "term with multiplicity {coef} has exponent {v}"
                    )));
                }
                t.push(v as u32);
            }
            if t.iter().map(|&x| x as i128).sum::<i128>() != self.p.n {
                return Err(Error::Internal(format!(
                    "composition {t:?} does not sum to {}",
                    self.p.n
                )));
            }
            *acc.entry(t).or_insert_with(Rat::zero) += coef;
        }
        let mut terms = BTreeMap::new();
        for (t, c) in acc {
            let v = to_frequency(c, &format!("multiplicity of {t:?}"))?;
            if v > 0 {
                terms.insert(t, v);
            }
        }
        Ok(CompleteWeightEnumerator {
            p: self.p.p,
            n: self.p.n as usize,
            terms,
        })
    }
}

/// Expands the enumerator display of the case's label into compositions.
pub fn predict_cwe(case: &TheoremCase) -> Result<CompleteWeightEnumerator> {
    let p = Params::new(case)?;
    let mut b = CweBuilder::new(&p);
    let (pr, q) = (p.pr, rat(p.q));
    let m = p.m as i32;
    let one = Rat::one();
    let pm2 = p.pw(p.m - 2);
    let pm1 = p.pw(p.m - 1);
    let pi = p.p as i64;
    let inv = |g: i64| crate::field::fp_inv(g as u32, p.p) as i64;
    let eta_neg1 = b.eta1(-1);
    match case.label {
        CaseLabel::T1OddM => {
            let e = p.ph(m - 3);
            let h = p.ph(m - 5);
            b.uniform(pm1 - pm2 + q - one, q);
            let c = half() * (pr - one) * pm2;
            let eta1 = |x: i64| rat(legendre(x, p.p) as i128);
            b.zero_special(c, q, |rho| q - eta1(-rho) * e);
            b.zero_special(c, q, |rho| q + eta1(-rho) * e);
            b.gamma_sum(
                half() * (q - p.i2 * h),
                |_| q - (pr - one) * e,
                |_, _| q + e,
            );
            b.gamma_sum(
                half() * (q + p.i2 * h),
                |_| q + (pr - one) * e,
                |_, _| q - e,
            );
            let d = eta_neg1 * (p.i2 - pr) * h;
            let shift = |rho: i64, g: i64| eta1((rho * inv(g) - 1).rem_euclid(pi)) * e;
            b.gamma_sum(
                half() * ((pr - one) * pm2 + d),
                |_| q,
                |rho, g| q + shift(rho, g),
            );
            b.gamma_sum(
                half() * ((pr - one) * pm2 - d),
                |_| q,
                |rho, g| q - shift(rho, g),
            );
        }
        CaseLabel::MdsM3 => {
            let c = rat(pi as i128 * (pi as i128 - 1));
            let eta1 = |x: i64| rat(legendre(x, p.p) as i128);
            b.uniform(c, one);
            b.zero_special(c * half(), one, |rho| one - eta1(-rho));
            b.zero_special(c * half(), one, |rho| one + eta1(-rho));
            b.gamma_sum(one, |_| pr, |_, _| Rat::zero());
            let sh = |rho: i64, g: i64| eta1((rho * inv(g) - 1).rem_euclid(pi));
            b.gamma_sum(c * half(), |_| one, |rho, g| one - sh(rho, g));
            b.gamma_sum(c * half(), |_| one, |rho, g| one + sh(rho, g));
        }
        CaseLabel::T2EvenMAInFp2 | CaseLabel::C24DivMAInFp2 | CaseLabel::C4EtaMinus1 => {
            let e = p.ph(m - 4);
            // (gamma-sum +, gamma-sum -, w_0 +, w_0 -) multiplicities as displayed
            let (g_plus, g_minus, z_plus, z_minus) = match case.label {
                CaseLabel::T2EvenMAInFp2 => {
                    let k1 = (pr - one) - p.eta * p.i1;
                    let k2 = pr * pr - p.i2;
                    (
                        half() * (pm1 + e * k2),
                        half() * (pm1 - e * k2),
                        half() * (pr - one) * (pm2 + e * k1),
                        half() * (pr - one) * (pm2 - e * k1),
                    )
                }
                CaseLabel::C24DivMAInFp2 => (
                    half() * (pm1 + e),
                    half() * (pm1 - e),
                    half() * (pr - one) * (pm2 - e),
                    half() * (pr - one) * (pm2 + e),
                ),
                _ => {
                    let hm = p.ph(m);
                    let hm2 = p.ph(m - 2);
                    (
                        half() * (pm1 + hm),
                        half() * (pm1 - hm),
                        half() * (pr - one) * (pm2 + hm2),
                        half() * (pr - one) * (pm2 - hm2),
                    )
                }
            };
            b.uniform(pm2 - one, q);
            b.gamma_sum(g_plus, |_| q + (pr - one) * e, |_, _| q - e);
            b.gamma_sum(g_minus, |_| q - (pr - one) * e, |_, _| q + e);
            b.zero_special(z_plus, q + (pr - one) * e, |_| q - e);
            b.zero_special(z_minus, q - (pr - one) * e, |_| q + e);
        }
        CaseLabel::T3EvenMANotInFp2 | CaseLabel::C3SDivHalfM => {
            let e = p.ph(m - 4);
            let f = p.ph(m - 2);
            let g = p.ph(m - 6);
            // (eta-sum -, eta-sum +, w_0 +, w_0 -, gamma-sum +, gamma-sum -) multiplicities
            let (em, ep, zp, zm, gp, gm) = if case.label == CaseLabel::T3EvenMANotInFp2 {
                let k1 = (pr - one) - p.eta * p.i1;
                let k2 = pr * pr - p.i2;
                let k3 = (pr - one) * (one + p.eta * p.i1) - p.i2;
                (
                    half() * (q - g * k3),
                    half() * (q + g * k3),
                    half() * (pr - one) * (pm2 + e * k1),
                    half() * (pr - one) * (pm2 - e * k1),
                    half() * ((pr - one) * pm2 + e * k2),
                    half() * ((pr - one) * pm2 - e * k2),
                )
            } else {
                (
                    half() * (q + g),
                    half() * (q - g),
                    half() * (pr - one) * (pm2 - e),
                    half() * (pr - one) * (pm2 + e),
                    half() * (pr - one) * pm2,
                    half() * (pr - one) * pm2,
                )
            };
            let eta1 = |x: i64| rat(legendre(x, p.p) as i128);
            let sh = |rho: i64, gm_: i64| eta1((1 - rho * inv(gm_)).rem_euclid(pi)) * f;
            b.uniform(pm1 - pm2 + q - one, q);
            b.gamma_sum(em, |_| q, |rho, g_| q - sh(rho, g_));
            b.gamma_sum(ep, |_| q, |rho, g_| q + sh(rho, g_));
            b.zero_special(zp, q + (pr - one) * e, |_| q - e);
            b.zero_special(zm, q - (pr - one) * e, |_| q + e);
            b.gamma_sum(gp, |_| q + (pr - one) * e, |_, _| q - e);
            b.gamma_sum(gm, |_| q - (pr - one) * e, |_, _| q + e);
        }
    }
    b.finish()
}

/// Expected dual distance and the low-weight count that witnesses it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualPrediction {
    pub distance: DualDistance,
    pub a1: u64,
    /// Predicted `A_2` of the dual when the expected distance is 2, else 0.
    pub a2: i128,
    /// Predicted `A_3` of the dual when the expected distance is 3.
    pub a3: Option<i128>,
    /// Which of the four dual cases applied.
    pub dual_case: u8,
}

pub fn predict_dual(case: &TheoremCase) -> Result<DualPrediction> {
    let p = case.p;
    let m = case.m as u32;
    if m < 4 {
        return Err(Error::OutOfRegime(format!(
            "dual parameters need m >= 4, got m = {m}"
        )));
    }
    let pr = rat(p as i128);
    let one = Rat::one();
    let pw = |k: u32| rat(pow_i(p, k));
    let sixth = Rat::new(1, 6);
    let three = |a3: Rat, c: u8| -> Result<DualPrediction> {
        Ok(DualPrediction {
            distance: DualDistance::Three,
            a1: 0,
            a2: 0,
            a3: Some(rat_to_int(a3, "A3")?),
            dual_case: c,
        })
    };
    match case.label {
        CaseLabel::T1OddM => {
            let a3 = (pr - one)
                * pw(2 * m - 6)
                * ((pr - rat(2)) * pw(2 * m - 6) + (pr - one) * (pr - one) * pw(m - 3) - pr * pr
                    + pr
                    + one)
                * sixth;
            three(a3, 1)
        }
        CaseLabel::C24DivMAInFp2 => {
            let a3 = sixth
                * pw(m - 4)
                * (pr - one)
                * (pr - one)
                * (pw(m - 1) - pw(m - 2) - pr * pr + rat(3));
            three(a3, 2)
        }
        CaseLabel::C4EtaMinus1 => {
            let a3 =
                sixth * pw(m - 4) * (pr - one) * (pr - one) * (pw(m - 1) - pw(m - 2) - pr + one);
            three(a3, 3)
        }
        CaseLabel::C3SDivHalfM => Ok(DualPrediction {
            distance: DualDistance::Two,
            a1: 0,
            a2: rat_to_int(half() * pw(m - 4) * (pr - one) * (pr - one), "A2")?,
            a3: None,
            dual_case: 4,
        }),
        other => Err(Error::OutOfRegime(format!(
            "no dual prediction for {other}"
        ))),
    }
}

/// Singleton bound met with equality.
pub fn mds_check(n: usize, k: usize, d: usize) -> bool {
    n >= k && k >= 1 && d + k == n + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Bounds;
    use crate::code::enumerate_code;

    fn case(p: u32, m: usize, label: CaseLabel, eta: i8, i1: i64, i2: i64) -> TheoremCase {
        TheoremCase {
            label,
            general: label,
            p,
            m,
            s: None,
            eta_a: eta,
            i1,
            i2,
        }
    }

    fn wd(entries: &[(usize, u64)]) -> BTreeMap<usize, u64> {
        entries.iter().copied().collect()
    }

    #[test]
    fn odd_m_table() {
        let c = case(3, 5, CaseLabel::T1OddM, 1, 0, 0);
        let w = predict_wd(&c).unwrap();
        assert_eq!(w.entries, wd(&[(0, 1), (15, 60), (18, 116), (21, 66)]));
    }

    #[test]
    fn four_divides_m_table() {
        let c = case(3, 8, CaseLabel::C24DivMAInFp2, 1, 3, 8);
        let w = predict_wd(&c).unwrap();
        assert_eq!(
            w.entries,
            wd(&[
                (0, 1),
                (468, 720),
                (477, 2178),
                (486, 728),
                (495, 2196),
                (504, 738)
            ])
        );
        let cwe = predict_cwe(&c).unwrap();
        assert_eq!(cwe.terms.len(), 8);
        assert_eq!(cwe.terms[&vec![243, 243, 243]], 728);
        assert_eq!(cwe.terms[&vec![252, 225, 252]], 1089);
        assert_eq!(cwe.terms[&vec![261, 234, 234]], 720);
        assert_eq!(cwe.marginal(8), w);
    }

    #[test]
    fn subfield_table() {
        let c = case(3, 8, CaseLabel::C3SDivHalfM, 1, 3, 9);
        let w = predict_wd(&c).unwrap();
        assert_eq!(
            w.entries,
            wd(&[
                (0, 1),
                (459, 240),
                (468, 720),
                (477, 1458),
                (486, 1700),
                (495, 1458),
                (504, 738),
                (513, 246)
            ])
        );
        let cwe = predict_cwe(&c).unwrap();
        assert_eq!(cwe.terms.len(), 12);
        assert_eq!(cwe.terms[&vec![216, 243, 270]], 123);
        assert_eq!(cwe.terms[&vec![270, 243, 216]], 120);
        assert_eq!(cwe.marginal(8), w);
    }

    #[test]
    fn non_square_table() {
        let c = case(3, 6, CaseLabel::C4EtaMinus1, -1, 1, 0);
        let w = predict_wd(&c).unwrap();
        assert_eq!(
            w.entries,
            wd(&[(0, 1), (48, 90), (51, 216), (54, 80), (57, 270), (60, 72)])
        );
        let cwe = predict_cwe(&c).unwrap();
        assert_eq!(cwe.terms[&vec![24, 33, 24]], 135);
        assert_eq!(cwe.terms[&vec![33, 24, 24]], 90);
        assert_eq!(cwe.terms.len(), 8);
    }

    #[test]
    fn specialisations_agree_with_general_tables() {
        for (lab, gen, eta, i1v, i2v) in [
            (CaseLabel::C24DivMAInFp2, CaseLabel::T2EvenMAInFp2, 1, 3, 8),
            (CaseLabel::C4EtaMinus1, CaseLabel::T2EvenMAInFp2, -1, 1, 0),
            (CaseLabel::C3SDivHalfM, CaseLabel::T3EvenMANotInFp2, 1, 3, 9),
        ] {
            let m = if lab == CaseLabel::C4EtaMinus1 { 6 } else { 8 };
            let c = case(3, m, lab, eta, i1v, i2v);
            let g = c.with_label(gen);
            assert_eq!(predict_wd(&c).unwrap(), predict_wd(&g).unwrap(), "{lab}");
            assert_eq!(predict_cwe(&c).unwrap(), predict_cwe(&g).unwrap(), "{lab}");
        }
        let c = case(5, 3, CaseLabel::MdsM3, 1, 0, 5);
        let g = c.with_label(CaseLabel::T1OddM);
        assert_eq!(predict_cwe(&c).unwrap(), predict_cwe(&g).unwrap());
        assert_eq!(predict_wd(&c).unwrap(), predict_wd(&g).unwrap());
        assert_eq!(predict_cwe(&c).unwrap().total(), 125);
        assert!(predict_wd(&case(5, 5, CaseLabel::MdsM3, 1, 0, 5)).is_err());
    }

    #[test]
    fn mds_and_enumeration() {
        let f = FieldCtx::new(5, 3, None).unwrap();
        let a = f.generator();
        let c = classify_case(&f, &a).unwrap();
        assert_eq!(c.label, CaseLabel::MdsM3);
        assert_eq!(c.i2, 5);
        let (w, cwe) = enumerate_code(&f, &a, &Bounds::default()).unwrap();
        assert_eq!(predict_wd(&c).unwrap(), w);
        assert_eq!(predict_cwe(&c).unwrap(), cwe);
        assert!(mds_check(5, 3, w.min_distance().unwrap()));
    }

    #[test]
    fn mds_check_examples() {
        assert!(mds_check(7, 3, 5));
        assert!(mds_check(4, 4, 1));
        assert!(!mds_check(729, 8, 468));
    }

    #[test]
    fn dual_predictions() {
        let d = predict_dual(&case(3, 5, CaseLabel::T1OddM, 1, 0, 0)).unwrap();
        assert_eq!(d.a3, Some(3024));
        let d = predict_dual(&case(3, 8, CaseLabel::C24DivMAInFp2, 1, 3, 8)).unwrap();
        assert_eq!(d.a3, Some(78408));
        let d = predict_dual(&case(3, 6, CaseLabel::C3SDivHalfM, 1, 3, 9)).unwrap();
        assert_eq!((d.distance, d.a2), (DualDistance::Two, 18));
        assert!(predict_dual(&case(3, 3, CaseLabel::MdsM3, 1, 0, 3)).is_err());
    }

    #[test]
    fn classify_examples_small() {
        let f = FieldCtx::new(3, 4, None).unwrap();
        for a in f
            .nonzero_elements()
            .filter(|x| !f.is_prime_field_element(x))
        {
            let c = classify_case(&f, &a).unwrap();
            if f.in_subfield(&a, 2).unwrap() {
                assert_eq!(c.label, CaseLabel::C24DivMAInFp2);
            } else {
                assert_eq!(c.label, CaseLabel::T3EvenMANotInFp2);
            }
        }
    }
}
