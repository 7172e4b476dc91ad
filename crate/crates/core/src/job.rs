//! Job configuration, the task runner and report emission.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apps::{minimality_report, sum_set_pipeline, MinimalityReport, SumSetReport};
use crate::bounds::{guard, Bounds};
use crate::charsum::{
    char_sum_report, e_sums, gauss_sum_closed, gauss_sum_numeric, weil_quadratic_sum,
    within_tolerance, NUMERIC_LIMIT,
};
use crate::closed_form::{
    classify_case, mds_check, predict_cwe, predict_dual, predict_wd, DualPrediction,
};
use crate::code::{
    codeword, defining_set, dual_low_weights_columns, dual_low_weights_moments,
    dual_min_distance_upto3, enumerate_code, for_each_codeword, generator_matrix, polynomial_basis,
    CompleteWeightEnumerator, DualDistance, DualLowWeights, WeightDistribution,
};
use crate::counting::{
    aux_counts, classify_all, n_closed_from_case, nonsquare_residual, region_sizes_brute,
    region_sizes_closed, NCounter,
};
use crate::error::{Error, Result};
use crate::field::{format_modulus, legendre, parse_modulus, FieldCtx, FieldElement};

/// How the parameter `a` is given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ASpec {
    /// `beta^k` for the class `beta` of `x`.
    Exponent(i64),
    /// Ascending polynomial-basis coefficients.
    Coeffs(Vec<u32>),
}

impl FromStr for ASpec {
    type Err = Error;

    /// `exp:K` or `coeffs:c0,c1,...`.
    fn from_str(s: &str) -> Result<ASpec> {
        let bad = || {
            Error::Config(format!(
                "cannot parse a = {s:?} (expected exp:K or coeffs:c0,c1,...)"
            ))
        };
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind.trim() {
            "exp" => Ok(ASpec::Exponent(rest.trim().parse().map_err(|_| bad())?)),
            "coeffs" => Ok(ASpec::Coeffs(parse_modulus(rest).map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for ASpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ASpec::Exponent(k) => write!(f, "exp:{k}"),
            ASpec::Coeffs(c) => write!(f, "coeffs:{}", format_modulus(c)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Enumerate,
    Predict,
    VerifyLemmas,
    Dual,
    Minimality,
    Sumset,
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Task> {
        match s.trim() {
            "enumerate" => Ok(Task::Enumerate),
            "predict" => Ok(Task::Predict),
            "verify-lemmas" => Ok(Task::VerifyLemmas),
            "dual" => Ok(Task::Dual),
            "minimality" => Ok(Task::Minimality),
            "sumset" => Ok(Task::Sumset),
            other => Err(Error::Config(format!("unknown task {other:?}"))),
        }
    }
}

pub fn parse_tasks(s: &str) -> Result<Vec<Task>> {
    let mut t: Vec<Task> = s
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(Task::from_str)
        .collect::<Result<_>>()?;
    t.sort();
    t.dedup();
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobConfig {
    pub p: u32,
    pub m: usize,
    pub modulus: Option<Vec<u32>>,
    pub a: ASpec,
    pub tasks: Vec<Task>,
    pub bounds: Bounds,
    /// Seed for the randomized lemma samples.
    pub seed: u64,
    /// Number of summands for the sum-set task.
    pub s: u32,
}

impl JobConfig {
    pub fn new(p: u32, m: usize, a: ASpec, tasks: Vec<Task>) -> Self {
        JobConfig {
            p,
            m,
            modulus: None,
            a,
            tasks,
            bounds: Bounds::default(),
            seed: 0,
            s: 3,
        }
    }

    fn has(&self, t: Task) -> bool {
        self.tasks.contains(&t)
    }
}

/// Builds the field. Without an explicit modulus, an exponent form of `a`
/// selects the smallest modulus with a primitive root; otherwise the
/// smallest irreducible.
pub fn resolve_field(cfg: &JobConfig) -> Result<(FieldCtx, Vec<String>)> {
    let mut warnings = Vec::new();
    let ctx = match (&cfg.modulus, &cfg.a) {
        (Some(f), _) => FieldCtx::new(cfg.p, cfg.m, Some(f))?,
        (None, ASpec::Exponent(_)) => {
            let plain = FieldCtx::new(cfg.p, cfg.m, None)?;
            if plain.is_generator_primitive() {
                plain
            } else {
                let ctx = FieldCtx::with_primitive_modulus(cfg.p, cfg.m)?;
                warnings.push(format!(
                    "smallest irreducible {} has a non-primitive root; using {} for the exponent form of a",
                    format_modulus(plain.modulus()),
                    format_modulus(ctx.modulus())
                ));
                ctx
            }
        }
        (None, ASpec::Coeffs(_)) => FieldCtx::new(cfg.p, cfg.m, None)?,
    };
    Ok((ctx, warnings))
}

pub fn resolve_a(ctx: &FieldCtx, a: &ASpec) -> Result<FieldElement> {
    let x = match a {
        ASpec::Exponent(k) => ctx.element_from_exponent(*k)?,
        ASpec::Coeffs(c) => ctx.element(c)?,
    };
    if ctx.is_prime_field_element(&x) {
        return Err(Error::AInPrimeField);
    }
    Ok(x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRow {
    pub weight: usize,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CweRow {
    pub composition: Vec<u32>,
    pub count: u64,
}

pub fn wd_rows(wd: &WeightDistribution) -> Vec<WeightRow> {
    wd.entries
        .iter()
        .map(|(&weight, &count)| WeightRow { weight, count })
        .collect()
}

pub fn cwe_rows(cwe: &CompleteWeightEnumerator) -> Vec<CweRow> {
    cwe.terms
        .iter()
        .map(|(t, &count)| CweRow {
            composition: t.clone(),
            count,
        })
        .collect()
}

/// A failed comparison with both sides rendered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub what: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub source: String,
    pub weight_distribution: Vec<WeightRow>,
    /// Rows of the table whose frequency evaluates to zero.
    pub vanishing_weights: Vec<usize>,
    pub cwe: Vec<CweRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualReport {
    pub a1: u64,
    pub a2: u64,
    pub a3: u64,
    pub distance: DualDistance,
    pub columns: Option<DualLowWeights>,
    pub moments: DualLowWeights,
    pub methods_agree: Option<bool>,
    pub predicted: Option<DualPrediction>,
    pub predicted_match: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumSetSection {
    pub report: SumSetReport,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub p: u32,
    pub m: usize,
    pub modulus: Vec<u32>,
    pub a: ASpec,
    pub a_coeffs: Vec<u32>,
    pub tasks: Vec<Task>,
    pub n: usize,
    pub k: Option<usize>,
    pub d: Option<usize>,
    pub case: String,
    pub general_case: String,
    pub s_subfield: Option<usize>,
    pub eta_a: i8,
    pub i1: i64,
    pub i2: i64,
    pub weight_distribution: Option<Vec<WeightRow>>,
    pub cwe: Option<Vec<CweRow>>,
    pub mds: Option<bool>,
    pub prediction: Option<Prediction>,
    pub predicted_match: Option<bool>,
    pub lemmas: Option<Vec<LemmaCheck>>,
    pub dual: Option<DualReport>,
    pub minimality: Option<MinimalityReport>,
    pub sumset: Option<SumSetSection>,
    pub mismatches: Vec<Mismatch>,
    pub warnings: Vec<String>,
    /// Wall time per stage in microseconds.
    pub timing_us: BTreeMap<String, u64>,
    pub ok: bool,
}

fn timed<T>(
    timing: &mut BTreeMap<String, u64>,
    name: &str,
    f: impl FnOnce() -> Result<T>,
) -> Result<T> {
    let start = Instant::now();
    let r = f();
    timing.insert(name.to_string(), start.elapsed().as_micros() as u64);
    r
}

fn render_wd(wd: &WeightDistribution) -> String {
    wd.entries
        .iter()
        .map(|(w, c)| format!("{w}:{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs the requested tasks in dependency order.
pub fn run(cfg: &JobConfig) -> Result<RunReport> {
    cfg.bounds.validate()?;
    let mut timing = BTreeMap::new();
    let (ctx, mut warnings) = timed(&mut timing, "field", || resolve_field(cfg))?;
    let a = resolve_a(&ctx, &cfg.a)?;
    let case = timed(&mut timing, "char_sums", || classify_case(&ctx, &a))?;
    let n = (cfg.p as usize).pow(cfg.m as u32 - 2);
    let mut mismatches = Vec::new();

    let needs_enum = cfg.has(Task::Enumerate) || cfg.has(Task::Dual);
    let enumerated = if needs_enum {
        Some(timed(&mut timing, "enumerate", || {
            enumerate_code(&ctx, &a, &cfg.bounds)
        })?)
    } else {
        None
    };

    let mut prediction = None;
    let mut predicted_match = None;
    if cfg.has(Task::Predict) {
        let (pw, pc) = timed(&mut timing, "predict", || {
            Ok((predict_wd(&case)?, predict_cwe(&case)?))
        })?;
        let (realized, vanishing) = pw.realized();
        if !vanishing.is_empty() {
            warnings.push(format!(
                "predicted table rows with zero frequency at weights {vanishing:?}"
            ));
        }
        if let (Some((wd, cwe)), true) = (&enumerated, cfg.has(Task::Enumerate)) {
            let wd_ok = realized == *wd;
            let cwe_ok = pc == *cwe;
            if !wd_ok {
                mismatches.push(Mismatch {
                    what: "weight distribution".into(),
                    expected: render_wd(&realized),
                    actual: render_wd(wd),
                });
            }
            if !cwe_ok {
                mismatches.push(Mismatch {
                    what: "complete weight enumerator".into(),
                    expected: pc.render(),
                    actual: cwe.render(),
                });
            }
            predicted_match = Some(wd_ok && cwe_ok);
        }
        prediction = Some(Prediction {
            source: case.label.to_string(),
            weight_distribution: wd_rows(&realized),
            vanishing_weights: vanishing,
            cwe: cwe_rows(&pc),
        });
    }

    let (weight_distribution, cwe, k, d, mds) = match (&enumerated, cfg.has(Task::Enumerate)) {
        (Some((wd, cwe)), true) => {
            let d = wd.min_distance();
            (
                Some(wd_rows(wd)),
                Some(cwe_rows(cwe)),
                Some(wd.k),
                d,
                d.map(|d| mds_check(n, wd.k, d)),
            )
        }
        _ => (None, None, None, None, None),
    };

    let lemmas = if cfg.has(Task::VerifyLemmas) {
        let checks = timed(&mut timing, "verify_lemmas", || {
            verify_lemmas(&ctx, &a, cfg.seed)
        })?;
        for c in checks.iter().filter(|c| !c.passed) {
            mismatches.push(Mismatch {
                what: c.name.clone(),
                expected: "pass".into(),
                actual: c.detail.clone(),
            });
        }
        Some(checks)
    } else {
        None
    };

    let dual = if cfg.has(Task::Dual) {
        let wd = &enumerated.as_ref().expect("enumerated for dual").0;
        let rep = timed(&mut timing, "dual", || {
            dual_report(&ctx, &a, wd, &case, &cfg.bounds, &mut warnings)
        })?;
        if rep.methods_agree == Some(false) {
            mismatches.push(Mismatch {
                what: "dual low weights (columns vs moments)".into(),
                expected: format!("{:?}", rep.columns.map(|c| (c.a1, c.a2, c.a3))),
                actual: format!("{:?}", (rep.moments.a1, rep.moments.a2, rep.moments.a3)),
            });
        }
        if let (Some(false), Some(pr)) = (rep.predicted_match, rep.predicted) {
            mismatches.push(Mismatch {
                what: format!("dual parameters (case {})", pr.dual_case),
                expected: format!("distance {} A2 {} A3 {:?}", pr.distance, pr.a2, pr.a3),
                actual: format!("distance {} A2 {} A3 {}", rep.distance, rep.a2, rep.a3),
            });
        }
        Some(rep)
    } else {
        None
    };

    let minimality = if cfg.has(Task::Minimality) {
        let r = timed(&mut timing, "minimality", || {
            minimality_report(&ctx, &a, &cfg.bounds)
        })?;
        if !r.consistent() {
            mismatches.push(Mismatch {
                what: "minimality".into(),
                expected: "0 non-minimal codewords".into(),
                actual: r.non_minimal_count.to_string(),
            });
        }
        if !r.exhaustive_checked {
            warnings.push("field exceeds the minimality bound; only the ratio test was run".into());
        }
        Some(r)
    } else {
        None
    };

    let sumset = if cfg.has(Task::Sumset) {
        let (omega, r) = timed(&mut timing, "sumset", || {
            sum_set_pipeline(&ctx, &a, cfg.s, &cfg.bounds)
        })?;
        if r.lsss_preconditions == Some(false) {
            mismatches.push(Mismatch {
                what: "weight preconditions for the sum set".into(),
                expected: "w2 = n(p-1)/p and w1 + w3 = 2n(p-1)/p".into(),
                actual: "violated".into(),
            });
        }
        Some(SumSetSection {
            report: r,
            warnings: omega.warnings,
        })
    } else {
        None
    };

    let ok = mismatches.is_empty();
    Ok(RunReport {
        p: cfg.p,
        m: cfg.m,
        modulus: ctx.modulus().to_vec(),
        a: cfg.a.clone(),
        a_coeffs: a.coeffs().to_vec(),
        tasks: cfg.tasks.clone(),
        n,
        k,
        d,
        case: case.label.to_string(),
        general_case: case.general.to_string(),
        s_subfield: case.s,
        eta_a: case.eta_a,
        i1: case.i1,
        i2: case.i2,
        weight_distribution,
        cwe,
        mds,
        prediction,
        predicted_match,
        lemmas,
        dual,
        minimality,
        sumset,
        mismatches,
        warnings,
        timing_us: timing,
        ok,
    })
}

fn dual_report(
    ctx: &FieldCtx,
    a: &FieldElement,
    wd: &WeightDistribution,
    case: &crate::closed_form::TheoremCase,
    bounds: &Bounds,
    warnings: &mut Vec<String>,
) -> Result<DualReport> {
    let moments = dual_low_weights_moments(wd, ctx.p())?;
    let columns = match dual_low_weights_columns(ctx, a, bounds) {
        Ok(c) => Some(c),
        Err(Error::TooLarge { size, bound }) => {
            warnings.push(format!(
                "length {size} exceeds the triple-counting bound {bound}; moments only"
            ));
            None
        }
        Err(e) => return Err(e),
    };
    let methods_agree = columns.map(|c| c.same_counts(&moments));
    let distance = dual_min_distance_upto3(&moments);
    let predicted = match predict_dual(case) {
        Ok(p) => Some(p),
        Err(Error::OutOfRegime(msg)) => {
            warnings.push(format!("no dual prediction: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };
    let predicted_match = predicted.map(|pr| {
        let count_ok = match pr.distance {
            DualDistance::Two => pr.a2 == moments.a2 as i128,
            _ => pr.a3 == Some(moments.a3 as i128) && moments.a2 == 0,
        };
        pr.distance == distance && pr.a1 == moments.a1 && count_ok
    });
    Ok(DualReport {
        a1: moments.a1,
        a2: moments.a2,
        a3: moments.a3,
        distance,
        columns,
        moments,
        methods_agree,
        predicted,
        predicted_match,
    })
}

fn check(name: &str, passed: bool, detail: String) -> LemmaCheck {
    LemmaCheck {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Random quadratics tried per field by [`verify_lemmas`].
pub const WEIL_SAMPLES: usize = 100;

/// Enumeration-versus-closed-form checks of the character-sum and counting
/// statements for one `(field, a)`.
pub fn verify_lemmas(ctx: &FieldCtx, a: &FieldElement, seed: u64) -> Result<Vec<LemmaCheck>> {
    let p = ctx.p();
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Every element of GF(p) is a square in an even-degree extension.
    let bad: Vec<i64> = (1..p as i64)
        .filter(|&x| {
            let want = if ctx.m().is_multiple_of(2) {
                1
            } else {
                legendre(x, p)
            };
            ctx.eta(&ctx.from_prime(x)) != want
        })
        .collect();
    out.push(check(
        "eta on the prime field",
        bad.is_empty(),
        format!("disagreeing residues: {bad:?}"),
    ));

    if ctx.order() <= NUMERIC_LIMIT {
        let num = gauss_sum_numeric(ctx)?;
        let closed = gauss_sum_closed(p, ctx.m());
        out.push(check(
            "Gauss sum closed form",
            within_tolerance(ctx, num, closed.to_complex()),
            format!("numeric {num}, closed {closed}"),
        ));
        let mut worst = 0usize;
        for _ in 0..WEIL_SAMPLES {
            let a2 = loop {
                let x = ctx.element_at(rng.random_range(0..ctx.order()));
                if !x.is_zero() {
                    break x;
                }
            };
            let a1 = ctx.element_at(rng.random_range(0..ctx.order()));
            let a0 = ctx.element_at(rng.random_range(0..ctx.order()));
            if !weil_quadratic_sum(ctx, &a2, &a1, &a0)?.agrees(ctx) {
                worst += 1;
            }
        }
        out.push(check(
            "quadratic Weil sums",
            worst == 0,
            format!("{worst} of {WEIL_SAMPLES} disagree"),
        ));
    }

    let cs = char_sum_report(ctx, a)?;
    out.push(check(
        "I1, I2 closed values",
        cs.prediction_holds(),
        format!(
            "I1 = {}, I2 = {}, prediction {:?}",
            cs.i1, cs.i2, cs.prediction
        ),
    ));
    if ctx.m().is_multiple_of(2) && ctx.in_subfield(a, 2)? {
        let rel = (p as i64 - 1) * (cs.eta_a as i64 + cs.i1);
        out.push(check(
            "I2 = (p-1)(eta(a) + I1) on GF(p^2)",
            rel == cs.i2,
            format!("{rel} vs I2 = {}", cs.i2),
        ));
        let r = nonsquare_residual(ctx, a, cs.i1, cs.i2);
        out.push(check(
            "(p-1)(eta(a) I1 + 1) = I2 on GF(p^2)",
            r == 0,
            format!("residual {r}"),
        ));
        if cs.eta_a == -1 {
            out.push(check(
                "eta(a) = -1 forces I1 = 1, I2 = 0",
                (cs.i1, cs.i2) == (1, 0),
                format!("({}, {})", cs.i1, cs.i2),
            ));
        }
    }

    if ctx.m() >= 3 {
        let counter = NCounter::new(ctx, a)?;
        let cases = classify_all(ctx, a)?;
        let ds = defining_set(ctx, a)?;
        let gen = generator_matrix(ctx, &ds, &polynomial_basis(ctx))?;
        let mut n_bad = 0u64;
        let mut n_checked = 0u64;
        let mut sum_bad = 0u64;
        let mut w_bad = 0u64;
        let target = (p as u64).pow(ctx.m() as u32 - 2);
        let mut words = Vec::with_capacity(ctx.order() as usize);
        for_each_codeword(ctx, &gen, |_, w| words.push(crate::code::weight(w)));
        for (i, c) in cases.iter().enumerate() {
            let b = ctx.element_at(i as u64 + 1);
            let h = counter.histogram(&b);
            if h.iter().sum::<u64>() != target {
                sum_bad += 1;
            }
            if words[i + 1] as u64 != target - h[0] {
                w_bad += 1;
            }
            for rho in 0..p {
                n_checked += 1;
                if n_closed_from_case(ctx, c, rho)? != h[rho as usize] as i128 {
                    n_bad += 1;
                }
            }
        }
        out.push(check(
            "N_a(b, rho) closed form",
            n_bad == 0,
            format!("{n_bad} of {n_checked} disagree"),
        ));
        out.push(check(
            "sum over rho of N_a(b, rho)",
            sum_bad == 0,
            format!("{sum_bad} values of b off"),
        ));
        out.push(check(
            "weight(c(b)) = n - N_a(b, 0)",
            w_bad == 0,
            format!("{w_bad} values of b off"),
        ));
        let sample = ctx.element_at(1 + rng.random_range(0..ctx.order() - 1));
        let direct = codeword(ctx, &ds, &sample)?;
        out.push(check(
            "encoding through the generator matrix",
            direct == crate::code::encode(&gen, sample.coeffs(), p),
            format!("b = {:?}", sample.coeffs()),
        ));

        let brute = region_sizes_brute(ctx, a)?;
        let closed = region_sizes_closed(ctx, a, cs.i1, cs.i2)?;
        out.push(check(
            "region sizes",
            brute == closed,
            format!("brute {brute:?}, closed {closed:?}"),
        ));

        let mut t_bad = 0;
        let mut l_bad = 0;
        for g0 in 0..p {
            for g1 in 0..p {
                for g2 in 0..p {
                    let ac = aux_counts(ctx, a, (g0, g1, g2), Some(1))?;
                    if !ac.t_matches() {
                        t_bad += 1;
                    }
                    if !ac.l_matches(ctx) {
                        l_bad += 1;
                    }
                }
            }
        }
        out.push(check(
            "T_a triple counts",
            t_bad == 0,
            format!("{t_bad} triples off"),
        ));
        out.push(check(
            "L_a counts (numeric)",
            l_bad == 0,
            format!("{l_bad} triples off"),
        ));

        let mut e_bad = Vec::new();
        for gamma in 1..p {
            let e = e_sums(ctx, a, gamma)?;
            if !e.e1.agrees(ctx) {
                e_bad.push(format!("E1({gamma}) {} vs {}", e.e1.numeric, e.e1.closed));
            }
            if let Some(e2) = e.e2 {
                if !e2.agrees(ctx) {
                    e_bad.push(format!("E2({gamma}) {}", e2.numeric));
                }
            }
        }
        out.push(check("E1, E2 sums", e_bad.is_empty(), e_bad.join("; ")));
    }
    Ok(out)
}

/// Result of one sweep cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCell {
    pub config: JobConfig,
    pub report: Option<RunReport>,
    pub error: Option<String>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub cells: Vec<SweepCell>,
    pub passed: usize,
    pub failed: usize,
    pub ok: bool,
}

/// Runs the jobs concurrently; errors stay local to their cell and the
/// output order is the input order.
pub fn sweep(grid: &[JobConfig]) -> SweepReport {
    let cells: Vec<SweepCell> = grid
        .par_iter()
        .map(|cfg| match run(cfg) {
            Ok(r) => SweepCell {
                config: cfg.clone(),
                ok: r.ok,
                report: Some(r),
                error: None,
            },
            Err(e) => SweepCell {
                config: cfg.clone(),
                report: None,
                error: Some(e.to_string()),
                ok: false,
            },
        })
        .collect();
    let passed = cells.iter().filter(|c| c.ok).count();
    let failed = cells.len() - passed;
    SweepReport {
        cells,
        passed,
        failed,
        ok: failed == 0,
    }
}

/// `count` distinct random `a` outside `GF(p)` for each `(p, m)`, as coefficient specs.
pub fn random_grid(
    ps: &[u32],
    ms: &[usize],
    count: usize,
    seed: u64,
    tasks: &[Task],
    bounds: Bounds,
) -> Result<Vec<JobConfig>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for &p in ps {
        for &m in ms {
            let ctx = FieldCtx::new(p, m, None)?;
            guard(ctx.order(), bounds.max_field)?;
            let pool = ctx.order() - p as u64;
            let mut chosen = std::collections::BTreeSet::new();
            while chosen.len() < count.min(pool as usize) {
                let x = ctx.element_at(rng.random_range(0..ctx.order()));
                if !ctx.is_prime_field_element(&x) {
                    chosen.insert(x.coeffs().to_vec());
                }
            }
            for c in chosen {
                let mut cfg = JobConfig::new(p, m, ASpec::Coeffs(c), tasks.to_vec());
                cfg.bounds = bounds;
                cfg.seed = seed;
                out.push(cfg);
            }
        }
    }
    Ok(out)
}

pub fn to_json(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

pub fn from_json(text: &str) -> Result<RunReport> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid report JSON: {e}")))
}

/// `weight,count` rows of the enumerated (else predicted) distribution.
pub fn to_csv(report: &RunReport) -> String {
    let rows = report
        .weight_distribution
        .as_ref()
        .or(report.prediction.as_ref().map(|p| &p.weight_distribution));
    let mut s = String::from("weight,count\n");
    for r in rows.into_iter().flatten() {
        let _ = writeln!(s, "{},{}", r.weight, r.count);
    }
    s
}

pub fn to_text(report: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "field GF({}^{}) modulus {}",
        report.p,
        report.m,
        format_modulus(&report.modulus)
    );
    let _ = writeln!(s, "a = {} = {:?}", report.a, report.a_coeffs);
    let _ = writeln!(
        s,
        "case {} (general {}), eta(a) = {}, I1 = {}, I2 = {}",
        report.case, report.general_case, report.eta_a, report.i1, report.i2
    );
    if let (Some(k), Some(d)) = (report.k, report.d) {
        let _ = writeln!(
            s,
            "parameters [{}, {}, {}]{}",
            report.n,
            k,
            d,
            if report.mds == Some(true) { " MDS" } else { "" }
        );
    }
    if let Some(rows) = &report.weight_distribution {
        let _ = writeln!(
            s,
            "weight distribution: {}",
            rows.iter()
                .map(|r| format!("{}:{}", r.weight, r.count))
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    if let Some(m) = report.predicted_match {
        let _ = writeln!(s, "prediction matches enumeration: {m}");
    }
    if let Some(l) = &report.lemmas {
        for c in l {
            let _ = writeln!(
                s,
                "[{}] {} {}",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
    }
    if let Some(d) = &report.dual {
        let _ = writeln!(
            s,
            "dual: A1 = {}, A2 = {}, A3 = {}, distance {}",
            d.a1, d.a2, d.a3, d.distance
        );
        if let Some(pr) = &d.predicted {
            let _ = writeln!(
                s,
                "dual prediction: distance {}, A2 {}, A3 {:?}, match {:?}",
                pr.distance, pr.a2, pr.a3, d.predicted_match
            );
        }
    }
    if let Some(mn) = &report.minimality {
        let _ = writeln!(
            s,
            "minimality: w_min {} w_max {} ratio {} non-minimal {}",
            mn.w_min, mn.w_max, mn.ab_ratio_passes, mn.non_minimal_count
        );
    }
    if let Some(ss) = &report.sumset {
        let r = &ss.report;
        let _ = writeln!(
            s,
            "sum set: |Omega| = {}, s = {}, sigma0 = {:?}, sigma1 = {:?}, preconditions {:?}",
            r.omega_size, r.s, r.sigma0, r.sigma1, r.lsss_preconditions
        );
    }
    for m in &report.mismatches {
        let _ = writeln!(
            s,
            "MISMATCH {}: expected {} got {}",
            m.what, m.expected, m.actual
        );
    }
    for w in &report.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    let _ = writeln!(s, "{}", if report.ok { "OK" } else { "FAILED" });
    s
}

/// One line per `b`: its coefficients, a space, then the codeword digits.
pub fn write_codeword_dump(
    ctx: &FieldCtx,
    a: &FieldElement,
    bounds: &Bounds,
    out: &mut impl Write,
) -> Result<()> {
    guard(ctx.order(), bounds.max_field)?;
    let ds = defining_set(ctx, a)?;
    let gen = generator_matrix(ctx, &ds, &polynomial_basis(ctx))?;
    let mut err = None;
    for_each_codeword(ctx, &gen, |idx, w| {
        if err.is_some() {
            return;
        }
        let b = ctx.element_at(idx);
        let digits: String = w
            .iter()
            .map(|&c| char::from_digit(c, 36).unwrap_or('?'))
            .collect();
        if let Err(e) = writeln!(out, "{} {}", format_modulus(b.coeffs()), digits) {
            err = Some(e);
        }
    });
    match err {
        Some(e) => Err(Error::Config(format!("write failed: {e}"))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u32,
    pub m: usize,
    pub order: u64,
    pub modulus: Vec<u32>,
    pub generator_primitive: bool,
    /// `Tr(x^i)` for `i < m`.
    pub trace_basis: Vec<u32>,
    pub gauss_sum: String,
}

pub fn field_info(ctx: &FieldCtx) -> FieldInfo {
    FieldInfo {
        p: ctx.p(),
        m: ctx.m(),
        order: ctx.order(),
        modulus: ctx.modulus().to_vec(),
        generator_primitive: ctx.is_generator_primitive(),
        trace_basis: ctx.trace_basis().to_vec(),
        gauss_sum: gauss_sum_closed(ctx.p(), ctx.m()).to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_specs() {
        assert_eq!("exp:820".parse::<ASpec>().unwrap(), ASpec::Exponent(820));
        assert_eq!(
            "coeffs:0,1,0".parse::<ASpec>().unwrap(),
            ASpec::Coeffs(vec![0, 1, 0])
        );
        assert!("820".parse::<ASpec>().is_err());
        assert_eq!(
            parse_tasks("predict,enumerate,predict").unwrap(),
            vec![Task::Enumerate, Task::Predict]
        );
        assert!(parse_tasks("bogus").is_err());
    }

    #[test]
    fn small_run_round_trips() {
        let cfg = JobConfig::new(
            3,
            3,
            ASpec::Exponent(1),
            vec![Task::Enumerate, Task::Predict],
        );
        let r = run(&cfg).unwrap();
        assert!(r.ok);
        assert_eq!(r.mds, Some(true));
        assert_eq!(r.d, Some(1));
        assert_eq!(from_json(&to_json(&r)).unwrap(), r);
        assert!(to_csv(&r).starts_with("weight,count\n0,1\n"));
    }

    #[test]
    fn lemma_suite_small() {
        let cfg = JobConfig::new(3, 4, ASpec::Exponent(7), vec![Task::VerifyLemmas]);
        let r = run(&cfg).unwrap();
        assert!(r.ok, "{:?}", r.mismatches);
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn sweep_isolates_errors() {
        let mut bad = JobConfig::new(3, 3, ASpec::Exponent(1), vec![Task::Enumerate]);
        bad.modulus = Some(vec![1, 0, 0, 1]);
        let good = JobConfig::new(3, 3, ASpec::Exponent(1), vec![Task::Enumerate]);
        let rep = sweep(&[bad, good]);
        assert_eq!((rep.passed, rep.failed), (1, 1));
        assert!(rep.cells[0].error.is_some());
        assert!(sweep(&[]).ok);
    }

    #[test]
    fn random_grid_is_deterministic() {
        let g1 = random_grid(&[3], &[3, 4], 5, 7, &[Task::Enumerate], Bounds::default()).unwrap();
        let g2 = random_grid(&[3], &[3, 4], 5, 7, &[Task::Enumerate], Bounds::default()).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(g1.len(), 10);
    }

    #[test]
    fn dump_lines() {
        let ctx = FieldCtx::new(3, 3, None).unwrap();
        let mut buf = Vec::new();
        write_codeword_dump(&ctx, &ctx.generator(), &Bounds::default(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 27);
        assert!(text.starts_with("0,0,0 000\n"));
    }
}
