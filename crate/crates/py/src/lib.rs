//! Python bindings. Field elements cross the boundary as ascending
//! coefficient lists; reports cross as JSON strings.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};
use tracecode::bounds::Bounds;
use tracecode::charsum::char_sum_report;
use tracecode::closed_form::{classify_case, predict_cwe, predict_wd};
use tracecode::code::{
    dual_low_weights_columns, dual_low_weights_moments, dual_min_distance_upto3, enumerate_code,
};
use tracecode::field::FieldCtx;
use tracecode::job::{self, ASpec, JobConfig};
use tracecode::{Error, FieldElement};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type Wd = BTreeMap<usize, u64>;

/// Compositions become tuple keys so they hash on the Python side.
fn cwe_dict<'py>(py: Python<'py>, terms: &BTreeMap<Vec<u32>, u64>) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (t, c) in terms {
        d.set_item(PyTuple::new(py, t)?, c)?;
    }
    Ok(d)
}

/// `GF(p^m)` in a polynomial basis.
#[pyclass(name = "Field", frozen)]
pub struct PyField {
    ctx: FieldCtx,
}

impl PyField {
    fn el(&self, coeffs: Vec<u32>) -> PyResult<FieldElement> {
        self.ctx.element(&coeffs).map_err(py_err)
    }
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, m, modulus=None))]
    fn new(p: u32, m: usize, modulus: Option<Vec<u32>>) -> PyResult<Self> {
        Ok(PyField {
            ctx: FieldCtx::new(p, m, modulus.as_deref()).map_err(py_err)?,
        })
    }

    /// Field whose modulus has a primitive root.
    #[staticmethod]
    fn primitive(p: u32, m: usize) -> PyResult<Self> {
        Ok(PyField {
            ctx: FieldCtx::with_primitive_modulus(p, m).map_err(py_err)?,
        })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.ctx.p()
    }

    #[getter]
    fn m(&self) -> usize {
        self.ctx.m()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.ctx.order()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.ctx.modulus().to_vec()
    }

    fn is_generator_primitive(&self) -> bool {
        self.ctx.is_generator_primitive()
    }

    fn power_of_root(&self, k: i64) -> PyResult<Vec<u32>> {
        Ok(self
            .ctx
            .element_from_exponent(k)
            .map_err(py_err)?
            .coeffs()
            .to_vec())
    }

    fn add(&self, a: Vec<u32>, b: Vec<u32>) -> PyResult<Vec<u32>> {
        Ok(self.ctx.add(&self.el(a)?, &self.el(b)?).coeffs().to_vec())
    }

    fn mul(&self, a: Vec<u32>, b: Vec<u32>) -> PyResult<Vec<u32>> {
        Ok(self.ctx.mul(&self.el(a)?, &self.el(b)?).coeffs().to_vec())
    }

    fn inv(&self, a: Vec<u32>) -> PyResult<Vec<u32>> {
        Ok(self
            .ctx
            .inv(&self.el(a)?)
            .map_err(py_err)?
            .coeffs()
            .to_vec())
    }

    fn trace(&self, a: Vec<u32>) -> PyResult<u32> {
        Ok(self.ctx.trace(&self.el(a)?).map_err(py_err)?.value())
    }

    /// Quadratic character, 0 at 0.
    fn eta(&self, a: Vec<u32>) -> PyResult<i8> {
        Ok(self.ctx.eta(&self.el(a)?))
    }

    /// `(I1(a), I2(a))`.
    fn char_sums(&self, a: Vec<u32>) -> PyResult<(i64, i64)> {
        let r = char_sum_report(&self.ctx, &self.el(a)?).map_err(py_err)?;
        Ok((r.i1, r.i2))
    }

    /// Regime label of the code for `a`.
    fn case(&self, a: Vec<u32>) -> PyResult<String> {
        Ok(classify_case(&self.ctx, &self.el(a)?)
            .map_err(py_err)?
            .label
            .to_string())
    }

    /// Enumerated weight distribution and complete weight enumerator.
    fn enumerate<'py>(&self, py: Python<'py>, a: Vec<u32>) -> PyResult<(Wd, Bound<'py, PyDict>)> {
        let bounds = Bounds::from_env().map_err(py_err)?;
        let (wd, cwe) = enumerate_code(&self.ctx, &self.el(a)?, &bounds).map_err(py_err)?;
        Ok((wd.entries, cwe_dict(py, &cwe.terms)?))
    }

    /// Predicted tables; zero-frequency rows are dropped.
    fn predict<'py>(&self, py: Python<'py>, a: Vec<u32>) -> PyResult<(Wd, Bound<'py, PyDict>)> {
        let case = classify_case(&self.ctx, &self.el(a)?).map_err(py_err)?;
        let wd = predict_wd(&case).map_err(py_err)?.realized().0;
        Ok((
            wd.entries,
            cwe_dict(py, &predict_cwe(&case).map_err(py_err)?.terms)?,
        ))
    }

    /// `(A1, A2, A3, distance)` of the dual code from the power moments,
    /// checked against column counting.
    fn dual(&self, a: Vec<u32>) -> PyResult<(u64, u64, u64, String)> {
        let a = self.el(a)?;
        let bounds = Bounds::from_env().map_err(py_err)?;
        let (wd, _) = enumerate_code(&self.ctx, &a, &bounds).map_err(py_err)?;
        let mom = dual_low_weights_moments(&wd, self.ctx.p()).map_err(py_err)?;
        let cols = dual_low_weights_columns(&self.ctx, &a, &bounds).map_err(py_err)?;
        if !cols.same_counts(&mom) {
            return Err(PyValueError::new_err(format!(
                "dual counts disagree: columns {cols:?}, moments {mom:?}"
            )));
        }
        Ok((
            mom.a1,
            mom.a2,
            mom.a3,
            dual_min_distance_upto3(&mom).to_string(),
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "Field(p={}, m={}, modulus={:?})",
            self.ctx.p(),
            self.ctx.m(),
            self.ctx.modulus()
        )
    }
}

/// Runs a job and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (p, m, a, tasks="enumerate,predict", modulus=None, seed=0, s=3))]
fn run(
    p: u32,
    m: usize,
    a: &str,
    tasks: &str,
    modulus: Option<Vec<u32>>,
    seed: u64,
    s: u32,
) -> PyResult<String> {
    let a: ASpec = a.parse().map_err(py_err)?;
    let mut cfg = JobConfig::new(p, m, a, job::parse_tasks(tasks).map_err(py_err)?);
    cfg.modulus = modulus;
    cfg.bounds = Bounds::from_env().map_err(py_err)?;
    cfg.seed = seed;
    cfg.s = s;
    Ok(job::to_json(&job::run(&cfg).map_err(py_err)?))
}

#[pymodule]
fn tracecode_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
