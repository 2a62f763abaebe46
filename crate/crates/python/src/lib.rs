//! Python bindings: a `Density` class, the closed-form measures and their
//! quadrature/series oracle counterparts.

use infoenergy::families;
use infoenergy::measures::{self, BoundReport};
use infoenergy::oracle;
use infoenergy::{to_natural, Density, Error, MeasureReport, Method, Mixture, QuadratureConfig};
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(infoenergy, DomainViolation, PyValueError);
create_exception!(infoenergy, NotConverged, PyArithmeticError);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::DomainViolation(_) => DomainViolation::new_err(e.to_string()),
        Error::NotConverged { .. } => NotConverged::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A member of one of the catalogued exponential families.
#[pyclass(name = "Density", module = "infoenergy", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDensity {
    inner: Density,
    family: String,
    params: String,
    source: Vec<f64>,
}

#[pymethods]
impl PyDensity {
    /// `Density("normal", "mu=0,sigma=1")`; list values are colon-separated.
    #[new]
    fn new(family: &str, params: &str) -> PyResult<Self> {
        let named = families::parse_named(params).map_err(py_err)?;
        let (entry, source) = families::build(family, &named).map_err(py_err)?;
        let theta = to_natural(entry.descriptor.as_ref(), &source).map_err(py_err)?;
        let inner = Density::new(entry.descriptor.clone(), theta).map_err(py_err)?;
        Ok(PyDensity {
            inner,
            family: family.to_string(),
            params: params.to_string(),
            source: source.coords().to_vec(),
        })
    }

    #[getter]
    fn family(&self) -> &str {
        &self.family
    }

    #[getter]
    fn source(&self) -> Vec<f64> {
        self.source.clone()
    }

    #[getter]
    fn natural(&self) -> Vec<f64> {
        self.inner.coords().to_vec()
    }

    #[getter]
    fn has_zero_carrier(&self) -> bool {
        self.inner.family().has_zero_carrier()
    }

    /// `log p(x)`; `x` is a number or a sequence for multivariate families.
    fn log_density(&self, x: &Bound<'_, PyAny>) -> PyResult<f64> {
        let point: Vec<f64> = match x.extract::<f64>() {
            Ok(v) => vec![v],
            Err(_) => x.extract()?,
        };
        let dim = self.inner.family().support().dim();
        if point.len() != dim {
            return Err(py_err(Error::DimensionMismatch {
                expected: dim,
                got: point.len(),
            }));
        }
        Ok(self.inner.log_density(&point))
    }

    fn __repr__(&self) -> String {
        format!("Density({:?}, {:?})", self.family, self.params)
    }
}

/// Result of a measure: value, how it was obtained, and diagnostics.
#[pyclass(name = "Report", module = "infoenergy", frozen, get_all)]
struct PyReport {
    value: f64,
    method: &'static str,
    valid: bool,
    omega: Option<Vec<f64>>,
    series_terms: Option<usize>,
    quadrature_error: Option<f64>,
    evaluations: Option<usize>,
}

#[pymethods]
impl PyReport {
    fn __float__(&self) -> f64 {
        self.value
    }

    fn __repr__(&self) -> String {
        format!("Report(value={:?}, method={:?})", self.value, self.method)
    }
}

impl From<MeasureReport> for PyReport {
    fn from(r: MeasureReport) -> Self {
        PyReport {
            value: r.value,
            method: match r.method {
                Method::ClosedForm => "closed_form",
                Method::OmegaTrick => "omega_trick",
                Method::Oracle => "oracle",
            },
            valid: r.valid,
            omega: r.diagnostics.omega,
            series_terms: r.diagnostics.series_terms,
            quadrature_error: r.diagnostics.quadrature_error,
            evaluations: r.diagnostics.evaluations,
        }
    }
}

fn config(abs_tol: Option<f64>, rel_tol: Option<f64>) -> PyResult<QuadratureConfig> {
    let mut cfg = QuadratureConfig::default();
    if let Some(v) = abs_tol {
        cfg.abs_tol = v;
    }
    if let Some(v) = rel_tol {
        cfg.rel_tol = v;
    }
    cfg.validate().map_err(py_err)?;
    Ok(cfg)
}

fn omega_point(p: &Density, omega: Option<Vec<f64>>) -> Vec<f64> {
    omega.unwrap_or_else(|| p.family().omega_points().swap_remove(0))
}

fn unknown_method(method: &str, allowed: &str) -> PyErr {
    PyValueError::new_err(format!("method must be one of {allowed}, got {method:?}"))
}

fn report(r: infoenergy::Result<MeasureReport>) -> PyResult<PyReport> {
    r.map(PyReport::from).map_err(py_err)
}

fn from_oracle(r: infoenergy::Result<oracle::OracleResult>) -> PyResult<PyReport> {
    report(r.map(|o| MeasureReport::from_oracle(&o)))
}

fn omega_report(value: infoenergy::Result<f64>, omega: Vec<f64>) -> PyResult<PyReport> {
    let value = value.map_err(py_err)?;
    Ok(PyReport {
        value,
        method: "omega_trick",
        valid: true,
        omega: Some(omega),
        series_terms: None,
        quadrature_error: None,
        evaluations: None,
    })
}

/// Informational energy `I(p) = ∫ p² dμ`.
#[pyfunction]
#[pyo3(signature = (p, method = "closed", omega = None, abs_tol = None, rel_tol = None))]
fn energy(
    p: &PyDensity,
    method: &str,
    omega: Option<Vec<f64>>,
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
) -> PyResult<PyReport> {
    let p = &p.inner;
    match method {
        "closed" => report(measures::energy(p)),
        "omega" => {
            let w = omega_point(p, omega);
            omega_report(measures::energy_omega(p, &w), w)
        }
        "oracle" => from_oracle(oracle::integrate_product(p, p, &config(abs_tol, rel_tol)?)),
        other => Err(unknown_method(other, "closed, omega, oracle")),
    }
}

/// Cross informational energy `I(p, q) = ∫ p q dμ`.
#[pyfunction]
#[pyo3(signature = (p, q, method = "closed", abs_tol = None, rel_tol = None))]
fn cross_energy(
    p: &PyDensity,
    q: &PyDensity,
    method: &str,
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
) -> PyResult<PyReport> {
    match method {
        "closed" => report(measures::cross_energy(&p.inner, &q.inner)),
        "oracle" => from_oracle(oracle::integrate_product(
            &p.inner,
            &q.inner,
            &config(abs_tol, rel_tol)?,
        )),
        other => Err(unknown_method(other, "closed, oracle")),
    }
}

/// Onicescu correlation `ρ(p, q) = I(p, q) / √(I(p) I(q))`.
#[pyfunction]
#[pyo3(signature = (p, q, method = "closed", omega = None, abs_tol = None, rel_tol = None))]
fn correlation(
    p: &PyDensity,
    q: &PyDensity,
    method: &str,
    omega: Option<Vec<f64>>,
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
) -> PyResult<PyReport> {
    let (p, q) = (&p.inner, &q.inner);
    match method {
        "closed" => report(measures::correlation(p, q)),
        "omega" => {
            let w = omega_point(p, omega);
            omega_report(measures::correlation_omega(p, q, &w), w)
        }
        "oracle" => from_oracle(oracle::correlation(p, q, &config(abs_tol, rel_tol)?)),
        other => Err(unknown_method(other, "closed, omega, oracle")),
    }
}

/// Cauchy-Schwarz divergence `D_CS(p, q) = −log ρ(p, q)`.
#[pyfunction]
#[pyo3(signature = (p, q, method = "closed", omega = None, abs_tol = None, rel_tol = None))]
fn cauchy_schwarz(
    p: &PyDensity,
    q: &PyDensity,
    method: &str,
    omega: Option<Vec<f64>>,
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
) -> PyResult<PyReport> {
    let (p, q) = (&p.inner, &q.inner);
    match method {
        "closed" => report(measures::cauchy_schwarz(p, q)),
        "omega" => {
            let w = omega_point(p, omega);
            omega_report(measures::cauchy_schwarz_omega(p, q, &w), w)
        }
        "oracle" => from_oracle(oracle::cauchy_schwarz(p, q, &config(abs_tol, rel_tol)?)),
        other => Err(unknown_method(other, "closed, omega, oracle")),
    }
}

/// Hölder divergence with exponent `alpha > 1` (conjugate `alpha/(alpha−1)`)
/// and power `gamma > 0`. `"auto"` uses the likelihood-ratio form when the
/// carrier term vanishes and the oracle otherwise.
#[pyfunction]
#[pyo3(signature = (p, q, alpha, gamma, method = "auto", omega = None, abs_tol = None, rel_tol = None))]
#[allow(clippy::too_many_arguments)]
fn holder(
    p: &PyDensity,
    q: &PyDensity,
    alpha: f64,
    gamma: f64,
    method: &str,
    omega: Option<Vec<f64>>,
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
) -> PyResult<PyReport> {
    let (p, q) = (&p.inner, &q.inner);
    let oracle = || {
        report(measures::holder_oracle(
            p,
            q,
            alpha,
            gamma,
            &config(abs_tol, rel_tol)?,
        ))
    };
    match method {
        "auto" if p.family().has_zero_carrier() => report(measures::holder(p, q, alpha, gamma)),
        "auto" | "oracle" => oracle(),
        "omega" | "closed" => {
            let w = omega_point(p, omega);
            report(measures::holder_at(p, q, alpha, gamma, &w))
        }
        other => Err(unknown_method(other, "auto, closed, omega, oracle")),
    }
}

/// Shannon entropy `H(p) = −∫ p log p dμ`.
#[pyfunction]
#[pyo3(signature = (p, method = "closed", abs_tol = None, rel_tol = None))]
fn shannon_entropy(
    p: &PyDensity,
    method: &str,
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
) -> PyResult<PyReport> {
    match method {
        "closed" => report(measures::shannon_entropy(&p.inner)),
        "oracle" => from_oracle(oracle::entropy_integral(
            &p.inner,
            &config(abs_tol, rel_tol)?,
        )),
        other => Err(unknown_method(other, "closed, oracle")),
    }
}

/// Rényi entropy of order two, `−log I(p)`.
#[pyfunction]
fn renyi2(p: &PyDensity) -> PyResult<f64> {
    measures::renyi2(&p.inner).map_err(py_err)
}

/// Vajda quadratic entropy `1 − I(p)`.
#[pyfunction]
fn vajda2(p: &PyDensity) -> PyResult<f64> {
    measures::vajda2(&p.inner).map_err(py_err)
}

/// Jensen energy divergence `½(I(p) + I(q)) − I((p + q)/2)`.
#[pyfunction]
#[pyo3(signature = (p, q, method = "closed", abs_tol = None, rel_tol = None))]
fn energy_jensen_divergence(
    p: &PyDensity,
    q: &PyDensity,
    method: &str,
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
) -> PyResult<PyReport> {
    match method {
        "closed" => report(measures::energy_jensen_divergence(&p.inner, &q.inner)),
        "oracle" => from_oracle(oracle::energy_jensen_divergence(
            &p.inner,
            &q.inner,
            &config(abs_tol, rel_tol)?,
        )),
        other => Err(unknown_method(other, "closed, oracle")),
    }
}

/// Energy of the finite mixture `Σ wᵢ pᵢ`.
#[pyfunction]
#[pyo3(signature = (weights, components, method = "closed", abs_tol = None, rel_tol = None))]
fn mixture_energy(
    weights: Vec<f64>,
    components: Vec<PyRef<'_, PyDensity>>,
    method: &str,
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
) -> PyResult<PyReport> {
    let comps = components.iter().map(|c| c.inner.clone()).collect();
    let m = Mixture::new(weights, comps).map_err(py_err)?;
    match method {
        "closed" => report(measures::mixture_energy(&m)),
        "oracle" => from_oracle(oracle::integrate_mixture_square(
            &m,
            &config(abs_tol, rel_tol)?,
        )),
        other => Err(unknown_method(other, "closed, oracle")),
    }
}

/// Margins of `H(p) + ½I(p) ≥ 1 − log 2` and `H×(p:q) ≥ 1 − √(I(p)I(q))`.
#[pyfunction]
#[pyo3(signature = (p, q, abs_tol = None, rel_tol = None))]
fn bound_checks<'py>(
    py: Python<'py>,
    p: &PyDensity,
    q: &PyDensity,
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let b: BoundReport =
        measures::bound_checks(&p.inner, &q.inner, &config(abs_tol, rel_tol)?).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("entropy", b.entropy)?;
    d.set_item("energy_p", b.energy_p)?;
    d.set_item("energy_q", b.energy_q)?;
    d.set_item("cross_entropy", b.cross_entropy)?;
    d.set_item("entropy_energy_margin", b.entropy_energy_margin)?;
    d.set_item("cross_entropy_margin", b.cross_entropy_margin)?;
    d.set_item("holds", b.holds())?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "infoenergy")]
fn infoenergy_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("DomainViolation", py.get_type::<DomainViolation>())?;
    m.add("NotConverged", py.get_type::<NotConverged>())?;
    m.add_class::<PyDensity>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(cross_energy, m)?)?;
    m.add_function(wrap_pyfunction!(correlation, m)?)?;
    m.add_function(wrap_pyfunction!(cauchy_schwarz, m)?)?;
    m.add_function(wrap_pyfunction!(holder, m)?)?;
    m.add_function(wrap_pyfunction!(shannon_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(renyi2, m)?)?;
    m.add_function(wrap_pyfunction!(vajda2, m)?)?;
    m.add_function(wrap_pyfunction!(energy_jensen_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(mixture_energy, m)?)?;
    m.add_function(wrap_pyfunction!(bound_checks, m)?)?;
    Ok(())
}
