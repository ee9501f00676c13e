//! Python bindings: elements of Fun(U)_q and U_q sl2 as `Fun` / `Uq`, plus the integrals,
//! matrix model, radial operators and spectra as functions. Scalars cross the boundary
//! as strings in the expression grammar.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use qdisc::cli::format::{fun_from_json, fun_to_json, parse_fun, parse_radial, parse_uq, radial_text};
use qdisc::discfun::{act_fun, eta, nu_integral, scalar_product as sp, span_check, to_matrix, FinElement, FunElement};
use qdisc::expr::parse_scalar;
use qdisc::hopf::{antipode, casimir, counit, star_uq, uq_mul, UqElement};
use qdisc::laplace::{box0, casimir_matches, spectrum as spec};
use qdisc::{ExactScalar, NumericContext};

fn to_py(e: qdisc::Error) -> PyErr {
    if e.is_math_domain() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn finite(f: &FunElement) -> PyResult<&FinElement> {
    if f.pol.is_zero() {
        Ok(&f.fin)
    } else {
        Err(PyValueError::new_err(format!("needs a finite function, got polynomial part {}", f.pol)))
    }
}

/// An element of Fun(U)_q.
#[pyclass(name = "Fun", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyFun {
    pub inner: FunElement,
}

#[pymethods]
impl PyFun {
    #[new]
    fn new(expr: &str) -> PyResult<Self> {
        Ok(PyFun { inner: parse_fun(expr).map_err(to_py)? })
    }

    #[staticmethod]
    fn from_json(src: &str) -> PyResult<Self> {
        let v = serde_json::from_str(src).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyFun { inner: fun_from_json(&v).map_err(to_py)? })
    }

    fn to_json(&self) -> String {
        fun_to_json(&self.inner).to_string()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn star(&self) -> Self {
        PyFun { inner: self.inner.star() }
    }

    /// `η(f)` as a scalar string; finite functions only.
    fn eta(&self) -> PyResult<String> {
        Ok(eta(finite(&self.inner)?).to_string())
    }

    fn nu(&self) -> PyResult<String> {
        Ok(nu_integral(finite(&self.inner)?).to_string())
    }

    fn __add__(&self, other: &Self) -> Self {
        PyFun { inner: self.inner.add(&other.inner) }
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyFun { inner: self.inner.sub(&other.inner) }
    }

    fn __mul__(&self, other: &Self) -> Self {
        PyFun { inner: self.inner.mul(&other.inner) }
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Fun({:?})", self.inner.to_string())
    }
}

/// An element of U_q sl2 in PBW form.
#[pyclass(name = "Uq", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyUq {
    pub inner: UqElement,
}

#[pymethods]
impl PyUq {
    #[new]
    fn new(expr: &str) -> PyResult<Self> {
        Ok(PyUq { inner: parse_uq(expr).map_err(to_py)? })
    }

    #[staticmethod]
    fn casimir() -> Self {
        PyUq { inner: casimir() }
    }

    fn antipode(&self) -> Self {
        PyUq { inner: antipode(&self.inner) }
    }

    fn counit(&self) -> String {
        counit(&self.inner).to_string()
    }

    fn star(&self) -> Self {
        PyUq { inner: star_uq(&self.inner) }
    }

    /// `self · f`.
    fn act(&self, f: &PyFun) -> PyFun {
        PyFun { inner: act_fun(&self.inner, &f.inner) }
    }

    fn __add__(&self, other: &Self) -> Self {
        PyUq { inner: self.inner.add(&other.inner) }
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyUq { inner: self.inner.sub(&other.inner) }
    }

    fn __mul__(&self, other: &Self) -> Self {
        PyUq { inner: uq_mul(&self.inner, &other.inner) }
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Uq({:?})", self.inner.to_string())
    }
}

#[pyclass(name = "Spectrum", get_all, frozen)]
pub struct PySpectrum {
    pub q: f64,
    pub n: usize,
    pub eigs: Vec<f64>,
    pub weights: Vec<f64>,
    pub c1: f64,
    pub c2: f64,
}

/// `ν(f2* f1)`.
#[pyfunction]
pub fn scalar_product(f1: &PyFun, f2: &PyFun) -> PyResult<String> {
    Ok(sp(finite(&f1.inner)?, finite(&f2.inner)?).to_string())
}

/// Sparse entries `(row, col, value)` of the truncated matrix model.
#[pyfunction]
pub fn matrix(f: &PyFun, cutoff: usize) -> PyResult<Vec<(usize, usize, String)>> {
    qdisc::discfun::check_cutoff(&f.inner, cutoff).map_err(to_py)?;
    Ok(to_matrix(&f.inner, cutoff).entries.iter().map(|(&(r, c), v)| (r, c, v.to_string())).collect())
}

/// Numeric value of a scalar expression at `q`.
#[pyfunction]
pub fn eval_scalar(expr: &str, q: f64) -> PyResult<f64> {
    let ctx = NumericContext::new(q).map_err(to_py)?;
    parse_scalar(expr).and_then(|c| c.eval(&ctx)).map_err(to_py)
}

/// `□⁽⁰⁾` on a layer-0 profile given as `"[a, b, …]"`; returns the same notation.
#[pyfunction]
pub fn box_radial(values: &str) -> PyResult<String> {
    let psi = parse_radial(values).map_err(to_py)?;
    Ok(radial_text(&box0(&psi, &ExactScalar::q())))
}

#[pyfunction]
pub fn casimir_check(values: &str) -> PyResult<bool> {
    Ok(casimir_matches(&parse_radial(values).map_err(to_py)?))
}

#[pyfunction]
pub fn spectrum(q: f64, n: usize) -> PyResult<PySpectrum> {
    let ctx = NumericContext::new(q).map_err(to_py)?;
    let s = spec(n, &ctx).map_err(to_py)?;
    Ok(PySpectrum { q: s.q, n: s.n, eigs: s.eigs, weights: s.weights, c1: s.c1, c2: s.c2 })
}

/// Whether `U_q sl2 · f0` spans the window `i, j ≤ m`.
#[pyfunction]
#[pyo3(signature = (m, maxlen=None))]
pub fn spans(m: u32, maxlen: Option<u32>) -> bool {
    span_check(m, maxlen.unwrap_or(2 * m)).contained
}

/// Runs the command-line front end; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
#[pyo3(signature = (args, stdin=""))]
pub fn run_cli(args: Vec<String>, stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qdisc".to_string()).chain(args);
    let code = qdisc::cli::main_with(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

#[pymodule]
pub fn qdisc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFun>()?;
    m.add_class::<PyUq>()?;
    m.add_class::<PySpectrum>()?;
    m.add_function(wrap_pyfunction!(scalar_product, m)?)?;
    m.add_function(wrap_pyfunction!(matrix, m)?)?;
    m.add_function(wrap_pyfunction!(eval_scalar, m)?)?;
    m.add_function(wrap_pyfunction!(box_radial, m)?)?;
    m.add_function(wrap_pyfunction!(casimir_check, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(spans, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
