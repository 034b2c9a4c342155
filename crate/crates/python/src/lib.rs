//! Python bindings. Reports cross the boundary as JSON text and come out as
//! plain dicts, the same documents the command line prints.

use discspace::decision::{self, Space};
use discspace::descriptor::{function_descriptor, parse_function_str, parse_symbol_str, symbol_descriptor};
use discspace::report::{to_json, Settings};
use discspace::witnesses::{criterion_for, quadrature_for, report_verdict, VerifyConfig};
use discspace::{AnalyticFunction, EntireSymbol, C64};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;

create_exception!(discspace, DiscspaceError, PyValueError);

fn err(e: discspace::Error) -> PyErr {
    DiscspaceError::new_err(e.to_string())
}

/// Parses report JSON into Python objects.
fn loads<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn dump<'py, T: serde::Serialize + ?Sized>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    loads(py, &to_json(v))
}

#[pyclass(name = "Space", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySpace(Space);

#[pymethods]
impl PySpace {
    /// A space from its token, e.g. `dt:4,2.2` or `bloch`.
    #[new]
    fn new(token: &str) -> PyResult<Self> {
        token.parse().map(PySpace).map_err(err)
    }

    fn normalize(&self) -> PyResult<Self> {
        self.0.normalize().map(PySpace).map_err(err)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Space('{}')", self.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

/// Accepts a `Space` or a token string.
fn space_arg(obj: &Bound<'_, PyAny>) -> PyResult<Space> {
    if let Ok(s) = obj.cast::<PySpace>() {
        return Ok(s.get().0);
    }
    let token: String = obj.extract()?;
    token.parse().map_err(err)
}

#[pyclass(name = "Function", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFunction(AnalyticFunction);

#[pymethods]
impl PyFunction {
    /// A function from its JSON descriptor.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_function_str(text).map(PyFunction).map_err(err)
    }

    #[staticmethod]
    fn binomial(beta: f64) -> PyResult<Self> {
        AnalyticFunction::binomial(beta).map(PyFunction).map_err(err)
    }

    #[staticmethod]
    fn polynomial(coeffs: Vec<Complex64>) -> Self {
        PyFunction(discspace::PowerSeries::new(coeffs.into_iter().map(|c| C64::new(c.re, c.im)).collect()).into())
    }

    fn __call__(&self, z: Complex64) -> PyResult<Complex64> {
        let v = self.0.eval(C64::new(z.re, z.im)).map_err(err)?;
        Ok(Complex64::new(v.re, v.im))
    }

    fn derivative(&self) -> Self {
        PyFunction(self.0.derivative())
    }

    fn compose(&self, symbol: &PySymbol) -> Self {
        PyFunction(AnalyticFunction::compose(symbol.0.clone(), self.0.clone()))
    }

    fn to_json(&self) -> PyResult<String> {
        function_descriptor(&self.0).map(|v| to_json(&v)).map_err(err)
    }
}

#[pyclass(name = "Symbol", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySymbol(EntireSymbol);

#[pymethods]
impl PySymbol {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_symbol_str(text).map(PySymbol).map_err(err)
    }

    #[staticmethod]
    fn exp() -> Self {
        PySymbol(EntireSymbol::exp())
    }

    #[staticmethod]
    fn exp_of_square() -> Self {
        PySymbol(EntireSymbol::exp_of_square())
    }

    #[staticmethod]
    fn polynomial(coeffs: Vec<Complex64>) -> Self {
        PySymbol(EntireSymbol::polynomial(coeffs.into_iter().map(|c| C64::new(c.re, c.im)).collect()))
    }

    fn __call__(&self, z: Complex64) -> Complex64 {
        let v = self.0.eval(C64::new(z.re, z.im));
        Complex64::new(v.re, v.im)
    }

    /// Order, type and class, as a dict.
    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let c = self.0.classify(&Settings::default().symbol).map_err(err)?;
        dump(py, &c)
    }

    fn to_json(&self) -> String {
        to_json(&symbol_descriptor(&self.0))
    }
}

/// Verdict for `S_phi(X) ⊂ Y`: class, citation, route and region.
#[pyfunction]
fn superposition_class<'py>(py: Python<'py>, x: &Bound<'py, PyAny>, y: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let v = decision::superposition_class(&space_arg(x)?, &space_arg(y)?).map_err(err)?;
    dump(py, &v)
}

#[pyfunction]
fn decide<'py>(py: Python<'py>, x: &Bound<'py, PyAny>, y: &Bound<'py, PyAny>, symbol: &PySymbol) -> PyResult<Bound<'py, PyAny>> {
    let d = decision::decide(&space_arg(x)?, &space_arg(y)?, &symbol.0, &Settings::default().symbol).map_err(err)?;
    dump(py, &d)
}

#[pyfunction]
fn includes<'py>(py: Python<'py>, x: &Bound<'py, PyAny>, y: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let inc = decision::includes(&space_arg(x)?, &space_arg(y)?).map_err(err)?;
    dump(py, &inc)
}

/// Quadrature norm along the radius ladder.
#[pyfunction]
#[pyo3(signature = (space, function, ladder_depth=None))]
fn norm<'py>(py: Python<'py>, space: &Bound<'py, PyAny>, function: &PyFunction, ladder_depth: Option<u32>) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = Settings::default().quadrature;
    if let Some(d) = ladder_depth {
        cfg = cfg.with_ladder_depth(d);
    }
    let space = space_arg(space)?.normalize().map_err(err)?;
    let f = function.0.clone();
    let report = py.detach(|| quadrature_for(&f, &space, &cfg)).map_err(err)?;
    dump(py, &report)
}

/// Membership verdict (`in`, `out` or `unknown`), by coefficient criterion when one applies.
#[pyfunction]
fn member(py: Python<'_>, space: &Bound<'_, PyAny>, function: &PyFunction) -> PyResult<String> {
    let space = space_arg(space)?.normalize().map_err(err)?;
    let f = function.0.clone();
    py.detach(|| {
        let cfg = VerifyConfig::default();
        match criterion_for(&f, &space, &cfg, &mut Vec::new())? {
            Some(m) if m.verdict != discspace::lacunary::TriState::Unknown => Ok(m.verdict),
            _ => Ok(report_verdict(&quadrature_for(&f, &space, &Settings::default().quadrature)?)),
        }
    })
    .map(|v| v.as_str().to_string())
    .map_err(err)
}

/// The paper check suite; all checks when `criteria` is empty.
#[pyfunction]
#[pyo3(signature = (criteria=Vec::new()))]
fn run_suite<'py>(py: Python<'py>, criteria: Vec<u8>) -> PyResult<Bound<'py, PyAny>> {
    let results = py.detach(|| discspace::suite::run(&criteria));
    dump(py, &results)
}

/// Runs the command line in-process: `(exit code, stdout, stderr)`.
#[pyfunction]
fn cli(py: Python<'_>, args: &Bound<'_, PyList>) -> PyResult<(i32, String, String)> {
    let mut argv = vec!["discspace".to_string()];
    for a in args.iter() {
        argv.push(a.extract()?);
    }
    let (code, out, errs) = py.detach(|| {
        let (mut out, mut errs) = (Vec::new(), Vec::new());
        let code = discspace::cli::run(argv, &mut out, &mut errs);
        (code, out, errs)
    });
    Ok((
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&errs).into_owned(),
    ))
}

#[pymodule(name = "discspace")]
fn discspace_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DiscspaceError", m.py().get_type::<DiscspaceError>())?;
    m.add_class::<PySpace>()?;
    m.add_class::<PyFunction>()?;
    m.add_class::<PySymbol>()?;
    m.add_function(wrap_pyfunction!(superposition_class, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(includes, m)?)?;
    m.add_function(wrap_pyfunction!(norm, m)?)?;
    m.add_function(wrap_pyfunction!(member, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(cli, m)?)?;
    Ok(())
}
