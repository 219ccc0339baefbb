//! Python bindings: pattern lookup and properties, classification, the sliding
//! checker, its oracle and the reformulation emitter.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use slidets_core::checker::{
    oracle_windows, prefix_profile as profile, select_equation, slide_check_with, EquationKind,
};
use slidets_core::classify::{feasible_triples, representatives};
use slidets_core::patterns::{catalog, lookup as find, Pattern};
use slidets_core::reformulate::emit_reformulation;
use slidets_core::series::{self, FeatureKind};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pattern(name: &str) -> PyResult<&'static Pattern> {
    find(name).map_err(err)
}

fn feature(name: &str) -> PyResult<FeatureKind> {
    name.parse().map_err(err)
}

fn equation(f: FeatureKind, p: &Pattern, name: Option<&str>) -> PyResult<EquationKind> {
    match name {
        None | Some("auto") => select_equation(f, p).map_err(err),
        Some(name) => name.parse().map_err(err),
    }
}

/// A time series of integer values.
#[pyclass(frozen)]
struct Series {
    inner: series::Series,
}

#[pymethods]
impl Series {
    #[new]
    fn new(values: Vec<i64>) -> PyResult<Self> {
        Ok(Series { inner: series::Series::new(values).map_err(err)? })
    }

    /// Parses whitespace- or comma-separated values; `#` starts a comment line.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Series { inner: series::Series::parse(text).map_err(err)? })
    }

    fn values(&self) -> Vec<i64> {
        self.inner.values().to_vec()
    }

    /// Signature as a string over `<`, `=`, `>`.
    fn signature(&self) -> PyResult<String> {
        Ok(series::signature(&self.inner).map_err(err)?.iter().map(ToString::to_string).collect())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Series({:?})", self.inner.values())
    }
}

/// Canonical names of the catalog patterns.
#[pyfunction]
fn patterns() -> Vec<String> {
    catalog().iter().map(|p| p.name().to_string()).collect()
}

/// Regex, trims and pattern properties of a catalog pattern.
#[pyfunction]
fn properties<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyDict>> {
    let p = pattern(name)?;
    let m = p.properties();
    let d = PyDict::new(py);
    d.set_item("name", p.name())?;
    d.set_item("regex", p.regex())?;
    d.set_item("b", p.b())?;
    d.set_item("a", p.a())?;
    d.set_item("omega", p.omega())?;
    let [reversible, inflexion_free, one_inflexion, exclude_out_in, single_letter] = m.table_flags();
    d.set_item("reversible", reversible)?;
    d.set_item("inflexion_free", inflexion_free)?;
    d.set_item("one_inflexion", one_inflexion)?;
    d.set_item("exclude_out_in", exclude_out_in)?;
    d.set_item("single_letter", single_letter)?;
    d.set_item("reverse", p.reverse().map(|r| r.name().to_string()))?;
    Ok(d)
}

/// Feasible triples and representatives of a catalog pattern.
#[pyfunction]
fn classify<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyDict>> {
    let p = pattern(name)?;
    let d = PyDict::new(py);
    d.set_item("triples", feasible_triples(p).iter().map(ToString::to_string).collect::<Vec<_>>())?;
    d.set_item("representatives", representatives(p).iter().map(ToString::to_string).collect::<Vec<_>>())?;
    Ok(d)
}

/// Window contributions of `slide(feature, pattern, m)` over `series`.
///
/// `equation` is `auto` (the cheapest valid one), `plain`, `clamp`, `guard` or `none`.
#[pyfunction]
#[pyo3(signature = (pattern_name, feature_name, m, series, equation_name=None))]
fn slide_check<'py>(
    py: Python<'py>,
    pattern_name: &str,
    feature_name: &str,
    m: usize,
    series: &Series,
    equation_name: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let p = pattern(pattern_name)?;
    let f = feature(feature_name)?;
    let eq = equation(f, p, equation_name)?;
    let r = py.detach(|| slide_check_with(f, p, m, &series.inner, eq)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("equation", r.equation.as_str())?;
    d.set_item("values", r.values)?;
    d.set_item("low", r.low)?;
    d.set_item("up", r.up)?;
    d.set_item("fallback", r.fallback)?;
    Ok(d)
}

/// Window contributions from the quadratic reference.
#[pyfunction]
fn oracle(pattern_name: &str, feature_name: &str, m: usize, series: &Series) -> PyResult<Vec<i64>> {
    oracle_windows(feature(feature_name)?, pattern(pattern_name)?, m, &series.inner).map_err(err)
}

/// Forward and backward aggregates (1-based, index 0 unused) and the total.
#[pyfunction]
fn prefix_profile(pattern_name: &str, feature_name: &str, series: &Series) -> PyResult<(Vec<i64>, Vec<i64>, i64)> {
    let prof = profile(feature(feature_name)?, pattern(pattern_name)?, &series.inner).map_err(err)?;
    Ok((prof.fwd, prof.bwd, prof.total))
}

/// JSON constraint model of `slide(feature, pattern, m)` over `n` values.
#[pyfunction]
#[pyo3(signature = (pattern_name, feature_name, m, n, equation_name=None))]
fn reformulate(
    pattern_name: &str,
    feature_name: &str,
    m: usize,
    n: usize,
    equation_name: Option<&str>,
) -> PyResult<String> {
    let p = pattern(pattern_name)?;
    let f = feature(feature_name)?;
    let eq = equation(f, p, equation_name)?;
    Ok(emit_reformulation(f, p, m, n, eq).map_err(err)?.to_json())
}

#[pymodule]
pub fn pyslidets(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Series>()?;
    m.add_function(wrap_pyfunction!(patterns, m)?)?;
    m.add_function(wrap_pyfunction!(properties, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(slide_check, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(prefix_profile, m)?)?;
    m.add_function(wrap_pyfunction!(reformulate, m)?)?;
    Ok(())
}
