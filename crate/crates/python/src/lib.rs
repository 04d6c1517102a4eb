//! Python bindings. Matrices cross the boundary as nested lists of Python
//! `complex`; structured results come back as dicts.

use chancomp::families;
use chancomp::{
    ComplexMatrix, DensityMatrix, Error, Exponent, GaussianChannel, OptimizerOptions,
    StinespringOperator,
};
use num_complex::Complex64;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyString};
use serde_json::Value;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_matrix(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if n == 0 || m == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err(
            "expected a non-empty rectangular matrix",
        ));
    }
    Ok(ComplexMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

fn from_matrix(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn exponent(p: &Bound<'_, PyAny>) -> PyResult<Exponent> {
    if let Ok(s) = p.cast::<PyString>() {
        return s.to_str()?.parse().map_err(py_err);
    }
    Exponent::new(p.extract::<f64>()?).map_err(py_err)
}

fn options(restarts: usize, seed: u64) -> OptimizerOptions {
    OptimizerOptions::default()
        .with_restarts(restarts)
        .with_seed(seed)
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn result_dict<'py, T: serde::Serialize>(
    py: Python<'py>,
    value: &T,
) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &v)
}

/// CP map in Kraus form.
#[pyclass(name = "KrausMap", module = "chancomp", frozen)]
struct PyKrausMap {
    inner: chancomp::KrausMap,
}

impl From<chancomp::KrausMap> for PyKrausMap {
    fn from(inner: chancomp::KrausMap) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyKrausMap {
    #[new]
    fn new(kraus: Vec<Vec<Vec<Complex64>>>) -> PyResult<Self> {
        let ops = kraus
            .into_iter()
            .map(to_matrix)
            .collect::<PyResult<Vec<_>>>()?;
        Ok(chancomp::KrausMap::new(ops).map_err(py_err)?.into())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = chancomp::ChannelFile::from_json(text).map_err(py_err)?;
        Ok(file.to_map().map_err(py_err)?.into())
    }

    fn to_json(&self) -> PyResult<String> {
        chancomp::ChannelFile::from_map(&self.inner, Default::default())
            .to_json()
            .map_err(py_err)
    }

    #[getter]
    fn d_in(&self) -> usize {
        self.inner.d_in()
    }

    #[getter]
    fn d_out(&self) -> usize {
        self.inner.d_out()
    }

    #[getter]
    fn kraus(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.inner.kraus().iter().map(from_matrix).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "KrausMap(d_in={}, d_out={}, kraus={})",
            self.inner.d_in(),
            self.inner.d_out(),
            self.inner.len()
        )
    }

    fn is_trace_preserving(&self) -> bool {
        self.inner.is_trace_preserving()
    }

    fn apply(&self, rho: Vec<Vec<Complex64>>) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(from_matrix(
            &self.inner.apply(&to_matrix(rho)?).map_err(py_err)?,
        ))
    }

    fn choi(&self) -> Vec<Vec<Complex64>> {
        from_matrix(self.inner.choi().matrix())
    }

    fn choi_rank(&self) -> usize {
        self.inner.choi().rank(chancomp::Tolerances::default().rank)
    }

    fn tensor(&self, other: &PyKrausMap) -> PyResult<Self> {
        Ok(self.inner.tensor(&other.inner).map_err(py_err)?.into())
    }

    fn complement(&self) -> Self {
        chancomp::complement(&self.inner).into()
    }

    fn minimal_form(&self) -> Self {
        chancomp::minimal_form(&self.inner).into()
    }
}

#[pyfunction]
fn complement(phi: &PyKrausMap) -> PyKrausMap {
    phi.complement()
}

#[pyfunction]
fn minimal_form(phi: &PyKrausMap) -> PyKrausMap {
    phi.minimal_form()
}

#[pyfunction]
fn identity(d: usize) -> PyKrausMap {
    families::identity(d).into()
}

#[pyfunction]
fn completely_depolarizing(d: usize) -> PyKrausMap {
    families::completely_depolarizing(d).into()
}

#[pyfunction]
fn depolarizing(d: usize, p: f64) -> PyResult<PyKrausMap> {
    Ok(families::depolarizing(d, p).map_err(py_err)?.into())
}

#[pyfunction]
fn transpose_depolarizing(d: usize) -> PyResult<PyKrausMap> {
    Ok(families::transpose_depolarizing(d).map_err(py_err)?.into())
}

#[pyfunction]
fn wh_complement(d: usize) -> PyResult<PyKrausMap> {
    Ok(families::wh_complement(d).map_err(py_err)?.into())
}

#[pyfunction]
fn diagonal_channel(c: Vec<Vec<Complex64>>) -> PyResult<PyKrausMap> {
    let c = families::CorrelationMatrix::new(to_matrix(c)?).map_err(py_err)?;
    Ok(families::diagonal_channel(&c).map_err(py_err)?.into())
}

#[pyfunction]
#[pyo3(signature = (d_in, d_out, n, seed = 0xC0FFEE))]
fn random_channel(d_in: usize, d_out: usize, n: usize, seed: u64) -> PyResult<PyKrausMap> {
    Ok(families::random_channel(d_in, d_out, n, seed)
        .map_err(py_err)?
        .into())
}

#[pyfunction]
#[pyo3(signature = (d_in, d_out, n, seed = 0xC0FFEE))]
fn random_cp_map(d_in: usize, d_out: usize, n: usize, seed: u64) -> PyResult<PyKrausMap> {
    Ok(families::random_cp_map(d_in, d_out, n, seed)
        .map_err(py_err)?
        .into())
}

#[pyfunction]
#[pyo3(signature = (d_in, d_out, m, seed = 0xC0FFEE))]
fn random_eb_channel(d_in: usize, d_out: usize, m: usize, seed: u64) -> PyResult<PyKrausMap> {
    let spec = families::random_eb_spec(d_in, d_out, m, seed).map_err(py_err)?;
    Ok(families::eb_channel(&spec).into())
}

fn witness_dict<'py>(py: Python<'py>, r: &chancomp::WitnessReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("passes", r.passes())?;
    d.set_item("residual", r.residual)?;
    d.set_item("forward_residual", r.forward_residual)?;
    d.set_item("backward_residual", r.backward_residual)?;
    d.set_item("channel_residual", r.channel_residual)?;
    d.set_item("tolerance", r.tolerance)?;
    d.set_item("witness", from_matrix(&r.witness.w))?;
    Ok(d)
}

/// Witness between two Kraus forms of one channel.
#[pyfunction]
fn equivalence_witness<'py>(
    py: Python<'py>,
    a: &PyKrausMap,
    b: &PyKrausMap,
) -> PyResult<Bound<'py, PyDict>> {
    let r = chancomp::equivalence_witness(
        &StinespringOperator::from_kraus(&a.inner),
        &StinespringOperator::from_kraus(&b.inner),
    )
    .map_err(py_err)?;
    witness_dict(py, &r)
}

/// Witness between two maps complementary to one common channel.
#[pyfunction]
fn complements_witness<'py>(
    py: Python<'py>,
    a: &PyKrausMap,
    b: &PyKrausMap,
) -> PyResult<Bound<'py, PyDict>> {
    let r = chancomp::complements_witness(&a.inner, &b.inner).map_err(py_err)?;
    witness_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (phi, p, restarts = 50, seed = 0xC0FFEE))]
fn nu_p<'py>(
    py: Python<'py>,
    phi: &PyKrausMap,
    p: &Bound<'py, PyAny>,
    restarts: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let p = exponent(p)?;
    let r = py
        .detach(|| chancomp::nu_p(&phi.inner, p, &options(restarts, seed)))
        .map_err(py_err)?;
    result_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (phi, restarts = 50, seed = 0xC0FFEE))]
fn min_output_entropy<'py>(
    py: Python<'py>,
    phi: &PyKrausMap,
    restarts: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let r = py
        .detach(|| chancomp::min_output_entropy(&phi.inner, &options(restarts, seed)))
        .map_err(py_err)?;
    result_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (phi, rho, restarts = 50, seed = 0xC0FFEE))]
fn h_hat<'py>(
    py: Python<'py>,
    phi: &PyKrausMap,
    rho: Vec<Vec<Complex64>>,
    restarts: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let rho = DensityMatrix::new(to_matrix(rho)?).map_err(py_err)?;
    let r = py
        .detach(|| chancomp::h_hat(&phi.inner, &rho, &options(restarts, seed)))
        .map_err(py_err)?;
    result_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (phi1, phi2, restarts = 50, seed = 0xC0FFEE))]
fn additivity_gap<'py>(
    py: Python<'py>,
    phi1: &PyKrausMap,
    phi2: &PyKrausMap,
    restarts: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let r = py
        .detach(|| chancomp::additivity_gap(&phi1.inner, &phi2.inner, &options(restarts, seed)))
        .map_err(py_err)?;
    result_dict(py, &r)
}

#[pyfunction]
fn wh_violation_witness<'py>(
    py: Python<'py>,
    d: usize,
    p: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    let w = chancomp::wh_violation_witness(d, exponent(p)?).map_err(py_err)?;
    result_dict(py, &w)
}

/// Complement of a one-mode attenuation (`k < 1`) or amplifier (`k > 1`).
#[pyfunction]
fn gaussian_complement<'py>(py: Python<'py>, k: f64) -> PyResult<Bound<'py, PyAny>> {
    let ch = if k < 1.0 {
        GaussianChannel::attenuation(k)
    } else {
        GaussianChannel::amplifier(k)
    }
    .map_err(py_err)?;
    result_dict(py, &chancomp::complement_gaussian(&ch).map_err(py_err)?)
}

#[pymodule]
#[pyo3(name = "chancomp")]
fn chancomp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyKrausMap>()?;
    m.add_function(wrap_pyfunction!(complement, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_form, m)?)?;
    m.add_function(wrap_pyfunction!(identity, m)?)?;
    m.add_function(wrap_pyfunction!(completely_depolarizing, m)?)?;
    m.add_function(wrap_pyfunction!(depolarizing, m)?)?;
    m.add_function(wrap_pyfunction!(transpose_depolarizing, m)?)?;
    m.add_function(wrap_pyfunction!(wh_complement, m)?)?;
    m.add_function(wrap_pyfunction!(diagonal_channel, m)?)?;
    m.add_function(wrap_pyfunction!(random_channel, m)?)?;
    m.add_function(wrap_pyfunction!(random_cp_map, m)?)?;
    m.add_function(wrap_pyfunction!(random_eb_channel, m)?)?;
    m.add_function(wrap_pyfunction!(equivalence_witness, m)?)?;
    m.add_function(wrap_pyfunction!(complements_witness, m)?)?;
    m.add_function(wrap_pyfunction!(nu_p, m)?)?;
    m.add_function(wrap_pyfunction!(min_output_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(h_hat, m)?)?;
    m.add_function(wrap_pyfunction!(additivity_gap, m)?)?;
    m.add_function(wrap_pyfunction!(wh_violation_witness, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_complement, m)?)?;
    Ok(())
}
