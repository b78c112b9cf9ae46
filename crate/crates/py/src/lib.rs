use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use oppo_core::algebra::{snf, SparseIntMatrix};
use oppo_core::group::Series;
use oppo_core::pipeline::{betti_tables, run_verification, stability_range_induction, RunConfig, StabilityRangeRule, SuiteKind};

fn series(s: &str) -> PyResult<Series> {
    s.parse().map_err(|e: oppo_core::group::GroupError| PyValueError::new_err(e.to_string()))
}

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Invariant factors of an integer matrix given by its rows, ones
/// included, as decimal strings.
#[pyfunction]
fn invariant_factors(rows: Vec<Vec<i64>>) -> PyResult<Vec<String>> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("rows have different lengths"));
    }
    let trip: Vec<(usize, usize, BigInt)> = rows
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.iter().enumerate().filter(|(_, &x)| x != 0).map(move |(j, &x)| (i, j, BigInt::from(x))))
        .collect();
    let m = SparseIntMatrix::from_triplets(rows.len(), cols, trip).map_err(value_error)?;
    Ok(snf(&m).diagonal().iter().map(ToString::to_string).collect())
}

/// Reduced homology of the building of a series and of its opposition
/// complex: `[(name, [(degree, group)])]` over nonzero groups.
#[pyfunction]
fn reduced_homology(py: Python<'_>, series_name: &str, n: usize, q: usize) -> PyResult<Vec<(String, Vec<(i64, String)>)>> {
    let config = RunConfig::new(series(series_name)?, n, q);
    let tables = py.detach(|| betti_tables(&config)).map_err(value_error)?;
    Ok(tables.into_iter().map(|t| (t.complex, t.reduced_homology)).collect())
}

/// Runs verification suites and returns `(exit_code, report_json)`.
#[pyfunction]
#[pyo3(signature = (series_name, n, q, qmax = 2, suites = None, budget = None, seed = 0))]
fn verify(
    py: Python<'_>,
    series_name: &str,
    n: usize,
    q: usize,
    qmax: usize,
    suites: Option<Vec<String>>,
    budget: Option<u128>,
    seed: u64,
) -> PyResult<(i32, String)> {
    let mut config = RunConfig::new(series(series_name)?, n, q);
    config.qmax = qmax;
    config.seed = seed;
    if let Some(b) = budget {
        config.budget = b;
    }
    if let Some(names) = suites {
        config.suites = names.iter().map(|s| s.parse::<SuiteKind>()).collect::<Result<_, _>>().map_err(value_error)?;
    }
    let report = py.detach(|| run_verification(&config)).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok((report.exit_code(), report.to_json()))
}

/// Stability thresholds `[n_0, .., n_kmax]` for `series` derived from the
/// general linear input `"sah"` (n >= k) or `"vdk"` (n >= 2k), with the
/// closed form.
#[pyfunction]
#[pyo3(signature = (series_name, gl = "sah", kmax = 8))]
fn stability_range(series_name: &str, gl: &str, kmax: usize) -> PyResult<(Vec<i64>, String)> {
    let input = match gl {
        "sah" => StabilityRangeRule::sah(kmax),
        "vdk" => StabilityRangeRule::van_der_kallen(kmax),
        other => return Err(PyValueError::new_err(format!("unknown input rule {other:?}"))),
    };
    let rule = stability_range_induction(&input, series(series_name)?).map_err(value_error)?;
    let form = rule.closed_form().to_string();
    Ok((rule.thresholds, form))
}

#[pymodule]
fn oppo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(invariant_factors, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_homology, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(stability_range, m)?)?;
    Ok(())
}
