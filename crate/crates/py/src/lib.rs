//! Python bindings: thin wrappers around the qdybe library. Matrix- and
//! table-valued results come back as the same JSON documents the CLI
//! prints; scalar results come back as canonical "(num)/(den)" strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qdybe::cli::{self, Command, Format, LambdaMode, RunConfig};
use qdybe::error::CoreError;

fn lambda_mode(lam: Option<&str>) -> PyResult<LambdaMode> {
    match lam {
        None => Ok(LambdaMode::Symbolic),
        Some(s) => Ok(LambdaMode::Rational(
            cli::parse_rat(s).map_err(to_py_err)?,
        )),
    }
}

fn to_py_err(e: CoreError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn run_json(command: Command, lambda: LambdaMode) -> PyResult<String> {
    let cfg = RunConfig { command, lambda, format: Format::Json };
    let mut buf = Vec::new();
    match cli::run(&cfg, &mut buf) {
        0 | 1 => Ok(String::from_utf8(buf).expect("cli output is utf-8")),
        _ => Err(PyValueError::new_err("invalid configuration or non-generic lambda")),
    }
}

/// Intertwiner coefficient table as JSON.
#[pyfunction]
#[pyo3(signature = (gamma, k, n_max=None, oracle=false, lam=None))]
fn intertwiner(
    gamma: u32,
    k: u32,
    n_max: Option<u32>,
    oracle: bool,
    lam: Option<&str>,
) -> PyResult<String> {
    run_json(
        Command::Intertwiner { gamma, k, n_max, oracle },
        lambda_mode(lam)?,
    )
}

/// Fusion matrix (or its inverse) as JSON.
#[pyfunction]
#[pyo3(signature = (delta, gamma, inverse=false, oracle=false, lam=None))]
fn fusion(
    delta: u32,
    gamma: u32,
    inverse: bool,
    oracle: bool,
    lam: Option<&str>,
) -> PyResult<String> {
    run_json(
        Command::Fusion { delta, gamma, inverse, oracle },
        lambda_mode(lam)?,
    )
}

/// Exchange matrix (or its inverse) as JSON.
#[pyfunction]
#[pyo3(signature = (delta, gamma, inverse=false, oracle=false, lam=None))]
fn exchange(
    delta: u32,
    gamma: u32,
    inverse: bool,
    oracle: bool,
    lam: Option<&str>,
) -> PyResult<String> {
    run_json(
        Command::Exchange { delta, gamma, inverse, oracle },
        lambda_mode(lam)?,
    )
}

/// Coefficients of the truncated universal fusion matrix.
#[pyfunction]
#[pyo3(signature = (order, inverse=false))]
fn universal_terms(order: u32, inverse: bool) -> PyResult<Vec<String>> {
    let u = if inverse {
        qdybe::universal::universal_j_inv(order)
    } else {
        qdybe::universal::universal_j(order)
    };
    Ok(u.terms
        .iter()
        .map(|t| format!("({})/({})", t.num(), t.den()))
        .collect())
}

/// Diagonal of Q(lambda) on V_gamma.
#[pyfunction]
#[pyo3(signature = (gamma, lam=None))]
fn q_eigenvalues(gamma: u32, lam: Option<&str>) -> PyResult<Vec<String>> {
    match lambda_mode(lam)? {
        LambdaMode::Symbolic => {
            let l = qdybe::QLambda::gen(qdybe::ratfield::LAMBDA);
            (0..=gamma)
                .map(|k| {
                    qdybe::universal::q_eigenvalue(&l, gamma, k)
                        .map(|v| format!("({})/({})", v.num(), v.den()))
                        .map_err(to_py_err)
                })
                .collect()
        }
        LambdaMode::Rational(r) => (0..=gamma)
            .map(|k| {
                qdybe::universal::q_eigenvalue(&r, gamma, k)
                    .map(|v| v.to_string())
                    .map_err(to_py_err)
            })
            .collect(),
    }
}

/// Bodies of the trace functions (psi, F) for V_gamma.
#[pyfunction]
fn trace_bodies(gamma: u32) -> PyResult<(String, String)> {
    let psi = qdybe::trace::psi_body(gamma).map_err(to_py_err)?;
    let f = qdybe::trace::f_body(gamma).map_err(to_py_err)?;
    let render = |x: &qdybe::trace::QMuU| format!("({})/({})", x.num(), x.den());
    Ok((render(&psi), render(&f)))
}

/// Dynamical Yang-Baxter check on a triple tensor product.
#[pyfunction]
fn qdybe_check(dims: (u32, u32, u32)) -> PyResult<bool> {
    qdybe::fusion_exchange::qdybe_check([dims.0, dims.1, dims.2]).map_err(to_py_err)
}

/// Biorthogonality of exchange coefficients in one weight block.
#[pyfunction]
fn biorth_check(gamma: u32, delta: u32, s: u32) -> PyResult<bool> {
    let l = qdybe::QLambda::gen(qdybe::ratfield::LAMBDA);
    qdybe::fusion_exchange::biorthogonality_check(&l, gamma, delta, s).map_err(to_py_err)
}

/// Dual Macdonald-Ruijsenaars difference equation check.
#[pyfunction]
fn mr_check(gamma: u32, delta: u32) -> PyResult<bool> {
    qdybe::trace::mr_check(gamma, delta).map_err(to_py_err)
}

/// Full verification suite; returns the PASS/FAIL report.
#[pyfunction]
#[pyo3(signature = (max_dim=2, seed=42))]
fn verify_all(max_dim: u32, seed: u64) -> PyResult<(bool, String)> {
    let cfg = RunConfig {
        command: Command::VerifyAll { max_dim: Some(max_dim), seed },
        lambda: LambdaMode::Symbolic,
        format: Format::Text,
    };
    let mut buf = Vec::new();
    match cli::run(&cfg, &mut buf) {
        0 => Ok((true, String::from_utf8(buf).expect("utf-8"))),
        1 => Ok((false, String::from_utf8(buf).expect("utf-8"))),
        _ => Err(PyValueError::new_err("invalid configuration")),
    }
}

#[pymodule]
fn qdybe_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(intertwiner, m)?)?;
    m.add_function(wrap_pyfunction!(fusion, m)?)?;
    m.add_function(wrap_pyfunction!(exchange, m)?)?;
    m.add_function(wrap_pyfunction!(universal_terms, m)?)?;
    m.add_function(wrap_pyfunction!(q_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(trace_bodies, m)?)?;
    m.add_function(wrap_pyfunction!(qdybe_check, m)?)?;
    m.add_function(wrap_pyfunction!(biorth_check, m)?)?;
    m.add_function(wrap_pyfunction!(mr_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
