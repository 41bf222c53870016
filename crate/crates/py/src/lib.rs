//! Python bindings for the bvslab toolkit.
//!
//! Exact rationals cross the boundary as strings ("2", "5/3"); every
//! operation mirrors its CLI counterpart and returns plain dicts/lists so
//! callers can assert on exact values.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use bvslab::axiom::{check_bvs, classify as classify_rs, minimal_s as minimal_s_rs, AxiomVerdict, BvsParams, MinimalS};
use bvslab::completeness::{build_escape_map, demo_seed, verify_escape_map, EscapeError, EscapeVerdict};
use bvslab::contraction::{
    check_banach_contractive, check_ciric_max, check_kannan, check_reich,
    find_reich_coefficients, ContractionVerdict, ReichCoefficients, ReichSearch,
};
use bvslab::corpus::{load_corpus, run_corpus, ClaimOutcome};
use bvslab::picard::{
    check_suzuki, detect_fixed_points, iterate, OrbitStatus, SuzukiGrid, SuzukiResult,
};
use bvslab::scalar::Scalar;
use bvslab::space::{FiniteSpace, GeneratedSpace, Point, Selector, SelfMap, Space as _};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rat(text: &str) -> PyResult<Scalar> {
    text.parse().map_err(err)
}

struct Loaded {
    space: GeneratedSpace,
    window: FiniteSpace,
    map: SelfMap,
    scope: String,
}

/// Resolve `NAME[@SELECTOR]` against the bundled corpus (or a file path).
fn load(spec: &str) -> PyResult<Loaded> {
    let (name, selector) = match spec.split_once('@') {
        Some((n, s)) => (n, Some(Selector::parse(s).map_err(err)?)),
        None => (spec, None),
    };
    let entry = load_corpus(name).map_err(err)?;
    let selector = selector.unwrap_or(entry.default_selector.clone());
    let window = entry.space.truncate(&selector).map_err(err)?;
    Ok(Loaded {
        space: entry.space,
        window,
        map: entry.map,
        scope: selector.to_string(),
    })
}

fn witness_dict<'py>(
    py: Python<'py>,
    verdict: &ContractionVerdict,
    scope: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kind", verdict.kind.to_string())?;
    d.set_item("scope", scope)?;
    d.set_item("passed", verdict.passed())?;
    d.set_item("pairs_checked", verdict.pairs_checked)?;
    if let Some(w) = verdict.witness() {
        d.set_item("witness_x", w.x.to_string())?;
        d.set_item("witness_y", w.y.to_string())?;
        d.set_item("lhs", w.lhs.to_string())?;
        d.set_item("rhs", w.rhs.to_string())?;
    }
    Ok(d)
}

/// Check the polygon inequality for (v, s) on a finite window.
#[pyfunction]
fn verify(py: Python<'_>, space: &str, v: u32, s: &str) -> PyResult<Py<PyDict>> {
    let loaded = load(space)?;
    let params = BvsParams::new(v, rat(s)?).map_err(err)?;
    let verdict = check_bvs(&loaded.window, &params);
    let d = PyDict::new(py);
    d.set_item("scope", &loaded.scope)?;
    d.set_item("v", v)?;
    d.set_item("s", s)?;
    match verdict {
        AxiomVerdict::Pass => {
            d.set_item("verdict", "pass")?;
        }
        AxiomVerdict::PassVacuous => {
            d.set_item("verdict", "pass-vacuous")?;
        }
        AxiomVerdict::Fail(w) => {
            d.set_item("verdict", "fail")?;
            d.set_item("witness_x", w.x.to_string())?;
            d.set_item("witness_y", w.y.to_string())?;
            let chain: Vec<String> = w.chain.iter().map(|p| p.to_string()).collect();
            d.set_item("chain", chain)?;
            d.set_item("lhs", w.lhs.to_string())?;
            d.set_item("chain_sum", w.chain_sum.to_string())?;
        }
    }
    Ok(d.into())
}

/// Exact minimal relaxation constant for a given v.
#[pyfunction]
fn minimal_s(py: Python<'_>, space: &str, v: u32) -> PyResult<Py<PyDict>> {
    let loaded = load(space)?;
    let d = PyDict::new(py);
    d.set_item("scope", &loaded.scope)?;
    d.set_item("v", v)?;
    match minimal_s_rs(&loaded.window, v) {
        MinimalS::Vacuous => {
            d.set_item("vacuous", true)?;
        }
        MinimalS::Bound { s_min, raw_ratio, witness } => {
            d.set_item("vacuous", false)?;
            d.set_item("s_min", s_min.to_string())?;
            d.set_item("raw_ratio", raw_ratio.to_string())?;
            d.set_item("witness_x", witness.x.to_string())?;
            d.set_item("witness_y", witness.y.to_string())?;
            let chain: Vec<String> = witness.chain.iter().map(|p| p.to_string()).collect();
            d.set_item("chain", chain)?;
            d.set_item("chain_sum", witness.chain_sum.to_string())?;
        }
    }
    Ok(d.into())
}

/// Tabulate minimal constants for v = 1..v_max.
#[pyfunction]
fn classify(py: Python<'_>, space: &str, v_max: u32) -> PyResult<Py<PyList>> {
    let loaded = load(space)?;
    let rows = PyList::empty(py);
    for (v, m) in classify_rs(&loaded.window, v_max) {
        let d = PyDict::new(py);
        d.set_item("v", v)?;
        match m {
            MinimalS::Vacuous => {
                d.set_item("vacuous", true)?;
            }
            MinimalS::Bound { s_min, .. } => {
                d.set_item("vacuous", false)?;
                d.set_item("s_min", s_min.to_string())?;
            }
        }
        rows.append(d)?;
    }
    Ok(rows.into())
}

/// Check a strict contractive condition ("banach", "reich", "ciric",
/// "kannan") on the window's sample.
#[pyfunction]
#[pyo3(signature = (space, map, kind, a=None, b=None, c=None))]
fn contraction(
    py: Python<'_>,
    space: &str,
    map: &str,
    kind: &str,
    a: Option<&str>,
    b: Option<&str>,
    c: Option<&str>,
) -> PyResult<Py<PyDict>> {
    let loaded = load(space)?;
    let map = load(map)?.map;
    let sample = loaded.window.points().to_vec();
    let need = |opt: Option<&str>, name: &str| -> PyResult<Scalar> {
        rat(opt.ok_or_else(|| PyValueError::new_err(format!("{name} required")))?)
    };
    let verdict = match kind {
        "banach" => check_banach_contractive(&loaded.space, &sample, &map).map_err(err)?,
        "reich" => {
            let coeffs = ReichCoefficients::new(need(a, "a")?, need(b, "b")?, need(c, "c")?)
                .map_err(err)?;
            check_reich(&loaded.space, &sample, &map, &coeffs).map_err(err)?
        }
        "ciric" => check_ciric_max(&loaded.space, &sample, &map).map_err(err)?,
        "kannan" => {
            check_kannan(&loaded.space, &sample, &map, need(b, "b")?, need(c, "c")?)
                .map_err(err)?
        }
        other => return Err(PyValueError::new_err(format!("unknown kind `{other}`"))),
    };
    Ok(witness_dict(py, &verdict, &loaded.scope)?.into())
}

/// Exact feasibility search over the Reich coefficient simplex.
#[pyfunction]
fn reich_search(py: Python<'_>, space: &str, map: &str) -> PyResult<Py<PyDict>> {
    let loaded = load(space)?;
    let map = load(map)?.map;
    let sample = loaded.window.points().to_vec();
    let d = PyDict::new(py);
    d.set_item("scope", &loaded.scope)?;
    match find_reich_coefficients(&loaded.space, &sample, &map).map_err(err)? {
        ReichSearch::Feasible { coeffs, slack } => {
            d.set_item("feasible", true)?;
            d.set_item("a", coeffs.a.to_string())?;
            d.set_item("b", coeffs.b.to_string())?;
            d.set_item("c", coeffs.c.to_string())?;
            d.set_item("slack", slack.to_string())?;
        }
        ReichSearch::Infeasible { certificate } => {
            d.set_item("feasible", false)?;
            let pairs: Vec<(String, String)> = certificate
                .iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect();
            d.set_item("certificate", pairs)?;
        }
    }
    Ok(d.into())
}

/// Run Picard iteration; returns the orbit, diagnostics and fixed points of
/// the window sample.
#[pyfunction]
fn iterate_orbit(
    py: Python<'_>,
    space: &str,
    map: &str,
    start: &str,
    budget: usize,
) -> PyResult<Py<PyDict>> {
    let loaded = load(space)?;
    let map = load(map)?.map;
    let start = loaded.space.resolve_value(&rat(start)?).map_err(err)?;
    let mut orbit = iterate(&loaded.space, &map, &start, budget).map_err(err)?;
    if let OrbitStatus::FixedPoint { point, .. } = orbit.status.clone() {
        orbit.attach_limit(&loaded.space, &point).map_err(err)?;
    }
    let d = PyDict::new(py);
    let points: Vec<String> = orbit.points.iter().map(|p| p.to_string()).collect();
    let s_seq: Vec<String> = orbit.s_seq.iter().map(|s| s.to_string()).collect();
    d.set_item("points", points)?;
    d.set_item("s_seq", s_seq)?;
    if let Some(t) = &orbit.t_seq {
        let t_seq: Vec<String> = t.iter().map(|s| s.to_string()).collect();
        d.set_item("t_seq", t_seq)?;
    }
    match &orbit.status {
        OrbitStatus::FixedPoint { point, index } => {
            d.set_item("status", "fixed-point")?;
            d.set_item("fixed_point", point.to_string())?;
            d.set_item("fixed_index", index)?;
        }
        OrbitStatus::Cycle { entry, period } => {
            d.set_item("status", "cycle")?;
            d.set_item("entry", entry)?;
            d.set_item("period", period)?;
        }
        OrbitStatus::BudgetExhausted => {
            d.set_item("status", "budget-exhausted")?;
        }
    }
    let fixed = detect_fixed_points(&loaded.space, loaded.window.points(), &map).map_err(err)?;
    let fixed: Vec<String> = fixed.iter().map(|p| p.to_string()).collect();
    d.set_item("fixed_points", fixed)?;
    Ok(d.into())
}

/// Probe the asymptotic-uniformity implication along an orbit. `factor` is
/// "one" or "s2" (with `s` required for "s2").
#[pyfunction]
#[pyo3(signature = (space, map, start, factor, eps, budget, s=None))]
fn suzuki(
    py: Python<'_>,
    space: &str,
    map: &str,
    start: &str,
    factor: &str,
    eps: Vec<String>,
    budget: usize,
    s: Option<&str>,
) -> PyResult<Py<PyList>> {
    let loaded = load(space)?;
    let map = load(map)?.map;
    let start = loaded.space.resolve_value(&rat(start)?).map_err(err)?;
    let factor = match factor {
        "one" => Scalar::one(),
        "s2" => {
            let s = rat(s.ok_or_else(|| PyValueError::new_err("s required with factor s2"))?)?;
            &s * &s
        }
        other => return Err(PyValueError::new_err(format!("unknown factor `{other}`"))),
    };
    let eps_list: Vec<Scalar> = eps.iter().map(|t| rat(t)).collect::<PyResult<_>>()?;
    let orbit = iterate(&loaded.space, &map, &start, budget).map_err(err)?;
    let findings = check_suzuki(
        &loaded.space,
        &orbit,
        &factor,
        &eps_list,
        &SuzukiGrid::default(),
    )
    .map_err(err)?;
    let rows = PyList::empty(py);
    for f in findings {
        let d = PyDict::new(py);
        d.set_item("eps", f.epsilon.to_string())?;
        d.set_item("horizon", f.horizon)?;
        match f.result {
            SuzukiResult::SupportedUpToHorizon { delta, start_index } => {
                d.set_item("supported", true)?;
                d.set_item("delta", delta.to_string())?;
                d.set_item("start_index", start_index)?;
            }
            SuzukiResult::RefutedUpToGrid { witnesses } => {
                d.set_item("supported", false)?;
                d.set_item("refuted_candidates", witnesses.len())?;
                if let Some(w) = witnesses.first() {
                    d.set_item("witness_n", w.n)?;
                    d.set_item("witness_m", w.m)?;
                    d.set_item("premise", w.premise.to_string())?;
                    d.set_item("conclusion", w.conclusion.to_string())?;
                }
            }
        }
        rows.append(d)?;
    }
    Ok(rows.into())
}

/// Evaluate bundled claims ("all", one entry name, or a corpus file path).
#[pyfunction]
fn corpus_run(py: Python<'_>, target: &str) -> PyResult<Py<PyDict>> {
    let report = run_corpus(target).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("passed", report.passed())?;
    d.set_item("failed", report.failed())?;
    d.set_item("exit_status", report.exit_status())?;
    let rows = PyList::empty(py);
    for row in &report.rows {
        let r = PyDict::new(py);
        r.set_item("entry", &row.entry)?;
        r.set_item("claim", &row.claim)?;
        r.set_item("scope", &row.scope)?;
        r.set_item("outcome", match row.outcome {
            ClaimOutcome::Pass => "pass",
            ClaimOutcome::Fail => "fail",
        })?;
        r.set_item("detail", &row.detail)?;
        rows.append(r)?;
    }
    d.set_item("rows", rows)?;
    Ok(d.into())
}

/// Build and verify the bundled escape-map demo (plus its rejection
/// control) with Kannan weight b.
#[pyfunction]
#[pyo3(signature = (b="1/2"))]
fn completeness_demo(py: Python<'_>, b: &str) -> PyResult<Py<PyDict>> {
    let b = rat(b)?;
    let (seed, sample) = demo_seed(false);
    let construction = build_escape_map(&seed, &sample, &b).map_err(err)?;
    let verdict = verify_escape_map(&construction, &seed, &b).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("sample", sample.len())?;
    d.set_item("members", construction.member_choice.len())?;
    d.set_item("outsiders", construction.outsider_choice.len())?;
    match verdict {
        EscapeVerdict::Pass { ordered_pairs, .. } => {
            d.set_item("verdict", "pass")?;
            d.set_item("ordered_pairs", ordered_pairs)?;
        }
        EscapeVerdict::FailKannan(w) => {
            d.set_item("verdict", "fail-kannan")?;
            d.set_item("witness_x", w.x.to_string())?;
            d.set_item("witness_y", w.y.to_string())?;
        }
        EscapeVerdict::FailFixedPoint(p) => {
            d.set_item("verdict", "fail-fixed-point")?;
            d.set_item("fixed_point", p.to_string())?;
        }
    }
    let (control_seed, control_sample) = demo_seed(true);
    match build_escape_map(&control_seed, &control_sample, &b) {
        Err(EscapeError::ZeroDistanceToRange(label)) => {
            d.set_item("control_rejected", true)?;
            d.set_item("control_zero_gap_at", label)?;
        }
        _ => {
            d.set_item("control_rejected", false)?;
        }
    }
    Ok(d.into())
}

/// A validated finite distance table built directly from Python data.
#[pyclass]
struct Table {
    inner: FiniteSpace,
}

#[pymethods]
impl Table {
    /// labels: point names (rationals get values attached); rows: square
    /// matrix of rational strings.
    #[new]
    fn new(labels: Vec<String>, rows: Vec<Vec<String>>) -> PyResult<Self> {
        let table: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|row| row.iter().map(|t| rat(t)).collect())
            .collect::<PyResult<_>>()?;
        let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        let inner = FiniteSpace::from_labels(&label_refs, table).map_err(err)?;
        Ok(Table { inner })
    }

    fn points(&self) -> Vec<String> {
        self.inner.points().iter().map(|p| p.to_string()).collect()
    }

    fn distance(&self, p: &str, q: &str) -> PyResult<String> {
        let d = self
            .inner
            .distance(&Point::labeled(p), &Point::labeled(q))
            .map_err(err)?;
        Ok(d.to_string())
    }

    fn check_bvs(&self, v: u32, s: &str) -> PyResult<bool> {
        let params = BvsParams::new(v, rat(s)?).map_err(err)?;
        Ok(check_bvs(&self.inner, &params).passed())
    }

    fn minimal_s(&self, v: u32) -> PyResult<Option<String>> {
        Ok(match minimal_s_rs(&self.inner, v) {
            MinimalS::Vacuous => None,
            MinimalS::Bound { s_min, .. } => Some(s_min.to_string()),
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Table({} points)", self.inner.len())
    }
}

#[pymodule]
fn bvslab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Table>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_s, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(contraction, m)?)?;
    m.add_function(wrap_pyfunction!(reich_search, m)?)?;
    m.add_function(wrap_pyfunction!(iterate_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(suzuki, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_run, m)?)?;
    m.add_function(wrap_pyfunction!(completeness_demo, m)?)?;
    Ok(())
}
