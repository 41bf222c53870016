//! The bundled example spaces with machine-checkable claims, and the report
//! machinery behind `corpus run`.
//!
//! A corpus file is the clause format of `dsl` split into `[space]`, `[map]`
//! and `[claims]` sections, with entry headers up front. Claims are the only
//! part with extra syntax; each claim line names one checker invocation and
//! its expected outcome, optionally scoped with `@ <selector>` (defaulting
//! to the entry's `truncation:` header).
//!
//! Generated carriers are only ever checked on finite windows, so every
//! report row carries its scope; nothing is claimed beyond the sample.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use thiserror::Error;

use crate::axiom::{check_bvs, AxiomVerdict, BvsParams};
use crate::contraction::{
    check_banach_contractive, check_ciric_max, check_reich, ContractionError, ReichCoefficients,
};
use crate::dsl::{parse_map_spec, parse_space_spec, ParseDiagnostic};
use crate::picard::{
    check_suzuki, default_eps_list, detect_fixed_points, iterate, SuzukiGrid, SuzukiResult,
};
use crate::scalar::Scalar;
use crate::space::{GeneratedSpace, Point, Selector, SelfMap, Space, SpaceError};

const EMBEDDED: [(&str, &str); 5] = [
    ("e2", include_str!("../corpus/e2.bvs")),
    ("e4", include_str!("../corpus/e4.bvs")),
    ("e6", include_str!("../corpus/e6.bvs")),
    ("e8", include_str!("../corpus/e8.bvs")),
    ("e9", include_str!("../corpus/e9.bvs")),
];

pub fn corpus_names() -> Vec<&'static str> {
    EMBEDDED.iter().map(|(n, _)| *n).collect()
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown example `{0}`; bundled names are e2, e4, e6, e8, e9")]
    UnknownExample(String),
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("parse errors in `{name}`:\n{}", render_diags(.diagnostics))]
    Parse {
        name: String,
        diagnostics: Vec<ParseDiagnostic>,
    },
    #[error("`{name}` is missing its [{section}] section")]
    MissingSection { name: String, section: &'static str },
    #[error("bad claim at line {line}: {message}")]
    BadClaim { line: usize, message: String },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

fn render_diags(diags: &[ParseDiagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("  {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Which Suzuki premise factor a claim requests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuzukiFactor {
    One,
    SSquared,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClaimKind {
    AxiomClass { v: u32, s: Scalar },
    NotBanachContractive { witness: (Scalar, Scalar) },
    SatisfiesReich { a: Scalar, b: Scalar, c: Scalar },
    SatisfiesCiricMax,
    FixedPointSet { expected: Vec<Scalar> },
    NoFixedPoint,
    SuzukiSupported { factor: SuzukiFactor, start: Scalar, budget: usize },
}

impl ClaimKind {
    pub fn slug(&self) -> &'static str {
        match self {
            ClaimKind::AxiomClass { .. } => "axiom-class",
            ClaimKind::NotBanachContractive { .. } => "not-banach",
            ClaimKind::SatisfiesReich { .. } => "reich",
            ClaimKind::SatisfiesCiricMax => "ciric-max",
            ClaimKind::FixedPointSet { .. } => "fixed-points",
            ClaimKind::NoFixedPoint => "no-fixed-point",
            ClaimKind::SuzukiSupported { .. } => "suzuki-supported",
        }
    }

    fn describe(&self) -> String {
        match self {
            ClaimKind::AxiomClass { v, s } => format!("axiom-class v={v} s={s}"),
            ClaimKind::NotBanachContractive { witness } => {
                format!("not-banach witness=({}, {})", witness.0, witness.1)
            }
            ClaimKind::SatisfiesReich { a, b, c } => format!("reich a={a} b={b} c={c}"),
            ClaimKind::SatisfiesCiricMax => "ciric-max".into(),
            ClaimKind::FixedPointSet { expected } => {
                let inner: Vec<String> = expected.iter().map(|v| v.to_string()).collect();
                format!("fixed-points {{{}}}", inner.join(", "))
            }
            ClaimKind::NoFixedPoint => "no-fixed-point".into(),
            ClaimKind::SuzukiSupported { factor, start, budget } => {
                let f = match factor {
                    SuzukiFactor::One => "one",
                    SuzukiFactor::SSquared => "s2",
                };
                format!("suzuki-supported factor={f} start={start} budget={budget}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub kind: ClaimKind,
    /// Explicit scope; the entry default applies when absent.
    pub scope: Option<Selector>,
}

/// One bundled (or user-supplied) example: space, map, claims, default
/// window.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub space: GeneratedSpace,
    pub map: SelfMap,
    pub claims: Vec<Claim>,
    pub default_selector: Selector,
    pub space_source: String,
    pub map_source: String,
}

fn parse_claim_line(line: &str, line_no: usize) -> Result<Claim, CorpusError> {
    let bad = |message: String| CorpusError::BadClaim { line: line_no, message };
    let (body, scope) = match line.split_once('@') {
        Some((b, s)) => (
            b.trim(),
            Some(Selector::parse(s.trim()).map_err(&bad)?),
        ),
        None => (line.trim(), None),
    };
    let mut words = body.split_whitespace();
    let head = words.next().ok_or_else(|| bad("empty claim".into()))?;
    let rest: Vec<&str> = words.collect();
    let field = |key: &str| -> Result<String, CorpusError> {
        rest.iter()
            .find_map(|w| w.strip_prefix(&format!("{key}=")))
            .map(|s| s.to_string())
            .ok_or_else(|| bad(format!("claim `{head}` needs {key}=")))
    };
    let rational = |key: &str| -> Result<Scalar, CorpusError> {
        field(key)?.parse().map_err(|e| bad(format!("{key}: {e}")))
    };
    let kind = match head {
        "axiom-class" => {
            let v: u32 = field("v")?.parse().map_err(|_| bad("v must be an integer".into()))?;
            ClaimKind::AxiomClass { v, s: rational("s")? }
        }
        "not-banach" => {
            let start = body
                .find("witness=")
                .ok_or_else(|| bad("claim `not-banach` needs witness=".into()))?;
            let w = &body[start + "witness=".len()..];
            let inner = w
                .trim()
                .strip_prefix('(')
                .and_then(|t| t.split(')').next())
                .ok_or_else(|| bad("witness must look like (p,q)".into()))?;
            let mut parts = inner.split(',');
            let a: Scalar = parts
                .next()
                .ok_or_else(|| bad("witness needs two points".into()))?
                .trim()
                .parse()
                .map_err(|e| bad(format!("witness: {e}")))?;
            let b: Scalar = parts
                .next()
                .ok_or_else(|| bad("witness needs two points".into()))?
                .trim()
                .parse()
                .map_err(|e| bad(format!("witness: {e}")))?;
            ClaimKind::NotBanachContractive { witness: (a, b) }
        }
        "reich" => ClaimKind::SatisfiesReich {
            a: rational("a")?,
            b: rational("b")?,
            c: rational("c")?,
        },
        "ciric-max" => ClaimKind::SatisfiesCiricMax,
        "fixed-points" => {
            let body = body
                .strip_prefix("fixed-points")
                .unwrap()
                .trim();
            let inner = body
                .strip_prefix('{')
                .and_then(|t| t.strip_suffix('}'))
                .ok_or_else(|| bad("fixed-points needs a {…} set".into()))?;
            let mut expected = Vec::new();
            for part in inner.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                expected.push(part.parse().map_err(|e| bad(format!("fixed-points: {e}")))?);
            }
            ClaimKind::FixedPointSet { expected }
        }
        "no-fixed-point" => ClaimKind::NoFixedPoint,
        "suzuki-supported" => {
            let factor = match field("factor")?.as_str() {
                "one" => SuzukiFactor::One,
                "s2" => SuzukiFactor::SSquared,
                other => return Err(bad(format!("unknown factor `{other}`"))),
            };
            let budget: usize = field("budget")?
                .parse()
                .map_err(|_| bad("budget must be an integer".into()))?;
            ClaimKind::SuzukiSupported { factor, start: rational("start")?, budget }
        }
        other => return Err(bad(format!("unknown claim kind `{other}`"))),
    };
    Ok(Claim { kind, scope })
}

/// Grab the `(claims: v, s)` header even when the note text follows it.
fn parse_truncation_header(source: &str) -> Result<Option<Selector>, CorpusError> {
    for (idx, line) in source.lines().enumerate() {
        let t = line.trim();
        if let Some(rest) = t.strip_prefix("truncation:") {
            let sel = Selector::parse(rest.trim())
                .map_err(|m| CorpusError::BadClaim { line: idx + 1, message: m })?;
            return Ok(Some(sel));
        }
    }
    Ok(None)
}

/// Parse a full corpus file.
pub fn parse_corpus_entry(name: &str, source: &str) -> Result<CorpusEntry, CorpusError> {
    let mut header_lines = Vec::new();
    let mut space_lines = Vec::new();
    let mut map_lines = Vec::new();
    let mut claim_lines: Vec<(usize, String)> = Vec::new();
    let mut section = "header";
    for (idx, line) in source.lines().enumerate() {
        let t = line.trim();
        match t {
            "[space]" => {
                section = "space";
                continue;
            }
            "[map]" => {
                section = "map";
                continue;
            }
            "[claims]" => {
                section = "claims";
                continue;
            }
            _ => {}
        }
        match section {
            "header" => header_lines.push(line.to_string()),
            "space" => space_lines.push(line.to_string()),
            "map" => map_lines.push(line.to_string()),
            _ => {
                if !t.is_empty() && !t.starts_with('#') {
                    claim_lines.push((idx + 1, t.to_string()));
                }
            }
        }
    }
    if space_lines.iter().all(|l| l.trim().is_empty() || l.trim().starts_with('#')) {
        return Err(CorpusError::MissingSection { name: name.into(), section: "space" });
    }
    if map_lines.iter().all(|l| l.trim().is_empty() || l.trim().starts_with('#')) {
        return Err(CorpusError::MissingSection { name: name.into(), section: "map" });
    }

    let header_src = header_lines
        .iter()
        .filter(|l| !l.trim().starts_with("truncation:"))
        .cloned()
        .collect::<Vec<_>>()
        .join("\n");
    let space_source = format!("{header_src}\n{}", space_lines.join("\n"));
    let space_spec = parse_space_spec(&space_source).map_err(|diagnostics| CorpusError::Parse {
        name: name.into(),
        diagnostics,
    })?;
    let map_source = map_lines.join("\n");
    let map_spec = parse_map_spec(&map_source).map_err(|diagnostics| CorpusError::Parse {
        name: name.into(),
        diagnostics,
    })?;

    let default_selector = parse_truncation_header(source)?
        .ok_or(CorpusError::MissingSection { name: name.into(), section: "truncation" })?;
    let claims = claim_lines
        .into_iter()
        .map(|(line_no, text)| parse_claim_line(&text, line_no))
        .collect::<Result<Vec<_>, _>>()?;

    let entry_name = space_spec.name.clone().unwrap_or_else(|| name.to_string());
    let space = GeneratedSpace::from_spec(space_spec)?;
    let mut map = SelfMap::from_spec(map_spec);
    map.name = format!("{entry_name}-map");
    Ok(CorpusEntry {
        name: entry_name,
        space,
        map,
        claims,
        default_selector,
        space_source,
        map_source,
    })
}

/// Load a bundled entry by name, or any path to a corpus file.
pub fn load_corpus(name_or_path: &str) -> Result<CorpusEntry, CorpusError> {
    if let Some((_, src)) = EMBEDDED.iter().find(|(n, _)| *n == name_or_path) {
        return parse_corpus_entry(name_or_path, src);
    }
    let looks_like_path = name_or_path.contains('/') || name_or_path.ends_with(".bvs");
    if looks_like_path {
        let source = std::fs::read_to_string(name_or_path).map_err(|e| CorpusError::Io {
            path: name_or_path.into(),
            message: e.to_string(),
        })?;
        let stem = std::path::Path::new(name_or_path)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("entry");
        return parse_corpus_entry(stem, &source);
    }
    Err(CorpusError::UnknownExample(name_or_path.into()))
}

impl CorpusEntry {
    /// Sample points for a claim scope (explicit or the entry default).
    pub fn sample_for(&self, scope: Option<&Selector>) -> Result<Vec<Point>, SpaceError> {
        let selector = scope.unwrap_or(&self.default_selector);
        Ok(self.space.truncate(selector)?.points().to_vec())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimOutcome {
    Pass,
    Fail,
}

#[derive(Debug, Clone)]
pub struct ClaimRow {
    pub entry: String,
    pub index: usize,
    pub claim: String,
    pub kind: &'static str,
    pub scope: String,
    pub outcome: ClaimOutcome,
    /// Witness values or error text; stable across runs.
    pub detail: String,
    pub runtime_ms: u128,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub rows: Vec<ClaimRow>,
}

impl Report {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome == ClaimOutcome::Pass).count()
    }

    pub fn failed(&self) -> usize {
        self.rows.len() - self.passed()
    }

    pub fn exit_status(&self) -> i32 {
        if self.failed() == 0 {
            0
        } else {
            1
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.rows.extend(other.rows);
    }

    /// Human-readable lines followed by the stable `# machine` block.
    /// Runtimes appear only in the human lines.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let status = match row.outcome {
                ClaimOutcome::Pass => "pass",
                ClaimOutcome::Fail => "FAIL",
            };
            let mut line = format!(
                "{} {} @ {} ... {status}",
                row.entry, row.claim, row.scope
            );
            if !row.detail.is_empty() {
                let _ = write!(line, " ({})", row.detail);
            }
            let _ = writeln!(out, "{line} [{} ms]", row.runtime_ms);
        }
        let _ = writeln!(out, "summary: {} passed, {} failed", self.passed(), self.failed());
        let _ = writeln!(out, "# machine");
        for row in &self.rows {
            let prefix = format!("claim.{}.{}", row.entry, row.index);
            let _ = writeln!(out, "{prefix}.kind={}", row.kind);
            let _ = writeln!(out, "{prefix}.scope={}", row.scope);
            let _ = writeln!(
                out,
                "{prefix}.outcome={}",
                match row.outcome {
                    ClaimOutcome::Pass => "pass",
                    ClaimOutcome::Fail => "fail",
                }
            );
            if !row.detail.is_empty() {
                let _ = writeln!(out, "{prefix}.detail={}", row.detail);
            }
        }
        let _ = writeln!(out, "summary.passed={}", self.passed());
        let _ = writeln!(out, "summary.failed={}", self.failed());
        out
    }
}

fn contraction_error_detail(e: &ContractionError) -> String {
    format!("error: {e}")
}

/// Execute every claim of the entry on its declared scope.
pub fn evaluate_claims(entry: &CorpusEntry) -> Report {
    let mut rows = Vec::new();
    for (index, claim) in entry.claims.iter().enumerate() {
        let started = Instant::now();
        let scope_str = claim
            .scope
            .as_ref()
            .unwrap_or(&entry.default_selector)
            .to_string();
        let (outcome, detail) = evaluate_one(entry, claim);
        rows.push(ClaimRow {
            entry: entry.name.clone(),
            index,
            claim: claim.kind.describe(),
            kind: claim.kind.slug(),
            scope: scope_str,
            outcome,
            detail,
            runtime_ms: started.elapsed().as_millis(),
        });
    }
    Report { rows }
}

fn evaluate_one(entry: &CorpusEntry, claim: &Claim) -> (ClaimOutcome, String) {
    match &claim.kind {
        ClaimKind::AxiomClass { v, s } => {
            let selector = claim.scope.as_ref().unwrap_or(&entry.default_selector);
            let window = match entry.space.truncate(selector) {
                Ok(w) => w,
                Err(e) => return (ClaimOutcome::Fail, format!("error: {e}")),
            };
            let params = match BvsParams::new(*v, s.clone()) {
                Ok(p) => p,
                Err(e) => return (ClaimOutcome::Fail, format!("error: {e}")),
            };
            match check_bvs(&window, &params) {
                AxiomVerdict::Pass => (ClaimOutcome::Pass, format!("{} points", window.len())),
                AxiomVerdict::PassVacuous => (ClaimOutcome::Pass, "vacuous".into()),
                AxiomVerdict::Fail(w) => (
                    ClaimOutcome::Fail,
                    format!(
                        "pair ({}, {}) lhs={} chain={}",
                        w.x, w.y, w.lhs, w.chain_sum
                    ),
                ),
            }
        }
        ClaimKind::NotBanachContractive { witness } => {
            let sample = match entry.sample_for(claim.scope.as_ref()) {
                Ok(s) => s,
                Err(e) => return (ClaimOutcome::Fail, format!("error: {e}")),
            };
            match check_banach_contractive(&entry.space, &sample, &entry.map) {
                Ok(v) => match v.witness() {
                    Some(w) => {
                        let matches = w.x.value() == Some(&witness.0)
                            && w.y.value() == Some(&witness.1);
                        let detail =
                            format!("pair ({}, {}) lhs={} rhs={}", w.x, w.y, w.lhs, w.rhs);
                        if matches {
                            (ClaimOutcome::Pass, detail)
                        } else {
                            (ClaimOutcome::Fail, format!("unexpected witness: {detail}"))
                        }
                    }
                    None => (
                        ClaimOutcome::Fail,
                        "map is contractive on this sample".into(),
                    ),
                },
                Err(e) => (ClaimOutcome::Fail, contraction_error_detail(&e)),
            }
        }
        ClaimKind::SatisfiesReich { a, b, c } => {
            let sample = match entry.sample_for(claim.scope.as_ref()) {
                Ok(s) => s,
                Err(e) => return (ClaimOutcome::Fail, format!("error: {e}")),
            };
            let coeffs = match ReichCoefficients::new(a.clone(), b.clone(), c.clone()) {
                Ok(c) => c,
                Err(e) => return (ClaimOutcome::Fail, format!("error: {e}")),
            };
            match check_reich(&entry.space, &sample, &entry.map, &coeffs) {
                Ok(v) => match v.witness() {
                    None => (ClaimOutcome::Pass, format!("{} ordered pairs", v.pairs_checked)),
                    Some(w) => (
                        ClaimOutcome::Fail,
                        format!("pair ({}, {}) lhs={} rhs={}", w.x, w.y, w.lhs, w.rhs),
                    ),
                },
                Err(e) => (ClaimOutcome::Fail, contraction_error_detail(&e)),
            }
        }
        ClaimKind::SatisfiesCiricMax => {
            let sample = match entry.sample_for(claim.scope.as_ref()) {
                Ok(s) => s,
                Err(e) => return (ClaimOutcome::Fail, format!("error: {e}")),
            };
            match check_ciric_max(&entry.space, &sample, &entry.map) {
                Ok(v) => match v.witness() {
                    None => (ClaimOutcome::Pass, format!("{} pairs", v.pairs_checked)),
                    Some(w) => (
                        ClaimOutcome::Fail,
                        format!("pair ({}, {}) lhs={} rhs={}", w.x, w.y, w.lhs, w.rhs),
                    ),
                },
                Err(e) => (ClaimOutcome::Fail, contraction_error_detail(&e)),
            }
        }
        ClaimKind::FixedPointSet { expected } => {
            let sample = match entry.sample_for(claim.scope.as_ref()) {
                Ok(s) => s,
                Err(e) => return (ClaimOutcome::Fail, format!("error: {e}")),
            };
            match detect_fixed_points(&entry.space, &sample, &entry.map) {
                Ok(fixed) => {
                    let got: Vec<Scalar> =
                        fixed.iter().filter_map(|p| p.value().cloned()).collect();
                    let mut want = expected.clone();
                    let mut have = got.clone();
                    want.sort();
                    have.sort();
                    let detail = format!(
                        "fixed={{{}}}",
                        got.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
                    );
                    if want == have {
                        (ClaimOutcome::Pass, detail)
                    } else {
                        (ClaimOutcome::Fail, detail)
                    }
                }
                Err(e) => (ClaimOutcome::Fail, format!("error: {e}")),
            }
        }
        ClaimKind::NoFixedPoint => {
            let sample = match entry.sample_for(claim.scope.as_ref()) {
                Ok(s) => s,
                Err(e) => return (ClaimOutcome::Fail, format!("error: {e}")),
            };
            match detect_fixed_points(&entry.space, &sample, &entry.map) {
                Ok(fixed) if fixed.is_empty() => {
                    (ClaimOutcome::Pass, format!("{} points checked", sample.len()))
                }
                Ok(fixed) => (
                    ClaimOutcome::Fail,
                    format!("fixed point at {}", fixed[0]),
                ),
                Err(e) => (ClaimOutcome::Fail, format!("error: {e}")),
            }
        }
        ClaimKind::SuzukiSupported { factor, start, budget } => {
            let factor_value = match factor {
                SuzukiFactor::One => Scalar::one(),
                SuzukiFactor::SSquared => match &entry.space.spec.claimed_class {
                    Some((_, s)) => s * s,
                    None => {
                        return (
                            ClaimOutcome::Fail,
                            "error: factor s2 needs a claims: v/s header".into(),
                        )
                    }
                },
            };
            let start_point = match entry.space.resolve_value(start) {
                Ok(p) => p,
                Err(e) => return (ClaimOutcome::Fail, format!("error: {e}")),
            };
            let orbit = match iterate(&entry.space, &entry.map, &start_point, *budget) {
                Ok(o) => o,
                Err(e) => return (ClaimOutcome::Fail, format!("error: {e}")),
            };
            let findings = match check_suzuki(
                &entry.space,
                &orbit,
                &factor_value,
                &default_eps_list(),
                &SuzukiGrid::default(),
            ) {
                Ok(f) => f,
                Err(e) => return (ClaimOutcome::Fail, format!("error: {e}")),
            };
            let mut parts = Vec::new();
            let mut all_supported = true;
            for f in &findings {
                match &f.result {
                    SuzukiResult::SupportedUpToHorizon { delta, start_index } => {
                        parts.push(format!("eps={}:delta={delta},N={start_index}", f.epsilon));
                    }
                    SuzukiResult::RefutedUpToGrid { .. } => {
                        all_supported = false;
                        parts.push(format!("eps={}:refuted", f.epsilon));
                    }
                }
            }
            let detail = parts.join("; ");
            if all_supported {
                (ClaimOutcome::Pass, detail)
            } else {
                (ClaimOutcome::Fail, detail)
            }
        }
    }
}

/// `corpus run` over one name or the whole bundled set.
pub fn run_corpus(target: &str) -> Result<Report, CorpusError> {
    let mut report = Report::default();
    if target == "all" {
        for name in corpus_names() {
            let entry = load_corpus(name)?;
            report.merge(evaluate_claims(&entry));
        }
    } else {
        let entry = load_corpus(target)?;
        report.merge(evaluate_claims(&entry));
    }
    Ok(report)
}

/// Overlap-lint warnings for an entry's space clauses on its default
/// window, for surfacing on load.
pub fn lint_entry(entry: &CorpusEntry) -> Vec<String> {
    let window = match entry.space.truncate(&entry.default_selector) {
        Ok(w) => w,
        Err(_) => return Vec::new(),
    };
    let mut envs = Vec::new();
    for p in window.points() {
        for q in window.points() {
            // self-pairs are always caught by a leading equality guard;
            // only distinct pairs make clause order interesting
            if p == q {
                continue;
            }
            envs.push(crate::dsl::Env {
                x: p.value().cloned(),
                y: q.value().cloned(),
                m: p.index().map(Scalar::int),
                n: q.index().map(Scalar::int),
            });
        }
    }
    crate::dsl::lint_overlap(&entry.space.spec.clauses, &envs)
}

/// The per-claim outcome map used by the bindings.
pub fn report_to_pairs(report: &Report) -> Vec<(String, String)> {
    let mut pairs = Vec::new();
    for row in &report.rows {
        let key = format!("{}.{}.{}", row.entry, row.index, row.kind);
        let value = match row.outcome {
            ClaimOutcome::Pass => "pass".to_string(),
            ClaimOutcome::Fail => "fail".to_string(),
        };
        pairs.push((key, value));
    }
    pairs
}

/// Stable map of entry name to claim count, for listings.
pub fn corpus_summary() -> Result<BTreeMap<String, usize>, CorpusError> {
    let mut map = BTreeMap::new();
    for name in corpus_names() {
        let entry = load_corpus(name)?;
        map.insert(entry.name.clone(), entry.claims.len());
    }
    Ok(map)
}
