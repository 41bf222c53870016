//! Command-line front end. Every subcommand prints a human summary followed
//! by a stable `# machine` section of key=value lines; identical invocations
//! produce byte-identical machine blocks.
//!
//! Exit statuses: 0 on success/pass, 1 when a check or claim fails, 2 for
//! usage and load errors.

use std::fmt::Write as _;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::axiom::{check_bvs, classify, minimal_s, AxiomVerdict, BvsParams, MinimalS};
use crate::completeness::{
    build_escape_map, demo_seed, parse_seed_file, verify_escape_map, EscapeError, EscapeVerdict,
};
use crate::contraction::{
    check_banach_contractive, check_ciric_max, check_kannan, check_reich,
    find_reich_coefficients, ContractionVerdict, ReichCoefficients, ReichSearch,
};
use crate::corpus::{load_corpus, run_corpus};
use crate::dsl::parse_map_spec;
use crate::picard::{
    cauchy_profile, check_suzuki, detect_fixed_points, iterate, verify_sn_strict_decrease,
    OrbitStatus, SnVerdict, SuzukiGrid, SuzukiResult,
};
use crate::scalar::Scalar;
use crate::space::{FiniteSpace, GeneratedSpace, Point, Selector, SelfMap, Space};

#[derive(Parser)]
#[command(name = "bvslab", version, about = "Exact-arithmetic toolkit for b_v(s)-metric spaces", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the polygon inequality for given v and s on a finite window
    Verify(VerifyArgs),
    /// Compute the exact minimal relaxation constant for a given v
    #[command(name = "minimal-s")]
    MinimalS(MinimalSArgs),
    /// Tabulate minimal constants for v = 1..v_max
    Classify(ClassifyArgs),
    /// Check one of the strict contractive conditions on a window
    Contraction(ContractionArgs),
    /// Search for feasible Reich coefficients by exact optimisation
    #[command(name = "reich-search")]
    ReichSearch(PairArgs),
    /// Run Picard iteration and print the orbit diagnostics
    Iterate(IterateArgs),
    /// Probe the asymptotic-uniformity implication along an orbit
    Suzuki(SuzukiArgs),
    /// Run bundled example claims
    Corpus(CorpusArgs),
    /// Build and verify the fixed-point-free escape map demo
    #[command(name = "completeness-demo")]
    CompletenessDemo(DemoArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Corpus name or file, optionally with @selector (e.g. e2@2..9)
    #[arg(long)]
    space: String,
    #[arg(long)]
    v: u32,
    /// Rational, e.g. 3 or 5/2
    #[arg(long)]
    s: String,
}

#[derive(Args)]
struct MinimalSArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    v: u32,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    space: String,
    #[arg(long, name = "v-max")]
    v_max: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Banach,
    Reich,
    Ciric,
    Kannan,
}

#[derive(Args)]
struct ContractionArgs {
    #[arg(long)]
    space: String,
    /// Corpus name (its own map) or a map file
    #[arg(long)]
    map: String,
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    c: Option<String>,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    map: String,
}

#[derive(Args)]
struct IterateArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    map: String,
    /// Start point value, a rational
    #[arg(long)]
    start: String,
    #[arg(long)]
    budget: usize,
    /// Also print tail diameters from these comma-separated start indices
    #[arg(long)]
    tails: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FactorArg {
    One,
    S2,
}

#[derive(Args)]
struct SuzukiArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    map: String,
    #[arg(long)]
    start: String,
    #[arg(long, value_enum)]
    factor: FactorArg,
    /// Relaxation constant, required with --factor s2
    #[arg(long)]
    s: Option<String>,
    /// Comma-separated epsilon list, e.g. 1,1/2,1/4
    #[arg(long)]
    eps: String,
    #[arg(long)]
    budget: usize,
}

#[derive(Args)]
struct CorpusArgs {
    #[command(subcommand)]
    action: CorpusAction,
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Evaluate the claims of one entry, a file, or `all`
    Run { target: String },
}

#[derive(Args)]
struct DemoArgs {
    /// Seed file; the built-in reciprocal demo runs when absent
    #[arg(long)]
    seed: Option<String>,
    /// Kannan weight b (0 < b < 1)
    #[arg(long)]
    b: Option<String>,
}

/// Usage-level failure, printed to stderr with exit 2.
struct UsageError(String);

impl<T: std::fmt::Display> From<T> for UsageError {
    fn from(e: T) -> Self {
        UsageError(e.to_string())
    }
}

fn parse_rat(text: &str, what: &str) -> Result<Scalar, UsageError> {
    text.parse()
        .map_err(|e| UsageError(format!("{what}: {e}")))
}

/// A loaded space argument: the generated space, the selected finite
/// window, and the scope text for reports.
struct LoadedSpace {
    space: GeneratedSpace,
    window: FiniteSpace,
    scope: String,
}

fn load_space(arg: &str) -> Result<LoadedSpace, UsageError> {
    let (name, selector) = match arg.split_once('@') {
        Some((n, sel)) => (n, Some(Selector::parse(sel)?)),
        None => (arg, None),
    };
    // corpus entry (bundled name or sectioned file) first, then a bare
    // space file of headers + clauses, which needs an explicit selector
    match load_corpus(name) {
        Ok(entry) => {
            let selector = selector.unwrap_or(entry.default_selector.clone());
            let window = entry.space.truncate(&selector)?;
            Ok(LoadedSpace {
                space: entry.space,
                window,
                scope: selector.to_string(),
            })
        }
        Err(corpus_err) => {
            let is_file = name.contains('/') || name.ends_with(".bvs");
            if !is_file {
                return Err(corpus_err.into());
            }
            let source = std::fs::read_to_string(name)
                .map_err(|e| UsageError(format!("cannot read {name}: {e}")))?;
            let spec = crate::dsl::parse_space_spec(&source).map_err(|diags| {
                let lines: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
                UsageError(format!("{corpus_err}; as a bare space file:\n{}", lines.join("\n")))
            })?;
            let space = GeneratedSpace::from_spec(spec)?;
            let selector = selector.ok_or(UsageError(
                "bare space files need an explicit @selector".into(),
            ))?;
            let window = space.truncate(&selector)?;
            Ok(LoadedSpace {
                space,
                window,
                scope: selector.to_string(),
            })
        }
    }
}

fn load_map(arg: &str, _loaded: &LoadedSpace) -> Result<SelfMap, UsageError> {
    // a bundled entry name means that entry's own map
    if !arg.contains('/') && !arg.ends_with(".map") {
        let entry = load_corpus(arg)?;
        return Ok(entry.map);
    }
    if arg.ends_with(".bvs") {
        return Ok(load_corpus(arg)?.map);
    }
    let source =
        std::fs::read_to_string(arg).map_err(|e| UsageError(format!("cannot read {arg}: {e}")))?;
    let spec = parse_map_spec(&source).map_err(|diags| {
        let lines: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
        UsageError(format!("map parse errors:\n{}", lines.join("\n")))
    })?;
    Ok(SelfMap::from_spec(spec))
}

fn contraction_lines(out: &mut String, verdict: &ContractionVerdict, scope: &str) -> i32 {
    let _ = writeln!(
        out,
        "{} on sample {scope}: {}",
        verdict.kind,
        if verdict.passed() { "pass" } else { "FAIL" }
    );
    let _ = writeln!(out, "# machine");
    let _ = writeln!(out, "op=contraction");
    let _ = writeln!(out, "kind={}", verdict.kind);
    let _ = writeln!(out, "scope={scope}");
    let _ = writeln!(out, "pairs={}", verdict.pairs_checked);
    match verdict.witness() {
        None => {
            let _ = writeln!(out, "verdict=pass");
            0
        }
        Some(w) => {
            let _ = writeln!(out, "verdict=fail");
            let _ = writeln!(out, "witness.x={}", w.x);
            let _ = writeln!(out, "witness.y={}", w.y);
            let _ = writeln!(out, "witness.lhs={}", w.lhs);
            let _ = writeln!(out, "witness.rhs={}", w.rhs);
            1
        }
    }
}

fn run(cli: Cli) -> Result<(String, i32), UsageError> {
    let mut out = String::new();
    let status = match cli.command {
        Command::Verify(args) => {
            let loaded = load_space(&args.space)?;
            let s = parse_rat(&args.s, "--s")?;
            let params = BvsParams::new(args.v, s)?;
            let verdict = check_bvs(&loaded.window, &params);
            let _ = writeln!(
                out,
                "polygon inequality on {} (v={}, s={}): {}",
                loaded.scope,
                params.v(),
                params.s(),
                match &verdict {
                    AxiomVerdict::Pass => "pass".into(),
                    AxiomVerdict::PassVacuous => "pass (vacuous)".into(),
                    AxiomVerdict::Fail(w) => format!("FAIL at ({}, {})", w.x, w.y),
                }
            );
            let _ = writeln!(out, "# machine");
            let _ = writeln!(out, "op=verify");
            let _ = writeln!(out, "scope={}", loaded.scope);
            let _ = writeln!(out, "v={}", params.v());
            let _ = writeln!(out, "s={}", params.s());
            match verdict {
                AxiomVerdict::Pass => {
                    let _ = writeln!(out, "verdict=pass");
                    0
                }
                AxiomVerdict::PassVacuous => {
                    let _ = writeln!(out, "verdict=pass-vacuous");
                    0
                }
                AxiomVerdict::Fail(w) => {
                    let _ = writeln!(out, "verdict=fail");
                    let _ = writeln!(out, "witness.x={}", w.x);
                    let _ = writeln!(out, "witness.y={}", w.y);
                    let chain: Vec<String> = w.chain.iter().map(|p| p.to_string()).collect();
                    let _ = writeln!(out, "witness.chain={}", chain.join(","));
                    let _ = writeln!(out, "witness.lhs={}", w.lhs);
                    let _ = writeln!(out, "witness.chain_sum={}", w.chain_sum);
                    1
                }
            }
        }
        Command::MinimalS(args) => {
            let loaded = load_space(&args.space)?;
            let result = minimal_s(&loaded.window, args.v);
            match &result {
                MinimalS::Vacuous => {
                    let _ = writeln!(
                        out,
                        "minimal s on {} at v={}: vacuous (needs {} points)",
                        loaded.scope,
                        args.v,
                        args.v + 2
                    );
                }
                MinimalS::Bound { s_min, raw_ratio, witness } => {
                    let _ = writeln!(
                        out,
                        "minimal s on {} at v={}: s_min = {s_min} (raw ratio {raw_ratio}), witness pair ({}, {})",
                        loaded.scope, args.v, witness.x, witness.y
                    );
                }
            }
            let _ = writeln!(out, "# machine");
            let _ = writeln!(out, "op=minimal-s");
            let _ = writeln!(out, "scope={}", loaded.scope);
            let _ = writeln!(out, "v={}", args.v);
            match result {
                MinimalS::Vacuous => {
                    let _ = writeln!(out, "vacuous=true");
                }
                MinimalS::Bound { s_min, raw_ratio, witness } => {
                    let _ = writeln!(out, "s_min={s_min}");
                    let _ = writeln!(out, "raw_ratio={raw_ratio}");
                    let _ = writeln!(out, "witness.x={}", witness.x);
                    let _ = writeln!(out, "witness.y={}", witness.y);
                    let chain: Vec<String> =
                        witness.chain.iter().map(|p| p.to_string()).collect();
                    let _ = writeln!(out, "witness.chain={}", chain.join(","));
                    let _ = writeln!(out, "witness.chain_sum={}", witness.chain_sum);
                }
            }
            0
        }
        Command::Classify(args) => {
            let loaded = load_space(&args.space)?;
            let rows = classify(&loaded.window, args.v_max);
            let _ = writeln!(out, "classification of {}:", loaded.scope);
            for (v, m) in &rows {
                match m {
                    MinimalS::Vacuous => {
                        let _ = writeln!(out, "  v={v}: vacuous (needs {} points)", v + 2);
                    }
                    MinimalS::Bound { s_min, witness, .. } => {
                        let _ = writeln!(
                            out,
                            "  v={v}: s_min = {s_min} at ({}, {})",
                            witness.x, witness.y
                        );
                    }
                }
            }
            let _ = writeln!(out, "# machine");
            let _ = writeln!(out, "op=classify");
            let _ = writeln!(out, "scope={}", loaded.scope);
            for (v, m) in &rows {
                match m {
                    MinimalS::Vacuous => {
                        let _ = writeln!(out, "v.{v}=vacuous");
                    }
                    MinimalS::Bound { s_min, .. } => {
                        let _ = writeln!(out, "v.{v}.s_min={s_min}");
                    }
                }
            }
            0
        }
        Command::Contraction(args) => {
            let loaded = load_space(&args.space)?;
            let map = load_map(&args.map, &loaded)?;
            let sample = loaded.window.points().to_vec();
            let verdict = match args.kind {
                KindArg::Banach => {
                    check_banach_contractive(&loaded.space, &sample, &map)?
                }
                KindArg::Reich => {
                    let a = parse_rat(args.a.as_deref().ok_or(UsageError("--a required for reich".into()))?, "--a")?;
                    let b = parse_rat(args.b.as_deref().ok_or(UsageError("--b required for reich".into()))?, "--b")?;
                    let c = parse_rat(args.c.as_deref().ok_or(UsageError("--c required for reich".into()))?, "--c")?;
                    let coeffs = ReichCoefficients::new(a, b, c)?;
                    check_reich(&loaded.space, &sample, &map, &coeffs)?
                }
                KindArg::Ciric => check_ciric_max(&loaded.space, &sample, &map)?,
                KindArg::Kannan => {
                    let b = parse_rat(args.b.as_deref().ok_or(UsageError("--b required for kannan".into()))?, "--b")?;
                    let c = parse_rat(args.c.as_deref().ok_or(UsageError("--c required for kannan".into()))?, "--c")?;
                    check_kannan(&loaded.space, &sample, &map, b, c)?
                }
            };
            contraction_lines(&mut out, &verdict, &loaded.scope)
        }
        Command::ReichSearch(args) => {
            let loaded = load_space(&args.space)?;
            let map = load_map(&args.map, &loaded)?;
            let sample = loaded.window.points().to_vec();
            let result = find_reich_coefficients(&loaded.space, &sample, &map)?;
            match &result {
                ReichSearch::Feasible { coeffs, slack } => {
                    let _ = writeln!(
                        out,
                        "feasible: a={} b={} c={} with slack {slack}",
                        coeffs.a, coeffs.b, coeffs.c
                    );
                }
                ReichSearch::Infeasible { certificate } => {
                    let _ = writeln!(
                        out,
                        "infeasible: {} pair(s) pin the simplex",
                        certificate.len()
                    );
                }
            }
            let _ = writeln!(out, "# machine");
            let _ = writeln!(out, "op=reich-search");
            let _ = writeln!(out, "scope={}", loaded.scope);
            match result {
                ReichSearch::Feasible { coeffs, slack } => {
                    let _ = writeln!(out, "feasible=true");
                    let _ = writeln!(out, "a={}", coeffs.a);
                    let _ = writeln!(out, "b={}", coeffs.b);
                    let _ = writeln!(out, "c={}", coeffs.c);
                    let _ = writeln!(out, "slack={slack}");
                    0
                }
                ReichSearch::Infeasible { certificate } => {
                    let _ = writeln!(out, "feasible=false");
                    for (i, (x, y)) in certificate.iter().enumerate() {
                        let _ = writeln!(out, "certificate.{i}=({x},{y})");
                    }
                    1
                }
            }
        }
        Command::Iterate(args) => {
            let loaded = load_space(&args.space)?;
            let map = load_map(&args.map, &loaded)?;
            let start_value = parse_rat(&args.start, "--start")?;
            let start = loaded.space.resolve_value(&start_value)?;
            let mut orbit = iterate(&loaded.space, &map, &start, args.budget)?;
            if let OrbitStatus::FixedPoint { point, .. } = orbit.status.clone() {
                orbit.attach_limit(&loaded.space, &point)?;
            }
            let labels: Vec<String> = orbit.points.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(out, "orbit: {}", labels.join(" -> "));
            let s_strs: Vec<String> = orbit.s_seq.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "step distances: {}", s_strs.join(", "));
            let sn = verify_sn_strict_decrease(&orbit);
            let status_text = match &orbit.status {
                OrbitStatus::FixedPoint { point, index } => {
                    format!("fixed point {point} at step {index}")
                }
                OrbitStatus::Cycle { entry, period } => {
                    format!("cycle entered at {entry} with period {period}")
                }
                OrbitStatus::BudgetExhausted => "budget exhausted".into(),
            };
            let _ = writeln!(out, "status: {status_text}");
            let fixed = detect_fixed_points(&loaded.space, loaded.window.points(), &map)?;
            let fixed_strs: Vec<String> = fixed.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(
                out,
                "fixed points on {}: {{{}}}",
                loaded.scope,
                fixed_strs.join(", ")
            );
            let tail_rows = match &args.tails {
                Some(spec) => {
                    let starts: Vec<usize> = spec
                        .split(',')
                        .map(|t| t.trim().parse::<usize>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| UsageError("--tails wants integers".into()))?;
                    let rows = cauchy_profile(&loaded.space, &orbit, &starts)?;
                    for (n, d) in &rows {
                        let _ = writeln!(out, "tail diameter from {n}: {d}");
                    }
                    rows
                }
                None => Vec::new(),
            };
            let _ = writeln!(out, "# machine");
            let _ = writeln!(out, "op=iterate");
            let _ = writeln!(out, "start={}", orbit.start);
            let _ = writeln!(out, "budget={}", args.budget);
            let _ = writeln!(out, "points={}", labels.join(","));
            let _ = writeln!(out, "s_seq={}", s_strs.join(","));
            if let Some(t) = &orbit.t_seq {
                let t_strs: Vec<String> = t.iter().map(|s| s.to_string()).collect();
                let _ = writeln!(out, "t_seq={}", t_strs.join(","));
            }
            let _ = writeln!(
                out,
                "status={}",
                match &orbit.status {
                    OrbitStatus::FixedPoint { point, index } =>
                        format!("fixed-point:{point}:{index}"),
                    OrbitStatus::Cycle { entry, period } => format!("cycle:{entry}:{period}"),
                    OrbitStatus::BudgetExhausted => "budget-exhausted".into(),
                }
            );
            let _ = writeln!(
                out,
                "s_strictly_decreasing={}",
                matches!(sn, SnVerdict::Pass)
            );
            let _ = writeln!(out, "fixed_points={}", fixed_strs.join(","));
            for (n, d) in &tail_rows {
                let _ = writeln!(out, "tail.{n}={d}");
            }
            0
        }
        Command::Suzuki(args) => {
            let loaded = load_space(&args.space)?;
            let map = load_map(&args.map, &loaded)?;
            let start_value = parse_rat(&args.start, "--start")?;
            let start = loaded.space.resolve_value(&start_value)?;
            let factor = match args.factor {
                FactorArg::One => Scalar::one(),
                FactorArg::S2 => {
                    let s = parse_rat(
                        args.s.as_deref().ok_or(UsageError("--s required with --factor s2".into()))?,
                        "--s",
                    )?;
                    &s * &s
                }
            };
            let eps_list: Vec<Scalar> = args
                .eps
                .split(',')
                .map(|t| parse_rat(t.trim(), "--eps"))
                .collect::<Result<_, _>>()?;
            let orbit = iterate(&loaded.space, &map, &start, args.budget)?;
            let findings = check_suzuki(
                &loaded.space,
                &orbit,
                &factor,
                &eps_list,
                &SuzukiGrid::default(),
            )?;
            let mut all_supported = true;
            for f in &findings {
                match &f.result {
                    SuzukiResult::SupportedUpToHorizon { delta, start_index } => {
                        let _ = writeln!(
                            out,
                            "eps {}: supported up to horizon {} with delta {delta}, N {start_index}",
                            f.epsilon, f.horizon
                        );
                    }
                    SuzukiResult::RefutedUpToGrid { witnesses } => {
                        all_supported = false;
                        let _ = writeln!(
                            out,
                            "eps {}: refuted for all {} grid candidates",
                            f.epsilon,
                            witnesses.len()
                        );
                        if let Some(w) = witnesses.first() {
                            let _ = writeln!(
                                out,
                                "  e.g. delta {}, N {}: d(u{}, u{}) = {} but d(u{}, u{}) = {}",
                                w.delta, w.start_index, w.n, w.m, w.premise,
                                w.n + 1, w.m + 1, w.conclusion
                            );
                        }
                    }
                }
            }
            let _ = writeln!(out, "# machine");
            let _ = writeln!(out, "op=suzuki");
            let _ = writeln!(out, "factor={factor}");
            let _ = writeln!(out, "budget={}", args.budget);
            for f in &findings {
                match &f.result {
                    SuzukiResult::SupportedUpToHorizon { delta, start_index } => {
                        let _ = writeln!(
                            out,
                            "eps.{}.result=supported delta={delta} N={start_index}",
                            f.epsilon
                        );
                    }
                    SuzukiResult::RefutedUpToGrid { witnesses } => {
                        let _ = writeln!(out, "eps.{}.result=refuted", f.epsilon);
                        if let Some(w) = witnesses.first() {
                            let _ = writeln!(
                                out,
                                "eps.{}.witness=n:{},m:{},premise:{},conclusion:{}",
                                f.epsilon, w.n, w.m, w.premise, w.conclusion
                            );
                        }
                    }
                }
            }
            if all_supported {
                0
            } else {
                1
            }
        }
        Command::Corpus(args) => match args.action {
            CorpusAction::Run { target } => {
                let names: Vec<String> = if target == "all" {
                    crate::corpus::corpus_names().iter().map(|s| s.to_string()).collect()
                } else {
                    vec![target.clone()]
                };
                for name in &names {
                    let entry = load_corpus(name)?;
                    for warning in crate::corpus::lint_entry(&entry) {
                        eprintln!("warning: {name}: {warning}");
                    }
                }
                let report = run_corpus(&target)?;
                out.push_str(&report.render());
                report.exit_status()
            }
        },
        Command::CompletenessDemo(args) => {
            let b_override = args.b.as_deref().map(|t| parse_rat(t, "--b")).transpose()?;
            match &args.seed {
                Some(path) => {
                    let source = std::fs::read_to_string(path)
                        .map_err(|e| UsageError(format!("cannot read {path}: {e}")))?;
                    let file = parse_seed_file(&source)?;
                    let b = b_override.unwrap_or(file.b.clone());
                    demo_lines(&mut out, &file.seed, &file.sample, &b, "seed-file")?
                }
                None => {
                    let b = b_override.unwrap_or(Scalar::ratio(1, 2));
                    let (seed, sample) = demo_seed(false);
                    let demo_status = demo_lines(&mut out, &seed, &sample, &b, "demo")?;
                    // contrapositive control: the limit joins the space and
                    // the construction must reject it
                    let (control_seed, control_sample) = demo_seed(true);
                    let control = build_escape_map(&control_seed, &control_sample, &b);
                    let control_status = match control {
                        Err(EscapeError::ZeroDistanceToRange(label)) => {
                            let _ = writeln!(
                                out,
                                "control: rejected as expected (zero gap at {label})"
                            );
                            let _ = writeln!(out, "control.rejected=true");
                            let _ = writeln!(out, "control.zero_gap_at={label}");
                            0
                        }
                        Err(other) => {
                            let _ = writeln!(out, "control: unexpected error {other}");
                            let _ = writeln!(out, "control.rejected=error");
                            1
                        }
                        Ok(_) => {
                            let _ = writeln!(
                                out,
                                "control: construction unexpectedly succeeded"
                            );
                            let _ = writeln!(out, "control.rejected=false");
                            1
                        }
                    };
                    demo_status.max(control_status)
                }
            }
        }
    };
    Ok((out, status))
}

fn demo_lines(
    out: &mut String,
    seed: &crate::completeness::CauchySeed,
    sample: &[Point],
    b: &Scalar,
    label: &str,
) -> Result<i32, UsageError> {
    let construction = build_escape_map(seed, sample, b)?;
    let verdict = verify_escape_map(&construction, seed, b)?;
    let _ = writeln!(
        out,
        "{label}: escape map over {} sample points ({} members, {} outsiders), b = {b}",
        sample.len(),
        construction.member_choice.len(),
        construction.outsider_choice.len()
    );
    if construction.prefix_relative {
        let _ = writeln!(out, "{label}: verdict is prefix-relative (no tail certificate)");
    }
    let status = match &verdict {
        EscapeVerdict::Pass { ordered_pairs, member_member, outsider_outsider, mixed } => {
            let _ = writeln!(
                out,
                "{label}: kannan-strict on {ordered_pairs} ordered pairs \
                 ({member_member} member/member, {outsider_outsider} outsider/outsider, {mixed} mixed), no fixed point"
            );
            0
        }
        EscapeVerdict::FailKannan(w) => {
            let _ = writeln!(
                out,
                "{label}: FAIL kannan at ({}, {}): lhs {} rhs {}",
                w.x, w.y, w.lhs, w.rhs
            );
            1
        }
        EscapeVerdict::FailFixedPoint(p) => {
            let _ = writeln!(out, "{label}: FAIL fixed point at {p}");
            1
        }
    };
    let _ = writeln!(out, "# machine");
    let _ = writeln!(out, "op=completeness-demo");
    let _ = writeln!(out, "b={b}");
    let _ = writeln!(out, "sample={}", sample.len());
    let _ = writeln!(out, "members={}", construction.member_choice.len());
    let _ = writeln!(out, "outsiders={}", construction.outsider_choice.len());
    let _ = writeln!(out, "prefix_relative={}", construction.prefix_relative);
    let _ = writeln!(out, "verdict={}", if status == 0 { "pass" } else { "fail" });
    for (n0, np) in &construction.member_choice {
        let _ = writeln!(out, "member.{n0}={np}");
    }
    for (p, nx) in &construction.outsider_choice {
        let _ = writeln!(out, "outsider.{p}={nx}");
    }
    Ok(status)
}

/// Entry point used by the binary and by tests. Returns the process exit
/// status.
pub fn dispatch(args: &[String]) -> i32 {
    let mut argv = vec!["bvslab".to_string()];
    argv.extend(args.iter().cloned());
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    2
                }
            };
        }
    };
    match run(cli) {
        Ok((out, status)) => {
            print!("{out}");
            status
        }
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            2
        }
    }
}

/// Like `dispatch` but capturing stdout, for tests.
pub fn dispatch_captured(args: &[String]) -> (String, i32) {
    let mut argv = vec!["bvslab".to_string()];
    argv.extend(args.iter().cloned());
    match Cli::try_parse_from(&argv) {
        Ok(cli) => match run(cli) {
            Ok((out, status)) => (out, status),
            Err(UsageError(message)) => (format!("error: {message}"), 2),
        },
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (e.to_string(), 0),
            _ => (e.to_string(), 2),
        },
    }
}
