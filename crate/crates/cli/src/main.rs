//! `hfp`: scenario-driven front end for hfp-core.
//!
//! Exit codes: 0 result produced (including an inconclusive verdict),
//! 1 no rule applies and a rank refutation was produced, 2 parse or
//! validation failure, 3 budget exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hfp_core::abelian::StructuredAbelian;
use hfp_core::checker::{run_all, Rule, Status, Verdict};
use hfp_core::cohomology::{CohomologyEngine, ContinuousCohomology, ContinuousValue, Evidence};
use hfp_core::hfpss::{collapse_and_abutment, render_chart, ChartFormat, FORMAT_VERSION};
use hfp_core::profinite::{canonical_tower_with, ProfiniteDescriptor};
use hfp_core::scenario::Scenario;
use hfp_core::spectra::homotopy_of;
use hfp_core::{Error, Execution};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "hfp",
    version,
    about = "Continuous cohomology, E2 pages and weak-equivalence criteria for scenario files"
)]
struct Cli {
    /// Run every computation on the current thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChartArg {
    Text,
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Supernatural order of the scenario's group.
    Order { file: PathBuf },
    /// Canonical quotient tower of the group.
    Tower {
        file: PathBuf,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// H^s of each tower quotient with coefficients the values of π_t(X) in the window.
    Cohom {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        s: usize,
    },
    /// Continuous cohomology H^s_c(G; π_t X) with the stabilization report.
    Ccohom {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// E2 page of the homotopy fixed point spectral sequence.
    E2 {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ChartArg::Text)]
        format: ChartArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Use the k-th member of the scenario's family instead of G.
        #[arg(long)]
        member: Option<u32>,
    },
    /// Full verdict report.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<(String, u8), Failure>;

fn load(path: &Path) -> Result<Scenario, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(Scenario::from_json(&text)?)
}

fn window_values(sc: &Scenario) -> Vec<(Vec<i64>, StructuredAbelian)> {
    let mut out: Vec<(Vec<i64>, StructuredAbelian)> = Vec::new();
    for t in sc.limits.window().degrees() {
        let v = homotopy_of(&sc.spectrum, t);
        match out.iter_mut().find(|(_, w)| *w == v) {
            Some((ts, _)) => ts.push(t),
            None => out.push((vec![t], v)),
        }
    }
    out
}

fn degrees(ts: &[i64]) -> String {
    if ts.len() > 6 {
        format!(
            "{} degrees from {} to {}",
            ts.len(),
            ts[0],
            ts[ts.len() - 1]
        )
    } else {
        ts.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
    }
}

fn order(sc: &Scenario) -> Outcome {
    let g = &sc.group;
    Ok((format!("G = {}\n#G = {}\n", g.label(), g.order()?), 0))
}

fn tower(sc: &Scenario, depth: Option<u32>, exec: Execution) -> Outcome {
    let depth = depth.unwrap_or(sc.limits.tower_depth);
    let config = sc.config(exec);
    let t = canonical_tower_with(&sc.group, depth, &config.budgets, exec)?;
    let shape = sc.group.shape()?;
    let mut out = format!("G = {}\n", sc.group.label());
    for l in &t.levels {
        let _ = writeln!(
            out,
            "level {}: Q = {} (order {}), kernel {}",
            l.level,
            l.quotient.label(),
            l.quotient.size(),
            l.kernel.label(&shape)
        );
    }
    Ok((out, 0))
}

fn cohom(sc: &Scenario, s: usize, exec: Execution) -> Outcome {
    let config = sc.config(exec);
    let engine = CohomologyEngine::new(config);
    let t = canonical_tower_with(&sc.group, sc.limits.tower_depth, &config.budgets, exec)?;
    let mut out = format!(
        "H^{s}(Q_j; M) along the canonical tower of {}\n",
        sc.group.label()
    );
    for (ts, m) in window_values(sc) {
        let _ = writeln!(out, "M = {m} (t = {})", degrees(&ts));
        for l in &t.levels {
            let q = ProfiniteDescriptor::finite(l.quotient.clone());
            let r = engine.continuous_cohomology(&q, &m, s, sc.limits.tower_depth)?;
            let v = r
                .determined()
                .map(|g| g.label())
                .unwrap_or_else(|| "?".into());
            let _ = writeln!(out, "  j={} Q={}: {v}", l.level, l.quotient.label());
        }
    }
    Ok((out, 0))
}

fn evidence_text(e: &Evidence) -> String {
    let join = |levels: &[hfp_core::abelian::FgAbelianGroup]| {
        levels
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    match e {
        Evidence::Symbolic { reason } => format!("symbolic: {reason}"),
        Evidence::Finite { group } => format!("exact, finite group {group}"),
        Evidence::Stabilized {
            rule,
            depth,
            levels,
            transitions,
        } => format!(
            "stabilized at depth {depth} ({rule:?}); levels [{}]; transitions {transitions:?}",
            join(levels)
        ),
        Evidence::Unstable {
            depth,
            levels,
            transitions,
        } => format!(
            "not stable at depth {depth}; levels [{}]; transitions {transitions:?}",
            join(levels)
        ),
    }
}

fn ccohom(
    sc: &Scenario,
    s: usize,
    depth: Option<u32>,
    format: ReportFormat,
    exec: Execution,
) -> Outcome {
    let depth = depth.unwrap_or(sc.limits.tower_depth);
    let engine = CohomologyEngine::new(sc.config(exec));
    let mut rows: Vec<(Vec<i64>, StructuredAbelian, ContinuousCohomology)> = Vec::new();
    for (ts, m) in window_values(sc) {
        let r = engine.continuous_cohomology(&sc.group, &m, s, depth)?;
        rows.push((ts, m, r));
    }
    let out = match format {
        ReportFormat::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(ts, m, r)| {
                    let value = r.determined().map(|g| g.label());
                    json!({"degrees": ts, "coefficients": m.label(), "value": value, "result": r})
                })
                .collect();
            let doc = json!({"format_version": FORMAT_VERSION, "group": sc.group.label(), "degree": s, "depth": depth, "values": items});
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        ReportFormat::Text => {
            let mut out = format!("H^{s}_c({}; M), tower depth {depth}\n", sc.group.label());
            for (ts, m, r) in &rows {
                let v = match &r.value {
                    ContinuousValue::Determined { group } => group.label(),
                    ContinuousValue::UndeterminedAt { depth } => {
                        format!("undetermined at depth {depth}")
                    }
                };
                let _ = writeln!(out, "M = {m} (t = {}): {v}", degrees(ts));
                for p in &r.pieces {
                    let _ = writeln!(
                        out,
                        "  {} ^{}: {}",
                        p.coefficients,
                        p.multiplicity,
                        evidence_text(&p.evidence)
                    );
                }
            }
            out
        }
    };
    Ok((out, 0))
}

fn e2(
    sc: &Scenario,
    format: ChartArg,
    out: Option<&Path>,
    member: Option<u32>,
    exec: Execution,
) -> Outcome {
    let engine = CohomologyEngine::new(sc.config(exec));
    let (window, depth) = (sc.limits.window(), sc.limits.tower_depth);
    let page = match member {
        None => engine.e2_page(&sc.group, &sc.spectrum, window, depth)?,
        Some(k) => {
            let reps = sc.family_or_canonical().representatives(&sc.group, k + 1)?;
            let u = reps
                .get(k as usize)
                .ok_or_else(|| Failure::Input(format!("family has no member {k}")))?;
            engine.e2_page_for_subgroup(&sc.group, u, &sc.spectrum, window, depth)?
        }
    };
    let fmt = match format {
        ChartArg::Text => ChartFormat::Text,
        ChartArg::Json => ChartFormat::Json,
        ChartArg::Svg => ChartFormat::Svg,
    };
    let mut chart = render_chart(&page, fmt);
    if matches!(format, ChartArg::Text) {
        let ab = collapse_and_abutment(&page, &sc.spectrum);
        let _ = writeln!(
            chart,
            "\nabutment: {}",
            serde_json::to_string(&ab).expect("serializable")
        );
    }
    match out {
        Some(path) => {
            std::fs::write(path, &chart)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok((String::new(), 0))
        }
        None => Ok((chart, 0)),
    }
}

fn status_text(s: Status) -> String {
    match s {
        Status::Symbolic => "symbolic".into(),
        Status::DepthChecked { depth } => format!("depth-checked({depth})"),
    }
}

fn report_text(sc: &Scenario, v: &Verdict) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group: {}", sc.group.label());
    let _ = writeln!(out, "spectrum: {}", sc.spectrum.label());
    let verdict = if v.rule == Rule::None {
        "None (inconclusive)".to_string()
    } else {
        format!("{:?}", v.rule)
    };
    let _ = writeln!(out, "rule: {verdict}");
    if !v.conclusions.is_empty() {
        out.push_str("conclusions:\n");
        for c in &v.conclusions {
            let _ = writeln!(out, "  [{:?}] {}: {}", c.kind, c.subject, c.statement);
        }
    }
    if !v.certificates.is_empty() {
        out.push_str("certificates:\n");
        for c in &v.certificates {
            let _ = writeln!(
                out,
                "  [{}] {}: {}",
                status_text(c.status),
                c.hypothesis,
                c.detail
            );
            for i in &c.imports {
                let _ = writeln!(out, "      imported: {i}");
            }
        }
    }
    if !v.obstructions.is_empty() {
        out.push_str("obstructions:\n");
        for o in &v.obstructions {
            let rank = o
                .rank
                .map(|r| r.to_string())
                .unwrap_or_else(|| format!("{}^{}", o.p, o.n * o.r));
            let _ = writeln!(
                out,
                "  rank {rank} (p={}, n={}, r={}): {}",
                o.p, o.n, o.r, o.statement
            );
        }
    }
    if !v.failures.is_empty() {
        out.push_str("failed rules:\n");
        for f in &v.failures {
            let _ = writeln!(out, "  {:?}: {}", f.rule, f.reason);
        }
    }
    if !v.also_applicable.is_empty() {
        let names: Vec<String> = v.also_applicable.iter().map(|r| format!("{r:?}")).collect();
        let _ = writeln!(out, "also applicable: {}", names.join(", "));
    }
    for d in &v.diagnostics {
        let _ = writeln!(out, "note: {d}");
    }
    out
}

fn check(sc: &Scenario, format: ReportFormat, exec: Execution) -> Outcome {
    let engine = CohomologyEngine::new(sc.config(exec));
    let v = run_all(&engine, sc)?;
    let code = if v.rule == Rule::None && !v.obstructions.is_empty() {
        1
    } else {
        0
    };
    let out = match format {
        ReportFormat::Json => {
            let doc = json!({
                "format_version": FORMAT_VERSION,
                "scenario_echo": sc,
                "verdict": v,
                "diagnostics": v.diagnostics,
            });
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        ReportFormat::Text => report_text(sc, &v),
    };
    Ok((out, code))
}

fn run(cli: Cli) -> Outcome {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Order { file } => order(&load(&file)?),
        Command::Tower { file, depth } => tower(&load(&file)?, depth, exec),
        Command::Cohom { file, s } => cohom(&load(&file)?, s, exec),
        Command::Ccohom {
            file,
            s,
            depth,
            format,
        } => ccohom(&load(&file)?, s, depth, format, exec),
        Command::E2 {
            file,
            format,
            out,
            member,
        } => e2(&load(&file)?, format, out.as_deref(), member, exec),
        Command::Check { file, format } => check(&load(&file)?, format, exec),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
