//! `chromoduli`: batch front end for the library.
//!
//! Results go to stdout as JSON, diagnostics to stderr. Exit codes:
//! 0 success (and, for `verify`, full agreement), 1 disagreement or a failed
//! certificate, 2 unreadable or invalid input, 3 a computation ran out of
//! budget.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use chromoduli::arrangement::{bounded_chambers_bijective, bounded_chambers_lp, build_arrangement, DEFAULT_LP_BUDGET};
use chromoduli::chromatic::chromatic_polynomial;
use chromoduli::critical::{count_critical_points, WeightVector, DEFAULT_SEED};
use chromoduli::digraph_poly::{chi_report, Direction};
use chromoduli::graph::{parse_graph_text, GraphInput, SimpleGraph};
use chromoduli::moduli::{
    kapranov_degree_with, omega_with, Constraint, EngineOptions, MarkingSet, NeighborhoodMode, Strategy,
    DEFAULT_TERM_CAP,
};
use chromoduli::orientation::DEFAULT_BUDGET;
use chromoduli::verify::{omega_one_zero_by_formula, verify, RowStatus, VerifyOptions, VerifyReport};
use chromoduli::Error;

const FIG1: &str = include_str!("../../../fixtures/fig1.txt");
const FIG2: &str = include_str!("../../../fixtures/fig2.txt");

#[derive(Parser)]
#[command(
    name = "chromoduli",
    version,
    about = "Chromatic polynomials and psi-class intersection numbers of graphs"
)]
struct Cli {
    /// Human-readable output instead of compact JSON.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Budgets {
    /// Cap on candidates in the brute-force enumerations.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget_enum: u128,
    /// Cap on LP solves in the chamber search.
    #[arg(long, global = true, default_value_t = DEFAULT_LP_BUDGET)]
    budget_lp: u128,
    /// Cap on live terms in the moduli engine.
    #[arg(long, global = true, default_value_t = DEFAULT_TERM_CAP)]
    budget_terms: usize,
}

impl Budgets {
    fn engine(&self, strategy: Strategy) -> EngineOptions {
        EngineOptions {
            strategy,
            term_cap: self.budget_terms,
            ..EngineOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compare every method on a set of graphs. Without --graph, runs the
    /// bundled example graph and digraph.
    Verify {
        #[arg(long)]
        graph: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = [3, 4])]
        m: Vec<u32>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Echo a parsed graph file as JSON.
    Show {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Chromatic polynomial coefficients, constant term first.
    Chromatic {
        #[arg(long)]
        graph: PathBuf,
    },
    /// The intersection number omega_{G,g,m}.
    Omega {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        g: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Undirected)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = StrategyArg::Divisors)]
        strategy: StrategyArg,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Degree of a product of pulled-back psi classes. The file holds either
    /// an array of {"set": [...], "point": i} or an object
    /// {"markings": [...], "constraints": [...]}.
    Kapranov {
        #[arg(long)]
        constraints: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Divisors)]
        strategy: StrategyArg,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Bounded chambers of the graphical arrangement.
    Chambers {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value_t = ChamberMethod::Bijective)]
        method: ChamberMethod,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// One certified critical point of the master function per bounded
    /// chamber.
    CriticalPoints {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long, conflicts_with = "weights")]
        seed: Option<u64>,
        /// JSON array with one positive weight per hyperplane.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// The digraph polynomials chi^in and chi^out.
    Chi {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = ChiMode::Both)]
        mode: ChiMode,
        /// Also interpolate from the engine and compare.
        #[arg(long)]
        cross_check: bool,
        #[command(flatten)]
        budgets: Budgets,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum ModeArg {
    Undirected,
    In,
    Out,
}

#[derive(ValueEnum, Clone, Copy)]
enum StrategyArg {
    Divisors,
    Restriction,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Divisors => Strategy::Divisors,
            StrategyArg::Restriction => Strategy::Restriction,
        }
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum ChamberMethod {
    Bijective,
    Lp,
}

#[derive(ValueEnum, Clone, Copy)]
enum ChiMode {
    In,
    Out,
    Both,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 3,
            Error::NoConvergence { .. } | Error::Interpolation(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<GraphInput, Failure> {
    parse_graph_text(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_simple(path: &Path) -> Result<SimpleGraph, Failure> {
    match load_graph(path)? {
        GraphInput::Graph(g) => Ok(g),
        GraphInput::Digraph(_) => Err(Failure::input(format!(
            "{}: expected an undirected graph",
            path.display()
        ))),
    }
}

fn emit(value: &Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    println!("{}", text.expect("JSON values always serialize"));
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn verify_table(r: &VerifyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<12} {:<12} {:>3} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}  status",
        "graph", "kind", "m", "chromatic", "stanley", "bijective", "lp", "critical", "engine"
    );
    for row in &r.rows {
        let show = |v: &Option<_>| match v {
            Some(x) => format!("{x}"),
            None => "-".to_string(),
        };
        let kind = to_json(&row.kind);
        let status = to_json(&row.status);
        let _ = writeln!(
            out,
            "{:<12} {:<12} {:>3} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}  {}",
            row.graph,
            kind.as_str().unwrap_or(""),
            row.m,
            show(&row.chromatic),
            show(&row.stanley_pairs),
            show(&row.chambers_bijective),
            show(&row.chambers_lp),
            show(&row.critical_points),
            show(&row.engine),
            status.as_str().unwrap_or("")
        );
    }
    out
}

fn run_verify(graphs: &[PathBuf], m: &[u32], seed: u64, b: &Budgets, pretty: bool) -> Outcome {
    let inputs: Vec<(String, GraphInput)> = if graphs.is_empty() {
        vec![
            ("fig1".to_string(), parse_graph_text(FIG1)?),
            ("fig2".to_string(), parse_graph_text(FIG2)?),
        ]
    } else {
        graphs
            .iter()
            .map(|p| {
                let name = p
                    .file_stem()
                    .map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into());
                Ok((name, load_graph(p)?))
            })
            .collect::<Result<_, Failure>>()?
    };
    let opts = VerifyOptions {
        seed,
        enumeration_budget: b.budget_enum,
        lp_budget: b.budget_lp,
        term_cap: b.budget_terms,
    };
    let report = verify(&inputs, m, &opts)?;
    if pretty {
        print!("{}", verify_table(&report));
    } else {
        for row in &report.rows {
            emit(&to_json(row), false);
        }
    }
    for row in report.rows.iter().filter(|r| r.status != RowStatus::Agree) {
        eprintln!(
            "{} m={}: {:?} (skipped: {:?})",
            row.graph, row.m, row.status, row.skipped
        );
    }
    Ok(if report.any_disagree() {
        1
    } else if report.any_skipped() {
        3
    } else {
        0
    })
}

fn run_omega(graph: &Path, m: u32, g: u32, mode: ModeArg, strategy: StrategyArg, b: &Budgets, pretty: bool) -> Outcome {
    let input = load_graph(graph)?;
    let mode = match (mode, &input) {
        (ModeArg::Undirected, _) => NeighborhoodMode::Undirected,
        (ModeArg::In, GraphInput::Digraph(_)) => NeighborhoodMode::In,
        (ModeArg::Out, GraphInput::Digraph(_)) => NeighborhoodMode::Out,
        (_, GraphInput::Graph(_)) => return Err(Failure::input("--mode in/out needs a digraph")),
    };
    if (g, m) == (1, 0) {
        // Below the stable range of the genus reduction; use the derivative.
        let value = match (&input, mode) {
            (GraphInput::Graph(s), _) => omega_one_zero_by_formula(s),
            (GraphInput::Digraph(d), NeighborhoodMode::Undirected) => {
                let edges: BTreeSet<(u32, u32)> = d.arcs().map(|(u, w)| (u.min(w), u.max(w))).collect();
                let s = SimpleGraph::new(d.vertices(), edges)?;
                omega_one_zero_by_formula(&s)
            }
            (GraphInput::Digraph(d), NeighborhoodMode::In | NeighborhoodMode::Out) => {
                let dir = if mode == NeighborhoodMode::In {
                    Direction::In
                } else {
                    Direction::Out
                };
                chi_report(d, dir, false, &b.engine(strategy.into()))?.omega_one_zero
            }
        };
        emit(
            &json!({
                "genus": 1,
                "m": 0,
                "mode": to_json(&mode),
                "method": "derivative-formula",
                "genus_reduced": false,
                "value": to_json(&chromoduli::verify::Exact(value)),
            }),
            pretty,
        );
        return Ok(0);
    }
    let report = omega_with(&input, g, m, mode, &b.engine(strategy.into()))?;
    let mut v = to_json(&report);
    v["method"] = json!(if report.genus_reduced {
        "genus-reduced-engine"
    } else {
        "engine"
    });
    emit(&v, pretty);
    Ok(0)
}

fn run_kapranov(path: &Path, strategy: StrategyArg, b: &Budgets, pretty: bool) -> Outcome {
    let bad = |e: serde_json::Error| Failure::input(format!("{}: {e}", path.display()));
    let doc: Value = serde_json::from_str(&read(path)?).map_err(bad)?;
    let (markings, constraints): (Option<MarkingSet>, Vec<Constraint>) = match doc {
        Value::Array(_) => (None, serde_json::from_value(doc).map_err(bad)?),
        Value::Object(mut o) => {
            let markings = o
                .remove("markings")
                .map(serde_json::from_value)
                .transpose()
                .map_err(bad)?;
            let list = o
                .remove("constraints")
                .ok_or_else(|| Failure::input(format!("{}: missing \"constraints\"", path.display())))?;
            (markings, serde_json::from_value(list).map_err(bad)?)
        }
        _ => {
            return Err(Failure::input(format!(
                "{}: expected an array or object",
                path.display()
            )))
        }
    };
    let p = markings.unwrap_or_else(|| MarkingSet::from_bits(constraints.iter().fold(0, |a, c| a | c.set.bits())));
    let (value, stats) = kapranov_degree_with(&constraints, p, &b.engine(strategy.into()))?;
    emit(
        &json!({
            "markings": to_json(&p),
            "value": to_json(&chromoduli::verify::Exact(value)),
            "stats": to_json(&stats),
        }),
        pretty,
    );
    Ok(0)
}

fn run_critical(graph: &Path, m: u32, seed: Option<u64>, weights: Option<&Path>, b: &Budgets, pretty: bool) -> Outcome {
    let g = load_simple(graph)?;
    let a = build_arrangement(&g, m as usize)?;
    let u = match weights {
        Some(p) => {
            let raw: Vec<f64> =
                serde_json::from_str(&read(p)?).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            WeightVector::new(raw)?
        }
        None => WeightVector::sample(a.len(), seed.unwrap_or(DEFAULT_SEED)),
    };
    let count = count_critical_points(&g, m as usize, &u, b.budget_enum)?;
    emit(&to_json(&count.reports), pretty);
    for f in &count.failures {
        eprintln!("{f}");
    }
    Ok(if count.failures.is_empty() { 0 } else { 1 })
}

fn run(cli: Cli) -> Outcome {
    let pretty = cli.pretty;
    match cli.command {
        Command::Verify {
            graph,
            m,
            seed,
            budgets,
        } => run_verify(&graph, &m, seed, &budgets, pretty),
        Command::Show { graph } => {
            emit(&to_json(&load_graph(&graph)?), pretty);
            Ok(0)
        }
        Command::Chromatic { graph } => {
            let chi = chromatic_polynomial(&load_simple(&graph)?);
            emit(
                &json!({ "coefficients": to_json(&chi), "polynomial": chi.to_string() }),
                pretty,
            );
            Ok(0)
        }
        Command::Omega {
            graph,
            m,
            g,
            mode,
            strategy,
            budgets,
        } => run_omega(&graph, m, g, mode, strategy, &budgets, pretty),
        Command::Kapranov {
            constraints,
            strategy,
            budgets,
        } => run_kapranov(&constraints, strategy, &budgets, pretty),
        Command::Chambers {
            graph,
            m,
            method,
            budgets,
        } => {
            let g = load_simple(&graph)?;
            let chambers = match method {
                ChamberMethod::Bijective => bounded_chambers_bijective(&g, m as usize, budgets.budget_enum)?,
                ChamberMethod::Lp => bounded_chambers_lp(&build_arrangement(&g, m as usize)?, budgets.budget_lp)?,
            };
            emit(&to_json(&chambers), pretty);
            Ok(0)
        }
        Command::CriticalPoints {
            graph,
            m,
            seed,
            weights,
            budgets,
        } => run_critical(&graph, m, seed, weights.as_deref(), &budgets, pretty),
        Command::Chi {
            graph,
            mode,
            cross_check,
            budgets,
        } => {
            let d = match load_graph(&graph)? {
                GraphInput::Digraph(d) => d,
                GraphInput::Graph(g) => g.to_symmetric_digraph(),
            };
            let opts = budgets.engine(Strategy::Divisors);
            let dirs: &[Direction] = match mode {
                ChiMode::In => &[Direction::In],
                ChiMode::Out => &[Direction::Out],
                ChiMode::Both => &[Direction::In, Direction::Out],
            };
            let reports = dirs
                .iter()
                .map(|&dir| chi_report(&d, dir, cross_check, &opts))
                .collect::<Result<Vec<_>, _>>()?;
            let disagree = reports.iter().any(|r| !r.routes_agree);
            emit(&to_json(&reports), pretty);
            Ok(if disagree { 1 } else { 0 })
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("CHROMODULI_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::input(format!("CHROMODULI_THREADS={raw:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::input(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match init_threads().and_then(|()| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
