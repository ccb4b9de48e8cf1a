use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use topocent::electrical::een_netlist;
use topocent::experiments::{export_dot, gen_core_gateway, pert_preset, sensitivity_report, Pert, TopologySpec};
use topocent::forests::{forest_census_from, enumerate_bipartitions, lplus_diag_via_forests};
use topocent::spectral::SpectralReport;
use topocent::verify::{self, Suite, VerifyConfig};
use topocent::walks::{
    approx_hitting_dense, estimate_hitting_mc_with, hitting_times_exact, DegreeConvention, DenseApprox, McOptions,
    WalkEstimate,
};
use topocent::zoo::centrality_report;
use topocent::{build_spectral, parse_edge_list, Graph};

#[derive(Parser)]
#[command(name = "topocent", version, about = "Topological centrality and Kirchhoff robustness of networks")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Emit JSON instead of text or CSV.
    #[arg(long, global = true)]
    json: bool,
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// L⁺ diagonal, C* per node, Kirchhoff index and Laplacian spectrum.
    Analyze {
        input: PathBuf,
        /// Per-node CSV.
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Degree, GC, SC, GB, RB and C*, raw and max-normalized (CSV by default).
    ///
    /// Weighted graphs use 1/w as geodesic edge length.
    Compare { input: PathBuf },
    /// Run the self-checking suites; exit 1 if any residual exceeds tolerance.
    Verify(VerifyArgs),
    /// Exact and Monte Carlo hitting time between two nodes.
    Walk(WalkArgs),
    /// Equivalent electrical network.
    Een {
        #[command(subcommand)]
        action: EenAction,
    },
    /// Generate a core/gateway/subnet topology.
    Gen {
        #[arg(long, value_enum, default_value_t = Preset::Paper)]
        preset: Preset,
    },
    /// Apply a named degree-preserving double edge swap.
    Perturb {
        input: PathBuf,
        #[arg(long, value_enum)]
        preset: PertPreset,
    },
    /// Relative change of graph descriptors between two topologies.
    Sensitivity { before: PathBuf, after: PathBuf },
    /// Graphviz source coloured by a per-node index.
    ExportDot {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Metric::Cstar)]
        metric: Metric,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run (spectral, detour, commute, circuit, forests, trees,
    /// montecarlo, extremal, zoo, perturbation); all suites when omitted.
    suite: Option<String>,
    /// Same as the positional suite.
    #[arg(long)]
    only: Option<String>,
    /// Override every residual tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Cap on random instance size.
    #[arg(long = "n")]
    max_n: Option<usize>,
    /// Monte Carlo runs.
    #[arg(long, default_value_t = 100_000)]
    runs: u64,
    /// For `forests`: print the census of this graph instead.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct WalkArgs {
    input: PathBuf,
    /// Start node (label or index).
    #[arg(long)]
    from: String,
    /// Target node (label or index).
    #[arg(long)]
    to: String,
    #[arg(long, default_value_t = 100_000)]
    runs: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    workers: Option<usize>,
    /// Degree used by the dense-graph approximation.
    #[arg(long, value_enum, default_value_t = Convention::SourceDegree)]
    convention: Convention,
}

#[derive(Subcommand)]
enum EenAction {
    /// One line per edge: `u v R=<1/w>`.
    Export { input: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Paper,
}

#[derive(Clone, Copy, ValueEnum)]
enum PertPreset {
    Pert1,
    Pert2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    SourceDegree,
    TargetDegree,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Cstar,
    Degree,
    Gc,
    Sc,
    Gb,
    Rb,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<String, Failure>;

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn resolve(g: &Graph, node: &str) -> Result<usize, Failure> {
    g.node_by_label(node)
        .or_else(|e| node.parse::<usize>().ok().filter(|&i| i < g.node_count()).ok_or(e))
        .map_err(Failure::from)
}

fn to_json<T: Serialize>(value: &T) -> CliResult {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn analyze(input: &Path, json: bool, csv: bool) -> CliResult {
    let g = read_graph(input)?;
    let report = SpectralReport::new(&g, &build_spectral(&g)?);
    if json {
        return to_json(&report);
    }
    if csv {
        return Ok(report.to_csv());
    }
    let mut out = format!("{:<10} {:>14} {:>14}\n", "node", "lplus_diag", "cstar");
    for n in &report.nodes {
        out += &format!("{:<10} {:>14.6} {:>14.6}\n", n.label, n.lplus_diag, n.cstar);
    }
    out += &format!("kirchhoff {:.4}\nkstar {:.4}\n", report.graph.kirchhoff, report.graph.kstar);
    Ok(out)
}

fn compare(input: &Path, json: bool) -> CliResult {
    let g = read_graph(input)?;
    let report = centrality_report(&g)?;
    if json {
        to_json(&report)
    } else {
        Ok(report.to_csv())
    }
}

#[derive(Serialize)]
struct ForestTable {
    eps_n1: u64,
    eps_n2: u64,
    nodes: Vec<ForestRow>,
    max_residual: f64,
}

#[derive(Serialize)]
struct ForestRow {
    label: String,
    eps_rooted: u64,
    lplus_forest: f64,
    lplus_spectral: f64,
}

fn forest_table(input: &Path, json: bool) -> CliResult {
    let g = read_graph(input)?;
    let census = forest_census_from(&g, &enumerate_bipartitions(&g)?)?;
    let forest = lplus_diag_via_forests(&g)?;
    let spectral = build_spectral(&g)?.lplus_diag();
    let nodes: Vec<ForestRow> = (0..g.node_count())
        .map(|i| ForestRow {
            label: g.label(i),
            eps_rooted: census.eps_rooted[i],
            lplus_forest: forest[i],
            lplus_spectral: spectral[i],
        })
        .collect();
    let max_residual = nodes.iter().map(|r| (r.lplus_forest - r.lplus_spectral).abs()).fold(0.0, f64::max);
    let table = ForestTable { eps_n1: census.eps_n1, eps_n2: census.eps_n2, nodes, max_residual };
    if json {
        return to_json(&table);
    }
    let mut out = format!("eps_n1 {}\neps_n2 {}\n", table.eps_n1, table.eps_n2);
    out += &format!("{:<10} {:>10} {:>16} {:>16} {:>10}\n", "node", "eps_rooted", "lplus_forest", "lplus_spectral", "residual");
    for r in &table.nodes {
        out += &format!(
            "{:<10} {:>10} {:>16.12} {:>16.12} {:>10.2e}\n",
            r.label,
            r.eps_rooted,
            r.lplus_forest,
            r.lplus_spectral,
            (r.lplus_forest - r.lplus_spectral).abs()
        );
    }
    out += &format!("max_residual {:.3e}\n", table.max_residual);
    Ok(out)
}

fn run_verify(args: &VerifyArgs, seed: u64, json: bool) -> CliResult {
    let name = match (&args.suite, &args.only) {
        (Some(a), Some(b)) if a != b => return Err(Failure::Usage(format!("conflicting suites `{a}` and `{b}`"))),
        (a, b) => a.as_ref().or(b.as_ref()),
    };
    let only = name.map(|s| s.parse::<Suite>()).transpose()?;
    if let Some(input) = &args.input {
        if only != Some(Suite::Forests) {
            return Err(Failure::Usage("--input is only accepted by the forests suite".into()));
        }
        return forest_table(input, json);
    }
    let cfg = VerifyConfig { seed, tolerance: args.tolerance, max_n: args.max_n, runs: args.runs, only };
    let results = verify::run(&cfg);
    let out = if json {
        to_json(&results)?
    } else {
        let mut out = String::new();
        for r in &results {
            out += &r.line();
            out.push('\n');
        }
        for r in results.iter().filter(|r| !r.passed) {
            if let Some(inst) = &r.failing_instance {
                out += &format!("\n# failing instance for {}.{}\n{inst}", r.suite, r.name);
            }
        }
        out
    };
    if results.iter().all(|r| r.passed) {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}

#[derive(Serialize)]
struct WalkReport {
    from: String,
    to: String,
    exact: f64,
    estimate: WalkEstimate,
    dense_approx: DenseApprox,
}

fn walk(args: &WalkArgs, seed: u64, json: bool) -> CliResult {
    let g = read_graph(&args.input)?;
    let (i, j) = (resolve(&g, &args.from)?, resolve(&g, &args.to)?);
    let exact = hitting_times_exact(&g)?.hitting[(i, j)];
    let opts = McOptions { workers: args.workers, ..McOptions::default() };
    let estimate = estimate_hitting_mc_with(&g, i, j, args.runs, seed, opts)?;
    let convention = match args.convention {
        Convention::SourceDegree => DegreeConvention::SourceDegree,
        Convention::TargetDegree => DegreeConvention::TargetDegree,
    };
    let dense_approx = approx_hitting_dense(&g, i, j, convention)?;
    let report = WalkReport { from: g.label(i), to: g.label(j), exact, estimate, dense_approx };
    if json {
        return to_json(&report);
    }
    Ok(format!(
        "hitting {} -> {}\nexact     {:.6}\nestimate  {:.6} ± {:.6} (runs {}, seed {})\ndense     {:.6} (heuristic)\n",
        report.from,
        report.to,
        exact,
        estimate.mean,
        estimate.std_error,
        estimate.runs,
        estimate.seed,
        dense_approx.hitting
    ))
}

fn export(input: &Path, metric: Metric) -> CliResult {
    let g = read_graph(input)?;
    let r = centrality_report(&g)?;
    let values = match metric {
        Metric::Cstar => &r.raw.cstar,
        Metric::Degree => &r.raw.degree,
        Metric::Gc => &r.raw.gc,
        Metric::Sc => &r.raw.sc,
        Metric::Gb => &r.raw.gb,
        Metric::Rb => &r.raw.rb,
    };
    Ok(export_dot(&g, values)?)
}

fn execute(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Analyze { input, csv } => analyze(input, cli.json, *csv),
        Command::Compare { input } => compare(input, cli.json),
        Command::Verify(args) => run_verify(args, cli.seed, cli.json),
        Command::Walk(args) => walk(args, cli.seed, cli.json),
        Command::Een { action: EenAction::Export { input } } => Ok(een_netlist(&read_graph(input)?)),
        Command::Gen { preset: Preset::Paper } => Ok(gen_core_gateway(&TopologySpec::reference(cli.seed))?.to_edge_list()),
        Command::Perturb { input, preset } => {
            let which = match preset {
                PertPreset::Pert1 => Pert::One,
                PertPreset::Pert2 => Pert::Two,
            };
            Ok(pert_preset(&read_graph(input)?, which)?.to_edge_list())
        }
        Command::Sensitivity { before, after } => {
            let report = sensitivity_report(&read_graph(before)?, &read_graph(after)?)?;
            if cli.json {
                to_json(&report)
            } else {
                Ok(report.to_text())
            }
        }
        Command::ExportDot { input, metric } => export(input, *metric),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = execute(&cli).and_then(|text| emit(&cli, &text));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(text)) => {
            if let Err(Failure::Usage(msg) | Failure::Verification(msg)) = emit(&cli, &text) {
                eprintln!("error: {msg}");
                return ExitCode::from(2);
            }
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
