use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kpp_core::baseline::{cut_cover, matching_then_join};
use kpp_core::cover::{max_triangle_free_cover, CoverTier};
use kpp_core::generate::{random_graph, Family};
use kpp_core::oracle::{optimal_kppe, LIMITS};
use kpp_core::pipeline::ratio_bound;
use kpp_core::{
    parse_edge_list, solve, verify_partition, CoverMode, Error, Graph, PathPartition, SolveConfig,
    SolveReport, Surd, TierChoice,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_BAD_K: u8 = 3;
const EXIT_LIMIT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "kpp",
    version,
    about = "Partition graphs into paths of bounded order"
)]
struct Cli {
    /// Print solver traces to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance given as an edge list ("n m" header, then "u v" lines).
    Solve {
        #[arg(long)]
        k: usize,
        /// Edge-list file, or "-" for stdin.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Tier::Auto)]
        tier: Tier,
        #[arg(long, value_enum, default_value_t = SolveFormat::Json)]
        output: SolveFormat,
    },
    /// Run seeded trials and emit one CSV row per trial plus aggregates.
    Bench {
        #[arg(long)]
        k: usize,
        /// gnp:<p>, cycles or planted:<k>.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Compare against the exact optimum.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = Algorithm::Approx)]
        alg: Algorithm,
        #[arg(long, value_enum, default_value_t = Tier::Auto)]
        tier: Tier,
    },
    /// Print the proven kPP approximation ratios for k = 9..18.
    Table {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        output: Format,
    },
    /// Check that a partition file is a valid k-path partition of a graph.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        /// `solve` JSON output, or one whitespace-separated path per line.
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Tier {
    Exact,
    Heuristic,
    Auto,
}

impl From<Tier> for TierChoice {
    fn from(t: Tier) -> Self {
        match t {
            Tier::Exact => TierChoice::Exact,
            Tier::Heuristic => TierChoice::Heuristic,
            Tier::Auto => TierChoice::Auto,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    /// The certified approximation (uncertified cover-and-cut for k < 9).
    Approx,
    /// Triangle-free cover cut into k-paths; uncertified baseline.
    CoverCut,
    /// Maximum matching then greedy joins; uncertified baseline.
    MatchingJoin,
}

/// Maps an error to the exit-code contract: 2 parse, 3 bad k, 4 oracle limit.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Format { .. } | Error::VertexOutOfRange { .. } | Error::SelfLoop(_) => {
                    EXIT_PARSE
                }
                Error::InvalidK(_) => EXIT_BAD_K,
                Error::LimitExceeded { .. } => EXIT_LIMIT,
                _ => EXIT_FAILURE,
            };
        }
        if cause.is::<io::Error>()
            || cause.is::<serde_json::Error>()
            || cause.is::<std::num::ParseIntError>()
        {
            return EXIT_PARSE;
        }
    }
    EXIT_FAILURE
}

fn read_input(path: &Path) -> Result<String> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")?;
    } else {
        text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    Ok(text)
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = read_input(path)?;
    parse_edge_list(&text).with_context(|| format!("parsing graph {}", path.display()))
}

#[derive(Serialize)]
struct Alpha {
    exact: String,
    value: f64,
}

impl From<Surd> for Alpha {
    fn from(s: Surd) -> Self {
        Alpha {
            exact: s.to_string(),
            value: s.to_f64(),
        }
    }
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    k: usize,
    n: usize,
    m: usize,
    paths: &'a [Vec<usize>],
    num_paths: usize,
    num_edges: usize,
    mode: CoverMode,
    certified_alpha: Option<Alpha>,
    ratio_bound_kpp: Option<Alpha>,
    recursion_depth: usize,
    operations: usize,
}

fn cmd_solve(k: usize, input: &Path, tier: Tier, output: SolveFormat, verbose: bool) -> Result<u8> {
    let g = read_graph(input)?;
    let cfg = SolveConfig::with_tier(tier.into());
    let rep = solve(&g, k, &cfg)?;
    if verbose {
        eprintln!("counters: {}", serde_json::to_string(&rep.counters_trace)?);
        eprintln!("operations: {}", serde_json::to_string(&rep.operations)?);
        eprintln!("guarantees: {}", serde_json::to_string(&rep.guarantees)?);
    }
    let mut out = io::stdout().lock();
    match output {
        SolveFormat::Json => {
            let doc = SolveOutput {
                k,
                n: g.n(),
                m: g.m(),
                paths: &rep.partition.paths,
                num_paths: rep.paths,
                num_edges: rep.edges,
                mode: rep.mode,
                certified_alpha: rep.certified_alpha.map(Alpha::from),
                ratio_bound_kpp: rep.ratio_bound.map(Alpha::from),
                recursion_depth: rep.recursion_depth,
                operations: rep.operations.len(),
            };
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
        SolveFormat::Text => write_text_report(&mut out, &g, &rep)?,
    }
    Ok(0)
}

fn write_text_report(out: &mut impl Write, g: &Graph, rep: &SolveReport) -> Result<()> {
    let show =
        |s: Option<Surd>| s.map_or("none".to_string(), |s| format!("{s} ({:.6})", s.to_f64()));
    writeln!(out, "k = {}, n = {}, m = {}", rep.k, g.n(), g.m())?;
    writeln!(
        out,
        "paths = {}, edges = {}, cover = {}",
        rep.paths, rep.edges, rep.mode
    )?;
    writeln!(out, "certified alpha = {}", show(rep.certified_alpha))?;
    writeln!(out, "kPP ratio bound = {}", show(rep.ratio_bound))?;
    for p in &rep.partition.paths {
        let line: Vec<String> = p.iter().map(usize::to_string).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

fn run_algorithm(g: &Graph, k: usize, alg: Algorithm, cfg: &SolveConfig) -> Result<PathPartition> {
    Ok(match alg {
        Algorithm::Approx => solve(g, k, cfg)?.partition,
        Algorithm::CoverCut => {
            if k == 0 {
                return Err(Error::InvalidK(k).into());
            }
            let tier = match cfg.tier {
                TierChoice::Exact => CoverTier::Exact,
                TierChoice::Heuristic => CoverTier::Heuristic,
                TierChoice::Auto if g.n() <= cfg.exact_threshold => CoverTier::Exact,
                TierChoice::Auto => CoverTier::Heuristic,
            };
            cut_cover(&max_triangle_free_cover(g, tier, cfg.exact_threshold)?, k)
        }
        Algorithm::MatchingJoin => {
            if k == 0 {
                return Err(Error::InvalidK(k).into());
            }
            matching_then_join(g, k)
        }
    })
}

#[derive(Serialize)]
struct BenchRow {
    seed: String,
    n: String,
    m: String,
    k: String,
    alg_paths: String,
    alg_edges: String,
    oracle_paths: String,
    oracle_edges: String,
    ratio_paths: String,
    ratio_edges: String,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    k: usize,
    family: &str,
    n: usize,
    trials: usize,
    seed: u64,
    oracle: bool,
    alg: Algorithm,
    tier: Tier,
) -> Result<u8> {
    if k == 0 {
        return Err(Error::InvalidK(k).into());
    }
    let family: Family = family.parse()?;
    if oracle && n > LIMITS.partition_n {
        return Err(Error::LimitExceeded {
            what: "vertex count for the optimal partition oracle",
            actual: n,
            limit: LIMITS.partition_n,
        }
        .into());
    }
    let cfg = SolveConfig::with_tier(tier.into());
    let mut writer = csv::Writer::from_writer(io::stdout().lock());
    let mut ratios: Vec<(f64, f64)> = Vec::new();
    let blank = String::new;
    for t in 0..trials {
        let trial_seed = seed.wrapping_add(t as u64);
        let g = random_graph(n, family, trial_seed)?;
        let pp = run_algorithm(&g, k, alg, &cfg)?;
        let violations = verify_partition(&pp, &g, k);
        if let Some(v) = violations.first() {
            return Err(Error::Invariant(format!("trial {t}: infeasible output: {v}")).into());
        }
        let mut row = BenchRow {
            seed: trial_seed.to_string(),
            n: g.n().to_string(),
            m: g.m().to_string(),
            k: k.to_string(),
            alg_paths: pp.num_paths().to_string(),
            alg_edges: pp.num_edges().to_string(),
            oracle_paths: blank(),
            oracle_edges: blank(),
            ratio_paths: blank(),
            ratio_edges: blank(),
        };
        if oracle {
            let opt = optimal_kppe(&g, k)?;
            let rp = ratio(pp.num_paths(), opt.num_paths());
            let re = ratio(pp.num_edges(), opt.num_edges());
            ratios.push((rp, re));
            row.oracle_paths = opt.num_paths().to_string();
            row.oracle_edges = opt.num_edges().to_string();
            row.ratio_paths = format!("{rp:.6}");
            row.ratio_edges = format!("{re:.6}");
        }
        writer.serialize(row)?;
    }
    if trials == 0 {
        writer.write_record([
            "seed",
            "n",
            "m",
            "k",
            "alg_paths",
            "alg_edges",
            "oracle_paths",
            "oracle_edges",
            "ratio_paths",
            "ratio_edges",
        ])?;
    } else if !ratios.is_empty() {
        let count = ratios.len() as f64;
        let max_p = ratios.iter().map(|r| r.0).fold(f64::MIN, f64::max);
        let min_e = ratios.iter().map(|r| r.1).fold(f64::MAX, f64::min);
        let mean_p = ratios.iter().map(|r| r.0).sum::<f64>() / count;
        let mean_e = ratios.iter().map(|r| r.1).sum::<f64>() / count;
        for (label, rp, re) in [("worst", max_p, min_e), ("mean", mean_p, mean_e)] {
            writer.serialize(BenchRow {
                seed: label.into(),
                n: n.to_string(),
                m: blank(),
                k: k.to_string(),
                alg_paths: blank(),
                alg_edges: blank(),
                oracle_paths: blank(),
                oracle_edges: blank(),
                ratio_paths: format!("{rp:.6}"),
                ratio_edges: format!("{re:.6}"),
            })?;
        }
    }
    writer.flush()?;
    Ok(0)
}

#[derive(Serialize)]
struct TableRow {
    k: usize,
    ratio: String,
    exact: String,
    value: f64,
}

fn cmd_table(output: Format) -> Result<u8> {
    let rows: Vec<TableRow> = (9..=18)
        .map(|k| {
            let e = ratio_bound(k)?;
            Ok(TableRow {
                k,
                ratio: e.rounded,
                exact: e.exact.to_string(),
                value: e.value,
            })
        })
        .collect::<Result<_>>()?;
    let mut out = io::stdout().lock();
    match output {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in &rows {
                w.write_record([r.k.to_string(), r.ratio.clone(), r.exact.clone()])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "{:>3}  {:>6}  exact", "k", "ratio")?;
            for r in &rows {
                writeln!(out, "{:>3}  {:>6}  {}", r.k, r.ratio, r.exact)?;
            }
        }
    }
    Ok(0)
}

#[derive(serde::Deserialize)]
struct PathsDoc {
    paths: Vec<Vec<usize>>,
}

fn parse_partition(text: &str) -> Result<PathPartition> {
    if text.trim_start().starts_with('{') {
        let doc: PathsDoc = serde_json::from_str(text)?;
        return Ok(PathPartition::new(doc.paths));
    }
    let mut paths = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        paths.push(
            line.split_whitespace()
                .map(str::parse)
                .collect::<Result<Vec<usize>, _>>()?,
        );
    }
    Ok(PathPartition::new(paths))
}

fn cmd_verify(graph: &Path, partition: &Path, k: usize) -> Result<u8> {
    if k == 0 {
        return Err(Error::InvalidK(k).into());
    }
    let g = read_graph(graph)?;
    let text = read_input(partition)?;
    let pp = parse_partition(&text)
        .with_context(|| format!("parsing partition {}", partition.display()))?;
    let violations = verify_partition(&pp, &g, k);
    let mut out = io::stdout().lock();
    if violations.is_empty() {
        writeln!(
            out,
            "ok: {} paths, {} edges",
            pp.num_paths(),
            pp.num_edges()
        )?;
        return Ok(0);
    }
    for v in &violations {
        writeln!(out, "{v}")?;
    }
    Ok(EXIT_FAILURE)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            k,
            input,
            tier,
            output,
        } => cmd_solve(k, &input, tier, output, cli.verbose),
        Command::Bench {
            k,
            family,
            n,
            trials,
            seed,
            oracle,
            alg,
            tier,
        } => cmd_bench(k, &family, n, trials, seed, oracle, alg, tier),
        Command::Table { output } => cmd_table(output),
        Command::Verify {
            graph,
            partition,
            k,
        } => cmd_verify(&graph, &partition, k),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
