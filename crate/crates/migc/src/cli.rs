//! The `migc` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use migc_core::scenarios::{BattleshipConfig, BenchConfig, Sampling, StopRule};
use migc_core::{run_coder, tree_validate, Coder, QuerySet, SearchBudget, SearchMode};

use crate::error::{Error, Result};
use crate::formats::{
    read_json, tree_to_dot, DistributionFile, LayoutsFile, QuerySetFile, ReportJson, TreeJson,
};
use crate::tables::{self, TableFormat};
use crate::{runners, service};

#[derive(Debug, Parser)]
#[command(
    name = "migc",
    version,
    about = "Maximum-information-gain decision trees"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a decision tree for one distribution and query pool.
    Build(BuildArgs),
    /// Random-distribution comparison of Huffman, MIGC and Shannon.
    BenchCoding(BenchCodingArgs),
    /// Two-gene interval detection against the exact optimum.
    BenchDna(BenchDnaArgs),
    /// Entropy-greedy battleship self-play.
    BenchBattleship(BenchBattleshipArgs),
    /// Start the HTTP session service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CoderArg {
    Migc,
    Gbsc,
    Huffman,
    Shannon,
    Bruteforce,
}

impl From<CoderArg> for Coder {
    fn from(c: CoderArg) -> Self {
        match c {
            CoderArg::Migc => Coder::Migc,
            CoderArg::Gbsc => Coder::Gbsc,
            CoderArg::Huffman => Coder::Huffman,
            CoderArg::Shannon => Coder::Shannon,
            CoderArg::Bruteforce => Coder::BruteForce,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TreeFormat {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TableArg {
    Csv,
    Json,
}

impl From<TableArg> for TableFormat {
    fn from(t: TableArg) -> Self {
        match t {
            TableArg::Csv => TableFormat::Csv,
            TableArg::Json => TableFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SearchArg {
    Auto,
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StopArg {
    Identify,
    Sink,
}

#[derive(Debug, Args)]
pub struct Common {
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Partition search mode for unconstrained pools.
    #[arg(long, value_enum, default_value = "auto")]
    pub search: SearchArg,
    /// Largest D^k explored by the exact partition search, and largest
    /// state count of the exact oracle.
    #[arg(long, default_value_t = 1 << 24)]
    pub state_limit: u64,
}

impl Common {
    fn budget(&self) -> SearchBudget {
        let mode = match self.search {
            SearchArg::Auto => SearchMode::Auto,
            SearchArg::Exact => SearchMode::Exact,
            SearchArg::Heuristic => SearchMode::Heuristic,
        };
        SearchBudget::new(self.state_limit.max(1), mode)
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Distribution file.
    #[arg(long)]
    pub dist: PathBuf,
    /// Query-set file. Without it every partition into at most D cells is
    /// admissible.
    #[arg(long)]
    pub queries: Option<PathBuf>,
    /// Arity for the unconstrained pool when no query file is given.
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long, value_enum, default_value = "migc")]
    pub coder: CoderArg,
    /// Tree output path, `-` for standard output.
    #[arg(long, default_value = "-")]
    pub out: String,
    #[arg(long, value_enum, default_value = "json")]
    pub format: TreeFormat,
    /// Also write a Graphviz rendering here.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Write the code report (JSON) here.
    #[arg(long)]
    pub report: Option<String>,
    /// Drop zero-probability symbols instead of rejecting them.
    #[arg(long)]
    pub allow_zero: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BenchCodingArgs {
    #[arg(long, default_value_t = 3)]
    pub d: u32,
    #[arg(long, default_value_t = 3)]
    pub n_min: usize,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BenchDnaArgs {
    #[arg(long, default_value_t = 6)]
    pub exons: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BenchBattleshipArgs {
    #[arg(long, default_value_t = 100)]
    pub games: usize,
    /// Number of sampled layouts.
    #[arg(long, default_value_t = 531_441)]
    pub layouts: usize,
    #[arg(long, value_enum, default_value = "identify")]
    pub stop: StopArg,
    #[arg(long, default_value_t = 10)]
    pub rows: usize,
    #[arg(long, default_value_t = 10)]
    pub cols: usize,
    /// Ship lengths of one player's fleet, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [5, 3])]
    pub fleet: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    pub players: usize,
    /// Enumerate every legal layout instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    /// Also write the sampled layouts as JSON.
    #[arg(long)]
    pub save_layouts: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: std::net::IpAddr,
    /// Idle session lifetime in seconds.
    #[arg(long, default_value_t = 3600)]
    pub ttl_secs: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Parses `args`, runs the command and returns the process exit status.
/// Failures print `error: code=NAME ...` on `err`; infeasible instances
/// exit 2, every other failure 1.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let first = e.to_string();
            let first = first
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            let _ = writeln!(err, "error: code=UsageError {first}");
            return 1;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: code={} {e}", e.code());
            if e.is_infeasible() {
                2
            } else {
                1
            }
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let seed = match &command {
        Command::Build(a) => a.common.seed,
        Command::BenchCoding(a) => a.common.seed,
        Command::BenchDna(a) => a.common.seed,
        Command::BenchBattleship(a) => a.common.seed,
        Command::Serve(a) => a.seed,
    };
    writeln!(err, "seed={seed}").map_err(|e| Error::io("stderr", e))?;
    match command {
        Command::Build(a) => build(a, out, err),
        Command::BenchCoding(a) => bench_coding(a, err),
        Command::BenchDna(a) => bench_dna(a, err),
        Command::BenchBattleship(a) => bench_battleship(a, err),
        Command::Serve(a) => serve(a, err),
    }
}

fn write_to(target: &str, out: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    if target == "-" {
        out.write_all(bytes).map_err(|e| Error::io("stdout", e))
    } else {
        std::fs::write(target, bytes).map_err(|e| Error::io(target, e))
    }
}

fn note(err: &mut dyn Write, line: std::fmt::Arguments) -> Result<()> {
    writeln!(err, "{line}").map_err(|e| Error::io("stderr", e))
}

fn build(a: BuildArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let dist_file: DistributionFile = read_json(&a.dist)?;
    let loaded = dist_file.load(a.allow_zero)?;
    let qset_file = match &a.queries {
        Some(path) => read_json(path)?,
        None => QuerySetFile::unconstrained(a.d),
    };
    let qset = qset_file.load(&loaded)?;
    let dist = &loaded.dist;
    let coder = Coder::from(a.coder);
    let (report, tree) = run_coder(coder, dist, &qset, &a.common.budget())?;

    // baselines ignore the pool, so they are checked against the free one
    let pool = if coder.respects_constraints() {
        qset.clone()
    } else {
        QuerySet::unconstrained(qset.arity(), dist.len())?
    };
    tree_validate(&tree, dist, &pool).map_err(migc_core::Error::InvalidTree)?;

    let body = match a.format {
        TreeFormat::Json => {
            let mut s = serde_json::to_string_pretty(&TreeJson::from_tree(&tree))?;
            s.push('\n');
            s
        }
        TreeFormat::Dot => tree_to_dot(&tree, dist, &pool),
    };
    write_to(&a.out, out, body.as_bytes())?;
    if let Some(path) = &a.dot {
        std::fs::write(path, tree_to_dot(&tree, dist, &pool))
            .map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    if let Some(target) = &a.report {
        let mut s = serde_json::to_string_pretty(&ReportJson::new(coder.name(), &report, dist))?;
        s.push('\n');
        write_to(target, out, s.as_bytes())?;
    }
    note(
        err,
        format_args!(
            "coder={} expected_length={} entropy={}",
            coder.name(),
            report.expected_length,
            report.entropy_base_d
        ),
    )
}

fn bench_coding(a: BenchCodingArgs, err: &mut dyn Write) -> Result<()> {
    let config = BenchConfig {
        n_min: a.n_min,
        n_max: a.n_max,
        samples_per_n: a.samples,
        arity: a.d,
        seed: a.common.seed,
        budget: a.common.budget(),
    };
    let report = runners::fig5(&config)?;
    let format = a.format.into();
    let fig5 =
        tables::write_table_file(&a.out_dir, "fig5", &tables::fig5_records(&report), format)?;
    let gaps = tables::write_table_file(&a.out_dir, "gaps", &tables::gap_rows(&report), format)?;
    for row in &report.rows {
        note(
            err,
            format_args!(
                "n={} huffman={:.4} migc={:.4} shannon={:.4}",
                row.n, row.mean_huffman, row.mean_migc, row.mean_shannon
            ),
        )?;
    }
    note(
        err,
        format_args!("wrote {} {}", fig5.display(), gaps.display()),
    )
}

fn bench_dna(a: BenchDnaArgs, err: &mut dyn Write) -> Result<()> {
    let (rows, summary) = runners::dna(a.exons, a.samples, a.common.seed, a.common.budget())?;
    let path = tables::write_table_file(
        &a.out_dir,
        "dna",
        &tables::dna_records(&rows),
        a.format.into(),
    )?;
    note(
        err,
        format_args!(
            "samples={} mean_bruteforce={:.4} mean_migc={:.4} mean_gbsc={:.4} gap_p95={:.4} gap_max={:.4}",
            summary.samples,
            summary.mean_bruteforce,
            summary.mean_migc,
            summary.mean_gbsc,
            summary.gap_p95,
            summary.gap_max
        ),
    )?;
    note(err, format_args!("wrote {}", path.display()))
}

fn bench_battleship(a: BenchBattleshipArgs, err: &mut dyn Write) -> Result<()> {
    let config = BattleshipConfig {
        rows: a.rows,
        cols: a.cols,
        fleets: vec![a.fleet.clone(); a.players],
        layout_count: a.layouts,
        stop_rule: match a.stop {
            StopArg::Identify => StopRule::Identify,
            StopArg::Sink => StopRule::Sink,
        },
        seed: a.common.seed,
        sampling: if a.exhaustive {
            Sampling::Exhaustive
        } else {
            Sampling::Random
        },
    };
    if let Some(path) = &a.save_layouts {
        let set = migc_core::scenarios::battleship_layouts(&config)?;
        save_json(path, &LayoutsFile::from_set(&set))?;
    }
    let bench = runners::battleship(&config, a.games)?;
    let format = a.format.into();
    let tries = tables::write_table_file(
        &a.out_dir,
        "battleship",
        &tables::tries_rows(&bench),
        format,
    )?;
    let traces =
        tables::write_table_file(&a.out_dir, "traces", &tables::trace_rows(&bench), format)?;
    note(
        err,
        format_args!(
            "layouts={} distinct={} games={} mean_tries={:.3}",
            bench.layouts,
            bench.distinct_layouts,
            bench.games.len(),
            bench.mean_tries()
        ),
    )?;
    note(
        err,
        format_args!("wrote {} {}", tries.display(), traces.display()),
    )
}

fn save_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer(&mut w, value)?;
    w.flush()
        .map_err(|e| Error::io(path.display().to_string(), e))
}

fn serve(a: ServeArgs, err: &mut dyn Write) -> Result<()> {
    let addr = SocketAddr::new(a.host, a.port);
    note(err, format_args!("listening on http://{addr}"))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Error::io("runtime", e))?;
    runtime
        .block_on(service::serve(addr, Duration::from_secs(a.ttl_secs)))
        .map_err(|e| Error::io(addr.to_string(), e))
}

/// Entry point used by the binary.
pub fn main_exit() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
