//! Command-line front end: `generate`, `learn`, `eval`, `bench`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bench::{bench_csv, benchmark_graph, run_bench, BenchConfig, GraphType};
use crate::data_model::io::{format_dataset, format_graph, parse_dataset, write_atomic};
use crate::data_model::{read_graph, DataFormat};
use crate::error::{Error, Result};
use crate::evaluation::compare_graphs;
use crate::scoring::ScoreConfig;
use crate::search::{learn_structure, Mode};
use crate::synthesis::{
    format_model, gibbs_sample, sample_potentials_with, GibbsConfig, PotentialOptions, PotentialScheme,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "plrhc", version, about = "Structure learning for binary pairwise Markov networks")]
struct Cli {
    /// Worker threads (default: all available cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a benchmark graph, its potentials and a Gibbs dataset.
    Generate(GenerateArgs),
    /// Learn a graph from a binary dataset.
    Learn(LearnArgs),
    /// Compare an estimated graph with the true one.
    Eval(EvalArgs),
    /// Run a replicated benchmark sweep and write one CSV row per run.
    Bench(BenchArgs),
}

#[derive(Debug, Args, Serialize)]
struct ScoreArgs {
    /// Extra penalty weight on ln(d - 1).
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 1e-8)]
    newton_tol: f64,
    #[arg(long, default_value_t = 50)]
    newton_max_iter: usize,
    /// Coefficient magnitude cap.
    #[arg(long, default_value_t = 15.0)]
    beta_cap: f64,
}

impl ScoreArgs {
    fn config(&self) -> Result<ScoreConfig> {
        let cfg = ScoreConfig {
            gamma: self.gamma,
            newton_tol: self.newton_tol,
            newton_max_iter: self.newton_max_iter,
            beta_cap: self.beta_cap,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args, Serialize)]
struct PotentialArgs {
    /// `tables`: uniform factor tables per edge; `log-linear`: uniform interaction terms.
    #[arg(long, default_value = "tables", value_parser = parse_scheme)]
    potentials: PotentialScheme,
    /// Offset added to every node potential.
    #[arg(long, default_value_t = 0.0)]
    node_theta: f64,
    /// Draw log-linear interaction terms from Uniform(-1, 1).
    #[arg(long)]
    signed: bool,
}

impl PotentialArgs {
    fn options(&self) -> Result<PotentialOptions> {
        if self.signed && self.potentials != PotentialScheme::LogLinear {
            return Err(Error::InvalidConfig("--signed requires --potentials log-linear".into()));
        }
        Ok(PotentialOptions { scheme: self.potentials, node_theta: self.node_theta, signed: self.signed })
    }
}

#[derive(Debug, Args, Serialize)]
struct GenerateArgs {
    #[arg(long = "type", value_parser = parse_graph_type)]
    #[serde(rename = "type", serialize_with = "display")]
    graph_type: GraphType,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    burn_in: usize,
    #[arg(long, default_value_t = 100)]
    thinning: usize,
    #[arg(long)]
    out_data: PathBuf,
    #[arg(long)]
    out_graph: Option<PathBuf>,
    #[arg(long)]
    out_model: Option<PathBuf>,
    /// Data file format (default: from the extension, space-separated otherwise).
    #[arg(long)]
    format: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    potentials: PotentialArgs,
    #[arg(long, default_value_t = 7)]
    hub_leaves: usize,
}

#[derive(Debug, Args, Serialize)]
struct LearnArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    format: Option<String>,
    #[arg(long, default_value = "plrhc", value_parser = parse_mode)]
    #[serde(serialize_with = "display")]
    mode: Mode,
    #[command(flatten)]
    #[serde(flatten)]
    score: ScoreArgs,
    #[arg(long)]
    out: PathBuf,
    /// Write learning statistics as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Write the screening deltas as TSV (screening modes only).
    #[arg(long)]
    dump_plr: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct EvalArgs {
    #[arg(long)]
    truth: PathBuf,
    #[arg(long)]
    estimate: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct BenchArgs {
    #[arg(long = "type", value_parser = parse_graph_type)]
    #[serde(rename = "type", serialize_with = "display")]
    graph_type: GraphType,
    #[arg(long)]
    d: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    replicates: usize,
    #[arg(long, value_delimiter = ',', default_value = "plrhc,hc", value_parser = parse_mode)]
    #[serde(serialize_with = "display_list")]
    mode: Vec<Mode>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    burn_in: usize,
    #[arg(long, default_value_t = 100)]
    thinning: usize,
    #[arg(long, default_value_t = 7)]
    hub_leaves: usize,
    #[command(flatten)]
    #[serde(flatten)]
    potentials: PotentialArgs,
    #[command(flatten)]
    #[serde(flatten)]
    score: ScoreArgs,
    #[arg(long)]
    out: PathBuf,
}

fn parse_graph_type(s: &str) -> std::result::Result<GraphType, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_scheme(s: &str) -> std::result::Result<PotentialScheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn display_list<T: std::fmt::Display, S: serde::Serializer>(v: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Provenance record written next to every output as `<output>.manifest.json`.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub flags: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    /// SHA-256 of each input file, keyed by path.
    pub input_digests: BTreeMap<String, String>,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
}

fn unix_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

fn digest(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}

struct Run {
    subcommand: &'static str,
    flags: serde_json::Value,
    seed: Option<u64>,
    inputs: Vec<PathBuf>,
    started: u128,
}

impl Run {
    fn new<A: Serialize>(subcommand: &'static str, args: &A, seed: Option<u64>, inputs: &[&Path]) -> Result<Self> {
        Ok(Self {
            subcommand,
            flags: serde_json::to_value(args)?,
            seed,
            inputs: inputs.iter().map(|p| p.to_path_buf()).collect(),
            started: unix_ms(),
        })
    }

    /// Writes `bytes` to `path` and its manifest, both atomically.
    fn emit(&self, path: &Path, bytes: &[u8]) -> Result<()> {
        write_atomic(path, bytes)?;
        let input_digests =
            self.inputs.iter().map(|p| Ok((p.display().to_string(), digest(p)?))).collect::<Result<_>>()?;
        let manifest = RunManifest {
            subcommand: self.subcommand.to_string(),
            flags: self.flags.clone(),
            seed: self.seed,
            version: VERSION.to_string(),
            input_digests,
            started_unix_ms: self.started,
            finished_unix_ms: unix_ms(),
        };
        let mut json = serde_json::to_vec_pretty(&manifest)?;
        json.push(b'\n');
        write_atomic(&manifest_path(path), &json)
    }
}

fn data_format(explicit: Option<&str>, path: &Path) -> Result<DataFormat> {
    match explicit {
        Some(s) => s.parse(),
        None if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => Ok(DataFormat::Csv),
        None => Ok(DataFormat::Space),
    }
}

fn generate(args: &GenerateArgs) -> Result<()> {
    let run = Run::new("generate", args, Some(args.seed), &[])?;
    let graph = benchmark_graph(args.graph_type, args.d, args.hub_leaves)?;
    let model = sample_potentials_with(&graph, args.seed, &args.potentials.options()?);
    let cfg = GibbsConfig { burn_in: args.burn_in, thinning: args.thinning, seed: args.seed, n_samples: args.n };
    log::info!("sampling {} rows over {} variables", args.n, args.d);
    let data = gibbs_sample(&model, &cfg)?;
    let fmt = data_format(args.format.as_deref(), &args.out_data)?;
    run.emit(&args.out_data, format_dataset(&data, fmt).as_bytes())?;
    if let Some(path) = &args.out_graph {
        run.emit(path, format_graph(&graph).as_bytes())?;
    }
    if let Some(path) = &args.out_model {
        run.emit(path, format_model(&model).as_bytes())?;
    }
    Ok(())
}

fn learn(args: &LearnArgs) -> Result<()> {
    let cfg = args.score.config()?;
    let run = Run::new("learn", args, None, &[&args.data])?;
    let fmt = data_format(args.format.as_deref(), &args.data)?;
    let data = parse_dataset(&std::fs::read_to_string(&args.data)?, fmt)?;
    log::info!("learning from {} rows over {} variables ({})", data.n_rows(), data.n_cols(), args.mode);
    let out = learn_structure(&data, &cfg, args.mode)?;
    log::info!("learned {} edges with {} score evaluations", out.graph.n_edges(), out.stats.total_evals);
    run.emit(&args.out, format_graph(&out.graph).as_bytes())?;
    if let Some(path) = &args.stats {
        let mut json = serde_json::to_vec_pretty(&out.stats)?;
        json.push(b'\n');
        run.emit(path, &json)?;
    }
    if let Some(path) = &args.dump_plr {
        let plr = out
            .plr
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig(format!("mode {} does not run the screening step", args.mode)))?;
        run.emit(path, plr.to_tsv().as_bytes())?;
    }
    Ok(())
}

fn eval(args: &EvalArgs) -> Result<()> {
    let run = Run::new("eval", args, None, &[&args.truth, &args.estimate])?;
    let truth = read_graph(&args.truth)?;
    let estimate = read_graph(&args.estimate)?;
    let report = compare_graphs(&truth, &estimate)?;
    let hd_std = report.hd_std()?;
    println!("fp={} fn={} hd={} hd_std={hd_std:.4} recall={:.4}", report.fp, report.fn_, report.hd, report.recall);
    if let Some(path) = &args.json {
        let mut json = serde_json::to_vec_pretty(&report)?;
        json.push(b'\n');
        run.emit(path, &json)?;
    }
    Ok(())
}

fn bench(args: &BenchArgs) -> Result<()> {
    let run = Run::new("bench", args, Some(args.seed), &[])?;
    let cfg = BenchConfig {
        graph_type: args.graph_type,
        d: args.d,
        hub_leaves: args.hub_leaves,
        sample_sizes: args.n_list.clone(),
        replicates: args.replicates,
        modes: args.mode.clone(),
        seed: args.seed,
        burn_in: args.burn_in,
        thinning: args.thinning,
        potentials: args.potentials.options()?,
        score: args.score.config()?,
    };
    let rows = run_bench(&cfg)?;
    run.emit(&args.out, &bench_csv(&rows)?)
}

fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Generate(a) => generate(a),
        Command::Learn(a) => learn(a),
        Command::Eval(a) => eval(a),
        Command::Bench(a) => bench(a),
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the exit status:
/// 0 on success, 1 on a usage error, 2 on a data or model error.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            let rendered = e.to_string();
            let mut lines = rendered.lines();
            let first = lines.next().unwrap_or_default().trim_start_matches("error: ");
            eprintln!("ERROR usage: {first}");
            for line in lines {
                eprintln!("{line}");
            }
            return 1;
        }
    };

    let result = match cli.threads {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k as usize).build() {
            Ok(pool) => pool.install(|| execute(&cli.command)),
            Err(e) => Err(Error::InvalidConfig(format!("cannot start worker pool: {e}"))),
        },
        None => execute(&cli.command),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("ERROR {}: {e}", e.kind());
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(dispatch(["plrhc", "learn", "--out", "x"]), 1);
        assert_eq!(dispatch(["plrhc", "learn", "--data", "a", "--out", "b", "--bogus"]), 1);
        assert_eq!(dispatch(["plrhc", "learn", "--data", "a", "--out", "b", "--mode", "nope"]), 1);
        assert_eq!(dispatch(["plrhc", "--threads", "0", "eval", "--truth", "a", "--estimate", "b"]), 1);
    }

    #[test]
    fn help_and_version_exit_zero() {
        assert_eq!(dispatch(["plrhc", "--version"]), 0);
        assert_eq!(dispatch(["plrhc", "learn", "--help"]), 0);
    }

    #[test]
    fn missing_input_is_data_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("g.txt");
        let code = dispatch([
            "plrhc".as_ref(),
            "learn".as_ref(),
            "--data".as_ref(),
            dir.path().join("absent.txt").as_os_str(),
            "--out".as_ref(),
            out.as_os_str(),
        ]);
        assert_eq!(code, 2);
        assert!(!out.exists());
    }

    #[test]
    fn manifest_name() {
        assert_eq!(manifest_path(Path::new("out/g.txt")), PathBuf::from("out/g.txt.manifest.json"));
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(data_format(None, Path::new("a.CSV")).unwrap(), DataFormat::Csv);
        assert_eq!(data_format(None, Path::new("a.txt")).unwrap(), DataFormat::Space);
        assert!(data_format(Some("xml"), Path::new("a.csv")).is_err());
    }
}
