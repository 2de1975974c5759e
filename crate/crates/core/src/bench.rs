//! Replicated synthetic benchmark: generate, learn, compare.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::data_model::{BinaryDataset, UndirectedGraph};
use crate::error::{Error, Result};
use crate::evaluation::{compare_graphs, MetricsReport};
use crate::neighborhoods::plr_inclusion_report;
use crate::scoring::ScoreConfig;
use crate::search::{learn_structure, Mode};
use crate::synthesis::{
    gibbs_sample, grid_with_vertices, hub_with_vertices, sample_potentials_with, GibbsConfig, PotentialOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphType {
    Grid,
    Hub,
}

impl GraphType {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphType::Grid => "grid",
            GraphType::Hub => "hub",
        }
    }
}

impl fmt::Display for GraphType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GraphType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(GraphType::Grid),
            "hub" => Ok(GraphType::Hub),
            other => Err(Error::InvalidConfig(format!("unknown graph type {other:?}"))),
        }
    }
}

/// Builds the benchmark graph with `d` vertices.
pub fn benchmark_graph(kind: GraphType, d: usize, hub_leaves: usize) -> Result<UndirectedGraph> {
    match kind {
        GraphType::Grid => grid_with_vertices(d),
        GraphType::Hub => hub_with_vertices(d, hub_leaves),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub graph_type: GraphType,
    pub d: usize,
    pub hub_leaves: usize,
    pub sample_sizes: Vec<usize>,
    pub replicates: usize,
    pub modes: Vec<Mode>,
    pub seed: u64,
    pub burn_in: usize,
    pub thinning: usize,
    pub potentials: PotentialOptions,
    pub score: ScoreConfig,
}

impl BenchConfig {
    pub fn new(graph_type: GraphType, d: usize, sample_sizes: Vec<usize>) -> Self {
        Self {
            graph_type,
            d,
            hub_leaves: 7,
            sample_sizes,
            replicates: 10,
            modes: vec![Mode::Plrhc, Mode::Hc],
            seed: 0,
            burn_in: 100_000,
            thinning: 100,
            potentials: PotentialOptions::default(),
            score: ScoreConfig::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.sample_sizes.is_empty() || self.sample_sizes.contains(&0) {
            return Err(Error::InvalidConfig("sample sizes must be a non-empty list of positive values".into()));
        }
        if self.replicates == 0 || self.modes.is_empty() {
            return Err(Error::InvalidConfig("need at least one replicate and one mode".into()));
        }
        self.score.validate()
    }
}

/// One CSV row: a single (mode, N, replicate) run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub graph: GraphType,
    pub d: usize,
    pub n: usize,
    pub replicate: usize,
    pub mode: Mode,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub hd: usize,
    pub hd_std: Option<f64>,
    pub recall: f64,
    pub n_true_edges: usize,
    pub n_estimated_edges: usize,
    pub phase1_evals: u64,
    pub plr_evals: u64,
    pub phase2_evals: u64,
    pub phase2_toggles: u64,
    pub total_evals: u64,
    pub pairwise_evals: u64,
    pub pairwise_fraction: f64,
    pub mean_blanket_size: f64,
    /// Screened ordered pairs; empty without screening.
    pub plr_pairs: Option<usize>,
    /// Fraction of true edges (as ordered pairs) passing the screen.
    pub plr_edge_inclusion: Option<f64>,
}

impl BenchRow {
    pub fn report(&self) -> MetricsReport {
        MetricsReport {
            fp: self.fp,
            fn_: self.fn_,
            hd: self.hd,
            hd_std: self.hd_std,
            recall: self.recall,
            n_true_edges: self.n_true_edges,
            n_estimated_edges: self.n_estimated_edges,
            plr_inclusion: None,
            stats: None,
        }
    }
}

/// Learns with `mode` on `data` and scores the result against `truth`.
pub fn evaluate_run(
    truth: &UndirectedGraph,
    data: &BinaryDataset,
    mode: Mode,
    cfg: &ScoreConfig,
) -> Result<MetricsReport> {
    let out = learn_structure(data, cfg, mode)?;
    let mut report = compare_graphs(truth, &out.graph)?;
    if let Some(plr) = &out.plr {
        report.plr_inclusion = Some(plr_inclusion_report(plr, truth)?);
    }
    report.stats = Some(out.stats);
    Ok(report)
}

/// Replicate `r` draws fresh potentials and a fresh chain, both seeded with `seed + r`.
/// Smaller sample sizes use a prefix of the longest chain, so every size sees exactly the
/// rows a dedicated chain of that length would produce.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    cfg.validate()?;
    let truth = benchmark_graph(cfg.graph_type, cfg.d, cfg.hub_leaves)?;
    let max_n = *cfg.sample_sizes.iter().max().expect("validated non-empty");

    let per_rep: Vec<Vec<BenchRow>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|rep| -> Result<Vec<BenchRow>> {
            let seed = cfg.seed.wrapping_add(rep as u64);
            let model = sample_potentials_with(&truth, seed, &cfg.potentials);
            let gibbs = GibbsConfig { burn_in: cfg.burn_in, thinning: cfg.thinning, seed, n_samples: max_n };
            let chain = gibbs_sample(&model, &gibbs)?;
            log::info!("replicate {rep}: sampled {max_n} rows");
            let mut rows = Vec::new();
            for &n in &cfg.sample_sizes {
                let data = chain.head(n)?;
                for &mode in &cfg.modes {
                    let report = evaluate_run(&truth, &data, mode, &cfg.score)?;
                    rows.push(bench_row(cfg, n, rep, mode, &report));
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;

    let mut rows: Vec<BenchRow> = per_rep.into_iter().flatten().collect();
    rows.sort_by_key(|r| (cfg.modes.iter().position(|&m| m == r.mode), r.n, r.replicate));
    Ok(rows)
}

fn bench_row(cfg: &BenchConfig, n: usize, replicate: usize, mode: Mode, report: &MetricsReport) -> BenchRow {
    let stats = report.stats.unwrap_or_default();
    let edge_inclusion = report.plr_inclusion.as_ref().and_then(|inc| inc[0].rate());
    let plr_pairs = report.plr_inclusion.as_ref().map(|inc| inc.iter().map(|c| c.included as usize).sum());
    BenchRow {
        graph: cfg.graph_type,
        d: cfg.d,
        n,
        replicate,
        mode,
        fp: report.fp,
        fn_: report.fn_,
        hd: report.hd,
        hd_std: report.hd_std,
        recall: report.recall,
        n_true_edges: report.n_true_edges,
        n_estimated_edges: report.n_estimated_edges,
        phase1_evals: stats.phase1_evals,
        plr_evals: stats.plr_evals,
        phase2_evals: stats.phase2_evals,
        phase2_toggles: stats.phase2_toggles,
        total_evals: stats.total_evals,
        pairwise_evals: stats.pairwise_evals,
        pairwise_fraction: stats.pairwise_fraction,
        mean_blanket_size: stats.mean_blanket_size,
        plr_pairs,
        plr_edge_inclusion: edge_inclusion,
    }
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn bench_csv(rows: &[BenchRow]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_bench_csv(rows, &mut buf)?;
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> BenchConfig {
        BenchConfig { burn_in: 50, thinning: 2, replicates: 2, ..BenchConfig::new(GraphType::Grid, 9, vec![100, 200]) }
    }

    #[test]
    fn row_layout_and_order() {
        let rows = run_bench(&tiny()).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 2);
        assert_eq!(rows[0].mode, Mode::Plrhc);
        assert_eq!((rows[0].n, rows[0].replicate), (100, 0));
        assert_eq!((rows[1].n, rows[1].replicate), (100, 1));
        assert!(rows.iter().all(|r| r.hd == r.fp + r.fn_ && r.n_true_edges == 12));
        assert!(rows.iter().filter(|r| r.mode == Mode::Hc).all(|r| r.plr_pairs.is_none()));
        let csv = String::from_utf8(bench_csv(&rows).unwrap()).unwrap();
        assert!(csv.starts_with("graph,d,n,replicate,mode,fp,fn,hd,hd_std,recall,"));
        assert_eq!(csv.lines().count(), 9);
    }

    #[test]
    fn deterministic() {
        let a = bench_csv(&run_bench(&tiny()).unwrap()).unwrap();
        let b = bench_csv(&run_bench(&tiny()).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = tiny();
        cfg.sample_sizes.clear();
        assert!(run_bench(&cfg).is_err());
        let cfg = BenchConfig { d: 10, ..tiny() };
        assert!(matches!(run_bench(&cfg), Err(Error::InvalidSize(_))));
    }
}
