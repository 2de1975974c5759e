//! Structure-recovery metrics and replicate aggregation.

use serde::Serialize;

use crate::data_model::UndirectedGraph;
use crate::error::{Error, Result};
use crate::neighborhoods::ClassInclusion;
use crate::search::LearnStats;

/// Edge-set comparison of an estimate against the true graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub hd: usize,
    /// `100 * hd / |E_true|`; `None` when the truth has no edges.
    pub hd_std: Option<f64>,
    /// Fraction of true edges recovered; 1 for an edgeless truth.
    pub recall: f64,
    pub n_true_edges: usize,
    pub n_estimated_edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plr_inclusion: Option<Vec<ClassInclusion>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<LearnStats>,
}

impl MetricsReport {
    /// Standardized Hamming distance, failing loudly on an edgeless truth.
    pub fn hd_std(&self) -> Result<f64> {
        self.hd_std.ok_or(Error::DegenerateTruth)
    }
}

/// `100 * hd / n_true_edges`.
pub fn standardized_hamming(hd: usize, n_true_edges: usize) -> Result<f64> {
    if n_true_edges == 0 {
        return Err(Error::DegenerateTruth);
    }
    Ok(100.0 * hd as f64 / n_true_edges as f64)
}

pub fn compare_graphs(truth: &UndirectedGraph, estimate: &UndirectedGraph) -> Result<MetricsReport> {
    if truth.n_vertices() != estimate.n_vertices() {
        return Err(Error::Shape(format!(
            "truth has {} vertices, estimate has {}",
            truth.n_vertices(),
            estimate.n_vertices()
        )));
    }
    let true_edges = truth.edges();
    let shared = true_edges.iter().filter(|&&(a, b)| estimate.has_edge(a, b)).count();
    let fp = estimate.n_edges() - shared;
    let fn_ = truth.n_edges() - shared;
    let hd = fp + fn_;
    let n_true = truth.n_edges();
    Ok(MetricsReport {
        fp,
        fn_,
        hd,
        hd_std: standardized_hamming(hd, n_true).ok(),
        recall: if n_true == 0 { 1.0 } else { shared as f64 / n_true as f64 },
        n_true_edges: n_true,
        n_estimated_edges: estimate.n_edges(),
        plr_inclusion: None,
        stats: None,
    })
}

/// Means and sample standard deviations over replicates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateReport {
    pub n_replicates: usize,
    pub fp: f64,
    #[serde(rename = "fn")]
    pub fn_: f64,
    /// Always `fp + fn`.
    pub hd: f64,
    pub hd_std: Option<f64>,
    pub recall: f64,
    pub stddev_fp: f64,
    pub stddev_fn: f64,
    pub stddev_hd: f64,
    pub stddev_hd_std: Option<f64>,
    pub stddev_recall: f64,
    /// Screening inclusion pooled over the replicates that carry it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plr_inclusion: Option<Vec<ClassInclusion>>,
}

fn mean_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    if n < 2.0 {
        return (mean, 0.0);
    }
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Sums per-class counts across reports.
pub fn pool_inclusion(reports: &[MetricsReport]) -> Option<Vec<ClassInclusion>> {
    let mut pooled: Option<Vec<ClassInclusion>> = None;
    for r in reports {
        let Some(inc) = &r.plr_inclusion else { continue };
        match &mut pooled {
            None => pooled = Some(inc.clone()),
            Some(acc) => {
                for (a, b) in acc.iter_mut().zip(inc) {
                    a.included += b.included;
                    a.total += b.total;
                }
            }
        }
    }
    pooled
}

pub fn aggregate(reports: &[MetricsReport]) -> Result<AggregateReport> {
    let first = reports.first().ok_or(Error::EmptyInput)?;
    if reports.iter().any(|r| r.n_true_edges != first.n_true_edges) {
        return Err(Error::Shape("reports refer to true graphs of different sizes".into()));
    }
    let (fp, stddev_fp) = mean_sd(reports.iter().map(|r| r.fp as f64));
    let (fn_, stddev_fn) = mean_sd(reports.iter().map(|r| r.fn_ as f64));
    let (_, stddev_hd) = mean_sd(reports.iter().map(|r| r.hd as f64));
    let (recall, stddev_recall) = mean_sd(reports.iter().map(|r| r.recall));
    let (hd_std, stddev_hd_std) = if first.hd_std.is_some() {
        let (m, s) = mean_sd(reports.iter().map(|r| r.hd_std.unwrap_or(f64::NAN)));
        (Some(m), Some(s))
    } else {
        (None, None)
    };
    Ok(AggregateReport {
        n_replicates: reports.len(),
        fp,
        fn_,
        hd: fp + fn_,
        hd_std,
        recall,
        stddev_fp,
        stddev_fn,
        stddev_hd,
        stddev_hd_std,
        stddev_recall,
        plr_inclusion: pool_inclusion(reports),
    })
}
