//! Pairwise penalized likelihood-ratio screening and distance-3 search spaces.
//!
//! For every ordered pair `(j, j')` the single-predictor model of `x_j` on `x_j'` is
//! compared with the intercept-only model under the extended BIC; pairs with a positive
//! gain form the screened edge set. Because dependence decays with graph distance, the
//! ball of radius 3 around `j` in the symmetrized screened graph is a small candidate set
//! that still tends to contain every true neighbor of `j`.

use rayon::prelude::*;
use serde::Serialize;

use crate::data_model::{bfs_within, distance_class_matrix, BinaryDataset, DistanceClass, UndirectedGraph};
use crate::error::{Error, Result};
use crate::scoring::{ScoreCache, ScoreConfig};

/// Radius of the candidate ball around each variable.
pub const SEARCH_RADIUS: usize = 3;

#[derive(Debug, Clone)]
pub struct PlrResult {
    n_vars: usize,
    /// Ordered pairs with positive gain, sorted by `(j, j')`.
    pub ordered_pairs: Vec<(usize, usize)>,
    /// OR-symmetrization of `ordered_pairs`.
    pub symmetric_graph: UndirectedGraph,
    // Dense d×d gains; the diagonal is NaN.
    deltas: Vec<f64>,
}

impl PlrResult {
    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// BIC gain of adding `j2` to the empty blanket of `j`.
    pub fn delta(&self, j: usize, j2: usize) -> f64 {
        self.deltas[j * self.n_vars + j2]
    }

    pub fn contains(&self, j: usize, j2: usize) -> bool {
        j != j2 && self.delta(j, j2) > 0.0
    }

    /// TSV dump of the screened pairs: `j\tj'\tdelta`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for &(a, b) in &self.ordered_pairs {
            out.push_str(&format!("{a}\t{b}\t{}\n", self.delta(a, b)));
        }
        out
    }
}

/// Screens all ordered pairs with a private cache.
pub fn plr_screen(data: &BinaryDataset, cfg: &ScoreConfig) -> Result<PlrResult> {
    let cache = ScoreCache::new(data.n_cols());
    plr_screen_cached(data, &cache, cfg)
}

/// Screens all ordered pairs, scoring through `cache` so that the tests count as
/// evaluations and later searches reuse the single-member fits.
pub fn plr_screen_cached(data: &BinaryDataset, cache: &ScoreCache, cfg: &ScoreConfig) -> Result<PlrResult> {
    cfg.validate()?;
    let d = data.n_cols();
    let rows: Vec<Vec<f64>> = (0..d)
        .into_par_iter()
        .map(|j| -> Result<Vec<f64>> {
            let base = cache.bic(data, j, &[], cfg)?;
            let mut row = vec![f64::NAN; d];
            for (j2, slot) in row.iter_mut().enumerate() {
                if j2 != j {
                    *slot = cache.bic(data, j, &[j2], cfg)? - base;
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    PlrResult::from_deltas(d, rows.into_iter().flatten().collect())
}

impl PlrResult {
    /// Builds a result from a dense row-major `d × d` gain matrix (diagonal ignored).
    pub fn from_deltas(n_vars: usize, mut deltas: Vec<f64>) -> Result<Self> {
        if deltas.len() != n_vars * n_vars {
            return Err(Error::Shape(format!("{} gains for {n_vars} variables", deltas.len())));
        }
        let mut ordered_pairs = Vec::new();
        for j in 0..n_vars {
            deltas[j * n_vars + j] = f64::NAN;
            for j2 in 0..n_vars {
                if j != j2 && deltas[j * n_vars + j2] > 0.0 {
                    ordered_pairs.push((j, j2));
                }
            }
        }
        let symmetric_graph = UndirectedGraph::from_edges(n_vars, ordered_pairs.iter().copied())?;
        Ok(PlrResult { n_vars, ordered_pairs, symmetric_graph, deltas })
    }
}

/// Candidate blanket members for each variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpaces {
    spaces: Vec<Vec<usize>>,
}

impl SearchSpaces {
    /// Unconstrained spaces: every other variable.
    pub fn full(n_vars: usize) -> Self {
        Self { spaces: (0..n_vars).map(|j| (0..n_vars).filter(|&v| v != j).collect()).collect() }
    }

    pub fn from_lists(spaces: Vec<Vec<usize>>) -> Result<Self> {
        let d = spaces.len();
        for (j, s) in spaces.iter().enumerate() {
            crate::data_model::validate_blanket(d, j, s)?;
        }
        Ok(Self { spaces })
    }

    pub fn space(&self, j: usize) -> &[usize] {
        &self.spaces[j]
    }

    pub fn n_vars(&self) -> usize {
        self.spaces.len()
    }

    pub fn total_size(&self) -> usize {
        self.spaces.iter().map(Vec::len).sum()
    }
}

pub fn build_search_spaces(plr: &PlrResult) -> SearchSpaces {
    search_spaces_within(&plr.symmetric_graph, SEARCH_RADIUS)
}

pub fn search_spaces_within(graph: &UndirectedGraph, radius: usize) -> SearchSpaces {
    let spaces = (0..graph.n_vertices()).map(|j| bfs_within(graph, j, radius).expect("vertex in range")).collect();
    SearchSpaces { spaces }
}

/// Screened-pair inclusion for one distance class of the true graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassInclusion {
    pub class: DistanceClass,
    /// Screened ordered pairs at this true distance.
    pub included: u64,
    /// All ordered pairs at this true distance.
    pub total: u64,
}

impl ClassInclusion {
    pub fn rate(&self) -> Option<f64> {
        (self.total > 0).then(|| self.included as f64 / self.total as f64)
    }
}

/// Inclusion of screened ordered pairs, stratified by true shortest distance.
/// Entries follow [`DistanceClass::ALL`] order.
pub fn plr_inclusion_report(plr: &PlrResult, truth: &UndirectedGraph) -> Result<Vec<ClassInclusion>> {
    if truth.n_vertices() != plr.n_vars() {
        return Err(Error::Shape(format!("truth has {} vertices, screening has {}", truth.n_vertices(), plr.n_vars())));
    }
    let classes = distance_class_matrix(truth);
    let mut out: Vec<ClassInclusion> =
        DistanceClass::ALL.iter().map(|&class| ClassInclusion { class, included: 0, total: 0 }).collect();
    for (j, row) in classes.iter().enumerate() {
        for (j2, class) in row.iter().enumerate() {
            if j == j2 {
                continue;
            }
            let slot = &mut out[class.index()];
            slot.total += 1;
            if plr.contains(j, j2) {
                slot.included += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identical_columns_pass_both_ways() {
        let d = 10;
        let data = BinaryDataset::from_fn(100, d, |i, j| match j {
            0 | 1 => i % 2 == 0,
            _ => (i * (j + 1) / 3) % 2 == 1,
        })
        .unwrap();
        let cfg = ScoreConfig::default();
        let plr = plr_screen(&data, &cfg).unwrap();
        let penalty = 100f64.ln() / 2.0 + 0.5 * 9f64.ln();
        assert_abs_diff_eq!(penalty, 3.401197, epsilon = 1e-6);
        assert_abs_diff_eq!(plr.delta(0, 1), 100.0 * 2f64.ln() - penalty, epsilon = 1e-9);
        assert!(plr.contains(0, 1) && plr.contains(1, 0));
        assert!(plr.symmetric_graph.has_edge(0, 1));
    }

    #[test]
    fn independent_balanced_columns_excluded() {
        // counts 25/25/25/25 over (x0, x1)
        let data = BinaryDataset::from_fn(100, 2, |i, j| if j == 0 { i % 2 == 0 } else { (i / 2) % 2 == 0 }).unwrap();
        let plr = plr_screen(&data, &ScoreConfig::default()).unwrap();
        assert!(plr.ordered_pairs.is_empty());
        let penalty = 100f64.ln() / 2.0 + 0.5 * 1f64.ln();
        assert_abs_diff_eq!(plr.delta(0, 1), -penalty, epsilon = 1e-9);
    }

    #[test]
    fn spaces_on_a_path() {
        let g = UndirectedGraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let spaces = search_spaces_within(&g, SEARCH_RADIUS);
        assert_eq!(spaces.space(0), &[1, 2, 3]);
        assert_eq!(spaces.space(2), &[0, 1, 3, 4]);
        let empty = search_spaces_within(&UndirectedGraph::empty(4), SEARCH_RADIUS);
        assert_eq!(empty.total_size(), 0);
        assert_eq!(SearchSpaces::full(3).space(1), &[0, 2]);
    }

    #[test]
    fn tsv_dump_sorted() {
        let data = BinaryDataset::from_fn(60, 3, |i, j| if j == 2 { i % 3 == 0 } else { i % 2 == 0 }).unwrap();
        let plr = plr_screen(&data, &ScoreConfig::default()).unwrap();
        let tsv = plr.to_tsv();
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("0\t1\t"));
        assert!(lines[1].starts_with("1\t0\t"));
    }
}
