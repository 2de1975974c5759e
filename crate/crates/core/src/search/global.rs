use rayon::prelude::*;

use crate::data_model::{BinaryDataset, UndirectedGraph};
use crate::error::{Error, Result};
use crate::scoring::{ScoreCache, ScoreConfig};

/// Global pseudo-likelihood score of `graph`: the sum of every variable's BIC given its
/// neighbors, added in variable order.
pub fn global_score(
    data: &BinaryDataset,
    graph: &UndirectedGraph,
    cache: &ScoreCache,
    cfg: &ScoreConfig,
) -> Result<f64> {
    let mut total = 0.0;
    for j in 0..graph.n_vertices() {
        total += cache.bic(data, j, graph.neighbors(j), cfg)?;
    }
    Ok(total)
}

fn toggled_blanket(graph: &UndirectedGraph, j: usize, other: usize) -> Vec<usize> {
    let nbrs = graph.neighbors(j);
    match nbrs.binary_search(&other) {
        Ok(pos) => {
            let mut b = nbrs.to_vec();
            b.remove(pos);
            b
        }
        Err(pos) => {
            let mut b = Vec::with_capacity(nbrs.len() + 1);
            b.extend_from_slice(&nbrs[..pos]);
            b.push(other);
            b.extend_from_slice(&nbrs[pos..]);
            b
        }
    }
}

/// Current graph, per-variable scores, and the score change of toggling each eligible edge.
///
/// Only the two endpoint summands of the global score depend on an edge, so after a
/// toggle of `{a, b}` just the entries for edges touching `a` or `b` are refreshed.
pub struct EdgeDeltaCache<'a> {
    data: &'a BinaryDataset,
    cache: &'a ScoreCache,
    cfg: ScoreConfig,
    eligible: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    graph: UndirectedGraph,
    scores: Vec<f64>,
    deltas: Vec<f64>,
}

impl<'a> EdgeDeltaCache<'a> {
    /// Starts from the empty graph over the vertices of `eligible`.
    pub fn new(
        data: &'a BinaryDataset,
        eligible: &UndirectedGraph,
        cache: &'a ScoreCache,
        cfg: &ScoreConfig,
    ) -> Result<Self> {
        let d = data.n_cols();
        if eligible.n_vertices() != d {
            return Err(Error::Shape(format!("eligible graph has {} vertices, data has {d}", eligible.n_vertices())));
        }
        let edges = eligible.edges();
        let mut incident = vec![Vec::new(); d];
        for (idx, &(a, b)) in edges.iter().enumerate() {
            incident[a].push(idx);
            incident[b].push(idx);
        }
        let graph = UndirectedGraph::empty(d);
        let scores = (0..d).map(|j| cache.bic(data, j, &[], cfg)).collect::<Result<Vec<_>>>()?;
        let mut this = Self { data, cache, cfg: *cfg, eligible: edges, incident, graph, scores, deltas: Vec::new() };
        this.deltas =
            (0..this.eligible.len()).into_par_iter().map(|idx| this.compute_delta(idx)).collect::<Result<_>>()?;
        Ok(this)
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn eligible(&self) -> &[(usize, usize)] {
        &self.eligible
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn variable_scores(&self) -> &[f64] {
        &self.scores
    }

    /// Sum of the current per-variable scores in variable order.
    pub fn total_score(&self) -> f64 {
        self.scores.iter().sum()
    }

    fn compute_delta(&self, idx: usize) -> Result<f64> {
        let (a, b) = self.eligible[idx];
        let sa = self.cache.bic(self.data, a, &toggled_blanket(&self.graph, a, b), &self.cfg)?;
        let sb = self.cache.bic(self.data, b, &toggled_blanket(&self.graph, b, a), &self.cfg)?;
        Ok((sa + sb) - (self.scores[a] + self.scores[b]))
    }

    /// Delta of toggling eligible edge `idx` in the current graph, recomputed with `cache`.
    pub fn recompute_delta(&self, idx: usize, cache: &ScoreCache) -> Result<f64> {
        let (a, b) = self.eligible[idx];
        let cur_a = cache.bic(self.data, a, self.graph.neighbors(a), &self.cfg)?;
        let cur_b = cache.bic(self.data, b, self.graph.neighbors(b), &self.cfg)?;
        let sa = cache.bic(self.data, a, &toggled_blanket(&self.graph, a, b), &self.cfg)?;
        let sb = cache.bic(self.data, b, &toggled_blanket(&self.graph, b, a), &self.cfg)?;
        Ok((sa + sb) - (cur_a + cur_b))
    }

    /// Index of the best strictly improving toggle; ties go to the smallest edge.
    pub fn best_move(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (idx, &delta) in self.deltas.iter().enumerate() {
            if delta > 0.0 && best.is_none_or(|b| delta > self.deltas[b]) {
                best = Some(idx);
            }
        }
        best
    }

    /// Flips eligible edge `idx` and refreshes the affected entries. Returns the indices
    /// of the refreshed entries.
    pub fn toggle(&mut self, idx: usize) -> Result<Vec<usize>> {
        let (a, b) = self.eligible[idx];
        if !self.graph.remove_edge(a, b) {
            self.graph.add_edge(a, b);
        }
        self.scores[a] = self.cache.bic(self.data, a, self.graph.neighbors(a), &self.cfg)?;
        self.scores[b] = self.cache.bic(self.data, b, self.graph.neighbors(b), &self.cfg)?;
        let mut affected: Vec<usize> = self.incident[a].iter().chain(&self.incident[b]).copied().collect();
        affected.sort_unstable();
        affected.dedup();
        let fresh: Vec<f64> = affected.par_iter().map(|&e| self.compute_delta(e)).collect::<Result<_>>()?;
        for (&e, v) in affected.iter().zip(fresh) {
            self.deltas[e] = v;
        }
        Ok(affected)
    }
}

/// Outcome of the global edge hill climb.
#[derive(Debug, Clone)]
pub struct Phase2Outcome {
    pub graph: UndirectedGraph,
    pub toggles: usize,
    /// Global score before the first toggle and after each toggle.
    pub trace: Vec<f64>,
}

/// Hill climbs over single-edge toggles within `eligible`, starting from the empty graph.
pub fn phase2(
    data: &BinaryDataset,
    eligible: &UndirectedGraph,
    cache: &ScoreCache,
    cfg: &ScoreConfig,
) -> Result<Phase2Outcome> {
    let mut state = EdgeDeltaCache::new(data, eligible, cache, cfg)?;
    let budget = 10 * state.eligible().len();
    let mut trace = vec![state.total_score()];
    let mut toggles = 0;
    while let Some(idx) = state.best_move() {
        if toggles >= budget {
            return Err(Error::BudgetExceeded { phase: "edge hill climb", budget });
        }
        state.toggle(idx)?;
        toggles += 1;
        trace.push(state.total_score());
    }
    Ok(Phase2Outcome { graph: state.graph, toggles, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_eligible_edges_no_moves() {
        let data = BinaryDataset::from_fn(40, 4, |i, j| (i * (j + 1)) % 3 == 0).unwrap();
        let cfg = ScoreConfig::default();
        let cache = ScoreCache::new(4);
        let out = phase2(&data, &UndirectedGraph::empty(4), &cache, &cfg).unwrap();
        assert_eq!(out.toggles, 0);
        assert_eq!(out.graph.n_edges(), 0);
        assert_eq!(out.trace.len(), 1);
    }

    #[test]
    fn strongly_coupled_pair_is_joined() {
        let data = BinaryDataset::from_fn(200, 3, |i, j| match j {
            2 => (i / 3) % 2 == 0,
            _ => i % 2 == 0,
        })
        .unwrap();
        let cfg = ScoreConfig::default();
        let cache = ScoreCache::new(3);
        let all = UndirectedGraph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let out = phase2(&data, &all, &cache, &cfg).unwrap();
        assert!(out.graph.has_edge(0, 1));
        assert!(out.trace.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn toggled_blanket_flips_membership() {
        let g = UndirectedGraph::from_edges(4, [(0, 2), (0, 3)]).unwrap();
        assert_eq!(toggled_blanket(&g, 0, 1), vec![1, 2, 3]);
        assert_eq!(toggled_blanket(&g, 0, 2), vec![3]);
    }
}
