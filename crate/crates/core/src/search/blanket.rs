use std::sync::Arc;

use rayon::prelude::*;

use crate::data_model::{BinaryDataset, UndirectedGraph, MAX_TABLE_BLANKET};
use crate::error::{Error, Result};
use crate::neighborhoods::SearchSpaces;
use crate::scoring::{BlanketScore, ScoreCache, ScoreConfig};

/// Per-variable blanket estimates from the first phase.
#[derive(Debug, Clone)]
pub struct BlanketEstimate {
    pub blankets: Vec<Vec<usize>>,
    pub scores: Vec<Arc<BlanketScore>>,
}

impl BlanketEstimate {
    pub fn n_vars(&self) -> usize {
        self.blankets.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineRule {
    Or,
    And,
}

fn with_member(blanket: &[usize], v: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(blanket.len() + 1);
    let pos = blanket.partition_point(|&x| x < v);
    out.extend_from_slice(&blanket[..pos]);
    out.push(v);
    out.extend_from_slice(&blanket[pos..]);
    out
}

fn without_member(blanket: &[usize], v: usize) -> Vec<usize> {
    blanket.iter().copied().filter(|&x| x != v).collect()
}

/// Greedy blanket search for `j` restricted to `space`.
///
/// Starting from the empty blanket, each round applies the single best addition and then
/// the single best deletion, each only if it strictly raises the score. Stops after a
/// round with no change. Ties go to the smaller variable index.
pub fn iamb_blanket(
    data: &BinaryDataset,
    j: usize,
    space: &[usize],
    cache: &ScoreCache,
    cfg: &ScoreConfig,
) -> Result<(Vec<usize>, Arc<BlanketScore>)> {
    if space.contains(&j) {
        return Err(Error::InvalidBlanket { target: j, msg: "search space contains the target".into() });
    }
    let budget = 10 * data.n_cols();
    let mut blanket: Vec<usize> = Vec::new();
    let mut current = cache.score_blanket(data, j, &blanket, cfg)?;
    let mut moves = 0usize;
    let mut warned = false;

    loop {
        let mut changed = false;

        if blanket.len() < MAX_TABLE_BLANKET {
            let mut best: Option<(Vec<usize>, Arc<BlanketScore>)> = None;
            for &v in space {
                if blanket.binary_search(&v).is_ok() {
                    continue;
                }
                let cand = with_member(&blanket, v);
                let s = cache.score_blanket(data, j, &cand, cfg)?;
                let bar = best.as_ref().map_or(current.bic, |b| b.1.bic);
                if s.bic > bar {
                    best = Some((cand, s));
                }
            }
            if let Some((b, s)) = best {
                blanket = b;
                current = s;
                moves += 1;
                changed = true;
            }
        } else if !warned {
            log::warn!("blanket of variable {j} reached the size cap {MAX_TABLE_BLANKET}; additions skipped");
            warned = true;
        }

        let mut best: Option<(Vec<usize>, Arc<BlanketScore>)> = None;
        for &v in &blanket {
            let cand = without_member(&blanket, v);
            let s = cache.score_blanket(data, j, &cand, cfg)?;
            let bar = best.as_ref().map_or(current.bic, |b| b.1.bic);
            if s.bic > bar {
                best = Some((cand, s));
            }
        }
        if let Some((b, s)) = best {
            blanket = b;
            current = s;
            moves += 1;
            changed = true;
        }

        if !changed {
            return Ok((blanket, current));
        }
        if moves > budget {
            return Err(Error::BudgetExceeded { phase: "blanket search", budget });
        }
    }
}

/// Runs the blanket search for every variable (in parallel over variables).
pub fn phase1(
    data: &BinaryDataset,
    spaces: &SearchSpaces,
    cache: &ScoreCache,
    cfg: &ScoreConfig,
) -> Result<BlanketEstimate> {
    if spaces.n_vars() != data.n_cols() {
        return Err(Error::Shape(format!("{} search spaces for {} variables", spaces.n_vars(), data.n_cols())));
    }
    let results: Vec<(Vec<usize>, Arc<BlanketScore>)> = (0..data.n_cols())
        .into_par_iter()
        .map(|j| iamb_blanket(data, j, spaces.space(j), cache, cfg))
        .collect::<Result<_>>()?;
    let (blankets, scores) = results.into_iter().unzip();
    Ok(BlanketEstimate { blankets, scores })
}

/// Symmetrizes blanket estimates into an undirected graph.
pub fn combine(est: &BlanketEstimate, rule: CombineRule) -> UndirectedGraph {
    let d = est.n_vars();
    let mut g = UndirectedGraph::empty(d);
    for (j, mb) in est.blankets.iter().enumerate() {
        for &v in mb {
            let reverse = est.blankets[v].binary_search(&j).is_ok();
            let keep = match rule {
                CombineRule::Or => true,
                CombineRule::And => reverse,
            };
            if keep {
                g.add_edge(j, v);
            }
        }
    }
    g
}
