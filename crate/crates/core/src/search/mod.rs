//! Two-phase structure search.
//!
//! Phase 1 estimates a blanket per variable by greedy additions and deletions; phase 2
//! hill climbs over single-edge toggles within the OR-combination of those blankets.
//! With screening enabled, phase 1 is preceded by the pairwise tests and each variable's
//! search is confined to its distance-3 neighborhood in the screened graph.

mod blanket;
mod global;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

pub use blanket::{combine, iamb_blanket, phase1, BlanketEstimate, CombineRule};
pub use global::{global_score, phase2, EdgeDeltaCache, Phase2Outcome};

use crate::data_model::{BinaryDataset, UndirectedGraph};
use crate::error::{Error, Result};
use crate::neighborhoods::{build_search_spaces, plr_screen_cached, PlrResult, SearchSpaces};
use crate::scoring::{CacheCounters, ScoreCache, ScoreConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Screening, constrained phase 1, OR, phase 2.
    Plrhc,
    /// Unconstrained phase 1, OR, phase 2.
    Hc,
    /// Unconstrained phase 1 combined with OR; no phase 2.
    HcOr,
    /// Unconstrained phase 1 combined with AND; no phase 2.
    HcAnd,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Plrhc => "plrhc",
            Mode::Hc => "hc",
            Mode::HcOr => "hc-or",
            Mode::HcAnd => "hc-and",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plrhc" => Ok(Mode::Plrhc),
            "hc" => Ok(Mode::Hc),
            "hc-or" => Ok(Mode::HcOr),
            "hc-and" => Ok(Mode::HcAnd),
            other => Err(Error::InvalidConfig(format!("unknown mode {other:?}"))),
        }
    }
}

/// Cost accounting for one learning run. Evaluations are distinct blanket fits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct LearnStats {
    /// Fits during screening and blanket search (screening fits included).
    pub phase1_evals: u64,
    /// Screening fits alone.
    pub plr_evals: u64,
    pub phase2_evals: u64,
    pub phase2_toggles: u64,
    pub total_evals: u64,
    /// Fits whose blanket has exactly one member.
    pub pairwise_evals: u64,
    pub pairwise_fraction: f64,
    pub mean_blanket_size: f64,
    pub wall_ms: u64,
}

impl LearnStats {
    fn from_counters(phase1: CacheCounters, plr: CacheCounters, phase2: CacheCounters, toggles: usize) -> Self {
        let total = phase1.evaluations + phase2.evaluations;
        let pairwise = phase1.pairwise_evaluations + phase2.pairwise_evaluations;
        let size_sum = phase1.blanket_size_sum + phase2.blanket_size_sum;
        let ratio = |a: u64| if total == 0 { 0.0 } else { a as f64 / total as f64 };
        LearnStats {
            phase1_evals: phase1.evaluations,
            plr_evals: plr.evaluations,
            phase2_evals: phase2.evaluations,
            phase2_toggles: toggles as u64,
            total_evals: total,
            pairwise_evals: pairwise,
            pairwise_fraction: ratio(pairwise),
            mean_blanket_size: ratio(size_sum),
            wall_ms: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LearnOutcome {
    pub graph: UndirectedGraph,
    pub stats: LearnStats,
    pub plr: Option<PlrResult>,
    pub blankets: BlanketEstimate,
    /// Phase-2 score trace, when phase 2 ran.
    pub trace: Option<Vec<f64>>,
}

/// Learns a graph from `data` with the chosen search strategy.
pub fn learn_structure(data: &BinaryDataset, cfg: &ScoreConfig, mode: Mode) -> Result<LearnOutcome> {
    cfg.validate()?;
    let started = Instant::now();
    let cache = ScoreCache::new(data.n_cols());
    let start = cache.counters();

    let (plr, spaces) = match mode {
        Mode::Plrhc => {
            let plr = plr_screen_cached(data, &cache, cfg)?;
            let spaces = build_search_spaces(&plr);
            log::info!(
                "screening kept {} ordered pairs; mean search space {:.2}",
                plr.ordered_pairs.len(),
                spaces.total_size() as f64 / data.n_cols() as f64
            );
            (Some(plr), spaces)
        }
        _ => (None, SearchSpaces::full(data.n_cols())),
    };
    let after_plr = cache.counters();

    let blankets = phase1(data, &spaces, &cache, cfg)?;
    let after_phase1 = cache.counters();

    let (graph, trace, toggles) = match mode {
        Mode::HcOr => (combine(&blankets, CombineRule::Or), None, 0),
        Mode::HcAnd => (combine(&blankets, CombineRule::And), None, 0),
        Mode::Plrhc | Mode::Hc => {
            let eligible = combine(&blankets, CombineRule::Or);
            log::info!("phase 2 over {} eligible edges", eligible.n_edges());
            let out = phase2(data, &eligible, &cache, cfg)?;
            (out.graph, Some(out.trace), out.toggles)
        }
    };
    let end = cache.counters();

    let mut stats = LearnStats::from_counters(
        after_phase1.since(&start),
        after_plr.since(&start),
        end.since(&after_phase1),
        toggles,
    );
    stats.wall_ms = started.elapsed().as_millis() as u64;
    Ok(LearnOutcome { graph, stats, plr, blankets, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_names_round_trip() {
        for m in [Mode::Plrhc, Mode::Hc, Mode::HcOr, Mode::HcAnd] {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert!("hc_or".parse::<Mode>().is_err());
    }

    #[test]
    fn stats_ratios() {
        let p1 = CacheCounters { evaluations: 6, hits: 0, pairwise_evaluations: 3, blanket_size_sum: 9 };
        let p2 = CacheCounters { evaluations: 2, hits: 5, pairwise_evaluations: 1, blanket_size_sum: 3 };
        let s = LearnStats::from_counters(p1, CacheCounters::default(), p2, 1);
        assert_eq!(s.total_evals, 8);
        assert_eq!(s.pairwise_fraction, 0.5);
        assert_eq!(s.mean_blanket_size, 1.5);
    }
}
