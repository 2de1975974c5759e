//! Per-variable pseudo-likelihood scores: logistic regression fits and the extended BIC.

mod cache;
mod logistic;

pub use cache::{CacheCounters, ScoreCache};
pub use logistic::{
    bic_score, fit_logistic, fit_logistic_newton, loglik_empty, score_uncached, BlanketScore, LogisticFit, ScoreConfig,
};
