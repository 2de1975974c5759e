//! Maximum-likelihood logistic regression of one binary variable on its blanket.
//!
//! All fits run on grouped counts (one term per occupied configuration of the blanket),
//! so cost depends on the number of distinct configurations, not on N.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::data_model::{grouped_counts, BinaryDataset, CellCounts};
use crate::error::{Error, Result};

/// Settings shared by every fit and score of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreConfig {
    /// Weight of the `log(d - 1)` term in the extended BIC penalty.
    pub gamma: f64,
    /// Newton stops once the absolute log-likelihood change drops below this.
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    /// Coefficients are confined to `[-beta_cap, beta_cap]`.
    pub beta_cap: f64,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        Self { gamma: 0.5, newton_tol: 1e-8, newton_max_iter: 50, beta_cap: 15.0 }
    }
}

impl ScoreConfig {
    pub fn with_gamma(gamma: f64) -> Self {
        Self { gamma, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.gamma >= 0.0
            && self.gamma.is_finite()
            && self.newton_tol > 0.0
            && self.newton_max_iter >= 1
            && self.beta_cap > 0.0
            && self.beta_cap.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("{self:?}")))
        }
    }

    /// Penalty charged per parameter: `log(N)/2 + gamma * log(d - 1)`.
    pub fn penalty_per_parameter(&self, n_rows: usize, n_cols: usize) -> Result<f64> {
        if n_cols < 2 {
            return Err(Error::InvalidDimension(format!("need d >= 2, got {n_cols}")));
        }
        if n_rows < 1 {
            return Err(Error::InvalidDimension("need N >= 1".into()));
        }
        Ok((n_rows as f64).ln() / 2.0 + self.gamma * ((n_cols - 1) as f64).ln())
    }
}

/// A fitted conditional model before the penalty is applied.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticFit {
    pub target: usize,
    pub blanket: Vec<usize>,
    /// Intercept first, then one coefficient per blanket member in blanket order.
    pub beta: Vec<f64>,
    pub log_lik: f64,
    pub converged: bool,
}

/// A fitted conditional model together with its extended BIC.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlanketScore {
    pub target: usize,
    pub blanket: Vec<usize>,
    pub beta: Vec<f64>,
    pub log_lik: f64,
    pub bic: f64,
    pub converged: bool,
}

/// `n * ln(n / m)` with `0 * ln 0 = 0`.
fn xlogx_ratio(n: u32, m: u32) -> f64 {
    if n == 0 {
        0.0
    } else {
        n as f64 * (n as f64 / m as f64).ln()
    }
}

fn capped_logit(ones: u32, zeros: u32, cap: f64) -> f64 {
    match (ones, zeros) {
        (0, _) => -cap,
        (_, 0) => cap,
        _ => ((ones as f64) / (zeros as f64)).ln().clamp(-cap, cap),
    }
}

/// Intercept-only model: returns `(beta0, log_lik)`.
pub fn loglik_empty(data: &BinaryDataset, j: usize, cfg: &ScoreConfig) -> Result<(f64, f64)> {
    if j >= data.n_cols() {
        return Err(Error::Index { index: j, len: data.n_cols() });
    }
    let n = data.n_rows() as u32;
    let ones = data.ones(j) as u32;
    Ok(empty_closed_form(ones, n - ones, cfg))
}

fn empty_closed_form(ones: u32, zeros: u32, cfg: &ScoreConfig) -> (f64, f64) {
    let n = ones + zeros;
    let ll = xlogx_ratio(ones, n) + xlogx_ratio(zeros, n);
    (capped_logit(ones, zeros, cfg.beta_cap), ll)
}

/// Saturated one-predictor model: fitted probabilities are the empirical conditionals.
fn single_closed_form(cells: &[CellCounts], cfg: &ScoreConfig) -> (Vec<f64>, f64) {
    let cap = cfg.beta_cap;
    let group = |b: u32| cells.iter().find(|c| c.config == b).copied();
    let ll: f64 = cells.iter().map(|c| xlogx_ratio(c.ones, c.total()) + xlogx_ratio(c.zeros, c.total())).sum();
    let beta = match (group(0), group(1)) {
        (Some(g0), Some(g1)) => {
            let b0 = capped_logit(g0.ones, g0.zeros, cap);
            let b1 = (capped_logit(g1.ones, g1.zeros, cap) - b0).clamp(-cap, cap);
            vec![b0, b1]
        }
        (Some(g), None) | (None, Some(g)) => vec![capped_logit(g.ones, g.zeros, cap), 0.0],
        (None, None) => unreachable!("dataset has at least one row"),
    };
    (beta, ll)
}

/// Fits the logistic model of `x_j` on `blanket`. Blankets of size 0 or 1 use closed forms.
pub fn fit_logistic(data: &BinaryDataset, j: usize, blanket: &[usize], cfg: &ScoreConfig) -> Result<LogisticFit> {
    let cells = grouped_counts(data, j, blanket)?;
    let (beta, log_lik, converged) = match blanket.len() {
        0 => {
            let (ones, zeros) = cells.iter().fold((0, 0), |(o, z), c| (o + c.ones, z + c.zeros));
            let (b0, ll) = empty_closed_form(ones, zeros, cfg);
            (vec![b0], ll, true)
        }
        1 => {
            let (beta, ll) = single_closed_form(&cells, cfg);
            (beta, ll, true)
        }
        k => newton(&cells, k, cfg),
    };
    Ok(LogisticFit { target: j, blanket: blanket.to_vec(), beta, log_lik, converged })
}

/// Same model as [`fit_logistic`] but always solved iteratively, whatever the blanket size.
pub fn fit_logistic_newton(
    data: &BinaryDataset,
    j: usize,
    blanket: &[usize],
    cfg: &ScoreConfig,
) -> Result<LogisticFit> {
    let cells = grouped_counts(data, j, blanket)?;
    let (beta, log_lik, converged) = newton(&cells, blanket.len(), cfg);
    Ok(LogisticFit { target: j, blanket: blanket.to_vec(), beta, log_lik, converged })
}

/// Applies the extended BIC penalty, counting the intercept as a parameter.
pub fn bic_score(fit: LogisticFit, n_rows: usize, n_cols: usize, cfg: &ScoreConfig) -> Result<BlanketScore> {
    let per_param = cfg.penalty_per_parameter(n_rows, n_cols)?;
    let dim = (fit.blanket.len() + 1) as f64;
    Ok(BlanketScore {
        bic: fit.log_lik - dim * per_param,
        target: fit.target,
        blanket: fit.blanket,
        beta: fit.beta,
        log_lik: fit.log_lik,
        converged: fit.converged,
    })
}

/// Fits and scores in one go, without caching.
pub fn score_uncached(data: &BinaryDataset, j: usize, blanket: &[usize], cfg: &ScoreConfig) -> Result<BlanketScore> {
    let fit = fit_logistic(data, j, blanket, cfg)?;
    bic_score(fit, data.n_rows(), data.n_cols(), cfg)
}

#[inline]
fn linear_predictor(config: u32, beta: &[f64]) -> f64 {
    let mut eta = beta[0];
    for (k, b) in beta[1..].iter().enumerate() {
        if config >> k & 1 == 1 {
            eta += b;
        }
    }
    eta
}

/// `ln(1 + e^eta)` without overflow.
#[inline]
fn softplus(eta: f64) -> f64 {
    if eta > 0.0 {
        eta + (-eta).exp().ln_1p()
    } else {
        eta.exp().ln_1p()
    }
}

#[inline]
fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

fn grouped_loglik(cells: &[CellCounts], beta: &[f64]) -> f64 {
    cells
        .iter()
        .map(|c| {
            let eta = linear_predictor(c.config, beta);
            c.ones as f64 * eta - c.total() as f64 * softplus(eta)
        })
        .sum()
}

/// Damped, box-constrained Newton-Raphson. Coordinates sitting on the cap with the
/// gradient pushing outward are frozen for the step.
fn newton(cells: &[CellCounts], k: usize, cfg: &ScoreConfig) -> (Vec<f64>, f64, bool) {
    let p = k + 1;
    let cap = cfg.beta_cap;
    let (ones, zeros) = cells.iter().fold((0u32, 0u32), |(o, z), c| (o + c.ones, z + c.zeros));
    let n_total = (ones + zeros) as f64;
    let mut beta = vec![0.0; p];
    beta[0] = capped_logit(ones, zeros, cap);
    let mut ll = grouped_loglik(cells, &beta);
    let mut converged = false;

    let mut grad = vec![0.0; p];
    let mut info = vec![0.0; p * p];
    for _ in 0..cfg.newton_max_iter {
        grad.iter_mut().for_each(|g| *g = 0.0);
        info.iter_mut().for_each(|h| *h = 0.0);
        for c in cells {
            let mu = sigmoid(linear_predictor(c.config, &beta));
            let resid = c.ones as f64 - c.total() as f64 * mu;
            let w = c.total() as f64 * mu * (1.0 - mu);
            for a in 0..p {
                if a > 0 && c.config >> (a - 1) & 1 == 0 {
                    continue;
                }
                grad[a] += resid;
                for b in 0..=a {
                    if b > 0 && c.config >> (b - 1) & 1 == 0 {
                        continue;
                    }
                    info[a * p + b] += w;
                }
            }
        }
        let free: Vec<usize> =
            (0..p).filter(|&i| !((beta[i] >= cap && grad[i] > 0.0) || (beta[i] <= -cap && grad[i] < 0.0))).collect();
        if free.is_empty() {
            converged = true;
            break;
        }
        let step = match solve_free(&info, &grad, &free, p) {
            Some(s) => s,
            None => break,
        };

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=20 {
            let mut cand = beta.clone();
            for (s, &i) in step.iter().zip(&free) {
                cand[i] = (beta[i] + t * s).clamp(-cap, cap);
            }
            let cand_ll = grouped_loglik(cells, &cand);
            if cand_ll >= ll {
                accepted = Some((cand, cand_ll));
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some((cand, cand_ll)) => {
                let change = cand_ll - ll;
                beta = cand;
                ll = cand_ll;
                if change < cfg.newton_tol {
                    converged = true;
                    break;
                }
            }
            None => {
                // No ascent left at machine precision along the Newton direction.
                converged = free.iter().map(|&i| grad[i].abs()).fold(0.0, f64::max) <= 1e-6 * n_total;
                break;
            }
        }
    }
    (beta, ll, converged)
}

fn solve_free(info: &[f64], grad: &[f64], free: &[usize], p: usize) -> Option<Vec<f64>> {
    let m = free.len();
    let h = DMatrix::from_fn(m, m, |r, c| {
        let (a, b) = (free[r].max(free[c]), free[r].min(free[c]));
        info[a * p + b]
    });
    let g = DVector::from_iterator(m, free.iter().map(|&i| grad[i]));
    let scale = (0..m).map(|i| h[(i, i)]).fold(0.0, f64::max).max(1e-300);
    let mut ridge = 0.0;
    for _ in 0..12 {
        let mut hr = h.clone();
        for i in 0..m {
            hr[(i, i)] += ridge;
        }
        if let Some(chol) = hr.cholesky() {
            return Some(chol.solve(&g).iter().copied().collect());
        }
        ridge = if ridge == 0.0 { 1e-12 * scale } else { ridge * 100.0 };
    }
    None
}
