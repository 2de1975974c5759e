use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PairwiseModel;
use crate::data_model::BinaryDataset;
use crate::error::{Error, Result};

/// Largest model handled by exhaustive enumeration.
pub const MAX_EXACT_VARS: usize = 20;

const GIBBS_STREAM: u64 = 2;
const EXACT_STREAM: u64 = 3;

/// Exact joint distribution. State `s` assigns `x_j = (s >> j) & 1`.
pub fn exact_joint(model: &PairwiseModel) -> Result<Vec<f64>> {
    let d = model.n_vars();
    if d > MAX_EXACT_VARS {
        return Err(Error::TooLarge(d));
    }
    let mut x = vec![false; d];
    let mut logw: Vec<f64> = (0..1usize << d)
        .map(|s| {
            for (j, xj) in x.iter_mut().enumerate() {
                *xj = (s >> j) & 1 == 1;
            }
            model.log_weight(&x)
        })
        .collect();
    let max = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut z = 0.0;
    for w in &mut logw {
        *w = (*w - max).exp();
        z += *w;
    }
    for w in &mut logw {
        *w /= z;
    }
    Ok(logw)
}

/// Independent draws from the exact joint; for small models and test data.
pub fn sample_exact(model: &PairwiseModel, n: usize, seed: u64) -> Result<BinaryDataset> {
    if n == 0 {
        return Err(Error::InvalidSize("sample size must be positive".into()));
    }
    let joint = exact_joint(model)?;
    let mut cdf = Vec::with_capacity(joint.len());
    let mut acc = 0.0;
    for p in &joint {
        acc += p;
        cdf.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(EXACT_STREAM);
    let states: Vec<usize> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen::<f64>() * acc;
            cdf.partition_point(|&c| c <= u).min(joint.len() - 1)
        })
        .collect();
    BinaryDataset::from_fn(n, model.n_vars(), |i, j| (states[i] >> j) & 1 == 1)
}

/// Gibbs sampler settings; burn-in and thinning count full sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GibbsConfig {
    pub burn_in: usize,
    pub thinning: usize,
    pub seed: u64,
    pub n_samples: usize,
}

impl GibbsConfig {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        Self { burn_in: 100_000, thinning: 100, seed, n_samples }
    }
}

/// Single-site Gibbs sampler with a fixed variable order per sweep.
///
/// The chain starts from i.i.d. fair coin flips, runs `burn_in` sweeps, and then records
/// the state after every `thinning` further sweeps.
pub fn gibbs_sample(model: &PairwiseModel, cfg: &GibbsConfig) -> Result<BinaryDataset> {
    if cfg.n_samples == 0 {
        return Err(Error::InvalidSize("sample size must be positive".into()));
    }
    if cfg.thinning == 0 {
        return Err(Error::InvalidConfig("thinning must be at least 1".into()));
    }
    let d = model.n_vars();
    let adj = model.weighted_adjacency();
    let mut offsets = Vec::with_capacity(d + 1);
    let mut nbr: Vec<u32> = Vec::new();
    let mut weight: Vec<f64> = Vec::new();
    offsets.push(0);
    for list in &adj {
        for &(v, t) in list {
            nbr.push(v as u32);
            weight.push(t);
        }
        offsets.push(nbr.len());
    }
    let node = model.theta_node();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(GIBBS_STREAM);
    let mut state: Vec<bool> = (0..d).map(|_| rng.gen::<bool>()).collect();

    let sweep = |state: &mut [bool], rng: &mut ChaCha8Rng| {
        for j in 0..d {
            let mut eta = node[j];
            for k in offsets[j]..offsets[j + 1] {
                if state[nbr[k] as usize] {
                    eta += weight[k];
                }
            }
            let p = 1.0 / (1.0 + (-eta).exp());
            state[j] = rng.gen::<f64>() < p;
        }
    };

    for _ in 0..cfg.burn_in {
        sweep(&mut state, &mut rng);
    }
    let mut rows: Vec<Vec<bool>> = Vec::with_capacity(cfg.n_samples);
    for _ in 0..cfg.n_samples {
        for _ in 0..cfg.thinning {
            sweep(&mut state, &mut rng);
        }
        rows.push(state.clone());
    }
    BinaryDataset::from_fn(cfg.n_samples, d, |i, j| rows[i][j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data_model::UndirectedGraph;

    fn pair_model(theta: f64) -> PairwiseModel {
        let g = UndirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        PairwiseModel::new(g, vec![0.0, 0.0], vec![theta]).unwrap()
    }

    #[test]
    fn two_variable_joint() {
        let p = exact_joint(&pair_model(2f64.ln())).unwrap();
        for (got, want) in p.iter().zip([0.2, 0.2, 0.2, 0.4]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn joint_sums_to_one_and_rejects_large() {
        let g = crate::synthesis::make_grid(3).unwrap();
        let m = crate::synthesis::sample_potentials(&g, 3);
        let total: f64 = exact_joint(&m).unwrap().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        let big = crate::synthesis::sample_potentials(&UndirectedGraph::empty(21), 0);
        assert!(matches!(exact_joint(&big), Err(Error::TooLarge(21))));
    }

    #[test]
    fn gibbs_is_reproducible() {
        let m = pair_model(1.0);
        let cfg = GibbsConfig { burn_in: 10, thinning: 2, seed: 9, n_samples: 50 };
        let a = gibbs_sample(&m, &cfg).unwrap();
        assert_eq!(a, gibbs_sample(&m, &cfg).unwrap());
        assert_eq!((a.n_rows(), a.n_cols()), (50, 2));
        assert!(gibbs_sample(&m, &GibbsConfig { n_samples: 0, ..cfg }).is_err());
        assert!(gibbs_sample(&m, &GibbsConfig { thinning: 0, ..cfg }).is_err());
    }

    #[test]
    fn exact_sampler_frequencies() {
        let m = pair_model(2f64.ln());
        let data = sample_exact(&m, 20_000, 4).unwrap();
        let both = (0..data.n_rows()).filter(|&i| data.get(i, 0) && data.get(i, 1)).count();
        assert!((both as f64 / 20_000.0 - 0.4).abs() < 0.02);
    }
}
