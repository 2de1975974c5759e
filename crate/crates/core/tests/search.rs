use plrhc::data_model::{BinaryDataset, UndirectedGraph};
use plrhc::neighborhoods::{build_search_spaces, plr_screen_cached, SearchSpaces};
use plrhc::scoring::{ScoreCache, ScoreConfig};
use plrhc::search::{combine, learn_structure, phase1, phase2, CombineRule, Mode};
use plrhc::synthesis::{gibbs_sample, make_grid, sample_exact, sample_table_potentials, GibbsConfig, PairwiseModel};

fn grid_data(side: usize, n: usize, seed: u64) -> (UndirectedGraph, BinaryDataset) {
    let g = make_grid(side).unwrap();
    let model = sample_table_potentials(&g, seed);
    let data = gibbs_sample(&model, &GibbsConfig { burn_in: 3000, thinning: 20, seed, n_samples: n }).unwrap();
    (g, data)
}

#[test]
fn strong_chain_is_recovered() {
    let path = UndirectedGraph::from_edges(6, (0..5).map(|v| (v, v + 1))).unwrap();
    let model = PairwiseModel::new(path.clone(), vec![-1.0, -2.0, -2.0, -2.0, -2.0, -1.0], vec![2.0; 5]).unwrap();
    let data = sample_exact(&model, 3000, 1).unwrap();
    for mode in [Mode::Plrhc, Mode::Hc, Mode::HcOr, Mode::HcAnd] {
        let out = learn_structure(&data, &ScoreConfig::default(), mode).unwrap();
        assert_eq!(out.graph, path, "{mode}");
    }
}

#[test]
fn and_rule_is_within_or_rule() {
    let (_, data) = grid_data(5, 600, 2);
    let and = learn_structure(&data, &ScoreConfig::default(), Mode::HcAnd).unwrap().graph;
    let or = learn_structure(&data, &ScoreConfig::default(), Mode::HcOr).unwrap().graph;
    assert!(and.is_subgraph_of(&or));
}

#[test]
fn stats_match_cache_misses() {
    let (_, data) = grid_data(5, 800, 3);
    let cfg = ScoreConfig::default();
    let out = learn_structure(&data, &cfg, Mode::Plrhc).unwrap();

    let cache = ScoreCache::new(data.n_cols());
    let plr = plr_screen_cached(&data, &cache, &cfg).unwrap();
    let after_plr = cache.counters().evaluations;
    let est = phase1(&data, &build_search_spaces(&plr), &cache, &cfg).unwrap();
    let after_phase1 = cache.counters().evaluations;
    let p2 = phase2(&data, &combine(&est, CombineRule::Or), &cache, &cfg).unwrap();
    let total = cache.counters().evaluations;

    assert_eq!(out.stats.plr_evals, after_plr);
    assert_eq!(out.stats.phase1_evals, after_phase1);
    assert_eq!(out.stats.phase2_evals, total - after_phase1);
    assert_eq!(out.stats.total_evals, total);
    assert_eq!(out.stats.total_evals as usize, cache.len());
    assert_eq!(out.stats.phase2_toggles as usize, p2.toggles);
    assert_eq!(out.graph, p2.graph);
}

#[test]
fn screening_reduces_work() {
    let (_, data) = grid_data(6, 1500, 4);
    let cfg = ScoreConfig::default();
    let plrhc = learn_structure(&data, &cfg, Mode::Plrhc).unwrap();
    let hc = learn_structure(&data, &cfg, Mode::Hc).unwrap();
    assert!(plrhc.stats.total_evals < hc.stats.total_evals);
    assert!(plrhc.stats.pairwise_fraction > hc.stats.pairwise_fraction);
}

#[test]
fn thread_count_does_not_change_results() {
    let (_, data) = grid_data(6, 1000, 5);
    let cfg = ScoreConfig::default();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| learn_structure(&data, &cfg, Mode::Plrhc).unwrap())
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a.graph, b.graph);
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.stats.total_evals, b.stats.total_evals);
}

#[test]
fn phase_two_trace_increases() {
    let (_, data) = grid_data(5, 1000, 6);
    let cache = ScoreCache::new(25);
    let cfg = ScoreConfig::default();
    let est = phase1(&data, &SearchSpaces::full(25), &cache, &cfg).unwrap();
    let out = phase2(&data, &combine(&est, CombineRule::Or), &cache, &cfg).unwrap();
    assert_eq!(out.trace.len(), out.toggles + 1);
    assert!(out.trace.windows(2).all(|w| w[1] > w[0]));
}
