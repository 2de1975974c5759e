use plrhc::data_model::UndirectedGraph;
use plrhc::synthesis::{
    exact_joint, format_model, gibbs_sample, make_grid, make_hub, parse_model, sample_potentials,
    sample_table_potentials, GibbsConfig, PairwiseModel,
};

#[test]
fn edgeless_chain_gives_fair_coins() {
    let model = sample_potentials(&UndirectedGraph::empty(5), 1);
    let n = 10_000;
    let data = gibbs_sample(&model, &GibbsConfig { burn_in: 100, thinning: 1, seed: 1, n_samples: n }).unwrap();
    let tol = 4.0 * (0.25 / n as f64).sqrt();
    for j in 0..5 {
        assert!((data.ones(j) as f64 / n as f64 - 0.5).abs() < tol);
    }
}

#[test]
fn edgeless_chain_follows_node_potentials() {
    let model = PairwiseModel::new(UndirectedGraph::empty(3), vec![-1.0, 0.0, 2.0], vec![]).unwrap();
    let n = 10_000;
    let data = gibbs_sample(&model, &GibbsConfig { burn_in: 10, thinning: 1, seed: 2, n_samples: n }).unwrap();
    for (j, &t) in model.theta_node().iter().enumerate() {
        let p: f64 = 1.0 / (1.0 + (-t).exp());
        assert!((data.ones(j) as f64 / n as f64 - p).abs() < 4.0 * (p * (1.0 - p) / n as f64).sqrt());
    }
}

#[test]
fn single_variable_joint() {
    let model = PairwiseModel::new(UndirectedGraph::empty(1), vec![0.0], vec![]).unwrap();
    assert_eq!(exact_joint(&model).unwrap(), vec![0.5, 0.5]);
}

#[test]
fn gibbs_matches_exact_joint_on_a_small_grid() {
    let g = make_grid(2).unwrap();
    let model = sample_table_potentials(&g, 12);
    let p = exact_joint(&model).unwrap();
    let n = 20_000;
    let data = gibbs_sample(&model, &GibbsConfig { burn_in: 1000, thinning: 10, seed: 12, n_samples: n }).unwrap();
    let mut freq = [0usize; 16];
    for i in 0..n {
        freq[(0..4).filter(|&j| data.get(i, j)).map(|j| 1 << j).sum::<usize>()] += 1;
    }
    let tv: f64 = 0.5 * freq.iter().zip(&p).map(|(&f, &q)| (f as f64 / n as f64 - q).abs()).sum::<f64>();
    assert!(tv < 0.03, "{tv}");
}

#[test]
fn handshake_and_tree_shape() {
    for g in [make_grid(7).unwrap(), make_hub(5, 7).unwrap(), make_hub(3, 1).unwrap()] {
        let degree_sum: usize = (0..g.n_vertices()).map(|v| g.degree(v)).sum();
        assert_eq!(degree_sum, 2 * g.n_edges());
    }
    for (hubs, leaves) in [(1, 3), (4, 7), (9, 2)] {
        let g = make_hub(hubs, leaves).unwrap();
        assert_eq!(g.n_edges(), g.n_vertices() - 1);
        assert!(g.distances_from(0).unwrap().iter().all(Option::is_some));
    }
}

#[test]
fn model_file_round_trip() {
    let model = sample_table_potentials(&make_hub(2, 3).unwrap(), 4);
    let text = format_model(&model);
    assert_eq!(text.lines().filter(|l| l.starts_with("edge\t")).count(), 7);
    assert_eq!(parse_model(&text).unwrap(), model);
}

#[test]
fn dataset_shape() {
    let model = sample_table_potentials(&make_grid(3).unwrap(), 6);
    let data = gibbs_sample(&model, &GibbsConfig { burn_in: 5, thinning: 3, seed: 6, n_samples: 77 }).unwrap();
    assert_eq!((data.n_rows(), data.n_cols()), (77, 9));
}
