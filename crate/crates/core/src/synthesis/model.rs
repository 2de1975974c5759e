use rand::distributions::{Distribution, Open01, Uniform};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data_model::UndirectedGraph;
use crate::error::{Error, Result};

/// RNG stream reserved for potentials; the sampler uses its own stream of the same seed.
const POTENTIAL_STREAM: u64 = 1;

/// Pairwise binary model with node and edge potentials.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseModel {
    graph: UndirectedGraph,
    theta_node: Vec<f64>,
    /// Aligned with `graph.edges()`.
    theta_edge: Vec<f64>,
}

impl PairwiseModel {
    pub fn new(graph: UndirectedGraph, theta_node: Vec<f64>, theta_edge: Vec<f64>) -> Result<Self> {
        if theta_node.len() != graph.n_vertices() || theta_edge.len() != graph.n_edges() {
            return Err(Error::Shape(format!(
                "{} node and {} edge potentials for a graph with {} vertices and {} edges",
                theta_node.len(),
                theta_edge.len(),
                graph.n_vertices(),
                graph.n_edges()
            )));
        }
        if theta_node.iter().chain(&theta_edge).any(|t| !t.is_finite()) {
            return Err(Error::InvalidConfig("potentials must be finite".into()));
        }
        Ok(Self { graph, theta_node, theta_edge })
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn n_vars(&self) -> usize {
        self.graph.n_vertices()
    }

    pub fn theta_node(&self) -> &[f64] {
        &self.theta_node
    }

    /// Edge potentials in `graph().edges()` order.
    pub fn theta_edge(&self) -> &[f64] {
        &self.theta_edge
    }

    pub fn edge_theta(&self, a: usize, b: usize) -> Option<f64> {
        let key = (a.min(b), a.max(b));
        let edges = self.graph.edges();
        edges.binary_search(&key).ok().map(|i| self.theta_edge[i])
    }

    /// Per-vertex `(neighbor, theta)` lists for conditional updates.
    pub fn weighted_adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n_vars()];
        for (&(a, b), &t) in self.graph.edges().iter().zip(&self.theta_edge) {
            adj[a].push((b, t));
            adj[b].push((a, t));
        }
        adj
    }

    /// Unnormalized log-probability of state `x`.
    pub fn log_weight(&self, x: &[bool]) -> f64 {
        let mut s: f64 = self.theta_node.iter().zip(x).filter(|(_, &xi)| xi).map(|(t, _)| t).sum();
        for (&(a, b), &t) in self.graph.edges().iter().zip(&self.theta_edge) {
            if x[a] && x[b] {
                s += t;
            }
        }
        s
    }
}

/// How edge potentials are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialScheme {
    /// Each edge gets a 2×2 factor table with i.i.d. Uniform(0, 1) entries. Its log is
    /// rewritten as one interaction term plus contributions to the two node potentials.
    Tables,
    /// The interaction term itself is drawn, from Uniform(0, 1) (or Uniform(-1, 1) when
    /// signed); node potentials get no edge contributions.
    LogLinear,
}

impl PotentialScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            PotentialScheme::Tables => "tables",
            PotentialScheme::LogLinear => "log-linear",
        }
    }
}

impl FromStr for PotentialScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tables" => Ok(PotentialScheme::Tables),
            "log-linear" => Ok(PotentialScheme::LogLinear),
            other => Err(Error::InvalidConfig(format!("unknown potential scheme {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialOptions {
    pub scheme: PotentialScheme,
    /// Offset added to every node potential.
    pub node_theta: f64,
    /// Log-linear scheme only: draw from Uniform(-1, 1).
    pub signed: bool,
}

impl Default for PotentialOptions {
    fn default() -> Self {
        Self { scheme: PotentialScheme::Tables, node_theta: 0.0, signed: false }
    }
}

/// Interaction terms i.i.d. Uniform(0, 1), node potentials zero.
pub fn sample_potentials(graph: &UndirectedGraph, seed: u64) -> PairwiseModel {
    let opts = PotentialOptions { scheme: PotentialScheme::LogLinear, ..PotentialOptions::default() };
    sample_potentials_with(graph, seed, &opts)
}

/// Factor tables with i.i.d. Uniform(0, 1) entries on every edge.
pub fn sample_table_potentials(graph: &UndirectedGraph, seed: u64) -> PairwiseModel {
    sample_potentials_with(graph, seed, &PotentialOptions::default())
}

pub fn sample_potentials_with(graph: &UndirectedGraph, seed: u64, opts: &PotentialOptions) -> PairwiseModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(POTENTIAL_STREAM);
    let mut theta_node = vec![opts.node_theta; graph.n_vertices()];
    let theta_edge: Vec<f64> = match opts.scheme {
        PotentialScheme::Tables => graph
            .edges()
            .into_iter()
            .map(|(a, b)| {
                // log table entries indexed by 2 * x_a + x_b
                let f: [f64; 4] = std::array::from_fn(|_| Open01.sample(&mut rng)).map(|u: f64| u.ln());
                theta_node[a] += f[2] - f[0];
                theta_node[b] += f[1] - f[0];
                f[3] - f[2] - f[1] + f[0]
            })
            .collect(),
        PotentialScheme::LogLinear if opts.signed => {
            let dist = Uniform::new(-1.0, 1.0);
            (0..graph.n_edges()).map(|_| dist.sample(&mut rng)).collect()
        }
        PotentialScheme::LogLinear => (0..graph.n_edges()).map(|_| Open01.sample(&mut rng)).collect(),
    };
    PairwiseModel::new(graph.clone(), theta_node, theta_edge).expect("shapes match by construction")
}

/// TSV model file: `node\tj\ttheta` lines, then `edge\tj\tj'\ttheta` lines.
pub fn format_model(model: &PairwiseModel) -> String {
    let mut out = String::new();
    for (j, t) in model.theta_node.iter().enumerate() {
        out.push_str(&format!("node\t{j}\t{t}\n"));
    }
    for (&(a, b), t) in model.graph.edges().iter().zip(&model.theta_edge) {
        out.push_str(&format!("edge\t{a}\t{b}\t{t}\n"));
    }
    out
}

pub fn parse_model(text: &str) -> Result<PairwiseModel> {
    let mut nodes: Vec<(usize, f64)> = Vec::new();
    let mut edges: Vec<((usize, usize), f64)> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::Format { what: "model line", line: line_no + 1, msg: msg.to_string() };
        let fields: Vec<&str> = line.split('\t').collect();
        let idx = |s: &str| s.parse::<usize>().map_err(|_| bad("bad index"));
        let val = |s: &str| s.parse::<f64>().map_err(|_| bad("bad potential"));
        match fields.as_slice() {
            ["node", j, t] => nodes.push((idx(j)?, val(t)?)),
            ["edge", a, b, t] => {
                let (a, b) = (idx(a)?, idx(b)?);
                edges.push(((a.min(b), a.max(b)), val(t)?));
            }
            _ => return Err(bad("expected `node` or `edge` record")),
        }
    }
    let d = nodes.len();
    let mut theta_node = vec![f64::NAN; d];
    for (j, t) in nodes {
        if j >= d || !theta_node[j].is_nan() {
            return Err(Error::Format { what: "model", line: 0, msg: format!("node {j} missing or repeated") });
        }
        theta_node[j] = t;
    }
    let graph = UndirectedGraph::from_edges(d, edges.iter().map(|e| e.0))?;
    if graph.n_edges() != edges.len() {
        return Err(Error::Format { what: "model", line: 0, msg: "repeated edge".into() });
    }
    edges.sort_by_key(|e| e.0);
    PairwiseModel::new(graph, theta_node, edges.into_iter().map(|e| e.1).collect())
}
