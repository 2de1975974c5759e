use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};

/// Simple undirected graph over vertices `0..n`, with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UndirectedGraph {
    adj: Vec<Vec<usize>>,
    n_edges: usize,
}

impl UndirectedGraph {
    pub fn empty(n_vertices: usize) -> Self {
        Self { adj: vec![Vec::new(); n_vertices], n_edges: 0 }
    }

    /// Builds a graph from unordered pairs. Orientation and order of the input do not matter;
    /// duplicate pairs collapse. Self-loops and out-of-range vertices are rejected.
    pub fn from_edges<I>(n_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n_vertices);
        for (a, b) in edges {
            g.check_vertex(a)?;
            g.check_vertex(b)?;
            if a == b {
                return Err(Error::InvalidConfig(format!("self-loop on vertex {a}")));
            }
            g.add_edge(a, b);
        }
        Ok(g)
    }

    pub fn n_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.adj.len() && self.adj[a].binary_search(&b).is_ok()
    }

    /// Inserts `{a, b}`; returns false if it was already present.
    pub fn add_edge(&mut self, a: usize, b: usize) -> bool {
        debug_assert!(a != b);
        match self.adj[a].binary_search(&b) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[a].insert(pos, b);
                let pos = self.adj[b].binary_search(&a).unwrap_err();
                self.adj[b].insert(pos, a);
                self.n_edges += 1;
                true
            }
        }
    }

    /// Removes `{a, b}`; returns false if it was absent.
    pub fn remove_edge(&mut self, a: usize, b: usize) -> bool {
        match self.adj[a].binary_search(&b) {
            Err(_) => false,
            Ok(pos) => {
                self.adj[a].remove(pos);
                let pos = self.adj[b].binary_search(&a).unwrap();
                self.adj[b].remove(pos);
                self.n_edges -= 1;
                true
            }
        }
    }

    /// Edges as `(j, j')` with `j < j'`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n_edges);
        for (a, nbrs) in self.adj.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }

    pub fn is_subgraph_of(&self, other: &UndirectedGraph) -> bool {
        self.n_vertices() == other.n_vertices() && self.edges().iter().all(|&(a, b)| other.has_edge(a, b))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.adj.len() {
            return Err(Error::Index { index: v, len: self.adj.len() });
        }
        Ok(())
    }

    /// Shortest-path hop counts from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Result<Vec<Option<usize>>> {
        self.check_vertex(source)?;
        Ok(self.bfs(source, usize::MAX))
    }

    fn bfs(&self, source: usize, radius: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.adj.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            if du == radius {
                continue;
            }
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// All vertices other than `source` within `radius` hops, ascending.
pub fn bfs_within(graph: &UndirectedGraph, source: usize, radius: usize) -> Result<Vec<usize>> {
    graph.check_vertex(source)?;
    if radius == 0 {
        return Ok(Vec::new());
    }
    let dist = graph.bfs(source, radius);
    Ok(dist.iter().enumerate().filter(|&(v, d)| v != source && d.is_some()).map(|(v, _)| v).collect())
}

/// Shortest-distance bucket used for distance-stratified reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DistanceClass {
    One,
    Two,
    Three,
    Four,
    FiveOrMore,
    Unreachable,
}

impl DistanceClass {
    pub const ALL: [DistanceClass; 6] = [
        DistanceClass::One,
        DistanceClass::Two,
        DistanceClass::Three,
        DistanceClass::Four,
        DistanceClass::FiveOrMore,
        DistanceClass::Unreachable,
    ];

    pub fn from_distance(d: Option<usize>) -> Self {
        match d {
            Some(1) => DistanceClass::One,
            Some(2) => DistanceClass::Two,
            Some(3) => DistanceClass::Three,
            Some(4) => DistanceClass::Four,
            Some(d) if d >= 5 => DistanceClass::FiveOrMore,
            Some(_) => panic!("distance class of a vertex to itself"),
            None => DistanceClass::Unreachable,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            DistanceClass::One => "1",
            DistanceClass::Two => "2",
            DistanceClass::Three => "3",
            DistanceClass::Four => "4",
            DistanceClass::FiveOrMore => ">=5",
            DistanceClass::Unreachable => "inf",
        }
    }
}

/// Distance class in `graph` of every edge of `pair_source`.
pub fn graph_distances(
    graph: &UndirectedGraph,
    pair_source: &UndirectedGraph,
) -> Result<BTreeMap<(usize, usize), DistanceClass>> {
    if graph.n_vertices() != pair_source.n_vertices() {
        return Err(Error::Shape(format!(
            "graphs have {} and {} vertices",
            graph.n_vertices(),
            pair_source.n_vertices()
        )));
    }
    let mut out = BTreeMap::new();
    let mut current: Option<(usize, Vec<Option<usize>>)> = None;
    for (a, b) in pair_source.edges() {
        if current.as_ref().map(|c| c.0) != Some(a) {
            current = Some((a, graph.bfs(a, usize::MAX)));
        }
        let dist = &current.as_ref().unwrap().1;
        out.insert((a, b), DistanceClass::from_distance(dist[b]));
    }
    Ok(out)
}

/// All-pairs distance classes as a dense `n × n` matrix (diagonal unused).
pub fn distance_class_matrix(graph: &UndirectedGraph) -> Vec<Vec<DistanceClass>> {
    (0..graph.n_vertices())
        .map(|s| {
            graph
                .bfs(s, usize::MAX)
                .into_iter()
                .enumerate()
                .map(|(v, d)| if v == s { DistanceClass::One } else { DistanceClass::from_distance(d) })
                .collect()
        })
        .collect()
}

/// Number of ordered vertex pairs in each distance class.
pub fn ordered_pair_class_counts(graph: &UndirectedGraph) -> [u64; 6] {
    let mut counts = [0u64; 6];
    for s in 0..graph.n_vertices() {
        for (v, d) in graph.bfs(s, usize::MAX).into_iter().enumerate() {
            if v != s {
                counts[DistanceClass::from_distance(d).index()] += 1;
            }
        }
    }
    counts
}
