use crate::data_model::UndirectedGraph;
use crate::error::{Error, Result};

/// `side × side` four-neighbor lattice; vertex `(r, c)` is `r * side + c`.
pub fn make_grid(side: usize) -> Result<UndirectedGraph> {
    if side < 2 {
        return Err(Error::InvalidSize(format!("grid side must be at least 2, got {side}")));
    }
    let mut edges = Vec::with_capacity(2 * side * (side - 1));
    for r in 0..side {
        for c in 0..side {
            let v = r * side + c;
            if c + 1 < side {
                edges.push((v, v + 1));
            }
            if r + 1 < side {
                edges.push((v, v + side));
            }
        }
    }
    UndirectedGraph::from_edges(side * side, edges)
}

/// Chain of hubs, each owning `leaves_per_hub` further vertices.
///
/// Hub `h` is vertex `h * (leaves_per_hub + 1)` and owns the next `leaves_per_hub` indices.
/// For every hub except the last, its highest owned vertex is a connector that also links
/// to the next hub, so consecutive hubs are two hops apart and the whole graph is a tree
/// with `d = n_hubs * (leaves_per_hub + 1)` vertices. With 7 owned vertices per hub the
/// first hub has degree 7 and all others degree 8. A single hub is a star.
pub fn make_hub(n_hubs: usize, leaves_per_hub: usize) -> Result<UndirectedGraph> {
    if n_hubs < 1 || leaves_per_hub < 1 {
        return Err(Error::InvalidSize(format!(
            "hub graph needs at least one hub and one leaf per hub, got {n_hubs} and {leaves_per_hub}"
        )));
    }
    let block = leaves_per_hub + 1;
    let d = n_hubs * block;
    let mut edges = Vec::with_capacity(d - 1);
    for h in 0..n_hubs {
        let hub = h * block;
        for k in 1..=leaves_per_hub {
            edges.push((hub, hub + k));
        }
        if h + 1 < n_hubs {
            edges.push((hub + leaves_per_hub, hub + block));
        }
    }
    UndirectedGraph::from_edges(d, edges)
}

/// Grid with `d` vertices; `d` must be a perfect square.
pub fn grid_with_vertices(d: usize) -> Result<UndirectedGraph> {
    let side = (d as f64).sqrt().round() as usize;
    if side * side != d {
        return Err(Error::InvalidSize(format!("grid needs a square vertex count, got {d}")));
    }
    make_grid(side)
}

/// Hub graph with `d` vertices; `d` must be a multiple of `leaves_per_hub + 1`.
pub fn hub_with_vertices(d: usize, leaves_per_hub: usize) -> Result<UndirectedGraph> {
    let block = leaves_per_hub + 1;
    if leaves_per_hub == 0 || d == 0 || !d.is_multiple_of(block) {
        return Err(Error::InvalidSize(format!("hub graph needs d divisible by {block}, got {d}")));
    }
    make_hub(d / block, leaves_per_hub)
}
