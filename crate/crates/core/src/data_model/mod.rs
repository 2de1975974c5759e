//! Binary datasets, configuration counting and the shared graph type.

mod contingency;
mod dataset;
mod graph;
pub mod io;

pub use contingency::{
    count_configurations, grouped_counts, validate_blanket, CellCounts, ContingencyTable, MAX_TABLE_BLANKET,
    STREAMING_THRESHOLD,
};
pub use dataset::{BinaryDataset, DatasetBuilder};
pub use graph::{
    bfs_within, distance_class_matrix, graph_distances, ordered_pair_class_counts, DistanceClass, UndirectedGraph,
};
pub use io::{read_dataset, read_graph, write_dataset, write_graph, DataFormat};
