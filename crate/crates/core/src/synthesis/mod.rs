//! Benchmark graphs, potentials, and samplers for pairwise binary models.

mod generators;
mod model;
mod sampler;

pub use generators::{grid_with_vertices, hub_with_vertices, make_grid, make_hub};
pub use model::{
    format_model, parse_model, sample_potentials, sample_potentials_with, sample_table_potentials, PairwiseModel,
    PotentialOptions, PotentialScheme,
};
pub use sampler::{exact_joint, gibbs_sample, sample_exact, GibbsConfig, MAX_EXACT_VARS};
