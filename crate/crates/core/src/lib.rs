//! Structure learning for binary pairwise Markov networks.
//!
//! Each variable is scored by a logistic regression on its blanket under an extended BIC.
//! Pairwise screening restricts blanket searches to small graph neighborhoods, and a
//! global hill climb over single-edge toggles assembles the final undirected graph.
//! The [`synthesis`], [`evaluation`] and [`bench`] modules reproduce the grid and hub
//! benchmarks used to measure recovery.

pub mod bench;
pub mod cli;
pub mod data_model;
pub mod error;
pub mod evaluation;
pub mod neighborhoods;
pub mod scoring;
pub mod search;
pub mod synthesis;

pub use error::{Error, Result};
