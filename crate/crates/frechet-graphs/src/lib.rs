//! Frechet means and medians of inhomogeneous Erdos-Renyi random graphs
//! under the Hamming distance.
//!
//! The crate has two halves that deliberately mirror each other:
//!
//! - closed forms: the population and sample Frechet functions evaluated
//!   from the entries of P (or the sample statistics) alone, and the
//!   threshold / majority-rule estimators built on them ([`frechet`]);
//! - ground truth: the same functions evaluated from their definitions by
//!   exhaustive enumeration over all 2^(n(n-1)/2) graphs ([`oracle`]).
//!
//! [`graph`] holds the bitset graph representation and the Hamming metric,
//! [`gnp`] the G(n, P) measure and seeded samplers, and [`experiments`] the
//! sharp-threshold sweep and concentration harnesses.

pub mod error;
pub mod experiments;
pub mod frechet;
pub mod gnp;
pub mod graph;
pub mod oracle;

pub use error::{Error, Result};
pub use frechet::{
    expected_distance, expected_squared_distance, population_frechet_mean,
    population_frechet_median, sample_average_distance, sample_average_squared_distance,
    sample_frechet_mean, sample_frechet_median, threshold_graph, EstimatorMethod, FrechetEstimate,
    FrechetKind, SampleStatistics,
};
pub use gnp::{sample_graphs, BetaConfig, GraphSample, ProbabilityMatrix};
pub use graph::{
    enumerate_all_graphs, hamming_distance, squared_hamming_decomposed, AdjacencyMatrix, PairIndex,
};
pub use oracle::{oracle_population, oracle_sample, DistanceExponent, OracleResult};
