//! Closed-form Frechet functions for the Hamming distance on G(n, P), and
//! the closed-form estimators: thresholding the (population or sample) mean
//! adjacency matrix at 1/2, and the majority rule over a graph sample.
//!
//! Conventions at the boundary:
//! - population thresholding is strict (an entry exactly at 1/2 yields no
//!   edge);
//! - the sample median includes an edge on a tie (count >= N/2) while the
//!   sample mean excludes it (count > N/2). The two differ only on exact
//!   ties, which cannot occur for odd N.

use crate::error::{Error, Result};
use crate::gnp::{GraphSample, ProbabilityMatrix};
use crate::graph::AdjacencyMatrix;

/// Dense pair-pair correlation storage is refused above this vertex count.
pub const MAX_CORRELATION_N: usize = 128;

/// Which Frechet functional an estimate minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrechetKind {
    PopulationMedian,
    PopulationMean,
    SampleMedian,
    SampleMean,
}

impl FrechetKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FrechetKind::PopulationMedian => "population-median",
            FrechetKind::PopulationMean => "population-mean",
            FrechetKind::SampleMedian => "sample-median",
            FrechetKind::SampleMean => "sample-mean",
        }
    }
}

/// How an estimate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorMethod {
    ClosedFormThreshold,
    MajorityRule,
    Exhaustive,
}

impl EstimatorMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatorMethod::ClosedFormThreshold => "closed-form-threshold",
            EstimatorMethod::MajorityRule => "majority-rule",
            EstimatorMethod::Exhaustive => "exhaustive",
        }
    }
}

/// A minimizer of a Frechet functional together with the attained value.
///
/// When the minimizer set has several elements (entries exactly at 1/2, or
/// sample ties at N/2) the single graph following the threshold convention
/// is returned and `non_unique` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct FrechetEstimate {
    pub graph: AdjacencyMatrix,
    pub objective: f64,
    pub kind: FrechetKind,
    pub method: EstimatorMethod,
    pub non_unique: bool,
}

impl FrechetEstimate {
    /// JSON form: {n, kind, method, objective, edges, non_unique}.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.graph.n(),
            "kind": self.kind.as_str(),
            "method": self.method.as_str(),
            "objective": self.objective,
            "edges": self
                .graph
                .edges()
                .map(|e| [e.i(), e.j()])
                .collect::<Vec<_>>(),
            "non_unique": self.non_unique,
        })
    }
}

/// Per-pair sample means and pair-pair sample correlations of a graph
/// sample, kept as integer accumulators so every derived quantity is an
/// exact rational over N (or N^2).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleStatistics {
    n: usize,
    sample_size: u64,
    edge_counts: Vec<u64>,
    // row-major m x m; diagonal equals edge_counts since a^2 = a
    pair_counts: Vec<u64>,
}

impl SampleStatistics {
    pub fn from_sample(sample: &GraphSample) -> Result<Self> {
        let n = sample.n();
        if n > MAX_CORRELATION_N {
            return Err(Error::MemoryGuard {
                n,
                max_n: MAX_CORRELATION_N,
            });
        }
        let m = sample.graphs()[0].pair_count();
        let mut edge_counts = vec![0u64; m];
        let mut pair_counts = vec![0u64; m * m];
        let mut present = Vec::with_capacity(m);
        for g in sample.graphs() {
            present.clear();
            for t in 0..m {
                if g.bit(t) {
                    present.push(t);
                    edge_counts[t] += 1;
                }
            }
            for &x in &present {
                for &y in &present {
                    pair_counts[x * m + y] += 1;
                }
            }
        }
        Ok(SampleStatistics {
            n,
            sample_size: sample.len() as u64,
            edge_counts,
            pair_counts,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sample size N.
    pub fn sample_size(&self) -> u64 {
        self.sample_size
    }

    pub fn pair_count(&self) -> usize {
        self.edge_counts.len()
    }

    /// Number of sample graphs containing the pair at linear position t.
    pub fn edge_count(&self, t: usize) -> u64 {
        self.edge_counts[t]
    }

    pub fn edge_counts(&self) -> &[u64] {
        &self.edge_counts
    }

    /// Number of sample graphs containing both pairs.
    pub fn joint_count(&self, t: usize, u: usize) -> u64 {
        self.pair_counts[t * self.pair_count() + u]
    }

    /// Sample mean of the edge indicator at t.
    pub fn mean(&self, t: usize) -> f64 {
        self.edge_counts[t] as f64 / self.sample_size as f64
    }

    /// Sample correlation of the indicators at t and u.
    pub fn correlation(&self, t: usize, u: usize) -> f64 {
        self.joint_count(t, u) as f64 / self.sample_size as f64
    }

    /// The sample mean adjacency matrix as a probability matrix, suitable
    /// for [`threshold_graph`].
    pub fn mean_matrix(&self) -> ProbabilityMatrix {
        let means = (0..self.pair_count()).map(|t| self.mean(t)).collect();
        ProbabilityMatrix::from_entries(self.n, means).expect("means lie in [0, 1]")
    }
}

fn check_dims(b: &AdjacencyMatrix, n: usize) -> Result<()> {
    if b.n() != n {
        return Err(Error::DimensionMismatch {
            left: b.n(),
            right: n,
        });
    }
    Ok(())
}

/// Population Frechet function of the median, F_1(B) = E[d_H(A, B)]:
/// sum over edges of B of (1 - 2 p_ij), plus the sum of all p_ij.
pub fn expected_distance(b: &AdjacencyMatrix, p: &ProbabilityMatrix) -> Result<f64> {
    check_dims(b, p.n())?;
    let mut edge_term = 0.0;
    let mut total = 0.0;
    for (t, &q) in p.entries().iter().enumerate() {
        total += q;
        if b.bit(t) {
            edge_term += 1.0 - 2.0 * q;
        }
    }
    Ok(edge_term + total)
}

/// Population Frechet function of the mean, F_2(B) = E[d_H^2(A, B)]:
/// the square of F_1's linear part plus the total Bernoulli variance
/// sum of p_ij (1 - p_ij).
pub fn expected_squared_distance(b: &AdjacencyMatrix, p: &ProbabilityMatrix) -> Result<f64> {
    check_dims(b, p.n())?;
    let mut edge_term = 0.0;
    let mut total = 0.0;
    let mut variance = 0.0;
    for (t, &q) in p.entries().iter().enumerate() {
        total += q;
        variance += q * (1.0 - q);
        if b.bit(t) {
            edge_term += 1.0 - 2.0 * q;
        }
    }
    let linear = edge_term + total;
    Ok(linear * linear + variance)
}

/// Thresholds a probability-valued matrix: edge iff entry > t, strictly.
pub fn threshold_graph(values: &ProbabilityMatrix, t: f64) -> AdjacencyMatrix {
    let mut g = AdjacencyMatrix::new(values.n());
    for (idx, &v) in values.entries().iter().enumerate() {
        if v > t {
            g.set_bit(idx, true);
        }
    }
    g
}

/// Population Frechet mean graph: edge iff p_ij > 1/2. The objective is the
/// attained F_2 value; `non_unique` flags entries lying exactly at 1/2.
pub fn population_frechet_mean(p: &ProbabilityMatrix) -> FrechetEstimate {
    let graph = threshold_graph(p, 0.5);
    let objective = expected_squared_distance(&graph, p).expect("dimensions match");
    FrechetEstimate {
        graph,
        objective,
        kind: FrechetKind::PopulationMean,
        method: EstimatorMethod::ClosedFormThreshold,
        non_unique: p.entries().iter().any(|&v| v == 0.5),
    }
}

/// Population Frechet median graph: the same threshold graph as the mean,
/// with the attained F_1 value as objective.
pub fn population_frechet_median(p: &ProbabilityMatrix) -> FrechetEstimate {
    let graph = threshold_graph(p, 0.5);
    let objective = expected_distance(&graph, p).expect("dimensions match");
    FrechetEstimate {
        graph,
        objective,
        kind: FrechetKind::PopulationMedian,
        method: EstimatorMethod::ClosedFormThreshold,
        non_unique: p.entries().iter().any(|&v| v == 0.5),
    }
}

/// Exact numerator of N * F-hat_1(B) given per-pair edge counts: for each
/// edge of B add N - 2 c_t, then add the total count. Always nonnegative.
fn average_distance_numerator(b: &AdjacencyMatrix, counts: &[u64], sample_size: u64) -> i64 {
    let mut acc: i64 = 0;
    for (t, &c) in counts.iter().enumerate() {
        acc += c as i64;
        if b.bit(t) {
            acc += sample_size as i64 - 2 * c as i64;
        }
    }
    debug_assert!(acc >= 0);
    acc
}

/// Sample Frechet function of the median, F-hat_1(B) = (1/N) sum_k
/// d_H(A^(k), B), evaluated in closed form from the sample means. The result
/// is the exact integer numerator divided by N once.
pub fn sample_average_distance(b: &AdjacencyMatrix, stats: &SampleStatistics) -> Result<f64> {
    Ok(sample_average_distance_numerator(b, stats)? as f64 / stats.sample_size as f64)
}

/// Integer numerator of N * F-hat_1(B); exact, for tie-free comparisons.
pub fn sample_average_distance_numerator(
    b: &AdjacencyMatrix,
    stats: &SampleStatistics,
) -> Result<i64> {
    check_dims(b, stats.n)?;
    Ok(average_distance_numerator(
        b,
        &stats.edge_counts,
        stats.sample_size,
    ))
}

/// Sample Frechet function of the mean, F-hat_2(B) = (1/N) sum_k
/// d_H^2(A^(k), B), evaluated in closed form: the squared linear part, the
/// indicator variances, minus the all-pairs mean-product-vs-correlation
/// correction, plus four times the same correction restricted to
/// (edge of B) x (non-edge of B).
pub fn sample_average_squared_distance(
    b: &AdjacencyMatrix,
    stats: &SampleStatistics,
) -> Result<f64> {
    let numerator = sample_average_squared_distance_numerator(b, stats)?;
    let n2 = (stats.sample_size as f64) * (stats.sample_size as f64);
    Ok(numerator as f64 / n2)
}

/// Integer numerator of N^2 * F-hat_2(B); exact, for tie-free comparisons.
pub fn sample_average_squared_distance_numerator(
    b: &AdjacencyMatrix,
    stats: &SampleStatistics,
) -> Result<i128> {
    check_dims(b, stats.n)?;
    let m = stats.pair_count();
    let n = stats.sample_size as i128;
    let counts = &stats.edge_counts;

    // [ sum_{E(B)} (1 - 2 mean) + sum mean ]^2, scaled by N^2
    let linear = average_distance_numerator(b, counts, stats.sample_size) as i128;
    let squared_term = linear * linear;

    // sum mean (1 - mean), scaled by N^2
    let variance_term: i128 = counts.iter().map(|&c| c as i128 * (n - c as i128)).sum();

    // sum over ordered distinct pair-pairs of (mean mean - corr), scaled
    let mut all_pairs_term: i128 = 0;
    // 4 * sum over E(B) x non-E(B) of (mean mean - corr), scaled
    let mut cross_term: i128 = 0;
    for t in 0..m {
        let ct = counts[t] as i128;
        let b_t = b.bit(t);
        for u in 0..m {
            if t == u {
                continue;
            }
            let gap = ct * counts[u] as i128 - n * stats.pair_counts[t * m + u] as i128;
            all_pairs_term += gap;
            if b_t && !b.bit(u) {
                cross_term += 4 * gap;
            }
        }
    }

    Ok(squared_term + variance_term - all_pairs_term + cross_term)
}

fn majority_graph(n: usize, counts: &[u64], sample_size: u64, ties_are_edges: bool) -> AdjacencyMatrix {
    let mut g = AdjacencyMatrix::new(n);
    for (t, &c) in counts.iter().enumerate() {
        let edge = if ties_are_edges {
            2 * c >= sample_size
        } else {
            2 * c > sample_size
        };
        if edge {
            g.set_bit(t, true);
        }
    }
    g
}

/// Sample Frechet median by majority rule: edge iff the pair appears in at
/// least N/2 of the sample graphs (a tie produces an edge). The objective is
/// the attained F-hat_1 value; ties set `non_unique`.
///
/// Needs only per-pair counts, so it runs at any vertex count.
pub fn sample_frechet_median(sample: &GraphSample) -> FrechetEstimate {
    let counts = sample.edge_counts();
    let n_samples = sample.len() as u64;
    let graph = majority_graph(sample.n(), &counts, n_samples, true);
    let numerator = average_distance_numerator(&graph, &counts, n_samples);
    FrechetEstimate {
        graph,
        objective: numerator as f64 / n_samples as f64,
        kind: FrechetKind::SampleMedian,
        method: EstimatorMethod::MajorityRule,
        non_unique: counts.iter().any(|&c| 2 * c == n_samples),
    }
}

/// Sample Frechet mean by majority rule: edge iff the pair appears in more
/// than N/2 of the sample graphs (a tie produces a non-edge). The objective
/// is the attained F-hat_2 value, which needs the pair-pair correlations and
/// is therefore guarded at n <= [`MAX_CORRELATION_N`].
pub fn sample_frechet_mean(sample: &GraphSample) -> Result<FrechetEstimate> {
    let stats = SampleStatistics::from_sample(sample)?;
    let counts = sample.edge_counts();
    let n_samples = sample.len() as u64;
    let graph = majority_graph(sample.n(), &counts, n_samples, false);
    let objective = sample_average_squared_distance(&graph, &stats)?;
    Ok(FrechetEstimate {
        graph,
        objective,
        kind: FrechetKind::SampleMean,
        method: EstimatorMethod::MajorityRule,
        non_unique: counts.iter().any(|&c| 2 * c == n_samples),
    })
}
