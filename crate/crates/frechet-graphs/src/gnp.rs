//! The inhomogeneous Erdos-Renyi probability space G(n, P): exact measure
//! evaluation, seeded sampling, and beta-random probability matrices.
//!
//! Sampling uses ChaCha8 with one stream per graph index, so a (P, N, seed)
//! triple reproduces the identical sample bit-for-bit no matter how the
//! graphs are partitioned across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{pair_count, AdjacencyMatrix, PairIndex};

/// Symmetric matrix of edge probabilities with zero diagonal; only the
/// strict upper triangle is stored, in canonical pair order.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMatrix {
    n: usize,
    p: Vec<f64>,
}

impl ProbabilityMatrix {
    /// Every pair gets the same probability.
    pub fn constant(n: usize, p: f64) -> Result<Self> {
        Self::from_entries(n, vec![p; pair_count(n)])
    }

    /// Builds from entries listed in canonical pair order; must have length
    /// n(n-1)/2 with every value in [0, 1].
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        assert!(n >= 1, "vertex count must be positive");
        if entries.len() != pair_count(n) {
            return Err(Error::Parse(format!(
                "expected {} probabilities for n = {n}, got {}",
                pair_count(n),
                entries.len()
            )));
        }
        for (t, &v) in entries.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                let pair = PairIndex::from_linear(t, n);
                return Err(Error::InvalidProbability {
                    i: pair.i(),
                    j: pair.j(),
                    value: v,
                });
            }
        }
        Ok(ProbabilityMatrix { n, p: entries })
    }

    /// Draws every upper-triangle entry independently from Beta(nu, omega),
    /// via the ratio of two Gamma draws (valid for all positive shapes).
    pub fn random_beta(n: usize, cfg: &BetaConfig, seed: u64) -> Self {
        assert!(n >= 1, "vertex count must be positive");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gamma_nu = Gamma::new(cfg.nu, 1.0).expect("shape validated by BetaConfig");
        let gamma_omega = Gamma::new(cfg.omega, 1.0).expect("shape validated by BetaConfig");
        let p = (0..pair_count(n))
            .map(|_| loop {
                let x: f64 = gamma_nu.sample(&mut rng);
                let y: f64 = gamma_omega.sample(&mut rng);
                let s = x + y;
                if s > 0.0 && s.is_finite() {
                    break x / s;
                }
            })
            .collect();
        ProbabilityMatrix { n, p }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pair_count(&self) -> usize {
        self.p.len()
    }

    /// Probability at canonical linear position t.
    #[inline]
    pub fn entry(&self, t: usize) -> f64 {
        self.p[t]
    }

    /// Probability for the pair (i, j), 1-based, i != j.
    pub fn entry_for(&self, i: usize, j: usize) -> Result<f64> {
        let pair = PairIndex::from_vertices(i.min(j), i.max(j), self.n)?;
        Ok(self.p[pair.linear()])
    }

    pub fn entries(&self) -> &[f64] {
        &self.p
    }

    /// Average of the upper-triangle entries.
    pub fn mean_entry(&self) -> f64 {
        if self.p.is_empty() {
            return 0.0;
        }
        self.p.iter().sum::<f64>() / self.p.len() as f64
    }

    /// Probability mass the measure assigns to `a`:
    /// prod over pairs of p^a (1-p)^(1-a).
    ///
    /// Accumulated in log space so that n in the hundreds does not
    /// underflow; a zero factor short-circuits to 0 and entries at 0 or 1
    /// follow the 0^0 = 1 convention.
    pub fn probability_of(&self, a: &AdjacencyMatrix) -> Result<f64> {
        if a.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: a.n(),
                right: self.n,
            });
        }
        let mut log_mass = 0.0f64;
        for (t, &p) in self.p.iter().enumerate() {
            let factor = if a.bit(t) { p } else { 1.0 - p };
            if factor == 0.0 {
                return Ok(0.0);
            }
            log_mass += factor.ln();
        }
        Ok(log_mass.exp())
    }

    /// Writes the probability-matrix fixture format: first line `n`, then
    /// one line `i,j,p` per pair in canonical order, p with 17 significant
    /// digits so the value round-trips exactly.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (t, &p) in self.p.iter().enumerate() {
            let pair = PairIndex::from_linear(t, self.n);
            out.push_str(&format!("{},{},{:.16e}\n", pair.i(), pair.j(), p));
        }
        out
    }

    /// Parses the format written by [`Self::to_csv`]. All m pairs must be
    /// present, in canonical order.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty probability matrix file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad vertex count: {e}")))?;
        if n == 0 {
            return Err(Error::Parse("vertex count must be positive".into()));
        }
        let m = pair_count(n);
        let mut entries = Vec::with_capacity(m);
        for (t, line) in lines.enumerate() {
            if t >= m {
                return Err(Error::Parse(format!("more than {m} pair lines for n = {n}")));
            }
            let mut fields = line.split(',');
            let (i, j, p) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
                (Some(i), Some(j), Some(p), None) => (i, j, p),
                _ => return Err(Error::Parse(format!("bad pair line: {line:?}"))),
            };
            let i: usize = i
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad vertex in {line:?}: {e}")))?;
            let j: usize = j
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad vertex in {line:?}: {e}")))?;
            let expected = PairIndex::from_linear(t, n);
            if (i, j) != (expected.i(), expected.j()) {
                return Err(Error::Parse(format!(
                    "pair line {t} must be ({},{}), got ({i},{j})",
                    expected.i(),
                    expected.j()
                )));
            }
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad probability in {line:?}: {e}")))?;
            entries.push(p);
        }
        Self::from_entries(n, entries)
    }
}

/// Shape parameters of the beta distribution used to randomize P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaConfig {
    nu: f64,
    omega: f64,
}

impl BetaConfig {
    pub fn new(nu: f64, omega: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite() && omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidBetaShape { nu, omega });
        }
        Ok(BetaConfig { nu, omega })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// nu / (nu + omega).
    pub fn mean(&self) -> f64 {
        self.nu / (self.nu + self.omega)
    }

    /// nu omega / ((nu + omega)^2 (nu + omega + 1)).
    pub fn variance(&self) -> f64 {
        let s = self.nu + self.omega;
        self.nu * self.omega / (s * s * (s + 1.0))
    }
}

/// An ordered sample of N graphs on a common vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSample {
    graphs: Vec<AdjacencyMatrix>,
    seed: Option<u64>,
}

impl GraphSample {
    pub fn new(graphs: Vec<AdjacencyMatrix>) -> Result<Self> {
        Self::build(graphs, None)
    }

    pub fn with_seed(graphs: Vec<AdjacencyMatrix>, seed: u64) -> Result<Self> {
        Self::build(graphs, Some(seed))
    }

    fn build(graphs: Vec<AdjacencyMatrix>, seed: Option<u64>) -> Result<Self> {
        let first = graphs.first().ok_or(Error::EmptySample)?;
        let n = first.n();
        if let Some(bad) = graphs.iter().find(|g| g.n() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: bad.n(),
            });
        }
        Ok(GraphSample { graphs, seed })
    }

    pub fn n(&self) -> usize {
        self.graphs[0].n()
    }

    /// Sample size N.
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        false // N >= 1 by construction
    }

    pub fn graphs(&self) -> &[AdjacencyMatrix] {
        &self.graphs
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Per-pair edge counts over the sample, in canonical order.
    pub fn edge_counts(&self) -> Vec<u64> {
        let m = self.graphs[0].pair_count();
        let mut counts = vec![0u64; m];
        for g in &self.graphs {
            for t in 0..m {
                counts[t] += g.bit(t) as u64;
            }
        }
        counts
    }
}

fn sample_one(p: &ProbabilityMatrix, seed: u64, stream: u64) -> AdjacencyMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut g = AdjacencyMatrix::new(p.n());
    for t in 0..p.pair_count() {
        if rng.random::<f64>() < p.entry(t) {
            g.set_bit(t, true);
        }
    }
    g
}

/// Draws `count` independent graphs from G(n, P). Each pair of each graph is
/// an independent Bernoulli(p_ij); graph k is generated on ChaCha stream k.
pub fn sample_graphs(p: &ProbabilityMatrix, count: usize, seed: u64) -> Result<GraphSample> {
    if count == 0 {
        return Err(Error::EmptySample);
    }
    let graphs: Vec<AdjacencyMatrix> = (0..count as u64)
        .into_par_iter()
        .map(|k| sample_one(p, seed, k))
        .collect();
    GraphSample::with_seed(graphs, seed)
}

/// Per-pair edge counts of the sample that [`sample_graphs`] would produce
/// for the same (P, count, seed), without keeping the graphs. Lets the sweep
/// run the majority rule at vertex counts where storing N graphs is wasteful.
pub fn sample_edge_counts(p: &ProbabilityMatrix, count: usize, seed: u64) -> Result<Vec<u64>> {
    if count == 0 {
        return Err(Error::EmptySample);
    }
    let m = p.pair_count();
    let counts = (0..count as u64)
        .into_par_iter()
        .fold(
            || vec![0u64; m],
            |mut acc, k| {
                let g = sample_one(p, seed, k);
                for (t, slot) in acc.iter_mut().enumerate() {
                    *slot += g.bit(t) as u64;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; m],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_all_graphs;

    #[test]
    fn all_zero_measure_concentrates_on_empty_graph() {
        let p = ProbabilityMatrix::constant(4, 0.0).unwrap();
        let empty = AdjacencyMatrix::new(4);
        assert_eq!(p.probability_of(&empty).unwrap(), 1.0);
        let mut one_edge = AdjacencyMatrix::new(4);
        one_edge.set_edge(1, 2);
        assert_eq!(p.probability_of(&one_edge).unwrap(), 0.0);
    }

    #[test]
    fn uniform_half_measure_is_uniform() {
        let p = ProbabilityMatrix::constant(3, 0.5).unwrap();
        for g in enumerate_all_graphs(3).unwrap() {
            assert!((p.probability_of(&g).unwrap() - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn seeded_measure_sums_to_one_n4() {
        let cfg = BetaConfig::new(2.0, 2.0).unwrap();
        let p = ProbabilityMatrix::random_beta(4, &cfg, 7);
        let total: f64 = enumerate_all_graphs(4)
            .unwrap()
            .map(|g| p.probability_of(&g).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-12, "total = {total}");
    }

    #[test]
    fn measure_marginals_recover_entries_n4() {
        let cfg = BetaConfig::new(1.5, 3.0).unwrap();
        let p = ProbabilityMatrix::random_beta(4, &cfg, 11);
        for t in 0..p.pair_count() {
            let marginal: f64 = enumerate_all_graphs(4)
                .unwrap()
                .map(|g| (g.bit(t) as u64 as f64) * p.probability_of(&g).unwrap())
                .sum();
            assert!(
                (marginal - p.entry(t)).abs() < 1e-10,
                "pair {t}: {marginal} vs {}",
                p.entry(t)
            );
        }
    }

    #[test]
    fn probability_of_rejects_dimension_mismatch() {
        let p = ProbabilityMatrix::constant(4, 0.5).unwrap();
        let g = AdjacencyMatrix::new(5);
        assert!(p.probability_of(&g).is_err());
    }

    #[test]
    fn entries_outside_unit_interval_are_rejected() {
        assert!(ProbabilityMatrix::constant(3, 1.2).is_err());
        assert!(ProbabilityMatrix::constant(3, -0.1).is_err());
        let err = ProbabilityMatrix::from_entries(3, vec![0.2, 2.0, 0.3]).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidProbability {
                i: 1,
                j: 3,
                value: 2.0
            }
        );
    }

    #[test]
    fn beta_config_rejects_bad_shapes() {
        assert!(BetaConfig::new(0.0, 1.0).is_err());
        assert!(BetaConfig::new(1.0, -2.0).is_err());
        assert!(BetaConfig::new(f64::NAN, 1.0).is_err());
        let cfg = BetaConfig::new(32.0, 32.0).unwrap();
        assert!((cfg.mean() - 0.5).abs() < 1e-15);
        assert!((cfg.variance() - 0.25 / 65.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_samplers_are_deterministic_graphs() {
        let ones = ProbabilityMatrix::constant(5, 1.0).unwrap();
        let sample = sample_graphs(&ones, 4, 99).unwrap();
        assert!(sample
            .graphs()
            .iter()
            .all(|g| *g == AdjacencyMatrix::complete(5)));

        let zeros = ProbabilityMatrix::constant(5, 0.0).unwrap();
        let sample = sample_graphs(&zeros, 4, 99).unwrap();
        assert!(sample.graphs().iter().all(|g| *g == AdjacencyMatrix::new(5)));
    }

    #[test]
    fn sampling_is_reproducible_bit_for_bit() {
        let cfg = BetaConfig::new(2.0, 5.0).unwrap();
        let p = ProbabilityMatrix::random_beta(10, &cfg, 3);
        let a = sample_graphs(&p, 50, 42).unwrap();
        let b = sample_graphs(&p, 50, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_graphs(&p, 50, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn edge_counts_match_materialized_sample() {
        let cfg = BetaConfig::new(3.0, 3.0).unwrap();
        let p = ProbabilityMatrix::random_beta(8, &cfg, 17);
        let sample = sample_graphs(&p, 64, 5).unwrap();
        assert_eq!(sample.edge_counts(), sample_edge_counts(&p, 64, 5).unwrap());
    }

    #[test]
    fn empirical_frequency_tracks_probability() {
        // binomial 4-sigma band: sigma = sqrt(0.3 * 0.7 / 1e4) ~ 0.0046
        let p = ProbabilityMatrix::constant(16, 0.3).unwrap();
        let counts = sample_edge_counts(&p, 10_000, 123).unwrap();
        for (t, &c) in counts.iter().enumerate() {
            let freq = c as f64 / 10_000.0;
            assert!(
                (freq - 0.3).abs() <= 0.02,
                "pair {t}: frequency {freq} strays from 0.3"
            );
        }
    }

    #[test]
    fn beta_matrix_mean_matches_shape_ratio() {
        let balanced = BetaConfig::new(32.0, 32.0).unwrap();
        let p = ProbabilityMatrix::random_beta(512, &balanced, 2024);
        assert!((p.mean_entry() - 0.5).abs() < 0.01);

        let skewed = BetaConfig::new(8.0, 56.0).unwrap();
        let p = ProbabilityMatrix::random_beta(128, &skewed, 2025);
        assert!((p.mean_entry() - 0.125).abs() < 0.01);

        // nu close to nu + omega pushes the mean toward 1
        let extreme = BetaConfig::new(63.5, 0.5).unwrap();
        let p = ProbabilityMatrix::random_beta(64, &extreme, 2026);
        assert!(p.mean_entry() > 0.95);
    }

    #[test]
    fn csv_round_trip_preserves_entries_exactly() {
        let cfg = BetaConfig::new(1.0, 4.0).unwrap();
        let p = ProbabilityMatrix::random_beta(6, &cfg, 31);
        let text = p.to_csv();
        let back = ProbabilityMatrix::from_csv(&text).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn csv_rejects_malformed_input() {
        assert!(ProbabilityMatrix::from_csv("").is_err());
        // wrong pair order
        assert!(ProbabilityMatrix::from_csv("3\n1,3,0.5\n1,2,0.5\n2,3,0.5\n").is_err());
        // missing lines
        assert!(ProbabilityMatrix::from_csv("3\n1,2,0.5\n").is_err());
        // probability out of range
        assert!(ProbabilityMatrix::from_csv("2\n1,2,1.5\n").is_err());
    }

    #[test]
    fn empty_sample_is_rejected() {
        let p = ProbabilityMatrix::constant(4, 0.5).unwrap();
        assert_eq!(sample_graphs(&p, 0, 1).unwrap_err(), Error::EmptySample);
        assert_eq!(GraphSample::new(vec![]).unwrap_err(), Error::EmptySample);
    }
}
