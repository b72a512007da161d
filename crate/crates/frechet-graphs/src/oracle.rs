//! Ground truth by brute force: Frechet functions evaluated from their
//! definitions over the whole graph space, with every global argmin
//! reported. Exhaustive on purpose — this module is the trust anchor the
//! closed forms are checked against, so it never prunes.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gnp::{GraphSample, ProbabilityMatrix};
use crate::graph::{pair_count, AdjacencyMatrix};

/// Population oracle cap: the double enumeration over S x S costs 4^m.
pub const MAX_POPULATION_ORACLE_N: usize = 5;
/// Sample oracle cap: 2^m candidates times N distances.
pub const MAX_SAMPLE_ORACLE_N: usize = 7;

/// Exponent of the Hamming distance under the Frechet functional:
/// 1 for the median, 2 for the mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceExponent {
    One,
    Two,
}

impl DistanceExponent {
    pub fn from_q(q: u32) -> Option<Self> {
        match q {
            1 => Some(DistanceExponent::One),
            2 => Some(DistanceExponent::Two),
            _ => None,
        }
    }

    pub fn as_u32(&self) -> u32 {
        match self {
            DistanceExponent::One => 1,
            DistanceExponent::Two => 2,
        }
    }

    #[inline]
    fn apply(&self, d: u64) -> u64 {
        match self {
            DistanceExponent::One => d,
            DistanceExponent::Two => d * d,
        }
    }
}

/// Every global minimizer of an exhaustively scanned Frechet function.
#[derive(Debug, Clone)]
pub struct OracleResult {
    /// All argmins, in bitset-integer (lexicographic-smallest-first) order.
    pub minimizers: Vec<AdjacencyMatrix>,
    /// The attained minimum.
    pub objective: f64,
    /// Number of candidate graphs scanned, 2^m.
    pub evaluated: u64,
}

impl OracleResult {
    pub fn is_unique(&self) -> bool {
        self.minimizers.len() == 1
    }

    /// JSON form mirroring a Frechet estimate, plus the scan counters.
    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<Vec<[usize; 2]>> = self
            .minimizers
            .iter()
            .map(|g| g.edges().map(|e| [e.i(), e.j()]).collect())
            .collect();
        serde_json::json!({
            "n": self.minimizers[0].n(),
            "method": "exhaustive",
            "objective": self.objective,
            "minimizer_count": self.minimizers.len(),
            "evaluated": self.evaluated,
            "minimizers": edges,
        })
    }
}

/// Values equal to the scanned minimum within this absolute slack count as
/// minimizers; it absorbs float rounding in the measure-weighted sums.
const POPULATION_TIE_TOLERANCE: f64 = 1e-12;

/// Population Frechet function by full double enumeration: for every
/// candidate B, sums d_H^q(A, B) P(A) over all graphs A. Capped at
/// [`MAX_POPULATION_ORACLE_N`].
pub fn oracle_population(p: &ProbabilityMatrix, q: DistanceExponent) -> Result<OracleResult> {
    let n = p.n();
    if n > MAX_POPULATION_ORACLE_N {
        return Err(Error::Budget {
            what: "population oracle",
            n,
            max_n: MAX_POPULATION_ORACLE_N,
        });
    }
    let m = pair_count(n);
    let space = 1u64 << m;

    let masses: Vec<f64> = (0..space)
        .map(|bits| {
            p.probability_of(&AdjacencyMatrix::from_bits(n, bits))
                .expect("dimensions match")
        })
        .collect();

    let objectives: Vec<f64> = (0..space)
        .into_par_iter()
        .map(|b| {
            let mut acc = 0.0;
            for (a, &mass) in masses.iter().enumerate() {
                let d = (a as u64 ^ b).count_ones() as u64;
                acc += q.apply(d) as f64 * mass;
            }
            acc
        })
        .collect();

    let best = objectives.iter().copied().fold(f64::INFINITY, f64::min);
    let minimizers: Vec<AdjacencyMatrix> = objectives
        .iter()
        .enumerate()
        .filter(|(_, &v)| v <= best + POPULATION_TIE_TOLERANCE)
        .map(|(bits, _)| AdjacencyMatrix::from_bits(n, bits as u64))
        .collect();

    Ok(OracleResult {
        minimizers,
        objective: best,
        evaluated: space,
    })
}

/// Sample Frechet function by full enumeration: for every candidate B, sums
/// d_H^q(A^(k), B) over the sample. Pure integer arithmetic (the objective
/// is scaled by N internally), so argmins are exact. Capped at
/// [`MAX_SAMPLE_ORACLE_N`].
pub fn oracle_sample(sample: &GraphSample, q: DistanceExponent) -> Result<OracleResult> {
    let n = sample.n();
    if n > MAX_SAMPLE_ORACLE_N {
        return Err(Error::Budget {
            what: "sample oracle",
            n,
            max_n: MAX_SAMPLE_ORACLE_N,
        });
    }
    let m = pair_count(n);
    let space = 1u64 << m;
    let sample_bits: Vec<u64> = sample.graphs().iter().map(|g| g.to_bits()).collect();

    let totals: Vec<u64> = (0..space)
        .into_par_iter()
        .map(|b| {
            sample_bits
                .iter()
                .map(|&a| q.apply((a ^ b).count_ones() as u64))
                .sum()
        })
        .collect();

    let best = *totals.iter().min().expect("space is non-empty");
    let minimizers: Vec<AdjacencyMatrix> = totals
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == best)
        .map(|(bits, _)| AdjacencyMatrix::from_bits(n, bits as u64))
        .collect();

    Ok(OracleResult {
        minimizers,
        objective: best as f64 / sample.len() as f64,
        evaluated: space,
    })
}
