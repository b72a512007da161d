//! Simulation harness: the sharp-threshold sweep over beta-randomized
//! probability matrices, and Monte-Carlo checks of how fast the sample
//! Frechet functions concentrate around their population counterparts.
//!
//! Every cell of every experiment derives its own seed from the master seed
//! and its coordinates, so results do not depend on the parallel schedule.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frechet::{
    expected_squared_distance, sample_average_squared_distance, SampleStatistics,
};
use crate::gnp::{sample_edge_counts, sample_graphs, BetaConfig, ProbabilityMatrix};
use crate::graph::AdjacencyMatrix;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stateless seed derivation: mixes the master seed with cell coordinates.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut acc = splitmix64(master);
    for &p in parts {
        acc = splitmix64(acc ^ splitmix64(p));
    }
    acc
}

/// How the edge count of the estimated mean graph is normalized.
///
/// `Simple` divides by the number of unordered pairs n(n-1)/2, the actual
/// maximum for simple graphs. `Paper` divides by n(n+1)/2 instead,
/// reproducing the printed formula 2|E|/(n(n+1)).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Simple,
    Paper,
}

impl Normalization {
    pub fn as_str(&self) -> &'static str {
        match self {
            Normalization::Simple => "simple",
            Normalization::Paper => "paper",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(Normalization::Simple),
            "paper" => Ok(Normalization::Paper),
            other => Err(Error::InvalidConfig(format!(
                "normalization must be `simple` or `paper`, got {other:?}"
            ))),
        }
    }

    fn denominator(&self, n: usize) -> f64 {
        match self {
            Normalization::Simple => (n * (n - 1) / 2) as f64,
            Normalization::Paper => (n * (n + 1) / 2) as f64,
        }
    }
}

/// Parameters of the sharp-threshold sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n: usize,
    /// Graphs per sample, N.
    pub sample_size: usize,
    /// Beta shape nu per sweep point; omega = total - nu.
    pub nu_values: Vec<f64>,
    /// The fixed nu + omega.
    pub total: f64,
    /// Independent repetitions per sweep point.
    pub realizations: usize,
    pub seed: u64,
    pub normalization: Normalization,
}

impl Default for SweepConfig {
    /// Desk-scale defaults: fast enough for CI while keeping the threshold
    /// shape. The last nu sits just under the total, where the beta mean
    /// approaches 1.
    fn default() -> Self {
        SweepConfig {
            n: 64,
            sample_size: 200,
            nu_values: vec![8.0, 16.0, 24.0, 32.0, 40.0, 48.0, 56.0, 63.5],
            total: 64.0,
            realizations: 16,
            seed: 0,
            normalization: Normalization::Simple,
        }
    }
}

impl SweepConfig {
    /// The published protocol scale: n = 512 vertices, N = 1000 graphs.
    pub fn full_scale() -> Self {
        SweepConfig {
            n: 512,
            sample_size: 1000,
            ..SweepConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!(
                "sweep needs n >= 2, got {}",
                self.n
            )));
        }
        if self.sample_size == 0 {
            return Err(Error::InvalidConfig("sample_size must be >= 1".into()));
        }
        if self.realizations == 0 {
            return Err(Error::InvalidConfig("realizations must be >= 1".into()));
        }
        if self.nu_values.is_empty() {
            return Err(Error::InvalidConfig("nu_values must not be empty".into()));
        }
        if !(self.total > 0.0) || !self.total.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "total must be positive, got {}",
                self.total
            )));
        }
        for &nu in &self.nu_values {
            if !(nu > 0.0 && nu < self.total) {
                return Err(Error::InvalidConfig(format!(
                    "nu must lie strictly inside (0, {}), got {nu}",
                    self.total
                )));
            }
        }
        Ok(())
    }
}

/// One row of the sweep: a nu value with its averaged outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub nu: f64,
    pub omega: f64,
    /// nu / total, the expected edge probability.
    pub mean_edge_prob: f64,
    /// Average of the drawn p_ij across pairs and realizations.
    pub realized_mean_p: f64,
    /// Normalized edge count of the sample Frechet mean graph, averaged
    /// over realizations.
    pub frac_edges: f64,
    /// Sample standard deviation of the fraction across realizations.
    pub stddev: f64,
}

/// Runs the sharp-threshold sweep: per nu and realization, draws a beta
/// probability matrix, samples N graphs, applies the strict majority rule,
/// and records the normalized edge count of the resulting mean graph.
pub fn run_threshold_sweep(cfg: &SweepConfig) -> Result<Vec<SweepResult>> {
    cfg.validate()?;
    let denom = cfg.normalization.denominator(cfg.n);
    let mut rows = Vec::with_capacity(cfg.nu_values.len());
    for (vi, &nu) in cfg.nu_values.iter().enumerate() {
        let beta = BetaConfig::new(nu, cfg.total - nu)?;
        let cells: Vec<(f64, f64)> = (0..cfg.realizations as u64)
            .into_par_iter()
            .map(|r| {
                let p_seed = derive_seed(cfg.seed, &[0, vi as u64, r]);
                let sample_seed = derive_seed(cfg.seed, &[1, vi as u64, r]);
                let p = ProbabilityMatrix::random_beta(cfg.n, &beta, p_seed);
                let counts = sample_edge_counts(&p, cfg.sample_size, sample_seed)
                    .expect("sample_size >= 1");
                // Corollary-style strict majority: edge iff count > N/2.
                let edges = counts
                    .iter()
                    .filter(|&&c| 2 * c > cfg.sample_size as u64)
                    .count();
                (p.mean_entry(), edges as f64 / denom)
            })
            .collect();
        let r = cfg.realizations as f64;
        let realized_mean_p = cells.iter().map(|c| c.0).sum::<f64>() / r;
        let frac_mean = cells.iter().map(|c| c.1).sum::<f64>() / r;
        let stddev = if cfg.realizations > 1 {
            let ss: f64 = cells.iter().map(|c| (c.1 - frac_mean).powi(2)).sum();
            (ss / (r - 1.0)).sqrt()
        } else {
            0.0
        };
        rows.push(SweepResult {
            nu,
            omega: cfg.total - nu,
            mean_edge_prob: nu / cfg.total,
            realized_mean_p,
            frac_edges: frac_mean,
            stddev,
        });
    }
    Ok(rows)
}

/// Fixed sweep CSV schema: nu,omega,mean_p,realized_mean_p,frac_edges,stddev,n,N,seed.
pub fn sweep_to_csv(cfg: &SweepConfig, rows: &[SweepResult]) -> String {
    let mut out = String::from("nu,omega,mean_p,realized_mean_p,frac_edges,stddev,n,N,seed\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{:.6},{:.6},{},{},{}\n",
            row.nu,
            row.omega,
            row.mean_edge_prob,
            row.realized_mean_p,
            row.frac_edges,
            row.stddev,
            cfg.n,
            cfg.sample_size,
            cfg.seed
        ));
    }
    out
}

/// Outcome of the sample-mean concentration check at one sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationReport {
    pub n: usize,
    pub sample_size: usize,
    pub delta: f64,
    /// sqrt(log(n / sqrt(2 delta))), the union-bound constant.
    pub alpha: f64,
    /// Median across trials of max_{i<j} |mean-hat - p_ij|.
    pub max_mean_deviation: f64,
    /// Whether that median stays below alpha / sqrt(N).
    pub bound_satisfied: bool,
    pub trials: usize,
    /// Fraction of trials whose max deviation exceeded alpha / sqrt(N).
    pub violation_rate: f64,
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

/// Measures, per sample size, how far the per-pair sample means stray from
/// P, against the alpha / sqrt(N) Hoeffding-union bound.
pub fn run_concentration_check(
    p: &ProbabilityMatrix,
    sample_sizes: &[usize],
    delta: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<ConcentrationReport>> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    if sample_sizes.is_empty() || sample_sizes.contains(&0) {
        return Err(Error::InvalidConfig(
            "sample sizes must be >= 1 and non-empty".into(),
        ));
    }
    let n = p.n();
    let alpha = (n as f64 / (2.0 * delta).sqrt()).ln().sqrt();
    let mut reports = Vec::with_capacity(sample_sizes.len());
    for (si, &size) in sample_sizes.iter().enumerate() {
        let bound = alpha / (size as f64).sqrt();
        let deviations: Vec<f64> = (0..trials as u64)
            .into_par_iter()
            .map(|trial| {
                let trial_seed = derive_seed(seed, &[2, si as u64, trial]);
                let counts = sample_edge_counts(p, size, trial_seed).expect("size >= 1");
                counts
                    .iter()
                    .zip(p.entries())
                    .map(|(&c, &q)| (c as f64 / size as f64 - q).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        let violations = deviations.iter().filter(|&&d| d > bound).count();
        let max_mean_deviation = median(deviations);
        reports.push(ConcentrationReport {
            n,
            sample_size: size,
            delta,
            alpha,
            max_mean_deviation,
            bound_satisfied: max_mean_deviation <= bound,
            trials,
            violation_rate: violations as f64 / trials as f64,
        });
    }
    Ok(reports)
}

/// Least-squares slope of ln(y) against ln(x). NaN when fewer than two
/// usable points or any y <= 0.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return f64::NAN;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let cov: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let var: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    cov / var
}

/// Decay-rate estimate for the concentration reports: slope of the median
/// max deviation against N on log-log axes.
pub fn concentration_slope(reports: &[ConcentrationReport]) -> f64 {
    let points: Vec<(f64, f64)> = reports
        .iter()
        .map(|r| (r.sample_size as f64, r.max_mean_deviation))
        .collect();
    log_log_slope(&points)
}

pub fn concentration_to_csv(reports: &[ConcentrationReport]) -> String {
    let mut out =
        String::from("n,N,delta,alpha,max_mean_deviation,bound_satisfied,violation_rate,trials\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{:.6},{:.6},{},{:.6},{}\n",
            r.n,
            r.sample_size,
            r.delta,
            r.alpha,
            r.max_mean_deviation,
            r.bound_satisfied,
            r.violation_rate,
            r.trials
        ));
    }
    out
}

/// One sample size of the F-hat_2 concentration experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct F2ConcentrationRow {
    pub sample_size: usize,
    /// Median across trials of |F-hat_2(B) - F_2(B)|.
    pub median_abs_error: f64,
}

/// F-hat_2 concentration outcome across sample sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct F2ConcentrationReport {
    /// The population value F_2(B) the sample functionals are compared to.
    pub reference: f64,
    pub rows: Vec<F2ConcentrationRow>,
    /// Log-log slope of the median error against N.
    pub slope: f64,
}

/// Measures |F-hat_2(B) - F_2(B)| across sample sizes at a fixed candidate
/// graph B. Inherits the dense-correlation guard, so n stays small.
pub fn run_f2_concentration(
    p: &ProbabilityMatrix,
    b: &AdjacencyMatrix,
    sample_sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<F2ConcentrationReport> {
    if b.n() != p.n() {
        return Err(Error::DimensionMismatch {
            left: b.n(),
            right: p.n(),
        });
    }
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    if sample_sizes.is_empty() || sample_sizes.contains(&0) {
        return Err(Error::InvalidConfig(
            "sample sizes must be >= 1 and non-empty".into(),
        ));
    }
    let reference = expected_squared_distance(b, p)?;
    let mut rows = Vec::with_capacity(sample_sizes.len());
    for (si, &size) in sample_sizes.iter().enumerate() {
        let errors: Vec<f64> = (0..trials as u64)
            .into_par_iter()
            .map(|trial| {
                let trial_seed = derive_seed(seed, &[3, si as u64, trial]);
                let sample = sample_graphs(p, size, trial_seed).expect("size >= 1");
                let stats = SampleStatistics::from_sample(&sample)?;
                let sampled = sample_average_squared_distance(b, &stats)?;
                Ok((sampled - reference).abs())
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(F2ConcentrationRow {
            sample_size: size,
            median_abs_error: median(errors),
        });
    }
    let slope = log_log_slope(
        &rows
            .iter()
            .map(|r| (r.sample_size as f64, r.median_abs_error))
            .collect::<Vec<_>>(),
    );
    Ok(F2ConcentrationReport {
        reference,
        rows,
        slope,
    })
}

pub fn f2_concentration_to_csv(p: &ProbabilityMatrix, report: &F2ConcentrationReport) -> String {
    let mut out = String::from("n,N,median_abs_error,reference\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{:.9},{:.9}\n",
            p.n(),
            row.sample_size,
            row.median_abs_error,
            report.reference
        ));
    }
    out
}
