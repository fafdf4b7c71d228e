//! Monte Carlo oracle: sample the matrix models behind the Hermite and
//! Jacobi ensembles and estimate gap probabilities empirically.
//!
//! Everything is driven by an explicitly seeded splittable generator so
//! that a fixed seed reproduces the eigenvalue stream bit for bit, across
//! any number of worker threads.

pub mod eigen;
pub mod rng;
pub mod sample;

use crate::error::{Error, Result};
use crate::geometry::GapGeometry;
use crate::orthopoly::WeightSpec;
use rayon::prelude::*;

/// Empirical probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
}

/// One sampled spectrum.
#[derive(Debug, Clone)]
pub struct SpectrumSample {
    /// Sorted ascending.
    pub eigenvalues: Vec<f64>,
    pub weight: WeightSpec,
    pub n: usize,
}

/// Which matrix model to sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ensemble {
    /// Hermitian with independent Gaussian entries.
    Gue { n: usize },
    /// Two-Wishart quotient; requires m1, m2 >= n, giving integer Jacobi
    /// parameters alpha = m1 - n, beta = m2 - n.
    Jue { n: usize, m1: usize, m2: usize },
}

impl Ensemble {
    pub fn n(&self) -> usize {
        match *self {
            Ensemble::Gue { n } => n,
            Ensemble::Jue { n, .. } => n,
        }
    }

    pub fn weight(&self) -> WeightSpec {
        match *self {
            Ensemble::Gue { .. } => WeightSpec::Hermite,
            Ensemble::Jue { n, m1, m2 } => WeightSpec::Jacobi { alpha: (m1 - n) as f64, beta: (m2 - n) as f64 },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Ensemble::Gue { n } if n >= 1 => Ok(()),
            Ensemble::Jue { n, m1, m2 } if n >= 1 && m1 >= n && m2 >= n => Ok(()),
            Ensemble::Gue { .. } => Err(Error::precondition("Ensemble", "N must be positive")),
            Ensemble::Jue { .. } => Err(Error::precondition("Ensemble", "JUE needs M1, M2 >= N >= 1")),
        }
    }

    fn sample(&self, rng: &mut rng::SplitMix64) -> Result<SpectrumSample> {
        match *self {
            Ensemble::Gue { n } => sample::sample_gue_with(n, rng),
            Ensemble::Jue { n, m1, m2 } => sample::sample_jue_with(n, m1, m2, rng),
        }
    }
}

const BATCH: usize = 4096;

/// Fraction of samples whose spectrum avoids the region entirely.
///
/// Work is partitioned into fixed batches with seeds derived from
/// (seed, batch index), so the result is independent of scheduling.
pub fn empirical_gap(ensemble: &Ensemble, geometry: &GapGeometry, n_samples: usize, seed: u64) -> Result<EmpiricalEstimate> {
    ensemble.validate()?;
    geometry.validate_for(&ensemble.weight())?;
    if n_samples < 1000 {
        return Err(Error::precondition("empirical_gap", format!("n_samples = {n_samples} below 1000")));
    }
    let region = geometry.region();
    let batches: Vec<(usize, usize)> = (0..n_samples.div_ceil(BATCH))
        .map(|b| (b, BATCH.min(n_samples - b * BATCH)))
        .collect();
    let hits: Result<Vec<usize>> = batches
        .par_iter()
        .map(|&(index, count)| {
            let mut rng = rng::SplitMix64::derived(seed, index as u64);
            let mut gap_count = 0usize;
            for _ in 0..count {
                let spectrum = ensemble.sample(&mut rng)?;
                if !spectrum.eigenvalues.iter().any(|&x| region.contains(x)) {
                    gap_count += 1;
                }
            }
            Ok(gap_count)
        })
        .collect();
    let total: usize = hits?.iter().sum();
    let p_hat = total as f64 / n_samples as f64;
    let stderr = (p_hat * (1.0 - p_hat) / n_samples as f64).sqrt();
    Ok(EmpiricalEstimate { p_hat, stderr, n_samples, seed })
}

/// Write spectra in the dump format: a header line, then one spectrum per
/// line with comma-separated eigenvalues.
pub fn dump_samples<W: std::io::Write>(
    out: &mut W,
    ensemble: &Ensemble,
    count: usize,
    seed: u64,
) -> Result<()> {
    ensemble.validate()?;
    let label = match *ensemble {
        Ensemble::Gue { .. } => "gue".to_string(),
        Ensemble::Jue { n, m1, m2 } => format!("jue(alpha={},beta={})", m1 - n, m2 - n),
    };
    writeln!(out, "# ensemble={} N={} seed={}", label, ensemble.n(), seed)
        .map_err(|e| Error::domain("dump_samples", e.to_string()))?;
    let mut rng = rng::SplitMix64::derived(seed, 0);
    for _ in 0..count {
        let spectrum = ensemble.sample(&mut rng)?;
        let line = spectrum.eigenvalues.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        writeln!(out, "{line}").map_err(|e| Error::domain("dump_samples", e.to_string()))?;
    }
    Ok(())
}
