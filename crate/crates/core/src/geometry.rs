//! Eigenvalue-free regions: disjoint interval unions and the named
//! symmetric gap geometries.

use crate::error::{Error, Result};
use crate::orthopoly::WeightSpec;

/// Ordered union of pairwise disjoint open intervals; endpoints may be
/// infinite for the Hermite weight.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(lo, hi) in &intervals {
            if !(lo < hi) {
                return Err(Error::domain("IntervalSet", format!("interval ({lo}, {hi}) not increasing")));
            }
            if lo.is_nan() || hi.is_nan() {
                return Err(Error::domain("IntervalSet", "NaN endpoint"));
            }
        }
        for w in intervals.windows(2) {
            if !(w[0].1 <= w[1].0) {
                return Err(Error::domain(
                    "IntervalSet",
                    format!("intervals ({}, {}) and ({}, {}) overlap or are unsorted", w[0].0, w[0].1, w[1].0, w[1].1),
                ));
            }
        }
        Ok(IntervalSet { intervals })
    }

    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo < x && x < hi)
    }

    /// Clip every interval to [lo, hi], dropping the ones that vanish.
    pub fn clipped(&self, lo: f64, hi: f64) -> IntervalSet {
        let intervals = self
            .intervals
            .iter()
            .filter_map(|&(a, b)| {
                let a = a.max(lo);
                let b = b.min(hi);
                (a < b).then_some((a, b))
            })
            .collect();
        IntervalSet { intervals }
    }
}

/// The gap geometries of interest plus an escape hatch for explicit regions.
#[derive(Debug, Clone, PartialEq)]
pub enum GapGeometry {
    /// Hermite: no eigenvalue of modulus larger than `s`, i.e. the region
    /// (-inf, -s) u (s, inf) is eigenvalue free.
    ExteriorSym { s: f64 },
    /// Jacobi: (-1, -s) u (s, 1) eigenvalue free.
    JacobiExteriorSym { s: f64 },
    /// (-s, s) eigenvalue free.
    InteriorSym { s: f64 },
    Explicit(IntervalSet),
}

impl GapGeometry {
    pub fn validate_for(&self, weight: &WeightSpec) -> Result<()> {
        match (self, weight) {
            (GapGeometry::ExteriorSym { s }, WeightSpec::Hermite) => {
                if *s > 0.0 {
                    Ok(())
                } else {
                    Err(Error::domain("GapGeometry", format!("exterior gap parameter s = {s} must be positive")))
                }
            }
            (GapGeometry::ExteriorSym { .. }, _) => {
                Err(Error::domain("GapGeometry", "ExteriorSym applies to the Hermite weight; use JacobiExteriorSym"))
            }
            (GapGeometry::JacobiExteriorSym { s }, WeightSpec::Jacobi { .. }) => {
                if *s > 0.0 && *s < 1.0 {
                    Ok(())
                } else {
                    Err(Error::domain("GapGeometry", format!("Jacobi exterior needs 0 < s < 1, got {s}")))
                }
            }
            (GapGeometry::JacobiExteriorSym { .. }, _) => {
                Err(Error::domain("GapGeometry", "JacobiExteriorSym applies to the Jacobi weight"))
            }
            (GapGeometry::InteriorSym { s }, WeightSpec::Jacobi { .. }) => {
                if *s >= 0.0 && *s < 1.0 {
                    Ok(())
                } else {
                    Err(Error::domain("GapGeometry", format!("Jacobi interior needs 0 <= s < 1, got {s}")))
                }
            }
            (GapGeometry::InteriorSym { s }, WeightSpec::Hermite) => {
                if *s >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::domain("GapGeometry", format!("interior gap parameter s = {s} must be nonnegative")))
                }
            }
            (GapGeometry::Explicit(_), _) => Ok(()),
        }
    }

    /// The concrete eigenvalue-free region.
    pub fn region(&self) -> IntervalSet {
        match self {
            GapGeometry::ExteriorSym { s } => {
                IntervalSet { intervals: vec![(f64::NEG_INFINITY, -s), (*s, f64::INFINITY)] }
            }
            GapGeometry::JacobiExteriorSym { s } => IntervalSet { intervals: vec![(-1.0, -s), (*s, 1.0)] },
            GapGeometry::InteriorSym { s } => {
                if *s == 0.0 {
                    IntervalSet::empty()
                } else {
                    IntervalSet { intervals: vec![(-*s, *s)] }
                }
            }
            GapGeometry::Explicit(set) => set.clone(),
        }
    }

    /// Symmetric about the origin (required by the factorization identity).
    pub fn is_symmetric(&self) -> bool {
        match self {
            GapGeometry::ExteriorSym { .. } | GapGeometry::JacobiExteriorSym { .. } | GapGeometry::InteriorSym { .. } => true,
            GapGeometry::Explicit(set) => {
                let iv = set.intervals();
                iv.iter().all(|&(lo, hi)| {
                    iv.iter().any(|&(lo2, hi2)| (lo2 + hi).abs() <= 1e-12 * hi.abs().max(1.0) && (hi2 + lo).abs() <= 1e-12 * lo.abs().max(1.0))
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_set_validation() {
        assert!(IntervalSet::new(vec![(0.0, 1.0), (2.0, 3.0)]).is_ok());
        assert!(IntervalSet::new(vec![(1.0, 0.5)]).is_err());
        assert!(IntervalSet::new(vec![(0.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(IntervalSet::new(vec![(2.0, 3.0), (0.0, 1.0)]).is_err());
    }

    #[test]
    fn geometry_weight_compatibility() {
        let hermite = WeightSpec::Hermite;
        let jacobi = WeightSpec::Jacobi { alpha: 1.0, beta: 1.0 };
        assert!(GapGeometry::ExteriorSym { s: 1.0 }.validate_for(&hermite).is_ok());
        assert!(GapGeometry::ExteriorSym { s: 1.0 }.validate_for(&jacobi).is_err());
        assert!(GapGeometry::JacobiExteriorSym { s: 0.5 }.validate_for(&jacobi).is_ok());
        assert!(GapGeometry::JacobiExteriorSym { s: 1.5 }.validate_for(&jacobi).is_err());
        assert!(GapGeometry::InteriorSym { s: 0.0 }.validate_for(&jacobi).is_ok());
    }

    #[test]
    fn symmetric_explicit_detection() {
        let sym = GapGeometry::Explicit(IntervalSet::new(vec![(-2.0, -1.0), (1.0, 2.0)]).unwrap());
        assert!(sym.is_symmetric());
        let asym = GapGeometry::Explicit(IntervalSet::new(vec![(1.0, 2.0)]).unwrap());
        assert!(!asym.is_symmetric());
    }
}
