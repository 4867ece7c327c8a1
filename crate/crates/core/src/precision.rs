//! Working-precision context.
//!
//! All arithmetic in this crate is parameterized by a single precision
//! context: the number of significand bits plus the derived tolerances used
//! for geometric comparisons and degeneration detection. The context is a
//! per-computation parameter, not a per-value one; every scalar produced
//! under a context carries its significand width.

use crate::error::{Error, Result};
use rug::Float;

/// Minimum supported significand width (an f64 significand).
pub const MIN_BITS: u32 = 53;

/// Default significand width. The Schur recursion loses accuracy roughly
/// linearly in depth, so the default leaves ample headroom over f64.
pub const DEFAULT_BITS: u32 = 128;

/// Precision context: significand width and derived tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    bits: u32,
    /// Relative degeneration threshold for Schur steps (b^2 below this is
    /// treated as rational termination).
    deg_tol: f64,
    /// Multiplier on the unit roundoff for geometric comparisons.
    geo_tol_ulps: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Self::new(DEFAULT_BITS).expect("default bits are valid")
    }
}

impl Precision {
    /// Context with `bits` significand bits and default tolerances.
    pub fn new(bits: u32) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::InvalidInput {
                what: "precision".into(),
                reason: format!("significand_bits {bits} < minimum {MIN_BITS}"),
            });
        }
        Ok(Self {
            bits,
            deg_tol: 1e-30,
            geo_tol_ulps: 1e3,
        })
    }

    /// Override the degeneration threshold (must be positive).
    pub fn with_deg_tol(mut self, deg_tol: f64) -> Result<Self> {
        if !(deg_tol > 0.0) {
            return Err(Error::InvalidInput {
                what: "precision".into(),
                reason: format!("deg_tol {deg_tol} must be positive"),
            });
        }
        self.deg_tol = deg_tol;
        Ok(self)
    }

    /// Override the geometric tolerance multiplier (must be positive).
    pub fn with_geo_tol_ulps(mut self, ulps: f64) -> Result<Self> {
        if !(ulps > 0.0) {
            return Err(Error::InvalidInput {
                what: "precision".into(),
                reason: format!("geo_tol multiplier {ulps} must be positive"),
            });
        }
        self.geo_tol_ulps = ulps;
        Ok(self)
    }

    /// Significand width in bits.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Unit roundoff 2^(1-bits).
    pub fn eps(&self) -> Float {
        Float::with_val(self.bits, 1u8) >> (self.bits - 1)
    }

    /// Unit roundoff as f64 (underflows to 0 beyond ~1000 bits; use only
    /// where a coarse scale is needed).
    pub fn eps_f64(&self) -> f64 {
        2f64.powi(1 - self.bits as i32)
    }

    /// Degeneration threshold for b^2 (relative).
    pub fn deg_tol(&self) -> f64 {
        self.deg_tol
    }

    /// Geometric comparison tolerance, `geo_tol_ulps * eps`.
    pub fn geo_tol(&self) -> Float {
        self.eps() * Float::with_val(self.bits, self.geo_tol_ulps)
    }

    /// Tolerance `k * eps` at this precision.
    pub fn ulps(&self, k: f64) -> Float {
        self.eps() * Float::with_val(self.bits, k)
    }

    /// A real scalar at this precision.
    pub fn real(&self, v: f64) -> Float {
        Float::with_val(self.bits, v)
    }

    /// Derived context with extra guard bits for internal stages whose
    /// roundoff compounds with depth (the Schur recursion loses about
    /// 7 bits per level on well-behaved data).
    pub fn guarded(&self, depth: usize) -> Self {
        let guard = 32 + 8 * depth as u32;
        Self {
            bits: self.bits + guard.min(512),
            deg_tol: self.deg_tol,
            geo_tol_ulps: self.geo_tol_ulps,
        }
    }

    /// Round a scalar to this context's width.
    pub fn round(&self, v: &Float) -> Float {
        Float::with_val(self.bits, v)
    }

    /// Decimal digits sufficient to round-trip a scalar of this width.
    pub fn decimal_digits(&self) -> usize {
        (self.bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_narrow_significand() {
        assert!(Precision::new(52).is_err());
        assert!(Precision::new(53).is_ok());
    }

    #[test]
    fn eps_matches_f64_at_53_bits() {
        let p = Precision::new(53).unwrap();
        assert_eq!(p.eps().to_f64(), f64::EPSILON);
    }

    #[test]
    fn tolerances_positive() {
        let p = Precision::default();
        assert!(p.geo_tol() > 0);
        assert!(p.deg_tol() > 0.0);
        assert!(p.eps() > 0);
    }

    #[test]
    fn guard_grows_with_depth() {
        let p = Precision::default();
        assert!(p.guarded(12).bits() > p.guarded(4).bits());
        assert!(p.guarded(0).bits() > p.bits());
    }
}
