//! Finitely supported probability measures and their Cauchy transforms.

use crate::cplx::Cplx;
use crate::error::{Error, Result};
use crate::precision::Precision;
use rug::Float;

/// A probability measure with finitely many real atoms.
///
/// Invariants: positions strictly increasing, weights positive, total mass 1
/// (within a few ulps).
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    prec: Precision,
    atoms: Vec<(Float, Float)>,
}

impl DiscreteMeasure {
    /// Build a measure from `(position, weight)` atoms, enforcing the type
    /// invariants. Weights must sum to 1 within `4*eps`.
    pub fn new(prec: Precision, atoms: Vec<(Float, Float)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput {
                what: "measure".into(),
                reason: "no atoms".into(),
            });
        }
        for (i, (t, w)) in atoms.iter().enumerate() {
            if !t.is_finite() || !w.is_finite() {
                return Err(Error::NonFinite {
                    context: format!("measure atom {i}"),
                });
            }
            if *w <= 0 {
                return Err(Error::InvalidInput {
                    what: "measure".into(),
                    reason: format!("atom {i} has non-positive weight"),
                });
            }
            if i > 0 && atoms[i - 1].0 >= *t {
                return Err(Error::InvalidInput {
                    what: "measure".into(),
                    reason: format!("atom positions not strictly increasing at index {i}"),
                });
            }
        }
        let mut total = prec.real(0.0);
        for (_, w) in &atoms {
            total += w;
        }
        let defect = (total - 1u8).abs();
        if defect > prec.ulps(4.0) {
            return Err(Error::InvalidInput {
                what: "measure".into(),
                reason: format!("weights sum to 1 {:+e}", defect.to_f64()),
            });
        }
        Ok(Self { prec, atoms })
    }

    /// Build from f64 atoms, rescaling the weights to unit mass. Intended for
    /// config-file input where weights carry decimal roundoff.
    pub fn from_f64_normalized(prec: Precision, atoms: &[(f64, f64)]) -> Result<Self> {
        let mut lifted: Vec<(Float, Float)> = atoms
            .iter()
            .map(|&(t, w)| (prec.real(t), prec.real(w)))
            .collect();
        let mut total = prec.real(0.0);
        for (_, w) in &lifted {
            total += w;
        }
        if !(total > 0) {
            return Err(Error::InvalidInput {
                what: "measure".into(),
                reason: "total weight not positive".into(),
            });
        }
        for (_, w) in lifted.iter_mut() {
            *w /= &total;
        }
        fixup_unit_mass(&prec, &mut lifted);
        Self::new(prec, lifted)
    }

    /// The unit point mass at `t`.
    pub fn point_mass(prec: Precision, t: f64) -> Self {
        Self {
            atoms: vec![(prec.real(t), prec.real(1.0))],
            prec,
        }
    }

    pub fn prec(&self) -> &Precision {
        &self.prec
    }

    pub fn atoms(&self) -> &[(Float, Float)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// phi(lambda) = sum_k w_k / (t_k - lambda).
    ///
    /// Defined off the real axis and on the real axis away from the atoms;
    /// errors with `PoleProximity` if `lambda` collides with an atom.
    pub fn cauchy_transform(&self, lam: &Cplx) -> Result<Cplx> {
        let wp = lam.prec().max(self.prec.bits());
        let geo = self.prec.geo_tol();
        let mut acc = Cplx::new(Float::with_val(wp, 0u8), Float::with_val(wp, 0u8));
        for (t, w) in &self.atoms {
            let dt = Cplx::from_real(t.clone()) - lam;
            let guard = Float::with_val(wp, t.clone().abs() + 1u8) * &geo;
            if dt.abs() <= guard {
                return Err(Error::PoleProximity {
                    point: format!("{:?}", lam),
                    pole: format!("{:e}", t.to_f64()),
                });
            }
            acc = acc + Cplx::from_real(w.clone()) / dt;
        }
        if !acc.is_finite() {
            return Err(Error::NonFinite {
                context: "cauchy_transform".into(),
            });
        }
        Ok(acc)
    }

    /// Moment s_n = sum_k w_k t_k^n; s_0 = 1.
    pub fn moment(&self, n: u32) -> Float {
        use rug::ops::Pow;
        let mut acc = self.prec.real(0.0);
        for (t, w) in &self.atoms {
            acc += Float::with_val(self.prec.bits(), t.pow(n)) * w;
        }
        acc
    }
}

/// Nudge one weight so the weights sum to 1 as exactly as the precision
/// allows (used after renormalization).
///
/// The residual is measured in extended precision (the sum of n
/// target-width values is exact there) and folded into the smallest
/// weight, whose ulp is the finest available; downstream identities
/// amplify the true mass defect by several orders of magnitude, so the
/// float-sum-looks-like-1 level is not good enough.
pub(crate) fn fixup_unit_mass(prec: &Precision, atoms: &mut [(Float, Float)]) {
    let wide = prec.bits() + 64 + 64 - atoms.len().leading_zeros();
    for _ in 0..3 {
        let mut total = Float::with_val(wide, 0u8);
        for (_, w) in atoms.iter() {
            total += w;
        }
        let gap = Float::with_val(wide, 1u8) - total;
        if gap.is_zero() {
            break;
        }
        if let Some((_, w)) = atoms
            .iter_mut()
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        {
            let bumped = Float::with_val(wide, &*w + &gap);
            *w = prec.round(&bumped);
        }
    }
}
