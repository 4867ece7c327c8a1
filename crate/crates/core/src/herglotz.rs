//! Herglotz-function evaluation capability and class validation.

use crate::cplx::Cplx;
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::par;
use crate::precision::Precision;
use rug::Float;
use std::sync::Arc;

/// Evaluation capability `lambda -> phi(lambda)` for `lambda` off the real
/// axis, realized by a closed-form measure sum or by a Schur-tail closure.
///
/// Implementors compute honestly wherever asked; the class properties
/// (symmetry `phi(conj lambda) = conj phi(lambda)`, `Im phi > 0` on the
/// upper half plane) are checked on demand by [`herglotz_audit`], not
/// assumed.
pub trait HerglotzFn: Send + Sync {
    fn eval(&self, lam: &Cplx) -> Result<Cplx>;
}

/// Shared evaluation handle.
pub type R0Evaluator = Arc<dyn HerglotzFn>;

impl HerglotzFn for DiscreteMeasure {
    fn eval(&self, lam: &Cplx) -> Result<Cplx> {
        self.cauchy_transform(lam)
    }
}

/// Adapter turning a plain closure into an evaluator (handy for stubs and
/// reference functions in tests).
pub struct FnEvaluator<F>(pub F);

impl<F> HerglotzFn for FnEvaluator<F>
where
    F: Fn(&Cplx) -> Result<Cplx> + Send + Sync,
{
    fn eval(&self, lam: &Cplx) -> Result<Cplx> {
        (self.0)(lam)
    }
}

/// The zero function, the degenerate member adjoined to the class (the tail
/// of a rationally terminated chain).
pub struct ZeroEvaluator;

impl HerglotzFn for ZeroEvaluator {
    fn eval(&self, lam: &Cplx) -> Result<Cplx> {
        let p = Precision::new(lam.prec().max(crate::precision::MIN_BITS))
            .expect("precision from existing value");
        Ok(Cplx::zero(&p))
    }
}

/// Result of a class audit over a grid.
#[derive(Debug, Clone)]
pub struct AuditReport {
    /// Smallest imaginary part of `f` over the grid.
    pub min_im: Float,
    /// Grid point attaining `min_im`.
    pub min_im_at: Cplx,
    /// Largest `|f(conj lambda) - conj f(lambda)|` over the grid.
    pub symmetry_defect: Float,
    /// True if `min_im <= 0`, i.e. the evaluator left the upper half plane.
    pub violation: bool,
}

/// Audit the Herglotz-class properties of `f` on a grid in the upper half
/// plane: positivity of the imaginary part and conjugate symmetry.
pub fn herglotz_audit(
    prec: &Precision,
    f: &dyn HerglotzFn,
    grid: &[Cplx],
) -> Result<AuditReport> {
    if grid.is_empty() {
        return Err(Error::InvalidInput {
            what: "audit grid".into(),
            reason: "empty".into(),
        });
    }
    let geo = prec.geo_tol();
    for lam in grid {
        if !(lam.im().clone() > geo.clone()) {
            return Err(Error::InvalidInput {
                what: "audit grid".into(),
                reason: format!("point {:?} not strictly in the upper half plane", lam),
            });
        }
    }
    let evals: Vec<Result<(Cplx, Cplx)>> = par::map_ordered(grid, |lam| {
        let up = f.eval(lam)?;
        let down = f.eval(&lam.conj())?;
        Ok((up, down))
    });
    let mut min_im = prec.real(f64::INFINITY);
    let mut min_at = grid[0].clone();
    let mut defect = prec.real(0.0);
    for (lam, pair) in grid.iter().zip(evals) {
        let (up, down) = pair?;
        if !up.is_finite() || !down.is_finite() {
            return Err(Error::NonFinite {
                context: "herglotz_audit".into(),
            });
        }
        if up.im() < &min_im {
            min_im = up.im().clone();
            min_at = lam.clone();
        }
        let d = (down - up.conj()).abs();
        if d > defect {
            defect = d;
        }
    }
    Ok(AuditReport {
        violation: min_im <= 0,
        min_im,
        min_im_at: min_at,
        symmetry_defect: defect,
    })
}

/// Nevanlinna-Pick data: distinct nodes `z_k` in the upper half plane and
/// target values `w_k` in the upper half plane.
#[derive(Debug, Clone)]
pub struct InterpolationProblem {
    prec: Precision,
    points: Vec<Cplx>,
    values: Vec<Cplx>,
}

impl InterpolationProblem {
    pub fn new(prec: Precision, points: Vec<Cplx>, values: Vec<Cplx>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::InvalidInput {
                what: "interpolation problem".into(),
                reason: format!(
                    "{} points but {} values",
                    points.len(),
                    values.len()
                ),
            });
        }
        if points.is_empty() {
            return Err(Error::InvalidInput {
                what: "interpolation problem".into(),
                reason: "no data".into(),
            });
        }
        validate_nodes(&prec, &points)?;
        for (k, w) in values.iter().enumerate() {
            if !w.is_finite() || !(w.im().clone() > 0) {
                return Err(Error::InvalidInput {
                    what: "interpolation problem".into(),
                    reason: format!("value w_{k} not in the upper half plane"),
                });
            }
        }
        Ok(Self {
            prec,
            points,
            values,
        })
    }

    pub fn prec(&self) -> &Precision {
        &self.prec
    }

    pub fn points(&self) -> &[Cplx] {
        &self.points
    }

    pub fn values(&self) -> &[Cplx] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Check that nodes are pairwise distinct points of the open upper half
/// plane (distinctness is relative to the geometric tolerance).
pub fn validate_nodes(prec: &Precision, points: &[Cplx]) -> Result<()> {
    let geo = prec.geo_tol();
    for (k, z) in points.iter().enumerate() {
        if !z.is_finite() || !(z.im().clone() > 0) {
            return Err(Error::InvalidInput {
                what: "interpolation nodes".into(),
                reason: format!("z_{k} not in the open upper half plane"),
            });
        }
        for (l, z2) in points.iter().enumerate().take(k) {
            let guard = (z.abs() + 1u8) * geo.clone();
            if z.dist(z2) <= guard {
                return Err(Error::InvalidInput {
                    what: "interpolation nodes".into(),
                    reason: format!("z_{l} and z_{k} are not distinct"),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn audit_accepts_cauchy_transform() {
        let prec = Precision::default();
        let m = DiscreteMeasure::from_f64_normalized(prec, &[(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        let grid = vec![
            Cplx::i(&prec),
            Cplx::from_f64(&prec, 0.0, 2.0),
            Cplx::from_f64(&prec, 1.0, 1.0),
        ];
        let rep = herglotz_audit(&prec, &m, &grid).unwrap();
        assert!(!rep.violation);
        assert!(rep.min_im > 0);
        assert!(rep.symmetry_defect <= prec.ulps(8.0));
    }

    #[test]
    fn audit_flags_constant_stub() {
        let prec = Precision::default();
        let stub = FnEvaluator(move |lam: &Cplx| {
            let p = Precision::new(lam.prec()).unwrap();
            Ok(Cplx::one(&p))
        });
        let grid = vec![Cplx::i(&prec)];
        let rep = herglotz_audit(&prec, &stub, &grid).unwrap();
        assert!(rep.violation);
    }

    #[test]
    fn audit_minus_one_over_lambda() {
        let prec = Precision::default();
        let f = FnEvaluator(|lam: &Cplx| Ok(-lam.recip()));
        let rep = herglotz_audit(&prec, &f, &[Cplx::i(&prec)]).unwrap();
        // f(i) = i
        assert!((rep.min_im.clone() - 1u8).abs() < prec.ulps(4.0));
        assert!(!rep.violation);
    }

    #[test]
    fn audit_rejects_grid_touching_real_axis() {
        let prec = Precision::default();
        let f = FnEvaluator(|lam: &Cplx| Ok(-lam.recip()));
        let grid = vec![Cplx::from_f64(&prec, 1.0, 0.0)];
        assert!(herglotz_audit(&prec, &f, &grid).is_err());
    }

    #[test]
    fn problem_validation() {
        let prec = Precision::default();
        let zi = Cplx::i(&prec);
        let z2i = Cplx::from_f64(&prec, 0.0, 2.0);
        let wi = Cplx::from_f64(&prec, 0.0, 0.5);
        // duplicate points rejected
        assert!(InterpolationProblem::new(
            prec,
            vec![zi.clone(), zi.clone()],
            vec![wi.clone(), wi.clone()]
        )
        .is_err());
        // value in lower half plane rejected
        assert!(InterpolationProblem::new(
            prec,
            vec![zi.clone(), z2i.clone()],
            vec![wi.clone(), wi.conj()]
        )
        .is_err());
        // well-posed data accepted
        assert!(InterpolationProblem::new(prec, vec![zi, z2i], vec![wi.clone(), wi]).is_ok());
    }
}
