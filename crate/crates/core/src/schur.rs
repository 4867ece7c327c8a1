//! The modified multipoint Schur step and its iteration.
//!
//! One step extracts `(a1, a2, b^2)` from the value of a Herglotz function
//! at a single node `z` in the upper half plane:
//!
//! ```text
//!   a2*z - a1 = -1/phi(z),        b^2 = a2 - 1,
//! ```
//!
//! and transforms the function into its tail
//!
//! ```text
//!   phi_1(lambda) = -[1/phi(lambda) + a2*lambda - a1]
//!                   / (b^2 * (lambda - z)(lambda - conj z)).
//! ```
//!
//! Iterating over a node sequence builds the full coefficient chain, from
//! either a measure (tails evaluated by recursive descent to the base
//! Cauchy transform) or from a finite value table (tails propagated through
//! the same fractional-linear substitution, no integrals involved).
//!
//! Tails are lazy closures over the base evaluator; the transformed measure
//! is never materialized. Because each step divides by differences of
//! near-equal transformed values, the recursion loses accuracy roughly
//! linearly in depth; chain builders therefore carry guard bits internally
//! (about 8 per level) and round the finished coefficients to the target
//! precision.

use crate::cplx::Cplx;
use crate::error::{Error, Result};
use crate::herglotz::{validate_nodes, HerglotzFn, InterpolationProblem, R0Evaluator, ZeroEvaluator};
use crate::measure::DiscreteMeasure;
use crate::precision::Precision;
use rug::Float;
use std::sync::Arc;

/// Coefficients extracted by one Schur step at node `z`.
#[derive(Debug, Clone)]
pub struct SchurParameters {
    /// Step index in the chain.
    pub level: usize,
    /// Interpolation node (upper half plane).
    pub z: Cplx,
    pub a1: Float,
    pub a2: Float,
    /// b^2 = a2 - 1 (zero at a terminal step).
    pub b2: Float,
    /// b = sqrt(a2 - 1).
    pub b: Float,
}

/// How a chain ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Termination {
    /// More steps would be possible with more data/depth.
    Open,
    /// b^2 fell below the degeneration threshold at `level`: the underlying
    /// function is rational and the chain is complete.
    RationalTerminated { level: usize },
}

/// Non-fatal observations made while building a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainWarning {
    /// Requested depth meets or exceeds the atom count, so termination
    /// before the requested depth is guaranteed.
    DepthExceedsSupport { depth: usize, atoms: usize },
}

/// Tail function after the last completed step.
#[derive(Clone)]
pub enum ChainTail {
    /// Analytic tail (measure-backed chains).
    Function(R0Evaluator),
    /// Identically zero (rationally terminated chains).
    Zero,
    /// Not available (values-only chains carry no function beyond the data).
    Unavailable,
}

impl std::fmt::Debug for ChainTail {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChainTail::Function(_) => write!(f, "Function(..)"),
            ChainTail::Zero => write!(f, "Zero"),
            ChainTail::Unavailable => write!(f, "Unavailable"),
        }
    }
}

/// A completed run of Schur steps.
#[derive(Debug, Clone)]
pub struct SchurChain {
    prec: Precision,
    steps: Vec<SchurParameters>,
    tail: ChainTail,
    termination: Termination,
    warnings: Vec<ChainWarning>,
}

impl SchurChain {
    pub fn prec(&self) -> &Precision {
        &self.prec
    }

    pub fn steps(&self) -> &[SchurParameters] {
        &self.steps
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn termination(&self) -> &Termination {
        &self.termination
    }

    pub fn is_terminated(&self) -> bool {
        matches!(self.termination, Termination::RationalTerminated { .. })
    }

    pub fn warnings(&self) -> &[ChainWarning] {
        &self.warnings
    }

    /// Evaluator for the current tail, if one exists.
    pub fn tail_evaluator(&self) -> Option<R0Evaluator> {
        match &self.tail {
            ChainTail::Function(f) => Some(f.clone()),
            ChainTail::Zero => Some(Arc::new(ZeroEvaluator)),
            ChainTail::Unavailable => None,
        }
    }
}

/// Solve one Schur step from the value `phi_z = phi(z)`.
///
/// If `phi_zbar` is supplied it must equal `conj(phi_z)` within `32*eps`;
/// the full 2x2 system is then solved and the imaginary residues of the
/// coefficients (zero for symmetrized data) are checked against `1e2*eps`
/// before being dropped.
///
/// Returns `(a1, a2, b2)` with `b2 = a2 - 1` clamped to zero inside the
/// degeneration band (rational termination signal).
pub fn schur_step(
    prec: &Precision,
    phi_z: &Cplx,
    phi_zbar: Option<&Cplx>,
    z: &Cplx,
) -> Result<(Float, Float, Float)> {
    if !(z.im().clone() > 0) {
        return Err(Error::InvalidInput {
            what: "schur step".into(),
            reason: "node not in the open upper half plane".into(),
        });
    }
    if !phi_z.is_finite() || phi_z.is_zero() {
        return Err(Error::NotHerglotzData {
            reason: "phi(z) is zero or non-finite".into(),
        });
    }
    let scale = Float::with_val(phi_z.prec(), phi_z.abs().max(&prec.real(1.0)));
    let rhs = -phi_z.recip();

    let (a1, a2) = if let Some(pzb) = phi_zbar {
        let defect = (pzb - phi_z.conj()).abs();
        let tol = prec.ulps(32.0) * &scale;
        if defect > tol {
            return Err(Error::AsymmetricData {
                defect: format!("{:e}", defect.to_f64()),
                tol: format!("{:e}", tol.to_f64()),
            });
        }
        let rhs_bar = -pzb.recip();
        let a2c = (&rhs - &rhs_bar) / (z - &z.conj());
        let a1c = a2c.clone() * z - &rhs;
        let res_tol = prec.ulps(1e2);
        for (name, v) in [("a1", &a1c), ("a2", &a2c)] {
            let bound = (v.abs().max(&prec.real(1.0))) * res_tol.clone();
            if v.im().clone().abs() > bound {
                return Err(Error::AsymmetricData {
                    defect: format!("{name} imaginary residue {:e}", v.im().to_f64()),
                    tol: format!("{:e}", bound.to_f64()),
                });
            }
        }
        (a1c.re().clone(), a2c.re().clone())
    } else {
        // symmetrized closed form: a2 = Im(-1/phi)/Im z, a1 = a2 Re z - Re(-1/phi)
        let a2 = Float::with_val(rhs.prec(), rhs.im() / z.im());
        let a1 = Float::with_val(rhs.prec(), &a2 * z.re()) - rhs.re();
        (a1, a2)
    };

    if !(a2.clone() > 0) {
        return Err(Error::NotHerglotzData {
            reason: format!("a2 = {:e} not positive", a2.to_f64()),
        });
    }
    let mut b2 = a2.clone() - 1u8;
    let band = Float::with_val(a2.prec(), &a2 * prec.real(prec.deg_tol()));
    if b2 <= -band.clone() {
        return Err(Error::NotHerglotzData {
            reason: format!("a2 = {:e} below 1: value data leaves the class", a2.to_f64()),
        });
    }
    if b2 <= band {
        b2 = Float::with_val(b2.prec(), 0u8);
    }
    Ok((a1, a2, b2))
}

/// `(a1, a2)` from the direct quadrature quotients
/// `a1 = (sum w t/|t-z|^2) / |phi(z)|^2`, `a2 = (sum w/|t-z|^2) / |phi(z)|^2`.
///
/// Level-0 cross-check for [`schur_step`]; the two must agree within
/// `1e2*eps` relative.
pub fn schur_coeffs_via_integrals(
    measure: &DiscreteMeasure,
    z: &Cplx,
) -> Result<(Float, Float)> {
    if !(z.im().clone() > 0) {
        return Err(Error::InvalidInput {
            what: "schur integrals".into(),
            reason: "node not in the open upper half plane".into(),
        });
    }
    let bits = z.prec().max(measure.prec().bits());
    let mut num1 = Float::with_val(bits, 0u8);
    let mut num2 = Float::with_val(bits, 0u8);
    for (t, w) in measure.atoms() {
        let d = Cplx::from_real(t.clone()) - z;
        let r2 = d.norm_sqr();
        num1 += Float::with_val(bits, t * w) / &r2;
        num2 += Float::with_val(bits, w / &r2);
    }
    let den = measure.cauchy_transform(z)?.norm_sqr();
    Ok((num1 / &den, num2 / den))
}

/// Lazy Schur tail: evaluates `phi_1` by recursive descent through `base`.
pub struct SchurTailEval {
    prec: Precision,
    base: R0Evaluator,
    z: Cplx,
    a1: Float,
    a2: Float,
    b2: Float,
    level: usize,
}

impl HerglotzFn for SchurTailEval {
    fn eval(&self, lam: &Cplx) -> Result<Cplx> {
        let guard = (self.z.abs() + 1u8) * self.prec.geo_tol();
        for pole in [&self.z, &self.z.conj()] {
            if lam.dist(pole) <= guard {
                return Err(Error::PoleProximity {
                    point: format!("{:?}", lam),
                    pole: format!("{:?}", pole),
                });
            }
        }
        let v = self.base.eval(lam)?;
        if v.is_zero() {
            return Err(Error::NotHerglotzData {
                reason: format!("inner value vanished at level {}", self.level),
            });
        }
        let lin = lam.scale(&self.a2) - Cplx::from_real(self.a1.clone());
        let den = (lam - &self.z) * (lam - &self.z.conj());
        let val = (-(v.recip() + lin) / den).unscale(&self.b2);
        if !val.is_finite() {
            return Err(Error::NonFinite {
                context: format!("schur tail level {}", self.level),
            });
        }
        Ok(val)
    }
}

/// Wrap `phi` into its Schur tail for the given step parameters.
///
/// Fails with `DegenerateTail` when `b^2` is inside the degeneration band
/// (the tail is identically zero there).
pub fn schur_tail(
    prec: &Precision,
    phi: R0Evaluator,
    params: &SchurParameters,
) -> Result<R0Evaluator> {
    let band = Float::with_val(params.a2.prec(), &params.a2 * prec.real(prec.deg_tol()));
    if params.b2 <= band {
        return Err(Error::DegenerateTail {
            level: params.level,
            b2: format!("{:e}", params.b2.to_f64()),
        });
    }
    Ok(Arc::new(SchurTailEval {
        prec: *prec,
        base: phi,
        z: params.z.clone(),
        a1: params.a1.clone(),
        a2: params.a2.clone(),
        b2: params.b2.clone(),
        level: params.level,
    }))
}

fn round_params(prec: &Precision, level: usize, z: &Cplx, a1: &Float, a2: &Float, b2: &Float) -> SchurParameters {
    let b = b2.clone().sqrt();
    SchurParameters {
        level,
        z: z.rounded(prec),
        a1: prec.round(a1),
        a2: prec.round(a2),
        b2: prec.round(b2),
        b: prec.round(&b),
    }
}

/// Build a chain from a measure by iterating step + tail, evaluating each
/// tail at its node by recursive descent to the base Cauchy transform.
///
/// Terminates early with `RationalTerminated` when `b^2` degenerates; for
/// an n-atom measure this happens at level <= n-1.
pub fn build_chain_from_measure(
    measure: &DiscreteMeasure,
    points: &[Cplx],
    depth: usize,
) -> Result<SchurChain> {
    let prec = *measure.prec();
    if depth == 0 {
        return Err(Error::InvalidInput {
            what: "chain depth".into(),
            reason: "depth must be at least 1".into(),
        });
    }
    if points.len() < depth {
        return Err(Error::InvalidInput {
            what: "chain depth".into(),
            reason: format!("depth {depth} exceeds node count {}", points.len()),
        });
    }
    validate_nodes(&prec, points)?;
    let mut warnings = Vec::new();
    if depth >= measure.len() {
        warnings.push(ChainWarning::DepthExceedsSupport {
            depth,
            atoms: measure.len(),
        });
    }

    let gp = prec.guarded(depth);
    let mut phi: R0Evaluator = Arc::new(measure.clone());
    let mut steps = Vec::with_capacity(depth);
    let mut termination = Termination::Open;
    let mut tail = ChainTail::Function(phi.clone());

    for (k, z) in points.iter().enumerate().take(depth) {
        let zg = Cplx::new(
            Float::with_val(gp.bits(), z.re()),
            Float::with_val(gp.bits(), z.im()),
        );
        let v = phi.eval(&zg)?;
        if !(v.im().clone() > 0) {
            return Err(Error::NotHerglotzData {
                reason: format!("tail value at level {k} left the upper half plane"),
            });
        }
        let (a1, a2, b2) = schur_step(&gp, &v, None, &zg)?;
        steps.push(round_params(&prec, k, z, &a1, &a2, &b2));
        if b2.is_zero() {
            termination = Termination::RationalTerminated { level: k };
            tail = ChainTail::Zero;
            break;
        }
        let guard_params = SchurParameters {
            level: k,
            z: zg,
            a1: a1.clone(),
            a2: a2.clone(),
            b2: b2.clone(),
            b: b2.clone().sqrt(),
        };
        phi = schur_tail(&gp, phi, &guard_params)?;
        tail = ChainTail::Function(phi.clone());
    }

    Ok(SchurChain {
        prec,
        steps,
        tail,
        termination,
        warnings,
    })
}

/// Build a chain from raw interpolation data, propagating the finite value
/// table through the fractional-linear substitutions. `b^2 = a2 - 1` makes
/// the propagation integral-free; on data consistent with a measure-backed
/// function, the coefficients agree with [`build_chain_from_measure`].
pub fn build_chain_from_values(
    problem: &InterpolationProblem,
    depth: usize,
) -> Result<SchurChain> {
    let prec = *problem.prec();
    if depth == 0 || depth > problem.len() {
        return Err(Error::InvalidInput {
            what: "chain depth".into(),
            reason: format!(
                "depth {depth} not in 1..={} (number of data points)",
                problem.len()
            ),
        });
    }
    let gp = prec.guarded(depth);
    let lift = |c: &Cplx| {
        Cplx::new(
            Float::with_val(gp.bits(), c.re()),
            Float::with_val(gp.bits(), c.im()),
        )
    };
    let zs: Vec<Cplx> = problem.points().iter().map(&lift).collect();
    let mut vals: Vec<Cplx> = problem.values().iter().map(&lift).collect();
    let geo = gp.geo_tol();

    let mut steps = Vec::with_capacity(depth);
    let mut termination = Termination::Open;

    for k in 0..depth {
        let (a1, a2, b2) = schur_step(&gp, &vals[k], None, &zs[k])?;
        steps.push(round_params(&prec, k, &problem.points()[k], &a1, &a2, &b2));
        if b2.is_zero() {
            termination = Termination::RationalTerminated { level: k };
            break;
        }
        let zk = zs[k].clone();
        let zkc = zk.conj();
        let lin1 = Float::with_val(gp.bits(), &a1);
        for j in (k + 1)..depth {
            let lin = zs[j].scale(&a2) - Cplx::from_real(lin1.clone());
            let den = (&zs[j] - &zk) * (&zs[j] - &zkc);
            let v = (-(vals[j].recip() + lin) / den).unscale(&b2);
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    context: format!("value propagation level {k} node {j}"),
                });
            }
            let allowance = (v.abs().max(&gp.real(1.0))) * geo.clone();
            if v.im().clone() < -allowance {
                return Err(Error::NotHerglotzData {
                    reason: format!(
                        "propagated value at node {j} left the upper half plane at level {k}"
                    ),
                });
            }
            vals[j] = v;
        }
    }

    let tail = if matches!(termination, Termination::RationalTerminated { .. }) {
        ChainTail::Zero
    } else {
        ChainTail::Unavailable
    };
    Ok(SchurChain {
        prec,
        steps,
        tail,
        termination,
        warnings: Vec::new(),
    })
}
