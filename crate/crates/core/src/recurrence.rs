//! First/second-kind polynomial evaluation, renormalized hats, Pade values
//! along three independent routes, and the algebraic identity residuals
//! (Liouville-Ostrogradsky, Christoffel-Darboux, orthogonality).
//!
//! The polynomials satisfy
//!
//! ```text
//!   u_{j+1} = (a2_j lambda - a1_j) u_j
//!             - b_{j-1}^2 (lambda - z_{j-1})(lambda - conj z_{j-1}) u_{j-1}
//! ```
//!
//! with P: u_0 = 1, u_1 = a2_0 lambda - a1_0 and Q: u_0 = 0, u_1 = +1.
//! The +1 second-kind seed makes the first continued-fraction convergent
//! equal -Q_1/P_1, keeps the Wronskian Q_{n+1}P_n - Q_nP_{n+1} equal to the
//! plain weight product, and maps the upper half plane to itself.
//!
//! Hats are the node-renormalized samples
//! `u_j / (b_0..b_{j-1} (z_0-lambda)..(z_{j-1}-lambda))`; they are computed
//! both by that division and by the renormalized three-term recurrence, and
//! the mutual disagreement is recorded as a health metric.

use crate::cplx::Cplx;
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::par;
use crate::pencil::{assemble, PencilCoefficients};
use crate::precision::Precision;
use rug::Float;

/// Per-lambda samples of the polynomial families.
#[derive(Debug, Clone)]
pub struct EvalRecord {
    pub lambda: Cplx,
    /// P_0..P_j.
    pub p: Vec<Cplx>,
    /// Q_0..Q_j.
    pub q: Vec<Cplx>,
    /// hatP_0..hatP_j (the pi-sample), when hats were requested.
    pub hat_p: Option<Vec<Cplx>>,
    /// hatQ_0..hatQ_j (the xi-sample), when hats were requested.
    pub hat_q: Option<Vec<Cplx>>,
    /// Largest relative disagreement between the division-formula hats and
    /// the renormalized-recurrence hats.
    pub hat_defect: Option<Float>,
}

/// Route selector for [`pade_value`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadeRoute {
    /// -Q_{n+1}/P_{n+1} from the forward recurrence.
    Ratio,
    /// Backward evaluation of the finite continued fraction (the Riccati
    /// recursion for the m-functions).
    ContinuedFraction,
    /// Resolvent entry of the assembled truncation (dense solve).
    Matrix,
}

fn guard_hat_poles(prec: &Precision, coeffs: &PencilCoefficients, lam: &Cplx, j: usize) -> Result<()> {
    let geo = prec.geo_tol();
    for lv in coeffs.levels().iter().take(j) {
        let delta = (lv.z.abs() + 1u8) * geo.clone();
        for pole in [&lv.z, &lv.z.conj()] {
            if lam.dist(pole) <= delta {
                return Err(Error::PoleProximity {
                    point: format!("{:?}", lam),
                    pole: format!("{:?}", pole),
                });
            }
        }
    }
    Ok(())
}

/// Evaluate P_0..P_j and Q_0..Q_j at `lam`; with `hats`, also the
/// renormalized samples (guarded against the interpolation nodes).
pub fn eval_pq(
    coeffs: &PencilCoefficients,
    lam: &Cplx,
    j: usize,
    hats: bool,
) -> Result<EvalRecord> {
    if j > coeffs.len() {
        return Err(Error::InsufficientDepth {
            requested: j,
            needed: j,
            available: coeffs.len(),
        });
    }
    let prec = coeffs.prec();
    let bits = lam.prec().max(prec.bits());
    let one = Cplx::new(Float::with_val(bits, 1u8), Float::with_val(bits, 0u8));
    let zero = Cplx::new(Float::with_val(bits, 0u8), Float::with_val(bits, 0u8));

    let mut p = Vec::with_capacity(j + 1);
    let mut q = Vec::with_capacity(j + 1);
    p.push(one.clone());
    q.push(zero.clone());
    if j >= 1 {
        let lv0 = coeffs.level(0);
        p.push(lam.scale(&lv0.a2) - Cplx::from_real(lv0.a1.clone()));
        q.push(one.clone());
        for k in 1..j {
            let lv = coeffs.level(k);
            let lin = lam.scale(&lv.a2) - Cplx::from_real(lv.a1.clone());
            let w = coeffs.weight(lam, k - 1);
            p.push(&lin * &p[k] - &w * &p[k - 1]);
            q.push(&lin * &q[k] - &w * &q[k - 1]);
        }
    }

    let (hat_p, hat_q, hat_defect) = if hats {
        guard_hat_poles(prec, coeffs, lam, j)?;
        for (k, lv) in coeffs.levels().iter().enumerate().take(j) {
            if !(lv.b.clone() > 0) {
                return Err(Error::DegenerateTail {
                    level: k,
                    b2: "hat renormalization needs positive b".into(),
                });
            }
        }
        // division route
        let mut denom = one.clone();
        let mut hp = vec![p[0].clone()];
        let mut hq = vec![q[0].clone()];
        for k in 1..=j {
            let lv = coeffs.level(k - 1);
            denom = denom * (&lv.z - lam).scale(&lv.b);
            hp.push(&p[k] / &denom);
            hq.push(&q[k] / &denom);
        }
        // renormalized recurrence route, seeded from the division values
        let mut defect = Float::with_val(bits, 0u8);
        if j >= 2 {
            let mut rp = vec![hp[0].clone(), hp[1].clone()];
            let mut rq = vec![hq[0].clone(), hq[1].clone()];
            for k in 1..j {
                let prev_lv = coeffs.level(k - 1);
                let lv = coeffs.level(k);
                // (conj bfrak_{k-1} - lambda dfrak_{k-1})
                let lead = prev_lv.h_off.conj() - lam.scale(&prev_lv.j_off);
                let mid = Cplx::from_real(lv.h_diag.clone()) - lam.scale(&lv.j_diag);
                let trail = &lv.h_off - &lam.scale(&lv.j_off);
                let next_p = -(&lead * &rp[k - 1] + &mid * &rp[k]) / &trail;
                let next_q = -(&lead * &rq[k - 1] + &mid * &rq[k]) / &trail;
                rp.push(next_p);
                rq.push(next_q);
            }
            for k in 0..=j {
                let scale_p = hp[k].abs().max(&rp[k].abs()).max(&Float::with_val(bits, 1e-300f64));
                let dp = hp[k].dist(&rp[k]) / scale_p;
                let scale_q = hq[k].abs().max(&rq[k].abs()).max(&Float::with_val(bits, 1e-300f64));
                let dq = hq[k].dist(&rq[k]) / scale_q;
                defect = defect.max(&dp).max(&dq);
            }
        }
        (Some(hp), Some(hq), Some(defect))
    } else {
        (None, None, None)
    };

    Ok(EvalRecord {
        lambda: lam.clone(),
        p,
        q,
        hat_p,
        hat_q,
        hat_defect,
    })
}

/// The multipoint diagonal Pade value m_{[0,n]}(lambda) along the chosen
/// route. All three routes agree within a small multiple of eps.
pub fn pade_value(
    coeffs: &PencilCoefficients,
    lam: &Cplx,
    n: usize,
    route: PadeRoute,
) -> Result<Cplx> {
    if lam.im().is_zero() {
        return Err(Error::PoleProximity {
            point: format!("{:?}", lam),
            pole: "the real axis (spectrum of the pencil)".into(),
        });
    }
    if coeffs.len() < n + 1 {
        return Err(Error::InsufficientDepth {
            requested: n,
            needed: n + 1,
            available: coeffs.len(),
        });
    }
    match route {
        PadeRoute::Ratio => {
            let rec = eval_pq(coeffs, lam, n + 1, false)?;
            Ok(-(&rec.q[n + 1] / &rec.p[n + 1]))
        }
        PadeRoute::ContinuedFraction => {
            let bits = lam.prec().max(coeffs.prec().bits());
            let mut m = Cplx::new(Float::with_val(bits, 0u8), Float::with_val(bits, 0u8));
            for k in (0..=n).rev() {
                let lv = coeffs.level(k);
                let lin = lam.scale(&lv.a2) - Cplx::from_real(lv.a1.clone());
                let den = lin + coeffs.weight(lam, k) * &m;
                m = -den.recip();
            }
            if !m.is_finite() {
                return Err(Error::NonFinite {
                    context: "continued-fraction pade route".into(),
                });
            }
            Ok(m)
        }
        PadeRoute::Matrix => {
            let t = assemble(coeffs, n)?;
            t.mfun_via_matrix(lam)
        }
    }
}

/// Median over the three route values, per error component; damps
/// route-specific roundoff in sup-error measurements.
pub fn pade_value_median(coeffs: &PencilCoefficients, lam: &Cplx, n: usize) -> Result<Cplx> {
    let a = pade_value(coeffs, lam, n, PadeRoute::Ratio)?;
    let b = pade_value(coeffs, lam, n, PadeRoute::ContinuedFraction)?;
    let c = pade_value(coeffs, lam, n, PadeRoute::Matrix)?;
    let med = |x: &Float, y: &Float, z: &Float| -> Float {
        let mut v = [x.clone(), y.clone(), z.clone()];
        v.sort_by(|p, q| p.partial_cmp(q).unwrap());
        v[1].clone()
    };
    Ok(Cplx::new(
        med(a.re(), b.re(), c.re()),
        med(a.im(), b.im(), c.im()),
    ))
}

/// Relative deviation of the Liouville-Ostrogradsky combination
/// `Q_{n+1}P_n - Q_nP_{n+1}` from the weight product of order n.
pub fn ostrogradsky_residual(coeffs: &PencilCoefficients, lam: &Cplx, n: usize) -> Result<Float> {
    let rec = eval_pq(coeffs, lam, n + 1, false)?;
    let lhs = &rec.q[n + 1] * &rec.p[n] - &rec.q[n] * &rec.p[n + 1];
    let rhs = coeffs.weight_product(lam, n);
    Ok(lhs.dist(&rhs) / rhs.abs())
}

/// J-weighted inner product (J_{[0,m]} u, v) with the assembled J entries.
pub fn j_form(coeffs: &PencilCoefficients, u: &[Cplx], v: &[Cplx]) -> Cplx {
    assert_eq!(u.len(), v.len());
    let m = u.len();
    let bits = u
        .first()
        .map(|c| c.prec())
        .unwrap_or_else(|| coeffs.prec().bits());
    let mut acc = Cplx::new(Float::with_val(bits, 0u8), Float::with_val(bits, 0u8));
    for k in 0..m {
        let mut row = u[k].scale(&coeffs.level(k).j_diag);
        if k > 0 {
            row = row + u[k - 1].scale(&coeffs.level(k - 1).j_off);
        }
        if k + 1 < m {
            row = row + u[k + 1].scale(&coeffs.level(k).j_off);
        }
        acc = acc + row * v[k].conj();
    }
    acc
}

/// Residual of the Christoffel-Darboux identity in its quadratic-form
/// version:
///
/// ```text
///   (lambda - conj zeta) (J pi(lambda), pi(zeta))
///     = [P_{j+1}(lambda)P_j(conj zeta) - P_{j+1}(conj zeta)P_j(lambda)]
///       / prod_{k<j} b_k^2 (lambda - z_k)(conj zeta - conj z_k)
/// ```
pub fn christoffel_darboux_residual(
    coeffs: &PencilCoefficients,
    lam: &Cplx,
    zeta: &Cplx,
    j: usize,
) -> Result<Float> {
    let rec_l = eval_pq(coeffs, lam, j + 1, false)?;
    let zeta_bar = zeta.conj();
    let rec_zb = eval_pq(coeffs, &zeta_bar, j + 1, false)?;
    let hats_l = eval_pq(coeffs, lam, j, true)?;
    let hats_z = eval_pq(coeffs, zeta, j, true)?;
    let pi_l = hats_l.hat_p.as_ref().unwrap();
    let pi_z = hats_z.hat_p.as_ref().unwrap();
    let form = j_form(coeffs, &pi_l[..=j], &pi_z[..=j]);
    let lhs = (lam - &zeta_bar) * form;

    let num = &rec_l.p[j + 1] * &rec_zb.p[j] - &rec_zb.p[j + 1] * &rec_l.p[j];
    let bits = lam.prec().max(coeffs.prec().bits());
    let mut den = Cplx::new(Float::with_val(bits, 1u8), Float::with_val(bits, 0u8));
    for k in 0..j {
        let lv = coeffs.level(k);
        let f = (lam - &lv.z) * (&zeta_bar - &lv.z.conj());
        den = den * f.scale(&lv.b2);
    }
    let rhs = num / den;

    let scale = lhs.abs().max(&rhs.abs());
    if scale.is_zero() {
        return Ok(Float::with_val(bits, 0u8));
    }
    Ok(lhs.dist(&rhs) / scale)
}

/// Both sides of the summed Christoffel-Darboux variant together with the
/// boundary term that separates it from the quadratic form:
/// `(J pi, pi) - sum_k f_k(lambda) conj f_k(zeta)
///    = b_j^2 hatP_j(lambda) conj hatP_j(zeta)`.
/// Returned as (summed, quadratic, gap, predicted_gap).
pub fn cd_summed_gap(
    coeffs: &PencilCoefficients,
    lam: &Cplx,
    zeta: &Cplx,
    j: usize,
) -> Result<(Cplx, Cplx, Cplx, Cplx)> {
    let rec_l = eval_pq(coeffs, lam, j, true)?;
    let rec_z = eval_pq(coeffs, zeta, j, true)?;
    let hp_l = rec_l.hat_p.as_ref().unwrap();
    let hp_z = rec_z.hat_p.as_ref().unwrap();
    let bits = lam.prec().max(coeffs.prec().bits());
    let mut summed = Cplx::new(Float::with_val(bits, 0u8), Float::with_val(bits, 0u8));
    for k in 0..=j {
        let fl = combined_sample(coeffs, hp_l, k);
        let fz = combined_sample(coeffs, hp_z, k);
        summed = summed + fl * fz.conj();
    }
    let quad = j_form(coeffs, &hp_l[..=j], &hp_z[..=j]);
    let gap = &quad - &summed;
    let lvj = coeffs.level(j);
    let predicted = (&hp_l[j] * &hp_z[j].conj()).scale(&lvj.b2);
    Ok((summed, quad, gap, predicted))
}

/// f_k = hatP_k + b_{k-1} hatP_{k-1} (the L-combined sample; b_{-1} = 0).
pub(crate) fn combined_sample(coeffs: &PencilCoefficients, hats: &[Cplx], k: usize) -> Cplx {
    if k == 0 {
        hats[0].clone()
    } else {
        &hats[k] + &hats[k - 1].scale(&coeffs.level(k - 1).j_off)
    }
}

/// Gram table of the orthonormal rational family and the first-hat moments.
///
/// Two first-moment conventions are carried side by side. With the
/// b-normalized hats (`hatP_1 = P_1/(b_0 (z_0 - t))`) the integral is
/// exactly `-b_0 = (1 - a2_0)/b_0`; dropping the `b_0` factor
/// (`P_1/(z_0 - t)`) gives exactly `1 - a2_0`, the form the textbook
/// display states. The two coincide only when `b_0 = 1`, so both are
/// reported and each is checked against its own closed form.
#[derive(Debug, Clone)]
pub struct GramTable {
    /// Entries `int f_p conj(f_q) dsigma` for p, q <= j.
    pub entries: Vec<Vec<Cplx>>,
    /// `int hatP_1 dsigma` (b-normalized); equals `-b_0` exactly.
    pub hat_p1_integral: Cplx,
    /// `int P_1(t)/(z_0 - t) dsigma`; equals `1 - a2_0` exactly.
    pub unnormalized_hat_p1_integral: Cplx,
    /// The closed-form target `1 - a2_0` for the unnormalized integral.
    pub expected_hat_p1: Float,
    /// Largest deviation of `entries` from the identity matrix.
    pub max_defect: Float,
}

/// Orthonormality check of the combined rational samples
/// `f_k = hatP_k + b_{k-1} hatP_{k-1}` against the backing measure.
pub fn orthogonality_check(
    measure: &DiscreteMeasure,
    coeffs: &PencilCoefficients,
    j: usize,
) -> Result<GramTable> {
    if j + 1 >= measure.len() {
        return Err(Error::InvalidInput {
            what: "orthogonality index".into(),
            reason: format!(
                "index {j} needs at least {} atoms, measure has {}",
                j + 2,
                measure.len()
            ),
        });
    }
    let prec = coeffs.prec();
    let bits = prec.bits();
    // per-atom combined samples, computed in parallel
    let atoms: Vec<(Float, Float)> = measure.atoms().to_vec();
    let rows: Vec<Result<(Float, Vec<Cplx>, Cplx)>> = par::map_ordered(&atoms, |(t, w)| {
        let lam = Cplx::from_real(t.clone());
        let rec = eval_pq(coeffs, &lam, j.max(1), true)?;
        let hats = rec.hat_p.as_ref().unwrap();
        let f: Vec<Cplx> = (0..=j).map(|k| combined_sample(coeffs, hats, k)).collect();
        Ok((w.clone(), f, hats[1].clone()))
    });

    let zero = || Cplx::new(Float::with_val(bits, 0u8), Float::with_val(bits, 0u8));
    let mut entries = vec![vec![zero(); j + 1]; j + 1];
    let mut hat1 = zero();
    for row in rows {
        let (w, f, h1) = row?;
        for p in 0..=j {
            for q in 0..=j {
                let term = (&f[p] * &f[q].conj()).scale(&w);
                entries[p][q] = &entries[p][q] + &term;
            }
        }
        hat1 = hat1 + h1.scale(&w);
    }

    let lv0 = coeffs.level(0);
    let unnormalized = hat1.scale(&lv0.b);
    let expected = Float::with_val(bits, 1u8 - &lv0.a2);
    let mut defect = Float::with_val(bits, 0u8);
    for (p, row) in entries.iter().enumerate() {
        for (q, v) in row.iter().enumerate() {
            let target = if p == q {
                Cplx::new(Float::with_val(bits, 1u8), Float::with_val(bits, 0u8))
            } else {
                zero()
            };
            defect = defect.max(&v.dist(&target));
        }
    }
    Ok(GramTable {
        entries,
        hat_p1_integral: hat1,
        unnormalized_hat_p1_integral: unnormalized,
        expected_hat_p1: expected,
        max_defect: defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur::build_chain_from_measure;

    fn prec() -> Precision {
        Precision::default()
    }

    fn two_atom() -> DiscreteMeasure {
        DiscreteMeasure::from_f64_normalized(prec(), &[(-1.0, 0.5), (1.0, 0.5)]).unwrap()
    }

    fn two_atom_coeffs() -> PencilCoefficients {
        let p = prec();
        let pts = vec![Cplx::i(&p), Cplx::from_f64(&p, 0.0, 2.0)];
        let chain = build_chain_from_measure(&two_atom(), &pts, 2).unwrap();
        PencilCoefficients::from_chain(&chain).unwrap()
    }

    #[test]
    fn pq_values_two_atom_at_2i() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = Cplx::from_f64(&p, 0.0, 2.0);
        let rec = eval_pq(&c, &lam, 2, false).unwrap();
        // P = (1, 4i, -5), Q = (0, 1, 2i)
        assert!((&rec.p[1] - &Cplx::from_f64(&p, 0.0, 4.0)).abs() < p.ulps(32.0));
        assert!((&rec.p[2] - &Cplx::from_f64(&p, -5.0, 0.0)).abs() < p.ulps(64.0));
        assert!((&rec.q[1] - &Cplx::one(&p)).abs() < p.ulps(8.0));
        assert!((&rec.q[2] - &Cplx::from_f64(&p, 0.0, 2.0)).abs() < p.ulps(64.0));
    }

    #[test]
    fn hats_two_atom_at_2i() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = Cplx::from_f64(&p, 0.0, 2.0);
        let rec = eval_pq(&c, &lam, 1, true).unwrap();
        let hp = rec.hat_p.unwrap();
        let hq = rec.hat_q.unwrap();
        // hatP_1 = 4i/(1*(i-2i)) = -4 ; hatQ_1 = 1/(-i) = i
        assert!((&hp[1] - &Cplx::from_f64(&p, -4.0, 0.0)).abs() < p.ulps(64.0));
        assert!((&hq[1] - &Cplx::i(&p)).abs() < p.ulps(32.0));
    }

    #[test]
    fn hats_rejected_on_node() {
        let p = prec();
        let c = two_atom_coeffs();
        assert!(matches!(
            eval_pq(&c, &Cplx::i(&p), 2, true),
            Err(Error::PoleProximity { .. })
        ));
        // no hats -> fine on the node
        assert!(eval_pq(&c, &Cplx::i(&p), 2, false).is_ok());
    }

    #[test]
    fn hat_routes_agree() {
        let p = prec();
        // three atoms so b_1 > 0 and hats reach index 2
        let m = DiscreteMeasure::from_f64_normalized(
            p,
            &[(-1.0, 1.0 / 3.0), (0.0, 1.0 / 3.0), (1.0, 1.0 / 3.0)],
        )
        .unwrap();
        let pts = vec![Cplx::i(&p), Cplx::from_f64(&p, 0.2, 2.0)];
        let chain = build_chain_from_measure(&m, &pts, 2).unwrap();
        let c = PencilCoefficients::from_chain(&chain).unwrap();
        let lam = Cplx::from_f64(&p, 0.7, 1.3);
        let rec = eval_pq(&c, &lam, 2, true).unwrap();
        assert!(rec.hat_defect.unwrap() <= p.ulps(1e3));
    }

    #[test]
    fn pade_routes_two_atom() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = Cplx::from_f64(&p, 0.0, 2.0);
        let want = Cplx::new(p.real(0.0), p.real(2.0) / p.real(5.0));
        for route in [PadeRoute::Ratio, PadeRoute::ContinuedFraction, PadeRoute::Matrix] {
            let v = pade_value(&c, &lam, 1, route).unwrap();
            assert!(v.dist(&want) < p.ulps(64.0), "route {route:?}");
        }
        // n = 0 at i interpolates w_0 = i/2
        let v0 = pade_value(&c, &Cplx::i(&p), 0, PadeRoute::Ratio).unwrap();
        assert!(v0.dist(&Cplx::from_f64(&p, 0.0, 0.5)) < p.ulps(32.0));
        // Herglotz: Im m > 0 at 1 + i
        let v = pade_value_median(&c, &Cplx::from_f64(&p, 1.0, 1.0), 1).unwrap();
        assert!(v.im().clone() > 0);
    }

    #[test]
    fn ostrogradsky_two_atom() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = Cplx::from_f64(&p, 0.0, 2.0);
        // n = 0: Q_1 P_0 - Q_0 P_1 = 1 (empty product)
        assert!(ostrogradsky_residual(&c, &lam, 0).unwrap() <= p.ulps(8.0));
        // n = 1 at 2i: both sides -3
        assert!(ostrogradsky_residual(&c, &lam, 1).unwrap() <= p.ulps(64.0));
        let lam2 = Cplx::from_f64(&p, 0.31, 0.77);
        assert!(ostrogradsky_residual(&c, &lam2, 1).unwrap() <= p.ulps(64.0));
    }

    #[test]
    fn cd_quadratic_form_two_atom() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = Cplx::from_f64(&p, 0.0, 2.0);
        // j = 0: both sides a2_0 (lambda - conj zeta)
        let zeta = Cplx::from_f64(&p, 0.4, 0.9);
        assert!(christoffel_darboux_residual(&c, &lam, &zeta, 0).unwrap() <= p.ulps(16.0));
        // j = 1 with zeta = lambda = 2i: forms (J pi, pi) = 10, lhs = 40i
        assert!(christoffel_darboux_residual(&c, &lam, &lam, 1).unwrap() <= p.ulps(64.0));
    }

    #[test]
    fn j_form_two_atom_value() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = Cplx::from_f64(&p, 0.0, 2.0);
        let rec = eval_pq(&c, &lam, 1, true).unwrap();
        let pi = rec.hat_p.unwrap();
        let form = j_form(&c, &pi, &pi);
        // pi = (1, -4), J = [[2,1],[1,1]] -> (J pi, pi) = 10
        assert!(form.dist(&Cplx::from_f64(&p, 10.0, 0.0)) < p.ulps(256.0));
    }

    #[test]
    fn cd_summed_gap_matches_boundary_term() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = Cplx::from_f64(&p, 0.6, 1.4);
        let zeta = Cplx::from_f64(&p, -0.3, 0.8);
        // j = 0: gap = b_0^2 hatP_0(lambda) conj hatP_0(zeta) = 1
        let (summed, quad, gap, predicted) = cd_summed_gap(&c, &lam, &zeta, 0).unwrap();
        assert!(gap.dist(&predicted) <= p.ulps(32.0));
        // mismatch factor at j = 0 is exactly c_0 = 2
        let ratio = &quad / &summed;
        assert!(ratio.dist(&Cplx::from_f64(&p, 2.0, 0.0)) <= p.ulps(64.0));
    }

    #[test]
    fn orthogonality_two_atom() {
        let p = prec();
        let m = two_atom();
        let c = two_atom_coeffs();
        let g = orthogonality_check(&m, &c, 0).unwrap();
        // b_0 = 1 here, so both first-moment conventions equal -1 = 1 - a2_0
        assert!(g
            .hat_p1_integral
            .dist(&Cplx::from_f64(&p, -1.0, 0.0))
            < p.ulps(64.0));
        assert!(g
            .unnormalized_hat_p1_integral
            .dist(&Cplx::from_f64(&p, -1.0, 0.0))
            < p.ulps(64.0));
        assert!((g.expected_hat_p1.clone() + 1u8).abs() < p.ulps(16.0));
        assert!(g.max_defect <= p.ulps(64.0));
    }

    #[test]
    fn orthogonality_norm_of_f1_is_one() {
        let p = prec();
        // need >= 3 atoms to test index 1
        let m = DiscreteMeasure::from_f64_normalized(
            p,
            &[(-1.0, 1.0 / 3.0), (0.0, 1.0 / 3.0), (1.0, 1.0 / 3.0)],
        )
        .unwrap();
        let pts = vec![Cplx::i(&p), Cplx::from_f64(&p, 0.0, 2.0)];
        let chain = build_chain_from_measure(&m, &pts, 2).unwrap();
        let c = PencilCoefficients::from_chain(&chain).unwrap();
        let g = orthogonality_check(&m, &c, 1).unwrap();
        assert!(g.max_defect <= p.ulps(1e3), "defect {:e}", g.max_defect.to_f64());
        // closed forms: normalized integral is -b_0, unnormalized is 1 - a2_0
        let lv0 = c.level(0);
        assert!(g
            .hat_p1_integral
            .dist(&Cplx::from_real(-lv0.b.clone()))
            <= p.ulps(1e2));
        assert!(g
            .unnormalized_hat_p1_integral
            .dist(&Cplx::from_real(g.expected_hat_p1.clone()))
            <= p.ulps(1e2));
    }

    #[test]
    fn pade_requires_offaxis_lambda() {
        let p = prec();
        let c = two_atom_coeffs();
        assert!(pade_value(&c, &Cplx::one(&p), 1, PadeRoute::Ratio).is_err());
    }
}
