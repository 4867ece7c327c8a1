//! Weyl circles: Moebius parametrization, disk geometry, membership,
//! tangency/nesting diagnostics, determinacy indicators, and the
//! Blaschke-type node condition.
//!
//! The circle K_j(lambda) is the image of the extended real tau-line under
//!
//! ```text
//!   omega_j(lambda, tau) = -(Q_j - tau Q_{j-1}) / (P_j - tau P_{j-1}).
//! ```
//!
//! The determinant/Moebius formulas are the source of truth for center and
//! radius; the exact circle through the tau in {0, 1, inf} images is the
//! independent fit oracle. The textbook closed-form radius (reciprocal of
//! the plain hat-sum) is computed only as a diagnostic: exact small cases
//! show it misses both the L-factor boundary term and a product of node
//! cross-ratios, and the derived radius identity
//!
//! ```text
//!   r_j * |lambda - conj lambda| * (J pi_{[0,j-1]}, pi_{[0,j-1]})
//!     = prod_{k<=j-2} |lambda - conj z_k| / |lambda - z_k|
//! ```
//!
//! reconciles the two.

use crate::cplx::Cplx;
use crate::error::{Error, Result};
use crate::pencil::PencilCoefficients;
use crate::precision::Precision;
use crate::recurrence::{combined_sample, eval_pq, j_form};
use rug::Float;

/// Parameter on the extended real line.
#[derive(Debug, Clone)]
pub enum Tau {
    Finite(Float),
    Infinity,
}

/// Disk construction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskMethod {
    /// Center and radius from the Moebius determinant formulas.
    Determinant,
    /// Exact circle through the images of tau in {0, 1, inf}.
    ThreePointFit,
    /// The closed-form radius as printed in the classical display
    /// (diagnostic only; see module docs).
    PaperFormula,
}

/// A Weyl disk K_j(lambda).
#[derive(Debug, Clone)]
pub struct WeylDisk {
    pub lambda: Cplx,
    pub level: usize,
    pub center: Cplx,
    pub radius: Float,
    pub method: DiskMethod,
}

/// omega_j(lambda, tau); at tau = inf this is -Q_{j-1}/P_{j-1}, which also
/// equals omega_{j-1}(lambda, 0).
pub fn omega(coeffs: &PencilCoefficients, lam: &Cplx, tau: &Tau, j: usize) -> Result<Cplx> {
    if j == 0 {
        return Err(Error::InvalidInput {
            what: "omega level".into(),
            reason: "needs j >= 1".into(),
        });
    }
    if !(lam.im().clone() > 0) {
        return Err(Error::InvalidInput {
            what: "omega point".into(),
            reason: "lambda must lie in the upper half plane".into(),
        });
    }
    let rec = eval_pq(coeffs, lam, j, false)?;
    let v = match tau {
        Tau::Infinity => -(&rec.q[j - 1] / &rec.p[j - 1]),
        Tau::Finite(t) => {
            let num = &rec.q[j] - &rec.q[j - 1].scale(t);
            let den = &rec.p[j] - &rec.p[j - 1].scale(t);
            -(num / den)
        }
    };
    Ok(v)
}

/// Construct K_j(lambda) with the requested method.
pub fn weyl_disk(
    coeffs: &PencilCoefficients,
    lam: &Cplx,
    j: usize,
    method: DiskMethod,
) -> Result<WeylDisk> {
    if j == 0 {
        return Err(Error::InvalidInput {
            what: "weyl disk level".into(),
            reason: "needs j >= 1".into(),
        });
    }
    if !(lam.im().clone() > 0) {
        return Err(Error::InvalidInput {
            what: "weyl disk point".into(),
            reason: "lambda must lie in the upper half plane".into(),
        });
    }
    let prec = coeffs.prec();
    match method {
        DiskMethod::Determinant => {
            let rec = eval_pq(coeffs, lam, j, false)?;
            let den = &rec.p[j] * &rec.p[j - 1].conj() - &rec.p[j - 1] * &rec.p[j].conj();
            let num = &rec.q[j] * &rec.p[j - 1].conj() - &rec.q[j - 1] * &rec.p[j].conj();
            let center = -(num / &den);
            // Wronskian of order j-1 is the plain weight product
            let radius = coeffs.weight_product(lam, j - 1).abs() / den.abs();
            Ok(WeylDisk {
                lambda: lam.clone(),
                level: j,
                center,
                radius,
                method,
            })
        }
        DiskMethod::ThreePointFit => {
            let bits = lam.prec().max(prec.bits());
            let a = omega(coeffs, lam, &Tau::Finite(Float::with_val(bits, 0u8)), j)?;
            let b = omega(coeffs, lam, &Tau::Finite(Float::with_val(bits, 1u8)), j)?;
            let c = omega(coeffs, lam, &Tau::Infinity, j)?;
            let (center, radius) = circle_through(prec, &a, &b, &c)?;
            Ok(WeylDisk {
                lambda: lam.clone(),
                level: j,
                center,
                radius,
                method,
            })
        }
        DiskMethod::PaperFormula => {
            let det = weyl_disk(coeffs, lam, j, DiskMethod::Determinant)?;
            let rec = eval_pq(coeffs, lam, j - 1, true)?;
            let hats = rec.hat_p.as_ref().unwrap();
            let bits = lam.prec().max(prec.bits());
            let mut sum = Float::with_val(bits, 0u8);
            for k in 0..j {
                sum += combined_sample(coeffs, hats, k).norm_sqr();
            }
            let two_im = (lam - &lam.conj()).abs();
            let radius = (two_im * sum).recip();
            Ok(WeylDisk {
                lambda: lam.clone(),
                level: j,
                center: det.center,
                radius,
                method,
            })
        }
    }
}

/// Exact circle through three points (circumcircle in complex form).
fn circle_through(prec: &Precision, a: &Cplx, b: &Cplx, c: &Cplx) -> Result<(Cplx, Float)> {
    let na = Cplx::from_real(a.norm_sqr());
    let nb = Cplx::from_real(b.norm_sqr());
    let nc = Cplx::from_real(c.norm_sqr());
    let bc = b - c;
    let ca = c - a;
    let ab = a - b;
    let num = na * &bc + nb * &ca + nc * &ab;
    let den = a.conj() * bc + b.conj() * ca + c.conj() * ab;
    let scale = Float::with_val(
        den.prec(),
        a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + 1u8,
    );
    if den.abs() <= scale * prec.geo_tol() {
        return Err(Error::DegenerateCircle {
            reason: "fit points are numerically collinear".into(),
        });
    }
    let center = num / den;
    let radius = a.dist(&center);
    Ok((center, radius))
}

/// Membership classification of a candidate value against K_j(lambda).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipClass {
    Inside,
    Boundary,
    Outside,
}

#[derive(Debug, Clone)]
pub struct Membership {
    pub class: MembershipClass,
    /// radius - |omega - center| (positive inside).
    pub margin: Float,
    /// Im omega / Im lambda - (J(omega pi + xi), omega pi + xi); same sign
    /// as `margin` (cross-validated quadratic-form route).
    pub quad_margin: Float,
    pub disk: WeylDisk,
}

/// Classify `omega` against K_j(lambda), cross-validating the geometric
/// distance against the J-quadratic-form inequality.
pub fn disk_membership(
    omega_val: &Cplx,
    coeffs: &PencilCoefficients,
    lam: &Cplx,
    j: usize,
) -> Result<Membership> {
    let disk = weyl_disk(coeffs, lam, j, DiskMethod::Determinant)?;
    let prec = coeffs.prec();
    let bits = lam.prec().max(prec.bits());

    let rec = eval_pq(coeffs, lam, j - 1, true)?;
    let hp = rec.hat_p.as_ref().unwrap();
    let hq = rec.hat_q.as_ref().unwrap();
    let v: Vec<Cplx> = (0..j).map(|k| omega_val * &hp[k] + &hq[k]).collect();
    let form = j_form(coeffs, &v, &v);
    let target = Float::with_val(bits, omega_val.im() / lam.im());
    let quad_margin = target - form.re();

    let dist = omega_val.dist(&disk.center);
    let margin = Float::with_val(bits, &disk.radius - &dist);
    let tol = Float::with_val(bits, &disk.radius * &prec.geo_tol());
    let class = if margin.clone().abs() <= tol {
        MembershipClass::Boundary
    } else if margin > 0 {
        MembershipClass::Inside
    } else {
        MembershipClass::Outside
    };
    Ok(Membership {
        class,
        margin,
        quad_margin,
        disk,
    })
}

/// Relation between consecutive disks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskRelation {
    /// Tangent with disjoint interiors.
    External,
    /// Tangent with K_{j+1} inside K_j.
    Internal,
    /// Strictly nested (within tolerance).
    Nested,
    Other,
}

#[derive(Debug, Clone)]
pub struct TangencyReport {
    /// omega_{j+1}(lambda, inf) = omega_j(lambda, 0).
    pub common_point: Cplx,
    /// | |common - center| - radius | for K_j and K_{j+1}.
    pub on_circle_residual: (Float, Float),
    pub center_distance: Float,
    pub radius_inner: Float,
    pub radius_outer: Float,
    pub relation: DiskRelation,
}

/// Tangency/nesting diagnostics for the pair (K_j, K_{j+1}).
pub fn tangency_report(
    coeffs: &PencilCoefficients,
    lam: &Cplx,
    j: usize,
) -> Result<TangencyReport> {
    let prec = coeffs.prec();
    let bits = lam.prec().max(prec.bits());
    let dj = weyl_disk(coeffs, lam, j, DiskMethod::Determinant)?;
    let dj1 = weyl_disk(coeffs, lam, j + 1, DiskMethod::Determinant)?;
    let common = omega(coeffs, lam, &Tau::Infinity, j + 1)?;
    let res_j = (common.dist(&dj.center) - dj.radius.clone()).abs();
    let res_j1 = (common.dist(&dj1.center) - dj1.radius.clone()).abs();
    let dist = dj.center.dist(&dj1.center);
    let tol = Float::with_val(
        bits,
        dj.radius.clone().max(&dj1.radius) * prec.geo_tol(),
    );
    let sum = Float::with_val(bits, &dj.radius + &dj1.radius);
    let diff = Float::with_val(bits, &dj.radius - &dj1.radius);
    let relation = if (dist.clone() - &sum).abs() <= tol {
        DiskRelation::External
    } else if (dist.clone() - diff.clone().abs()).abs() <= tol {
        DiskRelation::Internal
    } else if dist.clone() <= diff + &tol {
        DiskRelation::Nested
    } else {
        DiskRelation::Other
    };
    Ok(TangencyReport {
        common_point: common,
        on_circle_residual: (res_j, res_j1),
        center_distance: dist,
        radius_inner: dj1.radius,
        radius_outer: dj.radius,
        relation,
    })
}

/// Trend classification thresholds; the underlying limit statements cannot
/// be decided by a finite computation, so these are configuration values.
#[derive(Debug, Clone, Copy)]
pub struct DeterminacyThresholds {
    /// S_N above this suggests the limit-point alternative.
    pub s_threshold: f64,
    /// r_last / r_first below this suggests the limit-point alternative.
    pub radius_collapse: f64,
    /// r_last / r_first above this suggests the limit-circle alternative.
    pub radius_stagnation: f64,
}

impl Default for DeterminacyThresholds {
    fn default() -> Self {
        Self {
            s_threshold: 1e6,
            radius_collapse: 1e-6,
            radius_stagnation: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeterminacyClass {
    LimitPointTrend,
    LimitCircleTrend,
    Inconclusive,
}

/// Finite-section determinacy diagnostics at a point.
#[derive(Debug, Clone)]
pub struct DeterminacyReport {
    pub lambda: Cplx,
    /// S_n = (J pi_{[0,n]}, pi_{[0,n]}), nondecreasing.
    pub s: Vec<Float>,
    /// Plain combined-sample partial sums; S_n = paper_sums_n + boundary_n.
    pub paper_sums: Vec<Float>,
    /// Boundary terms b_n^2 |hatP_n|^2.
    pub boundary: Vec<Float>,
    /// Determinant-method radii r_j for j = 1..=N+1.
    pub radii: Vec<Float>,
    /// Partial Blaschke sums over the chain nodes.
    pub blaschke_partials: Vec<Float>,
    /// Least-squares slope of log S_n against log(n+1).
    pub growth_exponent: f64,
    pub classification: DeterminacyClass,
}

/// Compute the determinacy indicator sequences up to order N.
pub fn determinacy_indicator(
    coeffs: &PencilCoefficients,
    lam: &Cplx,
    n_max: usize,
    thresholds: &DeterminacyThresholds,
) -> Result<DeterminacyReport> {
    if coeffs.len() < n_max + 1 {
        return Err(Error::InsufficientDepth {
            requested: n_max,
            needed: n_max + 1,
            available: coeffs.len(),
        });
    }
    let bits = lam.prec().max(coeffs.prec().bits());
    let rec = eval_pq(coeffs, lam, n_max, true)?;
    let hats = rec.hat_p.as_ref().unwrap();

    let mut s = Vec::with_capacity(n_max + 1);
    let mut paper = Vec::with_capacity(n_max + 1);
    let mut boundary = Vec::with_capacity(n_max + 1);
    let mut paper_acc = Float::with_val(bits, 0u8);
    for n in 0..=n_max {
        paper_acc += combined_sample(coeffs, hats, n).norm_sqr();
        paper.push(paper_acc.clone());
        let b_n = Float::with_val(bits, &coeffs.level(n).b2 * &hats[n].norm_sqr());
        let s_n = Float::with_val(bits, &paper_acc + &b_n);
        boundary.push(b_n);
        s.push(s_n);
    }

    let mut radii = Vec::with_capacity(n_max + 1);
    for j in 1..=(n_max + 1) {
        radii.push(weyl_disk(coeffs, lam, j, DiskMethod::Determinant)?.radius);
    }

    let nodes: Vec<Cplx> = coeffs.levels().iter().map(|l| l.z.clone()).collect();
    let bl = blaschke_sum(coeffs.prec(), &nodes, nodes.len())?;

    // slope of log S_n over log(n+1), n >= 1
    let pts: Vec<(f64, f64)> = s
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, v)| (((n + 1) as f64).ln(), v.to_f64().max(1e-300).ln()))
        .collect();
    let growth_exponent = least_squares_slope(&pts);

    let r_first = radii.first().cloned().unwrap_or_else(|| Float::with_val(bits, 1u8));
    let r_last = radii.last().cloned().unwrap_or_else(|| Float::with_val(bits, 1u8));
    let ratio = (r_last / r_first).to_f64();
    let s_last = s.last().unwrap().to_f64();
    let classification = if s_last >= thresholds.s_threshold || ratio <= thresholds.radius_collapse
    {
        DeterminacyClass::LimitPointTrend
    } else if ratio >= thresholds.radius_stagnation {
        DeterminacyClass::LimitCircleTrend
    } else {
        DeterminacyClass::Inconclusive
    };

    Ok(DeterminacyReport {
        lambda: lam.clone(),
        s,
        paper_sums: paper,
        boundary,
        radii,
        blaschke_partials: bl.partials,
        growth_exponent,
        classification,
    })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let den = n * sxx - sx * sx;
    if den.abs() < 1e-300 {
        0.0
    } else {
        (n * sxy - sx * sy) / den
    }
}

/// Partial sums of the node condition `sum_k Im z_k / |z_k + i|^2`.
#[derive(Debug, Clone)]
pub struct BlaschkeSum {
    /// Partial sum over k < N.
    pub partial: Float,
    /// Running partials (index k holds the sum over 0..=k).
    pub partials: Vec<Float>,
    /// Dyadic block sums ({1}, {2,3}, {4..7}, ...).
    pub blocks: Vec<Float>,
    /// Growth trend: true when the block sums are not collapsing,
    /// consistent with divergence.
    pub divergence_trend: bool,
}

/// Evaluate the node condition over the first N points.
pub fn blaschke_sum(prec: &Precision, points: &[Cplx], n: usize) -> Result<BlaschkeSum> {
    let n = n.min(points.len());
    if n == 0 {
        return Err(Error::InvalidInput {
            what: "blaschke sum".into(),
            reason: "no points".into(),
        });
    }
    let bits = prec.bits();
    let i_unit = Cplx::new(Float::with_val(bits, 0u8), Float::with_val(bits, 1u8));
    let mut terms = Vec::with_capacity(n);
    for z in points.iter().take(n) {
        let denom = (z + &i_unit).norm_sqr();
        terms.push(Float::with_val(bits, z.im() / &denom));
    }
    let mut partials = Vec::with_capacity(n);
    let mut acc = Float::with_val(bits, 0u8);
    for t in &terms {
        acc += t;
        partials.push(acc.clone());
    }
    // dyadic blocks starting at k = 1
    let mut blocks = Vec::new();
    let mut lo = 1usize;
    while lo < n {
        let hi = (2 * lo).min(n);
        let mut b = Float::with_val(bits, 0u8);
        for t in &terms[lo..hi] {
            b += t;
        }
        blocks.push(b);
        lo = hi;
    }
    let divergence_trend = if blocks.len() >= 2 {
        let last = &blocks[blocks.len() - 1];
        let prev = &blocks[blocks.len() - 2];
        last.clone() >= Float::with_val(bits, prev * &Float::with_val(bits, 0.4f64))
    } else {
        // too few terms for a block comparison: look at raw term decay
        let first = &terms[0];
        let last = &terms[n - 1];
        last.clone() >= Float::with_val(bits, first * &Float::with_val(bits, 0.25f64))
    };
    Ok(BlaschkeSum {
        partial: acc,
        partials,
        blocks,
        divergence_trend,
    })
}

/// The deficiency sequence of a candidate solution value m at lambda:
/// `D_n = Im m / Im lambda - (J(m pi_{[0,n]} + xi_{[0,n]}), same)`,
/// together with the residual of its closed-form identity
/// (`D_n = -forward-quotient expression`; see tests for the exact shape).
#[derive(Debug, Clone)]
pub struct WeylSolutionReport {
    pub d: Vec<Float>,
    pub identity_residual: Vec<Float>,
}

/// Evaluate D_n for n = 0..=N against the supplied m-value (typically the
/// deepest available Pade value or the exact transform value).
pub fn weyl_solution_residual(
    coeffs: &PencilCoefficients,
    lam: &Cplx,
    n_max: usize,
    m_value: &Cplx,
) -> Result<WeylSolutionReport> {
    if coeffs.len() < n_max + 1 {
        return Err(Error::InsufficientDepth {
            requested: n_max,
            needed: n_max + 1,
            available: coeffs.len(),
        });
    }
    let bits = lam.prec().max(coeffs.prec().bits());
    let rec = eval_pq(coeffs, lam, n_max + 1, false)?;
    let hat_rec = eval_pq(coeffs, lam, n_max, true)?;
    let hp = hat_rec.hat_p.as_ref().unwrap();
    let hq = hat_rec.hat_q.as_ref().unwrap();
    let target = Float::with_val(bits, m_value.im() / lam.im());

    let mut d_seq = Vec::with_capacity(n_max + 1);
    let mut resid = Vec::with_capacity(n_max + 1);
    let tiny = Float::with_val(bits, 1e-300f64);
    for n in 0..=n_max {
        let v: Vec<Cplx> = (0..=n).map(|k| m_value * &hp[k] + &hq[k]).collect();
        let form = j_form(coeffs, &v, &v);
        let d_n = Float::with_val(bits, &target - form.re());

        // closed form from the recurrence wronskians:
        //   (1/Im lambda) |mP_n + Q_n|^2 / prod_{k<n} b_k^2 |lambda - z_k|^2
        //       * Im[(m P_{n+1} + Q_{n+1})/(m P_n + Q_n)]
        let top = m_value * &rec.p[n] + &rec.q[n];
        let nxt = m_value * &rec.p[n + 1] + &rec.q[n + 1];
        let mut prod = Float::with_val(bits, 1u8);
        for k in 0..n {
            let lv = coeffs.level(k);
            prod *= Float::with_val(bits, &lv.b2 * &(lam - &lv.z).norm_sqr());
        }
        let quot = &nxt / &top;
        let rhs = Float::with_val(bits, top.norm_sqr() / prod) * quot.im()
            / Float::with_val(bits, lam.im());
        let scale = d_n.clone().abs().max(&rhs.clone().abs()).max(&tiny);
        resid.push((d_n.clone() + rhs).abs() / scale);
        d_seq.push(d_n);
    }
    Ok(WeylSolutionReport {
        d: d_seq,
        identity_residual: resid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::DiscreteMeasure;
    use crate::schur::build_chain_from_measure;

    fn prec() -> Precision {
        Precision::default()
    }

    fn two_atom_coeffs() -> PencilCoefficients {
        let p = prec();
        let m = DiscreteMeasure::from_f64_normalized(p, &[(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        let pts = vec![Cplx::i(&p), Cplx::from_f64(&p, 0.0, 2.0)];
        let chain = build_chain_from_measure(&m, &pts, 2).unwrap();
        PencilCoefficients::from_chain(&chain).unwrap()
    }

    fn lam2i() -> Cplx {
        Cplx::from_f64(&Precision::default(), 0.0, 2.0)
    }

    #[test]
    fn omega_values_two_atom() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = lam2i();
        // omega_1(2i, 0) = -Q_1/P_1 = -1/(4i) = i/4
        let o1 = omega(&c, &lam, &Tau::Finite(p.real(0.0)), 1).unwrap();
        assert!(o1.dist(&Cplx::from_f64(&p, 0.0, 0.25)) < p.ulps(32.0));
        // omega_2(2i, 0) = -Q_2/P_2 = 2i/5
        let o2 = omega(&c, &lam, &Tau::Finite(p.real(0.0)), 2).unwrap();
        let want = Cplx::new(p.real(0.0), p.real(2.0) / p.real(5.0));
        assert!(o2.dist(&want) < p.ulps(64.0));
        // omega_2(2i, inf) = omega_1(2i, 0)
        let oi = omega(&c, &lam, &Tau::Infinity, 2).unwrap();
        assert_eq!(oi, o1);
    }

    #[test]
    fn disk_level1_center_and_radius() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = lam2i();
        for method in [DiskMethod::Determinant, DiskMethod::ThreePointFit] {
            let d = weyl_disk(&c, &lam, 1, method).unwrap();
            assert!(
                d.center.dist(&Cplx::from_f64(&p, 0.0, 0.125)) < p.ulps(1e2),
                "center via {method:?}"
            );
            assert!(
                (d.radius.clone() - 0.125f64).abs() < p.ulps(1e2),
                "radius via {method:?}"
            );
        }
    }

    #[test]
    fn disk_level2_center_and_radius() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = lam2i();
        let want_center = Cplx::new(p.real(0.0), p.real(13.0) / p.real(40.0));
        let want_radius = p.real(3.0) / p.real(40.0);
        for method in [DiskMethod::Determinant, DiskMethod::ThreePointFit] {
            let d = weyl_disk(&c, &lam, 2, method).unwrap();
            assert!(d.center.dist(&want_center) < p.ulps(1e3));
            assert!((d.radius.clone() - &want_radius).abs() < p.ulps(1e3));
        }
    }

    #[test]
    fn printed_formula_radius_differs_by_factor_two_at_level1() {
        let p = prec();
        let c = two_atom_coeffs();
        let d = weyl_disk(&c, &lam2i(), 1, DiskMethod::PaperFormula).unwrap();
        // prints 1/4 where the true radius is 1/8 (factor c_0 = 2)
        assert!((d.radius.clone() - 0.25f64).abs() < p.ulps(64.0));
    }

    #[test]
    fn membership_two_atom_level1() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = lam2i();
        // boundary point i/4
        let mb = disk_membership(&Cplx::from_f64(&p, 0.0, 0.25), &c, &lam, 1).unwrap();
        assert_eq!(mb.class, MembershipClass::Boundary);
        // center i/8: inside with margin 1/8
        let mi = disk_membership(&Cplx::from_f64(&p, 0.0, 0.125), &c, &lam, 1).unwrap();
        assert_eq!(mi.class, MembershipClass::Inside);
        assert!((mi.margin.clone() - 0.125f64).abs() < p.ulps(1e2));
        assert!(mi.quad_margin > 0);
        // the true transform value 2i/5 lies outside K_1(2i)
        let w = Cplx::new(p.real(0.0), p.real(2.0) / p.real(5.0));
        let mo = disk_membership(&w, &c, &lam, 1).unwrap();
        assert_eq!(mo.class, MembershipClass::Outside);
        let dist_margin = p.real(11.0) / p.real(40.0) - p.real(0.125);
        assert!((mo.margin.clone().abs() - dist_margin).abs() < p.ulps(1e2));
        assert!(mo.quad_margin < 0);
    }

    #[test]
    fn tangency_two_atom_external() {
        let p = prec();
        let c = two_atom_coeffs();
        let rep = tangency_report(&c, &lam2i(), 1).unwrap();
        // common point i/4, |c1 - c2| = 1/5 = r1 + r2
        assert!(rep
            .common_point
            .dist(&Cplx::from_f64(&p, 0.0, 0.25))
            < p.ulps(64.0));
        assert!(rep.on_circle_residual.0 <= p.ulps(1e2));
        assert!(rep.on_circle_residual.1 <= p.ulps(1e2));
        let fifth = p.real(1.0) / p.real(5.0);
        assert!((rep.center_distance.clone() - &fifth).abs() < p.ulps(1e2));
        assert_eq!(rep.relation, DiskRelation::External);
    }

    #[test]
    fn radius_identity_two_atom() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = lam2i();
        // r_2 |lambda - conj lambda| S_1 = |lambda - conj z_0| / |lambda - z_0| = 3
        let d2 = weyl_disk(&c, &lam, 2, DiskMethod::Determinant).unwrap();
        let rec = eval_pq(&c, &lam, 1, true).unwrap();
        let pi = rec.hat_p.unwrap();
        let s1 = j_form(&c, &pi, &pi);
        let lhs = d2.radius * (&lam - &lam.conj()).abs() * s1.re().clone();
        assert!((lhs - 3u8).abs() < p.ulps(1e3));
    }

    #[test]
    fn blaschke_trends() {
        let p = prec();
        // z_k = k/(k+1) + i: terms >= 1/5, divergent
        let pts: Vec<Cplx> = (0..16)
            .map(|k| Cplx::new(p.real(k as f64) / p.real(k as f64 + 1.0), p.real(1.0)))
            .collect();
        let b = blaschke_sum(&p, &pts, 16).unwrap();
        assert!(b.divergence_trend);
        assert!(b.partial > p.real(16.0 / 5.0 - 0.01));

        // z_k = i 4^{-k}: partial sums bounded by 4/3, convergent
        let shrink: Vec<Cplx> = (0..16)
            .map(|k| Cplx::new(p.real(0.0), p.real(4f64.powi(-(k as i32)))))
            .collect();
        let b2 = blaschke_sum(&p, &shrink, 16).unwrap();
        assert!(!b2.divergence_trend);
        assert!(b2.partial < p.real(4.0 / 3.0));

        // single point i: partial = 1/4
        let one = blaschke_sum(&p, &[Cplx::i(&p)], 1).unwrap();
        assert!((one.partial.clone() - 0.25f64).abs() < p.ulps(8.0));
    }

    #[test]
    fn weyl_solution_sequence_two_atom() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = lam2i();
        let m = Cplx::new(p.real(0.0), p.real(2.0) / p.real(5.0));
        let rep = weyl_solution_residual(&c, &lam, 1, &m).unwrap();
        // D_0 = 0.2 - 0.32 = -0.12 and D_1 = 0 (chain exhausted)
        let want = p.real(-3.0) / p.real(25.0);
        assert!((rep.d[0].clone() - &want).abs() < p.ulps(1e2));
        assert!(rep.d[1].clone().abs() < p.ulps(1e2));
        // identity: D_n + closed form = 0
        assert!(rep.identity_residual[0] <= p.ulps(1e3));
    }

    #[test]
    fn determinacy_report_two_atom_shapes() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = lam2i();
        let rep =
            determinacy_indicator(&c, &lam, 1, &DeterminacyThresholds::default()).unwrap();
        assert_eq!(rep.s.len(), 2);
        // S_n nondecreasing and equal to paper sum + boundary
        assert!(rep.s[1] >= rep.s[0]);
        for n in 0..2 {
            let sum = Float::with_val(128, &rep.paper_sums[n] + &rep.boundary[n]);
            assert!((rep.s[n].clone() - sum).abs() <= p.ulps(64.0));
        }
        // radii 1/8 and 3/40
        assert!((rep.radii[0].clone() - 0.125f64).abs() < p.ulps(1e2));
        let want = p.real(3.0) / p.real(40.0);
        assert!((rep.radii[1].clone() - want).abs() < p.ulps(1e3));
    }
}
