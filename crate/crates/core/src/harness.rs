//! End-to-end experiments: interpolation verification, convergence tables,
//! classical-limit checks, identity-residual suites, and the named fixtures
//! they run on.
//!
//! The standard fixtures are versioned constants: the 64-node uniform
//! discretization on [-1, 1], the node walk z_k = k/(k+1) + i (divergent
//! Blaschke trend), and a 5 x 4 evaluation grid over [-2, 2] x [0.5, 2].
//! Acceptance numbers are pinned against these exact objects.

use crate::cplx::Cplx;
use crate::error::{Error, Result};
use crate::herglotz::InterpolationProblem;
use crate::measure::DiscreteMeasure;
use crate::par;
use crate::pencil::PencilCoefficients;
use crate::precision::Precision;
use crate::quadrature::{gauss_discretize, Density};
use crate::recurrence::{
    christoffel_darboux_residual, eval_pq, orthogonality_check, ostrogradsky_residual,
    pade_value, pade_value_median, PadeRoute,
};
use crate::schur::{build_chain_from_measure, build_chain_from_values, SchurChain};
use crate::weyl::blaschke_sum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use std::time::{Duration, Instant};

/// Number of quadrature nodes in the standard measure fixture.
pub const STANDARD_NODES: usize = 64;

/// sigma = (delta_{-1} + delta_{+1}) / 2, the smallest fixture with a
/// nontrivial chain (terminates at level 1).
pub fn two_atom_measure(prec: Precision) -> DiscreteMeasure {
    DiscreteMeasure::from_f64_normalized(prec, &[(-1.0, 0.5), (1.0, 0.5)])
        .expect("two-atom fixture is valid")
}

/// 64-node Gauss-Legendre discretization of the uniform density on [-1, 1].
pub fn uniform64_measure(prec: Precision) -> DiscreteMeasure {
    gauss_discretize(prec, Density::Uniform, (-1.0, 1.0), STANDARD_NODES)
        .expect("standard quadrature fixture")
}

/// Standard node walk z_k = k/(k+1) + i (all on the horizontal line Im = 1,
/// accumulating at 1 + i; the Blaschke sum diverges).
pub fn standard_points(prec: &Precision, count: usize) -> Vec<Cplx> {
    (0..count)
        .map(|k| {
            Cplx::new(
                prec.real(k as f64) / prec.real(k as f64 + 1.0),
                prec.real(1.0),
            )
        })
        .collect()
}

/// Rapidly shrinking nodes z_k = i 4^{-k} (convergent Blaschke sum).
pub fn shrinking_points(prec: &Precision, count: usize) -> Vec<Cplx> {
    (0..count)
        .map(|k| Cplx::new(prec.real(0.0), prec.real(4f64.powi(-(k as i32)))))
        .collect()
}

/// Standard 20-point evaluation grid: Re in {-2, -1, 0, 1, 2} times
/// Im in {0.5, 1.25, 1.5, 2} (the Im row avoids the fixture node line
/// Im = 1, so every grid point stays clear of the interpolation nodes).
pub fn standard_grid(prec: &Precision) -> Vec<Cplx> {
    let mut out = Vec::with_capacity(20);
    for re in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        for im in [0.5, 1.25, 1.5, 2.0] {
            out.push(Cplx::from_f64(prec, re, im));
        }
    }
    out
}

/// Build the coefficient table of a measure-backed chain.
pub fn coefficients(measure: &DiscreteMeasure, points: &[Cplx], depth: usize) -> Result<PencilCoefficients> {
    let chain = build_chain_from_measure(measure, points, depth)?;
    PencilCoefficients::from_chain(&chain)
}

/// One interpolation-residual row.
#[derive(Debug, Clone)]
pub struct InterpolationRow {
    pub j: usize,
    pub z: Cplx,
    pub target: Cplx,
    pub residual: Float,
    pub conj_residual: Float,
}

#[derive(Debug, Clone)]
pub struct InterpolationReport {
    pub n: usize,
    pub rows: Vec<InterpolationRow>,
    pub max_residual: Float,
}

/// Verify the interpolation property of m_{[0,n]} at the nodes (and their
/// conjugates) against exact transform values.
pub fn run_interpolation_check(
    measure: &DiscreteMeasure,
    points: &[Cplx],
    n: usize,
) -> Result<InterpolationReport> {
    let prec = *measure.prec();
    let coeffs = coefficients(measure, points, n + 1)?;
    let n_eff = coeffs.len() - 1;
    let idx: Vec<usize> = (0..=n_eff).collect();
    let rows: Vec<Result<InterpolationRow>> = par::map_ordered(&idx, |&j| {
        let z = &points[j];
        let target = measure.cauchy_transform(z)?;
        let got = pade_value(&coeffs, z, n_eff, PadeRoute::Ratio)?;
        let zc = z.conj();
        let got_c = pade_value(&coeffs, &zc, n_eff, PadeRoute::Ratio)?;
        Ok(InterpolationRow {
            j,
            z: z.clone(),
            residual: got.dist(&target),
            conj_residual: got_c.dist(&target.conj()),
            target,
        })
    });
    let mut out = Vec::with_capacity(rows.len());
    let mut worst = prec.real(0.0);
    for r in rows {
        let row = r?;
        worst = worst.max(&row.residual).max(&row.conj_residual);
        out.push(row);
    }
    Ok(InterpolationReport {
        n: n_eff,
        rows: out,
        max_residual: worst,
    })
}

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub n: usize,
    pub sup_error: Float,
    pub interp_residual: Float,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub fixture: String,
    pub precision_bits: u32,
    pub rows: Vec<ConvergenceRow>,
    pub grid: Vec<Cplx>,
    pub blaschke_divergent: bool,
    pub runtime: Duration,
}

impl ConvergenceReport {
    /// Ratio of the last sup-error to the first (depth-gain figure).
    pub fn final_over_initial(&self) -> Float {
        let first = &self.rows.first().expect("nonempty").sup_error;
        let last = &self.rows.last().expect("nonempty").sup_error;
        Float::with_val(first.prec(), last / first)
    }
}

/// Sup-norm convergence experiment over a grid: for each depth n up to
/// `n_max`, the sup over the grid of the median-route error against the
/// exact transform, plus the worst interpolation residual at the used
/// nodes.
pub fn run_convergence(
    measure: &DiscreteMeasure,
    points: &[Cplx],
    n_max: usize,
    grid: &[Cplx],
    fixture: &str,
) -> Result<ConvergenceReport> {
    let start = Instant::now();
    let prec = *measure.prec();
    validate_grid(&prec, measure, points, grid)?;
    let bl = blaschke_sum(&prec, points, points.len())?;
    let coeffs = coefficients(measure, points, n_max + 1)?;
    let n_eff = coeffs.len() - 1;

    // per grid point: exact value and per-depth median-route errors
    let per_point: Vec<Result<Vec<Float>>> = par::map_ordered(grid, |lam| {
        let exact = measure.cauchy_transform(lam)?;
        let mut errs = Vec::with_capacity(n_eff);
        for n in 1..=n_eff {
            let m = pade_value_median(&coeffs, lam, n)?;
            errs.push(m.dist(&exact));
        }
        Ok(errs)
    });
    let mut sup = vec![prec.real(0.0); n_eff];
    for col in per_point {
        let col = col?;
        for (n, e) in col.into_iter().enumerate() {
            if e > sup[n] {
                sup[n] = e;
            }
        }
    }

    let node_idx: Vec<usize> = (0..=n_eff.min(points.len() - 1)).collect();
    let interp: Vec<Result<Vec<Float>>> = par::map_ordered(&node_idx, |&j| {
        let z = &points[j];
        let exact = measure.cauchy_transform(z)?;
        let mut res = Vec::with_capacity(n_eff);
        for n in 1..=n_eff {
            if j <= n {
                let m = pade_value(&coeffs, z, n, PadeRoute::Ratio)?;
                res.push(m.dist(&exact));
            } else {
                res.push(prec.real(0.0));
            }
        }
        Ok(res)
    });
    let mut interp_max = vec![prec.real(0.0); n_eff];
    for col in interp {
        let col = col?;
        for (n, e) in col.into_iter().enumerate() {
            if e > interp_max[n] {
                interp_max[n] = e;
            }
        }
    }

    let rows = (1..=n_eff)
        .map(|n| ConvergenceRow {
            n,
            sup_error: sup[n - 1].clone(),
            interp_residual: interp_max[n - 1].clone(),
        })
        .collect();
    Ok(ConvergenceReport {
        fixture: fixture.to_string(),
        precision_bits: prec.bits(),
        rows,
        grid: grid.to_vec(),
        blaschke_divergent: bl.divergence_trend,
        runtime: start.elapsed(),
    })
}

fn validate_grid(
    prec: &Precision,
    measure: &DiscreteMeasure,
    points: &[Cplx],
    grid: &[Cplx],
) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidInput {
            what: "grid".into(),
            reason: "empty".into(),
        });
    }
    let quarter = prec.real(0.25);
    let geo = prec.geo_tol();
    for g in grid {
        if g.im().clone().abs() < quarter {
            return Err(Error::InvalidInput {
                what: "grid".into(),
                reason: format!("point {:?} too close to the real axis", g),
            });
        }
        for z in points {
            if g.dist(z) <= (z.abs() + 1u8) * geo.clone() {
                return Err(Error::InvalidInput {
                    what: "grid".into(),
                    reason: format!("point {:?} collides with node {:?}", g, z),
                });
            }
        }
        let _ = measure;
    }
    Ok(())
}

/// Sequential twin of the convergence grid sweep (same outputs, no thread
/// pool); used to verify scheduling independence and by the benches.
pub fn grid_errors_seq(
    measure: &DiscreteMeasure,
    coeffs: &PencilCoefficients,
    grid: &[Cplx],
    n: usize,
) -> Result<Vec<Float>> {
    let cols: Vec<Result<Float>> = par::map_ordered_seq(grid, |lam| {
        let exact = measure.cauchy_transform(lam)?;
        Ok(pade_value_median(coeffs, lam, n)?.dist(&exact))
    });
    cols.into_iter().collect()
}

/// Parallel-path grid sweep with the same reduction order.
pub fn grid_errors(
    measure: &DiscreteMeasure,
    coeffs: &PencilCoefficients,
    grid: &[Cplx],
    n: usize,
) -> Result<Vec<Float>> {
    let cols: Vec<Result<Float>> = par::map_ordered(grid, |lam| {
        let exact = measure.cauchy_transform(lam)?;
        Ok(pade_value_median(coeffs, lam, n)?.dist(&exact))
    });
    cols.into_iter().collect()
}

#[derive(Debug, Clone)]
pub struct ClassicalRow {
    pub r: f64,
    pub level: usize,
    /// The off-diagonal J entry b_j (tends to 0 as R grows).
    pub d_j: Float,
    /// b_j |z_j| (tends to the classical coefficient).
    pub b_ratio: Float,
    pub classical_b: Float,
    /// a1_j / a2_j (tends to the classical diagonal).
    pub a_ratio: Float,
    pub classical_a: Float,
}

#[derive(Debug, Clone)]
pub struct ClassicalLimitReport {
    /// Classical Jacobi coefficients (a~_j, b~_j) of the measure, computed
    /// by the discrete Stieltjes procedure (the independent reference).
    pub reference: Vec<(Float, Float)>,
    pub rows: Vec<ClassicalRow>,
    /// Per-R max entrywise deviation of the J section from the identity.
    pub j_deviation: Vec<(f64, Float)>,
}

/// Classical Jacobi coefficients of a discrete measure by the Stieltjes
/// orthogonalization over the atoms.
pub fn stieltjes_coefficients(measure: &DiscreteMeasure, n: usize) -> Vec<(Float, Float)> {
    let prec = measure.prec();
    let bits = prec.bits();
    let atoms = measure.atoms();
    let mut p_prev = vec![Float::with_val(bits, 0u8); atoms.len()];
    let mut p_cur = vec![Float::with_val(bits, 1u8); atoms.len()];
    let mut b_prev = Float::with_val(bits, 1u8);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut a = Float::with_val(bits, 0u8);
        for (i, (t, w)) in atoms.iter().enumerate() {
            a += Float::with_val(bits, t * w) * Float::with_val(bits, &p_cur[i] * &p_cur[i]);
        }
        let mut next: Vec<Float> = (0..atoms.len())
            .map(|i| {
                let shift = Float::with_val(bits, &atoms[i].0 - &a);
                shift * &p_cur[i] - Float::with_val(bits, &b_prev * &p_prev[i])
            })
            .collect();
        let mut norm2 = Float::with_val(bits, 0u8);
        for (i, (_, w)) in atoms.iter().enumerate() {
            norm2 += Float::with_val(bits, &next[i] * &next[i]) * w;
        }
        let b = norm2.sqrt();
        for v in next.iter_mut() {
            *v /= &b;
        }
        out.push((a, b.clone()));
        p_prev = p_cur;
        p_cur = next;
        b_prev = b;
    }
    out
}

/// Drive the chain at interpolation nodes i*R*(1 + k/1000) for each R and
/// compare the extracted coefficients to the classical Jacobi data of the
/// same measure.
pub fn run_classical_limit(
    measure: &DiscreteMeasure,
    n_levels: usize,
    r_list: &[f64],
) -> Result<ClassicalLimitReport> {
    if n_levels == 0 {
        return Err(Error::InvalidInput {
            what: "classical limit".into(),
            reason: "need at least one level".into(),
        });
    }
    let prec = *measure.prec();
    let reference = stieltjes_coefficients(measure, n_levels);
    let mut rows = Vec::new();
    let mut j_dev = Vec::new();
    for &r in r_list {
        if !(r > 0.0) {
            return Err(Error::InvalidInput {
                what: "classical limit".into(),
                reason: format!("radius {r} must be positive"),
            });
        }
        let points: Vec<Cplx> = (0..n_levels)
            .map(|k| {
                let scale = prec.real(1.0) + prec.real(k as f64) / prec.real(1000.0);
                Cplx::new(prec.real(0.0), prec.real(r) * scale)
            })
            .collect();
        let coeffs = coefficients(measure, &points, n_levels)?;
        let mut dev = prec.real(0.0);
        for (j, lv) in coeffs.levels().iter().enumerate() {
            let d2 = Float::with_val(prec.bits(), &lv.b * &lv.b);
            dev = dev.max(&d2);
            if j + 1 < coeffs.len() {
                dev = dev.max(&lv.b);
            }
            rows.push(ClassicalRow {
                r,
                level: j,
                d_j: lv.b.clone(),
                b_ratio: Float::with_val(prec.bits(), &lv.b * &lv.z.abs()),
                classical_b: reference[j].1.clone(),
                a_ratio: Float::with_val(prec.bits(), &lv.a1 / &lv.a2),
                classical_a: reference[j].0.clone(),
            });
        }
        j_dev.push((r, dev));
    }
    Ok(ClassicalLimitReport {
        reference,
        rows,
        j_deviation: j_dev,
    })
}

/// Worst residuals of the algebraic identity suite over a random sample of
/// evaluation points.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub depth: usize,
    pub samples: usize,
    pub seed: u64,
    pub max_ostrogradsky: Float,
    pub max_christoffel_darboux: Float,
    pub max_route_disagreement: Float,
    pub max_hat_defect: Float,
    /// Orthogonality results (measure-backed runs only).
    pub gram_defect: Option<Float>,
    pub hat_p1_residual: Option<Float>,
    pub runtime: Duration,
}

impl IdentityReport {
    pub fn worst(&self) -> Float {
        let mut w = self.max_ostrogradsky.clone();
        w = w.max(&self.max_christoffel_darboux);
        w = w.max(&self.max_route_disagreement);
        w = w.max(&self.max_hat_defect);
        if let Some(g) = &self.gram_defect {
            w = w.max(g);
        }
        if let Some(h) = &self.hat_p1_residual {
            w = w.max(h);
        }
        w
    }
}

/// Draw deterministic sample points in [-2, 2] x [0.25, 2]; the f64 draws
/// lift exactly into any working precision, so the sample is identical
/// across precisions.
pub fn sample_lambdas(prec: &Precision, count: usize, seed: u64) -> Vec<Cplx> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let re = rng.gen_range(-2.0..2.0);
            let im = rng.gen_range(0.25..2.0);
            Cplx::from_f64(prec, re, im)
        })
        .collect()
}

/// Run the identity suite on a measure-backed chain: Ostrogradsky and
/// Christoffel-Darboux residuals, three-route Pade agreement, hat-route
/// cross-checks, and the orthogonality table.
pub fn run_identity_suite(
    measure: &DiscreteMeasure,
    points: &[Cplx],
    depth: usize,
    n_lambdas: usize,
    seed: u64,
) -> Result<IdentityReport> {
    let start = Instant::now();
    let prec = *measure.prec();
    let coeffs = coefficients(measure, points, depth)?;
    let report = identity_core(&prec, &coeffs, n_lambdas, seed)?;

    let ortho_idx = 6.min(coeffs.len().saturating_sub(1)).min(measure.len().saturating_sub(2));
    let gram = orthogonality_check(measure, &coeffs, ortho_idx)?;
    let hat_resid = gram
        .unnormalized_hat_p1_integral
        .dist(&Cplx::from_real(gram.expected_hat_p1.clone()));
    Ok(IdentityReport {
        gram_defect: Some(gram.max_defect),
        hat_p1_residual: Some(hat_resid),
        runtime: start.elapsed(),
        ..report
    })
}

/// Identity suite over an already-built coefficient table (values-only
/// pipelines use this form; no orthogonality section).
pub fn run_identity_suite_on_coeffs(
    prec: &Precision,
    coeffs: &PencilCoefficients,
    n_lambdas: usize,
    seed: u64,
) -> Result<IdentityReport> {
    identity_core(prec, coeffs, n_lambdas, seed)
}

fn identity_core(
    prec: &Precision,
    coeffs: &PencilCoefficients,
    n_lambdas: usize,
    seed: u64,
) -> Result<IdentityReport> {
    let start = Instant::now();
    let depth = coeffs.len();
    let n_top = depth - 1;
    let lambdas = sample_lambdas(prec, n_lambdas, seed);
    let zetas = sample_lambdas(prec, n_lambdas, seed ^ 0x9e3779b97f4a7c15);

    let per: Vec<Result<(Float, Float, Float, Float)>> =
        par::map_ordered(&(0..n_lambdas).collect::<Vec<_>>(), |&i| {
            let lam = &lambdas[i];
            let zeta = &zetas[i];
            let mut ostro = prec.real(0.0);
            for n in 0..depth {
                ostro = ostro.max(&ostrogradsky_residual(coeffs, lam, n)?);
            }
            let cd = christoffel_darboux_residual(coeffs, lam, zeta, n_top)?;
            let a = pade_value(coeffs, lam, n_top, PadeRoute::Ratio)?;
            let b = pade_value(coeffs, lam, n_top, PadeRoute::ContinuedFraction)?;
            let c = pade_value(coeffs, lam, n_top, PadeRoute::Matrix)?;
            let scale = a.abs().max(&b.abs()).max(&c.abs());
            let mut route = a.dist(&b).max(&b.dist(&c)).max(&a.dist(&c));
            route = route / scale;
            let hats = eval_pq(coeffs, lam, n_top, true)?;
            Ok((ostro, cd, route, hats.hat_defect.unwrap()))
        });

    let mut report = IdentityReport {
        depth,
        samples: n_lambdas,
        seed,
        max_ostrogradsky: prec.real(0.0),
        max_christoffel_darboux: prec.real(0.0),
        max_route_disagreement: prec.real(0.0),
        max_hat_defect: prec.real(0.0),
        gram_defect: None,
        hat_p1_residual: None,
        runtime: Duration::default(),
    };
    for r in per {
        let (o, cd, rt, hd) = r?;
        report.max_ostrogradsky = report.max_ostrogradsky.max(&o);
        report.max_christoffel_darboux = report.max_christoffel_darboux.max(&cd);
        report.max_route_disagreement = report.max_route_disagreement.max(&rt);
        report.max_hat_defect = report.max_hat_defect.max(&hd);
    }
    report.runtime = start.elapsed();
    Ok(report)
}

/// Cross-pipeline check: build the chain from the measure and from the
/// value table it induces, and report the worst relative coefficient gap.
pub fn pipeline_agreement(
    measure: &DiscreteMeasure,
    points: &[Cplx],
    depth: usize,
) -> Result<(SchurChain, SchurChain, Float)> {
    let prec = *measure.prec();
    let by_measure = build_chain_from_measure(measure, points, depth)?;
    // feed the values pipeline at elevated precision so the comparison
    // tests implementation agreement on consistent data, not the intrinsic
    // conditioning of rounded inputs
    let gp = prec.guarded(depth);
    let values: Vec<Cplx> = points
        .iter()
        .take(depth)
        .map(|z| {
            let zg = Cplx::new(
                Float::with_val(gp.bits(), z.re()),
                Float::with_val(gp.bits(), z.im()),
            );
            measure.cauchy_transform(&zg)
        })
        .collect::<Result<_>>()?;
    let problem = InterpolationProblem::new(prec, points[..depth].to_vec(), values)?;
    let by_values = build_chain_from_values(&problem, depth)?;
    let mut worst = prec.real(0.0);
    for (a, b) in by_measure.steps().iter().zip(by_values.steps()) {
        let da1 = (a.a1.clone() - &b.a1).abs()
            / a.a1.clone().abs().max(&prec.real(1.0));
        let da2 = (a.a2.clone() - &b.a2).abs() / a.a2.clone();
        worst = worst.max(&da1).max(&da2);
        if a.b2.clone() > 0 {
            let db = (a.b2.clone() - &b.b2).abs() / a.b2.clone();
            worst = worst.max(&db);
        }
    }
    Ok((by_measure, by_values, worst))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn interpolation_two_atom_exact() {
        let p = prec();
        let m = two_atom_measure(p);
        let pts = vec![Cplx::i(&p), Cplx::from_f64(&p, 0.0, 2.0)];
        let rep = run_interpolation_check(&m, &pts, 1).unwrap();
        assert_eq!(rep.n, 1);
        assert!(rep.max_residual <= p.ulps(1e2));
        let rep0 = run_interpolation_check(&m, &pts[..1], 0).unwrap();
        assert!(rep0.max_residual <= p.ulps(1e2));
    }

    #[test]
    fn convergence_two_atom_exhausts() {
        let p = prec();
        let m = two_atom_measure(p);
        let pts = standard_points(&p, 2);
        let grid = standard_grid(&p);
        let rep = run_convergence(&m, &pts, 1, &grid, "two_atom").unwrap();
        assert_eq!(rep.rows.len(), 1);
        assert!(rep.rows[0].sup_error <= p.ulps(1e2));
    }

    #[test]
    fn convergence_rejects_bad_grid() {
        let p = prec();
        let m = two_atom_measure(p);
        let pts = standard_points(&p, 2);
        let low = vec![Cplx::from_f64(&p, 0.0, 0.1)];
        assert!(run_convergence(&m, &pts, 1, &low, "x").is_err());
        let on_node = vec![pts[0].clone()];
        assert!(run_convergence(&m, &pts, 1, &on_node, "x").is_err());
    }

    #[test]
    fn parallel_and_sequential_grid_identical() {
        let p = prec();
        let m = uniform64_measure(p);
        let pts = standard_points(&p, 5);
        let coeffs = coefficients(&m, &pts, 5).unwrap();
        let grid = standard_grid(&p);
        let a = grid_errors(&m, &coeffs, &grid, 4).unwrap();
        let b = grid_errors_seq(&m, &coeffs, &grid, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn classical_limit_two_atom() {
        let p = prec();
        let m = two_atom_measure(p);
        let rep = run_classical_limit(&m, 1, &[10.0, 100.0]).unwrap();
        // classical reference: a~_0 = 0, b~_0 = 1
        assert!(rep.reference[0].0.clone().abs() < p.ulps(16.0));
        assert!((rep.reference[0].1.clone() - 1u8).abs() < p.ulps(16.0));
        // d_0 = 1/R exactly for this measure; scaled coefficient is exactly 1
        for row in &rep.rows {
            let want_d = p.real(1.0) / p.real(row.r);
            assert!((row.d_j.clone() - &want_d).abs() < p.ulps(64.0) * want_d.clone());
            assert!((row.b_ratio.clone() - 1u8).abs() < p.ulps(1e2));
        }
        // deviation from identity decreases with R
        assert!(rep.j_deviation[1].1 < rep.j_deviation[0].1);
    }

    #[test]
    fn stieltjes_uniform_reference() {
        let p = prec();
        let m = uniform64_measure(p);
        let r = stieltjes_coefficients(&m, 3);
        // Legendre-type coefficients of the uniform probability measure:
        // b~_0 = 1/sqrt(3), b~_1 = 2/sqrt(15)
        assert!(r[0].0.clone().abs() < p.ulps(1e3));
        let want0 = p.real(3.0).sqrt().recip();
        assert!((r[0].1.clone() - &want0).abs() < p.ulps(1e3));
        let want1 = p.real(2.0) / p.real(15.0).sqrt();
        assert!((r[1].1.clone() - &want1).abs() < p.ulps(1e3));
    }

    #[test]
    fn identity_suite_smoke_depth4() {
        let p = prec();
        let m = uniform64_measure(p);
        let pts = standard_points(&p, 4);
        let rep = run_identity_suite(&m, &pts, 4, 10, 7).unwrap();
        assert!(rep.max_ostrogradsky.to_f64() < 1e-30);
        assert!(rep.max_christoffel_darboux.to_f64() < 1e-30);
        assert!(rep.max_route_disagreement <= p.ulps(1e3));
        assert!(rep.max_hat_defect <= p.ulps(1e3));
        assert!(rep.gram_defect.as_ref().unwrap() <= &p.ulps(1e3));
    }

    #[test]
    fn pipeline_agreement_uniform_depth8() {
        let p = prec();
        let m = uniform64_measure(p);
        let pts = standard_points(&p, 8);
        let (_, _, gap) = pipeline_agreement(&m, &pts, 8).unwrap();
        assert!(gap <= p.ulps(1e3), "gap {:e}", gap.to_f64());
    }

    #[test]
    fn sample_lambdas_deterministic_and_in_box() {
        let p = prec();
        let a = sample_lambdas(&p, 32, 99);
        let b = sample_lambdas(&p, 32, 99);
        assert_eq!(a, b);
        for lam in &a {
            let re = lam.re().to_f64();
            let im = lam.im().to_f64();
            assert!((-2.0..2.0).contains(&re));
            assert!((0.25..2.0).contains(&im));
        }
    }
}
