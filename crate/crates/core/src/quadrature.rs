//! Quadrature discretizations of interval densities.
//!
//! These supply measures with large finite support for deep-recursion
//! experiments: an n-atom measure yields a rational Cauchy transform whose
//! Schur chain terminates at step n, so experiments wanting depth d use
//! discretizations with n well above d.

use crate::error::{Error, Result};
use crate::measure::{fixup_unit_mass, DiscreteMeasure};
use crate::precision::Precision;
use rug::float::Constant;
use rug::Float;

/// Interval density to discretize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Density {
    /// Constant density on the interval.
    Uniform,
    /// Chebyshev (arcsine) density, 1/(pi*sqrt(1-x^2)) on the reference
    /// interval.
    Chebyshev,
}

/// n-point Gauss discretization of `density` on `[a, b]`, renormalized to a
/// probability measure. Atoms are strictly inside the interval.
pub fn gauss_discretize(
    prec: Precision,
    density: Density,
    interval: (f64, f64),
    n: usize,
) -> Result<DiscreteMeasure> {
    let (a, b) = interval;
    if !(a < b) {
        return Err(Error::InvalidInput {
            what: "interval".into(),
            reason: format!("need a < b, got [{a}, {b}]"),
        });
    }
    if n == 0 {
        return Err(Error::InvalidInput {
            what: "quadrature".into(),
            reason: "need at least one node".into(),
        });
    }
    let mut atoms = match density {
        Density::Uniform => legendre_rule(&prec, n)?,
        Density::Chebyshev => chebyshev_rule(&prec, n),
    };
    // map [-1,1] -> [a,b]
    let half = (prec.real(b) - prec.real(a)) >> 1;
    let mid = (prec.real(a) + prec.real(b)) >> 1;
    for (x, _) in atoms.iter_mut() {
        *x *= &half;
        *x += &mid;
    }
    fixup_unit_mass(&prec, &mut atoms);
    DiscreteMeasure::new(prec, atoms)
}

/// Gauss-Legendre nodes and weights on [-1,1], weights scaled to sum 1.
fn legendre_rule(prec: &Precision, n: usize) -> Result<Vec<(Float, Float)>> {
    let bits = prec.bits();
    let pi = Float::with_val(bits, Constant::Pi);
    let tol = Float::with_val(bits, 1u8) >> (bits - 4);
    let mut atoms = Vec::with_capacity(n);
    for k in 1..=n {
        // Newton from the Chebyshev-like initial guess
        let mut x = Float::with_val(
            bits,
            &pi * Float::with_val(bits, (k as f64) - 0.25) / ((n as f64) + 0.5),
        )
        .cos();
        let mut converged = false;
        for _ in 0..200 {
            let (p, dp) = legendre_and_derivative(bits, n, &x);
            let dx = p / dp;
            x -= &dx;
            if dx.abs() <= tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::QuadratureFailure { node: k, total: n });
        }
        let (_, dp) = legendre_and_derivative(bits, n, &x);
        let one_minus = Float::with_val(bits, 1u8) - Float::with_val(bits, &x * &x);
        let w = Float::with_val(bits, 2u8) / (one_minus * Float::with_val(bits, &dp * &dp));
        atoms.push((x, w >> 1));
    }
    atoms.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    Ok(atoms)
}

fn legendre_and_derivative(bits: u32, n: usize, x: &Float) -> (Float, Float) {
    let mut p0 = Float::with_val(bits, 1u8);
    let mut p1 = x.clone();
    for j in 1..n {
        let t = Float::with_val(bits, 2 * j + 1) * x * &p1 - Float::with_val(bits, j as u32) * &p0;
        p0 = p1;
        p1 = Float::with_val(bits, t / (j as u32 + 1));
    }
    // P'_n = n (x P_n - P_{n-1}) / (x^2 - 1)
    let num = Float::with_val(bits, n as u32) * (Float::with_val(bits, x * &p1) - &p0);
    let den = Float::with_val(bits, x * x) - 1u8;
    (p1, num / den)
}

/// Gauss-Chebyshev (first kind) nodes with equal weights 1/n. The arcsine
/// density is already a probability density, so no rescaling is needed.
fn chebyshev_rule(prec: &Precision, n: usize) -> Vec<(Float, Float)> {
    let bits = prec.bits();
    let pi = Float::with_val(bits, Constant::Pi);
    let w = Float::with_val(bits, 1u8) / Float::with_val(bits, n as u32);
    let mut atoms: Vec<(Float, Float)> = (1..=n)
        .map(|k| {
            let angle = Float::with_val(bits, 2 * k as u32 - 1) * &pi
                / Float::with_val(bits, 2 * n as u32);
            (angle.cos(), w.clone())
        })
        .collect();
    atoms.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    atoms
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_single_node_is_midpoint() {
        let prec = Precision::default();
        let m = gauss_discretize(prec, Density::Uniform, (-1.0, 1.0), 1).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.atoms()[0].0.to_f64(), 0.0);
        assert_eq!(m.atoms()[0].1.to_f64(), 1.0);
    }

    #[test]
    fn uniform_two_nodes_at_inverse_sqrt3() {
        let prec = Precision::default();
        let m = gauss_discretize(prec, Density::Uniform, (-1.0, 1.0), 2).unwrap();
        let x = prec.real(3.0).sqrt().recip();
        assert!((m.atoms()[1].0.clone() - x.clone()).abs() < prec.ulps(4.0));
        assert!((m.atoms()[0].0.clone() + x.clone()).abs() < prec.ulps(4.0));
        assert!((m.atoms()[0].1.clone() - 0.5f64).abs() < prec.ulps(4.0));
    }

    #[test]
    fn chebyshev_three_nodes() {
        let prec = Precision::default();
        let m = gauss_discretize(prec, Density::Chebyshev, (-1.0, 1.0), 3).unwrap();
        // cos(pi/6), cos(pi/2), cos(5pi/6) = +-sqrt(3)/2, 0
        let s = prec.real(3.0).sqrt() >> 1u32;
        let top: Float = m.atoms()[2].0.clone();
        assert!((top - s.clone()).abs() < prec.ulps(8.0));
        assert!(m.atoms()[1].0.clone().abs() < prec.ulps(8.0));
        for (_, w) in m.atoms() {
            assert!((w.clone() * 3u8 - 1u8).abs() < prec.ulps(8.0));
        }
    }

    #[test]
    fn uniform_moments_exact_to_degree_2n_minus_1() {
        let prec = Precision::default();
        let n = 16;
        let m = gauss_discretize(prec, Density::Uniform, (-1.0, 1.0), n).unwrap();
        let tol = prec.ulps(1e2);
        for deg in 0..(2 * n as u32) {
            // uniform probability moment on [-1,1]: 0 for odd, 1/(deg+1) for even
            let want = if deg % 2 == 1 {
                prec.real(0.0)
            } else {
                prec.real(1.0) / prec.real((deg + 1) as f64)
            };
            let got = m.moment(deg);
            let scale = prec.real(1.0).max(&want.clone().abs());
            assert!(
                (got - want.clone()).abs() / scale <= tol,
                "degree {deg} moment off"
            );
        }
    }

    #[test]
    fn chebyshev_even_moments_central_binomial() {
        let prec = Precision::default();
        let n = 8;
        let m = gauss_discretize(prec, Density::Chebyshev, (-1.0, 1.0), n).unwrap();
        let tol = prec.ulps(1e2);
        for k in 0..n as u32 {
            // int x^{2k} d(arcsine) = binom(2k, k) / 4^k
            let mut c = prec.real(1.0);
            for i in 0..k {
                c *= prec.real((2 * k - i) as f64);
                c /= prec.real((i + 1) as f64);
            }
            let want = c / (prec.real(1.0) << (2 * k));
            let got = m.moment(2 * k);
            assert!((got - want.clone()).abs() / want <= tol, "moment 2k={k} off");
            if 2 * k + 1 < 2 * n as u32 {
                assert!(m.moment(2 * k + 1).abs() <= tol, "odd moment nonzero");
            }
        }
    }

    #[test]
    fn scaled_interval_atoms_inside() {
        let prec = Precision::default();
        let m = gauss_discretize(prec, Density::Uniform, (0.0, 3.0), 12).unwrap();
        for (t, _) in m.atoms() {
            assert!(t.to_f64() > 0.0 && t.to_f64() < 3.0);
        }
        // first moment of uniform prob density on [0,3] is 1.5
        assert!((m.moment(1) - 1.5f64).abs() < prec.ulps(64.0));
    }

    #[test]
    fn invalid_inputs() {
        let prec = Precision::default();
        assert!(gauss_discretize(prec, Density::Uniform, (1.0, 1.0), 4).is_err());
        assert!(gauss_discretize(prec, Density::Uniform, (0.0, 1.0), 0).is_err());
    }
}
