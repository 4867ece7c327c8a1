//! Small multiprecision linear-algebra kernels used by the pencil module:
//! tridiagonal LDL^T solves, dense LU with partial pivoting, and a cyclic
//! Jacobi eigensolver for Hermitian matrices. Sections are desk-scale
//! (tens of rows), so clarity wins over asymptotics.

use crate::cplx::Cplx;
use crate::error::{Error, Result};
use rug::Float;

/// LDL^T factorization of a symmetric positive definite tridiagonal matrix
/// given by `diag` and `off` (off-diagonal). Returns `(d, l)` with unit
/// lower-bidiagonal L. Fails if a pivot is not strictly positive.
pub(crate) fn ldl_tridiag(diag: &[Float], off: &[Float]) -> Result<(Vec<Float>, Vec<Float>)> {
    let n = diag.len();
    assert!(off.len() + 1 == n, "off-diagonal length mismatch");
    let mut d = Vec::with_capacity(n);
    let mut l = Vec::with_capacity(n.saturating_sub(1));
    d.push(diag[0].clone());
    for j in 1..n {
        if !(d[j - 1].clone() > 0) {
            return Err(Error::SingularJ { order: n - 1 });
        }
        let lj = Float::with_val(off[j - 1].prec(), &off[j - 1] / &d[j - 1]);
        let prod = Float::with_val(lj.prec(), &lj * &off[j - 1]);
        let dj = Float::with_val(diag[j].prec(), &diag[j] - &prod);
        l.push(lj);
        d.push(dj);
    }
    if !(d[n - 1].clone() > 0) {
        return Err(Error::SingularJ { order: n - 1 });
    }
    Ok((d, l))
}

/// Solve `A x = e_0` for SPD tridiagonal `A` via its LDL^T factors.
pub(crate) fn solve_ldl_e0(d: &[Float], l: &[Float]) -> Vec<Float> {
    let n = d.len();
    let bits = d[0].prec();
    // forward: L y = e0
    let mut y = vec![Float::with_val(bits, 0u8); n];
    y[0] = Float::with_val(bits, 1u8);
    for j in 1..n {
        y[j] = -Float::with_val(bits, &l[j - 1] * &y[j - 1]);
    }
    // diagonal and back substitution: D z = y, L^T x = z
    let mut x: Vec<Float> = y
        .iter()
        .zip(d)
        .map(|(yj, dj)| Float::with_val(bits, yj / dj))
        .collect();
    for j in (0..n - 1).rev() {
        let t = Float::with_val(bits, &l[j] * &x[j + 1]);
        x[j] -= t;
    }
    x
}

/// Determinant of a real symmetric tridiagonal section by the three-term
/// minor recursion.
pub(crate) fn tridiag_det_real(diag: &[Float], off: &[Float]) -> Float {
    let n = diag.len();
    let bits = diag.first().map_or(53, |f| f.prec());
    let mut dm1 = Float::with_val(bits, 1u8);
    if n == 0 {
        return dm1;
    }
    let mut d = diag[0].clone();
    for j in 1..n {
        let o2 = Float::with_val(bits, &off[j - 1] * &off[j - 1]);
        let next = Float::with_val(bits, &diag[j] * &d) - o2 * &dm1;
        dm1 = d;
        d = next;
    }
    d
}

/// Solve `A x = b` for a dense complex matrix by LU with partial pivoting.
pub(crate) fn lu_solve(mut a: Vec<Vec<Cplx>>, mut b: Vec<Cplx>) -> Result<Vec<Cplx>> {
    let n = a.len();
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col][col].abs();
        for (r, row) in a.iter().enumerate().skip(col + 1) {
            let mag = row[col].abs();
            if mag > best {
                best = mag;
                piv = r;
            }
        }
        if best.is_zero() {
            return Err(Error::SingularPencil {
                lambda: "zero pivot in resolvent solve".into(),
            });
        }
        if piv != col {
            a.swap(piv, col);
            b.swap(piv, col);
        }
        let inv = a[col][col].recip();
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for c in (col + 1)..n {
                let t = &factor * &a[col][c];
                a[r][c] = &a[r][c] - &t;
            }
            b[r] = &b[r] - &(&factor * &b[col]);
        }
    }
    let mut x = b;
    for col in (0..n).rev() {
        let mut acc = x[col].clone();
        for c in (col + 1)..n {
            acc = acc - &a[col][c] * &x[c];
        }
        x[col] = acc / &a[col][col];
    }
    Ok(x)
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each rotation annihilates one off-diagonal pair through a unitary plane
/// rotation; off-diagonal mass decays quadratically over sweeps. Returns
/// the eigenvalues sorted ascending.
pub(crate) fn hermitian_eigenvalues(mut m: Vec<Vec<Cplx>>, bits: u32) -> Result<Vec<Float>> {
    let n = m.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[0][0].re().clone()]);
    }
    let mut frob2 = Float::with_val(bits, 0u8);
    for row in &m {
        for v in row {
            frob2 += v.norm_sqr();
        }
    }
    let stop = frob2.sqrt() >> (bits - 6);
    let max_sweeps = 100;

    for _ in 0..max_sweeps {
        let mut off2 = Float::with_val(bits, 0u8);
        for (p, row) in m.iter().enumerate() {
            for v in row.iter().skip(p + 1) {
                off2 += v.norm_sqr();
            }
        }
        if off2.sqrt() <= stop {
            let mut eig: Vec<Float> = (0..n).map(|j| m[j][j].re().clone()).collect();
            eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
            return Ok(eig);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p][q].clone();
                let mag = apq.abs();
                if mag.is_zero() {
                    continue;
                }
                // phase u makes the pivot real: conj(u) * apq = |apq|
                let u = apq.unscale(&mag);
                let alpha = m[p][p].re().clone();
                let gamma = m[q][q].re().clone();
                // stable real rotation for [[alpha, |apq|], [|apq|, gamma]]
                let tau =
                    Float::with_val(bits, &gamma - &alpha) / (Float::with_val(bits, &mag) << 1u32);
                let t = if tau.is_zero() {
                    Float::with_val(bits, 1u8)
                } else {
                    let root = (Float::with_val(bits, &tau * &tau) + 1u32).sqrt();
                    let denom = tau.clone().abs() + root;
                    Float::with_val(bits, tau.signum_ref()) / denom
                };
                let c = ((Float::with_val(bits, &t * &t) + 1u32).sqrt()).recip();
                let s = Float::with_val(bits, &t * &c);
                // unitary W restricted to the (p,q) plane:
                //   W_pp = c, W_pq = s, W_qp = -conj(u) s, W_qq = conj(u) c
                let w_pp = Cplx::from_real(c.clone());
                let w_pq = Cplx::from_real(s.clone());
                let w_qp = -u.conj().scale(&s);
                let w_qq = u.conj().scale(&c);
                // columns: A <- A W
                for r in 0..n {
                    let arp = m[r][p].clone();
                    let arq = m[r][q].clone();
                    m[r][p] = &arp * &w_pp + &arq * &w_qp;
                    m[r][q] = &arp * &w_pq + &arq * &w_qq;
                }
                // rows: A <- W^H A
                for cidx in 0..n {
                    let apc = m[p][cidx].clone();
                    let aqc = m[q][cidx].clone();
                    m[p][cidx] = &apc * &w_pp.conj() + &aqc * &w_qp.conj();
                    m[q][cidx] = &apc * &w_pq.conj() + &aqc * &w_qq.conj();
                }
            }
        }
    }
    Err(Error::EigenFailure { sweeps: max_sweeps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::Precision;

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn ldl_solves_two_by_two() {
        let prec = p();
        // [[2,1],[1,1]] x = e0 -> x = (1, -1)
        let (d, l) = ldl_tridiag(&[prec.real(2.0), prec.real(1.0)], &[prec.real(1.0)]).unwrap();
        let x = solve_ldl_e0(&d, &l);
        assert!((x[0].clone() - 1u8).abs() < prec.ulps(4.0));
        assert!((x[1].clone() + 1u8).abs() < prec.ulps(4.0));
    }

    #[test]
    fn ldl_rejects_indefinite() {
        let prec = p();
        assert!(ldl_tridiag(&[prec.real(1.0), prec.real(1.0)], &[prec.real(2.0)]).is_err());
    }

    #[test]
    fn tridiag_det_matches_2x2() {
        let prec = p();
        let det = tridiag_det_real(&[prec.real(2.0), prec.real(1.0)], &[prec.real(1.0)]);
        assert_eq!(det.to_f64(), 1.0);
    }

    #[test]
    fn lu_solves_small_complex_system() {
        let prec = p();
        let a = vec![
            vec![Cplx::zero(&prec), Cplx::i(&prec)],
            vec![-Cplx::i(&prec), Cplx::one(&prec)],
        ];
        let b = vec![Cplx::one(&prec), Cplx::zero(&prec)];
        let x = lu_solve(a.clone(), b.clone()).unwrap();
        for r in 0..2 {
            let mut acc = -&b[r];
            for c in 0..2 {
                acc = acc + &a[r][c] * &x[c];
            }
            assert!(acc.abs() < prec.ulps(8.0));
        }
    }

    #[test]
    fn jacobi_eigen_hermitian_2x2() {
        let prec = p();
        // [[0, i], [-i, 0]] has eigenvalues -1, 1
        let m = vec![
            vec![Cplx::zero(&prec), Cplx::i(&prec)],
            vec![-Cplx::i(&prec), Cplx::zero(&prec)],
        ];
        let eig = hermitian_eigenvalues(m, prec.bits()).unwrap();
        assert!((eig[0].clone() + 1u8).abs() < prec.ulps(64.0));
        assert!((eig[1].clone() - 1u8).abs() < prec.ulps(64.0));
    }

    #[test]
    fn jacobi_eigen_real_coupling() {
        let prec = p();
        // [[1, 2], [2, 1]] -> {-1, 3}
        let m = vec![
            vec![Cplx::one(&prec), Cplx::from_f64(&prec, 2.0, 0.0)],
            vec![Cplx::from_f64(&prec, 2.0, 0.0), Cplx::one(&prec)],
        ];
        let eig = hermitian_eigenvalues(m, prec.bits()).unwrap();
        assert!((eig[0].clone() + 1u8).abs() < prec.ulps(64.0));
        assert!((eig[1].clone() - 3u8).abs() < prec.ulps(64.0));
    }

    #[test]
    fn jacobi_eigen_hermitian_3x3_trace_preserved() {
        let prec = p();
        let m = vec![
            vec![
                Cplx::from_f64(&prec, 2.0, 0.0),
                Cplx::from_f64(&prec, 0.5, 1.0),
                Cplx::zero(&prec),
            ],
            vec![
                Cplx::from_f64(&prec, 0.5, -1.0),
                Cplx::from_f64(&prec, -1.0, 0.0),
                Cplx::from_f64(&prec, 0.0, 0.25),
            ],
            vec![
                Cplx::zero(&prec),
                Cplx::from_f64(&prec, 0.0, -0.25),
                Cplx::from_f64(&prec, 0.5, 0.0),
            ],
        ];
        let eig = hermitian_eigenvalues(m, prec.bits()).unwrap();
        let sum: f64 = eig.iter().map(|e| e.to_f64()).sum();
        assert!((sum - 1.5).abs() < 1e-12);
        assert!(eig.windows(2).all(|w| w[0] <= w[1]));
    }
}
