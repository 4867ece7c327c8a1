//! Tridiagonal linear pencil `H - lambda*J` assembled from a Schur chain.
//!
//! Per level j the pencil carries
//!
//! ```text
//!   H: diag a1_j,        off-diagonal  z_j * b_j  (Hermitian),
//!   J: diag 1 + b_j^2,   off-diagonal  b_j        (real symmetric),
//! ```
//!
//! so J factors through the unit lower-bidiagonal L with subdiagonal b_j.
//! Truncations are positive definite, their leading minors of
//! `lambda*J - H` are the first-kind polynomials, and the (0,0) resolvent
//! entry of a truncation is the multipoint Pade value.

use crate::cplx::Cplx;
use crate::error::{Error, Result};
use crate::linalg;
use crate::precision::Precision;
use crate::schur::SchurChain;
use rug::Float;

/// One level of pencil data, paired with the Schur step it came from.
#[derive(Debug, Clone)]
pub struct PencilLevel {
    pub z: Cplx,
    pub a1: Float,
    pub a2: Float,
    pub b: Float,
    pub b2: Float,
    /// H diagonal entry (= a1).
    pub h_diag: Float,
    /// H upper off-diagonal entry z*b (the lower one is its conjugate).
    pub h_off: Cplx,
    /// J diagonal entry, computed as 1 + b^2 so the L-factor reconstruction
    /// is entrywise exact.
    pub j_diag: Float,
    /// J off-diagonal entry (= b, the L subdiagonal).
    pub j_off: Float,
}

/// Full coefficient table of a chain, pencil-ready.
#[derive(Debug, Clone)]
pub struct PencilCoefficients {
    prec: Precision,
    levels: Vec<PencilLevel>,
}

impl PencilCoefficients {
    pub fn from_chain(chain: &SchurChain) -> Result<Self> {
        if chain.steps().is_empty() {
            return Err(Error::InsufficientDepth {
                requested: 0,
                needed: 1,
                available: 0,
            });
        }
        let prec = *chain.prec();
        let bits = prec.bits();
        let levels = chain
            .steps()
            .iter()
            .map(|s| {
                let d2 = Float::with_val(bits, &s.b * &s.b);
                PencilLevel {
                    z: s.z.clone(),
                    a1: s.a1.clone(),
                    a2: s.a2.clone(),
                    b: s.b.clone(),
                    b2: s.b2.clone(),
                    h_diag: s.a1.clone(),
                    h_off: s.z.scale(&s.b),
                    j_diag: Float::with_val(bits, 1u8 + &d2),
                    j_off: s.b.clone(),
                }
            })
            .collect();
        Ok(Self { prec, levels })
    }

    pub fn prec(&self) -> &Precision {
        &self.prec
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, j: usize) -> &PencilLevel {
        &self.levels[j]
    }

    pub fn levels(&self) -> &[PencilLevel] {
        &self.levels
    }

    /// The recurrence weight b_k^2 (lambda - z_k)(lambda - conj z_k).
    pub fn weight(&self, lam: &Cplx, k: usize) -> Cplx {
        let lv = &self.levels[k];
        ((lam - &lv.z) * (lam - &lv.z.conj())).scale(&lv.b2)
    }

    /// Product of recurrence weights for k in 0..n (the Wronskian value of
    /// order n).
    pub fn weight_product(&self, lam: &Cplx, n: usize) -> Cplx {
        let bits = lam.prec().max(self.prec.bits());
        let mut acc = Cplx::new(Float::with_val(bits, 1u8), Float::with_val(bits, 0u8));
        for k in 0..n {
            acc = acc * self.weight(lam, k);
        }
        acc
    }
}

/// A finite section of the pencil, with its J factor.
#[derive(Debug, Clone)]
pub struct TruncatedPencil {
    prec: Precision,
    /// Section order: rows/columns 0..=n.
    n: usize,
    h_diag: Vec<Float>,
    h_off: Vec<Cplx>,
    j_diag: Vec<Float>,
    j_off: Vec<Float>,
    /// Subdiagonal of the unit-lower-bidiagonal factor; index n belongs to
    /// the boundary row of the rectangular (n+2)x(n+1) section.
    l_sub: Vec<Float>,
}

/// Assemble the order-n truncation (needs n+1 completed chain levels).
pub fn assemble(coeffs: &PencilCoefficients, n: usize) -> Result<TruncatedPencil> {
    if coeffs.len() < n + 1 {
        return Err(Error::InsufficientDepth {
            requested: n,
            needed: n + 1,
            available: coeffs.len(),
        });
    }
    let lv = &coeffs.levels[..=n];
    Ok(TruncatedPencil {
        prec: coeffs.prec,
        n,
        h_diag: lv.iter().map(|l| l.h_diag.clone()).collect(),
        h_off: lv[..n].iter().map(|l| l.h_off.clone()).collect(),
        j_diag: lv.iter().map(|l| l.j_diag.clone()).collect(),
        j_off: lv[..n].iter().map(|l| l.j_off.clone()).collect(),
        l_sub: lv.iter().map(|l| l.j_off.clone()).collect(),
    })
}

impl TruncatedPencil {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn prec(&self) -> &Precision {
        &self.prec
    }

    pub fn j_diagonal(&self) -> &[Float] {
        &self.j_diag
    }

    pub fn j_offdiagonal(&self) -> &[Float] {
        &self.j_off
    }

    /// Dense H entry (Hermitian tridiagonal).
    pub fn h_entry(&self, r: usize, c: usize) -> Cplx {
        let bits = self.prec.bits();
        if r == c {
            Cplx::from_real(self.h_diag[r].clone())
        } else if c == r + 1 {
            self.h_off[r].clone()
        } else if r == c + 1 {
            self.h_off[c].conj()
        } else {
            Cplx::new(Float::with_val(bits, 0u8), Float::with_val(bits, 0u8))
        }
    }

    /// Dense J entry (real symmetric tridiagonal).
    pub fn j_entry(&self, r: usize, c: usize) -> Float {
        let bits = self.prec.bits();
        if r == c {
            self.j_diag[r].clone()
        } else if c == r + 1 || r == c + 1 {
            self.j_off[r.min(c)].clone()
        } else {
            Float::with_val(bits, 0u8)
        }
    }

    /// Subdiagonal of the unit-lower-bidiagonal factor L (length n+1; the
    /// final entry sits in the boundary row of the rectangular section).
    pub fn l_subdiag(&self) -> &[Float] {
        &self.l_sub
    }

    /// Entrywise product conj(L)^T * L of the rectangular (n+2)x(n+1)
    /// factor section. Equals the assembled J bit-for-bit.
    pub fn reconstruct_j_from_l(&self) -> Vec<Vec<Float>> {
        let bits = self.prec.bits();
        let n1 = self.n + 1;
        let mut out = vec![vec![Float::with_val(bits, 0u8); n1]; n1];
        for r in 0..n1 {
            for c in 0..n1 {
                out[r][c] = if r == c {
                    let d2 = Float::with_val(bits, &self.l_sub[r] * &self.l_sub[r]);
                    Float::with_val(bits, 1u8 + &d2)
                } else if c == r + 1 || r == c + 1 {
                    self.l_sub[r.min(c)].clone()
                } else {
                    Float::with_val(bits, 0u8)
                };
            }
        }
        out
    }

    /// P_j(lambda) = det of the leading j x j section of lambda*J - H,
    /// by the tridiagonal minor recursion on the matrix entries. P_0 = 1.
    pub fn charpoly_p(&self, lam: &Cplx, j: usize) -> Cplx {
        assert!(j <= self.n + 1, "charpoly_p order out of range");
        self.det_section(lam, 0, j)
    }

    /// Q_j(lambda) = det over rows/columns 1..=j-1 of lambda*J - H.
    /// Conventions: Q_0 = 0, Q_1 = 1 (empty determinant).
    pub fn charpoly_q(&self, lam: &Cplx, j: usize) -> Cplx {
        assert!(j <= self.n + 1, "charpoly_q order out of range");
        let bits = lam.prec();
        if j == 0 {
            return Cplx::new(Float::with_val(bits, 0u8), Float::with_val(bits, 0u8));
        }
        self.det_section(lam, 1, j - 1)
    }

    /// det of the k x k section of lambda*J - H starting at row/col `start`.
    fn det_section(&self, lam: &Cplx, start: usize, k: usize) -> Cplx {
        let bits = lam.prec().max(self.prec.bits());
        let one = Cplx::new(Float::with_val(bits, 1u8), Float::with_val(bits, 0u8));
        if k == 0 {
            return one;
        }
        let dg = |r: usize| lam.scale(&self.j_diag[r]) - Cplx::from_real(self.h_diag[r].clone());
        let mut prev = one;
        let mut cur = dg(start);
        for m in 1..k {
            let r = start + m;
            let up = lam.scale(&self.j_off[r - 1]) - &self.h_off[r - 1];
            let lo = lam.scale(&self.j_off[r - 1]) - &self.h_off[r - 1].conj();
            let next = dg(r) * &cur - up * lo * &prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Real-arithmetic sequence (P_0(x), ..., P_{n+1}(x)) at real x; feeds
    /// the sign-count eigenvalue isolation.
    fn charpoly_p_sequence_real(&self, x: &Float) -> Vec<Float> {
        let bits = x.prec().max(self.prec.bits());
        let mut seq = Vec::with_capacity(self.n + 2);
        seq.push(Float::with_val(bits, 1u8));
        let dg = |r: usize| Float::with_val(bits, x * &self.j_diag[r]) - &self.h_diag[r];
        let mut prev = Float::with_val(bits, 1u8);
        let mut cur = dg(0);
        seq.push(cur.clone());
        for r in 1..=self.n {
            // (x d - b)(x d - conj b) at real x = (x d - Re b)^2 + (Im b)^2
            let re = Float::with_val(bits, x * &self.j_off[r - 1]) - self.h_off[r - 1].re();
            let im = self.h_off[r - 1].im();
            let w = Float::with_val(bits, &re * &re) + Float::with_val(bits, im * im);
            let next = dg(r) * &cur - w * &prev;
            prev = cur;
            cur = next;
            seq.push(cur.clone());
        }
        seq
    }

    /// (0,0) entry of the inverse of J_{[0,m]}, by an LDL^T tridiagonal
    /// solve. Always in (0, 1] on valid chains.
    pub fn j_inverse_entry(&self, m: usize) -> Result<Float> {
        assert!(m <= self.n, "section order out of range");
        let (d, l) = linalg::ldl_tridiag(&self.j_diag[..=m], &self.j_off[..m])?;
        Ok(linalg::solve_ldl_e0(&d, &l)[0].clone())
    }

    /// Same quantity by the backward continued fraction with partial
    /// numerators b_k^2 (cross-check route).
    pub fn j_inverse_cfrac(&self, m: usize) -> Float {
        let bits = self.prec.bits();
        let mut t = self.j_diag[m].clone();
        for k in (0..m).rev() {
            let num = Float::with_val(bits, &self.j_off[k] * &self.j_off[k]);
            t = self.j_diag[k].clone() - num / t;
        }
        t.recip()
    }

    /// Diagnostic variant with first-power partial numerators b_k; kept to
    /// document that it does NOT reproduce `j_inverse_entry` (the squared
    /// form does).
    pub fn j_inverse_cfrac_first_power(&self, m: usize) -> Float {
        let mut t = self.j_diag[m].clone();
        for k in (0..m).rev() {
            t = self.j_diag[k].clone() - self.j_off[k].clone() / t;
        }
        t.recip()
    }

    /// theta_m = det J_{[0,m]} / det J_{[1,m]} and
    /// eta_m = det J_{[0,m]} / det J_{[0,m-1]} (empty denominator is 1 at
    /// m = 0). Both strictly positive.
    pub fn normalizing_ratios(&self, m: usize) -> (Float, Float) {
        assert!(m <= self.n, "section order out of range");
        let det_full = linalg::tridiag_det_real(&self.j_diag[..=m], &self.j_off[..m]);
        let theta = if m == 0 {
            det_full.clone()
        } else {
            let det_tail = linalg::tridiag_det_real(&self.j_diag[1..=m], &self.j_off[1..m]);
            Float::with_val(det_full.prec(), &det_full / &det_tail)
        };
        let eta = if m == 0 {
            det_full
        } else {
            let det_head = linalg::tridiag_det_real(&self.j_diag[..m], &self.j_off[..m - 1]);
            Float::with_val(det_full.prec(), &det_full / &det_head)
        };
        (theta, eta)
    }

    /// All leading principal determinants of J_{[0,n]} (positivity check).
    pub fn j_leading_minors(&self) -> Vec<Float> {
        (0..=self.n)
            .map(|m| linalg::tridiag_det_real(&self.j_diag[..=m], &self.j_off[..m]))
            .collect()
    }

    /// The n+1 real zeros of P_{n+1}, ascending: generalized eigenvalues of
    /// (H, J) via the Hermitian matrix obtained by two-sided scaling of H
    /// with the inverse bidiagonal factor of J (elementwise square roots of
    /// the positive pivots only; no matrix square root is formed).
    pub fn eigenvalues(&self) -> Result<Vec<Float>> {
        let bits = self.prec.bits();
        let n1 = self.n + 1;
        let (d, l) = linalg::ldl_tridiag(&self.j_diag, &self.j_off)?;
        // X = Lambda^{-1} H (row sweep)
        let mut x: Vec<Vec<Cplx>> = (0..n1)
            .map(|r| (0..n1).map(|c| self.h_entry(r, c)).collect())
            .collect();
        for r in 1..n1 {
            for c in 0..n1 {
                let t = x[r - 1][c].scale(&l[r - 1]);
                x[r][c] = &x[r][c] - &t;
            }
        }
        // Y = X Lambda^{-H} (column sweep)
        for c in 1..n1 {
            for r in 0..n1 {
                let t = x[r][c - 1].scale(&l[c - 1]);
                x[r][c] = &x[r][c] - &t;
            }
        }
        // M = D^{-1/2} Y D^{-1/2}
        let roots: Vec<Float> = d.iter().map(|v| v.clone().sqrt()).collect();
        for (r, row) in x.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                let scale = Float::with_val(bits, &roots[r] * &roots[c]);
                *v = v.unscale(&scale);
            }
        }
        linalg::hermitian_eigenvalues(x, bits)
    }

    /// Number of zeros of P_{n+1} strictly above `x`, by Sylvester sign
    /// counting on the leading-minor sequence of x*J - H.
    pub fn count_zeros_above(&self, x: &Float) -> usize {
        let seq = self.charpoly_p_sequence_real(x);
        let mut changes = 0usize;
        let mut prev = 1i32;
        for v in seq.iter().skip(1) {
            let s = if *v > 0 {
                1
            } else if *v < 0 {
                -1
            } else {
                -prev
            };
            if s != prev {
                changes += 1;
            }
            prev = s;
        }
        changes
    }

    /// Zeros of P_{n+1} by bisection on the sign-count function; an
    /// implementation-independent cross-check for [`Self::eigenvalues`].
    pub fn eigenvalues_by_bisection(&self) -> Result<Vec<Float>> {
        let bits = self.prec.bits();
        let n1 = self.n + 1;
        let mut radius = Float::with_val(bits, 2u8);
        for _ in 0..256 {
            let lo_ok = self.count_zeros_above(&(-radius.clone())) == n1;
            let hi_ok = self.count_zeros_above(&radius) == 0;
            if lo_ok && hi_ok {
                break;
            }
            radius <<= 1u32;
        }
        let mut out = Vec::with_capacity(n1);
        for i in 0..n1 {
            // the i-th ascending zero: the count stays >= n1 - i to its left
            let want = n1 - i;
            let mut lo = -radius.clone();
            let mut hi = radius.clone();
            for _ in 0..(bits as usize + 16) {
                let mid = Float::with_val(bits, &lo + &hi) >> 1u32;
                if self.count_zeros_above(&mid) >= want {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(Float::with_val(bits, &lo + &hi) >> 1u32);
        }
        Ok(out)
    }

    /// m-function of the section: the (0,0) entry of (H - lambda*J)^{-1},
    /// by a dense partial-pivoting solve. Satisfies |m| <= 1/|Im lambda|.
    pub fn mfun_via_matrix(&self, lam: &Cplx) -> Result<Cplx> {
        if lam.im().is_zero() {
            return Err(Error::SingularPencil {
                lambda: format!("{:?}", lam),
            });
        }
        let bits = lam.prec().max(self.prec.bits());
        let n1 = self.n + 1;
        let a: Vec<Vec<Cplx>> = (0..n1)
            .map(|r| {
                (0..n1)
                    .map(|c| {
                        let jl = lam.scale(&self.j_entry(r, c));
                        self.h_entry(r, c) - jl
                    })
                    .collect()
            })
            .collect();
        let mut rhs =
            vec![Cplx::new(Float::with_val(bits, 0u8), Float::with_val(bits, 0u8)); n1];
        rhs[0] = Cplx::new(Float::with_val(bits, 1u8), Float::with_val(bits, 0u8));
        let x = linalg::lu_solve(a, rhs)?;
        Ok(x[0].clone())
    }
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

    #[test]
    fn assembled_two_atom_sections() {
        let p = prec();
        let c = two_atom_coeffs();
        let t = assemble(&c, 1).unwrap();
        // H = [[0, i], [-i, 0]]
        assert!(t.h_entry(0, 0).abs() < p.ulps(4.0));
        assert!((t.h_entry(0, 1) - Cplx::i(&p)).abs() < p.ulps(8.0));
        assert!((t.h_entry(1, 0) + Cplx::i(&p)).abs() < p.ulps(8.0));
        // J = [[2, 1], [1, 1]]
        assert!((t.j_entry(0, 0) - 2u8).abs() < p.ulps(8.0));
        assert!((t.j_entry(0, 1) - 1u8).abs() < p.ulps(8.0));
        assert!((t.j_entry(1, 1) - 1u8).abs() < p.ulps(8.0));
        let t0 = assemble(&c, 0).unwrap();
        assert!((t0.j_entry(0, 0) - 2u8).abs() < p.ulps(8.0));
        assert!(t0.h_entry(0, 0).abs() < p.ulps(4.0));
    }

    #[test]
    fn l_reconstruction_is_bit_exact() {
        let c = two_atom_coeffs();
        for n in 0..=1 {
            let t = assemble(&c, n).unwrap();
            let rec = t.reconstruct_j_from_l();
            for r in 0..=n {
                for cidx in 0..=n {
                    assert_eq!(rec[r][cidx], t.j_entry(r, cidx), "entry ({r},{cidx})");
                }
            }
        }
    }

    #[test]
    fn insufficient_depth_rejected() {
        let c = two_atom_coeffs();
        assert!(matches!(
            assemble(&c, 2),
            Err(Error::InsufficientDepth { .. })
        ));
    }

    #[test]
    fn charpoly_two_atom_values() {
        let p = prec();
        let c = two_atom_coeffs();
        let t = assemble(&c, 1).unwrap();
        let lam = Cplx::from_f64(&p, 0.0, 2.0);
        // P_2 = lambda^2 - 1 -> -5 at 2i
        let p2 = t.charpoly_p(&lam, 2);
        assert!((p2 - Cplx::from_f64(&p, -5.0, 0.0)).abs() < p.ulps(64.0));
        // P_1 = 2 lambda -> 2i at i
        let p1 = t.charpoly_p(&Cplx::i(&p), 1);
        assert!((p1 - Cplx::from_f64(&p, 0.0, 2.0)).abs() < p.ulps(16.0));
        // Q_2 = lambda -> 2i at 2i
        let q2 = t.charpoly_q(&lam, 2);
        assert!((q2 - Cplx::from_f64(&p, 0.0, 2.0)).abs() < p.ulps(64.0));
        // conventions
        assert!(t.charpoly_q(&lam, 0).is_zero());
        assert!((t.charpoly_q(&lam, 1) - Cplx::one(&p)).abs() < p.ulps(4.0));
        assert!((t.charpoly_p(&lam, 0) - Cplx::one(&p)).abs() < p.ulps(4.0));
    }

    #[test]
    fn j_inverse_entries_two_atom() {
        let p = prec();
        let c = two_atom_coeffs();
        let t = assemble(&c, 1).unwrap();
        let v0 = t.j_inverse_entry(0).unwrap();
        assert!((v0.clone() - 0.5f64).abs() < p.ulps(8.0));
        let v1 = t.j_inverse_entry(1).unwrap();
        assert!((v1.clone() - 1u8).abs() < p.ulps(8.0));
        // backward continued fraction with squared numerators agrees
        let c1 = t.j_inverse_cfrac(1);
        assert!((c1 - v1.clone()).abs() < p.ulps(16.0));
        assert!(v1 <= 1);
    }

    #[test]
    fn normalizing_ratios_two_atom() {
        let p = prec();
        let c = two_atom_coeffs();
        let t = assemble(&c, 1).unwrap();
        let (theta, eta) = t.normalizing_ratios(1);
        assert!((theta - 1u8).abs() < p.ulps(16.0));
        assert!((eta - 0.5f64).abs() < p.ulps(16.0));
        let (_, eta0) = t.normalizing_ratios(0);
        assert!((eta0 - 2u8).abs() < p.ulps(8.0));
        for m in t.j_leading_minors() {
            assert!(m > 0);
        }
    }

    #[test]
    fn eigenvalues_two_atom() {
        let p = prec();
        let c = two_atom_coeffs();
        let t1 = assemble(&c, 1).unwrap();
        let e = t1.eigenvalues().unwrap();
        assert_eq!(e.len(), 2);
        assert!((e[0].clone() + 1u8).abs() < p.ulps(1e3));
        assert!((e[1].clone() - 1u8).abs() < p.ulps(1e3));
        let t0 = assemble(&c, 0).unwrap();
        let e0 = t0.eigenvalues().unwrap();
        assert!(e0[0].clone().abs() < p.ulps(1e3));
        // interlacing: 0 in (-1, 1)
        assert!(e[0] < e0[0] && e0[0] < e[1]);
    }

    #[test]
    fn bisection_agrees_with_jacobi() {
        let p = prec();
        let c = two_atom_coeffs();
        let t = assemble(&c, 1).unwrap();
        let a = t.eigenvalues().unwrap();
        let b = t.eigenvalues_by_bisection().unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.clone() - y.clone()).abs() < p.ulps(1e4));
        }
    }

    #[test]
    fn mfun_two_atom() {
        let p = prec();
        let c = two_atom_coeffs();
        let lam = Cplx::from_f64(&p, 0.0, 2.0);
        let t1 = assemble(&c, 1).unwrap();
        let m = t1.mfun_via_matrix(&lam).unwrap();
        // exact phi(2i) = 2i/5
        let want = Cplx::new(p.real(0.0), p.real(2.0) / p.real(5.0));
        assert!((&m - &want).abs() < p.ulps(64.0));
        // resolvent bound |m| <= 1/|Im lambda|
        assert!(m.abs() <= p.real(0.5) + p.ulps(16.0));
        let t0 = assemble(&c, 0).unwrap();
        let m0 = t0.mfun_via_matrix(&Cplx::i(&p)).unwrap();
        let half_i = Cplx::from_f64(&p, 0.0, 0.5);
        assert!((m0 - half_i).abs() < p.ulps(16.0));
        // real lambda is rejected
        assert!(t1.mfun_via_matrix(&Cplx::one(&p)).is_err());
    }

    #[test]
    fn sign_count_two_atom() {
        let p = prec();
        let c = two_atom_coeffs();
        let t = assemble(&c, 1).unwrap();
        assert_eq!(t.count_zeros_above(&p.real(-2.0)), 2);
        assert_eq!(t.count_zeros_above(&p.real(0.5)), 1);
        assert_eq!(t.count_zeros_above(&p.real(2.0)), 0);
    }
}
