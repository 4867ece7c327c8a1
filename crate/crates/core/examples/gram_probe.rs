//! Bisect the Gram-defect error source: same 128-bit coefficients, but the
//! per-atom evaluation and accumulation carried at 128 vs 320 bits.

use nppencil::harness::*;
use nppencil::pencil::PencilCoefficients;
use nppencil::recurrence::eval_pq;
use nppencil::schur::build_chain_from_measure;
use nppencil::{Cplx, Precision};
use rug::Float;

fn gram_defect(coeffs: &PencilCoefficients, m: &nppencil::DiscreteMeasure, j: usize, eval_bits: u32) -> f64 {
    let mut rows = Vec::new();
    for (t, w) in m.atoms() {
        let lam = Cplx::from_real(Float::with_val(eval_bits, t));
        let rec = eval_pq(coeffs, &lam, j, true).unwrap();
        let hats = rec.hat_p.unwrap();
        let f: Vec<Cplx> = (0..=j)
            .map(|k| {
                if k == 0 {
                    hats[0].clone()
                } else {
                    &hats[k] + &hats[k - 1].scale(&coeffs.level(k - 1).j_off)
                }
            })
            .collect();
        rows.push((Float::with_val(eval_bits, w), f));
    }
    let mut worst = 0f64;
    for p in 0..=j {
        for q in 0..=j {
            let mut acc = Cplx::new(Float::with_val(eval_bits, 0u8), Float::with_val(eval_bits, 0u8));
            for (w, f) in &rows {
                acc = acc + (&f[p] * &f[q].conj()).scale(w);
            }
            let target = if p == q { 1.0 } else { 0.0 };
            let d = (acc - Cplx::from_f64(&Precision::new(eval_bits).unwrap(), target, 0.0)).abs();
            worst = worst.max(d.to_f64());
        }
    }
    worst
}

fn main() {
    let p128 = Precision::new(128).unwrap();
    let m = uniform64_measure(p128);
    let pts = standard_points(&p128, 14);
    let chain = build_chain_from_measure(&m, &pts, 13).unwrap();
    let coeffs = PencilCoefficients::from_chain(&chain).unwrap();
    for bits in [128u32, 192, 320] {
        println!("eval bits {bits}: defect {:e}", gram_defect(&coeffs, &m, 6, bits));
    }
}
