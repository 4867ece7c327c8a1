//! Scratch probe: prints the fixture quantities the acceptance suite pins.

use nppencil::harness::*;
use nppencil::pencil::{assemble, PencilCoefficients};
use nppencil::recurrence::orthogonality_check;
use nppencil::schur::build_chain_from_measure;
use nppencil::weyl::{weyl_disk, DeterminacyThresholds, determinacy_indicator, DiskMethod};
use nppencil::{Cplx, Precision};
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let p128 = Precision::new(128).unwrap();
    let m = uniform64_measure(p128);
    let pts = standard_points(&p128, 14);

    let t = Instant::now();
    let chain = build_chain_from_measure(&m, &pts, 13).unwrap();
    println!("chain depth 13 build: {:?}", t.elapsed());
    let coeffs = PencilCoefficients::from_chain(&chain).unwrap();
    let pencil = assemble(&coeffs, 12).unwrap();

    // criterion 3 goldens
    for n in [0, 4, 8, 12] {
        let v = pencil.j_inverse_entry(n).unwrap();
        println!("jinv n={n}: {:.30e}", v.to_f64());
        if n == 12 {
            println!("jinv12 full: {}", nppencil::report::fmt_float(&v, 128));
        }
    }

    // criterion 8: gram defect at idx 6 (128-bit)
    let t = Instant::now();
    let g = orthogonality_check(&m, &coeffs, 6).unwrap();
    println!(
        "gram defect idx6 (64-node, 128b): {:e}  [{:?}]",
        g.max_defect.to_f64(),
        t.elapsed()
    );
    println!(
        "hat_p1 normalized: {:e} (want -b0 = {:e}), unnormalized resid: {:e}",
        g.hat_p1_integral.re().to_f64(),
        -coeffs.level(0).b.to_f64(),
        g.unnormalized_hat_p1_integral
            .dist(&Cplx::from_real(g.expected_hat_p1.clone()))
            .to_f64()
    );

    // criterion 2: identity suite at 256-bit depth 12, 100 lambdas
    let t = Instant::now();
    let p256 = Precision::new(256).unwrap();
    let m256 = uniform64_measure(p256);
    let pts256 = standard_points(&p256, 13);
    let rep = run_identity_suite(&m256, &pts256, 12, 100, 2024).unwrap();
    println!(
        "identity suite 256b depth12: ostro {:e} cd {:e} route {:e} hat {:e} gram {:e} [{:?}]",
        rep.max_ostrogradsky.to_f64(),
        rep.max_christoffel_darboux.to_f64(),
        rep.max_route_disagreement.to_f64(),
        rep.max_hat_defect.to_f64(),
        rep.gram_defect.as_ref().unwrap().to_f64(),
        t.elapsed()
    );

    // identity suite at 128-bit (for the unit property threshold)
    let t = Instant::now();
    let rep128 = run_identity_suite(&m, &pts, 12, 100, 2024).unwrap();
    println!(
        "identity suite 128b depth12: ostro {:e} cd {:e} route {:e} hat {:e} [{:?}]",
        rep128.max_ostrogradsky.to_f64(),
        rep128.max_christoffel_darboux.to_f64(),
        rep128.max_route_disagreement.to_f64(),
        rep128.max_hat_defect.to_f64(),
        t.elapsed()
    );

    // criterion 5: convergence at 256-bit
    let t = Instant::now();
    let grid256 = standard_grid(&p256);
    let conv = run_convergence(&m256, &pts256, 12, &grid256, "uniform64").unwrap();
    for row in &conv.rows {
        println!("conv n={} sup={:e} interp={:e}", row.n, row.sup_error.to_f64(), row.interp_residual.to_f64());
    }
    println!(
        "ratio 12/4: {:e}, blaschke divergent: {} [{:?}]",
        (conv.rows[11].sup_error.to_f64() / conv.rows[3].sup_error.to_f64()),
        conv.blaschke_divergent,
        t.elapsed()
    );
    println!("golden sup12: {}", nppencil::report::fmt_float(&conv.rows[11].sup_error, 256));

    // criterion 6 spot: disk agreement at depth 12 over random lambdas (128b)
    let t = Instant::now();
    let lams = sample_lambdas(&p128, 50, 7);
    let mut worst_disk = 0f64;
    for lam in &lams {
        for j in [4usize, 8, 12] {
            let a = weyl_disk(&coeffs, lam, j, DiskMethod::Determinant).unwrap();
            let b = weyl_disk(&coeffs, lam, j, DiskMethod::ThreePointFit).unwrap();
            let dc = a.center.dist(&b.center).to_f64() / a.radius.to_f64();
            let dr = ((a.radius.clone() - &b.radius).abs() / a.radius.clone()).to_f64();
            worst_disk = worst_disk.max(dc).max(dr);
        }
    }
    println!("disk method agreement worst (rel): {:e} [{:?}]", worst_disk, t.elapsed());

    // determinacy on the fixture at 2i
    let det = determinacy_indicator(
        &coeffs,
        &Cplx::from_f64(&p128, 0.0, 2.0),
        12,
        &DeterminacyThresholds::default(),
    )
    .unwrap();
    println!(
        "determinacy: S_12 = {:e}, r_first = {:e}, r_last = {:e}, growth = {:.3}, class = {:?}",
        det.s[12].to_f64(),
        det.radii[0].to_f64(),
        det.radii[12].to_f64(),
        det.growth_exponent,
        det.classification
    );

    // weyl solution residual trend with m = exact phi(2i)
    let lam = Cplx::from_f64(&p128, 0.0, 2.0);
    let mval = m.cauchy_transform(&lam).unwrap();
    let ws = nppencil::weyl::weyl_solution_residual(&coeffs, &lam, 12, &mval).unwrap();
    for (n, d) in ws.d.iter().enumerate() {
        if n % 3 == 0 || n == 12 {
            println!("weyl D_{n} = {:e} (identity resid {:e})", d.to_f64(), ws.identity_residual[n].to_f64());
        }
    }

    // eigenvalues at order 10/11 interlacing timing
    let t = Instant::now();
    let e10 = assemble(&coeffs, 10).unwrap().eigenvalues().unwrap();
    let e11 = assemble(&coeffs, 11).unwrap().eigenvalues().unwrap();
    println!(
        "eig order10 {:?} .. order11 {:?} [{:?}]",
        e10.first().map(|x| x.to_f64()),
        e11.last().map(|x| x.to_f64()),
        t.elapsed()
    );

    println!("total: {:?}", t0.elapsed());
}
