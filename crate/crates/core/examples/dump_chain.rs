//! Dump fixture atoms and chain coefficients at full precision.

use nppencil::harness::*;
use nppencil::report::fmt_float;
use nppencil::schur::build_chain_from_measure;
use nppencil::Precision;

fn main() {
    let p = Precision::new(128).unwrap();
    let m = uniform64_measure(p);
    let pts = standard_points(&p, 14);
    let chain = build_chain_from_measure(&m, &pts, 13).unwrap();
    for (t, w) in m.atoms() {
        println!("ATOM {} {}", fmt_float(t, 128), fmt_float(w, 128));
    }
    for s in chain.steps() {
        println!(
            "STEP {} {} {} {} {}",
            s.level,
            fmt_float(&s.a1, 128),
            fmt_float(&s.a2, 128),
            fmt_float(&s.b2, 128),
            fmt_float(s.z.re(), 128),
        );
    }
}
