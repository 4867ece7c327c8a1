//! Deterministic report serialization.
//!
//! Documents are emitted with sorted keys, and every scalar is rendered as
//! a decimal string with enough digits to round-trip the working precision
//! exactly (the document carries `precision_bits`). Identical inputs yield
//! byte-identical output.

use crate::cplx::Cplx;
use crate::error::{Error, Result};
use crate::harness::{
    ClassicalLimitReport, ConvergenceReport, IdentityReport, InterpolationReport,
};
use crate::herglotz::AuditReport;
use crate::schur::{ChainWarning, SchurChain, Termination};
use crate::weyl::{DeterminacyClass, DeterminacyReport, TangencyReport, WeylDisk};
use rug::Float;
use serde_json::{json, Map, Value};

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Decimal digits after the leading digit for a given significand width.
fn frac_digits(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
}

/// Render a scalar as a round-trip decimal string at the given width.
pub fn fmt_float(v: &Float, bits: u32) -> String {
    format!("{:.*e}", frac_digits(bits), v)
}

/// Parse a decimal string back to a scalar of the given width.
pub fn parse_float(s: &str, bits: u32) -> Result<Float> {
    Float::parse(s)
        .map(|p| Float::with_val(bits, p))
        .map_err(|e| Error::SerializationFailure(format!("bad number {s:?}: {e}")))
}

fn jnum(v: &Float, bits: u32) -> Value {
    Value::String(fmt_float(v, bits))
}

fn jcplx(c: &Cplx, bits: u32) -> Value {
    json!([fmt_float(c.re(), bits), fmt_float(c.im(), bits)])
}

/// A report ready for emission.
#[derive(Debug, Clone)]
pub enum Report {
    Convergence(ConvergenceReport),
    Interpolation {
        report: InterpolationReport,
        precision_bits: u32,
    },
    Classical {
        report: ClassicalLimitReport,
        precision_bits: u32,
    },
    Identities {
        report: IdentityReport,
        precision_bits: u32,
        threshold: f64,
    },
    Coeffs {
        chain: SchurChain,
    },
    Pade {
        precision_bits: u32,
        n: usize,
        rows: Vec<PadeRow>,
    },
    Weyl {
        precision_bits: u32,
        lambda: Cplx,
        disks: Vec<WeylDisk>,
        fit_radii: Vec<Float>,
        printed_radii: Vec<Float>,
        tangency: Vec<TangencyReport>,
        determinacy: DeterminacyReport,
    },
    Validate {
        precision_bits: u32,
        audit: AuditReport,
        config_echo: Value,
    },
}

#[derive(Debug, Clone)]
pub struct PadeRow {
    pub lambda: Cplx,
    pub median: Cplx,
    pub ratio: Cplx,
    pub cfrac: Cplx,
    pub matrix: Cplx,
}

impl Report {
    pub fn to_json_value(&self) -> Value {
        match self {
            Report::Convergence(r) => {
                let b = r.precision_bits;
                json!({
                    "kind": "convergence",
                    "fixture": r.fixture,
                    "precision_bits": b,
                    "blaschke_divergent": r.blaschke_divergent,
                    "grid": r.grid.iter().map(|g| jcplx(g, b)).collect::<Vec<_>>(),
                    "rows": r.rows.iter().map(|row| json!({
                        "n": row.n,
                        "sup_error": jnum(&row.sup_error, b),
                        "interp_resid": jnum(&row.interp_residual, b),
                    })).collect::<Vec<_>>(),
                })
            }
            Report::Interpolation {
                report,
                precision_bits: b,
            } => json!({
                "kind": "interpolation",
                "precision_bits": b,
                "n": report.n,
                "max_residual": jnum(&report.max_residual, *b),
                "rows": report.rows.iter().map(|row| json!({
                    "j": row.j,
                    "z": jcplx(&row.z, *b),
                    "residual": jnum(&row.residual, *b),
                    "conj_residual": jnum(&row.conj_residual, *b),
                })).collect::<Vec<_>>(),
            }),
            Report::Classical {
                report,
                precision_bits: b,
            } => json!({
                "kind": "classical",
                "precision_bits": b,
                "reference": report.reference.iter().map(|(a, bb)| json!({
                    "a": jnum(a, *b), "b": jnum(bb, *b),
                })).collect::<Vec<_>>(),
                "j_deviation": report.j_deviation.iter().map(|(r, d)| json!({
                    "R": r, "dev": jnum(d, *b),
                })).collect::<Vec<_>>(),
                "rows": report.rows.iter().map(|row| json!({
                    "R": row.r,
                    "level": row.level,
                    "d_j": jnum(&row.d_j, *b),
                    "b_ratio": jnum(&row.b_ratio, *b),
                    "classical_b": jnum(&row.classical_b, *b),
                    "a_ratio": jnum(&row.a_ratio, *b),
                    "classical_a": jnum(&row.classical_a, *b),
                })).collect::<Vec<_>>(),
            }),
            Report::Identities {
                report,
                precision_bits: b,
                threshold,
            } => {
                let mut m = Map::new();
                m.insert("kind".into(), json!("identities"));
                m.insert("precision_bits".into(), json!(b));
                m.insert("depth".into(), json!(report.depth));
                m.insert("samples".into(), json!(report.samples));
                m.insert("seed".into(), json!(report.seed));
                m.insert("threshold".into(), json!(threshold));
                m.insert(
                    "ostrogradsky".into(),
                    jnum(&report.max_ostrogradsky, *b),
                );
                m.insert(
                    "christoffel_darboux".into(),
                    jnum(&report.max_christoffel_darboux, *b),
                );
                m.insert(
                    "route_disagreement".into(),
                    jnum(&report.max_route_disagreement, *b),
                );
                m.insert("hat_defect".into(), jnum(&report.max_hat_defect, *b));
                if let Some(g) = &report.gram_defect {
                    m.insert("gram_defect".into(), jnum(g, *b));
                }
                if let Some(h) = &report.hat_p1_residual {
                    m.insert("hat_p1_residual".into(), jnum(h, *b));
                }
                m.insert("worst".into(), jnum(&report.worst(), *b));
                Value::Object(m)
            }
            Report::Coeffs { chain } => {
                let b = chain.prec().bits();
                let termination = match chain.termination() {
                    Termination::Open => json!({"open": true}),
                    Termination::RationalTerminated { level } => {
                        json!({"open": false, "terminated_at": level})
                    }
                };
                json!({
                    "kind": "coeffs",
                    "precision_bits": b,
                    "termination": termination,
                    "warnings": chain.warnings().iter().map(|w| match w {
                        ChainWarning::DepthExceedsSupport { depth, atoms } => {
                            format!("depth {depth} >= atom count {atoms}")
                        }
                    }).collect::<Vec<_>>(),
                    "rows": chain.steps().iter().map(|s| json!({
                        "level": s.level,
                        "z": jcplx(&s.z, b),
                        "a1": jnum(&s.a1, b),
                        "a2": jnum(&s.a2, b),
                        "b2": jnum(&s.b2, b),
                        "b": jnum(&s.b, b),
                    })).collect::<Vec<_>>(),
                })
            }
            Report::Pade {
                precision_bits: b,
                n,
                rows,
            } => json!({
                "kind": "pade",
                "precision_bits": b,
                "n": n,
                "rows": rows.iter().map(|r| json!({
                    "lambda": jcplx(&r.lambda, *b),
                    "median": jcplx(&r.median, *b),
                    "ratio": jcplx(&r.ratio, *b),
                    "cfrac": jcplx(&r.cfrac, *b),
                    "matrix": jcplx(&r.matrix, *b),
                })).collect::<Vec<_>>(),
            }),
            Report::Weyl {
                precision_bits: b,
                lambda,
                disks,
                fit_radii,
                printed_radii,
                tangency,
                determinacy,
            } => {
                let det_value = json!({
                    "s": determinacy.s.iter().map(|v| jnum(v, *b)).collect::<Vec<_>>(),
                    "paper_sums": determinacy.paper_sums.iter().map(|v| jnum(v, *b)).collect::<Vec<_>>(),
                    "radii": determinacy.radii.iter().map(|v| jnum(v, *b)).collect::<Vec<_>>(),
                    "blaschke_partials": determinacy.blaschke_partials.iter().map(|v| jnum(v, *b)).collect::<Vec<_>>(),
                    "growth_exponent": determinacy.growth_exponent,
                    "classification": match determinacy.classification {
                        DeterminacyClass::LimitPointTrend => "limit_point_trend",
                        DeterminacyClass::LimitCircleTrend => "limit_circle_trend",
                        DeterminacyClass::Inconclusive => "inconclusive",
                    },
                });
                json!({
                    "kind": "weyl",
                    "precision_bits": b,
                    "lambda": jcplx(lambda, *b),
                    "disks": disks.iter().enumerate().map(|(i, d)| json!({
                        "j": d.level,
                        "center": jcplx(&d.center, *b),
                        "radius": jnum(&d.radius, *b),
                        "radius_fit": jnum(&fit_radii[i], *b),
                        "radius_printed_formula": jnum(&printed_radii[i], *b),
                    })).collect::<Vec<_>>(),
                    "tangency": tangency.iter().map(|t| json!({
                        "common_point": jcplx(&t.common_point, *b),
                        "center_distance": jnum(&t.center_distance, *b),
                        "radius_outer": jnum(&t.radius_outer, *b),
                        "radius_inner": jnum(&t.radius_inner, *b),
                        "relation": format!("{:?}", t.relation),
                    })).collect::<Vec<_>>(),
                    "determinacy": det_value,
                })
            }
            Report::Validate {
                precision_bits: b,
                audit,
                config_echo,
            } => json!({
                "kind": "validate",
                "precision_bits": b,
                "min_im": jnum(&audit.min_im, *b),
                "min_im_at": jcplx(&audit.min_im_at, *b),
                "symmetry_defect": jnum(&audit.symmetry_defect, *b),
                "violation": audit.violation,
                "config": config_echo,
            }),
        }
    }

    /// CSV projection: the row-oriented payload of the document.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Convergence(r) => {
                let b = r.precision_bits;
                out.push_str("n,sup_error,interp_resid\n");
                for row in &r.rows {
                    out.push_str(&format!(
                        "{},{},{}\n",
                        row.n,
                        fmt_float(&row.sup_error, b),
                        fmt_float(&row.interp_residual, b)
                    ));
                }
            }
            Report::Interpolation {
                report,
                precision_bits: b,
            } => {
                out.push_str("j,z_re,z_im,residual,conj_residual\n");
                for row in &report.rows {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        row.j,
                        fmt_float(row.z.re(), *b),
                        fmt_float(row.z.im(), *b),
                        fmt_float(&row.residual, *b),
                        fmt_float(&row.conj_residual, *b)
                    ));
                }
            }
            Report::Classical {
                report,
                precision_bits: b,
            } => {
                out.push_str("R,level,d_j,b_ratio,classical_b\n");
                for row in &report.rows {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        row.r,
                        row.level,
                        fmt_float(&row.d_j, *b),
                        fmt_float(&row.b_ratio, *b),
                        fmt_float(&row.classical_b, *b)
                    ));
                }
            }
            Report::Identities {
                report,
                precision_bits: b,
                ..
            } => {
                out.push_str("metric,value\n");
                out.push_str(&format!(
                    "ostrogradsky,{}\n",
                    fmt_float(&report.max_ostrogradsky, *b)
                ));
                out.push_str(&format!(
                    "christoffel_darboux,{}\n",
                    fmt_float(&report.max_christoffel_darboux, *b)
                ));
                out.push_str(&format!(
                    "route_disagreement,{}\n",
                    fmt_float(&report.max_route_disagreement, *b)
                ));
                out.push_str(&format!(
                    "hat_defect,{}\n",
                    fmt_float(&report.max_hat_defect, *b)
                ));
                if let Some(g) = &report.gram_defect {
                    out.push_str(&format!("gram_defect,{}\n", fmt_float(g, *b)));
                }
                if let Some(h) = &report.hat_p1_residual {
                    out.push_str(&format!("hat_p1_residual,{}\n", fmt_float(h, *b)));
                }
            }
            Report::Coeffs { chain } => {
                let b = chain.prec().bits();
                out.push_str("level,z_re,z_im,a1,a2,b2,b\n");
                for s in chain.steps() {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        s.level,
                        fmt_float(s.z.re(), b),
                        fmt_float(s.z.im(), b),
                        fmt_float(&s.a1, b),
                        fmt_float(&s.a2, b),
                        fmt_float(&s.b2, b),
                        fmt_float(&s.b, b)
                    ));
                }
            }
            Report::Pade {
                precision_bits: b,
                rows,
                ..
            } => {
                out.push_str("lambda_re,lambda_im,median_re,median_im\n");
                for r in rows {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        fmt_float(r.lambda.re(), *b),
                        fmt_float(r.lambda.im(), *b),
                        fmt_float(r.median.re(), *b),
                        fmt_float(r.median.im(), *b)
                    ));
                }
            }
            Report::Weyl {
                precision_bits: b,
                disks,
                ..
            } => {
                out.push_str("j,center_re,center_im,radius\n");
                for d in disks {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        d.level,
                        fmt_float(d.center.re(), *b),
                        fmt_float(d.center.im(), *b),
                        fmt_float(&d.radius, *b)
                    ));
                }
            }
            Report::Validate {
                precision_bits: b,
                audit,
                ..
            } => {
                out.push_str("metric,value\n");
                out.push_str(&format!("min_im,{}\n", fmt_float(&audit.min_im, *b)));
                out.push_str(&format!(
                    "symmetry_defect,{}\n",
                    fmt_float(&audit.symmetry_defect, *b)
                ));
                out.push_str(&format!("violation,{}\n", audit.violation));
            }
        }
        out
    }

    /// Serialize to the requested byte encoding.
    pub fn emit(&self, format: ReportFormat) -> Result<Vec<u8>> {
        match format {
            ReportFormat::Json => {
                let value = self.to_json_value();
                let mut bytes = serde_json::to_vec_pretty(&value)
                    .map_err(|e| Error::SerializationFailure(e.to_string()))?;
                bytes.push(b'\n');
                Ok(bytes)
            }
            ReportFormat::Csv => Ok(self.to_csv().into_bytes()),
        }
    }
}

/// Convenience: emit any report as a byte stream.
pub fn emit_report(report: &Report, format: ReportFormat) -> Result<Vec<u8>> {
    report.emit(format)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::Precision;
    use crate::harness::{
        run_convergence, standard_grid, standard_points, two_atom_measure,
    };

    fn sample_convergence() -> ConvergenceReport {
        let p = Precision::default();
        let m = two_atom_measure(p);
        let pts = standard_points(&p, 2);
        run_convergence(&m, &pts, 1, &standard_grid(&p), "two_atom").unwrap()
    }

    #[test]
    fn emission_is_deterministic() {
        let rep = Report::Convergence(sample_convergence());
        let a = rep.emit(ReportFormat::Json).unwrap();
        let b = rep.emit(ReportFormat::Json).unwrap();
        assert_eq!(a, b);
        let c = rep.emit(ReportFormat::Csv).unwrap();
        let d = rep.emit(ReportFormat::Csv).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn json_round_trips_numbers_exactly() {
        let conv = sample_convergence();
        let bits = conv.precision_bits;
        let rep = Report::Convergence(conv.clone());
        let value = rep.to_json_value();
        let rows = value["rows"].as_array().unwrap();
        for (row, orig) in rows.iter().zip(&conv.rows) {
            let parsed = parse_float(row["sup_error"].as_str().unwrap(), bits).unwrap();
            assert_eq!(parsed, orig.sup_error);
        }
    }

    #[test]
    fn json_keys_sorted() {
        let rep = Report::Convergence(sample_convergence());
        let bytes = rep.emit(ReportFormat::Json).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        let pos_b = text.find("\"blaschke_divergent\"").unwrap();
        let pos_f = text.find("\"fixture\"").unwrap();
        let pos_k = text.find("\"kind\"").unwrap();
        let pos_r = text.find("\"rows\"").unwrap();
        assert!(pos_b < pos_f && pos_f < pos_k && pos_k < pos_r);
    }

    #[test]
    fn empty_report_is_valid_document() {
        let p = Precision::default();
        let rep = Report::Pade {
            precision_bits: p.bits(),
            n: 0,
            rows: Vec::new(),
        };
        let v = rep.to_json_value();
        assert!(v["rows"].as_array().unwrap().is_empty());
        assert!(rep.emit(ReportFormat::Json).is_ok());
    }

    #[test]
    fn fmt_parse_round_trip_random() {
        let p = Precision::default();
        let vals = [
            p.real(1.0) / p.real(3.0),
            p.real(-0.25),
            p.real(0.0),
            p.real(1e300) * (p.real(1.0) / p.real(7.0)),
            p.real(1e-300) / p.real(9.0),
        ];
        for v in vals {
            let s = fmt_float(&v, p.bits());
            let back = parse_float(&s, p.bits()).unwrap();
            assert_eq!(back, v, "string {s}");
        }
    }
}
