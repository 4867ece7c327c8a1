//! Run-configuration parsing and validation.
//!
//! A single json document is the only input surface. Validation failures
//! report the first offending location as a json pointer.

use nppencil::harness;
use nppencil::herglotz::InterpolationProblem;
use nppencil::quadrature::{gauss_discretize, Density};
use nppencil::{Cplx, DiscreteMeasure, Precision};
use serde::Deserialize;

/// First-error report with a json-pointer location.
#[derive(Debug, Clone)]
pub struct ConfigError {
    pub pointer: String,
    pub reason: String,
}

impl ConfigError {
    fn new(pointer: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            pointer: pointer.into(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub precision_bits: Option<u32>,
    pub measure: Option<MeasureSpec>,
    pub data: Option<DataSpec>,
    pub points: Option<PointsSpec>,
    pub depth: Option<usize>,
    pub grid: Option<GridSpec>,
    pub lambda: Option<[f64; 2]>,
    pub weyl_levels: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub identity_threshold: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub atoms: Option<Vec<AtomSpec>>,
    pub quadrature: Option<QuadratureSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub t: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub density: String,
    pub interval: [f64; 2],
    pub nodes: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSpec {
    pub points: Vec<[f64; 2]>,
    pub values: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PointsSpec {
    Explicit(Vec<[f64; 2]>),
    Generated { generator: String, count: usize },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Lattice { re: [f64; 3], im: [f64; 3] },
    Explicit { points: Vec<[f64; 2]> },
}

/// The problem input: exactly one of these is present in a valid config.
pub enum ProblemInput {
    Measure(DiscreteMeasure),
    Data(InterpolationProblem),
}

/// Fully validated configuration, with core objects constructed.
pub struct ValidatedConfig {
    pub prec: Precision,
    pub input: ProblemInput,
    pub points: Vec<Cplx>,
    pub depth: usize,
    pub grid: Vec<Cplx>,
    pub lambda: Option<Cplx>,
    pub weyl_levels: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub identity_threshold: f64,
    pub echo: serde_json::Value,
}

pub fn parse_config(bytes: &[u8]) -> Result<RunConfig, ConfigError> {
    serde_json::from_slice(bytes).map_err(|e| ConfigError::new("", format!("malformed json: {e}")))
}

/// Validate a parsed config against the core type invariants, constructing
/// the measure / problem / node list / grid along the way.
pub fn validate(
    cfg: &RunConfig,
    echo: serde_json::Value,
    precision_override: Option<u32>,
) -> Result<ValidatedConfig, ConfigError> {
    let bits = precision_override.or(cfg.precision_bits).unwrap_or(128);
    let prec = Precision::new(bits)
        .map_err(|e| ConfigError::new("/precision_bits", e.to_string()))?;

    if cfg.measure.is_some() == cfg.data.is_some() {
        return Err(ConfigError::new(
            "",
            "exactly one of `measure` and `data` must be present",
        ));
    }

    let input = if let Some(ms) = &cfg.measure {
        ProblemInput::Measure(build_measure(prec, ms)?)
    } else {
        ProblemInput::Data(build_problem(prec, cfg.data.as_ref().unwrap())?)
    };

    let points = match (&cfg.points, &input) {
        (Some(ps), _) => build_points(&prec, ps)?,
        (None, ProblemInput::Data(problem)) => problem.points().to_vec(),
        (None, ProblemInput::Measure(_)) => {
            return Err(ConfigError::new(
                "/points",
                "required when a measure is supplied",
            ))
        }
    };
    if let ProblemInput::Measure(_) = &input {
        nppencil::herglotz::validate_nodes(&prec, &points)
            .map_err(|e| ConfigError::new("/points", e.to_string()))?;
    }

    let depth = cfg.depth.unwrap_or(points.len());
    if depth == 0 || depth > points.len() {
        return Err(ConfigError::new(
            "/depth",
            format!("depth {depth} not in 1..={}", points.len()),
        ));
    }

    let grid = match &cfg.grid {
        None => harness::standard_grid(&prec),
        Some(GridSpec::Lattice { re, im }) => {
            let res = linspace(re).map_err(|r| ConfigError::new("/grid/re", r))?;
            let ims = linspace(im).map_err(|r| ConfigError::new("/grid/im", r))?;
            let mut out = Vec::with_capacity(res.len() * ims.len());
            for &r in &res {
                for &i in &ims {
                    out.push(Cplx::from_f64(&prec, r, i));
                }
            }
            out
        }
        Some(GridSpec::Explicit { points }) => points
            .iter()
            .map(|[re, im]| Cplx::from_f64(&prec, *re, *im))
            .collect(),
    };

    let lambda = cfg.lambda.map(|[re, im]| Cplx::from_f64(&prec, re, im));
    if let Some(l) = &lambda {
        if !(l.im().clone() > 0) {
            return Err(ConfigError::new(
                "/lambda",
                "must lie in the open upper half plane",
            ));
        }
    }

    Ok(ValidatedConfig {
        prec,
        input,
        points,
        depth,
        grid,
        lambda,
        weyl_levels: cfg.weyl_levels,
        samples: cfg.samples.unwrap_or(100),
        seed: cfg.seed.unwrap_or(2024),
        identity_threshold: cfg.identity_threshold.unwrap_or(1e-12),
        echo,
    })
}

fn build_measure(prec: Precision, ms: &MeasureSpec) -> Result<DiscreteMeasure, ConfigError> {
    match (&ms.atoms, &ms.quadrature) {
        (Some(_), Some(_)) | (None, None) => Err(ConfigError::new(
            "/measure",
            "exactly one of `atoms` and `quadrature` must be present",
        )),
        (Some(atoms), None) => {
            if atoms.is_empty() {
                return Err(ConfigError::new("/measure/atoms", "no atoms"));
            }
            let mut total = 0.0;
            for (i, a) in atoms.iter().enumerate() {
                if !(a.w > 0.0) {
                    return Err(ConfigError::new(
                        format!("/measure/atoms/{i}/w"),
                        "weight must be positive",
                    ));
                }
                if i > 0 && atoms[i - 1].t >= a.t {
                    return Err(ConfigError::new(
                        "/measure/atoms",
                        format!("positions must be strictly increasing (index {i})"),
                    ));
                }
                total += a.w;
            }
            if (total - 1.0).abs() > 1e-6 {
                return Err(ConfigError::new(
                    "/measure/atoms",
                    format!("weights sum to {total}, expected 1"),
                ));
            }
            let pairs: Vec<(f64, f64)> = atoms.iter().map(|a| (a.t, a.w)).collect();
            DiscreteMeasure::from_f64_normalized(prec, &pairs)
                .map_err(|e| ConfigError::new("/measure/atoms", e.to_string()))
        }
        (None, Some(q)) => {
            let density = match q.density.as_str() {
                "uniform" => Density::Uniform,
                "chebyshev" => Density::Chebyshev,
                other => {
                    return Err(ConfigError::new(
                        "/measure/quadrature/density",
                        format!("unknown density {other:?} (expected uniform|chebyshev)"),
                    ))
                }
            };
            if !(q.interval[0] < q.interval[1]) {
                return Err(ConfigError::new(
                    "/measure/quadrature/interval",
                    "need interval[0] < interval[1]",
                ));
            }
            if q.nodes == 0 {
                return Err(ConfigError::new("/measure/quadrature/nodes", "need >= 1"));
            }
            gauss_discretize(prec, density, (q.interval[0], q.interval[1]), q.nodes)
                .map_err(|e| ConfigError::new("/measure/quadrature", e.to_string()))
        }
    }
}

fn build_problem(prec: Precision, ds: &DataSpec) -> Result<InterpolationProblem, ConfigError> {
    let points: Vec<Cplx> = ds
        .points
        .iter()
        .map(|[re, im]| Cplx::from_f64(&prec, *re, *im))
        .collect();
    let values: Vec<Cplx> = ds
        .values
        .iter()
        .map(|[re, im]| Cplx::from_f64(&prec, *re, *im))
        .collect();
    InterpolationProblem::new(prec, points, values)
        .map_err(|e| ConfigError::new("/data", e.to_string()))
}

fn build_points(prec: &Precision, ps: &PointsSpec) -> Result<Vec<Cplx>, ConfigError> {
    match ps {
        PointsSpec::Explicit(list) => {
            let pts: Vec<Cplx> = list
                .iter()
                .map(|[re, im]| Cplx::from_f64(prec, *re, *im))
                .collect();
            nppencil::herglotz::validate_nodes(prec, &pts)
                .map_err(|e| ConfigError::new("/points", e.to_string()))?;
            Ok(pts)
        }
        PointsSpec::Generated { generator, count } => {
            if *count == 0 {
                return Err(ConfigError::new("/points/count", "need >= 1"));
            }
            match generator.as_str() {
                "approach_one" => Ok(harness::standard_points(prec, *count)),
                "shrinking" => Ok(harness::shrinking_points(prec, *count)),
                other => Err(ConfigError::new(
                    "/points/generator",
                    format!("unknown generator {other:?} (expected approach_one|shrinking)"),
                )),
            }
        }
    }
}

fn linspace(spec: &[f64; 3]) -> Result<Vec<f64>, String> {
    let [lo, hi, count] = *spec;
    let n = count as usize;
    if n == 0 || count.fract() != 0.0 {
        return Err("third entry must be a positive integer count".into());
    }
    if !(lo <= hi) {
        return Err("need lo <= hi".into());
    }
    if n == 1 {
        return Ok(vec![(lo + hi) / 2.0]);
    }
    Ok((0..n)
        .map(|k| lo + (hi - lo) * (k as f64) / ((n - 1) as f64))
        .collect())
}
