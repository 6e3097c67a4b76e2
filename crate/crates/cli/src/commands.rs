//! One function per subcommand. Each runs its analysis on every level of
//! the configured refinement ladder and returns the report plus any field
//! files (written from the coarsest level).

use std::path::Path;
use std::sync::Arc;

use clifford_orlicz::analysis::decompose::DecompositionDiagnostics;
use clifford_orlicz::analysis::{
    bergman_decompose, bergman_decompose_sobolev, manufactured_bvp, mapping_probe, random_field,
    random_zero_trace_field, solve_first_order_bvp, BuiltinField, BvpConfig, BvpSummary,
    DualTrials, ProbeConfig, ProbeOperator, ProbeReport,
};
use clifford_orlicz::grid::io::{
    read_boundary_field, read_field, write_boundary_field, write_field,
};
use clifford_orlicz::grid::{dirac_apply, trace_restrict};
use clifford_orlicz::orlicz::{clifford_luxembourg_norm, slobodeckji_norm, sobolev_norm};
use clifford_orlicz::transforms::{
    borel_pompeiu_residual, cauchy_boundary_on_grid, right_inverse_error, teodorescu,
};
use clifford_orlicz::{BoundaryField64, BoundaryMesh64, GridDomain64, MultivectorField64};
use serde::Serialize;

use crate::config::{BvpData, FieldSource, RunConfig};
use crate::error::CliError;

/// A file produced next to the report.
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

pub struct Outcome {
    pub report: serde_json::Value,
    pub artifacts: Vec<Artifact>,
}

#[derive(Debug, Serialize)]
struct GridInfo {
    h: f64,
    cells: usize,
    facets: usize,
}

/// Values of one metric across the levels with successive ratios
/// `value[l + 1] / value[l]`.
#[derive(Debug, Serialize)]
struct Series {
    metric: String,
    values: Vec<f64>,
    ratios: Vec<Option<f64>>,
}

impl Series {
    fn new(metric: impl Into<String>, values: Vec<f64>) -> Self {
        let ratios = values
            .windows(2)
            .map(|w| if w[0] != 0.0 { Some(w[1] / w[0]) } else { None })
            .collect();
        Self {
            metric: metric.into(),
            values,
            ratios,
        }
    }
}

#[derive(Debug, Serialize)]
struct Report<'a, L: Serialize> {
    command: &'static str,
    config: &'a RunConfig,
    levels: Vec<L>,
    convergence: Vec<Series>,
}

struct Level {
    domain: Arc<GridDomain64>,
    mesh: Arc<BoundaryMesh64>,
}

impl Level {
    fn grid(&self) -> GridInfo {
        GridInfo {
            h: self.domain.h(),
            cells: self.domain.len(),
            facets: self.mesh.len(),
        }
    }
}

fn levels(cfg: &RunConfig, file_input: bool) -> Result<Vec<Level>, CliError> {
    cfg.spacings(file_input)
        .into_iter()
        .enumerate()
        .map(|(l, h)| {
            let (domain, mesh) = cfg.domain.build(h, l as u32)?;
            Ok(Level { domain, mesh })
        })
        .collect()
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load_field(
    source: &FieldSource,
    level: &Level,
    seed: u64,
) -> Result<MultivectorField64, CliError> {
    let d = &level.domain;
    Ok(match source {
        FieldSource::Builtin { name } => name.sample(d)?,
        FieldSource::Random {
            index,
            zero_trace: false,
        } => random_field(d, seed, *index)?,
        FieldSource::Random {
            index,
            zero_trace: true,
        } => random_zero_trace_field(d, seed, *index)?,
        FieldSource::File { path } => {
            read_field(&read_text(path)?, d).map_err(|e| CliError::Input(path.clone(), e))?
        }
    })
}

fn load_boundary(path: &Path, level: &Level) -> Result<BoundaryField64, CliError> {
    read_boundary_field(&read_text(path)?, &level.mesh)
        .map_err(|e| CliError::Input(path.to_path_buf(), e))
}

/// Boundary values of a builtin evaluated on the facet centres.
fn builtin_trace(name: BuiltinField, level: &Level) -> Result<BoundaryField64, CliError> {
    let region = level.domain.region().clone();
    let mut data = Vec::with_capacity(level.mesh.len() << region.dim());
    for i in 0..level.mesh.len() {
        data.extend_from_slice(name.eval(&region, level.mesh.center(i))?.coeffs());
    }
    Ok(BoundaryField64::from_data(level.mesh.clone(), data)?)
}

fn finish<L: Serialize>(
    command: &'static str,
    cfg: &RunConfig,
    levels: Vec<L>,
    convergence: Vec<Series>,
    artifacts: Vec<Artifact>,
) -> Result<Outcome, CliError> {
    let report = Report {
        command,
        config: cfg,
        levels,
        convergence,
    };
    let report = serde_json::to_value(&report).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(Outcome { report, artifacts })
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

#[derive(Debug, Serialize)]
struct OrderValue {
    k: usize,
    value: f64,
}

#[derive(Debug, Serialize)]
struct NormLevel {
    grid: GridInfo,
    luxembourg: f64,
    sobolev: OrderValue,
    /// Of the boundary file when given, otherwise of the trace of the field.
    slobodeckji: Option<OrderValue>,
    /// Sampled lower bound of `||D f||_{W^{-1,psi}}` over zero-trace trials.
    dual_lower_bound: f64,
}

pub fn norm(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let file_input = cfg.field.is_file() || cfg.boundary.is_some();
    let norm = cfg.norm();
    let mut out = Vec::new();
    for level in levels(cfg, file_input)? {
        let f = load_field(&cfg.field, &level, cfg.seed)?;
        let g = match &cfg.boundary {
            Some(path) => load_boundary(path, &level)?,
            None => trace_restrict(&f, &level.mesh)?,
        };
        let slobodeckji = if (1..=2).contains(&cfg.k) {
            Some(OrderValue {
                k: cfg.k,
                value: slobodeckji_norm(&g, cfg.k, &cfg.psi, &norm)?,
            })
        } else {
            None
        };
        out.push(NormLevel {
            grid: level.grid(),
            luxembourg: clifford_luxembourg_norm(&f, &cfg.psi, &norm)?,
            sobolev: OrderValue {
                k: cfg.k,
                value: sobolev_norm(&f, cfg.k, &cfg.psi, &norm)?,
            },
            slobodeckji,
            dual_lower_bound: DualTrials::new(
                &level.domain,
                &cfg.psi,
                cfg.trial_count,
                cfg.seed,
                &norm,
            )?
            .lower_bound(&f)?,
        });
    }
    let series = vec![
        Series::new("luxembourg", out.iter().map(|l| l.luxembourg).collect()),
        Series::new("sobolev", out.iter().map(|l| l.sobolev.value).collect()),
    ];
    finish("norm", cfg, out, series, Vec::new())
}

#[derive(Debug, Serialize)]
struct DiracLevel {
    grid: GridInfo,
    /// `||D_h f|| / ||f||` in L2.
    relative_norm: f64,
    luxembourg: f64,
}

pub fn dirac(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Vec::new();
    let mut artifacts = Vec::new();
    for level in levels(cfg, cfg.field.is_file())? {
        let f = load_field(&cfg.field, &level, cfg.seed)?;
        let df = dirac_apply(&f);
        out.push(DiracLevel {
            grid: level.grid(),
            relative_norm: ratio(df.l2_norm(), f.l2_norm()),
            luxembourg: clifford_luxembourg_norm(&df, &cfg.psi, &cfg.norm())?,
        });
        if artifacts.is_empty() {
            artifacts.push(Artifact {
                name: "dirac.csv".into(),
                contents: write_field(&df),
            });
        }
    }
    let series = vec![Series::new(
        "relative_norm",
        out.iter().map(|l| l.relative_norm).collect(),
    )];
    finish("dirac", cfg, out, series, artifacts)
}

#[derive(Debug, Serialize)]
struct TeodorescuLevel {
    grid: GridInfo,
    /// `||D zeta f - f|| / ||f||` over all cells.
    right_inverse_error: f64,
    luxembourg: f64,
}

pub fn teodorescu_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Vec::new();
    let mut artifacts = Vec::new();
    for level in levels(cfg, cfg.field.is_file())? {
        let f = load_field(&cfg.field, &level, cfg.seed)?;
        let z = teodorescu(&f, &cfg.kernel)?;
        out.push(TeodorescuLevel {
            grid: level.grid(),
            right_inverse_error: right_inverse_error(&f, None, &cfg.kernel)?,
            luxembourg: clifford_luxembourg_norm(&z, &cfg.psi, &cfg.norm())?,
        });
        if artifacts.is_empty() {
            artifacts.push(Artifact {
                name: "teodorescu.csv".into(),
                contents: write_field(&z),
            });
        }
    }
    let series = vec![Series::new(
        "right_inverse_error",
        out.iter().map(|l| l.right_inverse_error).collect(),
    )];
    finish("teodorescu", cfg, out, series, artifacts)
}

#[derive(Debug, Serialize)]
struct CauchyLevel {
    grid: GridInfo,
    /// `||xi tau f - f|| / ||f||` over the collar-excluded cells.
    reproduction_error: f64,
    evaluated_cells: usize,
    near_boundary_offset: f64,
}

pub fn cauchy(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Vec::new();
    let mut artifacts = Vec::new();
    for level in levels(cfg, cfg.field.is_file())? {
        let f = load_field(&cfg.field, &level, cfg.seed)?;
        let g = trace_restrict(&f, &level.mesh)?;
        let (xi, keep) = cauchy_boundary_on_grid(&g, &level.domain, &cfg.kernel)?;
        out.push(CauchyLevel {
            grid: level.grid(),
            reproduction_error: xi.relative_error(&f, Some(&keep))?,
            evaluated_cells: keep.iter().filter(|&&k| k).count(),
            near_boundary_offset: cfg.kernel.near_boundary_offset,
        });
        if artifacts.is_empty() {
            artifacts.push(Artifact {
                name: "cauchy.csv".into(),
                contents: write_field(&xi),
            });
        }
    }
    let series = vec![Series::new(
        "reproduction_error",
        out.iter().map(|l| l.reproduction_error).collect(),
    )];
    finish("cauchy", cfg, out, series, artifacts)
}

#[derive(Debug, Serialize)]
struct BorelPompeiuLevel {
    grid: GridInfo,
    /// `||f - xi tau f - zeta D f|| / ||f||` over the collar-excluded cells.
    rel_error: f64,
    evaluated_cells: usize,
    near_boundary_offset: f64,
}

pub fn borel_pompeiu(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Vec::new();
    for level in levels(cfg, cfg.field.is_file())? {
        let f = load_field(&cfg.field, &level, cfg.seed)?;
        let bp = borel_pompeiu_residual(&f, &level.mesh, &cfg.kernel)?;
        out.push(BorelPompeiuLevel {
            grid: level.grid(),
            rel_error: bp.rel_error,
            evaluated_cells: bp.evaluated.iter().filter(|&&k| k).count(),
            near_boundary_offset: cfg.kernel.near_boundary_offset,
        });
    }
    let series = vec![Series::new(
        "rel_error",
        out.iter().map(|l| l.rel_error).collect(),
    )];
    finish("borel-pompeiu", cfg, out, series, Vec::new())
}

#[derive(Debug, Serialize)]
struct DecomposeLevel {
    grid: GridInfo,
    diagnostics: DecompositionDiagnostics,
    /// `||g|| / (||g|| + ||eta||)` in the Clifford–Luxembourg norm.
    monogenic_fraction: f64,
}

pub fn decompose(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Vec::new();
    let mut artifacts = Vec::new();
    let norm = cfg.norm();
    for level in levels(cfg, cfg.field.is_file())? {
        let f = load_field(&cfg.field, &level, cfg.seed)?;
        let r = if cfg.k == 0 {
            bergman_decompose(&f, &level.mesh, &cfg.psi, &norm, &cfg.solver)?
        } else {
            bergman_decompose_sobolev(&f, cfg.k, &level.mesh, &cfg.psi, &norm, &cfg.solver)?
        };
        if artifacts.is_empty() {
            artifacts.push(Artifact {
                name: "monogenic.csv".into(),
                contents: write_field(&r.monogenic_part),
            });
            artifacts.push(Artifact {
                name: "potential.csv".into(),
                contents: write_field(&r.potential_part),
            });
        }
        out.push(DecomposeLevel {
            grid: level.grid(),
            monogenic_fraction: r.monogenic_fraction(),
            diagnostics: r.diagnostics,
        });
    }
    let series = vec![Series::new(
        "monogenicity_residual",
        out.iter()
            .map(|l| l.diagnostics.monogenicity_residual)
            .collect(),
    )];
    finish("decompose", cfg, out, series, artifacts)
}

#[derive(Debug, Serialize)]
struct BvpLevel {
    grid: GridInfo,
    #[serde(flatten)]
    summary: BvpSummary,
    /// `||u - u_exact|| / ||u_exact||` over the evaluated cells, when the
    /// exact solution is known.
    solution_error: Option<f64>,
}

pub fn solve_bvp(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let bvp_cfg = BvpConfig {
        k: cfg.k.max(1),
        psi: cfg.psi.clone(),
        norm: cfg.norm(),
        kernel: cfg.kernel,
    };
    let mut out = Vec::new();
    let mut artifacts = Vec::new();
    for level in levels(cfg, cfg.bvp.is_file())? {
        let (f, g, exact) = match &cfg.bvp {
            BvpData::Manufactured => {
                let (u, f, g) = manufactured_bvp(&level.domain, &level.mesh)?;
                (f, g, Some(u))
            }
            BvpData::Zero => (
                MultivectorField64::zeros(level.domain.clone()),
                BoundaryField64::zeros(level.mesh.clone()),
                None,
            ),
            BvpData::BuiltinTrace { name } => {
                let exact = (*name == BuiltinField::MonogenicPhi)
                    .then(|| name.sample(&level.domain))
                    .transpose()?;
                (
                    MultivectorField64::zeros(level.domain.clone()),
                    builtin_trace(*name, &level)?,
                    exact,
                )
            }
            BvpData::Files { f, g } => (
                load_field(&FieldSource::File { path: f.clone() }, &level, cfg.seed)?,
                load_boundary(g, &level)?,
                None,
            ),
        };
        let r = solve_first_order_bvp(&f, &g, &bvp_cfg)?;
        let solution_error = exact.as_ref().map(|u| r.solution_error(u)).transpose()?;
        if artifacts.is_empty() {
            artifacts.push(Artifact {
                name: "solution.csv".into(),
                contents: write_field(&r.solution),
            });
        }
        out.push(BvpLevel {
            grid: level.grid(),
            summary: r.summary,
            solution_error,
        });
    }
    let mut series = vec![
        Series::new(
            "interior_residual",
            out.iter().map(|l| l.summary.interior_residual).collect(),
        ),
        Series::new(
            "trace_residual",
            out.iter().map(|l| l.summary.trace_residual).collect(),
        ),
        Series::new(
            "norm_estimate_ratio",
            out.iter().map(|l| l.summary.norm_estimate.ratio).collect(),
        ),
    ];
    if out.iter().all(|l| l.solution_error.is_some()) {
        series.insert(
            0,
            Series::new(
                "solution_error",
                out.iter().filter_map(|l| l.solution_error).collect(),
            ),
        );
    }
    finish("solve-bvp", cfg, out, series, artifacts)
}

#[derive(Debug, Serialize)]
struct ProbeLevel {
    grid: GridInfo,
    probes: Vec<ProbeReport>,
}

pub fn probe(cfg: &RunConfig, operators: &[ProbeOperator]) -> Result<Outcome, CliError> {
    let probe_cfg = ProbeConfig {
        suite_size: cfg.suite_size,
        seed: cfg.seed,
        k: cfg.k,
        psi: cfg.psi.clone(),
        norm: cfg.norm(),
        kernel: cfg.kernel,
    };
    let mut out = Vec::new();
    for level in levels(cfg, false)? {
        let probes = operators
            .iter()
            .map(|&op| mapping_probe(op, &level.domain, &level.mesh, &probe_cfg))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(ProbeLevel {
            grid: level.grid(),
            probes,
        });
    }
    let series = operators
        .iter()
        .enumerate()
        .map(|(i, op)| {
            let name = serde_json::to_value(op)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default();
            Series::new(
                format!("{name}_max_ratio"),
                out.iter().map(|l| l.probes[i].max_ratio).collect(),
            )
        })
        .collect();
    finish("probe", cfg, out, series, Vec::new())
}

#[derive(Debug, Serialize)]
struct MakeFieldLevel {
    grid: GridInfo,
    l2: f64,
    max: f64,
}

pub fn make_field(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.field.is_file() {
        return Err(CliError::Config(
            "make-field needs a builtin or random field".into(),
        ));
    }
    let level = levels(cfg, true)?.remove(0);
    let f = load_field(&cfg.field, &level, cfg.seed)?;
    let g = match &cfg.field {
        FieldSource::Builtin { name } => builtin_trace(*name, &level)?,
        _ => trace_restrict(&f, &level.mesh)?,
    };
    let artifacts = vec![
        Artifact {
            name: "field.csv".into(),
            contents: write_field(&f),
        },
        Artifact {
            name: "boundary.csv".into(),
            contents: write_boundary_field(&g),
        },
    ];
    let out = vec![MakeFieldLevel {
        grid: level.grid(),
        l2: f.l2_norm(),
        max: f.max_norm(),
    }];
    finish("make-field", cfg, out, Vec::new(), artifacts)
}
