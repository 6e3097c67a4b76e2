//! Run configuration, read from JSON with every field defaulted.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clifford_orlicz::analysis::{BuiltinField, LinearSolverConfig};
use clifford_orlicz::grid::{
    build_ball_with_rings, build_box, build_disc_with_facets, default_circle_facets,
    default_sphere_rings,
};
use clifford_orlicz::{BoundaryMesh64, GridDomain64, KernelConfig, NormConfig, OrliczFunction};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    /// Disc of the given radius; `facets` is the boundary polygon size at
    /// the coarsest level and doubles with every refinement.
    Disc {
        radius: f64,
        facets: Option<usize>,
    },
    /// Ball; `rings` is the number of polar rings at the coarsest level.
    Ball {
        radius: f64,
        rings: Option<usize>,
    },
    Box {
        lengths: Vec<f64>,
    },
}

impl Default for DomainSpec {
    fn default() -> Self {
        DomainSpec::Disc {
            radius: 1.0,
            facets: None,
        }
    }
}

impl DomainSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let ok = match self {
            DomainSpec::Disc { radius, facets } => {
                positive(*radius) && facets.is_none_or(|f| f >= 8)
            }
            DomainSpec::Ball { radius, rings } => positive(*radius) && rings.is_none_or(|r| r >= 4),
            DomainSpec::Box { lengths } => {
                (2..=3).contains(&lengths.len()) && lengths.iter().all(|&l| positive(l))
            }
        };
        if ok {
            Ok(())
        } else {
            Err(CliError::Config(format!("invalid domain {self:?}")))
        }
    }

    /// Grid and boundary mesh at `h`, refinement level `level`.
    pub fn build(
        &self,
        h: f64,
        level: u32,
    ) -> Result<(Arc<GridDomain64>, Arc<BoundaryMesh64>), CliError> {
        let scale = 1usize << level;
        Ok(match self {
            DomainSpec::Disc { radius, facets } => {
                let m = facets.map_or_else(|| default_circle_facets(*radius, h), |f| f * scale);
                build_disc_with_facets(*radius, h, m)?
            }
            DomainSpec::Ball { radius, rings } => {
                let r = rings.map_or_else(|| default_sphere_rings(*radius, h), |r| r * scale);
                build_ball_with_rings(*radius, h, r)?
            }
            DomainSpec::Box { lengths } => build_box(lengths, h)?,
        })
    }
}

/// Where an input field comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSource {
    Builtin {
        name: BuiltinField,
    },
    /// Member `index` of the seeded random suite, optionally multiplied by
    /// the vanishing weight.
    Random {
        index: u64,
        #[serde(default)]
        zero_trace: bool,
    },
    /// CSV volume field on the grid of the coarsest level.
    File {
        path: PathBuf,
    },
}

impl Default for FieldSource {
    fn default() -> Self {
        FieldSource::Builtin {
            name: BuiltinField::MonogenicPhi,
        }
    }
}

impl FieldSource {
    /// `monogenic-phi` and friends name builtins, `random:<i>` and
    /// `random-zero-trace:<i>` suite members; anything else is a path.
    pub fn parse(text: &str) -> Self {
        if let Some(name) = BuiltinField::from_name(text) {
            return FieldSource::Builtin { name };
        }
        for (prefix, zero_trace) in [("random:", false), ("random-zero-trace:", true)] {
            if let Some(i) = text.strip_prefix(prefix).and_then(|r| r.parse().ok()) {
                return FieldSource::Random {
                    index: i,
                    zero_trace,
                };
            }
        }
        FieldSource::File { path: text.into() }
    }

    pub fn is_file(&self) -> bool {
        matches!(self, FieldSource::File { .. })
    }
}

/// Data of the boundary value problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
#[derive(Default)]
pub enum BvpData {
    /// Exact data of a known solution; errors are measured against it.
    #[default]
    Manufactured,
    /// `f = 0`, `g = 0`.
    Zero,
    /// `f = 0` and `g` the boundary values of a builtin field.
    BuiltinTrace { name: BuiltinField },
    /// CSV files on the grid and mesh of the coarsest level.
    Files { f: PathBuf, g: PathBuf },
}

impl BvpData {
    pub fn is_file(&self) -> bool {
        matches!(self, BvpData::Files { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LuxembourgSettings {
    pub bisect_tol: f64,
    pub max_iter: usize,
}

impl Default for LuxembourgSettings {
    fn default() -> Self {
        let d = NormConfig::default();
        Self {
            bisect_tol: d.bisect_tol,
            max_iter: d.max_iter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub domain: DomainSpec,
    /// Grid spacing of the coarsest level.
    pub h: f64,
    /// Number of halvings of `h` after the coarsest level.
    pub refine: u32,
    pub psi: OrliczFunction,
    pub k: usize,
    pub lambda: f64,
    pub luxembourg: LuxembourgSettings,
    pub solver: LinearSolverConfig,
    pub kernel: KernelConfig,
    pub seed: u64,
    pub field: FieldSource,
    /// Optional CSV boundary field for `norm`, on the coarsest mesh.
    pub boundary: Option<PathBuf>,
    pub bvp: BvpData,
    pub suite_size: usize,
    pub trial_count: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            domain: DomainSpec::default(),
            h: 0.0625,
            refine: 1,
            psi: OrliczFunction::power(2.0),
            k: 1,
            lambda: 1.0,
            luxembourg: LuxembourgSettings::default(),
            solver: LinearSolverConfig::default(),
            kernel: KernelConfig::default(),
            seed: 0,
            field: FieldSource::default(),
            boundary: None,
            bvp: BvpData::default(),
            suite_size: 50,
            trial_count: 20,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.domain.validate()?;
        if !positive(self.h) {
            return Err(CliError::Config(format!(
                "h must be positive, got {}",
                self.h
            )));
        }
        if self.refine > 4 {
            return Err(CliError::Config(format!(
                "refine must be at most 4, got {}",
                self.refine
            )));
        }
        if self.k > 2 {
            return Err(CliError::Config(format!(
                "k must be at most 2, got {}",
                self.k
            )));
        }
        if self.suite_size == 0 || self.trial_count == 0 {
            return Err(CliError::Config(
                "suite_size and trial_count must be positive".into(),
            ));
        }
        self.psi.validate()?;
        self.norm().validate()?;
        self.solver.validate()?;
        self.kernel.validate()?;
        Ok(())
    }

    pub fn norm(&self) -> NormConfig {
        NormConfig {
            bisect_tol: self.luxembourg.bisect_tol,
            max_iter: self.luxembourg.max_iter,
            lambda: self.lambda,
        }
    }

    /// Spacings of the levels that will be run.
    pub fn spacings(&self, file_input: bool) -> Vec<f64> {
        let levels = if file_input { 0 } else { self.refine };
        (0..=levels)
            .map(|l| self.h / f64::from(1u32 << l))
            .collect()
    }
}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}
