//! Empirical operator-norm ratios over seeded random suites.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{dirac_apply, trace_restrict, BoundaryMesh, GridDomain, MultivectorField};
use crate::orlicz::{sobolev_norm, NormConfig, OrliczFunction};
use crate::scalar::{to_f64, Real};
use crate::transforms::{cauchy_boundary_on_grid, teodorescu, KernelConfig};

use super::fields::random_field;

/// Operator whose Orlicz–Sobolev mapping ratio is probed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeOperator {
    /// `||D f||_{W^{k-1}} / ||f||_{W^k}`.
    Dirac,
    /// `||zeta f||_{W^{k+1}} / ||f||_{W^k}`.
    Teodorescu,
    /// `||xi tau f||_{W^k} / ||f||_{W^k}`.
    CauchyTraceComposition,
}

impl ProbeOperator {
    pub const ALL: [ProbeOperator; 3] = [
        ProbeOperator::Dirac,
        ProbeOperator::Teodorescu,
        ProbeOperator::CauchyTraceComposition,
    ];

    /// Sobolev orders of the target and source norms.
    pub fn orders(&self, k: usize) -> Result<(usize, usize)> {
        let target = match self {
            ProbeOperator::Dirac => k.checked_sub(1),
            ProbeOperator::Teodorescu => Some(k + 1),
            ProbeOperator::CauchyTraceComposition => Some(k),
        };
        match target {
            Some(t) if t <= 2 && k <= 2 => Ok((t, k)),
            _ => Err(Error::Unsupported(format!(
                "{self:?} probe needs Sobolev orders up to 2, k = {k}"
            ))),
        }
    }
}

/// Settings of [`mapping_probe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeConfig {
    pub suite_size: usize,
    pub seed: u64,
    pub k: usize,
    pub psi: OrliczFunction,
    pub norm: NormConfig,
    pub kernel: KernelConfig,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            suite_size: 50,
            seed: 0,
            k: 1,
            psi: OrliczFunction::power(2.0),
            norm: NormConfig::default(),
            kernel: KernelConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub operator: ProbeOperator,
    pub k: usize,
    pub target_order: usize,
    pub suite_size: usize,
    pub seed: u64,
    pub max_ratio: f64,
    /// One entry per suite member; `None` for members with zero source norm.
    pub ratios: Vec<Option<f64>>,
    pub skipped: usize,
}

/// Measures the operator ratio over the suite members `0 .. suite_size`.
pub fn mapping_probe<T: Real>(
    operator: ProbeOperator,
    domain: &Arc<GridDomain<T>>,
    mesh: &Arc<BoundaryMesh<T>>,
    cfg: &ProbeConfig,
) -> Result<ProbeReport> {
    cfg.psi.validate()?;
    cfg.norm.validate()?;
    cfg.kernel.validate()?;
    if cfg.suite_size == 0 {
        return Err(Error::Domain("suite_size must be at least 1".into()));
    }
    let (target_order, source_order) = operator.orders(cfg.k)?;
    let mut ratios = Vec::with_capacity(cfg.suite_size);
    for i in 0..cfg.suite_size {
        let f = random_field(domain, cfg.seed, i as u64)?;
        ratios.push(probe_ratio(
            operator,
            &f,
            mesh,
            target_order,
            source_order,
            cfg,
        )?);
    }
    Ok(summarize(operator, cfg, target_order, ratios))
}

/// The ratio for a single field; `None` when `f` has zero source norm.
pub fn probe_ratio<T: Real>(
    operator: ProbeOperator,
    f: &MultivectorField<T>,
    mesh: &Arc<BoundaryMesh<T>>,
    target_order: usize,
    source_order: usize,
    cfg: &ProbeConfig,
) -> Result<Option<f64>> {
    let source = sobolev_norm(f, source_order, &cfg.psi, &cfg.norm)?;
    if source <= T::zero() {
        return Ok(None);
    }
    let image = match operator {
        ProbeOperator::Dirac => dirac_apply(f),
        ProbeOperator::Teodorescu => teodorescu(f, &cfg.kernel)?,
        ProbeOperator::CauchyTraceComposition => {
            cauchy_boundary_on_grid(&trace_restrict(f, mesh)?, f.domain(), &cfg.kernel)?.0
        }
    };
    let target = sobolev_norm(&image, target_order, &cfg.psi, &cfg.norm)?;
    Ok(Some(to_f64(target / source)))
}

fn summarize(
    operator: ProbeOperator,
    cfg: &ProbeConfig,
    target_order: usize,
    ratios: Vec<Option<f64>>,
) -> ProbeReport {
    let skipped = ratios.iter().filter(|r| r.is_none()).count();
    let max_ratio = ratios.iter().flatten().fold(0.0_f64, |m, &r| m.max(r));
    ProbeReport {
        operator,
        k: cfg.k,
        target_order,
        suite_size: cfg.suite_size,
        seed: cfg.seed,
        max_ratio,
        ratios,
        skipped,
    }
}
