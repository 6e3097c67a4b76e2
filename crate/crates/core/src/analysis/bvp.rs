//! The first-order problem `D u = f` in `Omega`, `tau u = g` on the boundary,
//! solved by `u = xi g + zeta f`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{dirac_apply, trace_restrict, BoundaryField, MultivectorField};
use crate::orlicz::{
    derivative_modular, slobodeckji_norm, sobolev_norm, NormConfig, OrliczFunction,
};
use crate::scalar::{to_f64, Real};
use crate::transforms::{cauchy_boundary_on_grid, teodorescu, KernelConfig};

/// Settings of [`solve_first_order_bvp`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BvpConfig {
    /// Sobolev order of the norm estimate, 1 or 2.
    pub k: usize,
    pub psi: OrliczFunction,
    pub norm: NormConfig,
    pub kernel: KernelConfig,
}

impl Default for BvpConfig {
    fn default() -> Self {
        Self {
            k: 1,
            psi: OrliczFunction::power(2.0),
            norm: NormConfig::default(),
            kernel: KernelConfig::default(),
        }
    }
}

impl BvpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.k) {
            return Err(Error::Unsupported(format!(
                "BVP order k = {}, expected 1 or 2",
                self.k
            )));
        }
        self.psi.validate()?;
        self.norm.validate()?;
        self.kernel.validate()
    }
}

/// The two data terms bounding `||u||_{W^{k,psi}}` and the measured ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub k: usize,
    /// Orlicz–Slobodeckji modular of order `k` of the boundary data.
    pub boundary_term: f64,
    /// `sum_{|alpha| = k-1} int psi(|D^alpha f| / lambda)`.
    pub interior_term: f64,
    /// `||u||_{W^{k,psi}}`.
    pub solution_norm: f64,
    /// `||u||_{W^{k,psi}} / (boundary_term + interior_term)`; zero when both
    /// terms vanish.
    pub ratio: f64,
}

/// Where the Cauchy transform used the plain boundary sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollarPolicy {
    /// Cells with `dist(x, dOmega) < kappa * h` use the subtracted form and
    /// are left out of every residual.
    pub near_boundary_offset: f64,
    pub evaluated_cells: usize,
    pub total_cells: usize,
}

#[derive(Debug, Clone)]
pub struct BvpReport<T> {
    pub solution: MultivectorField<T>,
    /// Cells outside the collar whose difference stencils stay outside it.
    pub evaluated: Vec<bool>,
    pub summary: BvpSummary,
}

/// Serializable part of a [`BvpReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BvpSummary {
    /// `||D u - f|| / (||f|| + ||u|| / r)` over the evaluated cells, `r` the
    /// inradius.
    pub interior_residual: f64,
    /// `||tau u - g|| / ||g||` over the facets.
    pub trace_residual: f64,
    pub norm_estimate: NormEstimate,
    pub collar: CollarPolicy,
}

impl<T: Real> BvpReport<T> {
    /// `||u - exact|| / ||exact||` over the evaluated cells.
    pub fn solution_error(&self, exact: &MultivectorField<T>) -> Result<f64> {
        Ok(to_f64(
            self.solution.relative_error(exact, Some(&self.evaluated))?,
        ))
    }
}

/// Solves `D u = f`, `tau u = g` by `u = xi g + zeta f` and measures how
/// well the discrete solution meets both equations.
pub fn solve_first_order_bvp<T: Real>(
    f: &MultivectorField<T>,
    g: &BoundaryField<T>,
    cfg: &BvpConfig,
) -> Result<BvpReport<T>> {
    cfg.validate()?;
    let d = f.domain();
    let mesh = g.mesh();
    if mesh.region() != d.region() {
        return Err(Error::Shape(
            "boundary data lives on a different region".into(),
        ));
    }
    let (boundary_part, plain) = cauchy_boundary_on_grid(g, d, &cfg.kernel)?;
    let u = boundary_part.add(&teodorescu(f, &cfg.kernel)?)?;

    let evaluated: Vec<bool> = (0..d.len())
        .map(|c| {
            plain[c]
                && (0..d.dim()).all(|j| {
                    [false, true]
                        .iter()
                        .all(|&fwd| d.neighbor(c, j, fwd).is_some_and(|m| plain[m]))
                })
        })
        .collect();
    let evaluated_cells = evaluated.iter().filter(|&&e| e).count();
    if evaluated_cells == 0 {
        return Err(Error::Domain(
            "no cell lies outside the boundary collar".into(),
        ));
    }

    let du = dirac_apply(&u);
    let scale = f.l2_norm_on(&evaluated) + u.l2_norm_on(&evaluated) / d.region().inradius();
    let interior_residual = ratio(du.sub(f)?.l2_norm_on(&evaluated), scale);
    let trace_residual = to_f64(trace_restrict(&u, mesh)?.relative_error(g)?);

    let boundary_term = to_f64(slobodeckji_norm(g, cfg.k, &cfg.psi, &cfg.norm)?);
    let interior_term = to_f64(derivative_modular(f, cfg.k - 1, &cfg.psi, &cfg.norm)?);
    let solution_norm = to_f64(sobolev_norm(&u, cfg.k, &cfg.psi, &cfg.norm)?);
    let terms = boundary_term + interior_term;
    let norm_estimate = NormEstimate {
        k: cfg.k,
        boundary_term,
        interior_term,
        solution_norm,
        ratio: if terms > 0.0 {
            solution_norm / terms
        } else {
            0.0
        },
    };

    Ok(BvpReport {
        solution: u,
        evaluated,
        summary: BvpSummary {
            interior_residual,
            trace_residual,
            norm_estimate,
            collar: CollarPolicy {
                near_boundary_offset: cfg.kernel.near_boundary_offset,
                evaluated_cells,
                total_cells: d.len(),
            },
        },
    })
}

fn ratio<T: Real>(num: T, den: T) -> f64 {
    if den > T::zero() {
        to_f64(num / den)
    } else {
        to_f64(num)
    }
}
