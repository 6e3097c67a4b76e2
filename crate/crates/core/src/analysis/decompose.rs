//! Splitting a field into a monogenic part and a `Dbar`-potential.
//!
//! For `f` on `Omega` the generator `w` solves the Dirichlet problem
//! `Delta w = D f`, `w = 0` outside `Omega`; then `eta = Dbar w` and
//! `g = f - eta`. Since `D Dbar = Delta`, `D g = D f - Delta w = 0`, so `g`
//! lies in the Bergman space `A^psi = L^psi ∩ ker D` and `eta` in
//! `Dbar(W_0^{1,psi})`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{
    dirac_apply, dirac_bar_apply, zero_trace_error, BoundaryMesh, GridDomain, MultivectorField,
};
use crate::orlicz::{clifford_luxembourg_norm, sobolev_norm, NormConfig, OrliczFunction};
use crate::scalar::{lit, to_f64, Real};

use super::solver::{solve_dirichlet_poisson_field, LinearSolverConfig, SolveStats};

/// Cells counted in the monogenicity residual keep central stencils of this
/// reach inside the mask.
pub const MONOGENICITY_STENCIL_REACH: usize = 2;

/// Cells counted in the monogenicity residual lie at distance at least this
/// fraction of the inradius from the boundary.
pub const MONOGENICITY_MARGIN: f64 = 0.25;

/// Cells on which the monogenicity residual is measured.
pub fn monogenicity_mask<T: Real>(d: &GridDomain<T>) -> Vec<bool> {
    let margin = d.interior_mask(lit::<T>(MONOGENICITY_MARGIN) * d.region().inradius());
    d.central_stencil_mask(MONOGENICITY_STENCIL_REACH)
        .into_iter()
        .zip(margin)
        .map(|(a, b)| a && b)
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PartNorms {
    pub input: f64,
    pub monogenic: f64,
    pub potential: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SobolevDiagnostics {
    pub k: usize,
    /// `||D g||_{W^{k-1,psi}} / ||f||_{W^{k,psi}}`.
    pub monogenicity_residual: f64,
    pub norms: PartNorms,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionDiagnostics {
    /// `||D g|| / (||f|| + ||D f||)` in L2 over [`monogenicity_mask`].
    pub monogenicity_residual: f64,
    /// `max |tau w| / max |w|` for the generator `w`.
    pub trace_residual: f64,
    /// `||f - g - eta|| / ||f||`.
    pub reconstruction_error: f64,
    /// Clifford–Luxembourg norms of the input and both parts.
    pub norms: PartNorms,
    pub sobolev: Option<SobolevDiagnostics>,
    pub solver: Vec<SolveStats>,
    pub evaluated_cells: usize,
}

#[derive(Debug, Clone)]
pub struct DecompositionResult<T> {
    pub monogenic_part: MultivectorField<T>,
    pub potential_part: MultivectorField<T>,
    /// The generator `w` with `eta = Dbar w`.
    pub generator: MultivectorField<T>,
    pub diagnostics: DecompositionDiagnostics,
}

impl<T: Real> DecompositionResult<T> {
    /// Fraction of the total Clifford–Luxembourg norm carried by the
    /// monogenic part, `||g|| / (||g|| + ||eta||)`.
    pub fn monogenic_fraction(&self) -> f64 {
        let n = &self.diagnostics.norms;
        let total = n.monogenic + n.potential;
        if total > 0.0 {
            n.monogenic / total
        } else {
            0.0
        }
    }
}

/// `L^psi = A^psi ⊕ Dbar(W_0^{1,psi})` on the grid.
pub fn bergman_decompose<T: Real>(
    f: &MultivectorField<T>,
    mesh: &Arc<BoundaryMesh<T>>,
    psi: &OrliczFunction,
    norm: &NormConfig,
    solver: &LinearSolverConfig,
) -> Result<DecompositionResult<T>> {
    decompose(f, mesh, psi, norm, solver, None)
}

/// `W^{k,psi} = A^{k,psi} ⊕ Dbar(W_0^{k+1,psi})`, `k` in `{1, 2}`; same
/// construction with Sobolev-norm diagnostics.
pub fn bergman_decompose_sobolev<T: Real>(
    f: &MultivectorField<T>,
    k: usize,
    mesh: &Arc<BoundaryMesh<T>>,
    psi: &OrliczFunction,
    norm: &NormConfig,
    solver: &LinearSolverConfig,
) -> Result<DecompositionResult<T>> {
    if !(1..=2).contains(&k) {
        return Err(Error::Unsupported(format!(
            "Sobolev decomposition order k = {k}, expected 1 or 2"
        )));
    }
    decompose(f, mesh, psi, norm, solver, Some(k))
}

fn decompose<T: Real>(
    f: &MultivectorField<T>,
    mesh: &Arc<BoundaryMesh<T>>,
    psi: &OrliczFunction,
    norm: &NormConfig,
    solver: &LinearSolverConfig,
    k: Option<usize>,
) -> Result<DecompositionResult<T>> {
    psi.validate()?;
    norm.validate()?;
    let d = f.domain();
    let df = dirac_apply(f);
    let (w, stats) = solve_dirichlet_poisson_field(&df, solver)?;
    let eta = dirac_bar_apply(&w);
    let g = f.sub(&eta)?;

    let keep = monogenicity_mask(d);
    let evaluated_cells = keep.iter().filter(|&&k| k).count();
    let dg = dirac_apply(&g);
    let scale = f.l2_norm_on(&keep) + df.l2_norm_on(&keep);
    let monogenicity_residual = ratio(dg.l2_norm_on(&keep), scale);

    let wmax = w.max_norm();
    let trace_residual = ratio(zero_trace_error(&w, mesh)?, wmax);
    let reconstruction_error = ratio(f.sub(&g)?.sub(&eta)?.l2_norm(), f.l2_norm());

    let norms = PartNorms {
        input: to_f64(clifford_luxembourg_norm(f, psi, norm)?),
        monogenic: to_f64(clifford_luxembourg_norm(&g, psi, norm)?),
        potential: to_f64(clifford_luxembourg_norm(&eta, psi, norm)?),
    };
    let sobolev = match k {
        None => None,
        Some(k) => {
            let fk = sobolev_norm(f, k, psi, norm)?;
            Some(SobolevDiagnostics {
                k,
                monogenicity_residual: ratio(
                    sobolev_norm(&dg.masked(&keep), k - 1, psi, norm)?,
                    fk,
                ),
                norms: PartNorms {
                    input: to_f64(fk),
                    monogenic: to_f64(sobolev_norm(&g, k, psi, norm)?),
                    potential: to_f64(sobolev_norm(&eta, k, psi, norm)?),
                },
            })
        }
    };
    Ok(DecompositionResult {
        monogenic_part: g,
        potential_part: eta,
        generator: w,
        diagnostics: DecompositionDiagnostics {
            monogenicity_residual,
            trace_residual,
            reconstruction_error,
            norms,
            sobolev,
            solver: stats,
            evaluated_cells,
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::fields::BuiltinField;
    use crate::grid::build_disc;

    fn run(field: BuiltinField, h: f64) -> DecompositionResult<f64> {
        let (d, mesh) = build_disc(1.0, h).unwrap();
        let f = field.sample(&d).unwrap();
        bergman_decompose(
            &f,
            &mesh,
            &OrliczFunction::power(2.0),
            &NormConfig::default(),
            &LinearSolverConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn parts_reconstruct_input() {
        let r = run(BuiltinField::ZeroTraceBump, 1.0 / 16.0);
        assert!(r.diagnostics.reconstruction_error < 1e-12);
        assert!(r.diagnostics.evaluated_cells > 0);
    }

    #[test]
    fn routing() {
        let mono = run(BuiltinField::MonogenicPhi, 1.0 / 16.0);
        assert!(
            mono.monogenic_fraction() > 0.95,
            "{}",
            mono.monogenic_fraction()
        );
        let pot = run(BuiltinField::DbarPotential, 1.0 / 16.0);
        assert!(
            pot.monogenic_fraction() < 0.05,
            "{}",
            pot.monogenic_fraction()
        );
    }

    #[test]
    fn residual_decreases_under_refinement() {
        for field in [BuiltinField::PolyX1, BuiltinField::DbarPotential] {
            let a = run(field, 1.0 / 16.0).diagnostics.monogenicity_residual;
            let b = run(field, 1.0 / 32.0).diagnostics.monogenicity_residual;
            assert!(b < a, "{}: {a} -> {b}", field.name());
        }
    }

    #[test]
    fn sobolev_order_is_checked() {
        let (d, mesh) = build_disc(1.0, 0.25).unwrap();
        let f = MultivectorField::zeros(d);
        let r = bergman_decompose_sobolev(
            &f,
            3,
            &mesh,
            &OrliczFunction::power(2.0),
            &NormConfig::default(),
            &LinearSolverConfig::default(),
        );
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }
}
