//! Matrix-free conjugate gradients for the Dirichlet Laplacian.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{dirichlet_laplacian, GridDomain, MultivectorField};
use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMethod {
    ConjugateGradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinearSolverConfig {
    pub method: SolverMethod,
    /// Stop when `||r|| <= rel_tol ||b||`.
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for LinearSolverConfig {
    fn default() -> Self {
        Self {
            method: SolverMethod::ConjugateGradient,
            rel_tol: 1e-10,
            max_iter: 20_000,
        }
    }
}

impl LinearSolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Domain(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Domain("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Iteration count and final relative residual of one solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

/// Solves `Delta_h u = b` with zero values outside the mask.
pub fn solve_dirichlet_poisson<T: Real>(
    d: &GridDomain<T>,
    b: &[T],
    cfg: &LinearSolverConfig,
) -> Result<(Vec<T>, SolveStats)> {
    cfg.validate()?;
    let n = d.len();
    if b.len() != n {
        return Err(Error::Shape(format!(
            "right-hand side has {} entries for {n} cells",
            b.len()
        )));
    }
    // CG on the SPD operator -Delta_h
    let rhs: Vec<T> = b.iter().map(|&x| -x).collect();
    let bnorm = dot(&rhs, &rhs).sqrt();
    let mut u = vec![T::zero(); n];
    if bnorm == T::zero() {
        return Ok((
            u,
            SolveStats {
                iterations: 0,
                relative_residual: 0.0,
            },
        ));
    }
    let tol = lit::<T>(cfg.rel_tol) * bnorm;
    let mut r = rhs;
    let mut p = r.clone();
    let mut ap = vec![T::zero(); n];
    let mut rr = dot(&r, &r);
    let mut trace = Vec::new();
    for it in 1..=cfg.max_iter {
        dirichlet_laplacian(d, &p, &mut ap);
        for v in ap.iter_mut() {
            *v = -*v;
        }
        let alpha = rr / dot(&p, &ap);
        for i in 0..n {
            u[i] = u[i] + alpha * p[i];
            r[i] = r[i] - alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        let res = rr_new.sqrt();
        if it % 100 == 0 {
            trace.push(format!("{it}:{:.3e}", to_f64(res / bnorm)));
        }
        if res <= tol {
            return Ok((
                u,
                SolveStats {
                    iterations: it,
                    relative_residual: to_f64(res / bnorm),
                },
            ));
        }
        let beta = rr_new / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
    }
    Err(Error::Convergence {
        iterations: cfg.max_iter,
        detail: format!(
            "conjugate gradients stopped at relative residual {:.3e}; trace {}",
            to_f64(rr.sqrt() / bnorm),
            trace.join(" ")
        ),
    })
}

/// Componentwise Dirichlet solve for a multivector right-hand side; the
/// blade components are independent and solved concurrently.
pub fn solve_dirichlet_poisson_field<T: Real>(
    rhs: &MultivectorField<T>,
    cfg: &LinearSolverConfig,
) -> Result<(MultivectorField<T>, Vec<SolveStats>)> {
    let d = rhs.domain();
    let stride = rhs.stride();
    let parts: Vec<Result<(Vec<T>, SolveStats)>> = (0..stride)
        .into_par_iter()
        .map(|a| {
            let b: Vec<T> = rhs.data().chunks(stride).map(|v| v[a]).collect();
            solve_dirichlet_poisson(d, &b, cfg)
        })
        .collect();
    let mut data = vec![T::zero(); rhs.data().len()];
    let mut stats = Vec::with_capacity(stride);
    for (a, part) in parts.into_iter().enumerate() {
        let (u, s) = part?;
        for (c, &v) in u.iter().enumerate() {
            data[c * stride + a] = v;
        }
        stats.push(s);
    }
    Ok((MultivectorField::from_data(d.clone(), data)?, stats))
}
