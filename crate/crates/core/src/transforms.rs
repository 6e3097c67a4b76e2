//! The fundamental solution of the Dirac operator and the two integral
//! transforms built on it.
//!
//! * Teodorescu transform (volume potential), also written `xi_Omega` in
//!   some texts: `zeta f(x) = int_Omega Phi(x - y) f(y) dy`, a right inverse
//!   of `D`.
//! * Cauchy transform: `xi g(x) = int_dOmega Phi(y - x) nu(y) g(y) dS_y`,
//!   which reproduces monogenic functions from their boundary values.
//!
//! With these conventions `f = xi (tau f) + zeta (D f)` inside `Omega`.
//! All sums are dense and run in a fixed order per evaluation point.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::{vector_mul_accumulate, Multivector, VectorN};
use crate::error::{Error, Result};
use crate::grid::{
    dirac_apply, trace_restrict, BoundaryField, BoundaryMesh, GridDomain, MultivectorField,
};
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularCellPolicy {
    /// Drop the cell containing the evaluation point.
    Exclude,
}

/// Volume quadrature of the Teodorescu transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeQuadrature {
    /// `h^n` per interior cell.
    Cells,
    /// Cell sum plus the cut-cell nodes of [`GridDomain::boundary_nodes`].
    CutCellCorrected,
}

const CUT_CELL_SUBSAMPLES_2D: usize = 16;
const CUT_CELL_SUBSAMPLES_3D: usize = 8;

/// Correction nodes with their interpolated field values.
struct Corrections<T> {
    points: Vec<T>,
    /// `volume / omega_n` per node.
    weights: Vec<T>,
    hosts: Vec<Option<usize>>,
    values: Vec<T>,
}

fn corrections<T: Real>(
    f: &MultivectorField<T>,
    cfg: &KernelConfig,
    inv_omega: T,
) -> Result<Corrections<T>> {
    let d = f.domain();
    let stride = f.stride();
    let nodes = match cfg.volume_quadrature {
        VolumeQuadrature::Cells => Vec::new(),
        VolumeQuadrature::CutCellCorrected => d.boundary_nodes(if d.dim() == 2 {
            CUT_CELL_SUBSAMPLES_2D
        } else {
            CUT_CELL_SUBSAMPLES_3D
        })?,
    };
    let mut out = Corrections {
        points: Vec::with_capacity(nodes.len() * d.dim()),
        weights: Vec::with_capacity(nodes.len()),
        hosts: Vec::with_capacity(nodes.len()),
        values: vec![T::zero(); nodes.len() * stride],
    };
    for (q, node) in nodes.iter().enumerate() {
        out.points.extend_from_slice(&node.point);
        out.weights.push(node.volume * inv_omega);
        out.hosts.push(node.host);
        let v = &mut out.values[q * stride..(q + 1) * stride];
        for (&c, &w) in node.cells.iter().zip(&node.weights) {
            for (k, x) in v.iter_mut().enumerate() {
                *x = *x + w * f.value(c)[k];
            }
        }
    }
    Ok(out)
}

/// Discretization policy of the transforms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelConfig {
    pub singular_cell_policy: SingularCellPolicy,
    pub volume_quadrature: VolumeQuadrature,
    /// Cauchy evaluation points must keep `dist(x, dOmega) >= kappa * h`.
    pub near_boundary_offset: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            singular_cell_policy: SingularCellPolicy::Exclude,
            volume_quadrature: VolumeQuadrature::CutCellCorrected,
            near_boundary_offset: 1.5,
        }
    }
}

impl KernelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.near_boundary_offset >= 1.0 && self.near_boundary_offset.is_finite()) {
            return Err(Error::Domain(format!(
                "near_boundary_offset must be at least 1, got {}",
                self.near_boundary_offset
            )));
        }
        Ok(())
    }

    /// Cells far enough from the boundary for the plain Cauchy sum.
    pub fn collar_mask<T: Real>(&self, domain: &GridDomain<T>) -> Vec<bool> {
        domain.collar_mask(lit(self.near_boundary_offset))
    }
}

/// Surface area of the unit sphere in `R^n`, `2 pi^{n/2} / Gamma(n/2)`.
pub fn omega_n<T: Real>(n: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::Domain(format!("omega_n needs n >= 2, got {n}")));
    }
    // Gamma(n/2) from Gamma(1) = 1 and Gamma(1/2) = sqrt(pi)
    let (mut gamma, mut x) = if n.is_multiple_of(2) {
        (T::one(), T::one())
    } else {
        (T::PI().sqrt(), lit::<T>(0.5))
    };
    let half_n = lit::<T>(n as f64 / 2.0);
    while x < half_n {
        gamma = gamma * x;
        x = x + T::one();
    }
    Ok(lit::<T>(2.0) * T::PI().powf(half_n) / gamma)
}

/// `Phi(x) = conj(x) / (omega_n |x|^n)`.
pub fn fundamental_solution<T: Real>(x: &VectorN<T>) -> Result<Multivector<T>> {
    let n = x.dim();
    let r2 = x.norm_squared();
    if r2 == T::zero() {
        return Err(Error::Singular(
            "fundamental solution evaluated at the origin".into(),
        ));
    }
    let scale = T::one() / (omega_n::<T>(n)? * r2.sqrt().powi(n as i32));
    Ok(x.embed().conjugate().scale(scale))
}

/// Vector coefficients of `Phi(d)` times `weight`, written into `out`.
#[inline]
fn phi_vector<T: Real>(d: &[T], weight: T, out: &mut [T]) -> T {
    let r2 = d.iter().fold(T::zero(), |a, &x| a + x * x);
    let rn = match d.len() {
        2 => r2,
        3 => r2 * r2.sqrt(),
        n => r2.sqrt().powi(n as i32),
    };
    let s = -weight / rn;
    for (o, &x) in out.iter_mut().zip(d) {
        *o = s * x;
    }
    r2
}

/// Teodorescu transform at every interior cell centre.
pub fn teodorescu<T: Real>(
    f: &MultivectorField<T>,
    cfg: &KernelConfig,
) -> Result<MultivectorField<T>> {
    cfg.validate()?;
    let d = f.domain();
    let n = d.dim();
    let stride = f.stride();
    let inv_omega = T::one() / omega_n::<T>(n)?;
    let w = d.cell_volume() * inv_omega;
    let corr = corrections(f, cfg, inv_omega)?;
    let centers = d.centers();
    let data = f.data();
    let mut out = vec![T::zero(); data.len()];
    out.par_chunks_mut(stride).enumerate().for_each(|(i, o)| {
        let xi = &centers[i * n..(i + 1) * n];
        let mut diff = [T::zero(); 3];
        let mut v = [T::zero(); 3];
        for j in 0..d.len() {
            if j == i {
                continue;
            }
            let yj = &centers[j * n..(j + 1) * n];
            for k in 0..n {
                diff[k] = xi[k] - yj[k];
            }
            phi_vector(&diff[..n], w, &mut v[..n]);
            vector_mul_accumulate(&v[..n], &data[j * stride..(j + 1) * stride], o);
        }
        for (q, &wq) in corr.weights.iter().enumerate() {
            if corr.hosts[q] == Some(i) {
                continue;
            }
            let pq = &corr.points[q * n..(q + 1) * n];
            for k in 0..n {
                diff[k] = xi[k] - pq[k];
            }
            phi_vector(&diff[..n], wq, &mut v[..n]);
            vector_mul_accumulate(&v[..n], &corr.values[q * stride..(q + 1) * stride], o);
        }
    });
    Ok(MultivectorField::from_raw(d.clone(), out))
}

/// Teodorescu transform at an arbitrary point; the cell containing the
/// point (if any) is left out.
pub fn teodorescu_at<T: Real>(
    f: &MultivectorField<T>,
    point: &[T],
    cfg: &KernelConfig,
) -> Result<Multivector<T>> {
    cfg.validate()?;
    let d = f.domain();
    let n = d.dim();
    if point.len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: point.len(),
        });
    }
    let stride = f.stride();
    let inv_omega = T::one() / omega_n::<T>(n)?;
    let w = d.cell_volume() * inv_omega;
    let corr = corrections(f, cfg, inv_omega)?;
    let half = d.h() / lit(2.0);
    let mut out = vec![T::zero(); stride];
    let mut diff = vec![T::zero(); n];
    let mut v = vec![T::zero(); n];
    let mut host = None;
    for j in 0..d.len() {
        let yj = d.center(j);
        for k in 0..n {
            diff[k] = point[k] - yj[k];
        }
        if diff.iter().all(|x| x.abs() <= half) {
            host = Some(j);
            continue;
        }
        phi_vector(&diff, w, &mut v);
        vector_mul_accumulate(&v, f.value(j), &mut out);
    }
    for (q, &wq) in corr.weights.iter().enumerate() {
        let pq = &corr.points[q * n..(q + 1) * n];
        for k in 0..n {
            diff[k] = point[k] - pq[k];
        }
        if (host.is_some() && corr.hosts[q] == host) || diff.iter().all(|&x| x == T::zero()) {
            continue;
        }
        phi_vector(&diff, wq, &mut v);
        vector_mul_accumulate(&v, &corr.values[q * stride..(q + 1) * stride], &mut out);
    }
    Multivector::from_coeffs(n, out)
}

/// `nu(y) g(y) w(y) / omega_n` per facet.
fn weighted_boundary_data<T: Real>(g: &BoundaryField<T>) -> Result<Vec<T>> {
    let mesh = g.mesh();
    let stride = g.stride();
    let inv_omega = T::one() / omega_n::<T>(mesh.dim())?;
    let mut out = vec![T::zero(); g.data().len()];
    for (i, o) in out.chunks_mut(stride).enumerate() {
        let f = mesh.facet(i);
        let nu: Vec<T> = f.normal.iter().map(|&x| x * f.weight * inv_omega).collect();
        vector_mul_accumulate(&nu, g.value(i), o);
    }
    Ok(out)
}

/// `sum_facets Phi(y - x) (nu g w)(y)`, the plain boundary sum.
fn cauchy_sum<T: Real>(mesh: &BoundaryMesh<T>, nug: &[T], stride: usize, x: &[T], out: &mut [T]) {
    let n = mesh.dim();
    let mut diff = [T::zero(); 3];
    let mut v = [T::zero(); 3];
    for i in 0..mesh.len() {
        let y = mesh.center(i);
        for k in 0..n {
            diff[k] = y[k] - x[k];
        }
        phi_vector(&diff[..n], T::one(), &mut v[..n]);
        vector_mul_accumulate(&v[..n], &nug[i * stride..(i + 1) * stride], out);
    }
}

/// Cauchy transform of boundary data at arbitrary points off the boundary.
///
/// Points closer than `kappa * h` to `dOmega` are rejected: the boundary
/// kernel is strongly singular there.
pub fn cauchy_boundary<T: Real>(
    g: &BoundaryField<T>,
    points: &[VectorN<T>],
    cfg: &KernelConfig,
) -> Result<Vec<Multivector<T>>> {
    cfg.validate()?;
    let mesh = g.mesh();
    let n = mesh.dim();
    let limit = lit::<T>(cfg.near_boundary_offset) * mesh.grid_spacing();
    for (i, p) in points.iter().enumerate() {
        if p.dim() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: p.dim(),
            });
        }
        let dist = mesh.region().distance_to_boundary(p.components());
        if dist < limit {
            return Err(Error::Singular(format!(
                "point {i} lies {dist} from the boundary, inside the {limit} collar"
            )));
        }
    }
    let stride = g.stride();
    let nug = weighted_boundary_data(g)?;
    points
        .par_iter()
        .map(|p| {
            let mut out = vec![T::zero(); stride];
            cauchy_sum(mesh, &nug, stride, p.components(), &mut out);
            Multivector::from_coeffs(n, out)
        })
        .collect()
}

/// Cauchy transform at every interior cell of `domain`.
///
/// Cells outside the collar use the plain boundary sum. Inside the collar
/// the value at the nearest facet `y*` is split off,
/// `xi g(x) = g(y*) + xi (g - g(y*))(x)`, which uses `xi 1 = 1` in `Omega`
/// and leaves a bounded integrand. The returned mask marks the plain cells.
pub fn cauchy_boundary_on_grid<T: Real>(
    g: &BoundaryField<T>,
    domain: &Arc<GridDomain<T>>,
    cfg: &KernelConfig,
) -> Result<(MultivectorField<T>, Vec<bool>)> {
    cfg.validate()?;
    let mesh = g.mesh();
    if mesh.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            left: domain.dim(),
            right: mesh.dim(),
        });
    }
    let stride = g.stride();
    let n = domain.dim();
    let keep = cfg.collar_mask(domain);
    let nug = weighted_boundary_data(g)?;
    // nu w / omega per facet, for the subtracted constant
    let inv_omega = T::one() / omega_n::<T>(n)?;
    let mut out = vec![T::zero(); domain.len() * stride];
    out.par_chunks_mut(stride).enumerate().for_each(|(c, o)| {
        let x = domain.center(c);
        if keep[c] {
            cauchy_sum(mesh, &nug, stride, x, o);
            return;
        }
        let nearest = (0..mesh.len())
            .min_by(|&a, &b| {
                let (da, db) = (
                    crate::grid::dist2(mesh.center(a), x),
                    crate::grid::dist2(mesh.center(b), x),
                );
                da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(0);
        let gstar = g.value(nearest);
        let mut diff = [T::zero(); 3];
        let mut v = [T::zero(); 3];
        let mut dg = vec![T::zero(); stride];
        let mut nudg = vec![T::zero(); stride];
        for i in 0..mesh.len() {
            let f = mesh.facet(i);
            for (s, d) in dg.iter_mut().enumerate() {
                *d = g.value(i)[s] - gstar[s];
            }
            if dg.iter().all(|&d| d == T::zero()) {
                continue;
            }
            let nu: Vec<T> = f.normal.iter().map(|&a| a * f.weight * inv_omega).collect();
            nudg.fill(T::zero());
            vector_mul_accumulate(&nu, &dg, &mut nudg);
            for k in 0..n {
                diff[k] = f.center[k] - x[k];
            }
            phi_vector(&diff[..n], T::one(), &mut v[..n]);
            vector_mul_accumulate(&v[..n], &nudg, o);
        }
        for (s, val) in o.iter_mut().enumerate() {
            *val = *val + gstar[s];
        }
    });
    Ok((MultivectorField::from_raw(domain.clone(), out), keep))
}

/// Outcome of a Borel–Pompeiu check.
#[derive(Debug, Clone)]
pub struct BorelPompeiu<T> {
    /// `f - xi(tau f) - zeta(D f)` on the collar-excluded cells, zero elsewhere.
    pub residual: MultivectorField<T>,
    /// `||residual|| / ||f||` in L2 over the collar-excluded cells.
    pub rel_error: T,
    /// Cells where the residual was evaluated.
    pub evaluated: Vec<bool>,
}

/// Evaluates `f - xi(tau f) - zeta(D f)` away from the boundary.
pub fn borel_pompeiu_residual<T: Real>(
    f: &MultivectorField<T>,
    mesh: &Arc<BoundaryMesh<T>>,
    cfg: &KernelConfig,
) -> Result<BorelPompeiu<T>> {
    cfg.validate()?;
    let d = f.domain();
    let keep = cfg.collar_mask(d);
    if !keep.iter().any(|&k| k) {
        return Err(Error::Domain(
            "no cell lies outside the boundary collar".into(),
        ));
    }
    let g = trace_restrict(f, mesh)?;
    let volume = teodorescu(&dirac_apply(f), cfg)?;
    let stride = f.stride();
    let nug = weighted_boundary_data(&g)?;
    let mut res = vec![T::zero(); f.data().len()];
    res.par_chunks_mut(stride).enumerate().for_each(|(c, o)| {
        if !keep[c] {
            return;
        }
        let mut b = vec![T::zero(); stride];
        cauchy_sum(mesh, &nug, stride, d.center(c), &mut b);
        for s in 0..stride {
            o[s] = f.value(c)[s] - b[s] - volume.value(c)[s];
        }
    });
    let residual = MultivectorField::from_raw(d.clone(), res);
    let den = f.l2_norm_on(&keep);
    let num = residual.l2_norm_on(&keep);
    let rel_error = if den > T::zero() { num / den } else { num };
    Ok(BorelPompeiu {
        residual,
        rel_error,
        evaluated: keep,
    })
}

/// `||D zeta f - f|| / ||f||` over the cells selected by `keep` (all cells
/// when `None`).
pub fn right_inverse_error<T: Real>(
    f: &MultivectorField<T>,
    keep: Option<&[bool]>,
    cfg: &KernelConfig,
) -> Result<T> {
    let dz = dirac_apply(&teodorescu(f, cfg)?);
    dz.relative_error(f, keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::BladeIndex;
    use crate::grid::{build_ball, build_disc};

    #[test]
    fn omega_values() {
        let pi = std::f64::consts::PI;
        assert!((omega_n::<f64>(2).unwrap() - 2.0 * pi).abs() < 1e-14);
        assert!((omega_n::<f64>(3).unwrap() - 4.0 * pi).abs() < 1e-13);
        assert!((omega_n::<f64>(4).unwrap() - 2.0 * pi * pi).abs() < 1e-13);
        assert!((omega_n::<f64>(5).unwrap() - 8.0 * pi * pi / 3.0).abs() < 1e-12);
        assert!(omega_n::<f64>(1).is_err());
    }

    #[test]
    fn fundamental_solution_examples() {
        let pi = std::f64::consts::PI;
        let e1 = VectorN::new(vec![1.0, 0.0]).unwrap();
        let p = fundamental_solution(&e1).unwrap();
        assert!((p.coeffs()[1] + 1.0 / (2.0 * pi)).abs() < 1e-15);
        let x = VectorN::new(vec![0.3, -1.2, 0.5]).unwrap();
        let mx = VectorN::new(vec![-0.3, 1.2, -0.5]).unwrap();
        let a = fundamental_solution(&x).unwrap();
        let b = fundamental_solution(&mx).unwrap();
        assert!(a.max_abs_diff(&b.scale(-1.0)) < 1e-15);
        assert!(matches!(
            fundamental_solution(&VectorN::new(vec![0.0, 0.0]).unwrap()),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn cauchy_of_one_is_one_inside_and_zero_outside() {
        for (d, mesh) in [
            build_disc(1.0_f64, 1.0 / 16.0).unwrap(),
            build_ball(1.0_f64, 1.0 / 8.0).unwrap(),
        ] {
            let n = d.dim();
            let one =
                BoundaryField::from_fn(mesh.clone(), |_| Multivector::scalar(n, 1.0).unwrap())
                    .unwrap();
            let mut inside = vec![0.0; n];
            inside[0] = 0.3;
            let mut outside = vec![0.0; n];
            outside[0] = 1.7;
            let pts = [
                VectorN::new(inside).unwrap(),
                VectorN::new(outside).unwrap(),
            ];
            let v = cauchy_boundary(&one, &pts, &KernelConfig::default()).unwrap();
            assert!((v[0].coeffs()[0] - 1.0).abs() < 1e-8, "{:?}", v[0]);
            assert!(v[1].clifford_norm() < 1e-8, "{:?}", v[1]);
            let near = VectorN::new({
                let mut p = vec![0.0; n];
                p[0] = 0.99;
                p
            })
            .unwrap();
            assert!(cauchy_boundary(&one, &[near], &KernelConfig::default()).is_err());
        }
    }

    #[test]
    fn on_grid_matches_plain_sum_and_handles_collar() {
        let (d, mesh) = build_disc(1.0_f64, 1.0 / 16.0).unwrap();
        let one =
            BoundaryField::from_fn(mesh.clone(), |_| Multivector::scalar(2, 1.0).unwrap()).unwrap();
        let (v, keep) = cauchy_boundary_on_grid(&one, &d, &KernelConfig::default()).unwrap();
        assert!(keep.iter().any(|k| !k));
        for c in 0..d.len() {
            assert!((v.value(c)[0] - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn teodorescu_is_linear_and_zero_preserving() {
        let (d, _) = build_disc(1.0_f64, 1.0 / 8.0).unwrap();
        let cfg = KernelConfig::default();
        let z = MultivectorField::zeros(d.clone());
        assert!(teodorescu(&z, &cfg).unwrap().is_zero());
        let a = MultivectorField::from_component(d.clone(), BladeIndex::SCALAR, |x| x[0] * x[1]);
        let b = MultivectorField::from_component(d.clone(), BladeIndex::basis(1), |x| x[0] - 0.2);
        let lhs = teodorescu(&a.add(&b.scale(2.0)).unwrap(), &cfg).unwrap();
        let rhs = teodorescu(&a, &cfg)
            .unwrap()
            .add(&teodorescu(&b, &cfg).unwrap().scale(2.0))
            .unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_norm() < 1e-12);
    }

    #[test]
    fn teodorescu_matches_point_evaluation() {
        let (d, _) = build_disc(1.0_f64, 1.0 / 8.0).unwrap();
        let cfg = KernelConfig::default();
        let f = MultivectorField::from_component(d.clone(), BladeIndex::SCALAR, |x| 1.0 + x[0]);
        let t = teodorescu(&f, &cfg).unwrap();
        let c = d.len() / 2;
        let p = teodorescu_at(&f, d.center(c), &cfg).unwrap();
        assert!(
            Multivector::from_coeffs(2, t.value(c).to_vec())
                .unwrap()
                .max_abs_diff(&p)
                < 1e-13
        );
    }
}
