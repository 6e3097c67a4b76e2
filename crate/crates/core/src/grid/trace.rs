//! Boundary traces by multilinear interpolation from interior cells.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

use super::{BoundaryField, BoundaryMesh, GridDomain, MultivectorField};

/// Interpolation stencil for one facet: `2^n` interior cells and weights.
#[derive(Debug, Clone)]
pub(crate) struct TraceStencil<T> {
    pub cells: Vec<usize>,
    pub weights: Vec<T>,
}

/// Farthest a facet centre may sit outside its stencil, in cell widths.
const MAX_EXTRAPOLATION: f64 = 2.0;

/// Picks, for every facet, the all-interior `2^n` block of cells closest to
/// the facet centre and returns its multilinear weights (extrapolating when
/// the centre lies outside the block).
pub(crate) fn trace_stencils<T: Real>(
    d: &GridDomain<T>,
    mesh: &BoundaryMesh<T>,
) -> Result<Vec<TraceStencil<T>>> {
    if d.dim() != mesh.dim() {
        return Err(Error::DimensionMismatch {
            left: d.dim(),
            right: mesh.dim(),
        });
    }
    (0..mesh.len())
        .map(|i| {
            point_stencil(d, mesh.center(i)).map_err(|e| Error::Mesh(format!("facet {i}: {e}")))
        })
        .collect()
}

/// Multilinear interpolation (or extrapolation) stencil at an arbitrary
/// point from the closest all-interior `2^n` block of cells.
pub(crate) fn point_stencil<T: Real>(d: &GridDomain<T>, p: &[T]) -> Result<TraceStencil<T>> {
    let n = d.dim();
    let corners = 1usize << n;
    // continuous index: cell centres sit at integers
    let u: Vec<f64> = (0..n)
        .map(|j| crate::scalar::to_f64((p[j] - d.origin()[j]) / d.h()) - 0.5)
        .collect();
    let base0: Vec<isize> = u.iter().map(|x| x.floor() as isize).collect();
    let mut best: Option<(f64, f64, Vec<isize>, Vec<usize>)> = None;
    let offsets = 4usize.pow(n as u32);
    for o in 0..offsets {
        let mut rem = o;
        let base: Vec<isize> = (0..n)
            .map(|j| {
                let off = (rem % 4) as isize - 2;
                rem /= 4;
                base0[j] + off
            })
            .collect();
        let mut cells = Vec::with_capacity(corners);
        for k in 0..corners {
            let idx: Vec<isize> = (0..n)
                .map(|j| base[j] + ((k >> (n - 1 - j)) & 1) as isize)
                .collect();
            match d.cell_at(&idx) {
                Some(c) => cells.push(c),
                None => break,
            }
        }
        if cells.len() != corners {
            continue;
        }
        let outside = (0..n)
            .map(|j| {
                let t = u[j] - base[j] as f64;
                (-t).max(t - 1.0).max(0.0)
            })
            .fold(0.0, f64::max);
        let centre_dist: f64 = (0..n)
            .map(|j| {
                let t = u[j] - base[j] as f64 - 0.5;
                t * t
            })
            .sum();
        let better = match &best {
            None => true,
            Some((bo, bd, _, _)) => {
                outside < *bo - 1e-12 || (outside <= *bo + 1e-12 && centre_dist < *bd - 1e-12)
            }
        };
        if better {
            best = Some((outside, centre_dist, base, cells));
        }
    }
    let Some((outside, _, base, cells)) = best else {
        return Err(Error::Mesh("no interior interpolation stencil".into()));
    };
    if outside > MAX_EXTRAPOLATION {
        return Err(Error::Mesh(format!(
            "point lies {outside:.2} cells away from the nearest interior stencil"
        )));
    }
    let weights = block_weights(d, &base, p);
    Ok(TraceStencil { cells, weights })
}

/// Multilinear weights at `p` for the block whose lowest corner is `base`.
pub(crate) fn block_weights<T: Real>(d: &GridDomain<T>, base: &[isize], p: &[T]) -> Vec<T> {
    let n = d.dim();
    let half = lit::<T>(0.5);
    let t: Vec<T> = (0..n)
        .map(|j| (p[j] - d.origin()[j]) / d.h() - half - lit(base[j] as f64))
        .collect();
    (0..1usize << n)
        .map(|k| {
            (0..n).fold(T::one(), |acc, j| {
                let bit = (k >> (n - 1 - j)) & 1;
                acc * if bit == 1 { t[j] } else { T::one() - t[j] }
            })
        })
        .collect()
}

pub(crate) fn apply_stencils<T: Real>(
    stencils: &[TraceStencil<T>],
    data: &[T],
    stride: usize,
) -> Vec<T> {
    let mut out = vec![T::zero(); stencils.len() * stride];
    for (s, o) in stencils.iter().zip(out.chunks_mut(stride)) {
        for (&c, &w) in s.cells.iter().zip(&s.weights) {
            for (k, v) in o.iter_mut().enumerate() {
                *v = *v + w * data[c * stride + k];
            }
        }
    }
    out
}

/// Restriction `tau f` of an interior field to the boundary facets.
pub fn trace_restrict<T: Real>(
    f: &MultivectorField<T>,
    mesh: &Arc<BoundaryMesh<T>>,
) -> Result<BoundaryField<T>> {
    let stencils = trace_stencils(f.domain(), mesh)?;
    let data = apply_stencils(&stencils, f.data(), f.stride());
    Ok(BoundaryField::from_raw(mesh.clone(), data))
}

/// `max_facets ||tau f||`; small values mark zero-trace fields.
pub fn zero_trace_error<T: Real>(
    f: &MultivectorField<T>,
    mesh: &Arc<BoundaryMesh<T>>,
) -> Result<T> {
    Ok(trace_restrict(f, mesh)?
        .pointwise_norms()
        .into_iter()
        .fold(T::zero(), T::max))
}
