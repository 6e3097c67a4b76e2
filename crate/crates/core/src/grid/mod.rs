//! Gridded model domains: a masked uniform Cartesian grid for the volume, an
//! analytically parametrized boundary mesh, fields over both, and the
//! finite-difference operators acting on them.

mod diff;
mod field;
pub mod io;
mod mesh;
mod trace;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

pub use diff::{
    dalpha_apply, dirac_apply, dirac_bar_apply, dirichlet_laplacian, fd_partial, laplacian_apply,
    MultiIndex,
};
pub use field::{BoundaryField, MultivectorField};
pub use mesh::{BoundaryMesh, Facet, MeshTopology};
pub use trace::{trace_restrict, zero_trace_error};

/// Marker for a missing neighbour in the cell adjacency table.
pub(crate) const NONE: u32 = u32::MAX;

/// Analytic description of the model domain `Omega`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region<T> {
    /// Open disc (`n = 2`) or ball (`n = 3`).
    Ball { center: Vec<T>, radius: T },
    /// Open axis-aligned box `lo < x < hi`.
    Box { lo: Vec<T>, hi: Vec<T> },
}

impl<T: Real> Region<T> {
    pub fn dim(&self) -> usize {
        match self {
            Region::Ball { center, .. } => center.len(),
            Region::Box { lo, .. } => lo.len(),
        }
    }

    pub fn contains(&self, p: &[T]) -> bool {
        match self {
            Region::Ball { center, radius } => dist2(p, center) < *radius * *radius,
            Region::Box { lo, hi } => p
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(&x, (&l, &u))| l < x && x < u),
        }
    }

    /// Unsigned Euclidean distance from `p` to the boundary.
    pub fn distance_to_boundary(&self, p: &[T]) -> T {
        match self {
            Region::Ball { center, radius } => (dist2(p, center).sqrt() - *radius).abs(),
            Region::Box { lo, hi } => {
                if self.contains(p) {
                    p.iter()
                        .zip(lo.iter().zip(hi))
                        .map(|(&x, (&l, &u))| (x - l).min(u - x))
                        .fold(T::infinity(), T::min)
                } else {
                    p.iter()
                        .zip(lo.iter().zip(hi))
                        .map(|(&x, (&l, &u))| {
                            let d = (l - x).max(x - u).max(T::zero());
                            d * d
                        })
                        .fold(T::zero(), |a, b| a + b)
                        .sqrt()
                }
            }
        }
    }

    /// Smooth weight, positive inside, vanishing on the boundary, equal to 1
    /// at the centre.
    pub fn vanishing_weight(&self, p: &[T]) -> T {
        match self {
            Region::Ball { center, radius } => {
                let r2 = *radius * *radius;
                (r2 - dist2(p, center)) / r2
            }
            Region::Box { lo, hi } => p
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(&x, (&l, &u))| lit::<T>(4.0) * (x - l) * (u - x) / ((u - l) * (u - l)))
                .fold(T::one(), |a, b| a * b),
        }
    }

    /// Gradient of [`Region::vanishing_weight`].
    pub fn vanishing_weight_gradient(&self, p: &[T]) -> Vec<T> {
        match self {
            Region::Ball { center, radius } => {
                let r2 = *radius * *radius;
                p.iter()
                    .zip(center)
                    .map(|(&x, &c)| lit::<T>(-2.0) * (x - c) / r2)
                    .collect()
            }
            Region::Box { lo, hi } => {
                let factors: Vec<T> = p
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(&x, (&l, &u))| lit::<T>(4.0) * (x - l) * (u - x) / ((u - l) * (u - l)))
                    .collect();
                let derivs: Vec<T> = p
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(&x, (&l, &u))| {
                        lit::<T>(4.0) * (u + l - lit::<T>(2.0) * x) / ((u - l) * (u - l))
                    })
                    .collect();
                (0..p.len())
                    .map(|j| {
                        (0..p.len()).fold(T::one(), |acc, i| {
                            acc * if i == j { derivs[i] } else { factors[i] }
                        })
                    })
                    .collect()
            }
        }
    }

    /// A point well outside the closure, used as the pole of test fields.
    pub fn exterior_point(&self) -> Vec<T> {
        match self {
            Region::Ball { center, radius } => {
                let mut p = center.clone();
                p[0] = p[0] + lit::<T>(2.0) * *radius;
                p
            }
            Region::Box { lo, hi } => {
                let mut p: Vec<T> = lo
                    .iter()
                    .zip(hi)
                    .map(|(&l, &u)| (l + u) / lit(2.0))
                    .collect();
                p[0] = hi[0] + (hi[0] - lo[0]);
                p
            }
        }
    }

    pub fn centroid(&self) -> Vec<T> {
        match self {
            Region::Ball { center, .. } => center.clone(),
            Region::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(&l, &u)| (l + u) / lit(2.0))
                .collect(),
        }
    }

    /// Radius of the largest ball inside the region.
    pub fn inradius(&self) -> T {
        match self {
            Region::Ball { radius, .. } => *radius,
            Region::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(&l, &u)| (u - l) / lit(2.0))
                .fold(T::infinity(), T::min),
        }
    }

    /// Analytic volume (area for `n = 2`).
    pub fn volume(&self) -> T {
        match self {
            Region::Ball { center, radius } => match center.len() {
                2 => T::PI() * *radius * *radius,
                _ => lit::<T>(4.0 / 3.0) * T::PI() * radius.powi(3),
            },
            Region::Box { lo, hi } => lo.iter().zip(hi).fold(T::one(), |a, (&l, &u)| a * (u - l)),
        }
    }

    /// Analytic surface measure of the boundary.
    pub fn surface_area(&self) -> T {
        match self {
            Region::Ball { center, radius } => match center.len() {
                2 => lit::<T>(2.0) * T::PI() * *radius,
                _ => lit::<T>(4.0) * T::PI() * *radius * *radius,
            },
            Region::Box { lo, hi } => {
                let l: Vec<T> = lo.iter().zip(hi).map(|(&a, &b)| b - a).collect();
                match l.len() {
                    2 => lit::<T>(2.0) * (l[0] + l[1]),
                    _ => lit::<T>(2.0) * (l[0] * l[1] + l[1] * l[2] + l[0] * l[2]),
                }
            }
        }
    }
}

#[inline]
pub(crate) fn dist2<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
}

/// Masked uniform Cartesian grid over a model domain.
///
/// Interior cells are enumerated in lexicographic order of their multi-index
/// (last axis fastest); every field over the domain follows this order.
#[derive(Debug, Clone)]
pub struct GridDomain<T> {
    dim: usize,
    shape: Vec<usize>,
    h: T,
    origin: Vec<T>,
    region: Region<T>,
    mask: Vec<bool>,
    cells: Vec<usize>,
    lookup: Vec<u32>,
    neighbors: Vec<[u32; 6]>,
    centers: Vec<T>,
}

impl<T: Real> GridDomain<T> {
    /// Grid of `shape` cells of side `h` starting at `origin`; a cell is
    /// interior when its centre lies in `region`.
    pub fn new(region: Region<T>, shape: Vec<usize>, h: T, origin: Vec<T>) -> Result<Self> {
        let dim = region.dim();
        if !(2..=3).contains(&dim) || shape.len() != dim || origin.len() != dim {
            return Err(Error::UnsupportedDimension(dim, "2..=3"));
        }
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::Construction(format!(
                "grid spacing must be positive, got {h}"
            )));
        }
        let total: usize = shape.iter().product();
        let mut mask = vec![false; total];
        let mut cells = Vec::new();
        let mut centers = Vec::new();
        let mut lookup = vec![NONE; total];
        let mut idx = vec![0usize; dim];
        for (lin, slot) in mask.iter_mut().enumerate() {
            unravel(lin, &shape, &mut idx);
            let c: Vec<T> = (0..dim)
                .map(|j| origin[j] + (lit::<T>(idx[j] as f64) + lit(0.5)) * h)
                .collect();
            if region.contains(&c) {
                *slot = true;
                lookup[lin] = cells.len() as u32;
                cells.push(lin);
                centers.extend_from_slice(&c);
            }
        }
        let mut strides = vec![1usize; dim];
        for j in (0..dim - 1).rev() {
            strides[j] = strides[j + 1] * shape[j + 1];
        }
        let neighbors = cells
            .iter()
            .map(|&lin| {
                let mut nb = [NONE; 6];
                unravel(lin, &shape, &mut idx);
                for j in 0..dim {
                    if idx[j] > 0 {
                        nb[2 * j] = lookup[lin - strides[j]];
                    }
                    if idx[j] + 1 < shape[j] {
                        nb[2 * j + 1] = lookup[lin + strides[j]];
                    }
                }
                nb
            })
            .collect();
        let domain = Self {
            dim,
            shape,
            h,
            origin,
            region,
            mask,
            cells,
            lookup,
            neighbors,
            centers,
        };
        domain.validate()?;
        Ok(domain)
    }

    fn validate(&self) -> Result<()> {
        if self.cells.is_empty() {
            return Err(Error::Construction("grid has no interior cells".into()));
        }
        let full = (0..self.len()).any(|c| (0..2 * self.dim).all(|k| self.neighbors[c][k] != NONE));
        if !full {
            return Err(Error::Construction(
                "no interior cell has all face neighbours inside the domain".into(),
            ));
        }
        for j in 0..self.dim {
            let mut lo = usize::MAX;
            let mut hi = 0;
            let mut idx = vec![0; self.dim];
            for &lin in &self.cells {
                unravel(lin, &self.shape, &mut idx);
                lo = lo.min(idx[j]);
                hi = hi.max(idx[j]);
            }
            if hi + 1 - lo < 4 {
                return Err(Error::Construction(format!(
                    "resolution too coarse: fewer than 4 interior cells along axis {j}"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn origin(&self) -> &[T] {
        &self.origin
    }

    pub fn region(&self) -> &Region<T> {
        &self.region
    }

    /// Cell mask over the full grid (linear index, last axis fastest).
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Number of interior cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// `h^n`.
    pub fn cell_volume(&self) -> T {
        self.h.powi(self.dim as i32)
    }

    /// Number of coefficients per multivector, `2^n`.
    pub fn stride(&self) -> usize {
        1 << self.dim
    }

    pub fn center(&self, cell: usize) -> &[T] {
        &self.centers[cell * self.dim..(cell + 1) * self.dim]
    }

    pub fn centers(&self) -> &[T] {
        &self.centers
    }

    /// Multi-index of an interior cell.
    pub fn cell_index(&self, cell: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        unravel(self.cells[cell], &self.shape, &mut idx);
        idx
    }

    /// Interior cell id for a multi-index, if that cell is interior.
    pub fn cell_at(&self, idx: &[isize]) -> Option<usize> {
        let mut lin = 0usize;
        for j in 0..self.dim {
            if idx[j] < 0 || idx[j] as usize >= self.shape[j] {
                return None;
            }
            lin = lin * self.shape[j] + idx[j] as usize;
        }
        match self.lookup[lin] {
            NONE => None,
            c => Some(c as usize),
        }
    }

    /// Face neighbour of `cell` along `axis`, `forward` selecting `+h`.
    #[inline]
    pub fn neighbor(&self, cell: usize, axis: usize, forward: bool) -> Option<usize> {
        match self.neighbors[cell][2 * axis + forward as usize] {
            NONE => None,
            c => Some(c as usize),
        }
    }

    /// Cells whose centre keeps a distance of at least `kappa * h` from the
    /// boundary.
    pub fn collar_mask(&self, kappa: T) -> Vec<bool> {
        (0..self.len())
            .map(|c| self.region.distance_to_boundary(self.center(c)) >= kappa * self.h)
            .collect()
    }

    /// Cells whose centre lies at distance at least `delta` from the
    /// boundary, independently of `h`.
    pub fn interior_mask(&self, delta: T) -> Vec<bool> {
        (0..self.len())
            .map(|c| self.region.distance_to_boundary(self.center(c)) >= delta)
            .collect()
    }

    /// Cells where every central stencil of reach `reach` stays interior.
    pub fn central_stencil_mask(&self, reach: usize) -> Vec<bool> {
        (0..self.len())
            .map(|c| {
                (0..self.dim).all(|j| {
                    [false, true].iter().all(|&fwd| {
                        let mut cur = c;
                        for _ in 0..reach {
                            match self.neighbor(cur, j, fwd) {
                                Some(n) => cur = n,
                                None => return false,
                            }
                        }
                        true
                    })
                })
            })
            .collect()
    }

    /// Same grid and region (not necessarily the same allocation).
    pub fn same_as(&self, other: &Self) -> bool {
        self.shape == other.shape
            && self.h == other.h
            && self.origin == other.origin
            && self.region == other.region
    }

    /// Sum of interior cell volumes.
    pub fn mask_volume(&self) -> T {
        lit::<T>(self.len() as f64) * self.cell_volume()
    }

    /// Correction nodes that turn the cell sum over the mask into a
    /// quadrature over the analytic region.
    ///
    /// Every cell cut by the boundary is subsampled with `subsamples^n`
    /// points. An interior cell contributes one node of negative volume at
    /// the centroid of its part outside the region; an exterior cell one
    /// node of positive volume at the centroid of its part inside. Values at
    /// the nodes come from multilinear interpolation over interior cells.
    pub fn boundary_nodes(&self, subsamples: usize) -> Result<Vec<BoundaryNode<T>>> {
        let n = self.dim;
        let s = subsamples.max(1);
        let count = s.pow(n as u32);
        let sub_vol = self.cell_volume() / lit::<T>(count as f64);
        let half = lit::<T>(0.5);
        let reach = self.h * lit::<T>((n as f64).sqrt() / 2.0);
        let total: usize = self.shape.iter().product();
        let mut idx = vec![0usize; n];
        let mut nodes = Vec::new();
        let mut p = vec![T::zero(); n];
        for lin in 0..total {
            unravel(lin, &self.shape, &mut idx);
            let lo: Vec<T> = (0..n)
                .map(|j| self.origin[j] + lit::<T>(idx[j] as f64) * self.h)
                .collect();
            let centre: Vec<T> = lo.iter().map(|&l| l + half * self.h).collect();
            if self.region.distance_to_boundary(&centre) > reach {
                continue;
            }
            let interior = self.mask[lin];
            let mut sum = vec![T::zero(); n];
            let mut hits = 0usize;
            for q in 0..count {
                let mut rem = q;
                for j in 0..n {
                    let k = rem % s;
                    rem /= s;
                    p[j] = lo[j] + (lit::<T>(k as f64) + half) * self.h / lit(s as f64);
                }
                // interior cells collect their outside part, exterior cells their inside part
                if self.region.contains(&p) != interior {
                    hits += 1;
                    for j in 0..n {
                        sum[j] = sum[j] + p[j];
                    }
                }
            }
            if hits == 0 {
                continue;
            }
            let point: Vec<T> = sum.iter().map(|&x| x / lit(hits as f64)).collect();
            let magnitude = sub_vol * lit(hits as f64);
            let stencil = trace::point_stencil(self, &point)?;
            nodes.push(BoundaryNode {
                point,
                volume: if interior { -magnitude } else { magnitude },
                host: interior.then(|| self.lookup[lin] as usize),
                cells: stencil.cells,
                weights: stencil.weights,
            });
        }
        Ok(nodes)
    }
}

/// A signed volume correction near the boundary, see
/// [`GridDomain::boundary_nodes`].
#[derive(Debug, Clone)]
pub struct BoundaryNode<T> {
    pub point: Vec<T>,
    /// Signed volume: negative for the part of an interior cell outside the
    /// region.
    pub volume: T,
    /// Interior cell containing the node, if any.
    pub host: Option<usize>,
    /// Interpolation stencil for field values at `point`.
    pub cells: Vec<usize>,
    pub weights: Vec<T>,
}

fn unravel(mut lin: usize, shape: &[usize], out: &mut [usize]) {
    for j in (0..shape.len()).rev() {
        out[j] = lin % shape[j];
        lin /= shape[j];
    }
}

/// Default number of facets on a circle of radius `r` for grid spacing `h`:
/// arc length about `h / 2`.
pub fn default_circle_facets<T: Real>(radius: T, h: T) -> usize {
    let n = (lit::<T>(4.0) * T::PI() * radius / h)
        .ceil()
        .to_usize()
        .unwrap_or(0);
    n.max(32)
}

/// A grid domain together with its boundary mesh.
pub type Discretization<T> = (Arc<GridDomain<T>>, Arc<BoundaryMesh<T>>);

/// Default number of polar nodes of the sphere rule for grid spacing `h`.
pub fn default_sphere_rings<T: Real>(radius: T, h: T) -> usize {
    let n = (lit::<T>(2.0) * T::PI() * radius / h)
        .ceil()
        .to_usize()
        .unwrap_or(0);
    n.max(8)
}

fn centered_grid<T: Real>(radius: T, h: T, dim: usize) -> Result<(Vec<usize>, Vec<T>)> {
    if !(radius > T::zero()) || !(h > T::zero()) {
        return Err(Error::Construction(
            "radius and spacing must be positive".into(),
        ));
    }
    let m = (lit::<T>(2.0) * radius / h).ceil().to_usize().unwrap_or(0);
    let half = lit::<T>(m as f64) * h / lit(2.0);
    Ok((vec![m; dim], vec![-half; dim]))
}

/// Unit-normal disc of `radius` centred at the origin with the default facet count.
pub fn build_disc<T: Real>(radius: T, h: T) -> Result<Discretization<T>> {
    build_disc_with_facets(radius, h, default_circle_facets(radius, h))
}

/// Disc with an explicit number of equal-arc boundary facets.
pub fn build_disc_with_facets<T: Real>(
    radius: T,
    h: T,
    facets: usize,
) -> Result<Discretization<T>> {
    let (shape, origin) = centered_grid(radius, h, 2)?;
    let region = Region::Ball {
        center: vec![T::zero(); 2],
        radius,
    };
    let domain = GridDomain::new(region.clone(), shape, h, origin)?;
    let mesh = BoundaryMesh::circle(region, h, facets)?;
    Ok((Arc::new(domain), Arc::new(mesh)))
}

/// Ball of `radius` centred at the origin; the sphere carries a
/// Gauss–Legendre x uniform-azimuth product rule.
pub fn build_ball<T: Real>(radius: T, h: T) -> Result<Discretization<T>> {
    build_ball_with_rings(radius, h, default_sphere_rings(radius, h))
}

pub fn build_ball_with_rings<T: Real>(radius: T, h: T, rings: usize) -> Result<Discretization<T>> {
    let (shape, origin) = centered_grid(radius, h, 3)?;
    let region = Region::Ball {
        center: vec![T::zero(); 3],
        radius,
    };
    let domain = GridDomain::new(region.clone(), shape, h, origin)?;
    let mesh = BoundaryMesh::sphere(region, h, rings, 2 * rings)?;
    Ok((Arc::new(domain), Arc::new(mesh)))
}

/// Box `[0, L_1] x ... x [0, L_n]`; every length must be a multiple of `h`.
pub fn build_box<T: Real>(lengths: &[T], h: T) -> Result<Discretization<T>> {
    let dim = lengths.len();
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim, "2..=3"));
    }
    if !(h > T::zero()) || lengths.iter().any(|&l| !(l > T::zero())) {
        return Err(Error::Construction(
            "box lengths and spacing must be positive".into(),
        ));
    }
    let mut shape = Vec::with_capacity(dim);
    for &l in lengths {
        let m = (l / h).round();
        if ((m * h - l) / l).abs() > lit(1e-9) {
            return Err(Error::Construction(format!(
                "box length {l} is not a multiple of the spacing {h}"
            )));
        }
        shape.push(m.to_usize().unwrap_or(0));
    }
    let region = Region::Box {
        lo: vec![T::zero(); dim],
        hi: lengths.to_vec(),
    };
    let domain = GridDomain::new(region.clone(), shape.clone(), h, vec![T::zero(); dim])?;
    let mesh = BoundaryMesh::box_faces(region, h, &shape)?;
    Ok((Arc::new(domain), Arc::new(mesh)))
}
