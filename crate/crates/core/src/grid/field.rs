use std::sync::Arc;

use crate::clifford::{BladeIndex, Multivector};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

use super::{BoundaryMesh, GridDomain};

/// One multivector per interior cell, stored as a flat coefficient array
/// (`2^n` coefficients per cell, blade-bitmask order).
#[derive(Debug, Clone)]
pub struct MultivectorField<T> {
    domain: Arc<GridDomain<T>>,
    data: Vec<T>,
}

/// One multivector per boundary facet.
#[derive(Debug, Clone)]
pub struct BoundaryField<T> {
    mesh: Arc<BoundaryMesh<T>>,
    data: Vec<T>,
}

fn check_data<T: Real>(data: &[T], expected: usize) -> Result<()> {
    if data.len() != expected {
        return Err(Error::CoefficientCount {
            expected,
            got: data.len(),
        });
    }
    if let Some(i) = data.iter().position(|c| !c.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(())
}

fn l2<T: Real>(
    data: &[T],
    stride: usize,
    weights: impl Iterator<Item = T>,
    keep: Option<&[bool]>,
) -> T {
    data.chunks(stride)
        .zip(weights)
        .enumerate()
        .filter(|(i, _)| keep.is_none_or(|k| k[*i]))
        .fold(T::zero(), |acc, (_, (v, w))| {
            acc + w * v.iter().fold(T::zero(), |s, &c| s + c * c)
        })
        .sqrt()
}

impl<T: Real> MultivectorField<T> {
    pub fn zeros(domain: Arc<GridDomain<T>>) -> Self {
        let data = vec![T::zero(); domain.len() * domain.stride()];
        Self { domain, data }
    }

    pub fn from_data(domain: Arc<GridDomain<T>>, data: Vec<T>) -> Result<Self> {
        check_data(&data, domain.len() * domain.stride())?;
        Ok(Self { domain, data })
    }

    /// Samples `f` at every interior cell centre.
    pub fn from_fn(domain: Arc<GridDomain<T>>, f: impl Fn(&[T]) -> Multivector<T>) -> Result<Self> {
        let stride = domain.stride();
        let mut data = Vec::with_capacity(domain.len() * stride);
        for c in 0..domain.len() {
            let v = f(domain.center(c));
            if v.dim() != domain.dim() {
                return Err(Error::DimensionMismatch {
                    left: domain.dim(),
                    right: v.dim(),
                });
            }
            data.extend_from_slice(v.coeffs());
        }
        Self::from_data(domain, data)
    }

    /// Field whose only nonzero component is `blade`, sampled from `f`.
    pub fn from_component(
        domain: Arc<GridDomain<T>>,
        blade: BladeIndex,
        f: impl Fn(&[T]) -> T,
    ) -> Self {
        let stride = domain.stride();
        let mut data = vec![T::zero(); domain.len() * stride];
        for c in 0..domain.len() {
            data[c * stride + blade.index()] = f(domain.center(c));
        }
        Self { domain, data }
    }

    pub(crate) fn from_raw(domain: Arc<GridDomain<T>>, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), domain.len() * domain.stride());
        Self { domain, data }
    }

    pub fn domain(&self) -> &Arc<GridDomain<T>> {
        &self.domain
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn stride(&self) -> usize {
        self.domain.stride()
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn value(&self, cell: usize) -> &[T] {
        let s = self.stride();
        &self.data[cell * s..(cell + 1) * s]
    }

    pub fn multivector(&self, cell: usize) -> Multivector<T> {
        Multivector::from_coeffs(self.domain.dim(), self.value(cell).to_vec())
            .expect("field values are valid multivectors")
    }

    /// Scalar samples of one blade component.
    pub fn component(&self, blade: BladeIndex) -> Vec<T> {
        self.data
            .chunks(self.stride())
            .map(|v| v[blade.index()])
            .collect()
    }

    pub fn set_component(&mut self, blade: BladeIndex, values: &[T]) {
        let s = self.stride();
        for (c, &v) in values.iter().enumerate() {
            self.data[c * s + blade.index()] = v;
        }
    }

    /// Quadrature weights (the cell volume, repeated).
    pub fn weights(&self) -> Vec<T> {
        vec![self.domain.cell_volume(); self.len()]
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.domain, &other.domain) || self.domain.same_as(&other.domain) {
            Ok(())
        } else {
            Err(Error::Shape("fields live on different grids".into()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            domain: self.domain.clone(),
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        Self {
            domain: self.domain.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// `(sum_cells h^n ||f||^2)^{1/2}`.
    pub fn l2_norm(&self) -> T {
        let w = self.domain.cell_volume();
        l2(&self.data, self.stride(), std::iter::repeat(w), None)
    }

    /// L2 norm restricted to the cells where `keep` is true.
    pub fn l2_norm_on(&self, keep: &[bool]) -> T {
        let w = self.domain.cell_volume();
        l2(&self.data, self.stride(), std::iter::repeat(w), Some(keep))
    }

    /// Largest pointwise Clifford norm.
    pub fn max_norm(&self) -> T {
        self.data
            .chunks(self.stride())
            .map(|v| v.iter().fold(T::zero(), |s, &c| s + c * c).sqrt())
            .fold(T::zero(), T::max)
    }

    /// `||self - other|| / ||other||` in L2 over `keep` (all cells when
    /// `None`); falls back to the absolute error when `other` vanishes.
    pub fn relative_error(&self, other: &Self, keep: Option<&[bool]>) -> Result<T> {
        let diff = self.sub(other)?;
        let (num, den) = match keep {
            Some(k) => (diff.l2_norm_on(k), other.l2_norm_on(k)),
            None => (diff.l2_norm(), other.l2_norm()),
        };
        Ok(if den > T::zero() { num / den } else { num })
    }

    /// Keep values where `keep` holds, zero elsewhere.
    pub fn masked(&self, keep: &[bool]) -> Self {
        let s = self.stride();
        let mut data = self.data.clone();
        for (c, &k) in keep.iter().enumerate() {
            if !k {
                data[c * s..(c + 1) * s].fill(T::zero());
            }
        }
        Self {
            domain: self.domain.clone(),
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == T::zero())
    }
}

impl<T: Real> BoundaryField<T> {
    pub fn zeros(mesh: Arc<BoundaryMesh<T>>) -> Self {
        let data = vec![T::zero(); mesh.len() << mesh.dim()];
        Self { mesh, data }
    }

    pub fn from_data(mesh: Arc<BoundaryMesh<T>>, data: Vec<T>) -> Result<Self> {
        check_data(&data, mesh.len() << mesh.dim())?;
        Ok(Self { mesh, data })
    }

    /// Samples `f` at every facet centre.
    pub fn from_fn(mesh: Arc<BoundaryMesh<T>>, f: impl Fn(&[T]) -> Multivector<T>) -> Result<Self> {
        let mut data = Vec::with_capacity(mesh.len() << mesh.dim());
        for i in 0..mesh.len() {
            let v = f(mesh.center(i));
            if v.dim() != mesh.dim() {
                return Err(Error::DimensionMismatch {
                    left: mesh.dim(),
                    right: v.dim(),
                });
            }
            data.extend_from_slice(v.coeffs());
        }
        Self::from_data(mesh, data)
    }

    pub(crate) fn from_raw(mesh: Arc<BoundaryMesh<T>>, data: Vec<T>) -> Self {
        Self { mesh, data }
    }

    pub fn mesh(&self) -> &Arc<BoundaryMesh<T>> {
        &self.mesh
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn stride(&self) -> usize {
        1 << self.mesh.dim()
    }

    pub fn len(&self) -> usize {
        self.mesh.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mesh.is_empty()
    }

    pub fn value(&self, facet: usize) -> &[T] {
        let s = self.stride();
        &self.data[facet * s..(facet + 1) * s]
    }

    pub fn multivector(&self, facet: usize) -> Multivector<T> {
        Multivector::from_coeffs(self.mesh.dim(), self.value(facet).to_vec())
            .expect("boundary values are valid multivectors")
    }

    pub fn component(&self, blade: BladeIndex) -> Vec<T> {
        self.data
            .chunks(self.stride())
            .map(|v| v[blade.index()])
            .collect()
    }

    /// `(sum_facets w ||g||^2)^{1/2}`.
    pub fn l2_norm(&self) -> T {
        l2(
            &self.data,
            self.stride(),
            self.mesh.weights().iter().copied(),
            None,
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.data.len() != other.data.len() {
            return Err(Error::Shape(
                "boundary fields live on different meshes".into(),
            ));
        }
        Ok(Self {
            mesh: self.mesh.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            mesh: self.mesh.clone(),
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    /// Pointwise Clifford norms.
    pub fn pointwise_norms(&self) -> Vec<T> {
        self.data
            .chunks(self.stride())
            .map(|v| v.iter().fold(T::zero(), |s, &c| s + c * c).sqrt())
            .collect()
    }

    pub fn relative_error(&self, other: &Self) -> Result<T> {
        let num = self.sub(other)?.l2_norm();
        let den = other.l2_norm();
        Ok(if den > T::zero() { num / den } else { num })
    }

    pub fn mean_abs(&self) -> T {
        let total = self
            .pointwise_norms()
            .into_iter()
            .fold(T::zero(), |a, b| a + b);
        total / lit(self.len() as f64)
    }
}
