//! Finite-difference operators on cell-centred fields.

use serde::{Deserialize, Serialize};

use crate::clifford::vector_mul_accumulate;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

use super::{GridDomain, MultivectorField};

/// Multi-index `alpha` of a coordinate derivative `D^alpha`, `|alpha| <= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub const MAX_ORDER: usize = 2;

    pub fn new(orders: Vec<u8>) -> Result<Self> {
        let total: usize = orders.iter().map(|&o| o as usize).sum();
        if total > Self::MAX_ORDER {
            return Err(Error::Unsupported(format!(
                "derivative order {total} exceeds {}",
                Self::MAX_ORDER
            )));
        }
        Ok(Self(orders))
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn orders(&self) -> &[u8] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.iter().map(|&o| o as usize).sum()
    }

    /// All multi-indices with `|alpha| <= k`, by increasing order and then
    /// lexicographically decreasing (`(2,0), (1,1), (0,2)`).
    pub fn up_to(dim: usize, k: usize) -> Result<Vec<Self>> {
        if k > Self::MAX_ORDER {
            return Err(Error::Unsupported(format!("Sobolev order {k} exceeds 2")));
        }
        let mut out = Vec::new();
        for order in 0..=k {
            out.extend(Self::exact(dim, order));
        }
        Ok(out)
    }

    /// All multi-indices with `|alpha| = order`, lexicographically decreasing.
    pub fn exact(dim: usize, order: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = vec![0u8; dim];
        fn rec(j: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<MultiIndex>) {
            if j + 1 == cur.len() {
                cur[j] = left as u8;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for a in (0..=left).rev() {
                cur[j] = a as u8;
                rec(j + 1, left - a, cur, out);
            }
        }
        rec(0, order, &mut cur, &mut out);
        out
    }
}

fn check_axis<T: Real>(domain: &GridDomain<T>, axis: usize) -> Result<()> {
    if axis >= domain.dim() {
        return Err(Error::Domain(format!(
            "axis {axis} out of range for dimension {}",
            domain.dim()
        )));
    }
    Ok(())
}

/// Neighbour chain of up to three cells in one direction.
#[inline]
fn walk<T: Real>(
    d: &GridDomain<T>,
    c: usize,
    axis: usize,
    fwd: bool,
    n: usize,
) -> [Option<usize>; 3] {
    let mut out = [None; 3];
    let mut cur = c;
    for slot in out.iter_mut().take(n) {
        match d.neighbor(cur, axis, fwd) {
            Some(next) => {
                *slot = Some(next);
                cur = next;
            }
            None => break,
        }
    }
    out
}

/// `d/dx_axis` applied coefficientwise to a flat `stride`-blocked array.
pub(crate) fn partial_raw<T: Real>(
    d: &GridDomain<T>,
    data: &[T],
    stride: usize,
    axis: usize,
) -> Vec<T> {
    let h = d.h();
    let two_h = lit::<T>(2.0) * h;
    let (three, four) = (lit::<T>(3.0), lit::<T>(4.0));
    let mut out = vec![T::zero(); data.len()];
    let at = |c: usize, k: usize| data[c * stride + k];
    for c in 0..d.len() {
        let fw = walk(d, c, axis, true, 2);
        let bw = walk(d, c, axis, false, 2);
        let o = &mut out[c * stride..(c + 1) * stride];
        match (fw, bw) {
            ([Some(p), _, _], [Some(m), _, _]) => {
                for (k, v) in o.iter_mut().enumerate() {
                    *v = (at(p, k) - at(m, k)) / two_h;
                }
            }
            ([Some(p1), Some(p2), _], _) => {
                for (k, v) in o.iter_mut().enumerate() {
                    *v = (-three * at(c, k) + four * at(p1, k) - at(p2, k)) / two_h;
                }
            }
            (_, [Some(m1), Some(m2), _]) => {
                for (k, v) in o.iter_mut().enumerate() {
                    *v = (three * at(c, k) - four * at(m1, k) + at(m2, k)) / two_h;
                }
            }
            ([Some(p), _, _], _) => {
                for (k, v) in o.iter_mut().enumerate() {
                    *v = (at(p, k) - at(c, k)) / h;
                }
            }
            (_, [Some(m), _, _]) => {
                for (k, v) in o.iter_mut().enumerate() {
                    *v = (at(c, k) - at(m, k)) / h;
                }
            }
            _ => {}
        }
    }
    out
}

/// `d f / d x_axis`: central where both neighbours are interior, one-sided
/// second order otherwise.
pub fn fd_partial<T: Real>(f: &MultivectorField<T>, axis: usize) -> Result<MultivectorField<T>> {
    let d = f.domain();
    check_axis(d, axis)?;
    let out = partial_raw(d, f.data(), f.stride(), axis);
    Ok(MultivectorField::from_raw(d.clone(), out))
}

fn dirac_with_sign<T: Real>(f: &MultivectorField<T>, sign: T) -> MultivectorField<T> {
    let d = f.domain();
    let n = d.dim();
    let stride = f.stride();
    let mut out = vec![T::zero(); f.data().len()];
    for axis in 0..n {
        let p = partial_raw(d, f.data(), stride, axis);
        let mut e = vec![T::zero(); n];
        e[axis] = sign;
        for (src, dst) in p.chunks(stride).zip(out.chunks_mut(stride)) {
            vector_mul_accumulate(&e, src, dst);
        }
    }
    MultivectorField::from_raw(d.clone(), out)
}

/// `D f = sum_j e_j d_j f`.
pub fn dirac_apply<T: Real>(f: &MultivectorField<T>) -> MultivectorField<T> {
    dirac_with_sign(f, T::one())
}

/// `Dbar f = sum_j conj(e_j) d_j f`; `conj(e_j) = -e_j`.
pub fn dirac_bar_apply<T: Real>(f: &MultivectorField<T>) -> MultivectorField<T> {
    dirac_with_sign(f, -T::one())
}

/// Componentwise Laplacian: `2n+1`-point stencil where central, one-sided
/// second differences near the boundary.
pub fn laplacian_apply<T: Real>(f: &MultivectorField<T>) -> MultivectorField<T> {
    let d = f.domain();
    let stride = f.stride();
    let data = f.data();
    let h2 = d.h() * d.h();
    let (two, four, five) = (lit::<T>(2.0), lit::<T>(4.0), lit::<T>(5.0));
    let at = |c: usize, k: usize| data[c * stride + k];
    let mut out = vec![T::zero(); data.len()];
    for c in 0..d.len() {
        for axis in 0..d.dim() {
            let fw = walk(d, c, axis, true, 3);
            let bw = walk(d, c, axis, false, 3);
            let o = &mut out[c * stride..(c + 1) * stride];
            for (k, v) in o.iter_mut().enumerate() {
                let second = match (fw, bw) {
                    ([Some(p), _, _], [Some(m), _, _]) => at(p, k) - two * at(c, k) + at(m, k),
                    ([Some(p1), Some(p2), Some(p3)], _) => {
                        two * at(c, k) - five * at(p1, k) + four * at(p2, k) - at(p3, k)
                    }
                    (_, [Some(m1), Some(m2), Some(m3)]) => {
                        two * at(c, k) - five * at(m1, k) + four * at(m2, k) - at(m3, k)
                    }
                    ([Some(p1), Some(p2), _], _) => at(c, k) - two * at(p1, k) + at(p2, k),
                    (_, [Some(m1), Some(m2), _]) => at(c, k) - two * at(m1, k) + at(m2, k),
                    _ => T::zero(),
                };
                *v = *v + second / h2;
            }
        }
    }
    MultivectorField::from_raw(d.clone(), out)
}

/// 5-point (7-point in 3-d) Laplacian of one scalar component with
/// homogeneous Dirichlet values on every exterior neighbour.
pub fn dirichlet_laplacian<T: Real>(d: &GridDomain<T>, u: &[T], out: &mut [T]) {
    let inv_h2 = T::one() / (d.h() * d.h());
    let diag = lit::<T>(2.0 * d.dim() as f64);
    for c in 0..d.len() {
        let mut acc = -diag * u[c];
        for axis in 0..d.dim() {
            if let Some(p) = d.neighbor(c, axis, true) {
                acc = acc + u[p];
            }
            if let Some(m) = d.neighbor(c, axis, false) {
                acc = acc + u[m];
            }
        }
        out[c] = acc * inv_h2;
    }
}

/// `D^alpha f` as iterated coordinate partials.
pub fn dalpha_apply<T: Real>(
    f: &MultivectorField<T>,
    alpha: &MultiIndex,
) -> Result<MultivectorField<T>> {
    if alpha.order() > MultiIndex::MAX_ORDER {
        return Err(Error::Unsupported(format!(
            "|alpha| = {} exceeds 2",
            alpha.order()
        )));
    }
    if alpha.orders().len() != f.domain().dim() {
        return Err(Error::DimensionMismatch {
            left: f.domain().dim(),
            right: alpha.orders().len(),
        });
    }
    let mut cur = f.clone();
    for (axis, &times) in alpha.orders().iter().enumerate() {
        for _ in 0..times {
            cur = fd_partial(&cur, axis)?;
        }
    }
    Ok(cur)
}
