use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::scalar::{lit, Real};

use super::Region;

/// Connectivity of the facets, used for tangential differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeshTopology {
    /// Closed curve, facets ordered counter-clockwise (`n = 2`).
    Loop,
    /// Sphere rule, `n_theta` polar rings of `n_phi` azimuthal nodes,
    /// ring-major order.
    LatLong { n_theta: usize, n_phi: usize },
    /// No connectivity (faces of a 3-d box).
    Unstructured,
}

/// One boundary facet: centre on `dOmega`, outward unit normal, surface weight.
#[derive(Debug, Clone, Copy)]
pub struct Facet<'a, T> {
    pub center: &'a [T],
    pub normal: &'a [T],
    pub weight: T,
}

/// Discretized boundary `dOmega` with outward normals and quadrature weights.
#[derive(Debug, Clone)]
pub struct BoundaryMesh<T> {
    dim: usize,
    centers: Vec<T>,
    normals: Vec<T>,
    weights: Vec<T>,
    topology: MeshTopology,
    region: Region<T>,
    grid_spacing: T,
    polar: Vec<T>,
}

impl<T: Real> BoundaryMesh<T> {
    /// Assemble a mesh from raw facet arrays; normals are checked for unit
    /// length.
    pub fn from_parts(
        region: Region<T>,
        grid_spacing: T,
        centers: Vec<T>,
        normals: Vec<T>,
        weights: Vec<T>,
        topology: MeshTopology,
    ) -> Result<Self> {
        let dim = region.dim();
        if centers.len() != weights.len() * dim || normals.len() != centers.len() {
            return Err(Error::Mesh("facet arrays have inconsistent lengths".into()));
        }
        if weights.len() < 2 {
            return Err(Error::Mesh(
                "boundary mesh needs at least two facets".into(),
            ));
        }
        let tol = T::epsilon() * lit(64.0);
        for (i, n) in normals.chunks(dim).enumerate() {
            let len = n.iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
            if (len - T::one()).abs() > tol {
                return Err(Error::Mesh(format!("normal of facet {i} has length {len}")));
            }
        }
        Ok(Self {
            dim,
            centers,
            normals,
            weights,
            topology,
            region,
            grid_spacing,
            polar: Vec::new(),
        })
    }

    /// `facets` equal-arc facets on a circle; weights are the exact arc lengths.
    pub(crate) fn circle(region: Region<T>, h: T, facets: usize) -> Result<Self> {
        let Region::Ball { center, radius } = &region else {
            return Err(Error::Mesh("circle mesh needs a disc region".into()));
        };
        if facets < 3 {
            return Err(Error::Mesh("a circle needs at least three facets".into()));
        }
        let mut centers = Vec::with_capacity(2 * facets);
        let mut normals = Vec::with_capacity(2 * facets);
        let dtheta = lit::<T>(2.0) * T::PI() / lit(facets as f64);
        for i in 0..facets {
            let t = (lit::<T>(i as f64) + lit(0.5)) * dtheta;
            let (s, c) = t.sin_cos();
            centers.push(center[0] + *radius * c);
            centers.push(center[1] + *radius * s);
            normals.push(c);
            normals.push(s);
        }
        let weights = vec![*radius * dtheta; facets];
        Self::from_parts(region, h, centers, normals, weights, MeshTopology::Loop)
    }

    /// Gauss–Legendre nodes in `cos(theta)` times uniform azimuth.
    pub(crate) fn sphere(region: Region<T>, h: T, n_theta: usize, n_phi: usize) -> Result<Self> {
        let Region::Ball { center, radius } = &region else {
            return Err(Error::Mesh("sphere mesh needs a ball region".into()));
        };
        if n_theta < 2 || n_phi < 3 {
            return Err(Error::Mesh("sphere rule too coarse".into()));
        }
        let (z, w) = gauss_legendre(n_theta);
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let r = *radius;
        let n = n_theta * n_phi;
        let mut centers = Vec::with_capacity(3 * n);
        let mut normals = Vec::with_capacity(3 * n);
        let mut weights = Vec::with_capacity(n);
        let mut polar = Vec::with_capacity(n_theta);
        // north pole first
        for i in (0..n_theta).rev() {
            let ct = z[i];
            let st = (1.0 - ct * ct).sqrt();
            polar.push(lit::<T>(ct.acos()));
            for k in 0..n_phi {
                let phi = (k as f64 + 0.5) * dphi;
                let nrm = [st * phi.cos(), st * phi.sin(), ct];
                let len = (nrm[0] * nrm[0] + nrm[1] * nrm[1] + nrm[2] * nrm[2]).sqrt();
                for j in 0..3 {
                    let nj = lit::<T>(nrm[j] / len);
                    normals.push(nj);
                    centers.push(center[j] + r * nj);
                }
                weights.push(r * r * lit::<T>(w[i] * dphi));
            }
        }
        let mut mesh = Self::from_parts(
            region,
            h,
            centers,
            normals,
            weights,
            MeshTopology::LatLong { n_theta, n_phi },
        )?;
        mesh.polar = polar;
        Ok(mesh)
    }

    /// Face-centre facets of the boundary cells of a box grid.
    pub(crate) fn box_faces(region: Region<T>, h: T, shape: &[usize]) -> Result<Self> {
        let Region::Box { lo, hi } = &region else {
            return Err(Error::Mesh("box mesh needs a box region".into()));
        };
        let dim = shape.len();
        let half = lit::<T>(0.5);
        let at = |j: usize, i: usize| lo[j] + (lit::<T>(i as f64) + half) * h;
        let mut centers = Vec::new();
        let mut normals = Vec::new();
        let mut weights = Vec::new();
        let mut push = |c: &[T], n: &[T], w: T| {
            centers.extend_from_slice(c);
            normals.extend_from_slice(n);
            weights.push(w);
        };
        let (one, zero) = (T::one(), T::zero());
        if dim == 2 {
            // counter-clockwise: bottom, right, top, left
            for i in 0..shape[0] {
                push(&[at(0, i), lo[1]], &[zero, -one], h);
            }
            for i in 0..shape[1] {
                push(&[hi[0], at(1, i)], &[one, zero], h);
            }
            for i in (0..shape[0]).rev() {
                push(&[at(0, i), hi[1]], &[zero, one], h);
            }
            for i in (0..shape[1]).rev() {
                push(&[lo[0], at(1, i)], &[-one, zero], h);
            }
            return Self::from_parts(
                region.clone(),
                h,
                centers,
                normals,
                weights,
                MeshTopology::Loop,
            );
        }
        let area = h * h;
        for axis in 0..3 {
            let (a, b) = ((axis + 1) % 3, (axis + 2) % 3);
            for (side, plane) in [(-one, lo[axis]), (one, hi[axis])] {
                for i in 0..shape[a] {
                    for k in 0..shape[b] {
                        let mut c = [zero; 3];
                        let mut n = [zero; 3];
                        c[axis] = plane;
                        c[a] = at(a, i);
                        c[b] = at(b, k);
                        n[axis] = side;
                        push(&c, &n, area);
                    }
                }
            }
        }
        Self::from_parts(
            region.clone(),
            h,
            centers,
            normals,
            weights,
            MeshTopology::Unstructured,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn facet(&self, i: usize) -> Facet<'_, T> {
        Facet {
            center: self.center(i),
            normal: self.normal(i),
            weight: self.weights[i],
        }
    }

    pub fn center(&self, i: usize) -> &[T] {
        &self.centers[i * self.dim..(i + 1) * self.dim]
    }

    pub fn normal(&self, i: usize) -> &[T] {
        &self.normals[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn centers(&self) -> &[T] {
        &self.centers
    }

    pub fn normals(&self) -> &[T] {
        &self.normals
    }

    pub fn topology(&self) -> MeshTopology {
        self.topology
    }

    pub fn region(&self) -> &Region<T> {
        &self.region
    }

    /// Spacing of the volume grid the mesh was built with; sets the collar.
    pub fn grid_spacing(&self) -> T {
        self.grid_spacing
    }

    pub fn total_weight(&self) -> T {
        self.weights.iter().fold(T::zero(), |a, &w| a + w)
    }

    /// Polar angle of each ring of a sphere rule.
    pub(crate) fn polar_angles(&self) -> &[T] {
        &self.polar
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_ball, build_box, build_disc};

    fn check_outward<T: crate::scalar::Real>(mesh: &super::BoundaryMesh<T>) {
        let eps = mesh.grid_spacing() / crate::scalar::lit(10.0);
        for i in 0..mesh.len() {
            let f = mesh.facet(i);
            let out: Vec<T> = f
                .center
                .iter()
                .zip(f.normal)
                .map(|(&c, &n)| c + eps * n)
                .collect();
            let inn: Vec<T> = f
                .center
                .iter()
                .zip(f.normal)
                .map(|(&c, &n)| c - eps * n)
                .collect();
            assert!(
                !mesh.region().contains(&out),
                "facet {i} normal points inward"
            );
            assert!(
                mesh.region().contains(&inn),
                "facet {i} not on the boundary"
            );
        }
    }

    #[test]
    fn normals_point_outward() {
        check_outward(&build_disc(1.0_f64, 1.0 / 16.0).unwrap().1);
        check_outward(&build_ball(1.0_f64, 1.0 / 4.0).unwrap().1);
        check_outward(&build_box(&[1.0_f64, 2.0], 1.0 / 8.0).unwrap().1);
        check_outward(&build_box(&[1.0_f64, 1.0, 0.5], 1.0 / 8.0).unwrap().1);
    }

    #[test]
    fn normals_are_unit() {
        let (_, mesh) = build_ball(1.0_f64, 1.0 / 6.0).unwrap();
        for i in 0..mesh.len() {
            let n = mesh.normal(i);
            let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            assert!((len - 1.0).abs() < 1e-12);
        }
    }
}
