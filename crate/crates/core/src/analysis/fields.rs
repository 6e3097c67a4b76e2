//! Named test fields and seeded random field suites.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{BladeIndex, Multivector, VectorN};
use crate::error::{Error, Result};
use crate::grid::{BoundaryField, BoundaryMesh, GridDomain, MultivectorField, Region};
use crate::scalar::{lit, Real};
use crate::transforms::fundamental_solution;

/// Builtin fields with known structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinField {
    /// `Phi(x - x0)` with the pole `x0` outside the closed domain; monogenic.
    MonogenicPhi,
    /// `Dbar(phi^2)` for the vanishing weight `phi` of the region; a pure
    /// potential whose generator has zero trace and zero normal derivative.
    DbarPotential,
    /// `x_1 e_0`.
    PolyX1,
    /// `phi e_0`, zero on the boundary.
    ZeroTraceBump,
}

impl BuiltinField {
    pub const ALL: [BuiltinField; 4] = [
        BuiltinField::MonogenicPhi,
        BuiltinField::DbarPotential,
        BuiltinField::PolyX1,
        BuiltinField::ZeroTraceBump,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::MonogenicPhi => "monogenic-phi",
            Self::DbarPotential => "dbar-potential",
            Self::PolyX1 => "poly-x1",
            Self::ZeroTraceBump => "zero-trace-bump",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }

    /// Value at a point of the region.
    pub fn eval<T: Real>(&self, region: &Region<T>, x: &[T]) -> Result<Multivector<T>> {
        let n = region.dim();
        match self {
            Self::MonogenicPhi => {
                let x0 = region.exterior_point();
                let d: Vec<T> = x.iter().zip(&x0).map(|(&a, &b)| a - b).collect();
                fundamental_solution(&VectorN::new(d)?)
            }
            Self::DbarPotential => {
                let phi = region.vanishing_weight(x);
                let grad = region.vanishing_weight_gradient(x);
                // Dbar(phi^2) = sum_j conj(e_j) 2 phi d_j phi = -2 phi sum_j e_j d_j phi
                let v: Vec<T> = grad.iter().map(|&g| lit::<T>(-2.0) * phi * g).collect();
                Ok(VectorN::new(v)?.embed())
            }
            Self::PolyX1 => Multivector::scalar(n, x[0]),
            Self::ZeroTraceBump => Multivector::scalar(n, region.vanishing_weight(x)),
        }
    }

    pub fn sample<T: Real>(&self, domain: &Arc<GridDomain<T>>) -> Result<MultivectorField<T>> {
        let region = domain.region();
        let mut data = Vec::with_capacity(domain.len() * domain.stride());
        for c in 0..domain.len() {
            data.extend_from_slice(self.eval(region, domain.center(c))?.coeffs());
        }
        MultivectorField::from_data(domain.clone(), data)
    }
}

/// Band-limited trigonometric polynomial coefficients for one random field.
#[derive(Debug, Clone)]
struct TrigSpec {
    /// Per blade, per mode: (wave vector, amplitude, phase).
    modes: Vec<Vec<(Vec<f64>, f64, f64)>>,
}

/// Largest wave number per axis of the random suites.
pub const RANDOM_BAND: usize = 2;

fn stream_seed(seed: u64, index: u64) -> u64 {
    // splitmix-style mixing so that consecutive indices give unrelated streams
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trig_spec(dim: usize, seed: u64, index: u64) -> TrigSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, index));
    let k = RANDOM_BAND + 1;
    let count = k.pow(dim as u32);
    let modes = (0..1usize << dim)
        .map(|_| {
            (0..count)
                .map(|m| {
                    let mut rem = m;
                    let wave: Vec<f64> = (0..dim)
                        .map(|_| {
                            let w = (rem % k) as f64;
                            rem /= k;
                            w
                        })
                        .collect();
                    let k2: f64 = wave.iter().map(|w| w * w).sum();
                    let amp = rng.gen_range(-1.0..1.0) / (1.0 + k2);
                    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
                    (wave, amp, phase)
                })
                .collect()
        })
        .collect();
    TrigSpec { modes }
}

fn region_scale<T: Real>(region: &Region<T>) -> (Vec<T>, T) {
    let c = region.centroid();
    let l = match region {
        Region::Ball { radius, .. } => *radius,
        Region::Box { lo, hi } => lo
            .iter()
            .zip(hi)
            .map(|(&a, &b)| (b - a) / lit(2.0))
            .fold(T::zero(), T::max),
    };
    (c, l)
}

fn trig_eval<T: Real>(spec: &TrigSpec, centre: &[T], scale: T, x: &[T]) -> Vec<T> {
    let pi = T::PI();
    spec.modes
        .iter()
        .map(|modes| {
            modes.iter().fold(T::zero(), |acc, (wave, amp, phase)| {
                let arg = wave
                    .iter()
                    .zip(x.iter().zip(centre))
                    .fold(lit::<T>(*phase), |s, (&k, (&xi, &ci))| {
                        s + pi * lit::<T>(k) * (xi - ci) / scale
                    });
                acc + lit::<T>(*amp) * arg.cos()
            })
        })
        .collect()
}

/// Member `index` of the seeded random suite: a band-limited trigonometric
/// polynomial in every blade component. The same `(seed, index)` always
/// yields the same field, so suites of different sizes are nested.
pub fn random_field<T: Real>(
    domain: &Arc<GridDomain<T>>,
    seed: u64,
    index: u64,
) -> Result<MultivectorField<T>> {
    let spec = trig_spec(domain.dim(), seed, index);
    let (c, l) = region_scale(domain.region());
    let mut data = Vec::with_capacity(domain.len() * domain.stride());
    for cell in 0..domain.len() {
        data.extend(trig_eval(&spec, &c, l, domain.center(cell)));
    }
    MultivectorField::from_data(domain.clone(), data)
}

/// Random member multiplied by the vanishing weight of the region, so that
/// it has zero trace.
pub fn random_zero_trace_field<T: Real>(
    domain: &Arc<GridDomain<T>>,
    seed: u64,
    index: u64,
) -> Result<MultivectorField<T>> {
    let spec = trig_spec(domain.dim(), seed, index);
    let region = domain.region();
    let (c, l) = region_scale(region);
    let mut data = Vec::with_capacity(domain.len() * domain.stride());
    for cell in 0..domain.len() {
        let x = domain.center(cell);
        let w = region.vanishing_weight(x);
        data.extend(trig_eval(&spec, &c, l, x).into_iter().map(|v| v * w));
    }
    MultivectorField::from_data(domain.clone(), data)
}

/// Scalar samples `phi e_0` of the vanishing weight.
pub fn vanishing_weight_field<T: Real>(domain: &Arc<GridDomain<T>>) -> MultivectorField<T> {
    let region = domain.region().clone();
    MultivectorField::from_component(domain.clone(), BladeIndex::SCALAR, move |x| {
        region.vanishing_weight(x)
    })
}

/// Manufactured data for `D u = f`, `tau u = g`: with `y = x - centroid`,
/// `u = y_1 e_0 - y_2 e_12 + y_1 y_2 e_0`, whose first two terms are
/// monogenic, and the exact `f = D u = y_2 e_1 + y_1 e_2`, `g = tau u`.
/// Returns `(u, f, g)`.
pub fn manufactured_bvp<T: Real>(
    domain: &Arc<GridDomain<T>>,
    mesh: &Arc<BoundaryMesh<T>>,
) -> Result<(MultivectorField<T>, MultivectorField<T>, BoundaryField<T>)> {
    let n = domain.dim();
    if n < 2 {
        return Err(Error::UnsupportedDimension(n, "2..=5"));
    }
    let c = domain.region().centroid();
    let u = |x: &[T]| {
        let (y1, y2) = (x[0] - c[0], x[1] - c[1]);
        let mut v = vec![T::zero(); 1 << n];
        v[0] = y1 + y1 * y2;
        v[0b11] = -y2;
        Multivector::from_coeffs(n, v).expect("coefficient count matches")
    };
    let f = |x: &[T]| {
        let mut v = vec![T::zero(); 1 << n];
        v[0b01] = x[1] - c[1];
        v[0b10] = x[0] - c[0];
        Multivector::from_coeffs(n, v).expect("coefficient count matches")
    };
    Ok((
        MultivectorField::from_fn(domain.clone(), u)?,
        MultivectorField::from_fn(domain.clone(), f)?,
        BoundaryField::from_fn(mesh.clone(), u)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_disc, dirac_apply, zero_trace_error};

    #[test]
    fn names_round_trip() {
        for b in BuiltinField::ALL {
            assert_eq!(BuiltinField::from_name(b.name()), Some(b));
            let json = serde_json::to_string(&b).unwrap();
            assert_eq!(json, format!("\"{}\"", b.name()));
        }
        assert_eq!(BuiltinField::from_name("nope"), None);
    }

    #[test]
    fn builtin_structure() {
        let (d, mesh) = build_disc(1.0_f64, 1.0 / 32.0).unwrap();
        let phi = BuiltinField::MonogenicPhi.sample(&d).unwrap();
        let keep = d.central_stencil_mask(1);
        assert!(dirac_apply(&phi).l2_norm_on(&keep) < 1e-3 * phi.l2_norm());
        let bump = BuiltinField::ZeroTraceBump.sample(&d).unwrap();
        assert!(zero_trace_error(&bump, &mesh).unwrap() < 0.01);
    }

    #[test]
    fn random_fields_are_reproducible() {
        let (d, _) = build_disc(1.0_f64, 1.0 / 8.0).unwrap();
        let a = random_field(&d, 7, 3).unwrap();
        let b = random_field(&d, 7, 3).unwrap();
        let c = random_field(&d, 7, 4).unwrap();
        assert_eq!(a.data(), b.data());
        assert_ne!(a.data(), c.data());
        assert!(a.max_norm() > 0.0);
    }
}
