//! Clifford analysis on gridded domains.
//!
//! The crate provides exact `Cl_n` arithmetic, finite-difference Dirac
//! operators, the Teodorescu (volume) and Cauchy (boundary) transforms built
//! on the fundamental solution `Phi(x) = conj(x) / (omega_n |x|^n)`, Orlicz
//! norms (Luxembourg, Clifford–Luxembourg, Orlicz–Sobolev and
//! Orlicz–Slobodeckji), and on top of these the Borel–Pompeiu check, the
//! Bergman-type decomposition and a solver for `Du = f`, `tau u = g`.
//!
//! Everything is generic over the scalar type; the `*64` aliases below fix
//! it to `f64`, which is what the CLI and the acceptance suite use.

pub mod analysis;
pub mod clifford;
pub mod error;
pub mod grid;
pub mod orlicz;
pub mod quadrature;
pub mod scalar;
pub mod transforms;

pub use clifford::{blade_product, BladeIndex, Multivector, Sign, VectorN};
pub use error::{Error, Result};
pub use orlicz::{NormConfig, OrliczFunction};
pub use scalar::{Real, Scalar};
pub use transforms::KernelConfig;

pub type Multivector64 = Multivector<f64>;
pub type VectorN64 = VectorN<f64>;
pub type GridDomain64 = grid::GridDomain<f64>;
pub type BoundaryMesh64 = grid::BoundaryMesh<f64>;
pub type MultivectorField64 = grid::MultivectorField<f64>;
pub type BoundaryField64 = grid::BoundaryField<f64>;
