//! Arithmetic of the Clifford algebra `Cl_n` with the negative-definite
//! signature `e_j^2 = -1`.
//!
//! A multivector stores its `2^n` coefficients densely, indexed by the blade
//! bitmask: bit `j - 1` set means `e_j` takes part in the blade. Index `0` is
//! the identity `e_0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Float;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest supported algebra dimension.
pub const MAX_DIM: usize = 5;

/// Sign of a product of basis blades.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    #[inline]
    pub fn apply<T: Scalar>(self, x: T) -> T {
        match self {
            Sign::Plus => x,
            Sign::Minus => -x,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A basis blade `e_A`, stored as a bitmask over `{1, ..., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BladeIndex(u32);

impl BladeIndex {
    /// The identity blade `e_0`.
    pub const SCALAR: BladeIndex = BladeIndex(0);

    pub const fn from_bits(bits: u32) -> Self {
        BladeIndex(bits)
    }

    /// The basis vector `e_j` for `j >= 1`.
    pub fn basis(j: usize) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&j),
            "basis vector index {j} out of range"
        );
        BladeIndex(1 << (j - 1))
    }

    /// Blade `e_{j_1} ... e_{j_r}` from an increasing list of indices.
    pub fn from_indices(indices: &[usize]) -> Self {
        indices.iter().fold(BladeIndex(0), |acc, &j| {
            BladeIndex(acc.0 | Self::basis(j).0)
        })
    }

    #[inline]
    pub const fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn grade(self) -> u32 {
        self.0.count_ones()
    }

    /// Increasing list of the participating basis indices.
    pub fn indices(self) -> Vec<usize> {
        (0..32)
            .filter(|b| self.0 >> b & 1 == 1)
            .map(|b| b as usize + 1)
            .collect()
    }

    pub fn fits(self, dim: usize) -> bool {
        (self.0 as u64) < (1u64 << dim)
    }
}

impl fmt::Display for BladeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "e0");
        }
        write!(f, "e")?;
        for j in self.indices() {
            write!(f, "{j}")?;
        }
        Ok(())
    }
}

/// `e_A e_B = sign * e_{A xor B}`.
///
/// The sign counts the transpositions that sort the concatenated index
/// sequence, then applies `e_j^2 = -1` once per shared index.
#[inline]
pub fn blade_product(a: BladeIndex, b: BladeIndex) -> (Sign, BladeIndex) {
    let mut swaps = 0u32;
    let mut rest = a.0 >> 1;
    while rest != 0 {
        swaps += (rest & b.0).count_ones();
        rest >>= 1;
    }
    let squares = (a.0 & b.0).count_ones();
    (
        Sign::from_parity((swaps + squares) % 2 == 1),
        BladeIndex(a.0 ^ b.0),
    )
}

/// Sign of the Clifford conjugate of a grade-`r` blade: `(-1)^{r(r+1)/2}`.
#[inline]
pub fn conjugation_sign(blade: BladeIndex) -> Sign {
    let r = blade.grade();
    Sign::from_parity((r * (r + 1) / 2) % 2 == 1)
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim, "1..=5"))
    }
}

/// A point of `R^n`, embedded into `Cl_n` as `sum_j e_j x_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorN<T> {
    components: Vec<T>,
}

impl<T: Scalar> VectorN<T> {
    pub fn new(components: Vec<T>) -> Result<Self> {
        check_dim(components.len())?;
        if let Some(i) = components.iter().position(|c| !c.is_finite_value()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { components })
    }

    pub fn from_slice(components: &[T]) -> Result<Self> {
        Self::new(components.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[T] {
        &self.components
    }

    /// `sum_j x_j^2`.
    pub fn norm_squared(&self) -> T {
        self.components
            .iter()
            .fold(T::zero(), |acc, &c| acc + c * c)
    }

    pub fn embed(&self) -> Multivector<T> {
        let mut coeffs = vec![T::zero(); 1 << self.dim()];
        for (j, &x) in self.components.iter().enumerate() {
            coeffs[1 << j] = x;
        }
        Multivector {
            dim: self.dim(),
            coeffs,
        }
    }

    /// `x^{-1} = conj(x) / |x|^2`.
    pub fn kelvin_inverse(&self) -> Result<Multivector<T>> {
        let n2 = self.norm_squared();
        if n2 == T::zero() {
            return Err(Error::Domain("Kelvin inverse of the zero vector".into()));
        }
        Ok(self.embed().conjugate().scale_div(n2))
    }
}

impl<T: Scalar + Float> VectorN<T> {
    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }
}

/// A Clifford number `a = sum_A e_A a_A` in `Cl_n`, `1 <= n <= 5`.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector<T> {
    dim: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> Multivector<T> {
    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            coeffs: vec![T::zero(); 1 << dim],
        })
    }

    /// `v e_0`.
    pub fn scalar(dim: usize, v: T) -> Result<Self> {
        let mut m = Self::zero(dim)?;
        m.coeffs[0] = v;
        Ok(m)
    }

    /// `v e_A`.
    pub fn blade(dim: usize, blade: BladeIndex, v: T) -> Result<Self> {
        let mut m = Self::zero(dim)?;
        if !blade.fits(dim) {
            return Err(Error::Domain(format!(
                "blade {blade} does not exist in Cl_{dim}"
            )));
        }
        m.coeffs[blade.index()] = v;
        Ok(m)
    }

    /// The basis vector `e_j`.
    pub fn basis_vector(dim: usize, j: usize) -> Result<Self> {
        if j == 0 || j > dim {
            return Err(Error::Domain(format!(
                "e_{j} is not a generator of Cl_{dim}"
            )));
        }
        Self::blade(dim, BladeIndex::basis(j), T::one())
    }

    pub fn from_coeffs(dim: usize, coeffs: Vec<T>) -> Result<Self> {
        check_dim(dim)?;
        if coeffs.len() != 1 << dim {
            return Err(Error::CoefficientCount {
                expected: 1 << dim,
                got: coeffs.len(),
            });
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite_value()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { dim, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn get(&self, blade: BladeIndex) -> T {
        self.coeffs[blade.index()]
    }

    /// The real part `(a)_0`.
    pub fn real_part(&self) -> T {
        self.coeffs[0]
    }

    /// Geometric product, failing on mismatched dimensions.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let mut out = vec![T::zero(); self.coeffs.len()];
        mul_accumulate(&self.coeffs, &rhs.coeffs, &mut out);
        Ok(Self {
            dim: self.dim,
            coeffs: out,
        })
    }

    pub fn conjugate(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(a, &c)| conjugation_sign(BladeIndex(a as u32)).apply(c))
            .collect();
        Self {
            dim: self.dim,
            coeffs,
        }
    }

    /// `sum_A a_A^2`, the real part of `a conj(a)`.
    pub fn norm_squared(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, &c| acc + c * c)
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    fn scale_div(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|&c| c / s).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == T::zero())
    }

    /// Grade-1 part as a vector.
    pub fn vector_part(&self) -> VectorN<T> {
        VectorN {
            components: (0..self.dim).map(|j| self.coeffs[1 << j]).collect(),
        }
    }
}

impl<T: Scalar + Float> Multivector<T> {
    /// `||a|| = (sum_A a_A^2)^{1/2}`.
    pub fn clifford_norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    /// Largest coefficient difference; handy for approximate comparisons.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()))
    }
}

/// `out += a * b` on raw coefficient slices of equal length `2^n`.
#[inline]
pub fn mul_accumulate<T: Scalar>(a: &[T], b: &[T], out: &mut [T]) {
    debug_assert_eq!(a.len(), b.len());
    for (i, &x) in a.iter().enumerate() {
        if x == T::zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y == T::zero() {
                continue;
            }
            let (sign, blade) = blade_product(BladeIndex(i as u32), BladeIndex(j as u32));
            out[blade.index()] = out[blade.index()] + sign.apply(x * y);
        }
    }
}

/// `out += (sum_j v_j e_j) * b`, the left action of a vector. Costs `n 2^n`.
#[inline]
pub fn vector_mul_accumulate<T: Scalar>(v: &[T], b: &[T], out: &mut [T]) {
    for (j, &x) in v.iter().enumerate() {
        if x == T::zero() {
            continue;
        }
        let bit = 1u32 << j;
        let below = bit - 1;
        for (a, &y) in b.iter().enumerate() {
            let a = a as u32;
            // e_j e_A: one swap per index of A below j, one square if j is in A
            let odd = ((a & below).count_ones() + (a & bit).count_ones()) % 2 == 1;
            let k = (a ^ bit) as usize;
            out[k] = out[k] + Sign::from_parity(odd).apply(x * y);
        }
    }
}

impl<T: Scalar> Mul for &Multivector<T> {
    type Output = Multivector<T>;

    fn mul(self, rhs: Self) -> Multivector<T> {
        self.checked_mul(rhs)
            .expect("geometric product of multivectors with different dimensions")
    }
}

impl<T: Scalar> Mul for Multivector<T> {
    type Output = Multivector<T>;

    fn mul(self, rhs: Self) -> Multivector<T> {
        &self * &rhs
    }
}

impl<T: Scalar> Add for &Multivector<T> {
    type Output = Multivector<T>;

    fn add(self, rhs: Self) -> Multivector<T> {
        assert_eq!(
            self.dim, rhs.dim,
            "sum of multivectors with different dimensions"
        );
        Multivector {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<T: Scalar> Add for Multivector<T> {
    type Output = Multivector<T>;

    fn add(self, rhs: Self) -> Multivector<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for &Multivector<T> {
    type Output = Multivector<T>;

    fn sub(self, rhs: Self) -> Multivector<T> {
        assert_eq!(
            self.dim, rhs.dim,
            "difference of multivectors with different dimensions"
        );
        Multivector {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<T: Scalar> Sub for Multivector<T> {
    type Output = Multivector<T>;

    fn sub(self, rhs: Self) -> Multivector<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Neg for Multivector<T> {
    type Output = Multivector<T>;

    fn neg(self) -> Multivector<T> {
        Multivector {
            dim: self.dim,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Multivector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, c) in self.coeffs.iter().enumerate() {
            if *c == T::zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{}", BladeIndex(a as u32))?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
