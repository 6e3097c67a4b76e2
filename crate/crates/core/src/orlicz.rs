//! Orlicz functions and the norms built from them: Luxembourg,
//! Clifford–Luxembourg, Orlicz–Sobolev and Orlicz–Slobodeckji.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::BladeIndex;
use crate::error::{Error, Result};
use crate::grid::{
    dalpha_apply, BoundaryField, MeshTopology, MultiIndex, MultivectorField, Region,
};
use crate::scalar::{lit, to_f64, Real};

/// A Young function `psi`: convex, nondecreasing, `psi(0) = 0`, unbounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrliczFunction {
    /// `t^p`
    Power { p: f64 },
    /// `t^p / p`
    PowerOverP { p: f64 },
    /// `e^t - 1`
    ExpMinusOne,
    /// Legendre–Fenchel conjugate `sup_t (s t - psi(t))`, evaluated numerically.
    Conjugate { of: Box<OrliczFunction> },
}

const GOLDEN_ITERS: usize = 200;
const MAX_DOUBLINGS: usize = 1100;

impl OrliczFunction {
    pub fn power(p: f64) -> Self {
        Self::Power { p }
    }

    pub fn power_over_p(p: f64) -> Self {
        Self::PowerOverP { p }
    }

    /// Rejects exponents outside `(1, inf)`.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Power { p } | Self::PowerOverP { p } => {
                if !(p.is_finite() && *p > 1.0) {
                    return Err(Error::Domain(format!(
                        "Orlicz exponent must satisfy 1 < p < inf, got {p}"
                    )));
                }
                Ok(())
            }
            Self::ExpMinusOne => Ok(()),
            Self::Conjugate { of } => of.validate(),
        }
    }

    /// `psi(t)` for `t >= 0`.
    pub fn eval<T: Real>(&self, t: T) -> Result<T> {
        if !(t >= T::zero()) {
            return Err(Error::Domain(format!("Orlicz function evaluated at {t}")));
        }
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked<T: Real>(&self, t: T) -> T {
        if t == T::zero() {
            return T::zero();
        }
        match self {
            Self::Power { p } => t.powf(lit(*p)),
            Self::PowerOverP { p } => t.powf(lit(*p)) / lit(*p),
            Self::ExpMinusOne => t.exp_m1(),
            Self::Conjugate { of } => lit(of.sup_transform(to_f64(t))),
        }
    }

    /// The conjugate function `psi*`; closed form for `t^p / p`, the
    /// biconjugate of a conjugate is the original function.
    pub fn conjugate(&self) -> Self {
        match self {
            Self::PowerOverP { p } => Self::PowerOverP { p: p / (p - 1.0) },
            Self::Conjugate { of } => (**of).clone(),
            other => Self::Conjugate {
                of: Box::new(other.clone()),
            },
        }
    }

    /// `sup_{t >= 0} (s t - psi(t))` by golden-section search.
    pub fn conjugate_numeric(&self, s: f64) -> f64 {
        self.sup_transform(s)
    }

    fn sup_transform(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let phi = |t: f64| s * t - self.eval_unchecked(t);
        let mut b = 1.0;
        let mut doublings = 0;
        while phi(2.0 * b) > phi(b) && doublings < MAX_DOUBLINGS {
            b *= 2.0;
            doublings += 1;
        }
        let (mut lo, mut hi) = (0.0, 2.0 * b);
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - r * (hi - lo);
        let mut x2 = lo + r * (hi - lo);
        let (mut f1, mut f2) = (phi(x1), phi(x2));
        for _ in 0..GOLDEN_ITERS {
            if hi - lo <= 1e-15 * hi.max(1e-300) {
                break;
            }
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + r * (hi - lo);
                f2 = phi(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - r * (hi - lo);
                f1 = phi(x1);
            }
        }
        [0.0, x1, x2, lo, hi]
            .into_iter()
            .map(phi)
            .fold(0.0, f64::max)
    }

    /// Sampled check of the Young-function axioms on a log-spaced grid:
    /// `psi(0) = 0`, monotone, midpoint convex and eventually above `t`.
    pub fn check_axioms(&self) -> Result<()> {
        self.validate()?;
        if self.eval_unchecked(0.0f64) != 0.0 {
            return Err(Error::Domain("psi(0) != 0".into()));
        }
        let ts: Vec<f64> = (0..=80)
            .map(|i| 10f64.powf(-4.0 + 0.1 * i as f64))
            .collect();
        let mut prev = 0.0;
        for w in ts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (self.eval_unchecked(a), self.eval_unchecked(b));
            let fm = self.eval_unchecked(0.5 * (a + b));
            let slack = 1e-9 * (1.0 + fa.abs() + fb.abs());
            if fa + slack < prev {
                return Err(Error::Domain(format!("psi decreases near t = {a}")));
            }
            if fm > 0.5 * (fa + fb) + slack {
                return Err(Error::Domain(format!("psi is not convex near t = {a}")));
            }
            prev = fa;
        }
        let big = self.eval_unchecked(1e4f64);
        if !(big > 1e4) {
            return Err(Error::Domain("psi does not grow superlinearly".into()));
        }
        Ok(())
    }
}

/// Tolerances for the Luxembourg root-finding and the Slobodeckji scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormConfig {
    pub bisect_tol: f64,
    pub max_iter: usize,
    pub lambda: f64,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self {
            bisect_tol: 1e-10,
            max_iter: 200,
            lambda: 1.0,
        }
    }
}

impl NormConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.bisect_tol > 0.0 && self.bisect_tol.is_finite()) {
            return Err(Error::Domain(format!(
                "bisect_tol must be positive, got {}",
                self.bisect_tol
            )));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Domain(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Domain("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// `sum_i w_i psi(|f_i| / beta)`.
pub fn modular_integral<T: Real>(
    f: &[T],
    weights: &[T],
    psi: &OrliczFunction,
    beta: T,
) -> Result<T> {
    if !(beta > T::zero()) {
        return Err(Error::Domain(format!(
            "modular scale must be positive, got {beta}"
        )));
    }
    if f.len() != weights.len() {
        return Err(Error::Shape(format!(
            "{} samples but {} weights",
            f.len(),
            weights.len()
        )));
    }
    Ok(modular(f, weights, psi, beta))
}

fn modular<T: Real>(f: &[T], weights: &[T], psi: &OrliczFunction, beta: T) -> T {
    f.iter().zip(weights).fold(T::zero(), |acc, (&v, &w)| {
        acc + w * psi.eval_unchecked(v.abs() / beta)
    })
}

/// `inf { beta > 0 : sum_i w_i psi(|f_i| / beta) <= 1 }`.
///
/// The returned value is the upper end of the final bisection bracket, so
/// the modular at the result never exceeds 1.
pub fn luxembourg_norm<T: Real>(
    f: &[T],
    weights: &[T],
    psi: &OrliczFunction,
    cfg: &NormConfig,
) -> Result<T> {
    cfg.validate()?;
    if f.len() != weights.len() {
        return Err(Error::Shape(format!(
            "{} samples but {} weights",
            f.len(),
            weights.len()
        )));
    }
    if let Some(i) = f.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    if f.iter().all(|&v| v == T::zero()) {
        return Ok(T::zero());
    }
    let tol = lit::<T>(cfg.bisect_tol).max(lit::<T>(8.0) * T::epsilon());
    let m = |beta: T| modular(f, weights, psi, beta);
    let two = lit::<T>(2.0);
    let mut iters = 0;
    let (mut lo, mut hi);
    if m(T::one()) > T::one() {
        hi = T::one();
        loop {
            lo = hi;
            hi = hi * two;
            iters += 1;
            if m(hi) <= T::one() {
                break;
            }
            if iters >= cfg.max_iter {
                return Err(Error::Convergence {
                    iterations: iters,
                    detail: format!("no upper bracket found, last bracket [{lo}, {hi}]"),
                });
            }
        }
    } else {
        lo = T::one();
        loop {
            hi = lo;
            lo = lo / two;
            iters += 1;
            if m(lo) > T::one() {
                break;
            }
            if iters >= cfg.max_iter {
                return Err(Error::Convergence {
                    iterations: iters,
                    detail: format!("no lower bracket found, last bracket [{lo}, {hi}]"),
                });
            }
        }
    }
    while hi - lo > tol * hi {
        if iters >= cfg.max_iter {
            return Err(Error::Convergence {
                iterations: iters,
                detail: format!("bisection stalled, last bracket [{lo}, {hi}]"),
            });
        }
        let mid = (lo + hi) / two;
        if m(mid) > T::one() {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
    }
    Ok(hi)
}

/// `sum_A ||f_A||_{L^psi}` over all blade components.
pub fn clifford_luxembourg_norm<T: Real>(
    f: &MultivectorField<T>,
    psi: &OrliczFunction,
    cfg: &NormConfig,
) -> Result<T> {
    let weights = f.weights();
    let parts: Vec<Result<T>> = (0..f.stride())
        .into_par_iter()
        .map(|a| {
            luxembourg_norm(
                &f.component(BladeIndex::from_bits(a as u32)),
                &weights,
                psi,
                cfg,
            )
        })
        .collect();
    parts.into_iter().try_fold(T::zero(), |acc, p| Ok(acc + p?))
}

/// `sum_A sum_{|alpha| <= k} ||D^alpha f_A||_{L^psi}`, `k <= 2`.
pub fn sobolev_norm<T: Real>(
    f: &MultivectorField<T>,
    k: usize,
    psi: &OrliczFunction,
    cfg: &NormConfig,
) -> Result<T> {
    let alphas = MultiIndex::up_to(f.domain().dim(), k)?;
    let derivs = alphas
        .iter()
        .map(|a| dalpha_apply(f, a))
        .collect::<Result<Vec<_>>>()?;
    let weights = f.weights();
    let stride = f.stride();
    let parts: Vec<Result<T>> = (0..stride * derivs.len())
        .into_par_iter()
        .map(|i| {
            let (a, j) = (i / derivs.len(), i % derivs.len());
            luxembourg_norm(
                &derivs[j].component(BladeIndex::from_bits(a as u32)),
                &weights,
                psi,
                cfg,
            )
        })
        .collect();
    parts.into_iter().try_fold(T::zero(), |acc, p| Ok(acc + p?))
}

/// Derivative along the boundary of one coefficient array of a boundary
/// field, one array per tangential direction.
fn tangential_derivatives<T: Real>(g: &BoundaryField<T>) -> Result<Vec<Vec<T>>> {
    let mesh = g.mesh();
    let stride = g.stride();
    let n = mesh.len();
    let data = g.data();
    match mesh.topology() {
        MeshTopology::Loop => {
            // cumulative chord length as the arc parameter
            let gap = |i: usize| -> T {
                let (a, b) = (mesh.center(i), mesh.center((i + 1) % n));
                crate::grid::dist2(a, b).sqrt()
            };
            let gaps: Vec<T> = (0..n).map(gap).collect();
            if gaps.iter().any(|&d| d == T::zero()) {
                return Err(Error::Mesh(
                    "coincident facet centres on the boundary loop".into(),
                ));
            }
            let mut out = vec![T::zero(); n * stride];
            for i in 0..n {
                let (im, ip) = ((i + n - 1) % n, (i + 1) % n);
                let (h1, h2) = (gaps[im], gaps[i]);
                let cm = -h2 / (h1 * (h1 + h2));
                let c0 = (h2 - h1) / (h1 * h2);
                let cp = h1 / (h2 * (h1 + h2));
                for k in 0..stride {
                    out[i * stride + k] = cm * data[im * stride + k]
                        + c0 * data[i * stride + k]
                        + cp * data[ip * stride + k];
                }
            }
            Ok(vec![out])
        }
        MeshTopology::LatLong { n_theta, n_phi } => {
            let Region::Ball { radius, .. } = mesh.region() else {
                return Err(Error::Mesh("lat-long mesh without a ball region".into()));
            };
            let r = *radius;
            let theta = mesh.polar_angles();
            let dphi = lit::<T>(2.0) * T::PI() / lit(n_phi as f64);
            let at = |ring: usize, k: usize| ring * n_phi + k;
            let mut d_theta = vec![T::zero(); n * stride];
            let mut d_phi = vec![T::zero(); n * stride];
            for ring in 0..n_theta {
                // three rings for a non-uniform Lagrange derivative
                let base = ring.saturating_sub(1).min(n_theta.saturating_sub(3));
                let xs = [theta[base], theta[base + 1], theta[base + 2]];
                let c = lagrange3_weights(xs, theta[ring]);
                let sin_t = theta[ring].sin();
                for k in 0..n_phi {
                    let i = at(ring, k);
                    let (km, kp) = ((k + n_phi - 1) % n_phi, (k + 1) % n_phi);
                    for s in 0..stride {
                        let v = (0..3).fold(T::zero(), |acc, j| {
                            acc + c[j] * data[at(base + j, k) * stride + s]
                        });
                        d_theta[i * stride + s] = v / r;
                        let dp = (data[at(ring, kp) * stride + s]
                            - data[at(ring, km) * stride + s])
                            / (lit::<T>(2.0) * dphi);
                        d_phi[i * stride + s] = dp / (r * sin_t);
                    }
                }
            }
            Ok(vec![d_theta, d_phi])
        }
        MeshTopology::Unstructured => Err(Error::Unsupported(
            "tangential derivatives need a structured boundary mesh".into(),
        )),
    }
}

/// Derivative weights at `x` of the quadratic through three nodes.
fn lagrange3_weights<T: Real>(xs: [T; 3], x: T) -> [T; 3] {
    let mut w = [T::zero(); 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let den = (xs[i] - xs[j]) * (xs[i] - xs[k]);
        w[i] = ((x - xs[j]) + (x - xs[k])) / den;
    }
    w
}

fn pointwise_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |s, &c| s + c * c).sqrt()
}

/// `sum_{|alpha| = order} int psi(|D^alpha f| / lambda)` with the pointwise
/// Clifford norm, `order <= 2`.
pub fn derivative_modular<T: Real>(
    f: &MultivectorField<T>,
    order: usize,
    psi: &OrliczFunction,
    cfg: &NormConfig,
) -> Result<T> {
    psi.validate()?;
    cfg.validate()?;
    let lambda = lit::<T>(cfg.lambda);
    let weights = f.weights();
    let mut total = T::zero();
    for alpha in MultiIndex::exact(f.domain().dim(), order) {
        let d = dalpha_apply(f, &alpha)?;
        for (v, &w) in d.data().chunks(d.stride()).zip(&weights) {
            total = total + w * psi.eval_unchecked(pointwise_norm(v) / lambda);
        }
    }
    Ok(total)
}

/// Orlicz–Slobodeckji norm of a boundary field for `k` in `{1, 2}`:
///
/// `sum_{|alpha| <= k-1} int psi(|D^alpha g| / lambda)
///  + sum_{|alpha| = k-1} iint psi(|D^alpha g(x) - D^alpha g(y)| / (lambda |x-y|)) |x-y|^{2-n}`,
///
/// with tangential derivatives and the diagonal `x = y` left out of the
/// double sum.
pub fn slobodeckji_norm<T: Real>(
    g: &BoundaryField<T>,
    k: usize,
    psi: &OrliczFunction,
    cfg: &NormConfig,
) -> Result<T> {
    cfg.validate()?;
    let parts = slobodeckji_parts(g, k, psi, cfg)?;
    Ok(parts.0 + parts.1)
}

/// The single-integral and double-integral terms of [`slobodeckji_norm`].
pub fn slobodeckji_parts<T: Real>(
    g: &BoundaryField<T>,
    k: usize,
    psi: &OrliczFunction,
    cfg: &NormConfig,
) -> Result<(T, T)> {
    if !(1..=2).contains(&k) {
        return Err(Error::Unsupported(format!(
            "Slobodeckji order k = {k}, expected 1 or 2"
        )));
    }
    let mesh = g.mesh();
    let stride = g.stride();
    let lambda = lit::<T>(cfg.lambda);
    let w = mesh.weights();
    let mut arrays: Vec<Vec<T>> = vec![g.data().to_vec()];
    if k == 2 {
        arrays.extend(tangential_derivatives(g)?);
    }
    let single = arrays.iter().fold(T::zero(), |acc, a| {
        acc + a.chunks(stride).zip(w).fold(T::zero(), |s, (v, &wi)| {
            s + wi * psi.eval_unchecked(pointwise_norm(v) / lambda)
        })
    });
    let top: &[Vec<T>] = if k == 1 { &arrays[..1] } else { &arrays[1..] };
    let dim = mesh.dim();
    let exponent = lit::<T>(2.0 - dim as f64);
    let rows: Vec<Result<T>> = (0..mesh.len())
        .into_par_iter()
        .map(|i| {
            let xi = mesh.center(i);
            let mut acc = T::zero();
            let mut diff = vec![T::zero(); stride];
            for j in 0..mesh.len() {
                if j == i {
                    continue;
                }
                let r = crate::grid::dist2(xi, mesh.center(j)).sqrt();
                if r == T::zero() {
                    return Err(Error::Mesh(format!(
                        "facets {i} and {j} have coincident centres"
                    )));
                }
                let kernel = r.powf(exponent) * w[i] * w[j];
                for a in top {
                    for (s, d) in diff.iter_mut().enumerate() {
                        *d = a[i * stride + s] - a[j * stride + s];
                    }
                    acc = acc + kernel * psi.eval_unchecked(pointwise_norm(&diff) / (lambda * r));
                }
            }
            Ok(acc)
        })
        .collect();
    let double = rows
        .into_iter()
        .try_fold(T::zero(), |acc, r| Ok(acc + r?))?;
    Ok((single, double))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Multivector;
    use crate::grid::{build_box, build_disc};

    #[test]
    fn eval_examples() {
        assert_eq!(OrliczFunction::power(2.0).eval(3.0).unwrap(), 9.0);
        let e = OrliczFunction::ExpMinusOne.eval(1.0f64).unwrap();
        assert!((e - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        for psi in [
            OrliczFunction::power(1.5),
            OrliczFunction::power_over_p(3.0),
            OrliczFunction::ExpMinusOne,
            OrliczFunction::ExpMinusOne.conjugate(),
        ] {
            assert_eq!(psi.eval(0.0f64).unwrap(), 0.0);
            psi.check_axioms().unwrap();
        }
        assert!(OrliczFunction::power(2.0).eval(-1.0f64).is_err());
        assert!(OrliczFunction::power(1.0).validate().is_err());
    }

    #[test]
    fn conjugates() {
        let psi = OrliczFunction::power_over_p(2.0);
        assert_eq!(psi.conjugate(), psi);
        for s in [0.0, 0.3, 1.0, 2.5, 7.0] {
            assert!((psi.conjugate_numeric(s) - s * s / 2.0).abs() < 1e-8);
        }
        let q = OrliczFunction::power_over_p(3.0).conjugate();
        assert_eq!(q, OrliczFunction::power_over_p(1.5));
        // conj(e^t - 1)(s) = s ln s - s + 1 for s >= 1, 0 below
        let c = OrliczFunction::ExpMinusOne.conjugate();
        for s in [0.5f64, 1.0, 2.0, 10.0] {
            let exact: f64 = if s >= 1.0 { s * s.ln() - s + 1.0 } else { 0.0 };
            assert!((c.eval(s).unwrap() - exact).abs() < 1e-9, "{s}");
        }
        assert_eq!(c.conjugate(), OrliczFunction::ExpMinusOne);
    }

    #[test]
    fn young_inequality_grid() {
        for psi in [OrliczFunction::power(3.0), OrliczFunction::ExpMinusOne] {
            let c = psi.conjugate();
            for i in 0..100 {
                for j in 0..100 {
                    let (s, t) = (i as f64 * 0.05, j as f64 * 0.05);
                    let rhs = psi.eval(t).unwrap() + c.eval(s).unwrap();
                    assert!(s * t <= rhs + 1e-9, "{s} {t}");
                }
            }
        }
    }

    #[test]
    fn modular_and_luxembourg_examples() {
        let psi = OrliczFunction::power(2.0);
        let w = vec![0.25f64; 4];
        let f = vec![2.0f64; 4];
        assert!((modular_integral(&f, &w, &psi, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(modular_integral(&f, &w, &psi, 0.0).is_err());
        let cfg = NormConfig::default();
        assert!((luxembourg_norm(&f, &w, &psi, &cfg).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(luxembourg_norm(&[0.0; 4], &w, &psi, &cfg).unwrap(), 0.0);
        let tight = NormConfig { max_iter: 3, ..cfg };
        assert!(matches!(
            luxembourg_norm(&f, &w, &psi, &tight),
            Err(Error::Convergence { .. })
        ));
    }

    #[test]
    fn clifford_luxembourg_on_unit_box() {
        let (d, _) = build_box(&[1.0_f64, 1.0], 1.0 / 8.0).unwrap();
        let psi = OrliczFunction::power(2.0);
        let cfg = NormConfig::default();
        let f =
            MultivectorField::from_fn(d.clone(), |_| Multivector::scalar(2, 2.0).unwrap()).unwrap();
        assert!((clifford_luxembourg_norm(&f, &psi, &cfg).unwrap() - 2.0).abs() < 1e-9);
        let f2 = MultivectorField::from_fn(d.clone(), |_| {
            Multivector::from_coeffs(2, vec![2.0, 2.0, 0.0, 0.0]).unwrap()
        })
        .unwrap();
        assert!((clifford_luxembourg_norm(&f2, &psi, &cfg).unwrap() - 4.0).abs() < 1e-9);
        assert_eq!(
            sobolev_norm(&f2, 2, &psi, &cfg).unwrap(),
            clifford_luxembourg_norm(&f2, &psi, &cfg).unwrap()
        );
        assert!(sobolev_norm(&f2, 3, &psi, &cfg).is_err());
    }

    #[test]
    fn sobolev_linear_on_unit_square() {
        let psi = OrliczFunction::power(2.0);
        let cfg = NormConfig::default();
        let h = 1.0 / 32.0;
        let (d, _) = build_box(&[1.0_f64, 1.0], h).unwrap();
        let f = MultivectorField::from_component(d, BladeIndex::SCALAR, |x| x[0]);
        let got = sobolev_norm(&f, 1, &psi, &cfg).unwrap();
        let exact = (1.0f64 / 3.0).sqrt() + 1.0;
        assert!((got - exact).abs() < h * h, "{got} vs {exact}");
        assert!(sobolev_norm(&f, 0, &psi, &cfg).unwrap() <= got);
    }

    #[test]
    fn slobodeckji_constant_and_power_factorization() {
        let psi = OrliczFunction::power(2.0);
        let cfg = NormConfig::default();
        let (_, mesh) = build_disc(1.0_f64, 1.0 / 16.0).unwrap();
        let g =
            BoundaryField::from_fn(mesh.clone(), |_| Multivector::scalar(2, 0.5).unwrap()).unwrap();
        let (single, double) = slobodeckji_parts(&g, 1, &psi, &cfg).unwrap();
        assert_eq!(double, 0.0);
        assert!((single - 2.0 * std::f64::consts::PI * 0.25).abs() < 1e-12);
        assert_eq!(slobodeckji_norm(&g, 1, &psi, &cfg).unwrap(), single);
        let (s2, d2) = slobodeckji_parts(&g, 2, &psi, &cfg).unwrap();
        assert!(d2.abs() < 1e-20 && (s2 - single).abs() < 1e-12);
        // pair kernel for t^p in 2-d is (|dg| / |x-y|)^p / lambda^p
        let lam = 0.7;
        let (a, b, r) = (0.3f64, -0.4f64, 0.2f64);
        let p = OrliczFunction::power(3.0);
        let lhs = p.eval((a - b).abs() / (lam * r)).unwrap() * r.powf(0.0);
        let rhs = ((a - b).abs() / r).powf(3.0) / lam.powf(3.0);
        assert!((lhs - rhs).abs() < 1e-9 * rhs);
    }

    #[test]
    fn tangential_derivative_of_cos_on_circle() {
        let (_, mesh) = build_disc(1.0_f64, 1.0 / 32.0).unwrap();
        let g = BoundaryField::from_fn(mesh.clone(), |x| Multivector::scalar(2, x[0]).unwrap())
            .unwrap();
        let d = &tangential_derivatives(&g).unwrap()[0];
        for i in 0..mesh.len() {
            let y = mesh.center(i)[1];
            assert!((d[i * 4] + y).abs() < 1e-3);
        }
    }
}
