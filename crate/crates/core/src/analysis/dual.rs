//! Sampled lower bounds for the `W^{-1,psi}` norm of `D f`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{dirac_apply, GridDomain, MultivectorField};
use crate::orlicz::{sobolev_norm, NormConfig, OrliczFunction};
use crate::scalar::Real;

use super::fields::random_zero_trace_field;

/// `sum_cells h^n Sc(conj(a) b)`; for `Cl_n` blades `Sc(conj(e_A) e_B)` is
/// `delta_AB`, so this is the coefficientwise dot product.
pub fn l2_pairing<T: Real>(a: &MultivectorField<T>, b: &MultivectorField<T>) -> Result<T> {
    if !a.domain().same_as(b.domain()) {
        return Err(Error::Shape("pairing of fields on different grids".into()));
    }
    let w = a.domain().cell_volume();
    let dot = a
        .data()
        .iter()
        .zip(b.data())
        .fold(T::zero(), |s, (&x, &y)| s + x * y);
    Ok(w * dot)
}

/// Zero-trace trial fields `g_0 .. g_{trial_count-1}` of the seeded suite,
/// stored as `D g_i` together with `||g_i||_{W^{1,psi*}}`.
#[derive(Debug, Clone)]
pub struct DualTrials<T> {
    trials: Vec<(MultivectorField<T>, T)>,
}

impl<T: Real> DualTrials<T> {
    pub fn new(
        domain: &Arc<GridDomain<T>>,
        psi: &OrliczFunction,
        trial_count: usize,
        seed: u64,
        cfg: &NormConfig,
    ) -> Result<Self> {
        if trial_count == 0 {
            return Err(Error::Domain("trial_count must be at least 1".into()));
        }
        psi.validate()?;
        cfg.validate()?;
        let conj = psi.conjugate();
        let mut trials = Vec::with_capacity(trial_count);
        for i in 0..trial_count {
            let g = random_zero_trace_field(domain, seed, i as u64)?;
            let norm = sobolev_norm(&g, 1, &conj, cfg)?;
            if norm > T::zero() {
                trials.push((dirac_apply(&g), norm));
            }
        }
        Ok(Self { trials })
    }

    /// `max_i |<f, D g_i>| / ||g_i||_{W^{1,psi*}}`.
    pub fn lower_bound(&self, f: &MultivectorField<T>) -> Result<T> {
        let mut best = T::zero();
        for (dg, norm) in &self.trials {
            let r = l2_pairing(f, dg)?.abs() / *norm;
            if r > best {
                best = r;
            }
        }
        Ok(best)
    }
}

/// Sampled lower bound of `||D f||_{W^{-1,psi}}` over `trial_count` seeded
/// zero-trace trial fields; see [`DualTrials`]. Pairing against `D g`
/// moves the derivative off `f`.
pub fn dual_norm_lower_bound<T: Real>(
    f: &MultivectorField<T>,
    psi: &OrliczFunction,
    trial_count: usize,
    seed: u64,
    cfg: &NormConfig,
) -> Result<T> {
    DualTrials::new(f.domain(), psi, trial_count, seed, cfg)?.lower_bound(f)
}
