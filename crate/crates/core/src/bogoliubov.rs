//! The diagonalized condensate.
//!
//! Quasiparticle energies `epsilon(p)`, the canonical transformation
//! `b_p = alpha_p B_p + beta_p B+_-p`, and the squared impurity-quasiparticle
//! vertex. The vertex is only exposed in its volume-independent form
//! `w(p) = V gamma_p^2 = g^2 n p^2 / (2 m epsilon(p))`; finite-volume code
//! divides by `V` itself.

use crate::error::{ensure_non_negative, Error, Result};
use crate::params::SystemParams;

/// Transformation coefficients at one momentum, in the sign convention where
/// `mu` is negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovCoefficients {
    /// `mu_p = -(epsilon + p^2/2m + n U0) / (n U0)`.
    pub mu: f64,
    /// `alpha_p = mu_p / sqrt(mu_p^2 - 1)`.
    pub alpha: f64,
    /// `beta_p = 1 / sqrt(mu_p^2 - 1)`.
    pub beta: f64,
}

/// `epsilon` from `p^2`, no validation.
#[inline]
pub(crate) fn energy_from_p2(p2: f64, params: &SystemParams) -> f64 {
    let kinetic = p2 / (2.0 * params.boson_mass());
    libm::sqrt(kinetic * (kinetic + 2.0 * params.mean_field_energy()))
}

/// Bogoliubov quasiparticle energy
/// `epsilon(p) = sqrt((p^2/2m)(p^2/2m + 2 n U0))`.
///
/// Phonon-like (`c p`) at small momentum, free-particle-like
/// (`p^2/2m + n U0`) at large momentum.
pub fn dispersion(p: f64, params: &SystemParams) -> Result<f64> {
    let p = ensure_non_negative("p", p)?;
    Ok(energy_from_p2(p * p, params))
}

/// `mu_p`, `alpha_p`, `beta_p` at `p > 0`.
pub fn transform_coefficients(p: f64, params: &SystemParams) -> Result<BogoliubovCoefficients> {
    let p = ensure_non_negative("p", p)?;
    if p == 0.0 {
        return Err(Error::SingularCoefficients);
    }
    let nu0 = params.mean_field_energy();
    let kinetic = p * p / (2.0 * params.boson_mass());
    let eps = energy_from_p2(p * p, params);
    // mu + 1 directly, so mu^2 - 1 keeps its digits at small p
    let mu_plus_one = -(eps + kinetic) / nu0;
    let mu = mu_plus_one - 1.0;
    let mu2_minus_one = mu_plus_one * (mu - 1.0);
    if !(mu2_minus_one > 0.0) {
        return Err(Error::SingularCoefficients);
    }
    let beta = 1.0 / libm::sqrt(mu2_minus_one);
    Ok(BogoliubovCoefficients { mu, alpha: mu * beta, beta })
}

/// Squared impurity vertex times volume, `w(p) = g^2 n p^2 / (2 m epsilon(p))`.
///
/// Extended continuously to `w(0) = 0`. Uses the bare coupling `g` (or the
/// Born value derived from `a` when `g` is not set).
pub fn coupling_weight(p: f64, params: &SystemParams) -> Result<f64> {
    let g = params.coupling()?;
    let p = ensure_non_negative("p", p)?;
    if p == 0.0 {
        return Ok(0.0);
    }
    Ok(weight_from_p2(p * p, g, params))
}

#[inline]
pub(crate) fn weight_from_p2(p2: f64, g: f64, params: &SystemParams) -> f64 {
    g * g * params.density() * p2 / (2.0 * params.boson_mass() * energy_from_p2(p2, params))
}
