//! Energy-momentum conservation for emission of one Bogoliubov excitation.
//!
//! An impurity of momentum `q_i` emitting an excitation of momentum `p` at
//! direction cosine `x` to `q_i` is off-shell by
//! `omega = epsilon(p) + p^2/2M - q_i p x / M`. Emission is possible only
//! where `omega` can vanish, which requires `q_i > q_c = M c`.

use crate::bogoliubov::energy_from_p2;
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::params::SystemParams;

/// Kinematically allowed emission region at one impurity momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionWindow {
    /// Impurity momentum magnitude.
    pub q_i: f64,
    /// Largest excitation momentum that can be emitted (`p_M`), zero when
    /// subcritical.
    pub p_max: f64,
    /// `q_c / q_i` clipped to `[0, 1]`; the phonon-limit Cherenkov cone.
    pub cos_theta_max: f64,
    /// `q_i > q_c`.
    pub dissipative: bool,
}

impl EmissionWindow {
    /// Cone half-angle in degrees.
    pub fn theta_max_degrees(&self) -> f64 {
        libm::acos(self.cos_theta_max).to_degrees()
    }
}

/// `omega(p, x) = epsilon(p) + p^2/2M - q_i p x / M`.
pub fn omega(p: f64, cos_angle: f64, q_i: f64, params: &SystemParams) -> Result<f64> {
    let p = ensure_non_negative("p", p)?;
    if !(-1.0..=1.0).contains(&cos_angle) {
        return Err(Error::Domain { name: "x", value: cos_angle, reason: "direction cosine must lie in [-1, 1]" });
    }
    let m_imp = params.impurity_mass();
    Ok(energy_from_p2(p * p, params) + p * p / (2.0 * m_imp) - q_i * p * cos_angle / m_imp)
}

/// Direction cosine at which `omega` vanishes,
/// `x0 = M (epsilon(p) + p^2/2M) / (q_i p)`, or `None` when `x0 > 1` and no
/// direction is resonant.
///
/// A relative slack of `1e-12` above one is accepted (and clipped to one) so
/// that `p = p_M` itself is resonant despite rounding.
pub fn resonance_cos(p: f64, q_i: f64, params: &SystemParams) -> Result<Option<f64>> {
    let p = ensure_positive("p", p)?;
    let q_i = ensure_positive("q_i", q_i)?;
    let x0 = unclipped_resonance_cos(p, q_i, params);
    Ok(if x0 <= 1.0 + 1e-12 { Some(x0.min(1.0)) } else { None })
}

#[inline]
fn unclipped_resonance_cos(p: f64, q_i: f64, params: &SystemParams) -> f64 {
    let m_imp = params.impurity_mass();
    m_imp * (energy_from_p2(p * p, params) + p * p / (2.0 * m_imp)) / (q_i * p)
}

/// `p_M`, the crossing of `q_i p / M` with `epsilon(p) + p^2/2M`.
///
/// Evaluated as `2 (q_i^2 - q_c^2) / (q_i + sqrt(q_c^2 + r^2 (q_i^2 - q_c^2)))`
/// with `r = M/m`, which is the usual
/// `2/(1 - r^2) (q_i - sqrt(...))` with the removable `r = 1` singularity
/// cancelled. Zero at and below `q_c`.
pub fn max_emission_momentum(q_i: f64, params: &SystemParams) -> f64 {
    let q_c = params.critical_momentum();
    if !(q_i > q_c) {
        return 0.0;
    }
    let r = params.impurity_mass() / params.boson_mass();
    let excess = (q_i - q_c) * (q_i + q_c);
    2.0 * excess / (q_i + libm::sqrt(q_c * q_c + r * r * excess))
}

/// Assembles the [`EmissionWindow`] at `q_i >= 0`.
pub fn emission_window(q_i: f64, params: &SystemParams) -> Result<EmissionWindow> {
    let q_i = ensure_non_negative("q_i", q_i)?;
    let q_c = params.critical_momentum();
    let dissipative = q_i > q_c;
    Ok(EmissionWindow {
        q_i,
        p_max: max_emission_momentum(q_i, params),
        cos_theta_max: if dissipative { q_c / q_i } else { 1.0 },
        dissipative,
    })
}

/// Finite-time golden-rule kernel `|int_0^t e^{-i s omega} ds|^2
/// = 4 sin^2(omega t / 2) / omega^2`, equal to `t^2` at `omega = 0`.
pub fn finite_time_kernel(omega: f64, t: f64) -> Result<f64> {
    let t = ensure_non_negative("t", t)?;
    Ok(kernel(omega, t))
}

#[inline]
pub(crate) fn kernel(omega: f64, t: f64) -> f64 {
    let phase = omega * t;
    if libm::fabs(phase) < 1e-4 {
        // 4 sin^2(u/2)/u^2 = 1 - u^2/12 + u^4/360
        let u2 = phase * phase;
        t * t * (1.0 - u2 / 12.0 + u2 * u2 / 360.0)
    } else {
        let s = libm::sin(0.5 * phase);
        4.0 * s * s / (omega * omega)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    fn params(impurity_mass: f64) -> SystemParams {
        SystemParams::reduced(impurity_mass).unwrap()
    }

    #[test]
    fn omega_examples() {
        let p = params(1.0);
        for &k in &[0.1, 1.0, 5.0] {
            assert!(omega(k, 1.0, 0.0, &p).unwrap() > 0.0);
        }
        assert!(omega(1.5, 1.0, 2.0, &p).unwrap().abs() < 1e-15);
        for &x in &[0.0, 0.3, 1.0] {
            assert!(omega(0.7, -x, 2.0, &p).unwrap() >= omega(0.7, x, 2.0, &p).unwrap());
        }
        assert!(omega(1.0, 1.5, 2.0, &p).is_err());
    }

    #[test]
    fn resonance_examples() {
        let p = params(1.0);
        // (sqrt(5)/2 + 1/2) / 2
        assert_relative_eq!(resonance_cos(1.0, 2.0, &p).unwrap().unwrap(), 0.809_016_994_374_947_4, max_relative = 1e-14);
        let p_max = max_emission_momentum(2.0, &p);
        assert!((unclipped_resonance_cos(p_max, 2.0, &p) - 1.0).abs() < 1e-10);
        assert!(resonance_cos(p_max, 2.0, &p).unwrap().is_some());
        for &k in &[1e-3, 0.1, 1.0, 10.0] {
            assert_eq!(resonance_cos(k, 0.5, &p).unwrap(), None);
        }
        assert!(resonance_cos(0.0, 2.0, &p).is_err());
        assert!(resonance_cos(1.0, 0.0, &p).is_err());
    }

    #[test]
    fn max_momentum_examples() {
        assert_eq!(max_emission_momentum(1.0, &params(1.0)), 0.0);
        assert_eq!(max_emission_momentum(0.3, &params(1.0)), 0.0);
        assert_relative_eq!(max_emission_momentum(2.0, &params(1.0)), 1.5, max_relative = 1e-15);
        // m = 1, M = 2, q_i = 4: closed form (2/(1-4))(4 - sqrt(52)), mpmath
        let p2 = params(2.0);
        let p_max = max_emission_momentum(4.0, &p2);
        assert_relative_eq!(p_max, 2.140_735_033_951_985_7, max_relative = 1e-14);
        assert!(omega(p_max, 1.0, 4.0, &p2).unwrap().abs() < 1e-14);
    }

    #[test]
    fn textbook_form_agrees_away_from_equal_masses() {
        for &(mass, q) in &[(0.5, 0.9), (2.0, 4.0), (10.0, 13.0), (3.0, 30.0)] {
            let p = params(mass);
            let r: f64 = mass;
            let q_c = p.critical_momentum();
            let textbook = 2.0 / (1.0 - r * r) * (q - (q_c * q_c + r * r * (q * q - q_c * q_c)).sqrt());
            assert_relative_eq!(max_emission_momentum(q, &p), textbook, max_relative = 1e-12);
        }
    }

    #[test]
    fn window_examples() {
        let w = emission_window(2.0, &params(1.0)).unwrap();
        assert!(w.dissipative);
        assert_relative_eq!(w.theta_max_degrees(), 60.0, max_relative = 1e-12);
        let w = emission_window(1.0, &params(1.0)).unwrap();
        assert!(!w.dissipative);
        assert_eq!(w.p_max, 0.0);
        assert_eq!(w.theta_max_degrees(), 0.0);
        let w = emission_window(0.4, &params(1.0)).unwrap();
        assert!(!w.dissipative && w.p_max == 0.0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(finite_time_kernel(0.0, 3.0).unwrap(), 9.0);
        assert_relative_eq!(finite_time_kernel(1.0, 1.0).unwrap(), 0.919_395_388_263_720_6, max_relative = 1e-14);
        assert!(finite_time_kernel(1.0, -1.0).is_err());
        // series and trig branches meet
        let w = 1.0;
        let below = finite_time_kernel(w, 0.999_999e-4).unwrap();
        let above = finite_time_kernel(w, 1.000_001e-4).unwrap();
        assert_relative_eq!(below, above, max_relative = 1e-5);
    }

    #[test]
    fn kernel_time_average() {
        // average of 4 sin^2(w t / 2) / w^2 over whole periods is 2 / w^2
        let w = 1.7;
        let period = 2.0 * PI / w;
        let n = 20_000;
        let total: f64 = (0..n)
            .map(|k| finite_time_kernel(w, (k as f64 + 0.5) * 5.0 * period / n as f64).unwrap())
            .sum();
        assert_relative_eq!(total / n as f64, 2.0 / (w * w), max_relative = 1e-6);
    }
}
