//! Energy shift and effective mass of a subcritical impurity.
//!
//! To second order in the impurity-boson scattering length `a`, the energy of
//! an impurity of momentum `q_i < q_c` is
//!
//! `E(q_i) = n g + q_i^2/2M - (n g^2 / 16 pi^3 m) int d^3p p^2 / (epsilon(p) omega(p))`.
//!
//! The momentum integral diverges linearly. Writing the bare coupling as
//! `g = (2 pi a / m_r)(1 + (2a/pi) Lambda)` with the same cutoff `Lambda`
//! cancels the divergence, and the finite result is
//! `E(0) = (2 pi n a / m_r) [1 + (4 a m c / pi) I0(m/M)]`. The curvature at
//! `q_i = 0` gives the effective mass through `I1(m/M)`.
//!
//! Routes provided:
//!
//! - closed forms ([`energy_shift_closed`], [`effective_mass_closed`]);
//! - the cutoff integral plus counterterm ([`energy_shift_quadrature`]);
//! - the subtracted integrand with no cutoff ([`energy_shift_subtracted`]);
//! - the convergent curvature integral ([`effective_mass_quadrature`]);
//! - finite differences of the cutoff route
//!   ([`effective_mass_finite_difference`]).

use alloc::vec::Vec;
use core::cell::RefCell;
use core::f64::consts::PI;

use crate::bogoliubov::energy_from_p2;
use crate::error::{ensure_positive, Error, Result};
use crate::params::{renormalized_coupling, SystemParams};
use crate::quadrature::{first_derivative, integrate, integrate_semi_infinite, second_derivative, QuadratureConfig};

/// Half-width of the window around mass ratio one where `I0` and `I1` are
/// evaluated from their Taylor series instead of the closed forms.
pub const SERIES_WINDOW: f64 = 0.1;

/// Coefficient of `n a^2 I1(m/M) / (M c (m_r/m)^2)` in `1 - M/M_ef`.
///
/// Fixed by the curvature integral: `int_0^inf p^6 dp / (epsilon omega_0^3)
/// = 8 m^3 I1(m/M) / c`, which with the `-(2/3) n a^2 / (m m_r^2 M^2)`
/// prefactor gives `16/3`.
pub const MASS_COEFFICIENT: f64 = 16.0 / 3.0;

const I0_SERIES: [f64; 18] = [
    4.0 / 3.0,
    -2.0 / 15.0,
    2.0 / 35.0,
    -8.0 / 315.0,
    8.0 / 693.0,
    -16.0 / 3003.0,
    16.0 / 6435.0,
    -128.0 / 109_395.0,
    128.0 / 230_945.0,
    -256.0 / 969_969.0,
    256.0 / 2_028_117.0,
    -1024.0 / 16_900_975.0,
    1024.0 / 35_102_025.0,
    -2048.0 / 145_422_675.0,
    2048.0 / 300_540_195.0,
    -32768.0 / 9_917_826_435.0,
    32768.0 / 20_419_054_425.0,
    -65536.0 / 83_945_001_525.0,
];

const I1_SERIES: [f64; 18] = [
    2.0 / 15.0,
    -6.0 / 35.0,
    16.0 / 105.0,
    -80.0 / 693.0,
    80.0 / 1001.0,
    -112.0 / 2145.0,
    3584.0 / 109_395.0,
    -4608.0 / 230_945.0,
    3840.0 / 323_323.0,
    -14080.0 / 2_028_117.0,
    67584.0 / 16_900_975.0,
    -26624.0 / 11_700_675.0,
    186_368.0 / 145_422_675.0,
    -14336.0 / 20_036_013.0,
    262_144.0 / 661_188_429.0,
    -4_456_448.0 / 20_419_054_425.0,
    3_342_336.0 / 27_981_667_175.0,
    -1_245_184.0 / 19_145_351_225.0,
];

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// `I0(x)` with `x = m/M`:
///
/// - `x > 1`: `[x sqrt(x^2-1) - ln(x + sqrt(x^2-1))] / ((x-1) sqrt(x^2-1))`
/// - `x < 1`: `[x sqrt(1-x^2) - arccos x] / ((x-1) sqrt(1-x^2))`
///
/// The two are the same real-analytic function; `I0(1) = 4/3` and
/// `I0(0+) = pi/2`.
pub fn i0(x: f64) -> Result<f64> {
    let x = ensure_positive("x", x)?;
    let e = x - 1.0;
    Ok(if libm::fabs(e) <= SERIES_WINDOW {
        horner(&I0_SERIES, e)
    } else if x > 1.0 {
        let s = libm::sqrt(e * (x + 1.0));
        (x * s - libm::log(x + s)) / (e * s)
    } else {
        let s = libm::sqrt(-e * (1.0 + x));
        (x * s - libm::acos(x)) / (e * s)
    })
}

/// `I1(y)` with `y = m/M`:
///
/// - `y > 1`: `[(1+2y^2) ln(y + sqrt(y^2-1)) - 3y sqrt(y^2-1)] / (2 (y^2-1)^{5/2})`
/// - `y < 1`: `[(1+2y^2) arccos y - 3y sqrt(1-y^2)] / (2 (1-y^2)^{5/2})`
///
/// `I1(1) = 2/15`, `I1(0+) = pi/4`.
pub fn i1(y: f64) -> Result<f64> {
    let y = ensure_positive("y", y)?;
    let e = y - 1.0;
    Ok(if libm::fabs(e) <= SERIES_WINDOW {
        horner(&I1_SERIES, e)
    } else if y > 1.0 {
        let s2 = e * (y + 1.0);
        let s = libm::sqrt(s2);
        ((1.0 + 2.0 * y * y) * libm::log(y + s) - 3.0 * y * s) / (2.0 * s2 * s2 * s)
    } else {
        let s2 = -e * (1.0 + y);
        let s = libm::sqrt(s2);
        ((1.0 + 2.0 * y * y) * libm::acos(y) - 3.0 * y * s) / (2.0 * s2 * s2 * s)
    })
}

/// Impurity energy split into the first-order mean-field term and the
/// second-order fluctuation term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyShift {
    /// `2 pi n a / m_r`.
    pub mean_field: f64,
    /// Second order in `a`, after renormalization.
    pub fluctuation: f64,
}

impl EnergyShift {
    /// `mean_field + fluctuation`.
    pub fn total(&self) -> f64 {
        self.mean_field + self.fluctuation
    }
}

/// How a [`MassResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MassMethod {
    /// Closed form in `I1`.
    Closed,
    /// Numerical curvature integral.
    Quadrature,
    /// Central differences of the cutoff energy shift.
    FiniteDifference,
}

/// Effective mass of the dressed impurity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassResult {
    /// `M_ef`.
    pub effective_mass: f64,
    /// `M / M_ef - 1`; negative for any non-zero `a`.
    pub correction: f64,
    /// Route used.
    pub method: MassMethod,
}

impl MassResult {
    fn from_inverse_shift(params: &SystemParams, inverse_shift: f64, method: MassMethod) -> Result<Self> {
        let m_imp = params.impurity_mass();
        let correction = m_imp * inverse_shift;
        if !(libm::fabs(correction) < 0.5) {
            return Err(Error::PerturbativeBreakdown { correction });
        }
        Ok(Self { effective_mass: m_imp / (1.0 + correction), correction, method })
    }
}

/// One point of the dressed-impurity dispersion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    /// Impurity momentum, below `q_c`.
    pub q_i: f64,
    /// `E(q_i) = E(0) + q_i^2 / 2M_ef`.
    pub energy: f64,
    /// `2 pi n a / m_r`.
    pub mean_field: f64,
    /// `energy - mean_field - q_i^2/2M`: everything second order in `a`.
    pub fluctuation: f64,
}

fn scattering_length(params: &SystemParams) -> Result<f64> {
    if params.has_explicit_scattering_length() {
        params.scattering_length()
    } else {
        Err(Error::MissingScatteringLength)
    }
}

fn first_born_coupling(params: &SystemParams, a: f64) -> f64 {
    2.0 * PI * a / params.reduced_mass()
}

/// Counterterm coefficient `kappa = (2/pi) Lambda` in `g = (2 pi a / m_r)(1 + kappa a)`.
pub fn counterterm_coefficient(cutoff: f64) -> f64 {
    2.0 / PI * cutoff
}

/// `E(0) = (2 pi n a / m_r) [1 + (4 a m c / pi) I0(m/M)]`.
pub fn energy_shift_closed(params: &SystemParams) -> Result<EnergyShift> {
    let a = scattering_length(params)?;
    let mean_field = params.density() * first_born_coupling(params, a);
    let ratio = params.boson_mass() / params.impurity_mass();
    let fluctuation = mean_field * 4.0 * a * params.boson_mass() * params.sound_speed() / PI * i0(ratio)?;
    Ok(EnergyShift { mean_field, fluctuation })
}

fn check_subcritical(q_i: f64, params: &SystemParams) -> Result<()> {
    let q_c = params.critical_momentum();
    if !q_i.is_finite() {
        return Err(Error::Domain { name: "q_i", value: q_i, reason: "must be finite" });
    }
    if libm::fabs(q_i) >= q_c {
        return Err(Error::Supercritical { q_i, q_c });
    }
    Ok(())
}

/// Integrand pieces at one momentum: `(F, F - 4 m m_r)` where
/// `F(p, q) = (p^4 / 2 epsilon) (1/a) ln((omega_0 + a)/(omega_0 - a))`,
/// `a = p q / M`, `omega_0 = epsilon + p^2/2M`.
///
/// The angular average is `2 atanh(z) / (z omega_0)` with `z = a / omega_0`.
/// The subtracted value is assembled without cancelling `F` against its
/// limit: `F(p,0) - 4 m m_r = -2 n U0 p^4 [1 + (p^2/2M)/(k + epsilon)] / (epsilon omega_0 k_r)`
/// with `k = p^2/2m`, `k_r = p^2/2m_r`.
struct ShiftIntegrand {
    params: SystemParams,
    q_i: f64,
}

impl ShiftIntegrand {
    fn angular_factor(z: f64) -> (f64, f64) {
        // (atanh(z)/z, atanh(z)/z - 1)
        if libm::fabs(z) < 1e-3 {
            let z2 = z * z;
            let excess = z2 * (1.0 / 3.0 + z2 * (1.0 / 5.0 + z2 * (1.0 / 7.0 + z2 / 9.0)));
            (1.0 + excess, excess)
        } else {
            let s = libm::atanh(z) / z;
            (s, s - 1.0)
        }
    }

    fn eval(&self, p: f64) -> (f64, f64) {
        let params = &self.params;
        let p2 = p * p;
        let m_imp = params.impurity_mass();
        let eps = energy_from_p2(p2, params);
        let recoil = p2 / (2.0 * m_imp);
        let omega0 = eps + recoil;
        let at_rest = p2 * p2 / (eps * omega0);
        let kinetic = p2 / (2.0 * params.boson_mass());
        let kinetic_r = kinetic + recoil;
        let at_rest_sub =
            -2.0 * params.mean_field_energy() * p2 * p2 * (1.0 + recoil / (kinetic + eps)) / (eps * omega0 * kinetic_r);
        let (s, s_minus_one) = Self::angular_factor(p * self.q_i / (m_imp * omega0));
        (at_rest * s, at_rest_sub + at_rest * s_minus_one)
    }
}

fn shift_config() -> QuadratureConfig {
    QuadratureConfig { rel_tol: 1e-13, abs_tol: 0.0, max_subdivisions: 10_000, ..QuadratureConfig::default() }
}

/// Integrates over `[0, upper]` in pieces split at decades of `m c`.
fn integrate_decades<F: Fn(f64) -> f64>(f: F, scale: f64, upper: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let mut lower = 0.0;
    let mut edge = scale;
    let mut total = 0.0;
    while lower < upper {
        let hi = edge.min(upper);
        total += integrate(&f, lower, hi, cfg)?.value;
        lower = hi;
        edge *= 10.0;
    }
    Ok(total)
}

/// Energy shift at impurity momentum `q_i` from the momentum integral cut at
/// `cutoff`, with the bare coupling renormalized at the same cutoff.
///
/// Returns `n g(Lambda)` split as mean field `2 pi n a / m_r` and the
/// counterterm, plus `-(n a^2 / 2 m m_r^2) int_0^Lambda (p^4/epsilon) L(p) dp`
/// in the fluctuation part. Converges to the closed form as `1/Lambda`.
/// Even in `q_i`; requires `|q_i| < q_c`.
pub fn energy_shift_quadrature(q_i: f64, params: &SystemParams, cutoff: f64) -> Result<EnergyShift> {
    check_subcritical(q_i, params)?;
    let cutoff = ensure_positive("cutoff", cutoff)?;
    let a = scattering_length(params)?;
    let m_r = params.reduced_mass();
    let g1 = first_born_coupling(params, a);
    let mean_field = params.density() * g1;
    let counterterm = params.density() * (renormalized_coupling(a, m_r, cutoff)? - g1);
    let integrand = ShiftIntegrand { params: *params, q_i };
    let scale = params.boson_mass() * params.sound_speed();
    let integral = integrate_decades(|p| integrand.eval(p).0, scale, cutoff, &shift_config())?;
    let second_order = -params.density() * g1 * g1 / (4.0 * PI * PI * params.boson_mass()) * integral;
    Ok(EnergyShift { mean_field, fluctuation: counterterm + second_order })
}

/// Energy shift with the divergence removed from the integrand, `F - 4 m m_r`,
/// integrated to infinity. The `Lambda -> inf` limit of
/// [`energy_shift_quadrature`].
pub fn energy_shift_subtracted(q_i: f64, params: &SystemParams) -> Result<EnergyShift> {
    check_subcritical(q_i, params)?;
    let a = scattering_length(params)?;
    let g1 = first_born_coupling(params, a);
    let integrand = ShiftIntegrand { params: *params, q_i };
    let cfg = shift_config();
    let scale = params.boson_mass() * params.sound_speed();
    let head = integrate(|p| integrand.eval(p).1, 0.0, scale, &cfg)?.value;
    let tail = integrate_semi_infinite(|p| integrand.eval(p).1, scale, &cfg)?.value;
    let mean_field = params.density() * g1;
    let fluctuation = -params.density() * g1 * g1 / (4.0 * PI * PI * params.boson_mass()) * (head + tail);
    Ok(EnergyShift { mean_field, fluctuation })
}

/// `M_ef = M [1 - (16/3) n a^2 I1(m/M) / (M c (m_r/m)^2)]^-1`.
///
/// See [`MASS_COEFFICIENT`]. Errors when the correction reaches `0.5`.
pub fn effective_mass_closed(params: &SystemParams) -> Result<MassResult> {
    let a = scattering_length(params)?;
    let (m, m_imp) = (params.boson_mass(), params.impurity_mass());
    let mass_ratio = params.reduced_mass() / m;
    let strength = params.density() * a * a / (m_imp * params.sound_speed() * mass_ratio * mass_ratio);
    let correction = -MASS_COEFFICIENT * strength * i1(m / m_imp)?;
    MassResult::from_inverse_shift(params, correction / m_imp, MassMethod::Closed)
}

/// `M_ef = M (1 - 4 pi n a^2 / (3 M c))^-1`, the `M >> m` limit of
/// [`effective_mass_closed`] (`I1 -> pi/4`, `m_r -> m`).
pub fn effective_mass_heavy_limit(params: &SystemParams) -> Result<f64> {
    let a = scattering_length(params)?;
    let m_imp = params.impurity_mass();
    let c = params.sound_speed();
    Ok(m_imp / (1.0 - MASS_COEFFICIENT * PI / 4.0 * params.density() * a * a / (m_imp * c)))
}

/// `1/M_ef = 1/M - (2/3)(n a^2 / (m m_r^2 M^2)) int_0^inf p^6 dp / (epsilon (epsilon + p^2/2M)^3)`,
/// integrated numerically.
pub fn effective_mass_quadrature(params: &SystemParams) -> Result<MassResult> {
    let a = scattering_length(params)?;
    let (m, m_imp, m_r) = (params.boson_mass(), params.impurity_mass(), params.reduced_mass());
    let integrand = |p: f64| {
        let p2 = p * p;
        let eps = energy_from_p2(p2, params);
        let omega0 = eps + p2 / (2.0 * m_imp);
        p2 * p2 * p2 / (eps * omega0 * omega0 * omega0)
    };
    let cfg = QuadratureConfig::with_rel_tol(1e-12);
    let scale = m * params.sound_speed();
    let integral = integrate(integrand, 0.0, scale, &cfg)?.value + integrate_semi_infinite(integrand, scale, &cfg)?.value;
    let inverse_shift = -2.0 / 3.0 * params.density() * a * a / (m * m_r * m_r * m_imp * m_imp) * integral;
    MassResult::from_inverse_shift(params, inverse_shift, MassMethod::Quadrature)
}

/// Curvature of the energy shift at `q_i = 0` by a five-point central
/// difference with step `0.01 q_c`: of [`energy_shift_quadrature`] at the given
/// cutoff, or of [`energy_shift_subtracted`] when `cutoff` is `None`. The
/// counterterm does not depend on `q_i` and drops out.
pub fn effective_mass_finite_difference(params: &SystemParams, cutoff: Option<f64>) -> Result<MassResult> {
    let curvature = energy_curvature(params, cutoff, 0.01 * params.critical_momentum())?;
    MassResult::from_inverse_shift(params, curvature, MassMethod::FiniteDifference)
}

fn energy_at(q_i: f64, params: &SystemParams, cutoff: Option<f64>) -> Result<f64> {
    match cutoff {
        Some(cutoff) => energy_shift_quadrature(q_i, params, cutoff),
        None => energy_shift_subtracted(q_i, params),
    }
    .map(|e| e.total())
}

fn stencil(params: &SystemParams, cutoff: Option<f64>, h: f64, first: bool) -> Result<f64> {
    let h = ensure_positive("h", h)?;
    check_subcritical(2.0 * h, params)?;
    // evaluate once up front so domain errors surface instead of NaN
    energy_at(0.0, params, cutoff)?;
    let failure = RefCell::new(None);
    let f = |q| {
        energy_at(q, params, cutoff).unwrap_or_else(|err| {
            failure.borrow_mut().get_or_insert(err);
            f64::NAN
        })
    };
    let value = if first { first_derivative(f, 0.0, h) } else { second_derivative(f, 0.0, h) };
    match failure.into_inner() {
        Some(err) => Err(err),
        None => Ok(value),
    }
}

/// Second derivative of the energy shift at `q_i = 0`, step `h`; cutoff route
/// or subtracted route as in [`effective_mass_finite_difference`].
pub fn energy_curvature(params: &SystemParams, cutoff: Option<f64>, h: f64) -> Result<f64> {
    stencil(params, cutoff, h, false)
}

/// First derivative of the energy shift at `q_i = 0`, step `h`. Zero by
/// symmetry; exposed as a numerical check.
pub fn energy_slope(params: &SystemParams, cutoff: Option<f64>, h: f64) -> Result<f64> {
    stencil(params, cutoff, h, true)
}

/// `E(q_i) = E(0) + q_i^2 / 2M_ef` from the closed forms, for every momentum
/// in `q_list`. Any `|q_i| >= q_c` rejects the whole list.
pub fn energy_spectrum(q_list: &[f64], params: &SystemParams) -> Result<Vec<SpectrumPoint>> {
    let q_c = params.critical_momentum();
    let offenders: Vec<f64> = q_list.iter().copied().filter(|q| !(libm::fabs(*q) < q_c)).collect();
    if !offenders.is_empty() {
        return Err(Error::SupercriticalGrid { q_c, offenders });
    }
    let shift = energy_shift_closed(params)?;
    let mass = effective_mass_closed(params)?;
    let m_imp = params.impurity_mass();
    Ok(q_list
        .iter()
        .map(|&q_i| {
            let energy = shift.total() + q_i * q_i / (2.0 * mass.effective_mass);
            SpectrumPoint {
                q_i,
                energy,
                mean_field: shift.mean_field,
                fluctuation: energy - shift.mean_field - q_i * q_i / (2.0 * m_imp),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(impurity_mass: f64, a: f64) -> SystemParams {
        SystemParams::reduced(impurity_mass).unwrap().with_scattering_length(a).unwrap()
    }

    // Reference values below come from mpmath at 30 digits, using the closed
    // forms away from x = 1 and their limits at x = 1.

    #[test]
    fn i0_examples() {
        assert_relative_eq!(i0(2.0).unwrap(), 1.239_654_003_699_053_7, max_relative = 1e-14);
        assert_relative_eq!(i0(0.5).unwrap(), 1.418_399_152_312_290_5, max_relative = 1e-14);
        assert_relative_eq!(i0(10.0).unwrap(), 1.077_685_531_668_279_8, max_relative = 1e-14);
        assert_eq!(i0(1.0).unwrap(), 4.0 / 3.0);
        assert!((i0(1e-12).unwrap() - PI / 2.0).abs() < 1e-11);
        assert!(i0(0.0).is_err() && i0(-1.0).is_err());
    }

    #[test]
    fn i1_examples() {
        assert_relative_eq!(i1(2.0).unwrap(), 0.046_839_664_817_139_84, max_relative = 1e-13);
        assert_relative_eq!(i1(0.5).unwrap(), 0.278_932_768_208_193_64, max_relative = 1e-13);
        assert_relative_eq!(i1(10.0).unwrap(), 0.001_554_273_707_380_974, max_relative = 1e-12);
        assert_eq!(i1(1.0).unwrap(), 2.0 / 15.0);
        assert!((i1(1e-12).unwrap() - PI / 4.0).abs() < 1e-11);
        assert!(i1(0.0).is_err());
    }

    #[test]
    fn series_meets_closed_forms_at_window_edges() {
        for &edge in &[1.0 - SERIES_WINDOW, 1.0 + SERIES_WINDOW] {
            for (f, name) in [(i0 as fn(f64) -> Result<f64>, "I0"), (i1, "I1")] {
                let inside = f(edge).unwrap();
                let outside = f(edge + (edge - 1.0) * 1e-12).unwrap();
                assert!((inside - outside).abs() < 1e-9, "{name} at {edge}: {inside} vs {outside}");
            }
        }
    }

    #[test]
    fn continuity_at_equal_masses() {
        for &d in &[1e-4, 1e-5] {
            assert!((i0(1.0 + d).unwrap() - 4.0 / 3.0).abs() < 2e-5 * d / 1e-4);
            assert!((i1(1.0 - d).unwrap() - 2.0 / 15.0).abs() < 2e-5 * d / 1e-4);
        }
    }

    #[test]
    fn closed_energy_examples() {
        assert_eq!(energy_shift_closed(&params(1.0, 0.0)).unwrap().total(), 0.0);
        assert_relative_eq!(
            energy_shift_closed(&params(1.0, 0.01)).unwrap().total(),
            0.127_797_039_476_925_06,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            energy_shift_closed(&params(1e6, 0.01)).unwrap().total(),
            0.064_088_553_878_358_92,
            max_relative = 1e-12
        );
        let no_a = SystemParams::reduced(1.0).unwrap().with_coupling(1.0).unwrap();
        assert_eq!(energy_shift_closed(&no_a), Err(Error::MissingScatteringLength));
    }

    #[test]
    fn fluctuation_is_positive_for_repulsion() {
        for &mass in &[0.1, 1.0, 10.0] {
            assert!(energy_shift_closed(&params(mass, 0.02)).unwrap().fluctuation > 0.0);
            assert!(effective_mass_closed(&params(mass, 0.02)).unwrap().effective_mass > mass);
        }
    }

    #[test]
    fn subtracted_matches_closed() {
        for &mass in &[0.1, 1.0, 10.0] {
            let p = params(mass, 0.01);
            assert_relative_eq!(
                energy_shift_subtracted(0.0, &p).unwrap().total(),
                energy_shift_closed(&p).unwrap().total(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn cutoff_route_converges() {
        let p = params(1.0, 0.01);
        let closed = energy_shift_closed(&p).unwrap().total();
        let err = |cutoff| (energy_shift_quadrature(0.0, &p, cutoff).unwrap().total() - closed).abs() / closed;
        assert!(err(200.0) < 1e-3);
        assert!(err(2000.0) < 1e-4);
    }

    #[test]
    fn shift_needs_subcritical_momentum() {
        let p = params(1.0, 0.01);
        assert!(matches!(energy_shift_quadrature(1.0, &p, 100.0), Err(Error::Supercritical { .. })));
        assert!(matches!(energy_shift_subtracted(-1.2, &p), Err(Error::Supercritical { .. })));
    }

    #[test]
    fn zero_scattering_length_leaves_nothing() {
        let p = params(1.0, 0.0);
        let e = energy_shift_quadrature(0.3, &p, 500.0).unwrap();
        assert_eq!(e.mean_field, 0.0);
        assert_eq!(e.fluctuation, 0.0);
        assert_eq!(effective_mass_closed(&p).unwrap().effective_mass, 1.0);
        assert_eq!(effective_mass_quadrature(&p).unwrap().effective_mass, 1.0);
    }

    #[test]
    fn shift_is_even_in_momentum() {
        let p = params(2.0, 0.01);
        assert_eq!(
            energy_shift_quadrature(0.7, &p, 300.0).unwrap(),
            energy_shift_quadrature(-0.7, &p, 300.0).unwrap()
        );
    }

    #[test]
    fn effective_mass_examples() {
        // (16/3)(1e-4 / 0.25)(2/15) = 2.8444e-4
        let r = effective_mass_closed(&params(1.0, 0.01)).unwrap();
        assert_relative_eq!(r.correction, -2.844_444_444_444_444e-4, max_relative = 1e-12);
        assert_relative_eq!(r.effective_mass, 1.000_284_525_376_107, max_relative = 1e-14);
        let heavy = params(100.0, 0.01);
        assert_relative_eq!(
            effective_mass_closed(&heavy).unwrap().effective_mass,
            100.000_416_608_579_99,
            max_relative = 1e-14
        );
        let gap = effective_mass_closed(&heavy).unwrap().effective_mass / effective_mass_heavy_limit(&heavy).unwrap() - 1.0;
        assert!(gap.abs() < 1e-7, "{gap}");
    }

    #[test]
    fn quadrature_mass_matches_closed() {
        for &(mass, expected) in &[
            (1.0, 1.000_284_525_376_107),
            (10.0, 10.000_397_579_070_686),
            (0.1, 0.100_100_403_170_102_45),
            (100.0, 100.000_416_608_579_99),
        ] {
            let p = params(mass, 0.01);
            let quad = effective_mass_quadrature(&p).unwrap();
            let closed = effective_mass_closed(&p).unwrap();
            assert_relative_eq!(quad.effective_mass, expected, max_relative = 1e-12);
            assert_relative_eq!(quad.correction, closed.correction, max_relative = 1e-9);
        }
    }

    #[test]
    fn finite_difference_mass() {
        for &mass in &[0.1, 1.0, 10.0] {
            let p = params(mass, 0.01);
            let closed = effective_mass_closed(&p).unwrap();
            let sub = effective_mass_finite_difference(&p, None).unwrap();
            assert_relative_eq!(sub.correction, closed.correction, max_relative = 1e-6);
            let cut = effective_mass_finite_difference(&p, Some(2e4)).unwrap();
            assert_relative_eq!(cut.correction, closed.correction, max_relative = 1e-3);
            assert_eq!(cut.method, MassMethod::FiniteDifference);
        }
    }

    #[test]
    fn counterterm_drops_out_of_curvature() {
        let p = params(1.0, 0.01);
        let h = 0.01;
        let (coarse, fine) =
            (energy_curvature(&p, Some(1e4), h).unwrap(), energy_curvature(&p, Some(2e4), h).unwrap());
        assert!((coarse - fine).abs() < 1e-6, "{coarse} vs {fine}");
    }

    #[test]
    fn slope_vanishes_at_rest() {
        let p = params(1.0, 0.01);
        assert!(energy_slope(&p, Some(2000.0), 0.01).unwrap().abs() < 1e-12);
        assert!(energy_slope(&p, None, 0.01).unwrap().abs() < 1e-12);
        assert!(energy_curvature(&p, None, 0.6).is_err());
    }

    #[test]
    fn perturbative_guard() {
        assert!(matches!(effective_mass_closed(&params(1.0, 5.0)), Err(Error::PerturbativeBreakdown { .. })));
    }

    #[test]
    fn spectrum_examples() {
        let p = params(1.0, 0.01);
        let pts = energy_spectrum(&[0.0, 0.1], &p).unwrap();
        assert_eq!(pts[0].energy, energy_shift_closed(&p).unwrap().total());
        assert_relative_eq!(pts[1].energy - pts[0].energy, 0.005 / 1.000_284_525_376_107, max_relative = 1e-13);
        match energy_spectrum(&[0.5, 1.0, 0.2, 3.0], &p) {
            Err(Error::SupercriticalGrid { q_c, offenders }) => {
                assert_eq!(q_c, 1.0);
                assert_eq!(offenders, [1.0, 3.0]);
            }
            other => panic!("{other:?}"),
        }
    }
}
