//! Golden-rule transition and energy dissipation rates.
//!
//! Three independent routes reach the same numbers:
//!
//! 1. closed forms for `Gamma_T` and `Gamma_E`;
//! 2. adaptive quadrature of the emission spectrum `dGamma_T/dp`, where the
//!    energy delta has been resolved over the emission angle;
//! 3. a finite periodic box, summing over the discrete momenta
//!    `p = (2 pi / L) (i, j, k)` with the delta replaced by a Lorentzian of
//!    width `eta`.
//!
//! Below the critical momentum every rate is exactly zero.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::bogoliubov::{energy_from_p2, weight_from_p2};
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::kinematics::{kernel, max_emission_momentum};
use crate::params::SystemParams;
use crate::quadrature::{integrate, QuadratureConfig};

/// How a [`RateResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Closed-form expressions.
    Closed,
    /// Adaptive quadrature of the emission spectrum.
    Quadrature,
    /// Broadened finite-box lattice sum.
    Box,
}

/// Transition rate and dissipated power at one impurity momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    /// Impurity momentum.
    pub q_i: f64,
    /// Probability per unit time of leaving the initial state, `Gamma_T`.
    pub gamma_t: f64,
    /// Energy transferred to the condensate per unit time, `Gamma_E`.
    pub gamma_e: f64,
    /// Route used.
    pub method: Method,
    /// Relative numerical error estimate, where the route provides one.
    pub est_error: Option<f64>,
}

impl RateResult {
    fn zero(q_i: f64, method: Method) -> Self {
        Self { q_i, gamma_t: 0.0, gamma_e: 0.0, method, est_error: Some(0.0) }
    }

    /// `Gamma_T / (q_i^2 / 2M)`: decay rate against the impurity's kinetic
    /// energy. Perturbation theory needs this to be small.
    pub fn smallness(&self, params: &SystemParams) -> f64 {
        if self.q_i == 0.0 {
            return 0.0;
        }
        self.gamma_t / (self.q_i * self.q_i / (2.0 * params.impurity_mass()))
    }
}

/// Which asymptote of `Gamma_T` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticRegime {
    /// `q_i -> q_c+`: `Gamma_T = (2 n g^2 / 3 pi m c^2) (q_i - q_c)^3`.
    Threshold,
    /// `q_i >> q_c`: `Gamma_T = n g^2 M q_i (m / (M + m))^2 / pi`.
    HighMomentum,
}

fn prefactor(q_i: f64, params: &SystemParams) -> Result<f64> {
    let g = params.coupling()?;
    Ok(params.density() * params.impurity_mass() * g * g / (4.0 * PI * params.boson_mass() * q_i))
}

/// Emission spectrum `dGamma_T/dp = (n M g^2 / 4 pi m q_i) p^3 / epsilon(p)`
/// on `0 < p < p_M`, zero elsewhere.
pub fn emission_spectral_density(p: f64, q_i: f64, params: &SystemParams) -> Result<f64> {
    let q_i = ensure_positive("q_i", q_i)?;
    let p = ensure_non_negative("p", p)?;
    let pref = prefactor(q_i, params)?;
    let p_max = max_emission_momentum(q_i, params);
    if p == 0.0 || p >= p_max {
        return Ok(0.0);
    }
    Ok(pref * p * p * p / energy_from_p2(p * p, params))
}

/// `epsilon(p) - m c^2 ln(1 + (epsilon(p) + p^2/2m) / (m c^2))`.
///
/// Near threshold the two terms cancel to `O(p^3)`; with
/// `u = p / 2mc` the bracket equals `2 m c^2 (u sqrt(1+u^2) - asinh u)`,
/// whose Taylor series is used for small `u`.
fn rate_bracket(p: f64, params: &SystemParams) -> f64 {
    let m = params.boson_mass();
    let c = params.sound_speed();
    let mc2 = m * c * c;
    let u = p / (2.0 * m * c);
    if u < 0.05 {
        const COEFFS: [f64; 7] =
            [2.0 / 3.0, -1.0 / 5.0, 3.0 / 28.0, -5.0 / 72.0, 35.0 / 704.0, -63.0 / 1664.0, 77.0 / 2560.0];
        let u2 = u * u;
        let series = COEFFS.iter().rev().fold(0.0, |acc, &k| acc * u2 + k);
        2.0 * mc2 * u * u2 * series
    } else {
        let eps = energy_from_p2(p * p, params);
        eps - mc2 * libm::log1p((eps + p * p / (2.0 * m)) / mc2)
    }
}

/// Closed-form `Gamma_T` and `Gamma_E`:
///
/// `Gamma_T = (M m n g^2 / 2 pi q_i) [epsilon(p_M) - m c^2 ln(1 + (epsilon(p_M) + p_M^2/2m) / m c^2)]`,
/// `Gamma_E = M n g^2 p_M^4 / (16 pi m q_i)`.
///
/// Both are exactly zero for `q_i <= q_c`, including `q_i = 0`.
pub fn transition_rate(q_i: f64, params: &SystemParams) -> Result<RateResult> {
    let q_i = ensure_non_negative("q_i", q_i)?;
    let g = params.coupling()?;
    if q_i <= params.critical_momentum() {
        return Ok(RateResult::zero(q_i, Method::Closed));
    }
    let (m, m_imp, n) = (params.boson_mass(), params.impurity_mass(), params.density());
    let p_max = max_emission_momentum(q_i, params);
    let gamma_t = m_imp * m * n * g * g / (2.0 * PI * q_i) * rate_bracket(p_max, params);
    let p2 = p_max * p_max;
    let gamma_e = m_imp * n * g * g * p2 * p2 / (16.0 * PI * m * q_i);
    Ok(RateResult { q_i, gamma_t, gamma_e, method: Method::Closed, est_error: None })
}

/// Closed-form `Gamma_E` alone.
pub fn energy_dissipation_rate(q_i: f64, params: &SystemParams) -> Result<f64> {
    transition_rate(q_i, params).map(|r| r.gamma_e)
}

/// `Gamma_T` and `Gamma_E` by adaptive integration of the emission spectrum
/// (and of `epsilon(p)` times it) over `(0, p_M)`, to relative tolerance `tol`.
pub fn transition_rate_quadrature(q_i: f64, params: &SystemParams, tol: f64) -> Result<RateResult> {
    let q_i = ensure_non_negative("q_i", q_i)?;
    let tol = ensure_positive("tol", tol)?;
    params.coupling()?;
    if q_i <= params.critical_momentum() {
        return Ok(RateResult::zero(q_i, Method::Quadrature));
    }
    let pref = prefactor(q_i, params)?;
    let p_max = max_emission_momentum(q_i, params);
    let cfg = QuadratureConfig::with_rel_tol(tol);
    let t = integrate(|p| p * p * p / energy_from_p2(p * p, params), 0.0, p_max, &cfg)?;
    // epsilon(p) dGamma_T/dp, with epsilon cancelled analytically
    let e = integrate(|p| p * p * p, 0.0, p_max, &cfg)?;
    Ok(RateResult {
        q_i,
        gamma_t: pref * t.value,
        gamma_e: pref * e.value,
        method: Method::Quadrature,
        est_error: Some(t.relative_error().max(e.relative_error())),
    })
}

/// Leading asymptotic form of `Gamma_T`. No validity check: the caller picks
/// the regime and compares.
pub fn transition_rate_asymptotic(q_i: f64, params: &SystemParams, regime: AsymptoticRegime) -> Result<f64> {
    let g = params.coupling()?;
    let (m, m_imp, n) = (params.boson_mass(), params.impurity_mass(), params.density());
    Ok(match regime {
        AsymptoticRegime::Threshold => {
            let c = params.sound_speed();
            let excess = (q_i - params.critical_momentum()).max(0.0);
            2.0 * n * g * g / (3.0 * PI * m * c * c) * excess * excess * excess
        }
        AsymptoticRegime::HighMomentum => {
            let ratio = m / (m_imp + m);
            n * g * g * m_imp * q_i * ratio * ratio / PI
        }
    })
}

/// Heavy-impurity (`M >> m`) limit of `Gamma_E`,
/// `n g^2 (q_i^2 - q_c^2)^2 (m/M)^3 / (pi q_i)`, matching a classical object
/// dragged at constant velocity.
pub fn energy_dissipation_rate_heavy_limit(q_i: f64, params: &SystemParams) -> Result<f64> {
    let g = params.coupling()?;
    let q_c = params.critical_momentum();
    if q_i <= q_c {
        return Ok(0.0);
    }
    let excess = (q_i - q_c) * (q_i + q_c);
    let ratio = params.boson_mass() / params.impurity_mass();
    Ok(params.density() * g * g * excess * excess * ratio * ratio * ratio / (PI * q_i))
}

/// Finite-box oracle settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxOracleConfig {
    /// Side length `L` of the periodic box.
    pub box_length: f64,
    /// Lorentzian half-width `eta` standing in for the energy delta.
    pub broadening: f64,
    /// Largest momentum magnitude summed over.
    pub momentum_cutoff: f64,
    /// Refuse lattices with more than this many points.
    pub max_points: u64,
    /// Direction of the impurity momentum, normalized on use.
    pub direction: [f64; 3],
}

/// Golden-ratio direction `(1, phi, phi^2)`, incommensurate with the cubic
/// lattice so that resonance shells do not line up with lattice planes.
pub const INCOMMENSURATE_DIRECTION: [f64; 3] = [1.0, 1.618_033_988_749_895, 2.618_033_988_749_895];

impl BoxOracleConfig {
    /// Box of side `box_length`, broadening `broadening`, cutoff
    /// `momentum_cutoff`, with the default point budget and direction.
    pub fn new(box_length: f64, broadening: f64, momentum_cutoff: f64) -> Self {
        Self { box_length, broadening, momentum_cutoff, max_points: 50_000_000, direction: INCOMMENSURATE_DIRECTION }
    }

    fn validate(&self, p_max: f64) -> Result<()> {
        ensure_positive("L", self.box_length)?;
        ensure_positive("eta", self.broadening)?;
        ensure_positive("p_cut", self.momentum_cutoff)?;
        if self.momentum_cutoff <= p_max {
            return Err(Error::Domain {
                name: "p_cut",
                value: self.momentum_cutoff,
                reason: "must exceed the maximum emitted momentum p_M",
            });
        }
        if self.momentum_cutoff < 2.0 * p_max {
            log::warn!("p_cut = {} is below 2 p_M = {}", self.momentum_cutoff, 2.0 * p_max);
        }
        let norm2: f64 = self.direction.iter().map(|d| d * d).sum();
        if !(norm2.is_finite() && norm2 > 0.0) {
            return Err(Error::InvalidConfig("impurity direction must be a finite non-zero vector"));
        }
        Ok(())
    }
}

/// The discrete momentum lattice of a periodic box, split into slabs of
/// constant first index so that callers can evaluate slabs in any order or in
/// parallel and still combine them deterministically with [`pairwise_sum`].
#[derive(Debug, Clone)]
pub struct BoxLattice {
    params: SystemParams,
    coupling: f64,
    q_i: f64,
    direction: [f64; 3],
    spacing: f64,
    half_extent: i64,
    cutoff2: f64,
    volume: f64,
    broadening: f64,
}

impl BoxLattice {
    /// Lattice for impurity momentum `q_i` along `cfg.direction`.
    pub fn new(q_i: f64, params: &SystemParams, cfg: &BoxOracleConfig) -> Result<Self> {
        let q_i = ensure_non_negative("q_i", q_i)?;
        let coupling = params.coupling()?;
        cfg.validate(max_emission_momentum(q_i, params))?;
        let spacing = 2.0 * PI / cfg.box_length;
        let half_extent = libm::floor(cfg.momentum_cutoff / spacing) as i64;
        let side = (2 * half_extent + 1) as u64;
        let points = side.saturating_mul(side).saturating_mul(side);
        if points > cfg.max_points {
            return Err(Error::PointBudget { points, budget: cfg.max_points });
        }
        let norm = libm::sqrt(cfg.direction.iter().map(|d| d * d).sum());
        let direction = cfg.direction.map(|d| d / norm);
        Ok(Self {
            params: *params,
            coupling,
            q_i,
            direction,
            spacing,
            half_extent,
            cutoff2: cfg.momentum_cutoff * cfg.momentum_cutoff,
            volume: cfg.box_length * cfg.box_length * cfg.box_length,
            broadening: cfg.broadening,
        })
    }

    /// Number of slabs.
    pub fn slab_count(&self) -> usize {
        (2 * self.half_extent + 1) as usize
    }

    /// Calls `visit(w / V, epsilon, omega)` for every non-zero lattice momentum
    /// inside the cutoff with first index `slab - half_extent`.
    fn visit_slab<V: FnMut(f64, f64, f64)>(&self, slab: usize, mut visit: V) {
        let n = self.half_extent;
        let i = slab as i64 - n;
        let px = i as f64 * self.spacing;
        let m_imp = self.params.impurity_mass();
        let [dx, dy, dz] = self.direction;
        for j in -n..=n {
            let py = j as f64 * self.spacing;
            let pxy2 = px * px + py * py;
            if pxy2 > self.cutoff2 {
                continue;
            }
            for k in -n..=n {
                let pz = k as f64 * self.spacing;
                let p2 = pxy2 + pz * pz;
                if p2 > self.cutoff2 || p2 == 0.0 {
                    continue;
                }
                let eps = energy_from_p2(p2, &self.params);
                let omega = eps + p2 / (2.0 * m_imp) - self.q_i * (dx * px + dy * py + dz * pz) / m_imp;
                let weight = weight_from_p2(p2, self.coupling, &self.params) / self.volume;
                visit(weight, eps, omega);
            }
        }
    }

    /// Contribution of one slab to `(Gamma_T, Gamma_E)`:
    /// `sum 2 pi gamma_p^2 L_eta(omega)` and the same weighted by `epsilon`.
    pub fn rate_slab(&self, slab: usize) -> (f64, f64) {
        let eta = self.broadening;
        let (mut t, mut e) = (0.0, 0.0);
        self.visit_slab(slab, |weight, eps, omega| {
            // 2 pi (eta / pi) / (omega^2 + eta^2)
            let line = 2.0 * eta / (omega * omega + eta * eta);
            t += weight * line;
            e += weight * eps * line;
        });
        (t, e)
    }

    /// Contribution of one slab to the first-order depletion
    /// `sum gamma_p^2 |int_0^t e^{-i s omega} ds|^2`.
    pub fn decay_slab(&self, slab: usize, t: f64) -> f64 {
        let mut total = 0.0;
        self.visit_slab(slab, |weight, _, omega| total += weight * kernel(omega, t));
        total
    }

    /// Contribution of one slab to `sum gamma_p^2 4 / omega^2`, the largest
    /// depletion reachable at any time when no mode is resonant.
    pub fn decay_bound_slab(&self, slab: usize) -> f64 {
        let mut total = 0.0;
        self.visit_slab(slab, |weight, _, omega| total += weight * 4.0 / (omega * omega));
        total
    }
}

/// Sum by recursive halving. The grouping depends only on the length of the
/// slice, so the result does not depend on how the terms were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (left, right) = values.split_at(n / 2);
            pairwise_sum(left) + pairwise_sum(right)
        }
    }
}

/// `Gamma_T` and `Gamma_E` from the broadened finite-box sum.
///
/// Converges to the closed form as `L -> inf` and then `eta -> 0`; the
/// broadening should cover several lattice shells.
pub fn box_rate(q_i: f64, params: &SystemParams, cfg: &BoxOracleConfig) -> Result<RateResult> {
    let lattice = BoxLattice::new(q_i, params, cfg)?;
    let (t, e): (Vec<f64>, Vec<f64>) = (0..lattice.slab_count()).map(|s| lattice.rate_slab(s)).unzip();
    Ok(RateResult {
        q_i: lattice.q_i,
        gamma_t: pairwise_sum(&t),
        gamma_e: pairwise_sum(&e),
        method: Method::Box,
        est_error: None,
    })
}

/// Clamps `1 - depletion` into `[0, 1]`, warning when first order breaks
/// down.
pub fn survival_from_depletion(depletion: f64) -> f64 {
    if depletion > 1.0 {
        log::warn!("first-order depletion {depletion} exceeds one; perturbation theory has broken down");
    }
    (1.0 - depletion).clamp(0.0, 1.0)
}

/// Probability that the impurity is still in its initial momentum state at
/// time `t`, to first order in the box:
/// `1 - sum_p (w(p)/L^3) 4 sin^2(omega t / 2) / omega^2`.
pub fn survival_probability(q_i: f64, params: &SystemParams, cfg: &BoxOracleConfig, t: f64) -> Result<f64> {
    let t = ensure_non_negative("t", t)?;
    let lattice = BoxLattice::new(q_i, params, cfg)?;
    let parts: Vec<f64> = (0..lattice.slab_count()).map(|s| lattice.decay_slab(s, t)).collect();
    Ok(survival_from_depletion(pairwise_sum(&parts)))
}

/// `1 - sum_p (w(p)/L^3) 4 / omega^2`: a time-independent lower bound on the
/// survival probability whenever no lattice mode is resonant (the
/// subcritical case).
pub fn survival_lower_bound(q_i: f64, params: &SystemParams, cfg: &BoxOracleConfig) -> Result<f64> {
    let lattice = BoxLattice::new(q_i, params, cfg)?;
    let parts: Vec<f64> = (0..lattice.slab_count()).map(|s| lattice.decay_bound_slab(s)).collect();
    Ok(1.0 - pairwise_sum(&parts))
}
