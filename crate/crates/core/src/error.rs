use alloc::vec::Vec;

/// Result alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input lies outside the domain of the quantity being evaluated.
    #[error("`{name}` = {value} is out of domain: {reason}")]
    Domain {
        /// Name of the offending input.
        name: &'static str,
        /// The value that was rejected.
        value: f64,
        /// What the domain is.
        reason: &'static str,
    },

    /// The Bogoliubov transformation is singular at zero momentum.
    #[error("Bogoliubov coefficients are singular at p = 0")]
    SingularCoefficients,

    /// Neither the bare coupling nor the scattering length was supplied.
    #[error("impurity coupling not set: supply `g` or the scattering length `a`")]
    MissingCoupling,

    /// The energy shift needs the scattering length itself, not a bare
    /// coupling.
    #[error("scattering length `a` not set; the energy shift is defined in terms of `a`")]
    MissingScatteringLength,

    /// Adaptive quadrature ran out of subdivisions.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions: \
         value {value}, error estimate {error}"
    )]
    NoConvergence {
        /// Best estimate of the integral.
        value: f64,
        /// Absolute error estimate reached.
        error: f64,
        /// Subdivisions used.
        subdivisions: usize,
    },

    /// A numerical configuration is inconsistent.
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),

    /// Impurity momentum at or above the critical momentum where only the
    /// subcritical branch is defined.
    #[error("impurity momentum {q_i} is not below the critical momentum q_c = {q_c}")]
    Supercritical {
        /// Requested momentum.
        q_i: f64,
        /// Critical momentum `M c`.
        q_c: f64,
    },

    /// Several requested momenta are at or above the critical momentum.
    #[error("momenta at or above the critical momentum q_c = {q_c}: {offenders:?}")]
    SupercriticalGrid {
        /// Critical momentum `M c`.
        q_c: f64,
        /// The rejected momenta, in input order.
        offenders: Vec<f64>,
    },

    /// The second-order mass correction is too large for perturbation theory.
    #[error("effective-mass correction {correction} is beyond the perturbative range (|.| < 0.5)")]
    PerturbativeBreakdown {
        /// The offending dimensionless correction.
        correction: f64,
    },

    /// A finite-box lattice would exceed the configured point budget.
    #[error("momentum lattice needs {points} points, budget is {budget}")]
    PointBudget {
        /// Points the lattice would contain.
        points: u64,
        /// Configured maximum.
        budget: u64,
    },
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain { name, value, reason: "must be finite and positive" })
    }
}

pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain { name, value, reason: "must be finite and non-negative" })
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { name, value, reason: "must be finite" })
    }
}
