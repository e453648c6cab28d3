//! Physical inputs and the quantities derived from them.
//!
//! All values use `hbar = 1`. Nothing here knows about units beyond that; the
//! reduced convention `m = c = n = 1` is available through
//! [`SystemParams::reduced`].

use core::f64::consts::PI;

use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Error, Result};

/// Relative mismatch between `g` and `2 pi a / m_r` above which supplying
/// both is reported as suspicious.
const COUPLING_MISMATCH_WARN: f64 = 0.5;

/// Inputs describing the condensate and the impurity.
///
/// The bare coupling `g` drives the golden-rule rates, the scattering length
/// `a` drives the renormalized energy shift and effective mass. Either may be
/// omitted, in which case it is obtained from the other through the first
/// Born relation `g = 2 pi a / m_r`. Both may be given independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    boson_mass: f64,
    impurity_mass: f64,
    density: f64,
    boson_coupling: f64,
    coupling: Option<f64>,
    scattering_length: Option<f64>,
}

/// Secondary quantities every other module consumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedQuantities {
    /// Speed of sound `c = sqrt(n U0 / m)`.
    pub sound_speed: f64,
    /// Landau critical momentum `q_c = M c`.
    pub critical_momentum: f64,
    /// Reduced mass `(1/m + 1/M)^-1` of the impurity-boson pair.
    pub reduced_mass: f64,
    /// Boson-boson scattering length in first Born approximation.
    pub boson_scattering_length: f64,
}

impl SystemParams {
    /// Validates and stores the condensate and impurity masses, density and
    /// boson-boson coupling. Couplings to the impurity are added with
    /// [`with_coupling`](Self::with_coupling) and
    /// [`with_scattering_length`](Self::with_scattering_length).
    pub fn new(boson_mass: f64, impurity_mass: f64, density: f64, boson_coupling: f64) -> Result<Self> {
        Ok(Self {
            boson_mass: ensure_positive("m", boson_mass)?,
            impurity_mass: ensure_positive("M", impurity_mass)?,
            density: ensure_positive("n", density)?,
            boson_coupling: ensure_positive("U0", boson_coupling)?,
            coupling: None,
            scattering_length: None,
        })
    }

    /// `m = n = U0 = 1`, hence `c = 1` and `q_c = M`.
    pub fn reduced(impurity_mass: f64) -> Result<Self> {
        Self::new(1.0, impurity_mass, 1.0, 1.0)
    }

    /// Sets the bare impurity-boson coupling `g`.
    pub fn with_coupling(mut self, g: f64) -> Result<Self> {
        self.coupling = Some(ensure_finite("g", g)?);
        self.warn_on_mismatch();
        Ok(self)
    }

    /// Sets the impurity-boson s-wave scattering length `a`.
    pub fn with_scattering_length(mut self, a: f64) -> Result<Self> {
        self.scattering_length = Some(ensure_finite("a", a)?);
        self.warn_on_mismatch();
        Ok(self)
    }

    fn warn_on_mismatch(&self) {
        if let (Some(g), Some(a)) = (self.coupling, self.scattering_length) {
            let born = 2.0 * PI * a / self.reduced_mass();
            let mismatched = if g != 0.0 {
                libm::fabs(g - born) / libm::fabs(g) > COUPLING_MISMATCH_WARN
            } else {
                born != 0.0
            };
            if mismatched {
                log::warn!(
                    "g = {g} and a = {a} are far from the Born relation g = 2 pi a / m_r = {born}; \
                     rates use g, energy shift and effective mass use a"
                );
            }
        }
    }

    /// Boson mass `m`.
    pub fn boson_mass(&self) -> f64 {
        self.boson_mass
    }

    /// Impurity mass `M`.
    pub fn impurity_mass(&self) -> f64 {
        self.impurity_mass
    }

    /// Condensate number density `n`.
    pub fn density(&self) -> f64 {
        self.density
    }

    /// Zero Fourier component `U0` of the boson-boson interaction.
    pub fn boson_coupling(&self) -> f64 {
        self.boson_coupling
    }

    /// `n U0`, the chemical potential of the condensate.
    pub fn mean_field_energy(&self) -> f64 {
        self.density * self.boson_coupling
    }

    /// `(1/m + 1/M)^-1`.
    pub fn reduced_mass(&self) -> f64 {
        self.boson_mass * self.impurity_mass / (self.boson_mass + self.impurity_mass)
    }

    /// Speed of sound `sqrt(n U0 / m)`.
    pub fn sound_speed(&self) -> f64 {
        libm::sqrt(self.mean_field_energy() / self.boson_mass)
    }

    /// `q_c = M c`.
    pub fn critical_momentum(&self) -> f64 {
        self.impurity_mass * self.sound_speed()
    }

    /// Bare coupling `g` as supplied, or `2 pi a / m_r` if only `a` is known.
    pub fn coupling(&self) -> Result<f64> {
        match (self.coupling, self.scattering_length) {
            (Some(g), _) => Ok(g),
            (None, Some(a)) => Ok(2.0 * PI * a / self.reduced_mass()),
            (None, None) => Err(Error::MissingCoupling),
        }
    }

    /// Scattering length `a` as supplied, or `g m_r / (2 pi)` if only `g` is
    /// known.
    pub fn scattering_length(&self) -> Result<f64> {
        match (self.scattering_length, self.coupling) {
            (Some(a), _) => Ok(a),
            (None, Some(g)) => Ok(g * self.reduced_mass() / (2.0 * PI)),
            (None, None) => Err(Error::MissingCoupling),
        }
    }

    /// Whether `g` was given explicitly.
    pub fn has_explicit_coupling(&self) -> bool {
        self.coupling.is_some()
    }

    /// Whether `a` was given explicitly.
    pub fn has_explicit_scattering_length(&self) -> bool {
        self.scattering_length.is_some()
    }

    /// All derived quantities at once.
    pub fn derived(&self) -> DerivedQuantities {
        derive(self)
    }
}

/// Computes `c`, `q_c`, `m_r` and `a_s`.
///
/// Construction of [`SystemParams`] already rejects non-positive inputs, so
/// this cannot fail.
pub fn derive(params: &SystemParams) -> DerivedQuantities {
    DerivedQuantities {
        sound_speed: params.sound_speed(),
        critical_momentum: params.critical_momentum(),
        reduced_mass: params.reduced_mass(),
        boson_scattering_length: params.boson_coupling * params.boson_mass / (4.0 * PI),
    }
}

/// Boson-boson s-wave scattering length in first Born approximation,
/// `a_s = m U0 / (4 pi)`.
pub fn born_scattering_length(boson_coupling: f64, boson_mass: f64) -> Result<f64> {
    let u0 = ensure_finite("U0", boson_coupling)?;
    let m = ensure_positive("m", boson_mass)?;
    Ok(m * u0 / (4.0 * PI))
}

/// Bare coupling expressed through the scattering length to second order,
/// with the linearly divergent momentum integral cut at `cutoff`:
/// `g = (2 pi a / m_r) (1 + (2 a / pi) cutoff)`.
pub fn renormalized_coupling(scattering_length: f64, reduced_mass: f64, cutoff: f64) -> Result<f64> {
    let a = ensure_finite("a", scattering_length)?;
    let m_r = ensure_positive("m_r", reduced_mass)?;
    let cutoff = ensure_non_negative("cutoff", cutoff)?;
    Ok(2.0 * PI * a / m_r * (1.0 + 2.0 * a / PI * cutoff))
}
