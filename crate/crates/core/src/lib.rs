//! Numerics for a single quantum impurity moving through a dilute Bose-Einstein
//! condensate at zero temperature.
//!
//! The condensate is treated in the Bogoliubov approximation and the
//! impurity-condensate contact coupling perturbatively. Every closed-form
//! observable in the crate has an independent numerical route next to it:
//!
//! - [`bogoliubov`]: quasiparticle dispersion, transformation coefficients and
//!   the squared impurity vertex.
//! - [`kinematics`]: energy-momentum conservation for single-excitation
//!   emission, the Cherenkov window and the Landau threshold.
//! - [`rates`]: golden-rule transition and energy dissipation rates, in closed
//!   form, by quadrature, and as a finite-box lattice sum.
//! - [`selfenergy`]: renormalized energy shift, dispersion of the dressed
//!   impurity and its effective mass.
//! - [`quadrature`]: the adaptive integration and finite-difference kernels
//!   shared by the modules above.
//!
//! Units: `hbar = 1`. The conventional choice `m = c = n = 1` measures
//! momenta in `m c` and energies in `m c^2`.
//!
//! The crate is `no_std` (it needs `alloc`); IO, file formats and the command
//! line live in the companion `bec-impurity-cli` crate.

#![cfg_attr(not(test), no_std)]
#![warn(missing_docs)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bogoliubov;
mod error;
pub mod kinematics;
pub mod params;
pub mod quadrature;
pub mod rates;
pub mod selfenergy;

pub use error::{Error, Result};
pub use params::{DerivedQuantities, SystemParams};
