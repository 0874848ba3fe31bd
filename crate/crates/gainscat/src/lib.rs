//! Electromagnetic linear response of excited targets.
//!
//! Starting from a discrete level catalog (energies, populations, dipole
//! strengths), this crate builds the quantum dipole spectral functions
//! S±(ω), the complex polarizability α, and the observable consequences:
//! Rayleigh and total cross sections, frequency-dependent noise temperature,
//! and the extinction of a dilute gas of such targets. For
//! population-inverted targets the total cross section is *negative* inside
//! the gain band: stimulated emission puts more light behind the target
//! than arrived, and the `screen` module demonstrates numerically that the
//! optical theorem σ_tot = (4πc/ω)·Im F holds regardless of that sign, by
//! direct integration of the far-field screen intensity.
//!
//! Internal units set ħ = c = k_B = 1. All operations are pure functions
//! over immutable values.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod medium;
pub mod quadrature;
pub mod response;
pub mod scattering;
pub mod screen;
pub mod spectral;

pub use error::{Error, Result};
pub use response::{polarizability, polarizability_on_axis, ResponseSpectrum};
pub use scattering::{cross_sections, CrossSections};
pub use spectral::{LevelSystem, LineSpectrum, TransitionTable};
