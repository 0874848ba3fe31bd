//! Amplitudes, cross sections and gain-band detection.
//!
//! The forward amplitude F = (ω/c)²·α feeds the optical theorem
//! σ_tot = (4πc/ω)·Im F, which is negative wherever the target amplifies.
//! The same total cross section is exposed through the noise-temperature
//! route σ_tot = 4π²ω·(1 − e^{−ω·β_n(ω)})·S+(ω); the two agree identically
//! because both reduce to π·(S+ − S−). Internal units set ħ = c = k_B = 1.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::response::ResponseSpectrum;
use crate::spectral::{broadened_at, LineSpectrum};

/// The observables of a target at one frequency. `sigma_in` is defined by
/// the sum rule σ_in = σ_tot − σ_el; it is negative when stimulated emission
/// outweighs absorption, which the `amplifying` flag annotates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSections {
    pub omega: f64,
    pub sigma_el: f64,
    pub sigma_tot: f64,
    pub sigma_in: f64,
    pub f_forward: Complex64,
    pub amplifying: bool,
}

/// Forward elastic amplitude in the dipole approximation (equal incident and
/// final polarization): F = (ω/c)²·α.
pub fn forward_amplitude(alpha: Complex64, omega: f64) -> Complex64 {
    omega * omega * alpha
}

/// Polarization-averaged differential elastic cross section:
/// dσ/dΩ = ½·(1 + cos²θ)·(ω/c)⁴·|α|².
pub fn differential_elastic(alpha: Complex64, omega: f64, theta: f64) -> f64 {
    0.5 * (1.0 + theta.cos().powi(2)) * omega.powi(4) * alpha.norm_sqr()
}

/// Elastic (Rayleigh) cross section σ_el = (8π/3)·(ω/c)⁴·|α|².
pub fn sigma_elastic(alpha: Complex64, omega: f64) -> f64 {
    (8.0 * PI / 3.0) * omega.powi(4) * alpha.norm_sqr()
}

/// Total cross section from the optical theorem, σ_tot = (4πc/ω)·Im F with
/// F the forward amplitude; equivalently (4πω/c)·Im α.
pub fn sigma_total_optical(alpha: Complex64, omega: f64) -> f64 {
    (4.0 * PI / omega) * forward_amplitude(alpha, omega).im
}

/// Inelastic cross section defined by the sum rule σ_in = σ_tot − σ_el.
/// Negative values mean net stimulated emission.
pub fn sigma_inelastic(sigma_tot: f64, sigma_el: f64) -> f64 {
    sigma_tot - sigma_el
}

/// Bundle every cross section at one frequency.
pub fn cross_sections(alpha: Complex64, omega: f64) -> CrossSections {
    let f_forward = forward_amplitude(alpha, omega);
    let sigma_el = sigma_elastic(alpha, omega);
    let sigma_tot = sigma_total_optical(alpha, omega);
    let sigma_in = sigma_inelastic(sigma_tot, sigma_el);
    CrossSections {
        omega,
        sigma_el,
        sigma_tot,
        sigma_in,
        f_forward,
        amplifying: sigma_in < 0.0,
    }
}

/// Pointwise noise parameter β_n(ω) = ln(S+(ω)/S−(ω))/ω on broadened
/// spectral functions.
///
/// Returns NaN where undefined (ω = 0 or both spectral functions zero) and
/// ±infinity when exactly one of them vanishes.
pub fn noise_beta_pointwise(s_plus: f64, s_minus: f64, omega: f64) -> f64 {
    if omega == 0.0 || (s_plus == 0.0 && s_minus == 0.0) {
        return f64::NAN;
    }
    if s_minus == 0.0 {
        return f64::INFINITY * omega.signum();
    }
    if s_plus == 0.0 {
        return f64::NEG_INFINITY * omega.signum();
    }
    (s_plus / s_minus).ln() / omega
}

/// Total cross section through the noise-temperature route:
/// σ_tot = 4π²ω·(1 − e^{−ω·β_n(ω)})·S+(ω).
///
/// Algebraically identical to [`sigma_total_optical`] evaluated at
/// α(ω + iη) with the same η.
pub fn sigma_total_noise_form(spectrum: &LineSpectrum, omega: f64, eta: f64) -> Result<f64> {
    require_positive_omega(omega)?;
    let (s_plus, s_minus) = broadened_at(spectrum, omega, eta)?;
    if s_plus <= 0.0 {
        return Err(Error::Domain(format!(
            "noise-form cross section needs S+({omega}) > 0 (noise parameter undefined)"
        )));
    }
    let beta = noise_beta_pointwise(s_plus, s_minus, omega);
    // 1 - e^{-x} without cancellation
    Ok(4.0 * PI * PI * omega * (-f64::exp_m1(-omega * beta)) * s_plus)
}

/// Total cross section through the symmetrized spectral function:
/// σ_tot = 8π²ω·tanh(ω·β_n(ω)/2)·S̄(ω). Agrees with the other two routes.
pub fn sigma_total_symmetrized(spectrum: &LineSpectrum, omega: f64, eta: f64) -> Result<f64> {
    require_positive_omega(omega)?;
    let (s_plus, s_minus) = broadened_at(spectrum, omega, eta)?;
    if s_plus <= 0.0 {
        return Err(Error::Domain(format!(
            "symmetrized cross section needs S+({omega}) > 0"
        )));
    }
    let beta = noise_beta_pointwise(s_plus, s_minus, omega);
    let s_bar = 0.5 * (s_plus + s_minus);
    Ok(8.0 * PI * PI * omega * (0.5 * omega * beta).tanh() * s_bar)
}

/// Variant of the symmetrized form with tanh(ω·β_n) in place of
/// tanh(ω·β_n/2). It does not satisfy the optical-theorem identity and is
/// exposed only so the difference between the two arguments is measurable.
pub fn sigma_total_symmetrized_full_arg(
    spectrum: &LineSpectrum,
    omega: f64,
    eta: f64,
) -> Result<f64> {
    require_positive_omega(omega)?;
    let (s_plus, s_minus) = broadened_at(spectrum, omega, eta)?;
    if s_plus <= 0.0 {
        return Err(Error::Domain(format!(
            "symmetrized cross section needs S+({omega}) > 0"
        )));
    }
    let beta = noise_beta_pointwise(s_plus, s_minus, omega);
    let s_bar = 0.5 * (s_plus + s_minus);
    Ok(8.0 * PI * PI * omega * (omega * beta).tanh() * s_bar)
}

fn require_positive_omega(omega: f64) -> Result<()> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::Domain(format!("frequency must be > 0, got {omega}")));
    }
    Ok(())
}

/// Classification of a contiguous frequency band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandKind {
    Absorber,
    Amplifier,
}

impl std::fmt::Display for BandKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BandKind::Absorber => write!(f, "absorber"),
            BandKind::Amplifier => write!(f, "amplifier"),
        }
    }
}

/// One detected band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub omega_lo: f64,
    pub omega_hi: f64,
    pub kind: BandKind,
}

/// Non-overlapping, sorted bands detected on a response grid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BandReport {
    pub bands: Vec<Band>,
}

/// Detect amplifier bands: contiguous grid runs where ω·Im α < 0, i.e.
/// σ_tot < 0. Interior band edges are located by linear interpolation of the
/// Im α zero crossing between the last grid point inside and the first
/// outside; bands touching the grid boundary end there.
pub fn amplifier_bands(response: &ResponseSpectrum) -> BandReport {
    let grid = &response.grid;
    let n = grid.len();
    let mut bands = Vec::new();
    let is_amplifying = |i: usize| grid[i] * response.alpha[i].im < 0.0;

    let mut i = 0;
    while i < n {
        if !is_amplifying(i) {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < n && is_amplifying(i + 1) {
            i += 1;
        }
        let end = i;
        let omega_lo = if start == 0 {
            grid[0]
        } else {
            interpolate_zero(grid, response, start - 1, start)
        };
        let omega_hi = if end == n - 1 {
            grid[n - 1]
        } else {
            interpolate_zero(grid, response, end, end + 1)
        };
        bands.push(Band {
            omega_lo,
            omega_hi,
            kind: BandKind::Amplifier,
        });
        i += 1;
    }
    BandReport { bands }
}

fn interpolate_zero(grid: &[f64], response: &ResponseSpectrum, i: usize, j: usize) -> f64 {
    let (y0, y1) = (response.alpha[i].im, response.alpha[j].im);
    if y0 == y1 {
        return 0.5 * (grid[i] + grid[j]);
    }
    grid[i] + (0.0 - y0) / (y1 - y0) * (grid[j] - grid[i])
}
