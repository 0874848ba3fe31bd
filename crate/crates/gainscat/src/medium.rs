//! A dilute gas of polarizable targets: dielectric function, complex
//! wavevector, extinction coefficient, and the first-order consistency check
//! h = n·σ_tot. Negative extinction marks an amplifying medium.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::response::polarizability_on_axis;
use crate::scattering::sigma_total_optical;
use crate::spectral::LineSpectrum;

/// Default validity guard of the first-order dielectric expansion: inputs
/// with |4πnα| at or above this bound are rejected.
pub const DILUTE_GUARD: f64 = 0.5;

/// Medium observables at one frequency. `h = 2·Im k` always.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumResponse {
    pub omega: f64,
    pub n_density: f64,
    pub epsilon: Complex64,
    pub k: Complex64,
    pub h: f64,
}

/// Both routes to the extinction coefficient and their relative gap, which
/// is first order in n|α|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiluteConsistency {
    pub h: f64,
    pub n_sigma_tot: f64,
    pub relative_gap: f64,
}

/// Dielectric function of a dilute gas, ε = 1 + 4πnα, first order in the
/// target density. Uses the default [`DILUTE_GUARD`].
pub fn dielectric(alpha: Complex64, n_density: f64) -> Result<Complex64> {
    dielectric_with_guard(alpha, n_density, DILUTE_GUARD)
}

/// [`dielectric`] with an explicit validity guard on |4πnα|.
pub fn dielectric_with_guard(alpha: Complex64, n_density: f64, guard: f64) -> Result<Complex64> {
    if !n_density.is_finite() || n_density < 0.0 {
        return Err(Error::Domain(format!(
            "target density must be finite and >= 0, got {n_density}"
        )));
    }
    if guard.is_nan() || guard <= 0.0 {
        return Err(Error::Domain(format!(
            "dilute guard must be > 0, got {guard}"
        )));
    }
    let susceptibility = 4.0 * std::f64::consts::PI * n_density * alpha;
    if susceptibility.norm() >= guard {
        return Err(Error::Domain(format!(
            "dilute approximation violated: |4 pi n alpha| = {} >= {guard}; \
             the first-order dielectric expansion is untrustworthy here",
            susceptibility.norm()
        )));
    }
    Ok(1.0 + susceptibility)
}

/// Complex wavevector k = (ω/c)·√ε on the principal branch (Re √ε > 0).
pub fn complex_wavevector(epsilon: Complex64, omega: f64) -> Result<Complex64> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::Domain(format!("frequency must be > 0, got {omega}")));
    }
    if epsilon.im == 0.0 && epsilon.re < 0.0 {
        return Err(Error::Domain(format!(
            "epsilon = {epsilon} lies on the branch cut of the principal square root; \
             this is unreachable in the dilute regime; check the density and response inputs"
        )));
    }
    Ok(omega * epsilon.sqrt())
}

/// Extinction coefficient h = 2·Im k: positive in an absorbing medium,
/// negative in an amplifying one.
pub fn extinction_coefficient(k: Complex64) -> f64 {
    2.0 * k.im
}

/// Full chain α → ε → k → h at one frequency.
pub fn medium_response(alpha: Complex64, omega: f64, n_density: f64) -> Result<MediumResponse> {
    let epsilon = dielectric(alpha, n_density)?;
    let k = complex_wavevector(epsilon, omega)?;
    Ok(MediumResponse {
        omega,
        n_density,
        epsilon,
        k,
        h: extinction_coefficient(k),
    })
}

/// Compare the extinction coefficient from the ε → k chain against n·σ_tot
/// from the optical theorem. The relative gap is O(n|α|) and halves with n.
pub fn dilute_consistency(
    spectrum: &LineSpectrum,
    omega: f64,
    eta: f64,
    n_density: f64,
) -> Result<DiluteConsistency> {
    let alpha = polarizability_on_axis(spectrum, omega, eta)?;
    let medium = medium_response(alpha, omega, n_density)?;
    let n_sigma_tot = n_density * sigma_total_optical(alpha, omega);
    let gap = medium.h - n_sigma_tot;
    let relative_gap = if gap == 0.0 {
        0.0
    } else {
        gap.abs() / medium.h.abs().max(f64::MIN_POSITIVE)
    };
    Ok(DiluteConsistency {
        h: medium.h,
        n_sigma_tot,
        relative_gap,
    })
}

/// Normalized intensity I(z)/I(0) = e^{−h·z} at each requested depth.
pub fn intensity_profile(h: f64, z_points: &[f64]) -> Vec<f64> {
    z_points.iter().map(|&z| (-h * z).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{
        build_line_spectrum, Level, LevelSystem, SpectralLine, Transition, TransitionTable,
    };
    use proptest::prelude::*;

    fn spectrum(p_ground: f64, p_excited: f64) -> LineSpectrum {
        let system = LevelSystem::new(
            vec![Level::new("g", 0.0), Level::new("e", 1.0)],
            vec![p_ground, p_excited],
        )
        .unwrap();
        let table = TransitionTable::new(vec![Transition::new("e", "g", 1.0)]).unwrap();
        build_line_spectrum(&system, &table).unwrap()
    }

    #[test]
    fn vacuum_is_unity() {
        let eps = dielectric(Complex64::new(0.66, -3.0), 0.0).unwrap();
        assert_eq!(eps, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn dielectric_static_two_level() {
        let eps = dielectric(Complex64::new(2.0 / 3.0, 0.0), 1e-3).unwrap();
        let expected = 1.0 + 4.0 * std::f64::consts::PI * (2.0 / 3.0) * 1e-3;
        assert!((eps.re - expected).abs() < 1e-15);
        assert!((eps.re - 1.0083775804095728).abs() < 1e-12);
        assert_eq!(eps.im, 0.0);
    }

    #[test]
    fn imaginary_part_identity() {
        let alpha = Complex64::new(0.3, -12.5);
        let n = 1e-4;
        let eps = dielectric(alpha, n).unwrap();
        assert_eq!(eps.im, 4.0 * std::f64::consts::PI * n * alpha.im);
    }

    #[test]
    fn dilute_guard_trips() {
        let alpha = Complex64::new(0.0, 40.0);
        assert!(matches!(dielectric(alpha, 1e-3), Err(Error::Domain(_))));
    }

    #[test]
    fn wavevector_values() {
        let k = complex_wavevector(Complex64::new(1.0, 0.0), 2.0).unwrap();
        assert_eq!(k, Complex64::new(2.0, 0.0));

        let k = complex_wavevector(Complex64::new(1.0, 1e-4), 1.0).unwrap();
        assert!((k.re - 1.0).abs() < 1e-8);
        assert!((k.im - 5e-5).abs() < 1e-9 * 5e-5 + 1e-12);

        let gain = complex_wavevector(Complex64::new(1.0, -1e-4), 1.0).unwrap();
        assert!(gain.im < 0.0);
        assert!(gain.re > 0.0);
    }

    #[test]
    fn wavevector_branch_cut_is_rejected() {
        assert!(matches!(
            complex_wavevector(Complex64::new(-1.0, 0.0), 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn extinction_values() {
        assert!((extinction_coefficient(Complex64::new(1.0, 5e-5)) - 1e-4).abs() < 1e-19);
        assert_eq!(extinction_coefficient(Complex64::new(3.0, 0.0)), 0.0);
    }

    #[test]
    fn inverted_target_gives_gain() {
        let spectrum = spectrum(0.25, 0.75);
        let alpha = polarizability_on_axis(&spectrum, 1.0, 0.01).unwrap();
        let medium = medium_response(alpha, 1.0, 1e-6).unwrap();
        assert!(medium.h < 0.0);
        assert_eq!(medium.h, 2.0 * medium.k.im);
    }

    #[test]
    fn dilute_consistency_resonance() {
        let spectrum = spectrum(1.0, 0.0);
        let result = dilute_consistency(&spectrum, 1.0, 0.01, 1e-6).unwrap();
        assert!(result.relative_gap <= 1e-3, "gap {}", result.relative_gap);

        let halved = dilute_consistency(&spectrum, 1.0, 0.01, 5e-7).unwrap();
        let ratio = result.relative_gap / halved.relative_gap;
        assert!((1.8..=2.2).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn dilute_consistency_vacuum() {
        let spectrum = spectrum(1.0, 0.0);
        let result = dilute_consistency(&spectrum, 1.0, 0.01, 0.0).unwrap();
        assert_eq!(result.h, 0.0);
        assert_eq!(result.n_sigma_tot, 0.0);
        assert_eq!(result.relative_gap, 0.0);
    }

    #[test]
    fn intensity_profile_values() {
        assert!(intensity_profile(0.0, &[0.0, 1.0, 7.5])
            .iter()
            .all(|&x| x == 1.0));
        let decayed = intensity_profile(0.1, &[10.0]);
        assert_eq!(decayed[0], (-1.0f64).exp());
        let amplified = intensity_profile(-0.2, &[0.0, 1.0, 2.0, 3.0]);
        assert!(amplified.windows(2).all(|p| p[1] > p[0]));
    }

    proptest! {
        #[test]
        fn epsilon_imaginary_identity_holds(
            re in -50.0f64..50.0,
            im in -50.0f64..50.0,
            n in 0.0f64..1e-4,
        ) {
            let alpha = Complex64::new(re, im);
            prop_assume!(4.0 * std::f64::consts::PI * n * alpha.norm() < DILUTE_GUARD);
            let eps = dielectric(alpha, n).unwrap();
            prop_assert_eq!(eps.im, 4.0 * std::f64::consts::PI * n * alpha.im);
        }

        #[test]
        fn extinction_sign_matches_sigma_tot(
            raw in proptest::collection::vec((0.5f64..5.0, 0.0f64..1.0, 0.0f64..1.0), 1..4),
            omega in 0.2f64..6.0,
            n in 1e-9f64..1e-5,
        ) {
            let spectrum = LineSpectrum::new(
                raw.into_iter()
                    .map(|(omega0, w_plus, w_minus)| SpectralLine { omega0, w_plus, w_minus })
                    .collect(),
            )
            .unwrap();
            let eta = 0.01;
            let alpha = polarizability_on_axis(&spectrum, omega, eta).unwrap();
            prop_assume!(alpha.im.abs() > 1e-14);
            let medium = medium_response(alpha, omega, n).unwrap();
            let sigma = sigma_total_optical(alpha, omega);
            prop_assert_eq!(medium.h.signum(), sigma.signum());
            prop_assert!(medium.k.re > 0.0);
        }
    }
}
