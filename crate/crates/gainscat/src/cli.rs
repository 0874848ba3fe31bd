//! Command-line interface: `spectrum`, `bands` and `verify` subcommands.
//!
//! All reports are CSV with reals written to 17 significant digits, so the
//! output round-trips f64 exactly and identical inputs produce byte-identical
//! files. `beta_n` uses the literal tokens `inf`/`-inf` for the singular
//! noise-parameter cases and is left blank where undefined; the extinction
//! column `h` is blank when the density is zero.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::catalog::{read_levels, read_transitions};
use crate::error::{Error, Result};
use crate::medium::{complex_wavevector, dielectric, extinction_coefficient};
use crate::response::{polarizability_on_axis, response_spectrum};
use crate::scattering::{amplifier_bands, cross_sections, forward_amplitude, noise_beta_pointwise};
use crate::screen::{verify_optical_theorem, ScreenConfig};
use crate::spectral::{
    build_line_spectrum, evaluate_spectral_functions, LevelSystem, LineSpectrum,
};

/// Electromagnetic response of excited targets: spectra, gain bands, and
/// far-field verification of the optical theorem.
#[derive(Debug, Parser)]
#[command(name = "gainscat", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep polarizability, cross sections, noise parameter and extinction
    /// over a frequency grid.
    Spectrum(SpectrumArgs),
    /// Report amplifier bands (frequency intervals with negative total cross
    /// section).
    Bands(BandsArgs),
    /// Integrate the far-screen missing intensity at one frequency and check
    /// the optical theorem.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Levels file: `id,energy[,population]`.
    #[arg(long)]
    pub levels: PathBuf,
    /// Transitions file: `upper,lower,mu2`.
    #[arg(long)]
    pub transitions: PathBuf,
    /// Boltzmann temperature; mutually exclusive with a population column in
    /// the levels file. Negative values invert the populations.
    #[arg(long, allow_negative_numbers = true)]
    pub temperature: Option<f64>,
    /// Frequency grid as min:max:count.
    #[arg(long)]
    pub grid: GridSpec,
    /// Lorentzian broadening half-width (also the on-axis offset).
    #[arg(long, allow_negative_numbers = true)]
    pub eta: f64,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub catalog: CatalogArgs,
    /// Target number density; 0 leaves the extinction column blank.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub density: f64,
}

#[derive(Debug, Args)]
pub struct BandsArgs {
    #[command(flatten)]
    pub catalog: CatalogArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub catalog: CatalogArgs,
    /// Probe frequency; must lie inside the grid range.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: f64,
    /// Screen distance.
    #[arg(long, allow_negative_numbers = true)]
    pub z: f64,
    /// Comma-separated ascending apodization window widths.
    #[arg(long, value_delimiter = ',')]
    pub windows: Vec<f64>,
}

/// Frequency grid specification `min:max:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub omega_min: f64,
    pub omega_max: f64,
    pub count: usize,
}

impl std::str::FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid must be min:max:count, got `{s}`"));
        }
        let omega_min: f64 = parts[0]
            .parse()
            .map_err(|_| format!("bad grid min `{}`", parts[0]))?;
        let omega_max: f64 = parts[1]
            .parse()
            .map_err(|_| format!("bad grid max `{}`", parts[1]))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| format!("bad grid count `{}`", parts[2]))?;
        Ok(GridSpec {
            omega_min,
            omega_max,
            count,
        })
    }
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if !self.omega_min.is_finite() || !self.omega_max.is_finite() {
            return Err(Error::Config("grid bounds must be finite".into()));
        }
        if self.omega_min >= self.omega_max {
            return Err(Error::Config(format!(
                "grid must be ascending, got {}:{}",
                self.omega_min, self.omega_max
            )));
        }
        if self.omega_min <= 0.0 {
            return Err(Error::Config(format!(
                "grid frequencies must be > 0, got min {}",
                self.omega_min
            )));
        }
        if self.count < 2 {
            return Err(Error::Config(format!(
                "grid count must be >= 2, got {}",
                self.count
            )));
        }
        Ok(())
    }

    fn points(&self) -> Vec<f64> {
        let n = self.count;
        let step = (self.omega_max - self.omega_min) / (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.omega_max
                } else {
                    self.omega_min + step * i as f64
                }
            })
            .collect()
    }
}

/// Run a parsed command, writing the report to its `--out` path.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spectrum(args) => {
            let report = spectrum_report(&args)?;
            write_report(&args.catalog.out, &report)
        }
        Command::Bands(args) => {
            let report = bands_report(&args)?;
            write_report(&args.catalog.out, &report)
        }
        Command::Verify(args) => {
            let report = verify_report(&args)?;
            write_report(&args.catalog.out, &report)
        }
    }
}

fn write_report(path: &Path, report: &str) -> Result<()> {
    std::fs::write(path, report)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn load_inputs(args: &CatalogArgs) -> Result<(LineSpectrum, Vec<f64>)> {
    args.grid.validate()?;
    if !args.eta.is_finite() || args.eta <= 0.0 {
        return Err(Error::Config(format!(
            "--eta must be > 0, got {}",
            args.eta
        )));
    }
    let levels = read_levels(&args.levels)?;
    let table = read_transitions(&args.transitions)?;
    let system = match (levels.populations, args.temperature) {
        (Some(populations), None) => LevelSystem::new(levels.levels, populations)?,
        (None, Some(t)) => LevelSystem::thermal(levels.levels, t)?,
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "levels file already provides populations; drop --temperature or the column".into(),
            ))
        }
        (None, None) => {
            return Err(Error::Config(
                "populations unspecified: add a population column or pass --temperature".into(),
            ))
        }
    };
    let spec = build_line_spectrum(&system, &table)?;
    Ok((spec, args.grid.points()))
}

/// CSV with one row per grid point:
/// `omega,re_alpha,im_alpha,sigma_el,sigma_tot,sigma_in,beta_n,h`.
pub fn spectrum_report(args: &SpectrumArgs) -> Result<String> {
    if !args.density.is_finite() || args.density < 0.0 {
        return Err(Error::Config(format!(
            "--density must be finite and >= 0, got {}",
            args.density
        )));
    }
    let (spec, grid) = load_inputs(&args.catalog)?;
    let eta = args.catalog.eta;
    let spectral = evaluate_spectral_functions(&spec, &grid, eta)?;

    let mut out = String::from("omega,re_alpha,im_alpha,sigma_el,sigma_tot,sigma_in,beta_n,h\n");
    for (i, &omega) in grid.iter().enumerate() {
        let alpha = polarizability_on_axis(&spec, omega, eta)?;
        let xs = cross_sections(alpha, omega);
        let beta = noise_beta_pointwise(spectral.s_plus[i], spectral.s_minus[i], omega);
        let h_field = if args.density > 0.0 {
            let epsilon = dielectric(alpha, args.density)?;
            let k = complex_wavevector(epsilon, omega)?;
            fmt_real(extinction_coefficient(k))
        } else {
            String::new()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_real(omega),
            fmt_real(alpha.re),
            fmt_real(alpha.im),
            fmt_real(xs.sigma_el),
            fmt_real(xs.sigma_tot),
            fmt_real(xs.sigma_in),
            fmt_beta(beta),
            h_field,
        ));
    }
    Ok(out)
}

/// CSV with one row per detected band: `omega_lo,omega_hi,kind`.
pub fn bands_report(args: &BandsArgs) -> Result<String> {
    let (spec, grid) = load_inputs(&args.catalog)?;
    let response = response_spectrum(&spec, &grid, args.catalog.eta)?;
    let report = amplifier_bands(&response);
    let mut out = String::from("omega_lo,omega_hi,kind\n");
    for band in &report.bands {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_real(band.omega_lo),
            fmt_real(band.omega_hi),
            band.kind
        ));
    }
    Ok(out)
}

/// CSV of per-window integrals followed by `extrapolated`, `reference` and
/// `relative_error` trailer rows.
pub fn verify_report(args: &VerifyArgs) -> Result<String> {
    let (spec, _) = load_inputs(&args.catalog)?;
    let grid = &args.catalog.grid;
    if args.omega.is_nan() || args.omega < grid.omega_min || args.omega > grid.omega_max {
        return Err(Error::Config(format!(
            "--omega {} outside the grid range {}:{}",
            args.omega, grid.omega_min, grid.omega_max
        )));
    }
    let alpha = polarizability_on_axis(&spec, args.omega, args.catalog.eta)?;
    let f = forward_amplitude(alpha, args.omega);
    let cfg = screen_config_from(f, args)?;
    let result = verify_optical_theorem(&cfg)?;

    let mut out = String::from("W,sigma_W\n");
    for wi in &result.windows {
        out.push_str(&format!("{},{}\n", fmt_real(wi.w), fmt_real(wi.sigma_w)));
    }
    out.push_str(&format!(
        "extrapolated,{}\n",
        fmt_real(result.sigma_extrapolated)
    ));
    out.push_str(&format!("reference,{}\n", fmt_real(result.sigma_reference)));
    out.push_str(&format!(
        "relative_error,{}\n",
        fmt_real(result.relative_error)
    ));
    Ok(out)
}

fn screen_config_from(f: Complex64, args: &VerifyArgs) -> Result<ScreenConfig> {
    ScreenConfig::new(f, args.omega, args.z, args.windows.clone())
}

/// 17 significant digits: round-trips f64 exactly.
fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_beta(beta: f64) -> String {
    if beta.is_nan() {
        String::new()
    } else if beta == f64::INFINITY {
        "inf".to_string()
    } else if beta == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        fmt_real(beta)
    }
}
