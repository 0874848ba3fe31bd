//! Dipole spectral functions of a discrete level system.
//!
//! A target is described by energy levels with occupation probabilities and
//! a table of dipole-allowed transitions. From these the module builds the
//! upward/downward spectral weights S±(ω) as an exact list of lines, together
//! with thermal populations, the detailed-balance check, the per-line noise
//! parameter, and Lorentzian-broadened grid evaluations.
//!
//! Internal units put ħ = c = k_B = 1: energies, frequencies and temperatures
//! share one unit, and dipole strengths enter only through the squared matrix
//! element `mu2`.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};

/// Populations must sum to one within this tolerance.
pub const POPULATION_SUM_TOLERANCE: f64 = 1e-12;

/// Relative tolerance below which two transition frequencies are considered
/// degenerate and merged into a single line.
pub const FREQUENCY_MERGE_TOLERANCE: f64 = 1e-9;

/// One energy eigenstate of the target.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub id: String,
    /// Level energy (frequency units, ħ = 1).
    pub energy: f64,
}

impl Level {
    pub fn new(id: impl Into<String>, energy: f64) -> Self {
        Level {
            id: id.into(),
            energy,
        }
    }
}

/// A level set together with its occupation probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSystem {
    levels: Vec<Level>,
    populations: Vec<f64>,
}

impl LevelSystem {
    /// Build from explicit populations aligned with `levels`.
    ///
    /// Populations must be finite, non-negative and sum to one within
    /// [`POPULATION_SUM_TOLERANCE`]; level ids must be unique and energies
    /// finite.
    pub fn new(levels: Vec<Level>, populations: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Domain(
                "level system needs at least one level".into(),
            ));
        }
        if levels.len() != populations.len() {
            return Err(Error::Config(format!(
                "{} levels but {} populations",
                levels.len(),
                populations.len()
            )));
        }
        let mut seen = HashSet::new();
        for level in &levels {
            if !level.energy.is_finite() {
                return Err(Error::Config(format!(
                    "level `{}` has non-finite energy",
                    level.id
                )));
            }
            if !seen.insert(level.id.as_str()) {
                return Err(Error::Config(format!("duplicate level id `{}`", level.id)));
            }
        }
        let mut sum = 0.0;
        for (level, &p) in levels.iter().zip(&populations) {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::Config(format!(
                    "population of level `{}` must be finite and >= 0, got {p}",
                    level.id
                )));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > POPULATION_SUM_TOLERANCE {
            return Err(Error::Config(format!(
                "populations sum to {sum:.17}, expected 1"
            )));
        }
        Ok(LevelSystem {
            levels,
            populations,
        })
    }

    /// Build with Boltzmann populations at temperature `temperature`.
    pub fn thermal(levels: Vec<Level>, temperature: f64) -> Result<Self> {
        let by_id = thermal_populations(&levels, temperature)?;
        let populations = levels.iter().map(|l| by_id[&l.id]).collect();
        LevelSystem::new(levels, populations)
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn population(&self, id: &str) -> Option<f64> {
        self.levels
            .iter()
            .position(|l| l.id == id)
            .map(|i| self.populations[i])
    }

    pub fn populations(&self) -> &[f64] {
        &self.populations
    }
}

/// One dipole-allowed transition; `mu2` is the squared dipole matrix element
/// summed over vector components.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub upper: String,
    pub lower: String,
    pub mu2: f64,
}

impl Transition {
    pub fn new(upper: impl Into<String>, lower: impl Into<String>, mu2: f64) -> Self {
        Transition {
            upper: upper.into(),
            lower: lower.into(),
            mu2,
        }
    }
}

/// The dipole coupling table of a target.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TransitionTable {
    transitions: Vec<Transition>,
}

impl TransitionTable {
    /// Validates `mu2 >= 0` and uniqueness of (upper, lower) pairs. The
    /// energy ordering of the named levels is checked when the table is
    /// resolved against a [`LevelSystem`] in [`build_line_spectrum`].
    pub fn new(transitions: Vec<Transition>) -> Result<Self> {
        let mut seen = HashSet::new();
        for t in &transitions {
            if !t.mu2.is_finite() || t.mu2 < 0.0 {
                return Err(Error::Config(format!(
                    "transition {} -> {}: mu2 must be finite and >= 0, got {}",
                    t.upper, t.lower, t.mu2
                )));
            }
            if !seen.insert((t.upper.as_str(), t.lower.as_str())) {
                return Err(Error::Config(format!(
                    "duplicate transition ({}, {})",
                    t.upper, t.lower
                )));
            }
        }
        Ok(TransitionTable { transitions })
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }
}

/// One spectral line: delta weights of S+ and S− at +`omega0`.
///
/// Crossing symmetry is implicit: the weight of S+ at −`omega0` equals
/// `w_minus`, so only ω > 0 lines are stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub omega0: f64,
    pub w_plus: f64,
    pub w_minus: f64,
}

/// The exact, broadening-free spectral content of a target: one line per
/// distinct transition frequency, sorted ascending.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LineSpectrum {
    lines: Vec<SpectralLine>,
}

impl LineSpectrum {
    /// Sorts by frequency, merges lines whose frequencies agree within
    /// [`FREQUENCY_MERGE_TOLERANCE`] (relative) by summing their weights,
    /// and validates positivity.
    pub fn new(mut lines: Vec<SpectralLine>) -> Result<Self> {
        for line in &lines {
            if !line.omega0.is_finite() || line.omega0 <= 0.0 {
                return Err(Error::Domain(format!(
                    "line frequency must be finite and > 0, got {}",
                    line.omega0
                )));
            }
            if !line.w_plus.is_finite()
                || !line.w_minus.is_finite()
                || line.w_plus < 0.0
                || line.w_minus < 0.0
            {
                return Err(Error::Domain(format!(
                    "line weights must be finite and >= 0, got ({}, {})",
                    line.w_plus, line.w_minus
                )));
            }
        }
        lines.sort_by(|a, b| a.omega0.total_cmp(&b.omega0));
        let mut merged: Vec<SpectralLine> = Vec::with_capacity(lines.len());
        let mut group: Vec<SpectralLine> = Vec::new();
        for line in lines {
            match group.last() {
                Some(last)
                    if line.omega0 - last.omega0 <= FREQUENCY_MERGE_TOLERANCE * line.omega0 =>
                {
                    group.push(line);
                }
                Some(_) => {
                    merged.push(merge_group(&group));
                    group.clear();
                    group.push(line);
                }
                None => group.push(line),
            }
        }
        if !group.is_empty() {
            merged.push(merge_group(&group));
        }
        Ok(LineSpectrum { lines: merged })
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Find the line at `omega0` (relative tolerance
    /// [`FREQUENCY_MERGE_TOLERANCE`]).
    pub fn line_at(&self, omega0: f64) -> Option<&SpectralLine> {
        self.lines.iter().find(|l| {
            (l.omega0 - omega0).abs() <= FREQUENCY_MERGE_TOLERANCE * omega0.abs().max(l.omega0)
        })
    }
}

fn merge_group(group: &[SpectralLine]) -> SpectralLine {
    let n = group.len() as f64;
    SpectralLine {
        omega0: group.iter().map(|l| l.omega0).sum::<f64>() / n,
        w_plus: group.iter().map(|l| l.w_plus).sum(),
        w_minus: group.iter().map(|l| l.w_minus).sum(),
    }
}

/// S±(ω) and the symmetrized S̄(ω) evaluated on a frequency grid with
/// Lorentzian broadening of half-width `eta`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunctions {
    pub grid: Vec<f64>,
    pub s_plus: Vec<f64>,
    pub s_minus: Vec<f64>,
    pub s_bar: Vec<f64>,
    pub eta: f64,
}

/// Boltzmann populations p_I ∝ exp(−E_I / T), normalized to sum to one.
///
/// Negative temperatures are first-class inputs: they produce inverted
/// Boltzmann weights. `T = 0` is rejected (use explicit populations for a
/// pure ground state).
pub fn thermal_populations(levels: &[Level], temperature: f64) -> Result<BTreeMap<String, f64>> {
    if levels.is_empty() {
        return Err(Error::Domain(
            "thermal populations need at least one level".into(),
        ));
    }
    if temperature == 0.0 || !temperature.is_finite() {
        return Err(Error::Domain(format!(
            "temperature must be finite and nonzero, got {temperature}"
        )));
    }
    for level in levels {
        if !level.energy.is_finite() {
            return Err(Error::Config(format!(
                "level `{}` has non-finite energy",
                level.id
            )));
        }
    }
    // shift exponents by their maximum so the largest weight is exactly 1
    let exponents: Vec<f64> = levels.iter().map(|l| -l.energy / temperature).collect();
    let shift = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = exponents.iter().map(|e| (e - shift).exp()).collect();
    let norm: f64 = weights.iter().sum();
    let mut populations = BTreeMap::new();
    for (level, w) in levels.iter().zip(&weights) {
        if populations.insert(level.id.clone(), w / norm).is_some() {
            return Err(Error::Config(format!("duplicate level id `{}`", level.id)));
        }
    }
    Ok(populations)
}

/// Assemble the line spectrum of a target: for each transition u → l with
/// frequency ω0 = E_u − E_l the upward weight is p_l·mu2/3 and the downward
/// weight p_u·mu2/3 (isotropic dipole average). Degenerate frequencies are
/// merged.
pub fn build_line_spectrum(system: &LevelSystem, table: &TransitionTable) -> Result<LineSpectrum> {
    let index: HashMap<&str, usize> = system
        .levels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.id.as_str(), i))
        .collect();
    let mut lines = Vec::with_capacity(table.transitions().len());
    for t in table.transitions() {
        let iu = *index.get(t.upper.as_str()).ok_or_else(|| {
            Error::Config(format!("transition references unknown level `{}`", t.upper))
        })?;
        let il = *index.get(t.lower.as_str()).ok_or_else(|| {
            Error::Config(format!("transition references unknown level `{}`", t.lower))
        })?;
        let e_upper = system.levels()[iu].energy;
        let e_lower = system.levels()[il].energy;
        if e_upper <= e_lower {
            return Err(Error::Config(format!(
                "transition ({}, {}) must have E_upper > E_lower, got {} <= {}",
                t.upper, t.lower, e_upper, e_lower
            )));
        }
        lines.push(SpectralLine {
            omega0: e_upper - e_lower,
            w_plus: system.populations()[il] * t.mu2 / 3.0,
            w_minus: system.populations()[iu] * t.mu2 / 3.0,
        });
    }
    LineSpectrum::new(lines)
}

/// Unit-area Lorentzian of half-width `eta`.
#[inline]
fn lorentzian(x: f64, eta: f64) -> f64 {
    eta / (std::f64::consts::PI * (x * x + eta * eta))
}

#[inline]
fn broadened_pair_unchecked(spectrum: &LineSpectrum, omega: f64, eta: f64) -> (f64, f64) {
    let mut s_plus = 0.0;
    let mut s_minus = 0.0;
    for line in spectrum.lines() {
        let resonant = lorentzian(omega - line.omega0, eta);
        let mirrored = lorentzian(omega + line.omega0, eta);
        s_plus += line.w_plus * resonant + line.w_minus * mirrored;
        s_minus += line.w_minus * resonant + line.w_plus * mirrored;
    }
    (s_plus, s_minus)
}

/// Broadened (S+(ω), S−(ω)) at a single frequency.
///
/// Each delta weight is replaced by a unit-area Lorentzian; contributions at
/// both ±ω0 are included, so S+(−ω) = S−(ω) holds identically.
pub fn broadened_at(spectrum: &LineSpectrum, omega: f64, eta: f64) -> Result<(f64, f64)> {
    validate_eta(eta)?;
    Ok(broadened_pair_unchecked(spectrum, omega, eta))
}

/// Evaluate S+, S− and S̄ = (S+ + S−)/2 on a grid.
pub fn evaluate_spectral_functions(
    spectrum: &LineSpectrum,
    grid: &[f64],
    eta: f64,
) -> Result<SpectralFunctions> {
    validate_eta(eta)?;
    validate_grid(grid)?;
    let mut s_plus = Vec::with_capacity(grid.len());
    let mut s_minus = Vec::with_capacity(grid.len());
    let mut s_bar = Vec::with_capacity(grid.len());
    for &omega in grid {
        let (sp, sm) = broadened_pair_unchecked(spectrum, omega, eta);
        s_plus.push(sp);
        s_minus.push(sm);
        s_bar.push(0.5 * (sp + sm));
    }
    Ok(SpectralFunctions {
        grid: grid.to_vec(),
        s_plus,
        s_minus,
        s_bar,
        eta,
    })
}

/// Per-line noise parameter at a transition frequency.
///
/// `beta_n = ln(w_plus / w_minus) / omega0` is the primary representation
/// (it equals ħ/(k_B·T_n) in internal units and stays smooth where the noise
/// temperature diverges); `t_n = 1/beta_n` is reported alongside. IEEE
/// infinities flag the singular cases: `beta_n = +inf` when `w_minus = 0`
/// (zero-temperature-like absorber), `beta_n = -inf` when `w_plus = 0`, and
/// `t_n = inf` when the weights are equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParameter {
    pub beta_n: f64,
    pub t_n: f64,
}

/// Noise parameter of the line at `omega0`.
pub fn noise_parameter(spectrum: &LineSpectrum, omega0: f64) -> Result<NoiseParameter> {
    let line = spectrum
        .line_at(omega0)
        .ok_or_else(|| Error::Domain(format!("no spectral line at frequency {omega0}")))?;
    let beta_n = if line.w_plus == 0.0 && line.w_minus == 0.0 {
        return Err(Error::Domain(format!(
            "noise parameter undefined at {omega0}: both spectral weights vanish"
        )));
    } else if line.w_minus == 0.0 {
        f64::INFINITY
    } else if line.w_plus == 0.0 {
        f64::NEG_INFINITY
    } else {
        (line.w_plus / line.w_minus).ln() / line.omega0
    };
    Ok(NoiseParameter {
        beta_n,
        t_n: 1.0 / beta_n,
    })
}

/// Worst-case relative violation of detailed balance at temperature `t`,
/// evaluated at the exact line-weight level:
/// max over lines of |w− − w+·exp(−ω0/T)| / max(w+, w−).
///
/// Zero (≤ 1e−12) iff the populations are thermal at `t`. Lines with both
/// weights zero trivially satisfy balance and are skipped.
pub fn detailed_balance_residual(spectrum: &LineSpectrum, t: f64) -> Result<f64> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!(
            "detailed balance check needs finite nonzero temperature, got {t}"
        )));
    }
    let mut worst = 0.0f64;
    for line in spectrum.lines() {
        let scale = line.w_plus.max(line.w_minus);
        if scale == 0.0 {
            continue;
        }
        let residual = (line.w_minus - line.w_plus * (-line.omega0 / t).exp()).abs() / scale;
        worst = worst.max(residual);
    }
    Ok(worst)
}

fn validate_eta(eta: f64) -> Result<()> {
    if !eta.is_finite() || eta <= 0.0 {
        return Err(Error::Domain(format!(
            "broadening half-width must be finite and > 0, got {eta}"
        )));
    }
    Ok(())
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    for pair in grid.windows(2) {
        if pair.iter().any(|w| w.is_nan()) || pair[1] <= pair[0] {
            return Err(Error::Domain(
                "frequency grid must be strictly ascending".into(),
            ));
        }
    }
    if grid.iter().any(|w| !w.is_finite()) {
        return Err(Error::Domain("frequency grid must be finite".into()));
    }
    Ok(())
}
