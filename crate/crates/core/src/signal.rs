//! Seeded multi-tone test signals.
//!
//! A tone at normalized frequency `nu` advances `pi * nu` radians per
//! virtual-grid tick, so `nu = 1` is half the scheme's virtual sampling
//! rate `q_grid * f_s`. Phases come from a ChaCha8 stream seeded with
//! `seed` (stream 0), drawn once per tone in list order; the noise of
//! snapshot `k` comes from stream `k + 1` of the same seed. Adding noise
//! therefore never changes phases, and each snapshot can be generated
//! independently.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::estimator::SpectrumEstimate;
use crate::grid::FrequencyGrid;
use crate::scheme::{InstantSet, SchemeKind};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tone {
    #[serde(default = "unit_amplitude")]
    pub amplitude: f64,
    /// Normalized frequency on the scheme's virtual grid, in `(0, 1)`.
    pub nu: f64,
}

fn unit_amplitude() -> f64 {
    1.0
}

impl Tone {
    pub fn new(amplitude: f64, nu: f64) -> Self {
        Self { amplitude, nu }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    pub tones: Vec<Tone>,
    #[serde(default)]
    pub noise_std: f64,
    #[serde(default)]
    pub seed: u64,
}

impl SignalSpec {
    /// Unit-amplitude noiseless tones at the given normalized frequencies.
    pub fn unit_tones(nus: &[f64], seed: u64) -> Self {
        Self {
            tones: nus.iter().map(|&nu| Tone::new(1.0, nu)).collect(),
            noise_std: 0.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for t in &self.tones {
            if !(t.nu > 0.0 && t.nu < 1.0) {
                return Err(Error::FrequencyOutOfRange(t.nu));
            }
            if !(t.amplitude > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "tone amplitude must be positive, got {}",
                    t.amplitude
                )));
            }
        }
        if !(self.noise_std >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise_std must be non-negative, got {}",
                self.noise_std
            )));
        }
        Ok(())
    }

    /// Per-tone phases in `[0, 2 pi)`.
    pub fn phases(&self) -> Vec<f64> {
        draw_phases(self.seed, self.tones.len())
    }
}

fn draw_phases(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| rng.random_range(0.0..2.0 * PI))
        .collect()
}

/// Evaluates `sum_p A_p cos(pi nu_p t + phi_p) + w` at every instant.
fn render(
    amplitudes: &[f64],
    nus: &[f64],
    phases: &[f64],
    noise_std: f64,
    seed: u64,
    instants: &InstantSet,
) -> Vec<f64> {
    let mut out: Vec<f64> = instants
        .combined
        .iter()
        .map(|&t| {
            amplitudes
                .iter()
                .zip(nus)
                .zip(phases)
                .map(|((a, nu), phi)| a * (PI * nu * t as f64 + phi).cos())
                .sum()
        })
        .collect();
    if noise_std > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(instants.snapshot_index + 1);
        let normal = Normal::new(0.0, noise_std).expect("finite non-negative std");
        for x in &mut out {
            *x += normal.sample(&mut rng);
        }
    }
    out
}

/// Anything that can produce samples aligned with `instants.combined`.
pub trait SampleSource: Sync {
    fn samples(&self, instants: &InstantSet) -> Result<Vec<f64>>;
}

impl SampleSource for SignalSpec {
    fn samples(&self, instants: &InstantSet) -> Result<Vec<f64>> {
        generate_samples(self, instants)
    }
}

/// Samples of `spec` at `instants` (integer ticks of the virtual grid).
pub fn generate_samples(spec: &SignalSpec, instants: &InstantSet) -> Result<Vec<f64>> {
    spec.validate()?;
    let amps: Vec<f64> = spec.tones.iter().map(|t| t.amplitude).collect();
    let nus: Vec<f64> = spec.tones.iter().map(|t| t.nu).collect();
    Ok(render(
        &amps,
        &nus,
        &spec.phases(),
        spec.noise_std,
        spec.seed,
        instants,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HzTone {
    pub amplitude: f64,
    pub hz: f64,
}

/// Tones given in hertz against a Nyquist rate `f_s`.
///
/// Unlike [`SignalSpec`] there is no band limit: a tone above a scheme's
/// virtual Nyquist frequency is sampled as-is and aliases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalSignal {
    pub tones: Vec<HzTone>,
    pub sample_rate_hz: f64,
    #[serde(default)]
    pub noise_std: f64,
    #[serde(default)]
    pub seed: u64,
}

impl PhysicalSignal {
    pub fn unit_tones(hz: &[f64], sample_rate_hz: f64, seed: u64) -> Self {
        Self {
            tones: hz.iter().map(|&hz| HzTone { amplitude: 1.0, hz }).collect(),
            sample_rate_hz,
            noise_std: 0.0,
            seed,
        }
    }

    /// Normalized frequencies on a grid of denominator `q_grid`, unclamped.
    pub fn raw_nus(&self, q_grid: u64) -> Vec<f64> {
        self.tones
            .iter()
            .map(|t| t.hz / (q_grid as f64 * self.sample_rate_hz / 2.0))
            .collect()
    }

    /// The equivalent [`SignalSpec`] for a scheme, if every tone is
    /// representable on its grid. Phases and noise are preserved.
    pub fn to_spec(&self, kind: SchemeKind) -> Result<Option<SignalSpec>> {
        let mut tones = Vec::with_capacity(self.tones.len());
        for t in &self.tones {
            match map_frequency(t.hz, self.sample_rate_hz, kind)? {
                Some(nu) => tones.push(Tone::new(t.amplitude, nu)),
                None => return Ok(None),
            }
        }
        Ok(Some(SignalSpec {
            tones,
            noise_std: self.noise_std,
            seed: self.seed,
        }))
    }
}

impl SampleSource for PhysicalSignal {
    fn samples(&self, instants: &InstantSet) -> Result<Vec<f64>> {
        if !(self.sample_rate_hz > 0.0) {
            return Err(Error::NonPositiveInput(format!(
                "sample rate {}",
                self.sample_rate_hz
            )));
        }
        let amps: Vec<f64> = self.tones.iter().map(|t| t.amplitude).collect();
        Ok(render(
            &amps,
            &self.raw_nus(instants.grid_denominator()),
            &draw_phases(self.seed, self.tones.len()),
            self.noise_std,
            self.seed,
            instants,
        ))
    }
}

/// Grid denominator implied by a co-prime pair kind.
fn pair_grid_denominator(kind: SchemeKind) -> Result<u64> {
    match kind {
        SchemeKind::Prototype => Ok(1),
        SchemeKind::SuperNyquist => Ok(2),
        SchemeKind::MultiLevel => Err(Error::InvalidParameter(
            "multi-level grid depends on the level count; use map_frequency_on_grid".into(),
        )),
    }
}

/// `nu = f / (q_grid f_s / 2)`, or `None` when `nu > 1`.
pub fn map_frequency(f_hz: f64, f_s: f64, kind: SchemeKind) -> Result<Option<f64>> {
    map_frequency_on_grid(f_hz, f_s, pair_grid_denominator(kind)?)
}

pub fn map_frequency_on_grid(f_hz: f64, f_s: f64, q_grid: u64) -> Result<Option<f64>> {
    if !(f_hz > 0.0) {
        return Err(Error::NonPositiveInput(format!("frequency {f_hz}")));
    }
    if !(f_s > 0.0) {
        return Err(Error::NonPositiveInput(format!("sample rate {f_s}")));
    }
    let nu = f_hz / (q_grid as f64 * f_s / 2.0);
    Ok((nu <= 1.0).then_some(nu))
}

/// Analytic line spectrum: power `A^2 / 4` at the bin nearest each tone.
pub fn reference_spectrum(spec: &SignalSpec, grid_size: usize) -> Result<SpectrumEstimate> {
    spec.validate()?;
    let grid = FrequencyGrid::new(grid_size)?;
    let mut psd = vec![0.0; grid.len()];
    for t in &spec.tones {
        psd[grid.nearest_bin(t.nu)] += t.amplitude * t.amplitude / 4.0;
    }
    Ok(SpectrumEstimate {
        omega: grid.omegas(),
        psd,
        snapshots: 0,
        normalization: 1.0,
        config: None,
    })
}
