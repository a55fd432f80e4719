//! Experiment configuration.
//!
//! Configs are JSON objects whose keys mirror the CLI flags:
//!
//! ```json
//! {
//!   "scheme": "super-nyquist",
//!   "m": 4, "n": 3,
//!   "periods": 1,
//!   "tones": [{"amplitude": 1.0, "nu": 0.1}, {"amplitude": 1.0, "nu": 0.3}],
//!   "noise_std": 0.0,
//!   "seed": 1,
//!   "k": 10,
//!   "grid": 1024,
//!   "out": "out"
//! }
//! ```
//!
//! Multi-level schemes use `"levels": [2, 3, 5]` instead of `m`/`n`. A
//! config may instead name a `preset`, in which case only `out` may be set
//! alongside it.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use supernyquist_core::{make_scheme, SchemeConfig, SchemeKind, SignalSpec, Tone};

use crate::{CliError, Result};

pub const DEFAULT_K: u64 = 10;
pub const DEFAULT_GRID: usize = 1024;
pub const DEFAULT_OUT: &str = "out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig10,
    Table1,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
        Preset::Fig7,
        Preset::Fig8,
        Preset::Fig10,
        Preset::Table1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Fig8 => "fig8",
            Preset::Fig10 => "fig10",
            Preset::Table1 => "table1",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s.to_ascii_lowercase())
            .ok_or_else(|| CliError::InvalidConfig(format!("unknown preset `{s}`")))
    }
}

/// Raw experiment settings; unset keys take defaults at resolution time.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<SchemeKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periods: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tones: Option<Vec<Tone>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_std: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::InvalidConfig(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Layers `other` on top of `self`: keys set in `other` win.
    pub fn merged_with(&self, other: &ExperimentConfig) -> ExperimentConfig {
        macro_rules! pick {
            ($($field:ident),*) => {
                ExperimentConfig { $($field: other.$field.clone().or_else(|| self.$field.clone())),* }
            };
        }
        pick!(scheme, m, n, levels, periods, tones, noise_std, seed, k, grid, out, preset)
    }

    /// Presets fix every experiment key; only the output directory may
    /// accompany one.
    pub fn check_preset_exclusive(&self) -> Result<()> {
        if self.preset.is_none() {
            return Ok(());
        }
        let stripped = ExperimentConfig {
            out: None,
            preset: None,
            ..self.clone()
        };
        if stripped != ExperimentConfig::default() {
            return Err(CliError::InvalidConfig(format!(
                "preset `{}` cannot be combined with other settings: {}",
                self.preset.unwrap(),
                stripped.to_json()
            )));
        }
        Ok(())
    }

    pub fn scheme_config(&self) -> Result<SchemeConfig> {
        let kind = self.scheme.unwrap_or(SchemeKind::SuperNyquist);
        let periods = self.periods.unwrap_or(1);
        let params = match kind {
            SchemeKind::MultiLevel => {
                if self.m.is_some() || self.n.is_some() {
                    return Err(CliError::InvalidConfig(
                        "multi-level schemes take `levels`, not `m`/`n`".into(),
                    ));
                }
                self.levels.clone().ok_or_else(|| {
                    CliError::InvalidConfig("multi-level scheme needs `levels`".into())
                })?
            }
            _ => {
                if self.levels.is_some() {
                    return Err(CliError::InvalidConfig(format!(
                        "{kind} schemes take `m` and `n`, not `levels`"
                    )));
                }
                match (self.m, self.n) {
                    (Some(m), Some(n)) => vec![m, n],
                    _ => {
                        return Err(CliError::InvalidConfig(format!(
                            "{kind} scheme needs both `m` and `n`"
                        )))
                    }
                }
            }
        };
        Ok(make_scheme(kind, &params, periods)?)
    }

    pub fn signal(&self) -> SignalSpec {
        SignalSpec {
            tones: self.tones.clone().unwrap_or_default(),
            noise_std: self.noise_std.unwrap_or(0.0),
            seed: self.seed.unwrap_or(0),
        }
    }

    pub fn snapshots(&self) -> u64 {
        self.k.unwrap_or(DEFAULT_K)
    }

    pub fn grid_size(&self) -> usize {
        self.grid.unwrap_or(DEFAULT_GRID)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
    }
}

/// Parses `--tones`: comma-separated `nu` or `nu:amplitude` entries.
pub fn parse_tones(text: &str) -> Result<Vec<Tone>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (nu, amp) = match item.split_once(':') {
                Some((nu, amp)) => (nu, amp),
                None => (item, "1"),
            };
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::InvalidConfig(format!("bad tone `{item}`")))
            };
            Ok(Tone::new(parse(amp)?, parse(nu)?))
        })
        .collect()
}

/// Parses `--levels`: comma-separated positive integers.
pub fn parse_levels(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::InvalidConfig(format!("bad level `{s}`")))
        })
        .collect()
}
