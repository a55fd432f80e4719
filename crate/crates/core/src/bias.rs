//! Correlogram bias window `W(e^{jw})`.
//!
//! The window is the transform of `z(l)` scaled by `1/s`, with
//! `s = sum_l z(l)` so that `W(0) = 1`. Because `z` is the ordered-pair
//! autocorrelation of the instant pattern, `s * W(w) = |A(w)|^2` with
//! `A(w) = sum_t exp(jwt)`, which also shows `W >= 0`.
//!
//! For super-Nyquist schemes with `r` periods the closed form is
//!
//! ```text
//! s W(w) = (sin wrMN / sin wM)^2 + (sin wrMN / sin wN)^2
//!        + 2 cos(w(M - N + 1)) sin^2(wrMN) / (sin wM sin wN)
//! ```
//!
//! with `w` in radians per half-grid tick.

use num_complex::Complex64;

use crate::diffset::LagTable;
use crate::exec::Execution;
use crate::grid::FrequencyGrid;
use crate::scheme::{sample_instants, SchemeConfig, SchemeKind};
use crate::{Error, Result};

/// Window values on a [`FrequencyGrid`] over `[0, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasWindow {
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
    pub normalization: f64,
    pub config: Option<SchemeConfig>,
}

impl BiasWindow {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn omega_over_pi(&self) -> impl Iterator<Item = f64> + '_ {
        self.omega.iter().map(|w| w / std::f64::consts::PI)
    }
}

/// Closed-form super-Nyquist window on a `grid_size`-point grid.
pub fn bias_closed(config: &SchemeConfig, grid_size: usize) -> Result<BiasWindow> {
    bias_closed_with(Execution::default(), config, grid_size)
}

pub fn bias_closed_with(
    exec: Execution,
    config: &SchemeConfig,
    grid_size: usize,
) -> Result<BiasWindow> {
    require_super_nyquist(config, "bias_closed")?;
    let grid = FrequencyGrid::new(grid_size)?;
    let s = config.normalization();
    let (m, n) = (config.m() as i64, config.n() as i64);
    let rmn = config.periods() as i64 * m * n;
    let instants = sample_instants(config, 0).combined;

    let values = exec.map_range(grid.len(), |k| {
        let sin_m = grid.sin(k, m);
        let sin_n = grid.sin(k, n);
        if sin_m == 0.0 || sin_n == 0.0 {
            // Removable singularity: exact zero detected in integer phase.
            return pattern_power(&grid, k, &instants) / s;
        }
        let sin_rmn = grid.sin(k, rmn);
        let cross = 2.0 * grid.cos(k, m - n + 1);
        closed_form_terms(sin_m, sin_n, sin_rmn, cross) / s
    });

    Ok(BiasWindow {
        omega: grid.omegas(),
        values,
        normalization: s,
        config: Some(config.clone()),
    })
}

/// Closed-form window at an arbitrary `omega` (radians per grid tick).
///
/// Points where `sin wM` or `sin wN` underflow are evaluated through the
/// pattern factorization instead.
pub fn bias_closed_at(config: &SchemeConfig, omega: f64) -> Result<f64> {
    require_super_nyquist(config, "bias_closed_at")?;
    let s = config.normalization();
    let (m, n) = (config.m() as f64, config.n() as f64);
    let rmn = config.periods() as f64 * m * n;
    let sin_m = (omega * m).sin();
    let sin_n = (omega * n).sin();
    const SINGULAR: f64 = 1e-12;
    if sin_m.abs() < SINGULAR || sin_n.abs() < SINGULAR {
        let a: Complex64 = sample_instants(config, 0)
            .combined
            .iter()
            .map(|&t| Complex64::from_polar(1.0, omega * t as f64))
            .sum();
        return Ok(a.norm_sqr() / s);
    }
    let cross = 2.0 * (omega * (m - n + 1.0)).cos();
    Ok(closed_form_terms(sin_m, sin_n, (omega * rmn).sin(), cross) / s)
}

fn closed_form_terms(sin_m: f64, sin_n: f64, sin_rmn: f64, two_cos: f64) -> f64 {
    let a = sin_rmn / sin_m;
    let b = sin_rmn / sin_n;
    a * a + b * b + two_cos * sin_rmn * sin_rmn / (sin_m * sin_n)
}

fn require_super_nyquist(config: &SchemeConfig, op: &'static str) -> Result<()> {
    if config.kind() != SchemeKind::SuperNyquist {
        return Err(Error::UnsupportedScheme {
            op,
            kind: config.kind(),
        });
    }
    Ok(())
}

/// `|sum_t exp(j w_k t)|^2` over the given instants.
pub(crate) fn pattern_power(grid: &FrequencyGrid, k: usize, instants: &[i64]) -> f64 {
    instants
        .iter()
        .map(|&t| grid.phasor(k, t))
        .sum::<Complex64>()
        .norm_sqr()
}

/// `|A(w)|^2 / s` on the grid, for any scheme.
pub fn bias_from_pattern(config: &SchemeConfig, grid_size: usize) -> Result<BiasWindow> {
    let grid = FrequencyGrid::new(grid_size)?;
    let s = config.normalization();
    let instants = sample_instants(config, 0).combined;
    let values =
        Execution::default().map_range(grid.len(), |k| pattern_power(&grid, k, &instants) / s);
    Ok(BiasWindow {
        omega: grid.omegas(),
        values,
        normalization: s,
        config: Some(config.clone()),
    })
}

/// Transform of a symmetric weight table, `W(w) = (1/s) sum_l z(l) cos(wl)`.
pub fn bias_from_weights(lags: &LagTable, grid_size: usize, s: f64) -> Result<BiasWindow> {
    bias_from_weights_with(Execution::default(), lags, grid_size, s)
}

pub fn bias_from_weights_with(
    exec: Execution,
    lags: &LagTable,
    grid_size: usize,
    s: f64,
) -> Result<BiasWindow> {
    if let Some((lag, pos, neg)) = lags.asymmetry() {
        return Err(Error::AsymmetricLagTable { lag, pos, neg });
    }
    if !(s > 0.0) {
        return Err(Error::NonPositiveInput(format!("normalization s = {s}")));
    }
    let grid = FrequencyGrid::new(grid_size)?;
    // Fold +-l together: z(0) + 2 sum_{l>0} z(l) cos(wl).
    let folded: Vec<(i64, f64)> = lags
        .iter()
        .filter(|&(l, _)| l >= 0)
        .map(|(l, z)| (l, if l == 0 { z as f64 } else { 2.0 * z as f64 }))
        .collect();
    let values = exec.map_range(grid.len(), |k| {
        folded.iter().map(|&(l, w)| w * grid.cos(k, l)).sum::<f64>() / s
    });
    Ok(BiasWindow {
        omega: grid.omegas(),
        values,
        normalization: s,
        config: lags.config.clone(),
    })
}

/// First-null main-lobe width `2 w* / pi`, where `w*` is the first local
/// minimum of the window moving up from `w = 0`.
pub fn main_lobe_width(window: &BiasWindow) -> Result<f64> {
    let v = &window.values;
    for k in 1..v.len().saturating_sub(1) {
        if v[k] <= v[k - 1] && v[k] < v[k + 1] {
            return Ok(2.0 * window.omega[k] / std::f64::consts::PI);
        }
    }
    Err(Error::NoMinimumFound)
}
