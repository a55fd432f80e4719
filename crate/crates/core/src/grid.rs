//! Uniform frequency grid on `[0, pi]` with exact phase reduction.
//!
//! Grid point `k` sits at `omega_k = pi * k / (G - 1)`. Because instants
//! and lags are integers, every phase `omega_k * t` is a rational multiple
//! of `pi`; it is reduced modulo `2 pi` in integer arithmetic before any
//! trigonometry, which keeps `sin`/`cos` accurate near their zeros and
//! lets exact zeros be detected without a floating-point threshold.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Default number of grid points over `[0, pi]`.
pub const DEFAULT_GRID_SIZE: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrequencyGrid {
    size: usize,
}

impl FrequencyGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid size must be at least 2, got {size}"
            )));
        }
        Ok(Self { size })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spacing denominator: `omega_k = pi * k / denominator`.
    pub fn denominator(&self) -> u64 {
        self.size as u64 - 1
    }

    pub fn omega(&self, k: usize) -> f64 {
        PI * k as f64 / self.denominator() as f64
    }

    pub fn omega_over_pi(&self, k: usize) -> f64 {
        k as f64 / self.denominator() as f64
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.size).map(|k| self.omega(k)).collect()
    }

    /// Index of the grid point nearest to `nu * pi`.
    pub fn nearest_bin(&self, nu: f64) -> usize {
        let k = (nu * self.denominator() as f64).round();
        k.clamp(0.0, self.denominator() as f64) as usize
    }

    /// `sin(omega_k * t)`, exactly zero when the phase is a multiple of `pi`.
    pub fn sin(&self, k: usize, t: i64) -> f64 {
        sin_pi_ratio(k as i128 * t as i128, self.denominator() as i128)
    }

    /// `cos(omega_k * t)`.
    pub fn cos(&self, k: usize, t: i64) -> f64 {
        // cos(x) = sin(x + pi/2); shift the numerator by den/2 in doubled units.
        let den = self.denominator() as i128;
        sin_pi_ratio(2 * k as i128 * t as i128 + den, 2 * den)
    }

    /// `exp(j * omega_k * t)`.
    pub fn phasor(&self, k: usize, t: i64) -> Complex64 {
        Complex64::new(self.cos(k, t), self.sin(k, t))
    }
}

/// `sin(pi * num / den)` for `den > 0`, with the argument folded into
/// `[0, pi/2]` in integer arithmetic first.
pub(crate) fn sin_pi_ratio(num: i128, den: i128) -> f64 {
    debug_assert!(den > 0);
    let period = 2 * den;
    let mut p = num.rem_euclid(period);
    let mut sign = 1.0;
    if p >= den {
        p -= den;
        sign = -1.0;
    }
    if 2 * p > den {
        p = den - p;
    }
    if p == 0 {
        return 0.0;
    }
    sign * (PI * (p as f64 / den as f64)).sin()
}
