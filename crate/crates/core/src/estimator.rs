//! Coarray correlogram PSD estimation.
//!
//! Each snapshot contributes the lag products `x_i x_j` of its own
//! instants; differences are never formed across snapshots. The estimate
//!
//! ```text
//! P(w) = 1/(K s) sum_k | sum_i x_{k,i} exp(-j w t_{k,i}) |^2
//! ```
//!
//! equals `1/(K s) sum_l S(l) cos(wl)` with `S(l)` the accumulated lag
//! products, so it is non-negative and its expectation is the true
//! spectrum convolved with the bias window.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::diffset::LagTable;
use crate::exec::Execution;
use crate::grid::FrequencyGrid;
use crate::scheme::{sample_instants, InstantSet, SchemeConfig};
use crate::signal::SampleSource;
use crate::{Error, Result};

/// Power spectral density on a [`FrequencyGrid`] over `[0, pi]` of the
/// scheme's virtual grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    pub omega: Vec<f64>,
    pub psd: Vec<f64>,
    /// Number of snapshots `K` averaged; zero for reference spectra.
    pub snapshots: u64,
    pub normalization: f64,
    pub config: Option<SchemeConfig>,
}

impl SpectrumEstimate {
    pub fn len(&self) -> usize {
        self.psd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psd.is_empty()
    }

    pub fn omega_over_pi(&self, k: usize) -> f64 {
        self.omega[k] / std::f64::consts::PI
    }
}

/// Running sums of lag products over snapshots.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LagAccumulator {
    pub sums: BTreeMap<i64, f64>,
    pub snapshots_seen: u64,
}

/// Lag sums of one snapshot. Non-negative lags are accumulated and then
/// mirrored so `S(l) = S(-l)` holds bit-for-bit.
fn snapshot_lag_sums(instants: &InstantSet, samples: &[f64]) -> Result<BTreeMap<i64, f64>> {
    if samples.len() != instants.len() {
        return Err(Error::LengthMismatch {
            expected: instants.len(),
            got: samples.len(),
        });
    }
    let t = &instants.combined;
    let mut sums = BTreeMap::new();
    for (&ti, &xi) in t.iter().zip(samples) {
        for (&tj, &xj) in t.iter().zip(samples) {
            let lag = ti - tj;
            if lag >= 0 {
                *sums.entry(lag).or_insert(0.0) += xi * xj;
            }
        }
    }
    let positive: Vec<(i64, f64)> = sums.range(1..).map(|(&l, &v)| (l, v)).collect();
    for (l, v) in positive {
        sums.insert(-l, v);
    }
    Ok(sums)
}

impl LagAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `x_i x_j` to `S(t_i - t_j)` for every ordered pair of the
    /// snapshot's instants.
    pub fn accumulate_snapshot(&mut self, instants: &InstantSet, samples: &[f64]) -> Result<()> {
        let snap = snapshot_lag_sums(instants, samples)?;
        self.merge_snapshot(snap);
        Ok(())
    }

    fn merge_snapshot(&mut self, snap: BTreeMap<i64, f64>) {
        for (l, v) in snap {
            *self.sums.entry(l).or_insert(0.0) += v;
        }
        self.snapshots_seen += 1;
    }

    /// Accumulates snapshots `0..k` of `source` sampled by `config`.
    pub fn from_snapshots<S: SampleSource>(
        config: &SchemeConfig,
        source: &S,
        k: u64,
    ) -> Result<Self> {
        Self::from_snapshots_with(Execution::default(), config, source, k)
    }

    pub fn from_snapshots_with<S: SampleSource>(
        exec: Execution,
        config: &SchemeConfig,
        source: &S,
        k: u64,
    ) -> Result<Self> {
        let per_snapshot = exec.map_range(k as usize, |idx| {
            let instants = sample_instants(config, idx as u64);
            let x = source.samples(&instants)?;
            snapshot_lag_sums(&instants, &x)
        });
        // Snapshot order fixes the reduction order.
        let mut acc = Self::new();
        for snap in per_snapshot {
            acc.merge_snapshot(snap?);
        }
        Ok(acc)
    }

    pub fn get(&self, lag: i64) -> f64 {
        self.sums.get(&lag).copied().unwrap_or(0.0)
    }
}

/// `r(l) = S(l) / (K z(l))` at every lag with `z(l) > 0`; holes are absent.
pub fn autocorrelation_estimate(
    acc: &LagAccumulator,
    lags: &LagTable,
) -> Result<BTreeMap<i64, f64>> {
    if acc.snapshots_seen == 0 {
        return Err(Error::InvalidParameter(
            "autocorrelation needs at least one snapshot".into(),
        ));
    }
    let k = acc.snapshots_seen as f64;
    Ok(lags
        .iter()
        .map(|(l, z)| (l, acc.get(l) / (k * z as f64)))
        .collect())
}

/// Correlogram estimate over `k` snapshots, evaluated as the average
/// squared magnitude of each snapshot's transform.
pub fn correlogram_psd<S: SampleSource>(
    config: &SchemeConfig,
    source: &S,
    k: u64,
    grid_size: usize,
) -> Result<SpectrumEstimate> {
    correlogram_psd_with(Execution::default(), config, source, k, grid_size)
}

pub fn correlogram_psd_with<S: SampleSource>(
    exec: Execution,
    config: &SchemeConfig,
    source: &S,
    k: u64,
    grid_size: usize,
) -> Result<SpectrumEstimate> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "snapshot count K must be positive".into(),
        ));
    }
    let grid = FrequencyGrid::new(grid_size)?;
    let s = config.normalization();

    let per_snapshot = exec.map_range(k as usize, |idx| -> Result<Vec<f64>> {
        let instants = sample_instants(config, idx as u64);
        let x = source.samples(&instants)?;
        let start = instants.snapshot_start();
        let rebased: Vec<(i64, f64)> = instants
            .combined
            .iter()
            .map(|&t| t - start)
            .zip(x)
            .collect();
        Ok(exec.map_range(grid.len(), |g| {
            rebased
                .iter()
                .map(|&(t, x)| grid.phasor(g, t).conj() * x)
                .sum::<Complex64>()
                .norm_sqr()
        }))
    });

    let mut psd = vec![0.0; grid.len()];
    for snap in per_snapshot {
        for (p, v) in psd.iter_mut().zip(snap?) {
            *p += v;
        }
    }
    let scale = 1.0 / (k as f64 * s);
    psd.iter_mut().for_each(|p| *p *= scale);

    Ok(SpectrumEstimate {
        omega: grid.omegas(),
        psd,
        snapshots: k,
        normalization: s,
        config: Some(config.clone()),
    })
}

/// Correlogram estimate from accumulated lag sums,
/// `1/(K s) sum_l S(l) cos(wl)`.
pub fn psd_from_lag_sums(
    acc: &LagAccumulator,
    grid_size: usize,
    s: f64,
) -> Result<SpectrumEstimate> {
    psd_from_lag_sums_with(Execution::default(), acc, grid_size, s)
}

pub fn psd_from_lag_sums_with(
    exec: Execution,
    acc: &LagAccumulator,
    grid_size: usize,
    s: f64,
) -> Result<SpectrumEstimate> {
    if acc.snapshots_seen == 0 {
        return Err(Error::InvalidParameter("no snapshots accumulated".into()));
    }
    let grid = FrequencyGrid::new(grid_size)?;
    let folded: Vec<(i64, f64)> = acc
        .sums
        .range(0..)
        .map(|(&l, &v)| (l, if l == 0 { v } else { 2.0 * v }))
        .collect();
    let scale = 1.0 / (acc.snapshots_seen as f64 * s);
    let psd = exec.map_range(grid.len(), |g| {
        folded.iter().map(|&(l, v)| v * grid.cos(g, l)).sum::<f64>() * scale
    });
    Ok(SpectrumEstimate {
        omega: grid.omegas(),
        psd,
        snapshots: acc.snapshots_seen,
        normalization: s,
        config: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub bin: usize,
    pub omega_over_pi: f64,
    pub power: f64,
}

/// Up to `count` strict interior local maxima, strongest first; equal
/// powers keep ascending frequency order.
pub fn find_peaks(spectrum: &SpectrumEstimate, count: usize) -> Vec<Peak> {
    let p = &spectrum.psd;
    let mut peaks: Vec<Peak> = (1..p.len().saturating_sub(1))
        .filter(|&k| p[k] > p[k - 1] && p[k] > p[k + 1])
        .map(|k| Peak {
            bin: k,
            omega_over_pi: spectrum.omega_over_pi(k),
            power: p[k],
        })
        .collect();
    peaks.sort_by(|a, b| b.power.total_cmp(&a.power));
    peaks.truncate(count);
    peaks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bias::bias_from_weights;
    use crate::diffset::weight_enumerated;
    use crate::signal::SignalSpec;

    struct Constant(f64);

    impl SampleSource for Constant {
        fn samples(&self, instants: &InstantSet) -> Result<Vec<f64>> {
            Ok(vec![self.0; instants.len()])
        }
    }

    fn spectrum(psd: Vec<f64>) -> SpectrumEstimate {
        let grid = FrequencyGrid::new(psd.len()).unwrap();
        SpectrumEstimate {
            omega: grid.omegas(),
            psd,
            snapshots: 1,
            normalization: 1.0,
            config: None,
        }
    }

    #[test]
    fn single_instant() {
        let mut acc = LagAccumulator::new();
        acc.accumulate_snapshot(&InstantSet::from_raw(vec![vec![0]]), &[3.0])
            .unwrap();
        assert_eq!(acc.sums, BTreeMap::from([(0, 9.0)]));
        assert_eq!(acc.snapshots_seen, 1);
    }

    #[test]
    fn length_mismatch() {
        let mut acc = LagAccumulator::new();
        let err = acc
            .accumulate_snapshot(&InstantSet::from_raw(vec![vec![0, 1]]), &[1.0])
            .unwrap_err();
        assert_eq!(
            err,
            Error::LengthMismatch {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn constant_signal_reproduces_weights() {
        for c in [
            SchemeConfig::super_nyquist(4, 3, 1).unwrap(),
            SchemeConfig::prototype(4, 3, 2).unwrap(),
        ] {
            let z = weight_enumerated(&sample_instants(&c, 0));
            let one = LagAccumulator::from_snapshots(&c, &Constant(1.0), 1).unwrap();
            let two = LagAccumulator::from_snapshots(&c, &Constant(1.0), 2).unwrap();
            assert_eq!(one.sums.len(), z.support_len());
            for (l, w) in z.iter() {
                assert_eq!(one.get(l), w as f64);
                assert_eq!(two.get(l), 2.0 * w as f64);
            }
            let r = autocorrelation_estimate(&two, &z).unwrap();
            assert!(r.values().all(|&v| v == 1.0));
        }
    }

    #[test]
    fn zero_lag_is_mean_power() {
        let c = SchemeConfig::super_nyquist(5, 3, 1).unwrap();
        let spec = SignalSpec::unit_tones(&[0.27, 0.61], 5);
        let acc = LagAccumulator::from_snapshots(&c, &spec, 3).unwrap();
        let z = weight_enumerated(&sample_instants(&c, 0));
        let r = autocorrelation_estimate(&acc, &z).unwrap();
        let mut power = 0.0;
        let mut count = 0;
        for k in 0..3 {
            let x = spec.samples(&sample_instants(&c, k)).unwrap();
            power += x.iter().map(|v| v * v).sum::<f64>();
            count += x.len();
        }
        assert!((r[&0] - power / count as f64).abs() < 1e-12);
    }

    #[test]
    fn autocorrelation_requires_a_snapshot() {
        let z = weight_enumerated(&InstantSet::from_raw(vec![vec![0]]));
        assert!(autocorrelation_estimate(&LagAccumulator::new(), &z).is_err());
    }

    #[test]
    fn zero_signal_gives_zero_spectrum() {
        let c = SchemeConfig::super_nyquist(4, 3, 1).unwrap();
        let p = correlogram_psd(&c, &Constant(0.0), 4, 256).unwrap();
        assert!(p.psd.iter().all(|&v| v == 0.0));
        assert!(correlogram_psd(&c, &Constant(0.0), 0, 256).is_err());
    }

    #[test]
    fn constant_signal_gives_bias_window() {
        let c = SchemeConfig::super_nyquist(4, 3, 2).unwrap();
        let p = correlogram_psd(&c, &Constant(1.0), 3, 1024).unwrap();
        let z = weight_enumerated(&sample_instants(&c, 0));
        let w = bias_from_weights(&z, 1024, c.normalization()).unwrap();
        for (a, b) in p.psd.iter().zip(&w.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn both_paths_agree() {
        let c = SchemeConfig::super_nyquist(4, 3, 1).unwrap();
        let spec = SignalSpec::unit_tones(&[0.1, 0.3, 0.6], 11);
        let direct = correlogram_psd(&c, &spec, 10, 1024).unwrap();
        let acc = LagAccumulator::from_snapshots(&c, &spec, 10).unwrap();
        let lag = psd_from_lag_sums(&acc, 1024, c.normalization()).unwrap();
        let scale = direct.psd.iter().cloned().fold(0.0, f64::max);
        for (a, b) in direct.psd.iter().zip(&lag.psd) {
            assert!((a - b).abs() / scale < 1e-10);
        }
    }

    #[test]
    fn execution_policies_agree() {
        let c = SchemeConfig::multi_level(&[2, 3, 5], 1).unwrap();
        let spec = SignalSpec {
            noise_std: 0.3,
            ..SignalSpec::unit_tones(&[0.2, 0.45], 1)
        };
        let a = correlogram_psd_with(Execution::Sequential, &c, &spec, 6, 512).unwrap();
        let b = correlogram_psd_with(Execution::Parallel, &c, &spec, 6, 512).unwrap();
        assert_eq!(a, b);
        let a = LagAccumulator::from_snapshots_with(Execution::Sequential, &c, &spec, 6).unwrap();
        let b = LagAccumulator::from_snapshots_with(Execution::Parallel, &c, &spec, 6).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn peaks_on_monotone_spectrum() {
        let s = spectrum((0..32).map(|k| k as f64).collect());
        assert!(find_peaks(&s, 3).is_empty());
    }

    #[test]
    fn equal_peaks_keep_frequency_order() {
        let s = spectrum(vec![0.0, 1.0, 0.0, 2.0, 0.0, 1.0, 0.0]);
        let p = find_peaks(&s, 5);
        let bins: Vec<usize> = p.iter().map(|p| p.bin).collect();
        assert_eq!(bins, vec![3, 1, 5]);
        assert_eq!(find_peaks(&s, 1).len(), 1);
    }

    #[test]
    fn lag_sums_are_symmetric() {
        let c = SchemeConfig::prototype(5, 3, 2).unwrap();
        let spec = SignalSpec {
            noise_std: 1.0,
            ..SignalSpec::unit_tones(&[0.33], 8)
        };
        let acc = LagAccumulator::from_snapshots(&c, &spec, 4).unwrap();
        for (&l, &v) in &acc.sums {
            assert_eq!(v.to_bits(), acc.get(-l).to_bits());
        }
    }
}
