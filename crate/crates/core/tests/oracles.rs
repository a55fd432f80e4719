//! Cross-checks against oracles that share no code path with the kernels:
//! plain floating-point transforms, phase quadrature, long periodograms.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use supernyquist_core::bias::bias_closed_at;
use supernyquist_core::estimator::psd_from_lag_sums;
use supernyquist_core::grid::FrequencyGrid;
use supernyquist_core::*;

/// `|sum_t exp(j w t)|^2`, straight floating point.
fn pattern_power(instants: &[i64], omega: f64) -> f64 {
    instants
        .iter()
        .map(|&t| Complex64::from_polar(1.0, omega * t as f64))
        .sum::<Complex64>()
        .norm_sqr()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn coprime_pair(max: u64) -> impl Strategy<Value = (u64, u64)> {
    (2u64..=max, 2u64..=max).prop_filter("co-prime", |(m, n)| gcd(*m, *n) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn window_factorizes_through_instant_pattern((m, n) in coprime_pair(9), r in 1u64..=4) {
        let c = SchemeConfig::super_nyquist(m, n, r).unwrap();
        let instants = sample_instants(&c, 0).combined;
        let w = bias_closed(&c, 4096).unwrap();
        let s = c.normalization();
        for (k, (&omega, &v)) in w.omega.iter().zip(&w.values).enumerate().step_by(7) {
            let direct = pattern_power(&instants, omega) / s;
            prop_assert!((v - direct).abs() < 1e-9, "k={} {} vs {}", k, v, direct);
        }
    }

    #[test]
    fn correlogram_is_non_negative(
        (m, n) in coprime_pair(7),
        proto in any::<bool>(),
        nus in prop::collection::vec(0.01f64..0.99, 1..4),
        noise in 0.0f64..1.0,
        seed in any::<u64>(),
        k in 1u64..6,
    ) {
        let c = if proto {
            SchemeConfig::prototype(m, n, 1).unwrap()
        } else {
            SchemeConfig::super_nyquist(m, n, 1).unwrap()
        };
        let spec = SignalSpec { noise_std: noise, ..SignalSpec::unit_tones(&nus, seed) };
        let p = correlogram_psd(&c, &spec, k, 256).unwrap();
        let floor = -1e-12 * p.psd.iter().cloned().fold(1.0, f64::max);
        prop_assert!(p.psd.iter().all(|&v| v >= floor));
    }
}

#[test]
fn closed_window_is_continuous_at_removable_singularities() {
    for (m, n) in [(4, 3), (3, 4), (5, 3), (3, 5)] {
        for r in 1..=4 {
            let c = SchemeConfig::super_nyquist(m, n, r).unwrap();
            let w = bias_closed(&c, 4096).unwrap();
            let grid = FrequencyGrid::new(4096).unwrap();
            let mut singular = 0;
            for k in 0..grid.len() {
                if grid.sin(k, m as i64) != 0.0 && grid.sin(k, n as i64) != 0.0 {
                    continue;
                }
                singular += 1;
                for delta in [-1e-7, 1e-7] {
                    let omega = grid.omega(k) + delta;
                    if !(0.0..=PI).contains(&omega) {
                        continue;
                    }
                    let near = bias_closed_at(&c, omega).unwrap();
                    assert!(
                        (near - w.values[k]).abs() < 1e-4,
                        "{c} k={k}: {near} vs {}",
                        w.values[k]
                    );
                }
            }
            assert!(singular >= 2, "{c}: expected singular grid points");
        }
    }
}

#[test]
fn closed_window_at_arbitrary_frequency_matches_pattern() {
    let c = SchemeConfig::super_nyquist(5, 3, 2).unwrap();
    let instants = sample_instants(&c, 0).combined;
    for omega in [1e-6, 0.013, 0.5, PI / 3.0, PI / 5.0, 1.9, 3.0] {
        let expect = pattern_power(&instants, omega) / c.normalization();
        assert!(
            (bias_closed_at(&c, omega).unwrap() - expect).abs() < 1e-8,
            "omega {omega}"
        );
    }
}

#[test]
fn dc_limit_is_unity() {
    let c = SchemeConfig::super_nyquist(4, 3, 1).unwrap();
    assert!((bias_closed_at(&c, 1e-6).unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn reference_line_power_matches_long_periodogram() {
    // x_t = 2 cos(pi t / 2 + phi) sampled at the Nyquist rate.
    let len = 4096usize;
    let phi = 0.7;
    let omega = 0.5 * PI;
    let x: Vec<f64> = (0..len)
        .map(|t| 2.0 * (omega * t as f64 + phi).cos())
        .collect();
    let spectrum: Complex64 = x
        .iter()
        .enumerate()
        .map(|(t, &v)| v * Complex64::from_polar(1.0, -omega * t as f64))
        .sum();
    let line_power = spectrum.norm_sqr() / (len * len) as f64;

    let spec = SignalSpec {
        tones: vec![Tone::new(2.0, 0.5)],
        noise_std: 0.0,
        seed: 0,
    };
    let reference = reference_spectrum(&spec, 1025).unwrap();
    assert!((reference.psd[512] - line_power).abs() < 1e-9);
}

#[test]
fn autocorrelation_converges_to_phase_averaged_cosine() {
    let nu = 0.37;
    let c = SchemeConfig::super_nyquist(4, 3, 1).unwrap();
    let k = 4000;
    let spec = SignalSpec::unit_tones(&[nu], 17);
    let acc = LagAccumulator::from_snapshots(&c, &spec, k).unwrap();
    let z = weight_enumerated(&sample_instants(&c, 0));
    let r = autocorrelation_estimate(&acc, &z).unwrap();

    // Oracle: E_phi[cos(a + phi) cos(b + phi)] by quadrature over 10^4 phases.
    let phases: Vec<f64> = (0..10_000)
        .map(|j| 2.0 * PI * j as f64 / 10_000.0)
        .collect();
    let tol = 3.0 / (k as f64).sqrt();
    for (&lag, &estimate) in &r {
        let a = PI * nu * lag as f64;
        let oracle =
            phases.iter().map(|p| (a + p).cos() * p.cos()).sum::<f64>() / phases.len() as f64;
        assert!((oracle - 0.5 * a.cos()).abs() < 1e-9);
        assert!(
            (estimate - oracle).abs() < tol,
            "lag {lag}: {estimate} vs {oracle}"
        );
    }
    // Holes never show up.
    assert!(r.keys().all(|&l| z.get(l) > 0));
    assert_eq!(r.len(), z.support_len());
}

#[test]
fn estimate_equals_window_convolution_when_cross_terms_cancel() {
    // For tones at 0.1 and 0.3 on the half grid with K = 10 every cross term
    // rotates by a multiple of 2 pi / 5 per snapshot and cancels, so the
    // estimate is exactly sum_p (A^2/4) [W(w - w_p) + W(w + w_p)].
    let c = SchemeConfig::super_nyquist(4, 3, 1).unwrap();
    let instants = sample_instants(&c, 0).combined;
    let s = c.normalization();
    let nus = [0.1, 0.3];
    let grid = FrequencyGrid::new(1024).unwrap();
    for seed in [0, 1, 99] {
        let est = correlogram_psd(&c, &SignalSpec::unit_tones(&nus, seed), 10, 1024).unwrap();
        for k in 0..grid.len() {
            let w = grid.omega(k);
            let model: f64 = nus
                .iter()
                .map(|nu| {
                    0.25 * (pattern_power(&instants, w - PI * nu)
                        + pattern_power(&instants, w + PI * nu))
                        / s
                })
                .sum();
            assert!((est.psd[k] - model).abs() < 1e-10, "seed {seed} k {k}");
        }
    }
}

#[test]
fn peak_bins_do_not_depend_on_seed() {
    for kind in [SchemeKind::SuperNyquist, SchemeKind::Prototype] {
        let c = make_scheme(kind, &[4, 3], 1).unwrap();
        let signal = PhysicalSignal::unit_tones(&[50.0, 150.0], 500.0, 0);
        let bins = |seed| {
            let sig = PhysicalSignal {
                seed,
                ..signal.clone()
            };
            let mut b: Vec<usize> = find_peaks(&correlogram_psd(&c, &sig, 10, 1024).unwrap(), 2)
                .iter()
                .map(|p| p.bin)
                .collect();
            b.sort_unstable();
            b
        };
        let base = bins(0);
        for seed in 1..10 {
            let other = bins(seed);
            for (a, b) in base.iter().zip(&other) {
                assert!(
                    a.abs_diff(*b) <= 1,
                    "{kind} seed {seed}: {base:?} vs {other:?}"
                );
            }
        }
    }
}

#[test]
fn quadratic_and_lag_paths_agree_for_multi_level() {
    let c = SchemeConfig::multi_level(&[2, 3, 5], 2).unwrap();
    let spec = SignalSpec {
        noise_std: 0.2,
        ..SignalSpec::unit_tones(&[0.15, 0.52, 0.8], 4)
    };
    let direct = correlogram_psd(&c, &spec, 7, 2048).unwrap();
    let acc = LagAccumulator::from_snapshots(&c, &spec, 7).unwrap();
    let lag = psd_from_lag_sums(&acc, 2048, c.normalization()).unwrap();
    let scale = direct.psd.iter().cloned().fold(0.0, f64::max);
    for (a, b) in direct.psd.iter().zip(&lag.psd) {
        assert!((a - b).abs() <= 1e-8 * scale);
    }
}
