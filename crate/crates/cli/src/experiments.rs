//! Experiment runners and figure presets.

use std::path::{Path, PathBuf};

use supernyquist_core::bias::{bias_closed, bias_from_weights, main_lobe_width, BiasWindow};
use supernyquist_core::diffset::{
    difference_sets, verify_claims, weight_closed, weight_enumerated, ClaimReport, DifferenceSets,
    LagTable,
};
use supernyquist_core::estimator::{correlogram_psd, find_peaks, Peak, SpectrumEstimate};
use supernyquist_core::signal::{map_frequency, PhysicalSignal, SampleSource};
use supernyquist_core::{sample_instants, SchemeConfig, SchemeKind};

use crate::config::{ExperimentConfig, Preset};
use crate::output::{fmt_num, write_file, Csv};
use crate::svg::{line_plot, Scale, Series};
use crate::Result;

/// Files written by a run plus human-readable summary lines.
#[derive(Debug, Default, Clone)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

impl Report {
    fn extend(&mut self, other: Report) {
        self.files.extend(other.files);
        self.summary.extend(other.summary);
    }
}

pub const PRESET_SEED: u64 = 1;
pub const PRESET_SAMPLE_RATE_HZ: f64 = 500.0;
pub const PRESET_SPECTRUM_GRID: usize = 1024;
pub const PRESET_BIAS_GRID: usize = 4096;
pub const PRESET_K: u64 = 10;
/// The (M, N) pairs compared across the weight and bias figures.
pub const FIGURE_PAIRS: [(u64, u64); 4] = [(4, 3), (3, 4), (5, 3), (3, 5)];
/// Frequencies of the hertz-to-normalized table.
pub const TABLE1_HZ: [f64; 6] = [50.0, 150.0, 250.0, 300.0, 450.0, 500.0];

/// Filename tag identifying a scheme, e.g. `super-nyquist_m4_n3_r1`.
pub fn scheme_tag(config: &SchemeConfig) -> String {
    match config.kind() {
        SchemeKind::MultiLevel => {
            let levels: Vec<String> = config.levels().iter().map(u64::to_string).collect();
            format!("multi-level_{}_r{}", levels.join("-"), config.periods())
        }
        kind => format!(
            "{}_m{}_n{}_r{}",
            kind,
            config.m(),
            config.n(),
            config.periods()
        ),
    }
}

/// Header for config-driven runs: full config and effective seed.
fn run_comments(
    context: &str,
    config: &SchemeConfig,
    cfg: &ExperimentConfig,
) -> Vec<(&'static str, String)> {
    comments(
        context,
        config,
        &[
            ("config", cfg.to_json()),
            ("seed", cfg.signal().seed.to_string()),
        ],
    )
}

fn comments(
    context: &str,
    config: &SchemeConfig,
    extra: &[(&'static str, String)],
) -> Vec<(&'static str, String)> {
    let mut c = vec![
        ("experiment", context.to_string()),
        ("scheme", config.to_string()),
        ("grid_step", format!("d/{}", config.grid_denominator())),
    ];
    c.extend(extra.iter().cloned());
    c
}

pub fn weight_csv(table: &LagTable, comments: &[(&str, String)]) -> Csv {
    let mut all = comments.to_vec();
    all.push(("method", format!("{:?}", table.method)));
    all.push(("total_pairs", table.total_pairs().to_string()));
    all.push(("max_lag", table.max_lag().to_string()));
    let mut csv = Csv::new(&all, &["lag", "weight"]);
    for (l, z) in table.iter() {
        csv.row(&[l.to_string(), z.to_string()]);
    }
    csv
}

pub fn bias_csv(window: &BiasWindow, comments: &[(&str, String)]) -> Csv {
    let mut all = comments.to_vec();
    all.push(("normalization", fmt_num(window.normalization)));
    let mut csv = Csv::new(&all, &["omega_over_pi", "window_value"]);
    for (w, v) in window.omega_over_pi().zip(&window.values) {
        csv.row(&[fmt_num(w), fmt_num(*v)]);
    }
    csv
}

pub fn spectrum_csv(est: &SpectrumEstimate, comments: &[(&str, String)]) -> Csv {
    let mut all = comments.to_vec();
    all.push(("snapshots", est.snapshots.to_string()));
    all.push(("normalization", fmt_num(est.normalization)));
    let mut csv = Csv::new(&all, &["omega_over_pi", "psd"]);
    for k in 0..est.len() {
        csv.row(&[fmt_num(est.omega_over_pi(k)), fmt_num(est.psd[k])]);
    }
    csv
}

pub fn peaks_csv(peaks: &[Peak], comments: &[(&str, String)]) -> Csv {
    let mut csv = Csv::new(comments, &["rank", "bin", "omega_over_pi", "power"]);
    for (i, p) in peaks.iter().enumerate() {
        csv.row(&[
            (i + 1).to_string(),
            p.bin.to_string(),
            fmt_num(p.omega_over_pi),
            fmt_num(p.power),
        ]);
    }
    csv
}

pub fn claims_csv(report: &ClaimReport, comments: &[(&str, String)]) -> Csv {
    let mut csv = Csv::new(comments, &["key", "value"]);
    let paired: Vec<String> = report
        .paired_cross_values
        .iter()
        .map(|(a, b)| format!("{a}/{b}"))
        .collect();
    csv.row(&["claim1_holds".to_string(), report.claim1_holds.to_string()]);
    csv.row(&[
        "claim2_distinct_count".to_string(),
        report.claim2_distinct_count.to_string(),
    ]);
    csv.row(&[
        "prototype_two_contributors".to_string(),
        report
            .prototype_two_contributors
            .map_or("n/a".to_string(), |b| b.to_string()),
    ]);
    csv.row(&["paired_cross_count".to_string(), paired.len().to_string()]);
    csv.row(&["paired_cross_values".to_string(), paired.join(" ")]);
    csv
}

pub fn difference_sets_csv(sets: &DifferenceSets, comments: &[(&str, String)]) -> Csv {
    let mut csv = Csv::new(comments, &["set", "lag"]);
    for (name, lags) in [
        ("self_m", &sets.self_m),
        ("self_n", &sets.self_n),
        ("cross_pos", &sets.cross_pos),
        ("cross_neg", &sets.cross_neg),
    ] {
        for l in lags {
            csv.row(&[name.to_string(), l.to_string()]);
        }
    }
    csv
}

/// Hertz-to-normalized mapping for both co-prime kinds at `f_s`.
pub fn table1_csv(f_s: f64) -> Result<Csv> {
    let mut csv = Csv::new(
        &[
            ("experiment", "table1".into()),
            ("sample_rate_hz", fmt_num(f_s)),
        ],
        &["hz", "super_nyquist", "prototype"],
    );
    for hz in TABLE1_HZ {
        let cell = |kind| -> Result<String> {
            Ok(map_frequency(hz, f_s, kind)?.map_or("-".to_string(), fmt_num))
        };
        csv.row(&[
            fmt_num(hz),
            cell(SchemeKind::SuperNyquist)?,
            cell(SchemeKind::Prototype)?,
        ]);
    }
    Ok(csv)
}

fn write_plot(
    dir: &Path,
    stem: &str,
    title: &str,
    x_label: &str,
    series: &[Series],
    report: &mut Report,
) -> Result<()> {
    report.files.push(write_file(
        dir,
        &format!("{stem}.svg"),
        &line_plot(title, x_label, series, Scale::Linear),
    )?);
    report.files.push(write_file(
        dir,
        &format!("{stem}_db.svg"),
        &line_plot(&format!("{title} (dB)"), x_label, series, Scale::Decibel),
    )?);
    Ok(())
}

fn window_series(label: String, w: &BiasWindow) -> Series {
    Series {
        label,
        points: w.omega_over_pi().zip(w.values.iter().copied()).collect(),
    }
}

fn spectrum_series(label: String, est: &SpectrumEstimate) -> Series {
    Series {
        label,
        points: (0..est.len())
            .map(|k| (est.omega_over_pi(k), est.psd[k]))
            .collect(),
    }
}

fn enumerated(config: &SchemeConfig) -> LagTable {
    weight_enumerated(&sample_instants(config, 0))
}

/// Bias window from enumerated weights, normalized to unit DC gain.
fn window_from_weights(config: &SchemeConfig, grid: usize) -> Result<BiasWindow> {
    let z = enumerated(config);
    Ok(bias_from_weights(&z, grid, z.total_pairs() as f64)?)
}

// ---- single-scheme runners -------------------------------------------------

pub fn run_diffset(cfg: &ExperimentConfig) -> Result<Report> {
    let config = cfg.scheme_config()?;
    let dir = cfg.out_dir();
    let tag = scheme_tag(&config);
    let head = run_comments("diffset", &config, cfg);
    let sets = difference_sets(&config)?;
    let claims = verify_claims(&config)?;
    let mut report = Report::default();
    report
        .files
        .push(difference_sets_csv(&sets, &head).write(&dir, &format!("diffset_{tag}.csv"))?);
    report
        .files
        .push(claims_csv(&claims, &head).write(&dir, &format!("claims_{tag}.csv"))?);
    report.summary.push(format!(
        "{config}: claim1_holds={} distinct_cross={} paired_cross={} prototype_two_contributors={}",
        claims.claim1_holds,
        claims.claim2_distinct_count,
        claims.paired_count(),
        claims
            .prototype_two_contributors
            .map_or("n/a".to_string(), |b| b.to_string())
    ));
    Ok(report)
}

pub fn run_weight(cfg: &ExperimentConfig) -> Result<Report> {
    let config = cfg.scheme_config()?;
    let dir = cfg.out_dir();
    let tag = scheme_tag(&config);
    let head = run_comments("weight", &config, cfg);
    let z = enumerated(&config);
    let mut report = Report::default();
    report
        .files
        .push(weight_csv(&z, &head).write(&dir, &format!("weight_{tag}.csv"))?);
    if config.kind() == SchemeKind::SuperNyquist {
        let closed = weight_closed(&config)?;
        report
            .files
            .push(weight_csv(&closed, &head).write(&dir, &format!("weight_closed_{tag}.csv"))?);
        report.summary.push(format!(
            "{config}: closed form {} enumeration",
            if closed.iter().eq(z.iter()) {
                "matches"
            } else {
                "DIFFERS FROM"
            }
        ));
    }
    report.summary.push(format!(
        "{config}: support={} max_lag={} total_pairs={} holes={}",
        z.support_len(),
        z.max_lag(),
        z.total_pairs(),
        z.holes().len()
    ));
    Ok(report)
}

pub fn run_bias(cfg: &ExperimentConfig) -> Result<Report> {
    let config = cfg.scheme_config()?;
    let grid = cfg.grid.unwrap_or(PRESET_BIAS_GRID);
    let dir = cfg.out_dir();
    let tag = scheme_tag(&config);
    let head = run_comments("bias", &config, cfg);
    let mut report = Report::default();
    let from_weights = window_from_weights(&config, grid)?;
    report
        .files
        .push(bias_csv(&from_weights, &head).write(&dir, &format!("bias_{tag}.csv"))?);
    let mut series = vec![window_series("from weights".into(), &from_weights)];
    if config.kind() == SchemeKind::SuperNyquist {
        let closed = bias_closed(&config, grid)?;
        let diff = closed
            .values
            .iter()
            .zip(&from_weights.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        report
            .files
            .push(bias_csv(&closed, &head).write(&dir, &format!("bias_closed_{tag}.csv"))?);
        report
            .summary
            .push(format!("{config}: max |closed - transform| = {diff:.3e}"));
        series.push(window_series("closed form".into(), &closed));
    }
    match main_lobe_width(&from_weights) {
        Ok(w) => report
            .summary
            .push(format!("{config}: first-null main-lobe width = {w:.6} pi")),
        Err(e) => report
            .summary
            .push(format!("{config}: main-lobe width unavailable ({e})")),
    }
    write_plot(
        &dir,
        &format!("bias_{tag}"),
        &config.to_string(),
        "omega / pi",
        &series,
        &mut report,
    )?;
    Ok(report)
}

pub fn run_spectrum(cfg: &ExperimentConfig) -> Result<Report> {
    let config = cfg.scheme_config()?;
    let signal = cfg.signal();
    let k = cfg.snapshots();
    let dir = cfg.out_dir();
    let tag = scheme_tag(&config);
    let head = run_comments("spectrum", &config, cfg);
    let est = correlogram_psd(&config, &signal, k, cfg.grid_size())?;
    let peaks = find_peaks(&est, signal.tones.len().max(1));
    let mut report = Report::default();
    report
        .files
        .push(spectrum_csv(&est, &head).write(&dir, &format!("spectrum_{tag}_k{k}.csv"))?);
    report
        .files
        .push(peaks_csv(&peaks, &head).write(&dir, &format!("peaks_{tag}_k{k}.csv"))?);
    write_plot(
        &dir,
        &format!("spectrum_{tag}_k{k}"),
        &format!("{config}, K={k}"),
        "normalized frequency",
        &[spectrum_series(format!("K={k}"), &est)],
        &mut report,
    )?;
    for p in &peaks {
        report.summary.push(format!(
            "{config}: peak at {:.4} pi (bin {}), power {:.6}",
            p.omega_over_pi, p.bin, p.power
        ));
    }
    Ok(report)
}

/// Runs a config: a preset if one is named, otherwise weights, bias,
/// claims (single-period co-prime pairs) and a spectrum (when tones are
/// given) for the configured scheme.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.check_preset_exclusive()?;
    if let Some(preset) = cfg.preset {
        return run_preset(preset, &cfg.out_dir());
    }
    let config = cfg.scheme_config()?;
    let mut report = run_weight(cfg)?;
    report.extend(run_bias(cfg)?);
    if config.kind().is_coprime_pair() && config.periods() == 1 {
        report.extend(run_diffset(cfg)?);
    }
    if cfg.tones.as_ref().is_some_and(|t| !t.is_empty()) {
        report.extend(run_spectrum(cfg)?);
    }
    Ok(report)
}

// ---- presets ---------------------------------------------------------------

pub fn run_preset(preset: Preset, out: &Path) -> Result<Report> {
    let dir = out.join(preset.name());
    match preset {
        Preset::Fig3 => preset_fig3(&dir),
        Preset::Fig4 => preset_fig4(&dir),
        Preset::Fig5 => preset_spectra(&dir, preset, &[50.0, 150.0], &[(4, 3)], &[2, 4, 10]),
        Preset::Fig6 => preset_spectra(&dir, preset, &[50.0, 150.0, 300.0], &[(4, 3)], &[PRESET_K]),
        Preset::Fig7 => preset_spectra(
            &dir,
            preset,
            &[50.0, 150.0, 300.0],
            &[(3, 4), (3, 5), (5, 3)],
            &[PRESET_K],
        ),
        Preset::Fig8 => preset_spectra(
            &dir,
            preset,
            &[50.0, 150.0, 300.0, 450.0],
            &[(4, 3)],
            &[PRESET_K],
        ),
        Preset::Fig10 => preset_fig10(&dir),
        Preset::Table1 => {
            let csv = table1_csv(PRESET_SAMPLE_RATE_HZ)?;
            let mut report = Report::default();
            report.files.push(csv.write(&dir, "table1.csv")?);
            report
                .summary
                .extend(csv.body().lines().map(str::to_string));
            Ok(report)
        }
    }
}

fn preset_comments(preset: Preset, config: &SchemeConfig) -> Vec<(&'static str, String)> {
    comments(
        preset.name(),
        config,
        &[
            ("preset", preset.name().to_string()),
            ("seed", PRESET_SEED.to_string()),
        ],
    )
}

fn preset_fig3(dir: &Path) -> Result<Report> {
    let mut report = Report::default();
    let mut series = Vec::new();
    for (m, n) in FIGURE_PAIRS {
        let config = SchemeConfig::prototype(m, n, 1)?;
        let tag = scheme_tag(&config);
        let head = preset_comments(Preset::Fig3, &config);
        let z = enumerated(&config);
        report
            .files
            .push(weight_csv(&z, &head).write(dir, &format!("weight_{tag}.csv"))?);
        let claims = verify_claims(&config)?;
        report
            .files
            .push(claims_csv(&claims, &head).write(dir, &format!("claims_{tag}.csv"))?);
        series.push(Series {
            label: format!("({m},{n})"),
            points: z.iter().map(|(l, w)| (l as f64, w as f64)).collect(),
        });
    }
    report.files.push(write_file(
        dir,
        "weights_prototype.svg",
        &line_plot(
            "prototype weight functions",
            "lag (d)",
            &series,
            Scale::Linear,
        ),
    )?);
    Ok(report)
}

fn preset_fig4(dir: &Path) -> Result<Report> {
    let mut report = Report::default();
    for (m, n) in FIGURE_PAIRS {
        let sn = SchemeConfig::super_nyquist(m, n, 1)?;
        let proto = SchemeConfig::prototype(m, n, 1)?;
        let sn_head = preset_comments(Preset::Fig4, &sn);
        let proto_head = preset_comments(Preset::Fig4, &proto);

        let z = weight_closed(&sn)?;
        report
            .files
            .push(weight_csv(&z, &sn_head).write(dir, &format!("weight_{}.csv", scheme_tag(&sn)))?);

        let w_sn = bias_closed(&sn, PRESET_BIAS_GRID)?;
        let w_proto = window_from_weights(&proto, PRESET_BIAS_GRID)?;
        report
            .files
            .push(bias_csv(&w_sn, &sn_head).write(dir, &format!("bias_{}.csv", scheme_tag(&sn)))?);
        report.files.push(
            bias_csv(&w_proto, &proto_head)
                .write(dir, &format!("bias_{}.csv", scheme_tag(&proto)))?,
        );

        let ratio = main_lobe_width(&w_sn)? / main_lobe_width(&w_proto)?;
        report.summary.push(format!(
            "(M,N)=({m},{n}): main-lobe width ratio super-nyquist/prototype = {ratio:.4}"
        ));
        write_plot(
            dir,
            &format!("bias_m{m}_n{n}"),
            &format!("normalized bias, (M,N)=({m},{n})"),
            "normalized frequency",
            &[
                window_series("super-Nyquist".into(), &w_sn),
                window_series("prototype".into(), &w_proto),
            ],
            &mut report,
        )?;
    }
    Ok(report)
}

fn preset_fig10(dir: &Path) -> Result<Report> {
    let mut report = Report::default();
    let mut series = Vec::new();
    for r in 1..=4 {
        let config = SchemeConfig::super_nyquist(4, 3, r)?;
        let w = bias_closed(&config, PRESET_BIAS_GRID)?;
        let head = preset_comments(Preset::Fig10, &config);
        report
            .files
            .push(bias_csv(&w, &head).write(dir, &format!("bias_{}.csv", scheme_tag(&config)))?);
        report.summary.push(format!(
            "r={r}: first-null main-lobe width = {:.6} pi",
            main_lobe_width(&w)?
        ));
        series.push(window_series(format!("r={r}"), &w));
    }
    write_plot(
        dir,
        "bias_multi_period",
        "super-Nyquist (4,3), r = 1..4",
        "normalized frequency",
        &series,
        &mut report,
    )?;
    Ok(report)
}

fn preset_spectra(
    dir: &Path,
    preset: Preset,
    hz: &[f64],
    pairs: &[(u64, u64)],
    ks: &[u64],
) -> Result<Report> {
    let mut report = Report::default();
    let signal = PhysicalSignal::unit_tones(hz, PRESET_SAMPLE_RATE_HZ, PRESET_SEED);
    for &(m, n) in pairs {
        for kind in [SchemeKind::SuperNyquist, SchemeKind::Prototype] {
            let config = supernyquist_core::make_scheme(kind, &[m, n], 1)?;
            let tag = scheme_tag(&config);
            let nus = signal.raw_nus(config.grid_denominator());
            let mut head = preset_comments(preset, &config);
            head.push((
                "tones_hz",
                hz.iter().map(|&f| fmt_num(f)).collect::<Vec<_>>().join(" "),
            ));
            head.push(("sample_rate_hz", fmt_num(PRESET_SAMPLE_RATE_HZ)));
            head.push((
                "tones_nu",
                nus.iter()
                    .map(|&v| fmt_num(v))
                    .collect::<Vec<_>>()
                    .join(" "),
            ));
            let mut series = Vec::new();
            for &k in ks {
                let est = spectrum(&config, &signal, k)?;
                let peaks = find_peaks(&est, hz.len());
                report.files.push(
                    spectrum_csv(&est, &head).write(dir, &format!("spectrum_{tag}_k{k}.csv"))?,
                );
                report
                    .files
                    .push(peaks_csv(&peaks, &head).write(dir, &format!("peaks_{tag}_k{k}.csv"))?);
                let locs: Vec<String> = peaks
                    .iter()
                    .map(|p| format!("{:.4}", p.omega_over_pi))
                    .collect();
                report
                    .summary
                    .push(format!("{config} K={k}: peaks at [{}] pi", locs.join(", ")));
                series.push(spectrum_series(format!("K={k}"), &est));
            }
            write_plot(
                dir,
                &format!("spectrum_{tag}"),
                &format!("{config}"),
                "normalized frequency",
                &series,
                &mut report,
            )?;
        }
    }
    Ok(report)
}

fn spectrum<S: SampleSource>(
    config: &SchemeConfig,
    signal: &S,
    k: u64,
) -> Result<SpectrumEstimate> {
    Ok(correlogram_psd(config, signal, k, PRESET_SPECTRUM_GRID)?)
}
