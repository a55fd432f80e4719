//! Sparse co-prime and multi-level sampling toolkit.
//!
//! Sampling instants, lags and frequencies all live on an integer virtual
//! grid of step `d / q_grid`, where `d` is the Nyquist period. The modules
//! build on each other bottom-up:
//!
//! - [`scheme`]: scheme descriptors and sampling instants per snapshot.
//! - [`diffset`]: difference sets and the weight function `z(l)`, both by
//!   enumeration and in closed form.
//! - [`bias`]: the correlogram bias window, closed form and via the
//!   transform of `z(l)`, plus main-lobe measurement.
//! - [`signal`]: seeded multi-tone test signals.
//! - [`estimator`]: the coarray correlogram PSD estimate and peak picking.
//!
//! Heavy loops run on rayon when the `parallel` feature is enabled (the
//! default); see [`exec::Execution`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bias;
pub mod diffset;
mod error;
pub mod estimator;
pub mod exec;
pub mod grid;
pub mod scheme;
pub mod signal;

pub use bias::{
    bias_closed, bias_closed_at, bias_from_pattern, bias_from_weights, main_lobe_width, BiasWindow,
};
pub use diffset::{
    difference_sets, verify_claims, weight_closed, weight_enumerated, ClaimReport, DifferenceSets,
    LagTable, WeightMethod,
};
pub use error::{Error, Result};
pub use estimator::{
    autocorrelation_estimate, correlogram_psd, find_peaks, LagAccumulator, Peak, SpectrumEstimate,
};
pub use exec::Execution;
pub use grid::FrequencyGrid;
pub use scheme::{make_scheme, sample_instants, InstantSet, SchemeConfig, SchemeKind};
pub use signal::{
    generate_samples, map_frequency, reference_spectrum, PhysicalSignal, SampleSource, SignalSpec,
    Tone,
};
