//! Sampling-scheme descriptors and sampling instants.
//!
//! Every scheme is a set of uniform sub-samplers. On the virtual grid of
//! step `d / q_grid` sub-sampler `i` fires at `spacing_i * n + offset_i`
//! for `n in 0..count_i`:
//!
//! | kind         | q_grid | spacing        | count      | offset |
//! |--------------|--------|----------------|------------|--------|
//! | Prototype    | 1      | `M`, `N`       | `rN`, `rM` | 0, 0   |
//! | SuperNyquist | 2      | `2M`, `2N`     | `rN`, `rM` | 0, 1   |
//! | MultiLevel   | q      | `q * M_i`      | `r * N_i`  | `i`    |
//!
//! with `M_i` the product of all levels except `N_i`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    Prototype,
    SuperNyquist,
    MultiLevel,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Prototype => "prototype",
            SchemeKind::SuperNyquist => "super-nyquist",
            SchemeKind::MultiLevel => "multi-level",
        }
    }

    pub fn is_coprime_pair(self) -> bool {
        !matches!(self, SchemeKind::MultiLevel)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "prototype" | "proto" => Ok(SchemeKind::Prototype),
            "super-nyquist" | "supernyquist" | "sn" => Ok(SchemeKind::SuperNyquist),
            "multi-level" | "multilevel" | "ml" => Ok(SchemeKind::MultiLevel),
            other => Err(Error::InvalidParameter(format!("unknown scheme `{other}`"))),
        }
    }
}

/// A validated sampling scheme. Construct with [`make_scheme`] or the
/// kind-specific constructors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemeConfig {
    kind: SchemeKind,
    /// `M`; zero for multi-level schemes.
    m: u64,
    /// `N`; zero for multi-level schemes.
    n: u64,
    /// Pairwise co-prime levels `N_i`; empty for co-prime pair schemes.
    levels: Vec<u64>,
    periods: u64,
    grid_denominator: u64,
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn check_positive(name: &str, v: u64) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidParameter(format!("{name} must be positive")));
    }
    Ok(())
}

fn check_periods(r: u64) -> Result<()> {
    if r < 1 {
        return Err(Error::InvalidPeriods(r));
    }
    Ok(())
}

impl SchemeConfig {
    pub fn prototype(m: u64, n: u64, periods: u64) -> Result<Self> {
        Self::pair(SchemeKind::Prototype, m, n, periods)
    }

    pub fn super_nyquist(m: u64, n: u64, periods: u64) -> Result<Self> {
        Self::pair(SchemeKind::SuperNyquist, m, n, periods)
    }

    fn pair(kind: SchemeKind, m: u64, n: u64, periods: u64) -> Result<Self> {
        check_positive("M", m)?;
        check_positive("N", n)?;
        check_periods(periods)?;
        let g = gcd(m, n);
        if g != 1 {
            return Err(Error::NotCoprime(m, n, g));
        }
        let grid_denominator = match kind {
            SchemeKind::Prototype => 1,
            _ => 2,
        };
        Ok(Self {
            kind,
            m,
            n,
            levels: Vec::new(),
            periods,
            grid_denominator,
        })
    }

    pub fn multi_level(levels: &[u64], periods: u64) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::TooFewLevels(levels.len()));
        }
        for &l in levels {
            check_positive("level", l)?;
        }
        check_periods(periods)?;
        for (i, &a) in levels.iter().enumerate() {
            for &b in &levels[i + 1..] {
                let g = gcd(a, b);
                if g != 1 {
                    return Err(Error::NotCoprime(a, b, g));
                }
            }
        }
        Ok(Self {
            kind: SchemeKind::MultiLevel,
            m: 0,
            n: 0,
            levels: levels.to_vec(),
            periods,
            grid_denominator: levels.len() as u64,
        })
    }

    /// Same scheme with a different period count.
    pub fn with_periods(&self, periods: u64) -> Result<Self> {
        match self.kind {
            SchemeKind::MultiLevel => Self::multi_level(&self.levels, periods),
            kind => Self::pair(kind, self.m, self.n, periods),
        }
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn levels(&self) -> &[u64] {
        &self.levels
    }

    pub fn periods(&self) -> u64 {
        self.periods
    }

    /// `q_grid`: the virtual grid step is `d / q_grid`.
    pub fn grid_denominator(&self) -> u64 {
        self.grid_denominator
    }

    /// Multi-level period `P`, the product of all levels; `M * N` for pairs.
    pub fn base_period(&self) -> u64 {
        match self.kind {
            SchemeKind::MultiLevel => self.levels.iter().product(),
            _ => self.m * self.n,
        }
    }

    /// Multi-level inter-element spacings `M_i` in units of `d`.
    pub fn level_spacings(&self) -> Vec<u64> {
        let p = self.base_period();
        self.levels.iter().map(|&l| p / l).collect()
    }

    /// Virtual-grid ticks per snapshot.
    pub fn snapshot_span(&self) -> i64 {
        (self.periods * self.base_period() * self.grid_denominator) as i64
    }

    /// Per sub-sampler `(spacing, count, offset)` on the virtual grid.
    pub fn sub_samplers(&self) -> Vec<(i64, u64, i64)> {
        let r = self.periods;
        let q = self.grid_denominator as i64;
        match self.kind {
            SchemeKind::Prototype => vec![
                (self.m as i64, r * self.n, 0),
                (self.n as i64, r * self.m, 0),
            ],
            SchemeKind::SuperNyquist => vec![
                (2 * self.m as i64, r * self.n, 0),
                (2 * self.n as i64, r * self.m, 1),
            ],
            SchemeKind::MultiLevel => self
                .level_spacings()
                .into_iter()
                .zip(&self.levels)
                .enumerate()
                .map(|(i, (mi, &ni))| (q * mi as i64, r * ni, i as i64))
                .collect(),
        }
    }

    /// Total instants per snapshot: `r(M + N)` or `r * sum(N_i)`.
    pub fn instants_per_snapshot(&self) -> usize {
        self.sub_samplers().iter().map(|s| s.1 as usize).sum()
    }

    /// Correlogram normalization `s`, the number of ordered instant pairs
    /// per snapshot.
    pub fn normalization(&self) -> f64 {
        let n = self.instants_per_snapshot() as f64;
        n * n
    }
}

impl fmt::Display for SchemeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SchemeKind::MultiLevel => {
                let levels: Vec<String> = self.levels.iter().map(u64::to_string).collect();
                write!(
                    f,
                    "{} levels={} r={}",
                    self.kind,
                    levels.join("/"),
                    self.periods
                )
            }
            kind => write!(f, "{} M={} N={} r={}", kind, self.m, self.n, self.periods),
        }
    }
}

/// Builds a validated scheme. `params` is `[M, N]` for co-prime pairs and
/// the level list for multi-level schemes.
pub fn make_scheme(kind: SchemeKind, params: &[u64], periods: u64) -> Result<SchemeConfig> {
    match kind {
        SchemeKind::MultiLevel => SchemeConfig::multi_level(params, periods),
        _ => match params {
            [m, n] => SchemeConfig::pair(kind, *m, *n, periods),
            _ => Err(Error::InvalidParameter(format!(
                "{kind} needs exactly two parameters (M, N), got {}",
                params.len()
            ))),
        },
    }
}

/// Sampling instants of one snapshot, in units of `d / q_grid`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstantSet {
    pub per_sampler: Vec<Vec<i64>>,
    /// All instants merged and sorted; coinciding instants appear once per
    /// sub-sampler.
    pub combined: Vec<i64>,
    pub snapshot_index: u64,
    pub snapshot_span: i64,
    /// `None` for hand-built sets.
    pub config: Option<SchemeConfig>,
}

impl InstantSet {
    /// Wraps explicit instants as a single snapshot with no scheme attached.
    pub fn from_raw(per_sampler: Vec<Vec<i64>>) -> Self {
        let mut per_sampler = per_sampler;
        for s in &mut per_sampler {
            s.sort_unstable();
        }
        let mut combined: Vec<i64> = per_sampler.iter().flatten().copied().collect();
        combined.sort_unstable();
        let span = match (combined.first(), combined.last()) {
            (Some(a), Some(b)) => b - a + 1,
            _ => 0,
        };
        Self {
            per_sampler,
            combined,
            snapshot_index: 0,
            snapshot_span: span,
            config: None,
        }
    }

    /// First tick of this snapshot.
    pub fn snapshot_start(&self) -> i64 {
        self.snapshot_index as i64 * self.snapshot_span
    }

    pub fn len(&self) -> usize {
        self.combined.len()
    }

    pub fn is_empty(&self) -> bool {
        self.combined.is_empty()
    }

    /// Grid denominator of the attached scheme, 1 for raw sets.
    pub fn grid_denominator(&self) -> u64 {
        self.config
            .as_ref()
            .map_or(1, SchemeConfig::grid_denominator)
    }
}

/// Instants of snapshot `snapshot_index`: snapshot 0 shifted by
/// `snapshot_index * snapshot_span`.
pub fn sample_instants(config: &SchemeConfig, snapshot_index: u64) -> InstantSet {
    let span = config.snapshot_span();
    let start = snapshot_index as i64 * span;
    let per_sampler: Vec<Vec<i64>> = config
        .sub_samplers()
        .into_iter()
        .map(|(spacing, count, offset)| {
            (0..count as i64)
                .map(|n| start + spacing * n + offset)
                .collect()
        })
        .collect();
    let mut combined: Vec<i64> = per_sampler.iter().flatten().copied().collect();
    combined.sort_unstable();
    InstantSet {
        per_sampler,
        combined,
        snapshot_index,
        snapshot_span: span,
        config: Some(config.clone()),
    }
}
