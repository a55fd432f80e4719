//! Difference sets and the weight function `z(l)`.
//!
//! `z(l)` counts ordered instant pairs `(t_i, t_j)` within one snapshot
//! with `t_i - t_j = l`. [`weight_enumerated`] counts them directly and
//! works for every scheme; [`weight_closed`] assembles the super-Nyquist
//! weights from the self triangles at lags `2Mn`, `2Nm` and the cross
//! impulses at `+-(2Mn - 2Nm - 1)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::exec::Execution;
use crate::scheme::{sample_instants, InstantSet, SchemeConfig, SchemeKind};
use crate::{Error, Result};

/// How a [`LagTable`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMethod {
    Enumerated,
    ClosedForm,
}

/// Weight function on the integer lag grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagTable {
    weights: BTreeMap<i64, u64>,
    pub method: WeightMethod,
    pub config: Option<SchemeConfig>,
}

impl LagTable {
    /// Builds a table from raw weights; zero entries are dropped.
    pub fn from_weights(
        weights: impl IntoIterator<Item = (i64, u64)>,
        method: WeightMethod,
        config: Option<SchemeConfig>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (l, z) in weights {
            if z > 0 {
                *map.entry(l).or_insert(0) += z;
            }
        }
        Self {
            weights: map,
            method,
            config,
        }
    }

    /// `z(l)`, zero for holes and lags outside the support.
    pub fn get(&self, lag: i64) -> u64 {
        self.weights.get(&lag).copied().unwrap_or(0)
    }

    /// Lags with non-zero weight, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.weights.iter().map(|(&l, &z)| (l, z))
    }

    pub fn lags(&self) -> impl Iterator<Item = i64> + '_ {
        self.weights.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    /// Largest `|l|` with `z(l) > 0`.
    pub fn max_lag(&self) -> i64 {
        self.weights.keys().map(|l| l.abs()).max().unwrap_or(0)
    }

    /// `s = sum_l z(l)`.
    pub fn total_pairs(&self) -> u64 {
        self.weights.values().sum()
    }

    /// Lags in `[-L, L]` on the scheme's lag lattice with `z(l) = 0`.
    ///
    /// The lattice step is 1; for prototype and multi-level schemes every
    /// integer is a reachable lag in principle.
    pub fn holes(&self) -> Vec<i64> {
        let l = self.max_lag();
        (-l..=l).filter(|x| !self.weights.contains_key(x)).collect()
    }

    /// First lag violating `z(l) = z(-l)`, if any.
    pub fn asymmetry(&self) -> Option<(i64, u64, u64)> {
        self.weights
            .iter()
            .map(|(&l, &z)| (l, z, self.get(-l)))
            .find(|&(_, z, zn)| z != zn)
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry().is_none()
    }
}

/// The self and cross difference multisets of a single-period co-prime
/// scheme, as integer lags on the virtual grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceSets {
    /// `t_1 - t_2` over all ordered pairs of sampler 1 (`N^2` entries).
    pub self_m: Vec<i64>,
    /// Same for sampler 2 (`M^2` entries).
    pub self_n: Vec<i64>,
    /// Sampler-1 instant minus sampler-2 instant, over all `(n, m)`.
    pub cross_pos: Vec<i64>,
    pub cross_neg: Vec<i64>,
}

fn pairwise_differences(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = a
        .iter()
        .flat_map(|&x| b.iter().map(move |&y| x - y))
        .collect();
    out.sort_unstable();
    out
}

fn require_single_period_pair(config: &SchemeConfig, op: &'static str) -> Result<()> {
    if !config.kind().is_coprime_pair() {
        return Err(Error::UnsupportedScheme {
            op,
            kind: config.kind(),
        });
    }
    if config.periods() != 1 {
        return Err(Error::InvalidParameter(format!(
            "{op} is defined for a single period, got r = {}",
            config.periods()
        )));
    }
    Ok(())
}

pub fn difference_sets(config: &SchemeConfig) -> Result<DifferenceSets> {
    require_single_period_pair(config, "difference_sets")?;
    let s = sample_instants(config, 0);
    let (a, b) = (&s.per_sampler[0], &s.per_sampler[1]);
    let cross_pos = pairwise_differences(a, b);
    let mut cross_neg: Vec<i64> = cross_pos.iter().map(|l| -l).collect();
    cross_neg.sort_unstable();
    Ok(DifferenceSets {
        self_m: pairwise_differences(a, a),
        self_n: pairwise_differences(b, b),
        cross_pos,
        cross_neg,
    })
}

/// Exhaustive ordered-pair count over the combined instants.
pub fn weight_enumerated(instants: &InstantSet) -> LagTable {
    weight_enumerated_with(Execution::default(), instants)
}

pub fn weight_enumerated_with(exec: Execution, instants: &InstantSet) -> LagTable {
    let t = &instants.combined;
    let (lo, hi) = match (t.first(), t.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return LagTable::from_weights([], WeightMethod::Enumerated, instants.config.clone()),
    };
    // combined is sorted, so all lags fall in [-(hi - lo), hi - lo].
    let reach = hi - lo;
    let width = (2 * reach + 1) as usize;
    let hist = exec.fold_range(
        t.len(),
        || vec![0u64; width],
        |mut acc, i| {
            let ti = t[i];
            for &tj in t {
                acc[(ti - tj + reach) as usize] += 1;
            }
            acc
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    );
    LagTable::from_weights(
        hist.into_iter()
            .enumerate()
            .map(|(i, z)| (i as i64 - reach, z)),
        WeightMethod::Enumerated,
        instants.config.clone(),
    )
}

/// Closed-form super-Nyquist weights for any period count `r`.
pub fn weight_closed(config: &SchemeConfig) -> Result<LagTable> {
    if config.kind() != SchemeKind::SuperNyquist {
        return Err(Error::UnsupportedScheme {
            op: "weight_closed",
            kind: config.kind(),
        });
    }
    let r = config.periods() as i64;
    let (m, n) = (config.m() as i64, config.n() as i64);
    let mut z: BTreeMap<i64, u64> = BTreeMap::new();
    let mut deposit = |lag: i64, w: i64| *z.entry(lag).or_insert(0) += w as u64;

    // Sampler 1 self triangle: (rN - |k|) at lag 2Mk.
    for k in -(r * n - 1)..=(r * n - 1) {
        deposit(2 * m * k, r * n - k.abs());
    }
    // Sampler 2 self triangle: (rM - |k|) at lag 2Nk.
    for k in -(r * m - 1)..=(r * m - 1) {
        deposit(2 * n * k, r * m - k.abs());
    }
    // Cross impulses at |l| = |2Mi - 2Nj - 1|, one deposit on each side.
    for i in 0..r * n {
        for j in 0..r * m {
            let c = (2 * m * i - 2 * n * j - 1).abs();
            deposit(c, 1);
            deposit(-c, 1);
        }
    }
    Ok(LagTable::from_weights(
        z,
        WeightMethod::ClosedForm,
        Some(config.clone()),
    ))
}

/// Summary of the cross/self difference structure of a single-period
/// co-prime scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimReport {
    /// No cross lag (either sign) occurs among the self lags.
    pub claim1_holds: bool,
    /// Number of distinct values in `cross_pos`.
    pub claim2_distinct_count: usize,
    /// Prototype only: every lag in `L_C - L_S` has exactly two contributors.
    pub prototype_two_contributors: Option<bool>,
    /// Positive lags `l` with both `l` and `-l` present in `cross_pos`.
    pub paired_cross_values: Vec<(i64, i64)>,
}

impl ClaimReport {
    pub fn paired_count(&self) -> usize {
        self.paired_cross_values.len()
    }
}

pub fn verify_claims(config: &SchemeConfig) -> Result<ClaimReport> {
    let sets = difference_sets(config)?;
    let self_lags: BTreeSet<i64> = sets.self_m.iter().chain(&sets.self_n).copied().collect();
    let cross_pos: BTreeSet<i64> = sets.cross_pos.iter().copied().collect();
    let cross_all: BTreeSet<i64> = sets
        .cross_pos
        .iter()
        .chain(&sets.cross_neg)
        .copied()
        .collect();

    let claim1_holds = cross_all.is_disjoint(&self_lags);
    let paired_cross_values = cross_pos
        .iter()
        .filter(|&&l| l > 0 && cross_pos.contains(&-l))
        .map(|&l| (l, -l))
        .collect();

    let prototype_two_contributors = (config.kind() == SchemeKind::Prototype).then(|| {
        let z = weight_enumerated(&sample_instants(config, 0));
        cross_all.difference(&self_lags).all(|&l| z.get(l) == 2)
    });

    Ok(ClaimReport {
        claim1_holds,
        claim2_distinct_count: cross_pos.len(),
        prototype_two_contributors,
        paired_cross_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::gcd;
    use proptest::prelude::*;

    fn sn(m: u64, n: u64, r: u64) -> SchemeConfig {
        SchemeConfig::super_nyquist(m, n, r).unwrap()
    }

    #[test]
    fn set_sizes() {
        let d = difference_sets(&sn(4, 3, 1)).unwrap();
        assert_eq!(d.self_m.len(), 9);
        assert_eq!(d.self_n.len(), 16);
        assert_eq!(d.cross_pos.len(), 12);
        assert!(d.self_m.iter().chain(&d.self_n).all(|l| l % 2 == 0));
        assert!(d.cross_pos.iter().all(|l| l.rem_euclid(2) == 1));
    }

    #[test]
    fn sign_paired_cross_values() {
        let r = verify_claims(&sn(4, 3, 1)).unwrap();
        assert_eq!(r.paired_cross_values, vec![(1, -1), (3, -3), (7, -7)]);
        assert_eq!(verify_claims(&sn(5, 3, 1)).unwrap().paired_count(), 6);
        assert_eq!(verify_claims(&sn(3, 5, 1)).unwrap().paired_count(), 4);
        assert_eq!(verify_claims(&sn(3, 4, 1)).unwrap().paired_count(), 6);
    }

    #[test]
    fn claims() {
        let r = verify_claims(&sn(4, 3, 1)).unwrap();
        assert!(r.claim1_holds);
        assert_eq!(r.claim2_distinct_count, 12);
        assert_eq!(r.prototype_two_contributors, None);
        assert_eq!(
            verify_claims(&sn(3, 5, 1)).unwrap().claim2_distinct_count,
            15
        );

        let p = verify_claims(&SchemeConfig::prototype(4, 3, 1).unwrap()).unwrap();
        assert_eq!(p.prototype_two_contributors, Some(true));
        assert_eq!(p.claim2_distinct_count, 12);
        // Zeroth samples coincide, so lag 0 is both a self and a cross lag.
        assert!(!p.claim1_holds);
    }

    #[test]
    fn difference_sets_rejects_multi_level_and_multi_period() {
        let ml = SchemeConfig::multi_level(&[2, 3, 5], 1).unwrap();
        assert!(matches!(
            difference_sets(&ml),
            Err(Error::UnsupportedScheme { .. })
        ));
        assert!(difference_sets(&sn(4, 3, 2)).is_err());
    }

    #[test]
    fn enumerated_examples() {
        let z = weight_enumerated(&sample_instants(&sn(4, 3, 1), 0));
        assert_eq!(z.get(0), 7);
        assert_eq!(z.get(1), 2);
        assert_eq!(z.total_pairs(), 49);

        let single = weight_enumerated(&InstantSet::from_raw(vec![vec![0]]));
        assert_eq!(single.iter().collect::<Vec<_>>(), vec![(0, 1)]);

        let empty = weight_enumerated(&InstantSet::from_raw(vec![]));
        assert_eq!(empty.total_pairs(), 0);
    }

    #[test]
    fn prototype_cross_only_lags_have_two_contributors() {
        let c = SchemeConfig::prototype(4, 3, 1).unwrap();
        let d = difference_sets(&c).unwrap();
        let z = weight_enumerated(&sample_instants(&c, 0));
        let self_lags: BTreeSet<i64> = d.self_m.iter().chain(&d.self_n).copied().collect();
        let mut checked = 0;
        for &l in d.cross_pos.iter().chain(&d.cross_neg) {
            if !self_lags.contains(&l) {
                assert_eq!(z.get(l), 2, "lag {l}");
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn closed_form_examples() {
        let z = weight_closed(&sn(4, 3, 1)).unwrap();
        assert_eq!(z.get(1), 2);
        assert_eq!(z.method, WeightMethod::ClosedForm);
        assert_eq!(weight_closed(&sn(4, 3, 3)).unwrap().get(0), 21);
        assert!(matches!(
            weight_closed(&SchemeConfig::prototype(4, 3, 1).unwrap()),
            Err(Error::UnsupportedScheme { .. })
        ));
    }

    #[test]
    fn super_nyquist_has_holes() {
        let z = weight_enumerated(&sample_instants(&sn(4, 3, 1), 0));
        assert!(!z.holes().is_empty());
        assert!(z
            .holes()
            .iter()
            .all(|&l| z.get(l) == 0 && l.abs() <= z.max_lag()));
    }

    #[test]
    fn swap_changes_super_nyquist_but_not_prototype() {
        for (m, n) in [(4, 3), (5, 3), (7, 2)] {
            let a = weight_enumerated(&sample_instants(&sn(m, n, 1), 0));
            let b = weight_enumerated(&sample_instants(&sn(n, m, 1), 0));
            assert_ne!(a.weights, b.weights);

            let pa = SchemeConfig::prototype(m, n, 1).unwrap();
            let pb = SchemeConfig::prototype(n, m, 1).unwrap();
            assert_eq!(
                weight_enumerated(&sample_instants(&pa, 0)).weights,
                weight_enumerated(&sample_instants(&pb, 0)).weights
            );
        }
    }

    #[test]
    fn execution_policies_agree() {
        let c = SchemeConfig::multi_level(&[2, 3, 5, 7], 2).unwrap();
        let s = sample_instants(&c, 0);
        assert_eq!(
            weight_enumerated_with(Execution::Sequential, &s),
            weight_enumerated_with(Execution::Parallel, &s)
        );
    }

    fn coprime_pair(max: u64) -> impl Strategy<Value = (u64, u64)> {
        (1u64..=max, 1u64..=max).prop_filter("co-prime", |(m, n)| gcd(*m, *n) == 1)
    }

    proptest! {
        #[test]
        fn closed_form_matches_enumeration((m, n) in coprime_pair(12), r in 1u64..=4) {
            let c = sn(m, n, r);
            let closed = weight_closed(&c).unwrap();
            let enumerated = weight_enumerated(&sample_instants(&c, 0));
            prop_assert_eq!(closed.weights, enumerated.weights);
        }

        #[test]
        fn sum_rule_and_symmetry((m, n) in coprime_pair(12), r in 1u64..=4, proto in any::<bool>()) {
            let c = if proto {
                SchemeConfig::prototype(m, n, r).unwrap()
            } else {
                sn(m, n, r)
            };
            let z = weight_enumerated(&sample_instants(&c, 0));
            prop_assert_eq!(z.total_pairs(), (r * (m + n)).pow(2));
            prop_assert!(z.is_symmetric());
        }

        #[test]
        fn super_nyquist_claims((m, n) in coprime_pair(12).prop_filter("nontrivial", |(m, n)| *m > 1 && *n > 1)) {
            let rep = verify_claims(&sn(m, n, 1)).unwrap();
            prop_assert!(rep.claim1_holds);
            prop_assert_eq!(rep.claim2_distinct_count as u64, m * n);
        }
    }
}
