use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::ShiftOperator;
use crate::orbit::simulate_orbit;
use crate::scalar::Rational;
use crate::spaces::{SpaceKind, SpaceSpec, SparseVector};
use crate::weights::{backward_liminf, symbolic_sup_bound, AnchoredLimit, IndexDomain, RangeKind, SupBound, WeightSpec};
use crate::witnesses::ExactWitness;

/// Orbit values at or above this level in the second half of the horizon
/// count as not vanishing.
const PERSISTENCE_LEVEL: f64 = 1e-3;
const VANISH_LEVEL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrichotomyClass {
    DenselyChaoticEvidence,
    AllOrbitsVanishEvidence,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub label: String,
    /// Largest `ln` seminorm at the final step.
    pub final_log: f64,
    /// Largest `ln` seminorm over the second half of the horizon.
    pub late_max_log: f64,
    pub persistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrichotomyReport {
    pub class: TrichotomyClass,
    /// For bilateral shifts: whether `w_{-n} ... w_{-1} e_{-n}` has a
    /// subsequence below tolerance (the hypothesis of the dichotomy).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<bool>,
    pub seeds: Vec<SeedSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn seminorm_indices(space: &SpaceSpec) -> Vec<u32> {
    if space.is_banach() {
        vec![1]
    } else {
        vec![1, 2, 3]
    }
}

/// `min_n max_k ln ||w_{-n} ... w_{-1} e_{-n}||_k` reaches `ln eps` within the horizon.
fn backward_hypothesis(w: &WeightSpec, space: &SpaceSpec, ks: &[u32], horizon: u64) -> Result<bool> {
    if let AnchoredLimit::Vanishes = backward_liminf(w, 1) {
        if space_has_unit_coordinates(space) {
            return Ok(true);
        }
    }
    let mut log = 0.0;
    for n in 1..=horizon as i64 {
        let l = w.form.eval_log(-n)?;
        if l == f64::NEG_INFINITY {
            return Ok(true);
        }
        log += l;
        let worst = ks.iter().map(|&k| log + space.coordinate_log(-n, k)).fold(f64::NEG_INFINITY, f64::max);
        if worst < VANISH_LEVEL.ln() {
            return Ok(true);
        }
    }
    Ok(false)
}

fn space_has_unit_coordinates(space: &SpaceSpec) -> bool {
    matches!(space.kind, SpaceKind::C0 | SpaceKind::Lp { .. })
}

/// Classifies the shift by the dichotomy for backward shifts: dense chaos or
/// every orbit tending to 0. Seeds are canonical vectors near the origin,
/// the given vectors, and witnesses (whose logged checkpoints certify that
/// their orbits do not vanish).
pub fn trichotomy_classify(
    op: &ShiftOperator,
    space: &SpaceSpec,
    horizon: u64,
    seeds: &[SparseVector<Rational>],
    witnesses: &[ExactWitness],
) -> Result<TrichotomyReport> {
    let w = &op.weights;
    let ks = seminorm_indices(space);
    let mut notes = Vec::new();
    let hypothesis = match w.domain {
        IndexDomain::Unilateral => None,
        IndexDomain::Bilateral => Some(backward_hypothesis(w, space, &ks, horizon)?),
    };
    let canonical: Vec<i64> = match w.domain {
        IndexDomain::Unilateral => (1..=8).collect(),
        IndexDomain::Bilateral => (-4..=4).collect(),
    };
    let mut all: Vec<(String, SparseVector<Rational>)> = canonical
        .iter()
        .map(|&j| Ok((format!("e_{j}"), SparseVector::unit(w.domain, j)?)))
        .collect::<Result<_>>()?;
    all.extend(seeds.iter().enumerate().map(|(i, s)| (format!("seed {i}"), s.clone())));

    let mut summaries = Vec::new();
    let mut any_persistent = false;
    let mut all_vanish = true;
    for (label, x) in &all {
        let trace = simulate_orbit(op, x, space, horizon, &ks)?;
        let top = |s: &crate::orbit::OrbitStep| s.values.iter().map(|v| v.log_value).fold(f64::NEG_INFINITY, f64::max);
        let final_log = trace.steps.last().map_or(f64::NEG_INFINITY, top);
        let late_max_log = trace.steps[trace.steps.len() / 2..].iter().map(top).fold(f64::NEG_INFINITY, f64::max);
        let persistent = late_max_log >= PERSISTENCE_LEVEL.ln();
        any_persistent |= persistent;
        all_vanish &= final_log < VANISH_LEVEL.ln();
        summaries.push(SeedSummary { label: label.clone(), final_log, late_max_log, persistent });
    }
    for (i, wv) in witnesses.iter().enumerate() {
        let trace = simulate_orbit(op, &wv.vector, space, horizon, &[wv.k])?;
        let within: Vec<_> = wv.construction_log.iter().filter(|r| r.n <= horizon).collect();
        let certified = within.len() >= 2 && within.iter().all(|r| trace.value(r.n, wv.k).is_some_and(|v| v.log_value > 0.0));
        let final_log = trace.steps.last().map_or(f64::NEG_INFINITY, |s| s.values[0].log_value);
        any_persistent |= certified;
        summaries.push(SeedSummary {
            label: format!("witness {i}"),
            final_log,
            late_max_log: within.iter().filter_map(|r| trace.value(r.n, wv.k)).map(|v| v.log_value).fold(f64::NEG_INFINITY, f64::max),
            persistent: certified,
        });
    }

    let hyp_ok = hypothesis.unwrap_or(true);
    if hypothesis == Some(false) {
        notes.push("backward products times canonical norms stay above tolerance: the dichotomy does not apply".into());
    }
    let symbolic_decay = space_has_unit_coordinates(space) && matches!(symbolic_sup_bound(w, RangeKind::ForwardAll), SupBound::Finite { .. });
    let class = if !hyp_ok {
        TrichotomyClass::Undetermined
    } else if any_persistent {
        TrichotomyClass::DenselyChaoticEvidence
    } else if all_vanish && symbolic_decay {
        TrichotomyClass::AllOrbitsVanishEvidence
    } else {
        if all_vanish {
            notes.push("all seeds vanish but no catalog bound on the products".into());
        }
        TrichotomyClass::Undetermined
    };
    Ok(TrichotomyReport { class, hypothesis, seeds: summaries, notes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypercyclicityVerdict {
    /// Some sequence is bounded below for some `l`: not hypercyclic.
    Obstructed,
    /// Both sequences drop below every tested level along a common subsequence.
    CommonSubsequence,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LSequenceReport {
    pub l: i64,
    /// `(n, value)` at the minimum of `||w_{l-n} ... w_{l-1} e_{l-n}||_1`.
    pub first_min: (u64, f64),
    /// `(n, value)` at the minimum of `||e_{l+n}||_1 / |w_l ... w_{l+n-1}|`.
    pub second_min: (u64, f64),
    pub first_bounded_below: bool,
    pub second_bounded_below: bool,
    /// Greedy common indices where both values drop below `10^-m`, `m = 1, 2, ...`.
    pub common: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypercyclicityReport {
    pub horizon: u64,
    pub per_l: Vec<LSequenceReport>,
    pub verdict: HypercyclicityVerdict,
}

impl HypercyclicityReport {
    pub fn first_condition_obstructed(&self) -> bool {
        self.per_l.iter().any(|r| r.first_bounded_below)
    }

    pub fn second_condition_obstructed(&self) -> bool {
        self.per_l.iter().any(|r| r.second_bounded_below)
    }
}

pub(crate) fn sequence_logs(w: &WeightSpec, space: &SpaceSpec, l: i64, horizon: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut first = Vec::with_capacity(horizon as usize);
    let mut second = Vec::with_capacity(horizon as usize);
    let (mut back, mut fwd) = (0.0, 0.0);
    for n in 1..=horizon as i64 {
        back += w.form.eval_log(l - n)?;
        first.push(back + space.coordinate_log(l - n, 1));
        fwd += w.form.eval_log(l + n - 1)?;
        second.push(space.coordinate_log(l + n, 1) - fwd);
    }
    Ok((first, second))
}

/// Minimum at or above the persistence level, with no new records below
/// 0.99 times the first-half minimum in the second half (slow decay such as
/// `n^{-1/2}` keeps setting records).
fn bounded_below(v: &[f64]) -> bool {
    let half = v.len() / 2;
    let min = |s: &[f64]| s.iter().copied().fold(f64::INFINITY, f64::min);
    let (early, late) = (min(&v[..half.max(1)]), min(&v[half..]));
    early.min(late) >= PERSISTENCE_LEVEL.ln() && late >= early + 0.99f64.ln()
}

fn argmin(v: &[f64]) -> (u64, f64) {
    let (i, m) = v.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, &x)| if x < acc.1 { (i, x) } else { acc });
    (i as u64 + 1, m.exp())
}

/// Evaluates both hypercyclicity sequences for `l` in the range.
pub fn hypercyclicity_check(w: &WeightSpec, space: &SpaceSpec, horizon: u64, l_range: RangeInclusive<i64>) -> Result<HypercyclicityReport> {
    if w.domain != IndexDomain::Bilateral || space.domain != IndexDomain::Bilateral {
        return Err(Error::DomainMismatch("hypercyclicity check needs bilateral weights and space".into()));
    }
    if !w.all_nonzero() {
        return Err(Error::ZeroWeight);
    }
    if horizon == 0 {
        return Err(Error::HorizonTooSmall { horizon, needed: 1 });
    }
    let mut per_l = Vec::new();
    for l in l_range {
        let (first, second) = sequence_logs(w, space, l, horizon)?;
        let first_min = argmin(&first);
        let second_min = argmin(&second);
        let mut common = Vec::new();
        let mut from = 0usize;
        for m in 1..=12 {
            let level = -(m as f64) * std::f64::consts::LN_10;
            match (from..first.len()).find(|&i| first[i] < level && second[i] < level) {
                Some(i) => {
                    common.push(i as u64 + 1);
                    from = i + 1;
                }
                None => break,
            }
        }
        per_l.push(LSequenceReport {
            l,
            first_min,
            second_min,
            first_bounded_below: bounded_below(&first),
            second_bounded_below: bounded_below(&second),
            common,
        });
    }
    let verdict = if per_l.iter().any(|r| r.first_bounded_below || r.second_bounded_below) {
        HypercyclicityVerdict::Obstructed
    } else if per_l.iter().all(|r| r.common.len() == 12) {
        HypercyclicityVerdict::CommonSubsequence
    } else {
        HypercyclicityVerdict::Undetermined
    };
    Ok(HypercyclicityReport { horizon, per_l, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::spaces::KotheMatrix;
    use crate::witnesses::{build_irregular_kothe, WitnessConfig};

    #[test]
    fn unweighted_examples() {
        let kn = SpaceSpec::new(IndexDomain::Unilateral, SpaceKind::ProductKn).unwrap();
        let op = ShiftOperator::unweighted(IndexDomain::Unilateral);
        let ones = SparseVector::from_entries(IndexDomain::Unilateral, (1..=600).map(|j| (j, int(1)))).unwrap();
        let r = trichotomy_classify(&op, &kn, 256, &[ones], &[]).unwrap();
        assert_eq!(r.class, TrichotomyClass::DenselyChaoticEvidence);
        let l2 = SpaceSpec::lp(IndexDomain::Unilateral, 2.0);
        let r = trichotomy_classify(&op, &l2, 256, &[], &[]).unwrap();
        assert_eq!(r.class, TrichotomyClass::AllOrbitsVanishEvidence);
    }

    #[test]
    fn doubling_weights_with_witness() {
        let w = WeightSpec::constant(IndexDomain::Unilateral, int(2));
        let x = build_irregular_kothe(&w, &KotheMatrix::Constant { value: int(1) }, 2.0, 1, 8, &WitnessConfig::default()).unwrap();
        let l2 = SpaceSpec::lp(IndexDomain::Unilateral, 2.0);
        let r = trichotomy_classify(&ShiftOperator::new(w), &l2, 512, &[], &[x]).unwrap();
        assert_eq!(r.class, TrichotomyClass::DenselyChaoticEvidence);
    }

    #[test]
    fn obstructions() {
        let sz = WeightSpec::rapidly_decreasing_example();
        let s = SpaceSpec::kothe(IndexDomain::Bilateral, KotheMatrix::Power, 1.0);
        let r = hypercyclicity_check(&sz, &s, 100, 1..=1).unwrap();
        assert!(r.second_condition_obstructed());
        assert_eq!(r.verdict, HypercyclicityVerdict::Obstructed);
        let two = WeightSpec::constant(IndexDomain::Bilateral, int(2));
        let r = hypercyclicity_check(&two, &SpaceSpec::lp(IndexDomain::Bilateral, 2.0), 100, 0..=2).unwrap();
        assert!(r.first_condition_obstructed());
        let nu = SpaceSpec::tent_weighted_lp(2.0);
        let one = WeightSpec::constant(IndexDomain::Bilateral, int(1));
        let r = hypercyclicity_check(&one, &nu, 500, 0..=0).unwrap();
        assert!(r.second_condition_obstructed());
        assert!(!r.first_condition_obstructed());
    }
}
