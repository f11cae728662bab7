//! Witness vectors: irregular vectors built level by level from ratio
//! pairs, the explicit vector of the weighted `lp` example, indicator
//! vectors, and orbit-based checks of irregularity and Li-Yorke pairs.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::criteria::{CaseTag, KotheRatio, TheoremTag, Verdict};
use crate::error::{Error, Result};
use crate::operators::{apply_shift, apply_shift_n, ShiftOperator};
use crate::orbit::{simulate_orbit, unboundedness_evidence, GrowthVerdict, DEFAULT_RUNGS};
use crate::scalar::{ln_abs_rational, pow2, powi, serde_rational, Rational, Scalar};
use crate::spaces::{KotheMatrix, SeminormValue, SpaceKind, SpaceSpec, SparseVector};
use crate::weights::{scan_levels, symbolic_sup_bound, weight_sup, IndexDomain, RangeKind, RatioAdjust, SupBound, Threshold, WeightSpec};

pub const WITNESS_SCHEMA_VERSION: u32 = 1;

/// One level of the construction: the pair `(i, j)` beats `2^s` against the
/// column `t`, and `n = j - i + 1` is the checkpoint step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub s: u32,
    pub t: u32,
    pub i: i64,
    pub j: i64,
    pub n: u64,
}

/// `||T^n x||_k` at a logged checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub s: u32,
    pub n: u64,
    pub log_value: f64,
    /// Exact `p`-th power of the seminorm (the seminorm itself for `p = 0`).
    #[serde(with = "serde_rational::option", skip_serializing_if = "Option::is_none", default)]
    pub exact_pow: Option<Rational>,
}

impl Checkpoint {
    pub fn exceeds_one(&self) -> bool {
        match &self.exact_pow {
            Some(q) => *q > Rational::one(),
            None => self.log_value > 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct WitnessVector<S: Scalar> {
    pub schema_version: u32,
    pub vector: SparseVector<S>,
    /// Seminorm index of the checkpoints.
    pub k: u32,
    pub p: f64,
    /// Exact `|x_j|^p` where the entries themselves are irrational.
    #[serde(with = "serde_rational::map", skip_serializing_if = "BTreeMap::is_empty")]
    pub pth_powers: BTreeMap<i64, Rational>,
    /// Bound on every seminorm `l <= tail_valid_up_to` of the discarded tail.
    pub tail_bound: f64,
    pub tail_valid_up_to: u32,
    pub construction_log: Vec<LevelRecord>,
    pub checkpoints: Vec<Checkpoint>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl<S: Scalar> WitnessVector<S> {
    /// Properties (α), (γ), (δ) of the construction log.
    pub fn log_is_consistent(&self) -> bool {
        let l = &self.construction_log;
        let distinct: BTreeSet<i64> = l.iter().map(|r| r.j).collect();
        l.windows(2).all(|p| p[0].t < p[1].t && p[0].n < p[1].n)
            && distinct.len() == l.len()
            && l.iter().all(|r| r.i <= r.j && r.n == (r.j - r.i + 1) as u64)
    }
}

pub type ExactWitness = WitnessVector<Rational>;
pub type FloatWitness = WitnessVector<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessConfig {
    /// The search window starts at `±start` and doubles up to `±cap`.
    pub start: i64,
    pub cap: i64,
    pub back_width: usize,
    /// Half-width of the window used to estimate continuity constants.
    pub estimate_width: i64,
    pub t_cap: u32,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig {
            start: 256,
            cap: 1 << 15,
            back_width: 4096,
            estimate_width: 2048,
            t_cap: 64,
        }
    }
}

fn window_of(domain: IndexDomain, half: i64) -> (i64, i64) {
    match domain {
        IndexDomain::Unilateral => (1, half.max(2)),
        IndexDomain::Bilateral => (-half, half),
    }
}

/// `ln sup { a_{i,k} |w_i ... w_j| / a_{j+1,l} : j - i + 1 <= n_max }` over
/// the estimate window, together with the same sup over its inner half.
fn windowed_ratio_sup(w: &WeightSpec, ratio: &KotheRatio, n_max: u64, half: i64) -> Result<(f64, f64)> {
    let (lo, hi) = window_of(w.domain, half);
    let inner = window_of(w.domain, half / 2);
    let logs: Vec<f64> = (lo..=hi).map(|j| w.form.eval_log(j)).collect::<Result<_>>()?;
    let mut full = f64::NEG_INFINITY;
    let mut inside = f64::NEG_INFINITY;
    for i in lo..=hi {
        let left = ratio.left_log(i);
        let mut acc = 0.0;
        for len in 1..=n_max as i64 {
            let j = i + len - 1;
            if j > hi {
                break;
            }
            acc += logs[(j - lo) as usize];
            let v = left + acc - ratio.right_log(j + 1);
            full = full.max(v);
            if i >= inner.0 && j <= inner.1 {
                inside = inside.max(v);
            }
        }
    }
    Ok((full, inside))
}

/// `ln sup_{i <= j} a_{i,k} |w_i ... w_j| / a_{j+1,l}` over the scan reach.
fn column_sup(w: &WeightSpec, ratio: &KotheRatio, j: i64, back_width: usize, lo: i64) -> Result<f64> {
    let mut acc = 0.0;
    let mut best = f64::NEG_INFINITY;
    let right = ratio.right_log(j + 1);
    let stop = (j - back_width as i64 + 1).max(lo);
    for i in (stop..=j).rev() {
        acc += w.form.eval_log(i)?;
        best = best.max(ratio.left_log(i) + acc - right);
    }
    Ok(best)
}

const TREND_SLACK: f64 = 0.00995; // ln 1.01

/// Irregular vector for `B_w` on `lambda_p(A)` following the level-by-level
/// construction: entries `1/(2^s a_{j_s+1, t_s})` at `j_s + 1`.
pub fn build_irregular_kothe(
    w: &WeightSpec,
    matrix: &KotheMatrix,
    p: f64,
    k: u32,
    levels: u32,
    cfg: &WitnessConfig,
) -> Result<ExactWitness> {
    if !matrix.all_nonzero() {
        return Err(Error::ZeroKotheEntry);
    }
    if !w.all_nonzero() {
        return Err(Error::ZeroWeight);
    }
    if let SupBound::Infinite = weight_sup(w) {
        return Err(Error::UnboundedWeight);
    }
    let bounded_ratio = match matrix {
        KotheMatrix::Constant { .. } => true,
        KotheMatrix::Power => w.domain == IndexDomain::Unilateral,
        _ => false,
    };
    if bounded_ratio {
        if let SupBound::Finite { bound } = symbolic_sup_bound(w, RangeKind::ForwardAll) {
            return Err(Error::CertificateExhausted {
                level: 1,
                reason: format!("ratios are bounded by {}", crate::scalar::format_rational(&bound)),
            });
        }
    }
    let ln2 = std::f64::consts::LN_2;
    let mut notes = Vec::new();
    let minimal_r = |n: u64, from: u32| -> Result<u32> {
        for r in from.max(1)..=cfg.t_cap {
            let (full, inner) = windowed_ratio_sup(w, &KotheRatio { matrix, k, l: r }, n, cfg.estimate_width)?;
            if full.is_finite() && full <= inner + TREND_SLACK {
                return Ok(r);
            }
        }
        Ok(cfg.t_cap)
    };

    let mut records: Vec<LevelRecord> = Vec::new();
    let mut t = minimal_r(1, 1)?;
    for s in 1..=levels {
        if let Some(last) = records.last() {
            t = t.max(minimal_r(last.n + 1, t)?) + 1;
            if t > cfg.t_cap {
                return Err(Error::CertificateExhausted { level: s, reason: format!("column index passed {}", cfg.t_cap) });
            }
        }
        let ratio = KotheRatio { matrix, k, l: t };
        let mut need = s as f64 * ln2;
        if let Some(last) = records.last() {
            let (c, _) = windowed_ratio_sup(w, &ratio, last.n + 1, cfg.estimate_width)?;
            need = need.max(c + 1.1f64.ln());
            let lo = window_of(w.domain, cfg.cap).0;
            for r in &records {
                need = need.max(column_sup(w, &ratio, r.j, cfg.back_width, lo)?);
            }
        }
        // powers of two keep the thresholds exact
        let e = (need / ln2).ceil().max(s as f64) as i64;
        let threshold = Threshold { log: e as f64 * ln2, exact: pow2(e) };
        let used: BTreeSet<i64> = records.iter().map(|r| r.j).collect();
        let n_prev = records.last().map_or(0, |r| r.n);
        let accept = |i: i64, j: i64| !used.contains(&j) && (j - i + 1) as u64 > n_prev;
        let mut half = cfg.start;
        let found = loop {
            let window = window_of(w.domain, half);
            let (hit, _) = scan_levels(w, window, cfg.back_width, std::slice::from_ref(&threshold), &ratio, &accept)?;
            if let Some(l) = hit.into_iter().next().flatten() {
                break l;
            }
            if half >= cfg.cap {
                return Err(Error::CertificateExhausted {
                    level: s,
                    reason: format!("no pair beats 2^{e} against column {t} within ±{}", cfg.cap),
                });
            }
            half = (half * 2).min(cfg.cap);
        };
        records.push(LevelRecord { s, t, i: found.i, j: found.j, n: (found.j - found.i + 1) as u64 });
    }

    let mut x = SparseVector::zero(w.domain);
    for r in &records {
        let a = matrix.entry(r.j + 1, r.t);
        x.set(r.j + 1, Rational::one() / (pow2(r.s as i64) * a))?;
    }
    let space = SpaceSpec::kothe(w.domain, matrix.clone(), p);
    let op = ShiftOperator::new(w.clone());
    let checkpoints = checkpoints_of(&op, &space, &x, k, &records)?;
    if let Some(c) = checkpoints.iter().find(|c| !c.exceeds_one()) {
        return Err(Error::CertificateExhausted { level: c.s, reason: format!("checkpoint at step {} is not above 1", c.n) });
    }
    let tail_bound = if p == 0.0 {
        pow2(-(levels as i64 + 1)).to_f64()
    } else {
        2f64.powi(-(levels as i32)) * (1.0 / (2f64.powf(p) - 1.0)).powf(1.0 / p)
    };
    if matches!(matrix, KotheMatrix::Constant { .. }) {
        notes.push("constant matrix: the column index only orders the levels".into());
    }
    Ok(WitnessVector {
        schema_version: WITNESS_SCHEMA_VERSION,
        vector: x,
        k,
        p,
        pth_powers: BTreeMap::new(),
        tail_bound,
        tail_valid_up_to: records.last().map_or(1, |r| r.t + 1),
        construction_log: records,
        checkpoints,
        notes,
    })
}

fn checkpoints_of(op: &ShiftOperator, space: &SpaceSpec, x: &SparseVector<Rational>, k: u32, records: &[LevelRecord]) -> Result<Vec<Checkpoint>> {
    records
        .iter()
        .map(|r| {
            let y = apply_shift_n(op, x, r.n)?;
            let v = space.seminorm(&y, k)?;
            Ok(Checkpoint {
                s: r.s,
                n: r.n,
                log_value: v.log_value,
                exact_pow: v.exact_pow,
            })
        })
        .collect()
}

/// `x = sum_{n <= S} 2^{-n/p} e_{n(n+1)}` in the weighted space with the tent
/// density, whose unweighted backward orbit stays above 1 up to step `S`.
pub fn build_example_lpnu(p: f64, depth: u32) -> Result<FloatWitness> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidSpec(format!("exponent p = {p} must lie in [1, inf)")));
    }
    let space = SpaceSpec::tent_weighted_lp(p);
    let SpaceKind::WeightedLp { nu, .. } = &space.kind else { unreachable!() };
    let mut x = SparseVector::zero(IndexDomain::Bilateral);
    let mut pth = BTreeMap::new();
    let mut log = Vec::new();
    for n in 1..=depth as i64 {
        let j = n * (n + 1);
        x.set(j, 2f64.powf(-(n as f64) / p))?;
        pth.insert(j, pow2(-n));
        log.push(LevelRecord { s: n as u32, t: n as u32, i: n * n, j: j - 1, n: n as u64 });
    }
    // the positions n(n+1) are block starts, where the density is 1
    for n in depth as i64 + 1..=depth as i64 + 32 {
        debug_assert!(nu.eval(n * (n + 1))?.is_one());
    }
    let tail_bound = 2f64.powf(-(depth as f64) / p);
    let op = ShiftOperator::unweighted(IndexDomain::Bilateral);
    let mut checkpoints = Vec::new();
    for r in &log {
        let exact = shifted_pth_power(&op, &space, &pth, r.n)?;
        checkpoints.push(Checkpoint { s: r.s, n: r.n, log_value: ln_abs_rational(&exact) / p, exact_pow: Some(exact) });
    }
    Ok(WitnessVector {
        schema_version: WITNESS_SCHEMA_VERSION,
        vector: x,
        k: 1,
        p,
        pth_powers: pth,
        tail_bound,
        tail_valid_up_to: 1,
        construction_log: log,
        checkpoints,
        notes: vec!["||B^n x||_p^p >= 2^-n nu_(n^2) = 1 for n <= S".into()],
    })
}

/// Exact `||B_w^n x||^p` in a weighted `lp` space from the exact `|x_j|^p`;
/// needs `|w_j ... w_{j+n-1}|^p` rational, i.e. integer `p` or unimodular products.
pub fn shifted_pth_power(op: &ShiftOperator, space: &SpaceSpec, pth: &BTreeMap<i64, Rational>, n: u64) -> Result<Rational> {
    let p = space.p();
    let mut acc = Rational::zero();
    for (&j, xp) in pth {
        let t = j - n as i64;
        if !space.domain.contains(t) {
            continue;
        }
        let prod = crate::operators::shift_cocycle_exact(&op.weights, t, n)?;
        let prod_p = if prod.abs().is_one() {
            Rational::one()
        } else if p.fract() == 0.0 && p >= 1.0 {
            powi(&prod.abs(), p as i64)
        } else if prod.is_zero() {
            Rational::zero()
        } else {
            return Err(Error::InvalidSpec("irrational power of a weight product".into()));
        };
        let c = space
            .coordinate_pow_exact(t, 1)
            .ok_or_else(|| Error::InvalidSpec("coordinate norm is irrational".into()))?;
        acc += prod_p * xp * c;
    }
    Ok(acc)
}

/// Indicator vector `chi_B`.
pub fn build_semi_irregular_indicator(domain: IndexDomain, set: &BTreeSet<i64>) -> Result<SparseVector<Rational>> {
    SparseVector::from_entries(domain, set.iter().map(|&j| (j, Rational::one())))
}

/// The set whose indicator is semi-irregular for a certified verdict:
/// `{0}` for bilateral shifts, `{-k+1}` for a zero-weight case with anchor
/// `k`, and the first candidate set of a composition certificate.
pub fn semi_irregular_set(verdict: &Verdict) -> Option<BTreeSet<i64>> {
    let cert = verdict.certificate.as_ref()?;
    match verdict.theorem_tag {
        TheoremTag::BilateralShift | TheoremTag::KotheBilateral | TheoremTag::WeightedLp => Some(BTreeSet::from([0])),
        TheoremTag::BilateralShiftZeroWeights => {
            let k = match cert.case_tag {
                Some(CaseTag::I) => cert.vanishing.first()?.k?,
                _ => cert.vanishing.iter().filter_map(|v| v.k).max()?,
            };
            Some(BTreeSet::from([1 - k]))
        }
        TheoremTag::CompositionLp | TheoremTag::CompositionC0 => cert.candidates.first().cloned(),
        TheoremTag::UnilateralShift | TheoremTag::KotheUnilateral => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IrregularClass {
    IrregularEvidence,
    SemiIrregularEvidence,
    NoEvidence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrregularEvidence {
    pub k: u32,
    /// Logged checkpoints `(n, ||T^n x||_k)` whose value exceeds `delta`.
    pub peaks: Vec<(u64, f64)>,
    /// Steps where the seminorm plus the tail bound is below `eps`.
    pub dips: Vec<(u64, f64)>,
    pub growth_rungs_hit: usize,
    pub class: IrregularClass,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn verify_irregular<S: Scalar>(
    x: &WitnessVector<S>,
    op: &ShiftOperator,
    space: &SpaceSpec,
    horizon: u64,
    k: u32,
    eps: f64,
    delta: f64,
) -> Result<IrregularEvidence> {
    if let Some(first) = x.construction_log.first() {
        if horizon < first.n {
            return Err(Error::HorizonTooSmall { horizon, needed: first.n });
        }
    }
    let trace = simulate_orbit(op, &x.vector, space, horizon, &[k])?;
    let checkpoint_steps: BTreeSet<u64> = x.construction_log.iter().map(|r| r.n).collect();
    let mut peaks = Vec::new();
    let mut dips = Vec::new();
    for step in &trace.steps {
        let v = step.values[0].value;
        if checkpoint_steps.contains(&step.n) && v > delta {
            peaks.push((step.n, v));
        }
        if v + x.tail_bound < eps {
            dips.push((step.n, v));
        }
    }
    let growth = unboundedness_evidence(&trace, DEFAULT_RUNGS);
    let rungs = growth.rungs.iter().filter(|r| r.is_some()).count();
    let class = if x.vector.is_zero() {
        IrregularClass::NoEvidence
    } else if !dips.is_empty() && growth.verdict == GrowthVerdict::Growing {
        IrregularClass::IrregularEvidence
    } else if !dips.is_empty() && (!peaks.is_empty() || rungs > 0) {
        IrregularClass::SemiIrregularEvidence
    } else {
        IrregularClass::NoEvidence
    };
    let mut notes = Vec::new();
    if dips.is_empty() && !peaks.is_empty() {
        notes.push(format!("no dip below {eps} within {horizon} steps"));
    }
    Ok(IrregularEvidence { k, peaks, dips, growth_rungs_hit: rungs, class, notes })
}

/// Distances `||T^n(lambda x) - T^n(mu x)||_k` computed from the two orbits.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct PairEvidence<S: Scalar> {
    #[serde(serialize_with = "scalar_as_f64")]
    pub lambda: S,
    #[serde(serialize_with = "scalar_as_f64")]
    pub mu: S,
    pub seminorm_index: u32,
    pub distances: Vec<SeminormValue>,
    /// Smallest distance and its step.
    pub subsequence_min: (u64, f64),
    /// Largest distance and its step.
    pub peak: (u64, f64),
}

fn scalar_as_f64<S: Scalar, Ser: serde::Serializer>(v: &S, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
    s.serialize_f64(v.to_f64())
}

pub fn li_yorke_pair<S: Scalar>(
    x: &SparseVector<S>,
    lambda: S,
    mu: S,
    op: &ShiftOperator,
    space: &SpaceSpec,
    horizon: u64,
    k: u32,
) -> Result<PairEvidence<S>> {
    if lambda == mu {
        return Err(Error::IdenticalScalars);
    }
    let mut a = x.scale(&lambda);
    let mut b = x.scale(&mu);
    let mut distances = Vec::with_capacity(horizon as usize);
    let mut lo = (0, f64::INFINITY);
    let mut hi = (0, f64::NEG_INFINITY);
    for n in 1..=horizon {
        a = apply_shift(op, &a)?;
        b = apply_shift(op, &b)?;
        let d = space.seminorm(&a.sub(&b)?, k)?;
        if d.value < lo.1 {
            lo = (n, d.value);
        }
        if d.value > hi.1 {
            hi = (n, d.value);
        }
        distances.push(d);
    }
    Ok(PairEvidence { lambda, mu, seminorm_index: k, distances, subsequence_min: lo, peak: hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn lpnu_positions_and_checkpoints() {
        let x = build_example_lpnu(2.0, 20).unwrap();
        let pos: Vec<i64> = x.vector.iter().map(|(j, _)| j).collect();
        assert_eq!(pos[..3], [2, 6, 12]);
        assert_eq!(*pos.last().unwrap(), 420);
        assert!(x.checkpoints.iter().all(|c| c.exact_pow.as_ref().unwrap() >= &Rational::one()));
        let one = build_example_lpnu(1.0, 1).unwrap();
        assert_eq!(one.vector.support_len(), 1);
        assert_eq!(one.vector.get(2), 0.5);
    }

    #[test]
    fn lpnu_tail_halves() {
        let a = build_example_lpnu(1.0, 8).unwrap();
        let b = build_example_lpnu(1.0, 9).unwrap();
        assert!((a.tail_bound / b.tail_bound - 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_matrix_doubling_weights() {
        let w = WeightSpec::constant(IndexDomain::Unilateral, int(2));
        let m = KotheMatrix::Constant { value: int(1) };
        let x = build_irregular_kothe(&w, &m, 2.0, 1, 8, &WitnessConfig::default()).unwrap();
        assert!(x.log_is_consistent());
        assert_eq!(x.checkpoints.len(), 8);
        assert!(x.checkpoints.iter().all(Checkpoint::exceeds_one));
        let a = build_irregular_kothe(&w, &m, 2.0, 1, 9, &WitnessConfig::default()).unwrap();
        assert!((x.tail_bound / a.tail_bound - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rapidly_decreasing_witness() {
        let w = WeightSpec::rapidly_decreasing_example();
        let x = build_irregular_kothe(&w, &KotheMatrix::Power, 1.0, 1, 6, &WitnessConfig::default()).unwrap();
        assert!(x.log_is_consistent());
        assert_eq!(x.vector.support_len(), 6);
        assert!(x.checkpoints.iter().all(Checkpoint::exceeds_one));
        let space = SpaceSpec::kothe(IndexDomain::Bilateral, KotheMatrix::Power, 1.0);
        let ev = verify_irregular(&x, &ShiftOperator::new(w), &space, 4096, 1, 0.05, 1.0).unwrap();
        assert_eq!(ev.peaks.len(), 6);
        assert!(!ev.dips.is_empty());
    }

    #[test]
    fn bounded_products_exhaust() {
        let w = WeightSpec::constant(IndexDomain::Unilateral, int(1));
        let m = KotheMatrix::Constant { value: int(1) };
        assert!(matches!(
            build_irregular_kothe(&w, &m, 1.0, 1, 8, &WitnessConfig::default()),
            Err(Error::CertificateExhausted { .. })
        ));
    }

    #[test]
    fn pair_distances_are_linear() {
        let w = WeightSpec::rapidly_decreasing_example();
        let op = ShiftOperator::new(w);
        let space = SpaceSpec::lp(IndexDomain::Bilateral, 1.0);
        let x = SparseVector::from_entries(IndexDomain::Bilateral, [(5, ratio(1, 3)), (9, int(2))]).unwrap();
        let a = li_yorke_pair(&x, int(2), int(1), &op, &space, 40, 1).unwrap();
        let b = li_yorke_pair(&x, int(3), int(1), &op, &space, 40, 1).unwrap();
        for (da, db) in a.distances.iter().zip(&b.distances) {
            assert_eq!(db.exact.clone().unwrap(), da.exact.clone().unwrap() * int(2));
        }
        assert!(matches!(li_yorke_pair(&x, int(1), int(1), &op, &space, 4, 1), Err(Error::IdenticalScalars)));
    }

    #[test]
    fn zero_vector_has_no_evidence() {
        let w = WeightSpec::constant(IndexDomain::Unilateral, int(2));
        let x = WitnessVector::<Rational> {
            schema_version: 1,
            vector: SparseVector::zero(IndexDomain::Unilateral),
            k: 1,
            p: 1.0,
            pth_powers: BTreeMap::new(),
            tail_bound: 0.0,
            tail_valid_up_to: 1,
            construction_log: vec![],
            checkpoints: vec![],
            notes: vec![],
        };
        let space = SpaceSpec::lp(IndexDomain::Unilateral, 1.0);
        let ev = verify_irregular(&x, &ShiftOperator::new(w), &space, 16, 1, 1e-3, 1.0).unwrap();
        assert_eq!(ev.class, IrregularClass::NoEvidence);
    }
}
