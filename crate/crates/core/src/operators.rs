//! Weighted backward shifts and discrete weighted composition operators.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logmag::LogMag;
use crate::scalar::{powi, serde_rational, Rational, Scalar};
use crate::spaces::{KotheMatrix, SpaceKind, SpaceSpec, SparseVector};
use crate::weights::{weight_sup, IndexDomain, SupBound, WeightForm, WeightSpec};

/// `(B_w x)_j = w_j x_{j+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftOperator {
    pub weights: WeightSpec,
}

impl ShiftOperator {
    pub fn new(weights: WeightSpec) -> Self {
        ShiftOperator { weights }
    }

    pub fn unweighted(domain: IndexDomain) -> Self {
        ShiftOperator {
            weights: WeightSpec::constant(domain, Rational::one()),
        }
    }

    pub fn domain(&self) -> IndexDomain {
        self.weights.domain
    }

    /// `|w^{(n)}(x)| = |w_x ... w_{x+n-1}|`.
    pub fn cocycle(&self, x: i64, n: u64) -> Result<LogMag> {
        if n == 0 {
            return Ok(LogMag::ONE);
        }
        self.weights.abs_product(x, x + n as i64 - 1)
    }
}

pub fn apply_shift<S: Scalar>(op: &ShiftOperator, x: &SparseVector<S>) -> Result<SparseVector<S>> {
    if x.domain != op.domain() {
        return Err(Error::DomainMismatch("vector and shift live on different domains".into()));
    }
    let mut out = SparseVector::zero(x.domain);
    for (t, v) in x.iter() {
        let j = t - 1;
        if !x.domain.contains(j) {
            continue;
        }
        let w = op.weights.eval_weight(j)?;
        out.insert_unchecked(j, S::from_exact(&w) * v.clone());
    }
    Ok(out)
}

pub fn apply_shift_n<S: Scalar>(op: &ShiftOperator, x: &SparseVector<S>, n: u64) -> Result<SparseVector<S>> {
    let mut y = x.clone();
    for _ in 0..n {
        if y.is_zero() {
            break;
        }
        y = apply_shift(op, &y)?;
    }
    Ok(y)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapKind {
    /// `f(n) = n + d`.
    Shift { d: i64 },
    /// `f(n) = a n + b`, `a != 0`.
    Affine { a: i64, b: i64 },
    /// Defined exactly on the listed points.
    Table {
        #[serde(with = "int_map")]
        entries: BTreeMap<i64, i64>,
    },
}

mod int_map {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(m: &BTreeMap<i64, i64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k.to_string(), *v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, i64>, D::Error> {
        let raw: BTreeMap<String, i64> = BTreeMap::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| Ok((k.parse().map_err(serde::de::Error::custom)?, v)))
            .collect()
    }
}

impl MapKind {
    pub fn apply(&self, n: i64) -> Option<i64> {
        match self {
            MapKind::Shift { d } => n.checked_add(*d),
            MapKind::Affine { a, b } => a.checked_mul(n)?.checked_add(*b),
            MapKind::Table { entries } => entries.get(&n).copied(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Masses {
    Counting,
    Table {
        #[serde(with = "serde_rational::map")]
        entries: BTreeMap<i64, Rational>,
        #[serde(with = "serde_rational")]
        default: Rational,
    },
}

impl Masses {
    pub fn mass(&self, x: i64) -> Rational {
        match self {
            Masses::Counting => Rational::one(),
            Masses::Table { entries, default } => entries.get(&x).cloned().unwrap_or_else(|| default.clone()),
        }
    }
}

/// A weighted composition operator `C_{w,f} phi = (phi o f) w` on a finite
/// window of a discrete space with atomic measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteSystem {
    pub domain: IndexDomain,
    pub window: (i64, i64),
    pub map: MapKind,
    pub weights: WeightForm,
    #[serde(default = "counting")]
    pub masses: Masses,
    #[serde(default = "one_f64")]
    pub p: f64,
}

fn counting() -> Masses {
    Masses::Counting
}

fn one_f64() -> f64 {
    1.0
}

/// Points whose images need to be tracked outside the window.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionResult<S> {
    pub vector: SparseVector<S>,
    pub leaked: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreimageSet {
    pub points: BTreeSet<i64>,
    /// Some inverse image fell outside the window and was dropped.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuValue {
    pub log: LogMag,
    #[serde(with = "serde_rational::option", skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<Rational>,
}

impl DiscreteSystem {
    pub fn new(
        domain: IndexDomain,
        window: (i64, i64),
        map: MapKind,
        weights: WeightForm,
        masses: Masses,
        p: f64,
    ) -> Result<Self> {
        let s = DiscreteSystem { domain, window, map, weights, masses, p };
        s.validate()?;
        Ok(s)
    }

    /// The shift `B_w` seen as `C_{w,f}` with `f(n) = n + 1` and counting measure.
    pub fn from_shift(weights: &WeightSpec, window: (i64, i64), p: f64) -> Result<Self> {
        DiscreteSystem::new(
            weights.domain,
            window,
            MapKind::Shift { d: 1 },
            weights.form.clone(),
            Masses::Counting,
            p,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.window;
        if lo > hi {
            return Err(Error::InvalidRange { lo, hi });
        }
        self.domain.check(lo)?;
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(Error::InvalidSpec(format!("exponent p = {} must lie in [1, inf)", self.p)));
        }
        if let MapKind::Affine { a: 0, .. } = self.map {
            return Err(Error::InvalidSpec("affine map needs a nonzero slope".into()));
        }
        self.weights.validate()?;
        if let Masses::Table { entries, default } = &self.masses {
            if !default.is_positive() || entries.values().any(|m| !m.is_positive()) {
                return Err(Error::InvalidSpec("masses must be strictly positive".into()));
            }
        }
        Ok(())
    }

    pub fn in_window(&self, x: i64) -> bool {
        x >= self.window.0 && x <= self.window.1
    }

    /// Shift by one with counting measure: the system is a weighted backward shift.
    pub fn as_shift(&self) -> Option<WeightSpec> {
        match (&self.map, &self.masses) {
            (MapKind::Shift { d: 1 }, Masses::Counting) => Some(WeightSpec { domain: self.domain, form: self.weights.clone() }),
            _ => None,
        }
    }

    pub fn weight(&self, x: i64) -> Result<Rational> {
        self.domain.check(x)?;
        self.weights.eval(x)
    }

    /// Inverse image of a single point inside the domain, including points
    /// outside the window.
    pub(crate) fn inverse_point(&self, y: i64) -> Vec<i64> {
        let cands: Vec<i64> = match &self.map {
            MapKind::Shift { d } => y.checked_sub(*d).into_iter().collect(),
            MapKind::Affine { a, b } => match y.checked_sub(*b) {
                Some(t) if t % a == 0 => vec![t / a],
                _ => vec![],
            },
            MapKind::Table { entries } => entries.iter().filter(|(_, v)| **v == y).map(|(k, _)| *k).collect(),
        };
        cands.into_iter().filter(|x| self.domain.contains(*x)).collect()
    }

    /// `f^n(x)` with every intermediate point checked against the window.
    pub fn iterate(&self, x: i64, n: u64) -> Result<i64> {
        let mut cur = x;
        for step in 0..n {
            if !self.in_window(cur) {
                return Err(Error::BoundaryEscape { point: x, steps: step });
            }
            cur = match self.map.apply(cur) {
                Some(y) if self.domain.contains(y) => y,
                _ => return Err(Error::BoundaryEscape { point: x, steps: step + 1 }),
            };
        }
        Ok(cur)
    }

    /// `|w^{(n)}(x)| = |w(x) w(f(x)) ... w(f^{n-1}(x))|`.
    pub fn cocycle(&self, x: i64, n: u64) -> Result<LogMag> {
        let mut acc = LogMag::ONE;
        let mut cur = x;
        for step in 0..n {
            if !self.in_window(cur) {
                return Err(Error::BoundaryEscape { point: x, steps: step });
            }
            acc = acc * LogMag::from_log(self.weights.eval_log(cur)?);
            if step + 1 < n {
                cur = self.iterate(cur, 1).map_err(|_| Error::BoundaryEscape { point: x, steps: step + 1 })?;
            }
        }
        Ok(acc)
    }

    pub fn cocycle_exact(&self, x: i64, n: u64) -> Result<Rational> {
        let mut acc = Rational::one();
        let mut cur = x;
        for step in 0..n {
            if !self.in_window(cur) {
                return Err(Error::BoundaryEscape { point: x, steps: step });
            }
            acc *= self.weights.eval(cur)?;
            if acc.is_zero() {
                return Ok(acc);
            }
            if step + 1 < n {
                cur = self.iterate(cur, 1).map_err(|_| Error::BoundaryEscape { point: x, steps: step + 1 })?;
            }
        }
        Ok(acc)
    }

    fn integer_p(&self) -> Option<i64> {
        (self.p.fract() == 0.0 && self.p <= 64.0).then_some(self.p as i64)
    }

    /// `mu_n(A) = sum_{x in A} |w^{(n)}(x)|^p mu({x})`.
    pub fn mu_n(&self, a: &BTreeSet<i64>, n: u64) -> Result<MuValue> {
        let mut logs = Vec::with_capacity(a.len());
        let mut exact = self.integer_p().map(|_| Rational::zero());
        for &x in a {
            let c = self.cocycle(x, n)?;
            let m = self.masses.mass(x);
            if !c.is_zero() {
                logs.push(c.log_abs() * self.p + crate::scalar::ln_abs_rational(&m));
            }
            if let (Some(acc), Some(q)) = (exact.as_mut(), self.integer_p()) {
                *acc += powi(&self.cocycle_exact(x, n)?.abs(), q) * m;
            }
        }
        Ok(MuValue { log: log_sum(&logs), exact })
    }

    /// `{ x in W : f^n(x) in B }` by repeated inverse images inside the window.
    pub fn preimage_n(&self, b: &BTreeSet<i64>, n: u64) -> PreimageSet {
        let mut cur: BTreeSet<i64> = b.iter().copied().filter(|y| self.domain.contains(*y)).collect();
        let mut truncated = false;
        for _ in 0..n {
            let mut next = BTreeSet::new();
            for &y in &cur {
                for x in self.inverse_point(y) {
                    if self.in_window(x) {
                        next.insert(x);
                    } else {
                        truncated = true;
                    }
                }
            }
            cur = next;
            if cur.is_empty() {
                break;
            }
        }
        PreimageSet { points: cur, truncated }
    }

    /// `sum |phi(x)|^p mu({x})`, exact for integer `p`.
    pub fn lp_norm_pow(&self, phi: &SparseVector<Rational>) -> Option<Rational> {
        let q = self.integer_p()?;
        Some(phi.iter().map(|(x, v)| powi(&v.abs(), q) * self.masses.mass(x)).sum())
    }
}

fn log_sum(logs: &[f64]) -> LogMag {
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return LogMag::ZERO;
    }
    LogMag::from_log(m + logs.iter().map(|l| (l - m).exp()).sum::<f64>().ln())
}

pub fn apply_composition<S: Scalar>(sys: &DiscreteSystem, x: &SparseVector<S>) -> Result<CompositionResult<S>> {
    if x.domain != sys.domain {
        return Err(Error::DomainMismatch("vector and system live on different domains".into()));
    }
    let mut out = SparseVector::zero(sys.domain);
    let mut leaked = Vec::new();
    for (y, v) in x.iter() {
        if !sys.in_window(y) {
            return Err(Error::IndexOutsideDomain { index: y, domain: "window" });
        }
        for n in sys.inverse_point(y) {
            if !sys.in_window(n) {
                leaked.push(n);
                continue;
            }
            let w = sys.weights.eval(n)?;
            let val = out.get(n) + S::from_exact(&w) * v.clone();
            out.set(n, val)?;
        }
    }
    leaked.sort_unstable();
    Ok(CompositionResult { vector: out, leaked })
}

pub fn apply_composition_n<S: Scalar>(sys: &DiscreteSystem, x: &SparseVector<S>, n: u64) -> Result<CompositionResult<S>> {
    let mut cur = CompositionResult { vector: x.clone(), leaked: Vec::new() };
    for _ in 0..n {
        let next = apply_composition(sys, &cur.vector)?;
        cur.leaked.extend(next.leaked);
        cur.vector = next.vector;
    }
    cur.leaked.sort_unstable();
    cur.leaked.dedup();
    Ok(cur)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Condition {
    /// `w` bounded and `f` proper on sublevel sets (discrete case).
    C0Proper,
    /// `sum_A |w|^p dmu <= c mu(f(A))`.
    LpBounded {
        #[serde(with = "serde_rational::option", skip_serializing_if = "Option::is_none", default)]
        c: Option<Rational>,
    },
    /// For each `k`, an `m` with `sup_j a_{j,k} |w_j| / a_{j+1,m} < inf`.
    KotheEq1 { m_map: Vec<(u32, u32)> },
    /// Every shift is continuous on the product space.
    Coordinatewise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WdStatus {
    Verified,
    FailedAt { index: i64, detail: String },
    UndeterminedAtCaps,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellDefinednessReport {
    pub condition: Condition,
    pub status: WdStatus,
    /// `"symbolic"` or `"window"`.
    pub basis: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WdCaps {
    pub k_max: u32,
    pub m_max: u32,
    pub window: (i64, i64),
}

impl Default for WdCaps {
    fn default() -> Self {
        WdCaps { k_max: 5, m_max: 8, window: (-4096, 4096) }
    }
}

/// Windowed sup over the full window and over its inner half; a growing
/// quantity shows up as a full-window sup clearly above the inner one.
fn windowed_trend(window: (i64, i64), f: impl Fn(i64) -> f64) -> (f64, f64, i64) {
    let (lo, hi) = window;
    let (ilo, ihi) = (lo / 2, hi / 2);
    let mut full = f64::NEG_INFINITY;
    let mut inner = f64::NEG_INFINITY;
    let mut arg = lo;
    for j in lo..=hi {
        let v = f(j);
        if v > full {
            full = v;
            arg = j;
        }
        if j >= ilo && j <= ihi && v > inner {
            inner = v;
        }
    }
    (full, inner, arg)
}

const TREND_SLACK_LOG: f64 = 0.00995; // ln 1.01

fn clip(window: (i64, i64), domain: IndexDomain) -> (i64, i64) {
    match domain {
        IndexDomain::Unilateral => (window.0.max(1), window.1.max(1)),
        IndexDomain::Bilateral => window,
    }
}

fn weight_bound_report(w: &WeightSpec, window: (i64, i64), condition: Condition) -> WellDefinednessReport {
    match weight_sup(w) {
        SupBound::Finite { .. } => WellDefinednessReport { condition, status: WdStatus::Verified, basis: "symbolic".into() },
        other => {
            let window = clip(window, w.domain);
            let (full, inner, arg) = windowed_trend(window, |j| w.form.eval_log(j).unwrap_or(f64::INFINITY));
            let growing = full > inner + TREND_SLACK_LOG;
            let status = match (other, growing) {
                (SupBound::Infinite, _) => WdStatus::FailedAt { index: arg, detail: "weights are unbounded".into() },
                (_, true) => WdStatus::UndeterminedAtCaps,
                (_, false) => WdStatus::Verified,
            };
            WellDefinednessReport { condition, status, basis: "window".into() }
        }
    }
}

fn lp_weight_c(w: &WeightSpec, p: f64) -> Option<Rational> {
    let b = weight_sup(w).finite()?.clone();
    (p.fract() == 0.0).then(|| powi(&b, p as i64))
}

/// Log of `a_{j,k} |w_j| / a_{j+1,m}` with `0/0 = 1`.
fn kothe_ratio_log(matrix: &KotheMatrix, w: &WeightSpec, j: i64, k: u32, m: u32) -> f64 {
    let num = matrix.log_entry(j, k) + w.form.eval_log(j).unwrap_or(f64::INFINITY);
    let den = matrix.log_entry(j + 1, m);
    match (num == f64::NEG_INFINITY, den == f64::NEG_INFINITY) {
        (true, true) => 0.0,
        (_, true) => f64::INFINITY,
        (true, false) => f64::NEG_INFINITY,
        _ => num - den,
    }
}

/// Continuity of `B_w` on the given space.
pub fn check_shift_well_defined(w: &WeightSpec, space: &SpaceSpec, caps: &WdCaps) -> WellDefinednessReport {
    match &space.kind {
        SpaceKind::ProductKn => WellDefinednessReport {
            condition: Condition::Coordinatewise,
            status: WdStatus::Verified,
            basis: "symbolic".into(),
        },
        SpaceKind::C0 => weight_bound_report(w, caps.window, Condition::C0Proper),
        SpaceKind::Lp { p } => {
            let mut r = weight_bound_report(w, caps.window, Condition::LpBounded { c: None });
            r.condition = Condition::LpBounded { c: lp_weight_c(w, *p) };
            r
        }
        SpaceKind::WeightedLp { p, nu } => {
            // nu_j |w_j|^p / nu_{j+1}
            let logf = |j: i64| {
                let a = nu.eval(j).map(|v| crate::scalar::ln_abs_rational(&v)).unwrap_or(f64::NAN);
                let b = nu.eval(j + 1).map(|v| crate::scalar::ln_abs_rational(&v)).unwrap_or(f64::NAN);
                let lw = w.form.eval_log(j).unwrap_or(f64::INFINITY);
                a + p * lw - b
            };
            let window = (caps.window.0.max(-(1 << 16)), caps.window.1.min(1 << 16));
            let (full, inner, arg) = windowed_trend(window, |j| if j == 0 || j == -1 { f64::NEG_INFINITY } else { logf(j) });
            let around_zero = logf(-1).max(logf(0));
            let full = full.max(around_zero);
            let inner = inner.max(around_zero);
            let status = if full.is_finite() && full <= inner + TREND_SLACK_LOG {
                WdStatus::Verified
            } else if full == f64::INFINITY {
                WdStatus::FailedAt { index: arg, detail: "ratio is infinite".into() }
            } else {
                WdStatus::UndeterminedAtCaps
            };
            WellDefinednessReport {
                condition: Condition::LpBounded { c: None },
                status,
                basis: "window".into(),
            }
        }
        SpaceKind::Kothe { matrix, .. } => kothe_well_defined(w, matrix, caps),
    }
}

fn kothe_well_defined(w: &WeightSpec, matrix: &KotheMatrix, caps: &WdCaps) -> WellDefinednessReport {
    let symbolic = matches!(matrix, KotheMatrix::Constant { .. } | KotheMatrix::Power) && weight_sup(w).finite().is_some();
    if symbolic {
        return WellDefinednessReport {
            condition: Condition::KotheEq1 { m_map: (1..=caps.k_max).map(|k| (k, k)).collect() },
            status: WdStatus::Verified,
            basis: "symbolic".into(),
        };
    }
    let window = clip(caps.window, w.domain);
    let mut m_map = Vec::new();
    for k in 1..=caps.k_max {
        let mut chosen = None;
        let mut failed = None;
        for m in 1..=caps.m_max {
            let (full, inner, arg) = windowed_trend(window, |j| kothe_ratio_log(matrix, w, j, k, m));
            if full == f64::INFINITY {
                failed = Some(arg);
                continue;
            }
            if full <= inner + TREND_SLACK_LOG {
                chosen = Some(m);
                break;
            }
        }
        match (chosen, failed) {
            (Some(m), _) => m_map.push((k, m)),
            (None, Some(j)) => {
                return WellDefinednessReport {
                    condition: Condition::KotheEq1 { m_map },
                    status: WdStatus::FailedAt {
                        index: j,
                        detail: format!("a_{{j,{k}}} w_j > 0 while a_{{j+1,m}} = 0 for every m <= {}", caps.m_max),
                    },
                    basis: "window".into(),
                }
            }
            (None, None) => {
                return WellDefinednessReport {
                    condition: Condition::KotheEq1 { m_map },
                    status: WdStatus::UndeterminedAtCaps,
                    basis: "window".into(),
                }
            }
        }
    }
    WellDefinednessReport {
        condition: Condition::KotheEq1 { m_map },
        status: WdStatus::Verified,
        basis: "window".into(),
    }
}

/// Continuity of `C_{w,f}` on `c0` or `Lp` of the windowed system.
pub fn check_system_well_defined(sys: &DiscreteSystem, lp: bool) -> WellDefinednessReport {
    if !lp {
        let w = WeightSpec { domain: sys.domain, form: sys.weights.clone() };
        return weight_bound_report(&w, sys.window, Condition::C0Proper);
    }
    // c = sup_y sum_{f(x) = y} |w(x)|^p mu(x) / mu(y), over y in the window
    let q = sys.integer_p();
    let mut fibers: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for x in sys.window.0..=sys.window.1 {
        if let Some(y) = sys.map.apply(x) {
            fibers.entry(y).or_default().push(x);
        }
    }
    let mut best: Option<Rational> = None;
    let mut best_log = f64::NEG_INFINITY;
    for (y, xs) in &fibers {
        let my = sys.masses.mass(*y);
        let mut logs = Vec::new();
        let mut acc = Rational::zero();
        for &x in xs {
            let lw = sys.weights.eval_log(x).unwrap_or(f64::INFINITY);
            logs.push(sys.p * lw + crate::scalar::ln_abs_rational(&sys.masses.mass(x)));
            if let Some(q) = q {
                acc += powi(&sys.weights.eval(x).unwrap_or_default().abs(), q) * sys.masses.mass(x);
            }
        }
        let l = log_sum(&logs).log_abs() - crate::scalar::ln_abs_rational(&my);
        best_log = best_log.max(l);
        if q.is_some() {
            let v = acc / my;
            if best.as_ref().is_none_or(|b| v > *b) {
                best = Some(v);
            }
        }
    }
    let status = if best_log.is_finite() || best_log == f64::NEG_INFINITY {
        WdStatus::Verified
    } else {
        WdStatus::UndeterminedAtCaps
    };
    WellDefinednessReport {
        condition: Condition::LpBounded { c: best },
        status,
        basis: "window".into(),
    }
}

/// Exact `|w_x ... w_{x+n-1}|`.
pub fn shift_cocycle_exact(w: &WeightSpec, x: i64, n: u64) -> Result<Rational> {
    if n == 0 {
        return Ok(Rational::one());
    }
    w.exact_abs_product(x, x + n as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;
    use IndexDomain::*;

    fn unit(d: IndexDomain, j: i64) -> SparseVector<Rational> {
        SparseVector::unit(d, j).unwrap()
    }

    fn set(xs: &[i64]) -> BTreeSet<i64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn shift_examples() {
        let two = ShiftOperator::new(WeightSpec::constant(Unilateral, int(2)));
        assert_eq!(apply_shift(&two, &unit(Unilateral, 3)).unwrap(), unit(Unilateral, 2).scale(&int(2)));
        let b = ShiftOperator::unweighted(Bilateral);
        assert_eq!(apply_shift(&b, &unit(Bilateral, 0)).unwrap(), unit(Bilateral, -1));
        let mut entries = BTreeMap::new();
        entries.insert(2, int(0));
        let z = ShiftOperator::new(
            WeightSpec::new(Unilateral, WeightForm::Table { entries, tail: Box::new(WeightForm::constant(int(1))) }).unwrap(),
        );
        assert!(apply_shift(&z, &unit(Unilateral, 3)).unwrap().is_zero());
        assert!(apply_shift(&two, &unit(Unilateral, 1)).unwrap().is_zero());
    }

    fn shift_sys(d: i64, w: Rational, domain: IndexDomain) -> DiscreteSystem {
        let window = if domain == Unilateral { (1, 50) } else { (-50, 50) };
        DiscreteSystem::new(domain, window, MapKind::Shift { d }, WeightForm::constant(w), Masses::Counting, 1.0).unwrap()
    }

    #[test]
    fn composition_examples() {
        let s1 = shift_sys(1, int(1), Bilateral);
        assert_eq!(apply_composition(&s1, &unit(Bilateral, 5)).unwrap().vector, unit(Bilateral, 4));
        let s2 = shift_sys(2, int(1), Bilateral);
        assert_eq!(apply_composition(&s2, &unit(Bilateral, 2)).unwrap().vector, unit(Bilateral, 0));
        let u = shift_sys(1, int(2), Unilateral);
        let r = apply_composition(&u, &unit(Unilateral, 1)).unwrap();
        assert!(r.vector.is_zero());
        assert!(r.leaked.is_empty());
        let edge = apply_composition(&s1, &unit(Bilateral, -50)).unwrap();
        assert_eq!(edge.leaked, vec![-51]);
    }

    #[test]
    fn cocycle_examples() {
        let two = shift_sys(1, int(2), Bilateral);
        assert!((two.cocycle(7, 3).unwrap().log_abs() - 8f64.ln()).abs() < 1e-12);
        let sz = WeightSpec::rapidly_decreasing_example();
        let sys = DiscreteSystem::from_shift(&sz, (-100, 100), 1.0).unwrap();
        let direct = sz.exact_abs_product(-3, -1).unwrap();
        assert_eq!(sys.cocycle_exact(-3, 3).unwrap().abs(), direct);
        assert!(matches!(sys.cocycle(98, 5), Err(Error::BoundaryEscape { point: 98, .. })));
        let mut entries = BTreeMap::new();
        entries.insert(3, int(0));
        let z = DiscreteSystem::new(
            Bilateral,
            (-10, 10),
            MapKind::Shift { d: 1 },
            WeightForm::Table { entries, tail: Box::new(WeightForm::constant(int(5))) },
            Masses::Counting,
            1.0,
        )
        .unwrap();
        assert!(z.cocycle(1, 4).unwrap().is_zero());
    }

    #[test]
    fn mu_and_preimage_examples() {
        let sz = WeightSpec::rapidly_decreasing_example();
        let sys = DiscreteSystem::from_shift(&sz, (-100, 100), 2.0).unwrap();
        let k = 7;
        for n in 1..6u64 {
            let pre = sys.preimage_n(&set(&[k]), n);
            assert_eq!(pre.points, set(&[k - n as i64]));
            let mu = sys.mu_n(&pre.points, n).unwrap();
            let prod = sz.exact_abs_product(k - n as i64, k - 1).unwrap();
            assert_eq!(mu.exact.unwrap(), &prod * &prod);
        }
        let ones = shift_sys(1, int(1), Bilateral);
        assert_eq!(ones.mu_n(&set(&[-3, 0, 4]), 5).unwrap().exact, Some(int(3)));
        assert_eq!(ones.mu_n(&BTreeSet::new(), 5).unwrap().exact, Some(int(0)));
        assert!(ones.mu_n(&BTreeSet::new(), 5).unwrap().log.is_zero());
        assert_eq!(ones.preimage_n(&set(&[0]), 3).points, set(&[-3]));
        let uni = shift_sys(1, int(1), Unilateral);
        assert!(uni.preimage_n(&set(&[1]), 1).points.is_empty());
        let two = shift_sys(2, int(1), Bilateral);
        assert_eq!(two.preimage_n(&set(&[0]), 2).points, set(&[-4]));
    }

    #[test]
    fn non_injective_table_map() {
        let mut entries = BTreeMap::new();
        for x in 0..10 {
            entries.insert(x, x / 2);
        }
        let sys = DiscreteSystem::new(
            Bilateral,
            (0, 9),
            MapKind::Table { entries },
            WeightForm::constant(ratio(1, 2)),
            Masses::Counting,
            1.0,
        )
        .unwrap();
        assert_eq!(sys.preimage_n(&set(&[1]), 1).points, set(&[2, 3]));
        assert_eq!(sys.preimage_n(&set(&[1]), 2).points, set(&[4, 5, 6, 7]));
        let r = check_system_well_defined(&sys, true);
        assert_eq!(r.status, WdStatus::Verified);
        // fiber of 0 is {0, 1}: c = 2 * 1/2
        assert_eq!(r.condition, Condition::LpBounded { c: Some(int(1)) });
    }

    #[test]
    fn well_definedness_examples() {
        let sz = WeightSpec::rapidly_decreasing_example();
        let s = SpaceSpec::kothe(Bilateral, KotheMatrix::Power, 1.0);
        let r = check_shift_well_defined(&sz, &s, &WdCaps::default());
        assert_eq!(r.status, WdStatus::Verified);
        assert_eq!(r.condition, Condition::KotheEq1 { m_map: (1..=5).map(|k| (k, k)).collect() });
        let bounded = WeightSpec::constant(Unilateral, int(3));
        assert_eq!(check_shift_well_defined(&bounded, &SpaceSpec::c0(Unilateral), &WdCaps::default()).status, WdStatus::Verified);
        let grow = WeightSpec::new(
            Bilateral,
            WeightForm::Expr(crate::weights::RationalExpr { coeff: int(1), plus_one_power: 1, abs_power: 0, geometric: int(1) }),
        )
        .unwrap();
        let caps = WdCaps { k_max: 2, m_max: 2, window: (-2048, 2048) };
        let r = check_shift_well_defined(&grow, &s, &caps);
        assert!(matches!(r.status, WdStatus::UndeterminedAtCaps | WdStatus::FailedAt { .. }));
        let caps = WdCaps { k_max: 2, m_max: 4, window: (-2048, 2048) };
        let r = check_shift_well_defined(&grow, &s, &caps);
        assert_eq!(r.status, WdStatus::Verified);
        assert_eq!(r.condition, Condition::KotheEq1 { m_map: vec![(1, 2), (2, 3)] });
        let lp = check_shift_well_defined(&grow, &SpaceSpec::lp(Bilateral, 2.0), &WdCaps::default());
        assert!(matches!(lp.status, WdStatus::FailedAt { .. }));
        let nu = SpaceSpec::tent_weighted_lp(2.0);
        let unw = WeightSpec::constant(Bilateral, int(1));
        assert_eq!(check_shift_well_defined(&unw, &nu, &WdCaps::default()).status, WdStatus::Verified);
    }

    #[test]
    fn zero_over_zero_is_one() {
        let mut rows = BTreeMap::new();
        rows.insert(5, vec![int(0)]);
        rows.insert(6, vec![int(0)]);
        let m = KotheMatrix::Table { rows, fallback: Box::new(KotheMatrix::Constant { value: int(1) }) };
        let w = WeightSpec::constant(Bilateral, int(1));
        assert_eq!(kothe_ratio_log(&m, &w, 5, 1, 1), 0.0);
        assert_eq!(kothe_ratio_log(&m, &w, 4, 1, 1), f64::INFINITY);
        let caps = WdCaps { k_max: 1, m_max: 2, window: (-20, 20) };
        assert!(matches!(kothe_well_defined(&w, &m, &caps).status, WdStatus::FailedAt { index: 4, .. }));
    }

    fn arb_system() -> impl Strategy<Value = DiscreteSystem> {
        (
            prop::collection::vec(prop::sample::select(vec![ratio(1, 3), ratio(1, 2), int(1), int(2), int(3), int(0)]), 1..5),
            1i64..=3,
            prop::sample::select(vec![1.0, 2.0]),
        )
            .prop_map(|(vals, d, p)| {
                DiscreteSystem::new(Bilateral, (-200, 200), MapKind::Shift { d }, WeightForm::periodic(vals), Masses::Counting, p)
                    .unwrap()
            })
    }

    proptest! {
        #[test]
        fn cocycle_splits(sys in arb_system(), x in -40i64..40, m in 0u64..16, n in 0u64..16) {
            let whole = sys.cocycle(x, m + n).unwrap();
            let split = sys.cocycle(x, n).unwrap() * sys.cocycle(sys.iterate(x, n).unwrap(), m).unwrap();
            if whole.is_zero() || split.is_zero() {
                prop_assert_eq!(whole.is_zero(), split.is_zero());
            } else {
                prop_assert!((whole.log_abs() - split.log_abs()).abs() < 1e-10);
            }
        }

        #[test]
        fn mu_n_is_bounded_by_c_pow_n(sys in arb_system(), pts in prop::collection::btree_set(-60i64..60, 0..6), n in 1u64..=30) {
            let r = check_system_well_defined(&sys, true);
            prop_assert_eq!(&r.status, &WdStatus::Verified);
            let Condition::LpBounded { c: Some(c) } = r.condition else { panic!() };
            let mu = sys.mu_n(&pts, n).unwrap().exact.unwrap();
            let image: BTreeSet<i64> = pts.iter().map(|&x| sys.iterate(x, n).unwrap()).collect();
            let bound = powi(&c, n as i64) * int(image.len() as i64);
            prop_assert!(mu <= bound);
        }

        #[test]
        fn shift_powers_on_units(vals in prop::collection::vec((-4i64..=4, 1i64..=3), 1..5), k in -30i64..30, n in 0u64..20) {
            let w = WeightSpec::new(Bilateral, WeightForm::periodic(vals.into_iter().map(|(a, b)| ratio(a, b)).collect())).unwrap();
            let op = ShiftOperator::new(w.clone());
            let got = apply_shift_n(&op, &unit(Bilateral, k), n).unwrap();
            let coeff = if n == 0 { int(1) } else {
                (k - n as i64..k).map(|t| w.eval_weight(t).unwrap()).product()
            };
            let expected = unit(Bilateral, k - n as i64).scale(&coeff);
            prop_assert_eq!(got, expected);
        }

        #[test]
        fn mu_matches_operator_norm(sys in arb_system(), pts in prop::collection::btree_set(-30i64..30, 1..5), n in 1u64..10) {
            let pre = sys.preimage_n(&pts, n);
            let mu = sys.mu_n(&pre.points, n).unwrap().exact.unwrap();
            let chi = SparseVector::from_entries(Bilateral, pts.iter().map(|&b| (b, int(1)))).unwrap();
            let img = apply_composition_n(&sys, &chi, n).unwrap();
            prop_assert_eq!(sys.lp_norm_pow(&img.vector).unwrap(), mu);
        }
    }
}
