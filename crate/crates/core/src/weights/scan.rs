//! Windowed search for index pairs whose (ratio-adjusted) weight products
//! beat a ladder of thresholds.

use std::collections::VecDeque;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::WeightSpec;
use crate::error::{Error, Result};
use crate::scalar::{pow2, Rational};

/// Multiplies `|w_i ... w_j|` by `left(i) / right(j + 1)`.
///
/// When both factors vanish the quotient is taken to be 1.
pub trait RatioAdjust: Sync {
    fn left_log(&self, i: i64) -> f64;
    fn right_log(&self, j_next: i64) -> f64;
    fn left_exact(&self, i: i64) -> Rational;
    fn right_exact(&self, j_next: i64) -> Rational;

    /// Overrides the exact comparison, e.g. when the factors are irrational.
    fn exact_check(&self, _spec: &WeightSpec, _i: i64, _j: i64, _threshold: &Rational) -> Option<Result<bool>> {
        None
    }
}

/// The trivial adjustment; reduces to plain products.
pub struct IdentityRatio;

impl RatioAdjust for IdentityRatio {
    fn left_log(&self, _: i64) -> f64 {
        0.0
    }
    fn right_log(&self, _: i64) -> f64 {
        0.0
    }
    fn left_exact(&self, _: i64) -> Rational {
        Rational::one()
    }
    fn right_exact(&self, _: i64) -> Rational {
        Rational::one()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub window: (i64, i64),
    pub levels: u32,
    /// Maximal `j - i + 1` examined for each right end `j`.
    pub back_width: usize,
}

impl ScanConfig {
    pub const DEFAULT_BACK_WIDTH: usize = 4096;
    pub const DEFAULT_LEVELS: u32 = 10;

    pub fn new(window: (i64, i64), levels: u32) -> Self {
        ScanConfig {
            window,
            levels,
            back_width: Self::DEFAULT_BACK_WIDTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanLevel {
    pub s: u32,
    pub i: i64,
    pub j: i64,
    /// Natural log of the adjusted product.
    pub log_product: f64,
}

impl ScanLevel {
    /// Exact check of `left(i) |w_i ... w_j| > 2^s right(j+1)`.
    pub fn replay(&self, spec: &WeightSpec, ratio: &dyn RatioAdjust) -> Result<bool> {
        let threshold = pow2(self.s as i64);
        exceeds_exact(spec, self.i, self.j, ratio, &threshold)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Growing,
    Bounded,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub levels: Vec<ScanLevel>,
    /// Last right end examined.
    pub exhausted_horizon: i64,
    pub trend: Trend,
}

impl ScanResult {
    pub fn all_found(&self, levels: u32) -> bool {
        self.levels.len() as u32 == levels
    }
}

/// A threshold in both representations.
#[derive(Debug, Clone)]
pub struct Threshold {
    pub log: f64,
    pub exact: Rational,
}

impl Threshold {
    pub fn pow2(s: u32) -> Self {
        Threshold {
            log: s as f64 * std::f64::consts::LN_2,
            exact: pow2(s as i64),
        }
    }

    pub fn from_exact(exact: Rational) -> Self {
        Threshold {
            log: crate::scalar::ln_abs_rational(&exact),
            exact,
        }
    }
}

pub(crate) fn exceeds_exact(
    spec: &WeightSpec,
    i: i64,
    j: i64,
    ratio: &dyn RatioAdjust,
    threshold: &Rational,
) -> Result<bool> {
    if let Some(r) = ratio.exact_check(spec, i, j, threshold) {
        return r;
    }
    let prod = spec.exact_abs_product(i, j)?;
    let left = ratio.left_exact(i);
    let right = ratio.right_exact(j + 1);
    if left.is_zero() && right.is_zero() {
        return Ok(prod > *threshold);
    }
    if prod.is_zero() || left.is_zero() {
        return Ok(false);
    }
    Ok(left * prod > threshold * right)
}

/// Single pass over right ends `j` (increasing) and left ends `i`
/// (decreasing from `j`), recording for each threshold the first pair that
/// strictly beats it and passes `accept`. Thresholds must be increasing.
pub fn scan_levels(
    spec: &WeightSpec,
    window: (i64, i64),
    back_width: usize,
    thresholds: &[Threshold],
    ratio: &dyn RatioAdjust,
    accept: &dyn Fn(i64, i64) -> bool,
) -> Result<(Vec<Option<ScanLevel>>, i64)> {
    let lo = if spec.domain.contains(window.0) { window.0 } else { 1 };
    let hi = window.1;
    if hi < lo {
        return Err(Error::InvalidRange { lo, hi });
    }
    let mut found: Vec<Option<ScanLevel>> = vec![None; thresholds.len()];
    if thresholds.is_empty() {
        return Ok((found, lo));
    }
    // cum[t - lo] = sum of finite logs on [lo, t), grown as j advances
    let mut cum: Vec<f64> = vec![0.0];
    let h = |cum: &[f64], i: i64| ratio.left_log(i) - cum[(i - lo) as usize];
    let value = |cum: &[f64], i: i64, j: i64| {
        let r = ratio.right_log(j + 1);
        let l = ratio.left_log(i);
        let prod = cum[(j - lo + 1) as usize] - cum[(i - lo) as usize];
        match (l == f64::NEG_INFINITY, r == f64::NEG_INFINITY) {
            (true, true) => prod,
            (true, false) => f64::NEG_INFINITY,
            (false, true) => f64::INFINITY,
            (false, false) => l + prod - r,
        }
    };
    let slack = |thr: f64| 1e-9 * thr.abs().max(1.0);

    let mut deque: VecDeque<i64> = VecDeque::new();
    let mut last_zero: Option<i64> = None;
    let mut pending = 0usize;
    let mut last_j = lo;
    for j in lo..=hi {
        last_j = j;
        let l = spec.form.eval_log(j)?;
        let last = *cum.last().unwrap();
        cum.push(if l.is_finite() { last + l } else { last });
        if l == f64::NEG_INFINITY {
            last_zero = Some(j);
            deque.clear();
            continue;
        }
        let hj = h(&cum, j);
        while let Some(&b) = deque.back() {
            if h(&cum, b) <= hj {
                deque.pop_back();
            } else {
                break;
            }
        }
        deque.push_back(j);
        let lower = (j - back_width as i64 + 1).max(lo).max(last_zero.map_or(lo, |z| z + 1));
        while let Some(&f) = deque.front() {
            if f < lower {
                deque.pop_front();
            } else {
                break;
            }
        }
        let Some(&front) = deque.front() else { continue };
        let both_zero = ratio.right_log(j + 1) == f64::NEG_INFINITY;
        let best = if both_zero {
            f64::INFINITY
        } else {
            h(&cum, front) + cum[(j - lo + 1) as usize] - ratio.right_log(j + 1)
        };
        while pending < thresholds.len() && found[pending].is_some() {
            pending += 1;
        }
        if pending == thresholds.len() {
            break;
        }
        let thr = thresholds[pending].log;
        if best <= thr - slack(thr) {
            continue;
        }
        // Within the tie band only the maximizer can beat the threshold
        // exactly, up to float ties between distinct products.
        let candidates: Box<dyn Iterator<Item = i64>> = if best <= thr + slack(thr) {
            Box::new(std::iter::once(front))
        } else {
            Box::new((lower..=j).rev())
        };
        for i in candidates {
            let v = value(&cum, i, j);
            for q in pending..thresholds.len() {
                if found[q].is_some() {
                    continue;
                }
                let t = &thresholds[q];
                if v <= t.log - slack(t.log) {
                    break;
                }
                let ok = if v > t.log + slack(t.log) {
                    true
                } else {
                    exceeds_exact(spec, i, j, ratio, &t.exact)?
                };
                if ok && accept(i, j) {
                    found[q] = Some(ScanLevel {
                        s: q as u32 + 1,
                        i,
                        j,
                        log_product: v,
                    });
                }
            }
        }
        if found.iter().all(Option::is_some) {
            break;
        }
    }
    Ok((found, last_j))
}

/// Finds, for each level `s = 1..=levels`, the first pair with adjusted
/// product `> 2^s`. Numeric scans never report `Bounded`.
pub fn scan_sup(
    spec: &WeightSpec,
    config: &ScanConfig,
    ratio: Option<&dyn RatioAdjust>,
) -> Result<ScanResult> {
    let thresholds: Vec<Threshold> = (1..=config.levels).map(Threshold::pow2).collect();
    let ratio = ratio.unwrap_or(&IdentityRatio);
    let (found, last_j) = scan_levels(
        spec,
        config.window,
        config.back_width,
        &thresholds,
        ratio,
        &|_, _| true,
    )?;
    let all = found.iter().all(Option::is_some);
    let levels: Vec<ScanLevel> = found.into_iter().flatten().collect();
    Ok(ScanResult {
        levels,
        exhausted_horizon: last_j,
        trend: if all { Trend::Growing } else { Trend::Undetermined },
    })
}
