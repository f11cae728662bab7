//! Weight sequences over `N = {1, 2, ...}` or `Z`.
//!
//! A [`WeightSpec`] is a small symbolic description: constants, periodic
//! patterns, a restricted class of closed-form expressions, two block
//! generators, finite tables, piecewise splits and pointwise products. Every
//! form evaluates exactly (as a rational) and in the log domain.

mod scan;
mod symbolic;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logmag::LogMag;
use crate::scalar::{ln_abs_rational, powi, serde_rational, Rational};

pub use scan::{scan_levels, scan_sup, IdentityRatio, Threshold, RatioAdjust, ScanConfig, ScanLevel, ScanResult, Trend};
pub use symbolic::{
    backward_liminf, backward_sup, symbolic_sup_bound, term_limit_left, weight_inf_right, weight_sup,
    AnchoredLimit, RangeKind, SupBound, TermLimit,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexDomain {
    /// Indices `1, 2, 3, ...`.
    Unilateral,
    /// All integers.
    Bilateral,
}

impl IndexDomain {
    pub fn contains(self, j: i64) -> bool {
        match self {
            IndexDomain::Unilateral => j >= 1,
            IndexDomain::Bilateral => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IndexDomain::Unilateral => "unilateral",
            IndexDomain::Bilateral => "bilateral",
        }
    }

    pub fn check(self, j: i64) -> Result<()> {
        if self.contains(j) {
            Ok(())
        } else {
            Err(Error::IndexOutsideDomain {
                index: j,
                domain: self.name(),
            })
        }
    }

    /// Default scan window: `[1, 2^20]` or `[-2^19, 2^19]`.
    pub fn default_window(self) -> (i64, i64) {
        match self {
            IndexDomain::Unilateral => (1, 1 << 20),
            IndexDomain::Bilateral => (-(1 << 19), 1 << 19),
        }
    }
}

/// `coeff * (|j|+1)^plus_one_power * |j|^abs_power * geometric^|j|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalExpr {
    #[serde(with = "serde_rational", default = "one")]
    pub coeff: Rational,
    #[serde(default)]
    pub plus_one_power: i32,
    #[serde(default)]
    pub abs_power: i32,
    #[serde(with = "serde_rational", default = "one")]
    pub geometric: Rational,
}

fn one() -> Rational {
    Rational::one()
}

impl RationalExpr {
    pub fn eval(&self, j: i64) -> Result<Rational> {
        let m = j.unsigned_abs() as i64;
        if m == 0 && self.abs_power < 0 {
            return Err(Error::UndefinedAt(j));
        }
        if m == 0 && self.abs_power > 0 {
            return Ok(Rational::zero());
        }
        let mut v = self.coeff.clone();
        if self.plus_one_power != 0 {
            v *= powi(&crate::scalar::int(m + 1), self.plus_one_power as i64);
        }
        if self.abs_power != 0 {
            v *= powi(&crate::scalar::int(m), self.abs_power as i64);
        }
        if !self.geometric.is_one() {
            v *= powi(&self.geometric, m);
        }
        Ok(v)
    }

    pub fn eval_log(&self, j: i64) -> Result<f64> {
        let m = j.unsigned_abs() as i64;
        if m == 0 && self.abs_power < 0 {
            return Err(Error::UndefinedAt(j));
        }
        if self.coeff.is_zero() || (m == 0 && self.abs_power > 0) || (m > 0 && self.geometric.is_zero()) {
            return Ok(f64::NEG_INFINITY);
        }
        let mf = m as f64;
        let mut l = ln_abs_rational(&self.coeff);
        if self.plus_one_power != 0 {
            l += self.plus_one_power as f64 * (mf + 1.0).ln();
        }
        if self.abs_power != 0 {
            l += self.abs_power as f64 * mf.ln();
        }
        if m > 0 && !self.geometric.is_one() {
            l += mf * ln_abs_rational(&self.geometric);
        }
        Ok(l)
    }
}

/// Named block generators; blocks are concatenated starting at `start`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum BlockGenerator {
    /// Blocks `(1, b, b^2, ..., b^n, ..., b^2, b)` of length `2n`, `n >= 1`.
    GeometricTent {
        #[serde(with = "serde_rational")]
        base: Rational,
    },
    /// Blocks of `n` copies of `1/r` followed by `n` copies of `r`, `n >= 1`.
    HalfDoubleRuns {
        #[serde(with = "serde_rational")]
        ratio: Rational,
    },
}

/// Position inside the block concatenation at offset `t >= 0`: block `n`
/// covers offsets `[n(n-1), n(n+1))`.
pub(crate) fn block_position(t: u64) -> (u64, u64) {
    let mut n = ((1.0 + (1.0 + 4.0 * t as f64).sqrt()) / 2.0).floor() as u64;
    n = n.max(1);
    while n * (n - 1) > t {
        n -= 1;
    }
    while n * (n + 1) <= t {
        n += 1;
    }
    (n, t - n * (n - 1))
}

impl BlockGenerator {
    /// Exponent of the generator's base at offset `t`: the value is
    /// `base^e` (tent) or `ratio^e` with `e = ±1` (runs).
    fn exponent(&self, t: u64) -> i64 {
        let (n, q) = block_position(t);
        match self {
            BlockGenerator::GeometricTent { .. } => {
                if q <= n {
                    q as i64
                } else {
                    (2 * n - q) as i64
                }
            }
            BlockGenerator::HalfDoubleRuns { .. } => {
                if q < n {
                    -1
                } else {
                    1
                }
            }
        }
    }

    fn base(&self) -> &Rational {
        match self {
            BlockGenerator::GeometricTent { base } => base,
            BlockGenerator::HalfDoubleRuns { ratio } => ratio,
        }
    }

    pub fn eval_offset(&self, t: u64) -> Rational {
        powi(self.base(), self.exponent(t))
    }

    pub fn eval_log_offset(&self, t: u64) -> f64 {
        let e = self.exponent(t);
        if e == 0 {
            return 0.0;
        }
        e as f64 * ln_abs_rational(self.base())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightForm {
    Constant {
        #[serde(with = "serde_rational")]
        value: Rational,
    },
    /// `values[(j - offset) mod len]`.
    Periodic {
        #[serde(with = "serde_rational::vec")]
        values: Vec<Rational>,
        #[serde(default)]
        offset: i64,
    },
    Expr(RationalExpr),
    /// Defined for `j >= start`.
    Block {
        generator: BlockGenerator,
        start: i64,
    },
    /// `below` for `j < pivot`, `above` for `j >= pivot`.
    Piecewise {
        pivot: i64,
        below: Box<WeightForm>,
        above: Box<WeightForm>,
    },
    /// Finite overrides on top of a tail rule.
    Table {
        #[serde(with = "serde_rational::map")]
        entries: BTreeMap<i64, Rational>,
        tail: Box<WeightForm>,
    },
    /// Pointwise product.
    Product {
        left: Box<WeightForm>,
        right: Box<WeightForm>,
    },
}

impl WeightForm {
    pub fn constant(value: Rational) -> Self {
        WeightForm::Constant { value }
    }

    pub fn periodic(values: Vec<Rational>) -> Self {
        WeightForm::Periodic { values, offset: 0 }
    }

    pub fn piecewise(pivot: i64, below: WeightForm, above: WeightForm) -> Self {
        WeightForm::Piecewise {
            pivot,
            below: Box::new(below),
            above: Box::new(above),
        }
    }

    pub fn eval(&self, j: i64) -> Result<Rational> {
        match self {
            WeightForm::Constant { value } => Ok(value.clone()),
            WeightForm::Periodic { values, offset } => {
                let len = values.len() as i64;
                Ok(values[(j - offset).rem_euclid(len) as usize].clone())
            }
            WeightForm::Expr(e) => e.eval(j),
            WeightForm::Block { generator, start } => {
                if j < *start {
                    return Err(Error::UndefinedAt(j));
                }
                Ok(generator.eval_offset((j - start) as u64))
            }
            WeightForm::Piecewise { pivot, below, above } => {
                if j < *pivot {
                    below.eval(j)
                } else {
                    above.eval(j)
                }
            }
            WeightForm::Table { entries, tail } => match entries.get(&j) {
                Some(v) => Ok(v.clone()),
                None => tail.eval(j),
            },
            WeightForm::Product { left, right } => Ok(left.eval(j)? * right.eval(j)?),
        }
    }

    /// `ln |w_j|`, `-inf` for a zero weight.
    pub fn eval_log(&self, j: i64) -> Result<f64> {
        match self {
            WeightForm::Constant { value } => Ok(ln_abs_rational(value)),
            WeightForm::Periodic { .. } | WeightForm::Table { .. } => {
                // table hits and periodic values are small; evaluate exactly
                if let WeightForm::Table { entries, tail } = self {
                    return match entries.get(&j) {
                        Some(v) => Ok(ln_abs_rational(v)),
                        None => tail.eval_log(j),
                    };
                }
                Ok(ln_abs_rational(&self.eval(j)?))
            }
            WeightForm::Expr(e) => e.eval_log(j),
            WeightForm::Block { generator, start } => {
                if j < *start {
                    return Err(Error::UndefinedAt(j));
                }
                Ok(generator.eval_log_offset((j - start) as u64))
            }
            WeightForm::Piecewise { pivot, below, above } => {
                if j < *pivot {
                    below.eval_log(j)
                } else {
                    above.eval_log(j)
                }
            }
            WeightForm::Product { left, right } => {
                let (l, r) = (left.eval_log(j)?, right.eval_log(j)?);
                if l == f64::NEG_INFINITY || r == f64::NEG_INFINITY {
                    Ok(f64::NEG_INFINITY)
                } else {
                    Ok(l + r)
                }
            }
        }
    }

    /// Conservative: `false` only when no weight can vanish.
    pub fn may_vanish(&self) -> bool {
        match self {
            WeightForm::Constant { value } => value.is_zero(),
            WeightForm::Periodic { values, .. } => values.iter().any(Zero::is_zero),
            WeightForm::Expr(e) => e.coeff.is_zero() || e.geometric.is_zero() || e.abs_power > 0,
            WeightForm::Block { generator, .. } => generator.base().is_zero(),
            WeightForm::Piecewise { below, above, .. } => below.may_vanish() || above.may_vanish(),
            WeightForm::Table { entries, tail } => {
                entries.values().any(Zero::is_zero) || tail.may_vanish()
            }
            WeightForm::Product { left, right } => left.may_vanish() || right.may_vanish(),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            WeightForm::Periodic { values, .. } if values.is_empty() => {
                Err(Error::InvalidSpec("periodic weights need at least one value".into()))
            }
            WeightForm::Block { generator, .. } if generator.base().is_zero() => {
                Err(Error::InvalidSpec("block generator base must be nonzero".into()))
            }
            WeightForm::Piecewise { below, above, .. } => {
                below.validate()?;
                above.validate()
            }
            WeightForm::Table { tail, .. } => tail.validate(),
            WeightForm::Product { left, right } => {
                left.validate()?;
                right.validate()
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub domain: IndexDomain,
    pub form: WeightForm,
}

impl WeightSpec {
    pub fn new(domain: IndexDomain, form: WeightForm) -> Result<Self> {
        form.validate()?;
        Ok(WeightSpec { domain, form })
    }

    pub fn constant(domain: IndexDomain, value: Rational) -> Self {
        WeightSpec {
            domain,
            form: WeightForm::constant(value),
        }
    }

    /// `w_{-n} = 1/2` for `n >= 0`, then runs of `n` halves and `n` twos
    /// from index 1 on: the classical chaotic, non-hypercyclic shift on `s(Z)`.
    pub fn rapidly_decreasing_example() -> Self {
        let half = crate::scalar::ratio(1, 2);
        WeightSpec {
            domain: IndexDomain::Bilateral,
            form: WeightForm::piecewise(
                1,
                WeightForm::constant(half),
                WeightForm::Block {
                    generator: BlockGenerator::HalfDoubleRuns {
                        ratio: crate::scalar::int(2),
                    },
                    start: 1,
                },
            ),
        }
    }

    /// `nu_{-n} = 1/n` for `n >= 1`, and tent blocks `(1, 2, ..., 2^n, ..., 2)`
    /// from index 0 on.
    pub fn tent_density_example() -> Self {
        WeightSpec {
            domain: IndexDomain::Bilateral,
            form: WeightForm::piecewise(
                0,
                WeightForm::Expr(RationalExpr {
                    coeff: Rational::one(),
                    plus_one_power: 0,
                    abs_power: -1,
                    geometric: Rational::one(),
                }),
                WeightForm::Block {
                    generator: BlockGenerator::GeometricTent {
                        base: crate::scalar::int(2),
                    },
                    start: 0,
                },
            ),
        }
    }

    /// Structural: true when no weight can be zero.
    pub fn all_nonzero(&self) -> bool {
        !self.form.may_vanish()
    }

    pub fn eval_weight(&self, j: i64) -> Result<Rational> {
        self.domain.check(j)?;
        self.form.eval(j)
    }

    pub fn eval_log(&self, j: i64) -> Result<LogMag> {
        self.domain.check(j)?;
        Ok(LogMag::from_log(self.form.eval_log(j)?))
    }

    fn check_range(&self, i: i64, j: i64) -> Result<()> {
        if i > j {
            return Err(Error::InvalidRange { lo: i, hi: j });
        }
        self.domain.check(i)?;
        self.domain.check(j)
    }

    /// `|w_i ... w_j|` for `i <= j`.
    pub fn abs_product(&self, i: i64, j: i64) -> Result<LogMag> {
        self.check_range(i, j)?;
        let mut acc = 0.0;
        for t in i..=j {
            let l = self.form.eval_log(t)?;
            if l == f64::NEG_INFINITY {
                return Ok(LogMag::ZERO);
            }
            acc += l;
        }
        Ok(LogMag::from_log(acc))
    }

    /// Exact `|w_i ... w_j|`.
    pub fn exact_abs_product(&self, i: i64, j: i64) -> Result<Rational> {
        self.check_range(i, j)?;
        let mut acc = Rational::one();
        for t in i..=j {
            let v = self.form.eval(t)?;
            if v.is_zero() {
                return Ok(v);
            }
            acc *= v.abs();
        }
        Ok(acc)
    }

    /// `|w_{-n} ... w_{-k}|`; `k` may be any integer with `n >= k`.
    pub fn backward_product(&self, n: i64, k: i64) -> Result<LogMag> {
        if self.domain != IndexDomain::Bilateral {
            return Err(Error::DomainMismatch(
                "backward products need a bilateral weight".into(),
            ));
        }
        if -n > -k {
            return Err(Error::InvalidRange { lo: -n, hi: -k });
        }
        self.abs_product(-n, -k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logmag::logmag_product;
    use crate::scalar::{int, ratio};

    fn sz() -> WeightSpec {
        WeightSpec::rapidly_decreasing_example()
    }

    #[test]
    fn block_positions() {
        assert_eq!(block_position(0), (1, 0));
        assert_eq!(block_position(1), (1, 1));
        assert_eq!(block_position(2), (2, 0));
        assert_eq!(block_position(5), (2, 3));
        assert_eq!(block_position(6), (3, 0));
        for n in 1..2000u64 {
            assert_eq!(block_position(n * (n - 1)), (n, 0));
            assert_eq!(block_position(n * (n + 1) - 1), (n, 2 * n - 1));
        }
    }

    #[test]
    fn eval_examples() {
        let c = WeightSpec::constant(IndexDomain::Unilateral, int(2));
        assert_eq!(c.eval_weight(5).unwrap(), int(2));
        assert_eq!(sz().eval_weight(12).unwrap(), int(2));
        assert_eq!(sz().eval_weight(-7).unwrap(), ratio(1, 2));
        assert_eq!(sz().eval_weight(0).unwrap(), ratio(1, 2));
        let first: Vec<Rational> = (1..=12).map(|j| sz().eval_weight(j).unwrap()).collect();
        let h = ratio(1, 2);
        let t = int(2);
        assert_eq!(
            first,
            vec![
                h.clone(), t.clone(), h.clone(), h.clone(), t.clone(), t.clone(),
                h.clone(), h.clone(), h, t.clone(), t.clone(), t
            ]
        );
        assert!(matches!(c.eval_weight(0), Err(Error::IndexOutsideDomain { .. })));
    }

    #[test]
    fn tent_density_values() {
        let nu = WeightSpec::tent_density_example();
        let head: Vec<Rational> = (0..12).map(|j| nu.eval_weight(j).unwrap()).collect();
        let expect: Vec<Rational> = [1, 2, 1, 2, 4, 2, 1, 2, 4, 8, 4, 2].iter().map(|&v| int(v)).collect();
        assert_eq!(head, expect);
        for n in 1..40i64 {
            assert_eq!(nu.eval_weight(n * n).unwrap(), crate::scalar::pow2(n));
            assert_eq!(nu.eval_weight(n * (n + 1)).unwrap(), int(1));
        }
        assert_eq!(nu.eval_weight(-4).unwrap(), ratio(1, 4));
    }

    #[test]
    fn product_examples() {
        let c = WeightSpec::constant(IndexDomain::Unilateral, int(2));
        assert!((c.abs_product(1, 3).unwrap().log_abs() - 8f64.ln()).abs() < 1e-12);
        assert!((sz().abs_product(10, 12).unwrap().log_abs() - 8f64.ln()).abs() < 1e-12);
        assert_eq!(sz().exact_abs_product(10, 12).unwrap(), int(8));
        let mut entries = BTreeMap::new();
        entries.insert(4, int(0));
        let z = WeightSpec::new(
            IndexDomain::Unilateral,
            WeightForm::Table { entries, tail: Box::new(WeightForm::constant(int(3))) },
        )
        .unwrap();
        assert!(z.abs_product(2, 6).unwrap().is_zero());
        assert!(!z.all_nonzero());
        assert!(matches!(c.abs_product(3, 2), Err(Error::InvalidRange { .. })));
    }

    #[test]
    fn backward_product_examples() {
        let half = WeightSpec::constant(IndexDomain::Bilateral, ratio(1, 2));
        assert!((half.backward_product(4, 1).unwrap().log_abs() - (1.0f64 / 16.0).ln()).abs() < 1e-12);
        let two = WeightSpec::constant(IndexDomain::Bilateral, int(2));
        assert!((two.backward_product(3, 1).unwrap().log_abs() - 8f64.ln()).abs() < 1e-12);
        let mut entries = BTreeMap::new();
        entries.insert(0, int(0));
        let z = WeightSpec::new(
            IndexDomain::Bilateral,
            WeightForm::Table { entries, tail: Box::new(WeightForm::constant(int(3))) },
        )
        .unwrap();
        for n in 0..10 {
            assert!(z.backward_product(n, 0).unwrap().is_zero());
        }
        assert!(two.backward_product(1, 3).is_err());
        let uni = WeightSpec::constant(IndexDomain::Unilateral, int(2));
        assert!(uni.backward_product(3, 1).is_err());
    }

    #[test]
    fn expr_forms() {
        let inv = RationalExpr { coeff: int(1), plus_one_power: 0, abs_power: -1, geometric: int(1) };
        assert_eq!(inv.eval(4).unwrap(), ratio(1, 4));
        assert!(inv.eval(0).is_err());
        let e = RationalExpr { coeff: int(3), plus_one_power: 2, abs_power: 1, geometric: ratio(1, 2) };
        // 3 * 4^2 * 3 * (1/2)^3 = 18
        assert_eq!(e.eval(-3).unwrap(), int(18));
        assert!((e.eval_log(-3).unwrap() - 18f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn json_encoding() {
        let s = serde_json::to_string(&sz()).unwrap();
        assert_eq!(
            s,
            r#"{"domain":"bilateral","form":{"kind":"piecewise","pivot":1,"below":{"kind":"constant","value":"1/2"},"above":{"kind":"block","generator":{"name":"half_double_runs","ratio":"2"},"start":1}}}"#
        );
        let back: WeightSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, sz());
        let lit: WeightSpec = serde_json::from_str(
            r#"{"domain":"unilateral","form":{"kind":"periodic","values":[1,"1/2","0.25"]}}"#,
        )
        .unwrap();
        assert_eq!(lit.eval_weight(2).unwrap(), ratio(1, 4));
        assert_eq!(lit.eval_weight(3).unwrap(), int(1));
    }

    #[test]
    fn product_is_multiplicative_and_splits() {
        let w = sz();
        for &(i, j) in &[(-20i64, 30i64), (1, 12), (-5, -1), (7, 100)] {
            let direct = w.abs_product(i, j).unwrap();
            let terms = logmag_product((i..=j).map(|t| crate::logmag::logmag_of(&w.eval_weight(t).unwrap())));
            assert!((direct.log_abs() - terms.log_abs()).abs() < 1e-10);
            let exact = w.exact_abs_product(i, j).unwrap();
            assert!((direct.log_abs() - ln_abs_rational(&exact)).abs() < 1e-10);
            for m in i..j {
                let split = w.abs_product(i, m).unwrap() * w.abs_product(m + 1, j).unwrap();
                assert!((split.log_abs() - direct.log_abs()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn table_nested_in_tagged_forms_parses_from_json() {
        let js = r#"{"kind":"table","entries":{"0":"0","-3":"1/2"},"tail":{"kind":"constant","value":"2"}}"#;
        let f: WeightForm = serde_json::from_str(js).unwrap();
        let WeightForm::Table { entries, .. } = &f else { panic!("not a table") };
        assert_eq!(entries.get(&-3), Some(&ratio(1, 2)));
        let back: WeightForm = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
