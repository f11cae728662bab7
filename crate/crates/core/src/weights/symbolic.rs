//! Sound symbolic bounds for the catalog forms.
//!
//! A region of indices is cut into finite explicit pieces and one-sided
//! infinite rays. Each piece is summarized by upper bounds on window
//! products (inside, anchored at either end, whole piece); summaries compose
//! left to right. Anything outside the catalog yields `Unknown`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{BlockGenerator, RationalExpr, WeightForm, WeightSpec};
use crate::scalar::{ln_abs_rational, serde_rational, Rational};
use crate::weights::IndexDomain;

/// Largest finite piece evaluated term by term.
const EXPLICIT_CAP: i64 = 1 << 16;
/// Largest index searched for monotonicity or threshold crossings.
const SEARCH_CAP: u64 = 20_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupBound {
    Finite {
        #[serde(with = "serde_rational")]
        bound: Rational,
    },
    Infinite,
    Unknown,
}

impl SupBound {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            SupBound::Finite { bound } => Some(bound),
            _ => None,
        }
    }

    fn from_ext(e: Ext) -> Self {
        match e {
            Some(bound) => SupBound::Finite { bound },
            None => SupBound::Infinite,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeKind {
    /// All `i <= j` in the domain.
    ForwardAll,
    /// `0 <= i <= j`.
    ForwardNonneg,
    /// `i <= j <= -1`.
    ForwardNegOnly,
}

/// Behaviour of anchored products `|w_{-n} ... w_{-k}|` as `n -> inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnchoredLimit {
    /// Every anchored product is at least `bound > 0`.
    BoundedBelow {
        #[serde(with = "serde_rational")]
        bound: Rational,
    },
    /// The anchored products tend to zero.
    Vanishes,
    Unknown,
}

/// Behaviour of single terms `|w_j|` far out on a ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermLimit {
    Zero,
    Positive,
    Unknown,
}

/// Upper bound; `None` is `+inf`.
type Ext = Option<Rational>;

fn ext_mul(a: &Ext, b: &Ext) -> Ext {
    match (a, b) {
        (Some(x), _) if x.is_zero() => Some(Rational::zero()),
        (_, Some(y)) if y.is_zero() => Some(Rational::zero()),
        (Some(x), Some(y)) => Some(x * y),
        _ => None,
    }
}

fn ext_max(a: &Ext, b: &Ext) -> Ext {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x >= y { x.clone() } else { y.clone() }),
        _ => None,
    }
}

#[derive(Debug, Clone)]
struct Summary {
    inner: Ext,
    prefix: Ext,
    suffix: Ext,
    /// Product of the whole piece; `None` for infinite pieces.
    full: Option<Rational>,
    term_max: Ext,
}

impl Summary {
    fn explicit(values: &[Rational]) -> Summary {
        let mut inner: Option<Rational> = None;
        let mut best_end: Option<Rational> = None;
        let mut prefix: Option<Rational> = None;
        let mut cum = Rational::one();
        let mut term_max: Option<Rational> = None;
        for v in values {
            let v = v.abs();
            let end = match &best_end {
                Some(b) if *b > Rational::one() => &v * b,
                _ => v.clone(),
            };
            inner = Some(match inner {
                Some(x) if x >= end => x,
                _ => end.clone(),
            });
            best_end = Some(end);
            cum *= &v;
            prefix = Some(match prefix {
                Some(x) if x >= cum => x,
                _ => cum.clone(),
            });
            term_max = Some(match term_max {
                Some(x) if x >= v => x,
                _ => v,
            });
        }
        let mut suffix: Option<Rational> = None;
        let mut rcum = Rational::one();
        for v in values.iter().rev() {
            rcum *= v.abs();
            suffix = Some(match suffix {
                Some(x) if x >= rcum => x,
                _ => rcum.clone(),
            });
        }
        let zero = || Some(Rational::zero());
        Summary {
            inner: inner.or_else(zero),
            prefix: prefix.or_else(zero),
            suffix: suffix.or_else(zero),
            full: Some(cum),
            term_max: term_max.or_else(zero),
        }
    }

    fn then(self, next: Summary) -> Summary {
        let inner = ext_max(&ext_max(&self.inner, &next.inner), &ext_mul(&self.suffix, &next.prefix));
        let prefix = match &self.full {
            Some(f) => ext_max(&self.prefix, &ext_mul(&Some(f.clone()), &next.prefix)),
            None => self.prefix.clone(),
        };
        let suffix = match &next.full {
            Some(f) => ext_max(&next.suffix, &ext_mul(&self.suffix, &Some(f.clone()))),
            None => next.suffix.clone(),
        };
        let full = match (&self.full, &next.full) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        Summary {
            inner,
            prefix,
            suffix,
            full,
            term_max: ext_max(&self.term_max, &next.term_max),
        }
    }
}

/// One-sided infinite sequence of terms, listed outward from its finite end.
#[derive(Debug, Clone)]
enum Ray {
    Periodic(Vec<Rational>),
    Expr { expr: RationalExpr, m0: u64 },
    Block { generator: BlockGenerator },
}

#[derive(Debug, Clone)]
struct RaySummary {
    inner: Ext,
    anchored: Ext,
    term_max: Ext,
    anchored_inf: AnchoredLimit,
    term_limit: TermLimit,
}

enum Piece<'a> {
    Finite { form: &'a WeightForm, lo: i64, hi: i64 },
    Left { ray: Ray },
    Right { ray: Ray },
}

fn is_unimodular_form(form: &WeightForm) -> bool {
    match form {
        WeightForm::Constant { value } => value.abs().is_one(),
        WeightForm::Periodic { values, .. } => values.iter().all(|v| v.abs().is_one()),
        _ => false,
    }
}

fn decompose<'a>(
    form: &'a WeightForm,
    lo: Option<i64>,
    hi: Option<i64>,
    out: &mut Vec<Piece<'a>>,
) -> Option<()> {
    if let (Some(l), Some(h)) = (lo, hi) {
        if l > h {
            return Some(());
        }
    }
    match form {
        WeightForm::Piecewise { pivot, below, above } => {
            let below_hi = Some(hi.map_or(pivot - 1, |h| h.min(pivot - 1)));
            let above_lo = Some(lo.map_or(*pivot, |l| l.max(*pivot)));
            decompose(below, lo, below_hi, out)?;
            decompose(above, above_lo, hi, out)
        }
        WeightForm::Table { entries, tail } => {
            let mut cursor = lo;
            for &t in entries.keys() {
                if lo.is_some_and(|l| t < l) || hi.is_some_and(|h| t > h) {
                    continue;
                }
                decompose(tail, cursor, Some(t - 1), out)?;
                out.push(Piece::Finite { form, lo: t, hi: t });
                cursor = Some(t + 1);
            }
            decompose(tail, cursor, hi, out)
        }
        WeightForm::Product { left, right } => {
            if is_unimodular_form(right) {
                decompose(left, lo, hi, out)
            } else if is_unimodular_form(left) {
                decompose(right, lo, hi, out)
            } else {
                finite_piece(form, lo, hi, out)
            }
        }
        _ => {
            if lo.is_some() && hi.is_some() {
                return finite_piece(form, lo, hi, out);
            }
            leaf_rays(form, lo, hi, out)
        }
    }
}

fn finite_piece<'a>(
    form: &'a WeightForm,
    lo: Option<i64>,
    hi: Option<i64>,
    out: &mut Vec<Piece<'a>>,
) -> Option<()> {
    let (lo, hi) = (lo?, hi?);
    if hi - lo + 1 > EXPLICIT_CAP {
        return None;
    }
    out.push(Piece::Finite { form, lo, hi });
    Some(())
}

fn outward_values(form: &WeightForm, anchor: i64, step: i64, len: usize) -> Option<Vec<Rational>> {
    (0..len as i64).map(|r| form.eval(anchor + step * r).ok()).collect()
}

fn leaf_rays<'a>(
    form: &'a WeightForm,
    lo: Option<i64>,
    hi: Option<i64>,
    out: &mut Vec<Piece<'a>>,
) -> Option<()> {
    match form {
        WeightForm::Constant { .. } | WeightForm::Periodic { .. } => {
            let len = match form {
                WeightForm::Periodic { values, .. } => values.len(),
                _ => 1,
            };
            match (lo, hi) {
                (None, Some(h)) => out.push(Piece::Left {
                    ray: Ray::Periodic(outward_values(form, h, -1, len)?),
                }),
                (Some(l), None) => out.push(Piece::Right {
                    ray: Ray::Periodic(outward_values(form, l, 1, len)?),
                }),
                (None, None) => {
                    leaf_rays(form, None, Some(-1), out)?;
                    leaf_rays(form, Some(0), None, out)?;
                }
                (Some(_), Some(_)) => unreachable!(),
            }
            Some(())
        }
        WeightForm::Expr(expr) => match (lo, hi) {
            (None, Some(h)) if h <= 0 => {
                out.push(Piece::Left {
                    ray: Ray::Expr { expr: expr.clone(), m0: h.unsigned_abs() },
                });
                Some(())
            }
            (None, Some(h)) => {
                leaf_rays(form, None, Some(0), out)?;
                finite_piece(form, Some(1), Some(h), out)
            }
            (Some(l), None) if l >= 0 => {
                out.push(Piece::Right {
                    ray: Ray::Expr { expr: expr.clone(), m0: l as u64 },
                });
                Some(())
            }
            (Some(l), None) => {
                finite_piece(form, Some(l), Some(-1), out)?;
                leaf_rays(form, Some(0), None, out)
            }
            (None, None) => {
                leaf_rays(form, None, Some(-1), out)?;
                finite_piece(form, Some(0), Some(0), out)?;
                leaf_rays(form, Some(1), None, out)
            }
            (Some(_), Some(_)) => unreachable!(),
        },
        WeightForm::Block { generator, start } => match (lo, hi) {
            (Some(l), None) if l >= *start => {
                out.push(Piece::Right {
                    ray: Ray::Block { generator: generator.clone() },
                });
                Some(())
            }
            _ => None,
        },
        _ => None,
    }
}

fn periodic_ray(vals: &[Rational]) -> RaySummary {
    let vals: Vec<Rational> = vals.iter().map(|v| v.abs()).collect();
    let len = vals.len();
    let period: Rational = vals.iter().product();
    let term_max = vals.iter().max().cloned();
    let partials: Vec<Rational> = vals
        .iter()
        .scan(Rational::one(), |acc, v| {
            *acc *= v;
            Some(acc.clone())
        })
        .collect();
    let anchored_inf = if period >= Rational::one() {
        AnchoredLimit::BoundedBelow {
            bound: partials.iter().min().cloned().unwrap(),
        }
    } else {
        AnchoredLimit::Vanishes
    };
    let term_limit = if vals.iter().all(|v| !v.is_zero()) {
        TermLimit::Positive
    } else {
        TermLimit::Unknown
    };
    if period > Rational::one() {
        return RaySummary {
            inner: None,
            anchored: None,
            term_max,
            anchored_inf,
            term_limit,
        };
    }
    // with a period product <= 1 every window is dominated by one of length <= len
    let mut inner = Rational::zero();
    for phase in 0..len {
        let mut acc = Rational::one();
        for r in 0..len {
            acc *= &vals[(phase + r) % len];
            if acc > inner {
                inner = acc.clone();
            }
        }
    }
    let anchored = partials.iter().max().cloned();
    RaySummary {
        inner: Some(inner),
        anchored,
        term_max,
        anchored_inf,
        term_limit,
    }
}

fn expr_term(expr: &RationalExpr, m: u64) -> Option<Rational> {
    expr.eval(m as i64).ok().map(|v| v.abs())
}

/// First `m` from which `ln |t(m)|` is monotone, and the eventual direction.
fn monotone_from(expr: &RationalExpr) -> Option<(u64, i8)> {
    if expr.geometric.is_zero() {
        return Some((1, -1));
    }
    let a = expr.plus_one_power as f64;
    let b = expr.abs_power as f64;
    let g = expr.geometric.abs();
    let lam_sign: i8 = if g > Rational::one() {
        1
    } else if g < Rational::one() {
        -1
    } else {
        0
    };
    // m(m+1) d/dm ln t = lam m^2 + (a + b + lam) m + b
    if lam_sign != 0 {
        let lam = ln_abs_rational(&g);
        let bb = a + b + lam;
        let disc = bb * bb - 4.0 * lam * b;
        if disc < 0.0 {
            return Some((1, lam_sign));
        }
        let r1 = (-bb + disc.sqrt()) / (2.0 * lam);
        let r2 = (-bb - disc.sqrt()) / (2.0 * lam);
        let root = r1.max(r2);
        let m = if root < 0.0 { 1.0 } else { root.ceil() + 2.0 };
        if !(m.is_finite()) || m > SEARCH_CAP as f64 {
            return None;
        }
        return Some(((m as u64).max(1), lam_sign));
    }
    let s = expr.plus_one_power + expr.abs_power;
    if s != 0 {
        let root = -b / s as f64;
        let m = if root < 0.0 { 1.0 } else { root.floor() + 2.0 };
        if m > SEARCH_CAP as f64 {
            return None;
        }
        return Some(((m as u64).max(1), s.signum() as i8));
    }
    Some((1, expr.abs_power.signum() as i8))
}

#[derive(Debug, PartialEq)]
enum ExprLimit {
    Infinite,
    Zero,
    Finite(Rational),
}

fn expr_limit(expr: &RationalExpr) -> ExprLimit {
    let g = expr.geometric.abs();
    if expr.coeff.is_zero() || g.is_zero() || g < Rational::one() {
        return ExprLimit::Zero;
    }
    if g > Rational::one() {
        return ExprLimit::Infinite;
    }
    match (expr.plus_one_power + expr.abs_power).signum() {
        1 => ExprLimit::Infinite,
        -1 => ExprLimit::Zero,
        _ => ExprLimit::Finite(expr.coeff.abs()),
    }
}

fn expr_ray(expr: &RationalExpr, m0: u64) -> Option<RaySummary> {
    if expr.coeff.is_zero() {
        let z = Some(Rational::zero());
        return Some(RaySummary {
            inner: z.clone(),
            anchored: z.clone(),
            term_max: z,
            anchored_inf: AnchoredLimit::Vanishes,
            term_limit: TermLimit::Zero,
        });
    }
    let (mono, dir) = monotone_from(expr)?;
    let start = mono.max(m0);
    let limit = expr_limit(expr);
    let one = Rational::one();
    let explicit = |upto: u64| -> Option<Vec<Rational>> { (m0..upto).map(|m| expr_term(expr, m)).collect() };
    let term_limit = match &limit {
        ExprLimit::Zero => TermLimit::Zero,
        _ => TermLimit::Positive,
    };
    let grows = match &limit {
        ExprLimit::Infinite => true,
        ExprLimit::Finite(l) => *l > one || (*l == one && dir < 0),
        ExprLimit::Zero => false,
    };
    if grows {
        // terms eventually >= 1: anchored products bounded below by a finite minimum
        let mut n = start;
        while expr_term(expr, n)? < one {
            n += 1;
            if n > SEARCH_CAP {
                return None;
            }
        }
        let head = explicit(n + 1)?;
        let anchored_inf = if head.iter().any(Zero::is_zero) {
            AnchoredLimit::Vanishes
        } else {
            let mut acc = one.clone();
            let mut lb: Option<Rational> = None;
            for v in &head {
                acc *= v;
                lb = Some(match lb {
                    Some(x) if x <= acc => x,
                    _ => acc.clone(),
                });
            }
            AnchoredLimit::BoundedBelow { bound: lb.unwrap() }
        };
        let term_max = match &limit {
            ExprLimit::Infinite => None,
            ExprLimit::Finite(l) => {
                let head = explicit(start)?;
                let tail_sup = if dir < 0 { expr_term(expr, start)? } else { l.clone() };
                let hm = Summary::explicit(&head).term_max;
                ext_max(&hm, &Some(tail_sup))
            }
            ExprLimit::Zero => unreachable!(),
        };
        return Some(RaySummary {
            inner: None,
            anchored: None,
            term_max,
            anchored_inf,
            term_limit,
        });
    }
    // terms eventually <= 1
    let (n, tau) = if dir > 0 {
        let l = match &limit {
            ExprLimit::Finite(l) => l.clone(),
            _ => Rational::zero(),
        };
        (start, l)
    } else {
        let mut n = start;
        loop {
            let t = expr_term(expr, n)?;
            if t <= one {
                break (n, t);
            }
            n += 1;
            if n > SEARCH_CAP {
                return None;
            }
        }
    };
    let head = explicit(n)?;
    let tail = Summary {
        inner: Some(tau.clone()),
        prefix: Some(tau.clone()),
        suffix: Some(tau.clone()),
        full: None,
        term_max: Some(tau.clone()),
    };
    let s = if head.is_empty() { tail } else { Summary::explicit(&head).then(tail) };
    let anchored_inf = match &limit {
        ExprLimit::Finite(l) if *l == one && dir > 0 => AnchoredLimit::Vanishes,
        ExprLimit::Finite(l) if *l == one => AnchoredLimit::BoundedBelow { bound: one.clone() },
        _ => AnchoredLimit::Vanishes,
    };
    Some(RaySummary {
        inner: s.inner,
        anchored: s.prefix,
        term_max: s.term_max,
        anchored_inf,
        term_limit,
    })
}

fn block_ray(generator: &BlockGenerator) -> RaySummary {
    let one = Rational::one();
    match generator {
        BlockGenerator::HalfDoubleRuns { ratio } => {
            let r = ratio.abs();
            if r == one {
                RaySummary {
                    inner: Some(one.clone()),
                    anchored: Some(one.clone()),
                    term_max: Some(one.clone()),
                    anchored_inf: AnchoredLimit::BoundedBelow { bound: one },
                    term_limit: TermLimit::Positive,
                }
            } else {
                let big = if r > one { r } else { one / r };
                RaySummary {
                    inner: None,
                    anchored: None,
                    term_max: Some(big),
                    anchored_inf: AnchoredLimit::Unknown,
                    term_limit: TermLimit::Positive,
                }
            }
        }
        BlockGenerator::GeometricTent { base } => {
            let b = base.abs();
            if b <= one {
                RaySummary {
                    inner: Some(one.clone()),
                    anchored: Some(one.clone()),
                    term_max: Some(one.clone()),
                    anchored_inf: if b == one {
                        AnchoredLimit::BoundedBelow { bound: one }
                    } else {
                        AnchoredLimit::Vanishes
                    },
                    term_limit: TermLimit::Unknown,
                }
            } else {
                RaySummary {
                    inner: None,
                    anchored: None,
                    term_max: None,
                    anchored_inf: AnchoredLimit::BoundedBelow { bound: one },
                    term_limit: TermLimit::Positive,
                }
            }
        }
    }
}

fn ray_summary(ray: &Ray) -> Option<RaySummary> {
    match ray {
        Ray::Periodic(vals) => Some(periodic_ray(vals)),
        Ray::Expr { expr, m0 } => expr_ray(expr, *m0),
        Ray::Block { generator, .. } => Some(block_ray(generator)),
    }
}

fn piece_summary(piece: &Piece) -> Option<Summary> {
    match piece {
        Piece::Finite { form, lo, hi } => {
            let vals: Option<Vec<Rational>> = (*lo..=*hi).map(|j| form.eval(j).ok()).collect();
            Some(Summary::explicit(&vals?))
        }
        Piece::Left { ray } => {
            let r = ray_summary(ray)?;
            Some(Summary {
                inner: r.inner.clone(),
                prefix: r.inner,
                suffix: r.anchored,
                full: None,
                term_max: r.term_max,
            })
        }
        Piece::Right { ray } => {
            let r = ray_summary(ray)?;
            Some(Summary {
                inner: r.inner.clone(),
                prefix: r.anchored,
                suffix: r.inner,
                full: None,
                term_max: r.term_max,
            })
        }
    }
}

fn region_summary(form: &WeightForm, lo: Option<i64>, hi: Option<i64>) -> Option<Option<Summary>> {
    let mut pieces = Vec::new();
    decompose(form, lo, hi, &mut pieces)?;
    let mut acc: Option<Summary> = None;
    for p in &pieces {
        let s = piece_summary(p)?;
        acc = Some(match acc {
            None => s,
            Some(a) => a.then(s),
        });
    }
    Some(acc)
}

fn region(domain: IndexDomain, kind: RangeKind) -> Option<(Option<i64>, Option<i64>)> {
    match (domain, kind) {
        (IndexDomain::Unilateral, RangeKind::ForwardNegOnly) => None,
        (IndexDomain::Unilateral, _) => Some((Some(1), None)),
        (IndexDomain::Bilateral, RangeKind::ForwardAll) => Some((None, None)),
        (IndexDomain::Bilateral, RangeKind::ForwardNonneg) => Some((Some(0), None)),
        (IndexDomain::Bilateral, RangeKind::ForwardNegOnly) => Some((None, Some(-1))),
    }
}

/// Upper bound on `|w_i ... w_j|` over all windows of the range kind.
///
/// A `Finite` answer is a true upper bound and `Infinite` is a proof of
/// unboundedness; on a unilateral domain the negative range is empty and
/// bounded by 0.
pub fn symbolic_sup_bound(spec: &WeightSpec, kind: RangeKind) -> SupBound {
    let Some((lo, hi)) = region(spec.domain, kind) else {
        return SupBound::Finite { bound: Rational::zero() };
    };
    match region_summary(&spec.form, lo, hi) {
        None => SupBound::Unknown,
        Some(None) => SupBound::Finite { bound: Rational::zero() },
        Some(Some(s)) => SupBound::from_ext(s.inner),
    }
}

/// Upper bound on single weights `|w_j|` over the whole domain.
pub fn weight_sup(spec: &WeightSpec) -> SupBound {
    let (lo, hi) = region(spec.domain, RangeKind::ForwardAll).unwrap();
    match region_summary(&spec.form, lo, hi) {
        None => SupBound::Unknown,
        Some(None) => SupBound::Finite { bound: Rational::zero() },
        Some(Some(s)) => SupBound::from_ext(s.term_max),
    }
}

/// Upper bound on `sup_n |w_{-n} ... w_{-k}|`.
pub fn backward_sup(spec: &WeightSpec, k: i64) -> SupBound {
    if spec.domain != IndexDomain::Bilateral {
        return SupBound::Unknown;
    }
    match region_summary(&spec.form, None, Some(-k)) {
        Some(Some(s)) => SupBound::from_ext(s.suffix),
        _ => SupBound::Unknown,
    }
}

/// Limit behaviour of `|w_{-n} ... w_{-k}|` as `n -> inf`.
pub fn backward_liminf(spec: &WeightSpec, k: i64) -> AnchoredLimit {
    if spec.domain != IndexDomain::Bilateral {
        return AnchoredLimit::Unknown;
    }
    let mut pieces = Vec::new();
    if decompose(&spec.form, None, Some(-k), &mut pieces).is_none() {
        return AnchoredLimit::Unknown;
    }
    let mut iter = pieces.iter();
    let Some(Piece::Left { ray }) = iter.next() else {
        return AnchoredLimit::Unknown;
    };
    let mut factor = Rational::one();
    for p in iter {
        match p {
            Piece::Finite { form, lo, hi } => {
                for j in *lo..=*hi {
                    match form.eval(j) {
                        Ok(v) => factor *= v.abs(),
                        Err(_) => return AnchoredLimit::Unknown,
                    }
                }
            }
            _ => return AnchoredLimit::Unknown,
        }
    }
    if factor.is_zero() {
        return AnchoredLimit::Vanishes;
    }
    match ray_summary(ray).map(|r| r.anchored_inf) {
        Some(AnchoredLimit::BoundedBelow { bound }) => AnchoredLimit::BoundedBelow { bound: bound * factor },
        Some(AnchoredLimit::Vanishes) => AnchoredLimit::Vanishes,
        _ => AnchoredLimit::Unknown,
    }
}

/// Limit of `|w_j|` as `j -> -inf` (the weights are read up to index `hi`).
pub fn term_limit_left(spec: &WeightSpec, hi: i64) -> TermLimit {
    if spec.domain != IndexDomain::Bilateral {
        return TermLimit::Unknown;
    }
    let mut pieces = Vec::new();
    if decompose(&spec.form, None, Some(hi), &mut pieces).is_none() {
        return TermLimit::Unknown;
    }
    match pieces.first() {
        Some(Piece::Left { ray }) => ray_summary(ray).map_or(TermLimit::Unknown, |r| r.term_limit),
        _ => TermLimit::Unknown,
    }
}

/// Lower bound on `|w_j|` for `j >= lo`, when the catalog provides one.
pub fn weight_inf_right(spec: &WeightSpec, lo: i64) -> Option<Rational> {
    let mut pieces = Vec::new();
    decompose(&spec.form, Some(lo), None, &mut pieces)?;
    let mut lb: Option<Rational> = None;
    let mut push = |v: Rational| {
        lb = Some(match lb.take() {
            Some(x) if x <= v => x,
            _ => v,
        });
    };
    for p in &pieces {
        match p {
            Piece::Finite { form, lo, hi } => {
                for j in *lo..=*hi {
                    push(form.eval(j).ok()?.abs());
                }
            }
            Piece::Right { ray } => match ray {
                Ray::Periodic(vals) => vals.iter().for_each(|v| push(v.abs())),
                Ray::Block { generator: BlockGenerator::GeometricTent { base }, .. } if base.abs() >= Rational::one() => {
                    push(Rational::one())
                }
                Ray::Block { generator: BlockGenerator::HalfDoubleRuns { ratio }, .. } => {
                    let r = ratio.abs();
                    push(if r >= Rational::one() { Rational::one() / r } else { r });
                }
                _ => return None,
            },
            Piece::Left { .. } => return None,
        }
    }
    lb
}
