//! Sequence spaces and their (semi)norms on finitely supported vectors.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, ln_abs_rational, powi, serde_rational, Rational, Scalar};
use crate::weights::{IndexDomain, WeightForm};

/// Entries `a_{j,k}` of a Köthe matrix, `k >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KotheMatrix {
    Constant {
        #[serde(with = "serde_rational")]
        value: Rational,
    },
    /// `(|j| + 1)^k`.
    Power,
    /// Row `j` lists `a_{j,1}, a_{j,2}, ...`; columns past the end repeat the
    /// last entry. Rows not listed fall back to `fallback`.
    Table {
        #[serde(with = "rows_serde")]
        rows: BTreeMap<i64, Vec<Rational>>,
        fallback: Box<KotheMatrix>,
    },
}

mod rows_serde {
    use super::*;
    use crate::scalar::serde_rational::Wrap;

    pub fn serialize<S: Serializer>(rows: &BTreeMap<i64, Vec<Rational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(rows.len()))?;
        for (j, row) in rows {
            let row: Vec<String> = row.iter().map(format_rational).collect();
            m.serialize_entry(&j.to_string(), &row)?;
        }
        m.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<i64, Vec<Rational>>, D::Error> {
        let raw: BTreeMap<String, Vec<Wrap>> = BTreeMap::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                let j = k.parse::<i64>().map_err(serde::de::Error::custom)?;
                Ok((j, v.into_iter().map(|w| w.0).collect()))
            })
            .collect()
    }
}

impl KotheMatrix {
    pub fn entry(&self, j: i64, k: u32) -> Rational {
        assert!(k >= 1, "seminorm index starts at 1");
        match self {
            KotheMatrix::Constant { value } => value.clone(),
            KotheMatrix::Power => powi(&int(j.unsigned_abs() as i64 + 1), k as i64),
            KotheMatrix::Table { rows, fallback } => match rows.get(&j) {
                Some(row) if !row.is_empty() => row[(k as usize - 1).min(row.len() - 1)].clone(),
                _ => fallback.entry(j, k),
            },
        }
    }

    /// `ln a_{j,k}`; `-inf` for a zero entry.
    pub fn log_entry(&self, j: i64, k: u32) -> f64 {
        match self {
            KotheMatrix::Power => k as f64 * ((j.unsigned_abs() as f64) + 1.0).ln(),
            _ => ln_abs_rational(&self.entry(j, k)),
        }
    }

    pub fn all_nonzero(&self) -> bool {
        match self {
            KotheMatrix::Constant { value } => !value.is_zero(),
            KotheMatrix::Power => true,
            KotheMatrix::Table { rows, fallback } => {
                rows.values().all(|r| r.iter().all(|v| !v.is_zero())) && fallback.all_nonzero()
            }
        }
    }

    /// Nonnegative entries, monotone in `k`, and some positive entry for
    /// each row, checked on `window x 1..=k_probe`.
    pub fn check(&self, window: (i64, i64), k_probe: u32) -> Result<()> {
        let mut rows: Vec<i64> = (window.0..=window.1).collect();
        if let KotheMatrix::Table { rows: table, .. } = self {
            rows.extend(table.keys().copied());
        }
        for j in rows {
            let mut prev = self.entry(j, 1);
            let mut positive = prev.is_positive();
            if prev.is_negative() {
                return Err(Error::InvalidSpec(format!("negative Köthe entry at ({j}, 1)")));
            }
            for k in 2..=k_probe {
                let cur = self.entry(j, k);
                if cur < prev {
                    return Err(Error::InvalidSpec(format!("Köthe column decreases at ({j}, {k})")));
                }
                positive |= cur.is_positive();
                prev = cur;
            }
            if !positive {
                return Err(Error::InvalidSpec(format!("Köthe row {j} vanishes up to k = {k_probe}")));
            }
        }
        Ok(())
    }
}

pub fn kothe_entry(m: &KotheMatrix, j: i64, k: u32) -> Rational {
    m.entry(j, k)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceKind {
    C0,
    Lp {
        p: f64,
    },
    /// `sum |x_n|^p nu_n`, with a positive weight sequence `nu`.
    WeightedLp {
        p: f64,
        nu: WeightForm,
    },
    /// `p = 0` gives `sup_j |a_{j,k} x_j|`, `p >= 1` gives the `p`-sum.
    Kothe {
        matrix: KotheMatrix,
        p: f64,
    },
    /// `K^N` with `||x||_k = max_{|j| <= k} |x_j|`.
    ProductKn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub domain: IndexDomain,
    #[serde(flatten)]
    pub kind: SpaceKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormValue {
    pub k: u32,
    /// Saturates to `inf` for huge values; see `log_value`.
    pub value: f64,
    pub log_value: f64,
    #[serde(with = "serde_rational::option", skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<Rational>,
    /// Exact `p`-th power for integer `p`.
    #[serde(with = "serde_rational::option", skip_serializing_if = "Option::is_none", default)]
    pub exact_pow: Option<Rational>,
}

impl SeminormValue {
    fn zero(k: u32) -> Self {
        SeminormValue {
            k,
            value: 0.0,
            log_value: f64::NEG_INFINITY,
            exact: Some(Rational::zero()),
            exact_pow: Some(Rational::zero()),
        }
    }
}

fn integer_p(p: f64) -> Option<u32> {
    (p >= 1.0 && p.fract() == 0.0 && p <= 64.0).then_some(p as u32)
}

fn log_sum_exp(logs: &[f64]) -> f64 {
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + logs.iter().map(|l| (l - m).exp()).sum::<f64>().ln()
}

impl SpaceSpec {
    pub fn new(domain: IndexDomain, kind: SpaceKind) -> Result<Self> {
        let s = SpaceSpec { domain, kind };
        s.validate()?;
        Ok(s)
    }

    pub fn c0(domain: IndexDomain) -> Self {
        SpaceSpec { domain, kind: SpaceKind::C0 }
    }

    pub fn lp(domain: IndexDomain, p: f64) -> Self {
        SpaceSpec { domain, kind: SpaceKind::Lp { p } }
    }

    pub fn kothe(domain: IndexDomain, matrix: KotheMatrix, p: f64) -> Self {
        SpaceSpec { domain, kind: SpaceKind::Kothe { matrix, p } }
    }

    /// The weighted space whose density is the tent sequence on `n >= 0` and
    /// `1/|n|` on the negative side.
    pub fn tent_weighted_lp(p: f64) -> Self {
        SpaceSpec {
            domain: IndexDomain::Bilateral,
            kind: SpaceKind::WeightedLp { p, nu: crate::weights::WeightSpec::tent_density_example().form },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            SpaceKind::Lp { p } | SpaceKind::WeightedLp { p, .. } if !(*p >= 1.0 && p.is_finite()) => {
                Err(Error::InvalidSpec(format!("exponent p = {p} must lie in [1, inf)")))
            }
            SpaceKind::Kothe { p, .. } if !(*p == 0.0 || (*p >= 1.0 && p.is_finite())) => {
                Err(Error::InvalidSpec(format!("Köthe exponent p = {p} must be 0 or lie in [1, inf)")))
            }
            SpaceKind::WeightedLp { .. } if self.domain != IndexDomain::Bilateral => {
                Err(Error::InvalidSpec("weighted lp is defined over Z".into()))
            }
            SpaceKind::Kothe { matrix, .. } => matrix.check((-64, 64), 8),
            _ => Ok(()),
        }
    }

    /// `p` of the space; 0 for sup-type kinds.
    pub fn p(&self) -> f64 {
        match &self.kind {
            SpaceKind::C0 | SpaceKind::ProductKn => 0.0,
            SpaceKind::Lp { p } | SpaceKind::WeightedLp { p, .. } | SpaceKind::Kothe { p, .. } => *p,
        }
    }

    /// Banach kinds have a single norm and ignore `k`.
    pub fn is_banach(&self) -> bool {
        !matches!(self.kind, SpaceKind::Kothe { .. } | SpaceKind::ProductKn)
    }

    /// `ln ||e_j||_k`.
    pub fn coordinate_log(&self, j: i64, k: u32) -> f64 {
        match &self.kind {
            SpaceKind::C0 | SpaceKind::Lp { .. } => 0.0,
            SpaceKind::WeightedLp { p, nu } => match nu.eval(j) {
                Ok(v) => ln_abs_rational(&v) / p,
                Err(_) => f64::NAN,
            },
            SpaceKind::Kothe { matrix, .. } => matrix.log_entry(j, k),
            SpaceKind::ProductKn => {
                if j.unsigned_abs() <= k as u64 {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// `||e_j||_k^p` exactly (for sup kinds: `||e_j||_k`), when rational.
    pub fn coordinate_pow_exact(&self, j: i64, k: u32) -> Option<Rational> {
        match &self.kind {
            SpaceKind::C0 | SpaceKind::Lp { .. } => Some(Rational::one()),
            SpaceKind::WeightedLp { nu, .. } => nu.eval(j).ok().map(|v| v.abs()),
            SpaceKind::Kothe { matrix, p } => {
                let a = matrix.entry(j, k);
                if *p == 0.0 {
                    Some(a)
                } else {
                    integer_p(*p).map(|q| powi(&a, q as i64))
                }
            }
            SpaceKind::ProductKn => Some(if j.unsigned_abs() <= k as u64 { Rational::one() } else { Rational::zero() }),
        }
    }

    pub fn seminorm<S: Scalar>(&self, x: &SparseVector<S>, k: u32) -> Result<SeminormValue> {
        if x.domain != self.domain {
            return Err(Error::DomainMismatch(format!(
                "vector over {} but space over {}",
                x.domain.name(),
                self.domain.name()
            )));
        }
        let k = if self.is_banach() { 1 } else { k.max(1) };
        if x.is_zero() {
            return Ok(SeminormValue::zero(k));
        }
        let p = self.p();
        if p == 0.0 {
            let mut best_log = f64::NEG_INFINITY;
            let mut best_exact: Option<Rational> = S::EXACT.then(Rational::zero);
            for (&j, v) in &x.entries {
                let l = v.ln_abs() + self.coordinate_log(j, k);
                best_log = best_log.max(l);
                if let (Some(b), Some(q), Some(c)) = (&mut best_exact, v.to_exact(), self.coordinate_pow_exact(j, k)) {
                    let t = q.abs() * c;
                    if t > *b {
                        *b = t;
                    }
                }
            }
            return Ok(SeminormValue {
                k,
                value: best_log.exp(),
                log_value: best_log,
                exact_pow: best_exact.clone(),
                exact: best_exact,
            });
        }
        let logs: Vec<f64> = x.entries.iter().map(|(&j, v)| p * (v.ln_abs() + self.coordinate_log(j, k))).collect();
        let log_pow = log_sum_exp(&logs);
        let exact_pow = match (S::EXACT, integer_p(p)) {
            (true, Some(q)) => {
                let mut acc = Rational::zero();
                let mut ok = true;
                for (&j, v) in &x.entries {
                    match (v.to_exact(), self.coordinate_pow_exact(j, k)) {
                        (Some(e), Some(c)) => acc += powi(&e.abs(), q as i64) * c,
                        _ => ok = false,
                    }
                }
                ok.then_some(acc)
            }
            _ => None,
        };
        let log_value = log_pow / p;
        Ok(SeminormValue {
            k,
            value: log_value.exp(),
            log_value,
            exact: if p == 1.0 { exact_pow.clone() } else { None },
            exact_pow,
        })
    }
}

/// Seminorms of the canonical vectors `e_j` for `j` in `range`.
pub fn canonical_norm_profile(space: &SpaceSpec, range: (i64, i64), k: u32) -> Result<Vec<(i64, SeminormValue)>> {
    (range.0..=range.1)
        .filter(|j| space.domain.contains(*j))
        .map(|j| Ok((j, space.seminorm(&SparseVector::<Rational>::unit(space.domain, j)?, k)?)))
        .collect()
}

/// A finitely supported sequence; zero entries are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector<S> {
    pub domain: IndexDomain,
    entries: BTreeMap<i64, S>,
}

impl<S: Scalar> SparseVector<S> {
    pub fn zero(domain: IndexDomain) -> Self {
        SparseVector { domain, entries: BTreeMap::new() }
    }

    pub fn unit(domain: IndexDomain, j: i64) -> Result<Self> {
        let mut v = Self::zero(domain);
        v.set(j, S::one())?;
        Ok(v)
    }

    pub fn from_entries<I: IntoIterator<Item = (i64, S)>>(domain: IndexDomain, entries: I) -> Result<Self> {
        let mut v = Self::zero(domain);
        for (j, s) in entries {
            v.set(j, s)?;
        }
        Ok(v)
    }

    pub fn set(&mut self, j: i64, value: S) -> Result<()> {
        self.domain.check(j)?;
        if value.is_zero() {
            self.entries.remove(&j);
        } else {
            self.entries.insert(j, value);
        }
        Ok(())
    }

    pub fn get(&self, j: i64) -> S {
        self.entries.get(&j).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &S)> + '_ {
        self.entries.iter().map(|(j, v)| (*j, v))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_range(&self) -> Option<(i64, i64)> {
        Some((*self.entries.keys().next()?, *self.entries.keys().next_back()?))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.domain);
        for (&j, v) in &self.entries {
            let p = v.clone() * c.clone();
            if !p.is_zero() {
                out.entries.insert(j, p);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch("adding vectors over different domains".into()));
        }
        let mut out = self.clone();
        for (&j, v) in &other.entries {
            let s = out.get(j) + v.clone();
            out.set(j, s)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&(-S::one())))
    }

    /// Entry-wise conversion, e.g. from exact to `f64`.
    pub fn map_scalar<T: Scalar>(&self) -> SparseVector<T> {
        let mut out = SparseVector::zero(self.domain);
        for (&j, v) in &self.entries {
            let t = match v.to_exact() {
                Some(q) => T::from_exact(&q),
                None => T::from_exact(&crate::scalar::rational_from_f64(v.to_f64()).unwrap_or_default()),
            };
            if !t.is_zero() {
                out.entries.insert(j, t);
            }
        }
        out
    }

    pub(crate) fn insert_unchecked(&mut self, j: i64, value: S) {
        if !value.is_zero() {
            self.entries.insert(j, value);
        }
    }
}

impl<S: Scalar> Serialize for SparseVector<S> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        #[derive(Serialize)]
        struct Repr {
            domain: IndexDomain,
            entries: BTreeMap<String, Entry>,
        }
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Entry {
            Exact(String),
            Float(f64),
        }
        let entries = self
            .entries
            .iter()
            .map(|(j, v)| {
                let e = match v.to_exact() {
                    Some(q) => Entry::Exact(format_rational(&q)),
                    None => Entry::Float(v.to_f64()),
                };
                (j.to_string(), e)
            })
            .collect();
        Repr { domain: self.domain, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseVector<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            domain: IndexDomain,
            entries: BTreeMap<String, crate::scalar::serde_rational::Wrap>,
        }
        let r = Repr::deserialize(d)?;
        let mut v = SparseVector::zero(r.domain);
        for (k, q) in r.entries {
            let j: i64 = k.parse().map_err(serde::de::Error::custom)?;
            v.set(j, q.0).map_err(serde::de::Error::custom)?;
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use proptest::prelude::*;
    use IndexDomain::*;

    fn e<S: Scalar>(domain: IndexDomain, j: i64) -> SparseVector<S> {
        SparseVector::unit(domain, j).unwrap()
    }

    #[test]
    fn kothe_entries() {
        assert_eq!(kothe_entry(&KotheMatrix::Power, -3, 2), int(16));
        assert_eq!(kothe_entry(&KotheMatrix::Power, 0, 5), int(1));
        assert_eq!(kothe_entry(&KotheMatrix::Constant { value: int(1) }, 17, 3), int(1));
        let mut rows = BTreeMap::new();
        rows.insert(4, vec![int(0), int(2)]);
        let t = KotheMatrix::Table { rows, fallback: Box::new(KotheMatrix::Power) };
        assert_eq!(t.entry(4, 1), int(0));
        assert_eq!(t.entry(4, 9), int(2));
        assert_eq!(t.entry(5, 1), int(6));
        assert!(!t.all_nonzero());
        assert!(t.check((-5, 5), 4).is_ok());
    }

    #[test]
    fn seminorm_examples() {
        let nu1 = SpaceSpec::tent_weighted_lp(1.0);
        assert_eq!(nu1.seminorm(&e::<Rational>(Bilateral, -4), 1).unwrap().exact, Some(ratio(1, 4)));
        let s = SpaceSpec::kothe(Bilateral, KotheMatrix::Power, 1.0);
        assert_eq!(s.seminorm(&e::<Rational>(Bilateral, 3), 1).unwrap().exact, Some(int(4)));
        for space in [SpaceSpec::c0(Unilateral), SpaceSpec::lp(Unilateral, 2.0)] {
            let z = space.seminorm(&SparseVector::<Rational>::zero(Unilateral), 1).unwrap();
            assert_eq!(z.value, 0.0);
        }
    }

    #[test]
    fn canonical_profiles() {
        let nu2 = SpaceSpec::tent_weighted_lp(2.0);
        let prof = canonical_norm_profile(&nu2, (0, 5), 1).unwrap();
        let expected = [1.0, 2f64.sqrt(), 1.0, 2f64.sqrt(), 2.0, 2f64.sqrt()];
        for ((_, v), x) in prof.iter().zip(expected) {
            assert!((v.value - x).abs() < 1e-12);
        }
        let neg = canonical_norm_profile(&nu2, (-60, -1), 1).unwrap();
        for w in neg.windows(2) {
            assert!(w[0].1.value < w[1].1.value);
        }
        let (j, v) = &neg[10];
        assert!((v.value - (-*j as f64).powf(-0.5)).abs() < 1e-12);
        assert_eq!(v.exact_pow, Some(ratio(1, 50)));
        let c0 = canonical_norm_profile(&SpaceSpec::c0(Unilateral), (0, 20), 1).unwrap();
        assert_eq!(c0.len(), 20);
        assert!(c0.iter().all(|(_, v)| v.exact == Some(int(1))));
    }

    #[test]
    fn product_kn_seminorms() {
        let sp = SpaceSpec { domain: Bilateral, kind: SpaceKind::ProductKn };
        let x = SparseVector::from_entries(Bilateral, [(-5, int(3)), (2, int(-2))]).unwrap();
        assert_eq!(sp.seminorm(&x, 1).unwrap().exact, Some(int(0)));
        assert_eq!(sp.seminorm(&x, 2).unwrap().exact, Some(int(2)));
        assert_eq!(sp.seminorm(&x, 5).unwrap().exact, Some(int(3)));
    }

    #[test]
    fn domain_mismatch_is_reported() {
        let sp = SpaceSpec::c0(Bilateral);
        assert!(matches!(sp.seminorm(&e::<f64>(Unilateral, 1), 1), Err(Error::DomainMismatch(_))));
        assert!(SparseVector::<f64>::unit(Unilateral, 0).is_err());
    }

    #[test]
    fn json_round_trips() {
        let sp = SpaceSpec::kothe(Bilateral, KotheMatrix::Power, 1.0);
        let s = serde_json::to_string(&sp).unwrap();
        assert_eq!(s, r#"{"domain":"bilateral","kind":"kothe","matrix":{"kind":"power"},"p":1.0}"#);
        assert_eq!(serde_json::from_str::<SpaceSpec>(&s).unwrap(), sp);
        let x = SparseVector::from_entries(Bilateral, [(-2, ratio(1, 3)), (4, int(5))]).unwrap();
        let js = serde_json::to_string(&x).unwrap();
        assert_eq!(js, r#"{"domain":"bilateral","entries":{"-2":"1/3","4":"5"}}"#);
        assert_eq!(serde_json::from_str::<SparseVector<Rational>>(&js).unwrap(), x);
    }

    fn arb_vector() -> impl Strategy<Value = SparseVector<Rational>> {
        prop::collection::vec((-12i64..=12, -9i64..=9, 1i64..=5), 0..8).prop_map(|es| {
            SparseVector::from_entries(Bilateral, es.into_iter().map(|(j, n, d)| (j, ratio(n, d)))).unwrap()
        })
    }

    fn spaces() -> Vec<SpaceSpec> {
        vec![
            SpaceSpec::c0(Bilateral),
            SpaceSpec::lp(Bilateral, 1.0),
            SpaceSpec::kothe(Bilateral, KotheMatrix::Power, 0.0),
            SpaceSpec::kothe(Bilateral, KotheMatrix::Power, 1.0),
            SpaceSpec::tent_weighted_lp(1.0),
            SpaceSpec { domain: Bilateral, kind: SpaceKind::ProductKn },
        ]
    }

    proptest! {
        #[test]
        fn triangle_and_homogeneity(x in arb_vector(), y in arb_vector(), n in -6i64..=6, d in 1i64..=4) {
            let c = ratio(n, d);
            for sp in spaces() {
                for k in 1..=3 {
                    let nx = sp.seminorm(&x, k).unwrap().exact.unwrap();
                    let ny = sp.seminorm(&y, k).unwrap().exact.unwrap();
                    let nxy = sp.seminorm(&x.add(&y).unwrap(), k).unwrap().exact.unwrap();
                    prop_assert!(nxy <= &nx + &ny);
                    let ncx = sp.seminorm(&x.scale(&c), k).unwrap().exact.unwrap();
                    prop_assert_eq!(ncx, c.abs() * nx);
                }
            }
        }

        #[test]
        fn kothe_seminorms_are_monotone(x in arb_vector(), p in prop::sample::select(vec![0.0, 1.0, 2.0, 2.5])) {
            let sp = SpaceSpec::kothe(Bilateral, KotheMatrix::Power, p);
            for k in 1..=5 {
                let a = sp.seminorm(&x, k).unwrap();
                let b = sp.seminorm(&x, k + 1).unwrap();
                prop_assert!(a.log_value <= b.log_value + 1e-12);
                if let (Some(ea), Some(eb)) = (a.exact_pow, b.exact_pow) {
                    prop_assert!(ea <= eb);
                }
            }
        }

        #[test]
        fn constant_matrix_is_plain_lp(x in arb_vector(), p in prop::sample::select(vec![1.0, 2.0, 3.0])) {
            let kothe = SpaceSpec::kothe(Bilateral, KotheMatrix::Constant { value: int(1) }, p);
            let lp = SpaceSpec::lp(Bilateral, p);
            let expected = lp.seminorm(&x, 1).unwrap();
            for k in 1..=4 {
                let got = kothe.seminorm(&x, k).unwrap();
                prop_assert_eq!(&got.exact_pow, &expected.exact_pow);
            }
        }
    }
}
