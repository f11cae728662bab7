use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::shift::{check_bounded, window_for};
use super::{AnalysisConfig, CertLevel, Certificate, Refutation, Status, TheoremTag, VanishingEntry, Verdict};
use crate::error::{Error, Result};
use crate::operators::{check_shift_well_defined, WdCaps, WdStatus};
use crate::scalar::{ln_abs_rational, powi, rational_from_f64, Rational};
use crate::spaces::{KotheMatrix, SpaceKind, SpaceSpec};
use crate::weights::{
    backward_liminf, backward_sup, scan_sup, symbolic_sup_bound, term_limit_left, AnchoredLimit, IndexDomain, RangeKind,
    RatioAdjust, ScanConfig, ScanResult, SupBound, TermLimit, WeightForm, WeightSpec,
};

/// `a_{i,k} / a_{j+1,l}` for a Köthe matrix.
pub struct KotheRatio<'a> {
    pub matrix: &'a KotheMatrix,
    pub k: u32,
    pub l: u32,
}

impl RatioAdjust for KotheRatio<'_> {
    fn left_log(&self, i: i64) -> f64 {
        self.matrix.log_entry(i, self.k)
    }
    fn right_log(&self, j_next: i64) -> f64 {
        self.matrix.log_entry(j_next, self.l)
    }
    fn left_exact(&self, i: i64) -> Rational {
        self.matrix.entry(i, self.k)
    }
    fn right_exact(&self, j_next: i64) -> Rational {
        self.matrix.entry(j_next, self.l)
    }
}

/// `(nu_i / nu_{j+1})^{1/p}` for the weighted space with density `nu`.
///
/// The factor is irrational in general, so the exact check compares
/// `p`-th powers; it is only available for integer `p`.
pub struct WeightedRatio<'a> {
    pub nu: &'a WeightForm,
    pub p: f64,
}

impl RatioAdjust for WeightedRatio<'_> {
    fn left_log(&self, i: i64) -> f64 {
        self.nu.eval_log(i).unwrap_or(f64::NEG_INFINITY) / self.p
    }
    fn right_log(&self, j_next: i64) -> f64 {
        self.nu.eval_log(j_next).unwrap_or(f64::NEG_INFINITY) / self.p
    }
    fn left_exact(&self, i: i64) -> Rational {
        self.nu.eval(i).unwrap_or_else(|_| Rational::zero())
    }
    fn right_exact(&self, j_next: i64) -> Rational {
        self.nu.eval(j_next).unwrap_or_else(|_| Rational::zero())
    }
    fn exact_check(&self, spec: &WeightSpec, i: i64, j: i64, threshold: &Rational) -> Option<Result<bool>> {
        let Some(q) = integer_p(self.p) else {
            return Some(Ok(false));
        };
        Some((|| {
            let prod = spec.exact_abs_product(i, j)?;
            let left = self.nu.eval(i)?.abs();
            let right = self.nu.eval(j + 1)?.abs();
            Ok(left * powi(&prod, q) > powi(threshold, q) * right)
        })())
    }
}

fn integer_p(p: f64) -> Option<i64> {
    (p >= 1.0 && p.fract() == 0.0 && p <= 64.0).then_some(p as i64)
}

/// Values of `a_{-n,k} |w_{-n} ... w_{-1}|` for the listed `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingRow {
    pub n: u64,
    pub ks: Vec<u32>,
    pub log_values: Vec<f64>,
}

impl VanishingRow {
    pub fn values(&self) -> Vec<f64> {
        self.log_values.iter().map(|l| l.exp()).collect()
    }
}

pub fn kothe_vanishing_table(w: &WeightSpec, matrix: &KotheMatrix, ks: &[u32], horizon: u64) -> Result<Vec<VanishingRow>> {
    if w.domain != IndexDomain::Bilateral {
        return Err(Error::DomainMismatch("the vanishing table needs bilateral weights".into()));
    }
    let mut rows = Vec::with_capacity(horizon as usize);
    let mut log = 0.0;
    for n in 1..=horizon {
        let l = w.form.eval_log(-(n as i64))?;
        log = if l == f64::NEG_INFINITY { f64::NEG_INFINITY } else { log + l };
        rows.push(VanishingRow {
            n,
            ks: ks.to_vec(),
            log_values: ks.iter().map(|&k| matrix.log_entry(-(n as i64), k) + log).collect(),
        });
    }
    Ok(rows)
}

/// Running-minimum records of `log a_{-n} + log |w_{-n} ... w_{-1}|` until the
/// value drops below `eps`.
fn adjusted_vanishing(
    w: &WeightSpec,
    density_log: &dyn Fn(i64) -> f64,
    k: u32,
    horizon: u64,
    eps: f64,
) -> Result<(Vec<VanishingEntry>, bool)> {
    let target = eps.ln();
    let mut log = 0.0;
    let mut best = f64::INFINITY;
    let mut kept = f64::INFINITY;
    let mut records = Vec::new();
    for n in 1..=horizon {
        let l = w.form.eval_log(-(n as i64))?;
        log = if l == f64::NEG_INFINITY { f64::NEG_INFINITY } else { log + l };
        let v = density_log(-(n as i64)) + log;
        if v < best {
            best = v;
            let done = v < target;
            if done || v <= kept - std::f64::consts::LN_2 || records.is_empty() {
                records.push(VanishingEntry::new(n, v, Some(k as i64)));
                kept = v;
            }
            if done {
                return Ok((records, true));
            }
        }
    }
    Ok((records, false))
}

fn check_inputs(w: &WeightSpec, space: &SpaceSpec, cfg: &AnalysisConfig) -> Result<Vec<String>> {
    if !w.all_nonzero() {
        return Err(Error::ZeroWeight);
    }
    check_bounded(w)?;
    if space.domain != w.domain {
        return Err(Error::DomainMismatch("space and weights live on different index sets".into()));
    }
    let caps = WdCaps {
        k_max: cfg.k_cap,
        ..WdCaps::default()
    };
    let report = check_shift_well_defined(w, space, &caps);
    match report.status {
        WdStatus::Verified => Ok(Vec::new()),
        WdStatus::FailedAt { index, detail } => {
            Err(Error::InvalidSpec(format!("the shift is not well defined (index {index}: {detail})")))
        }
        WdStatus::UndeterminedAtCaps => Ok(vec!["well-definedness undetermined at caps".into()]),
    }
}

fn scan_with(w: &WeightSpec, cfg: &AnalysisConfig, ratio: &dyn RatioAdjust) -> Result<ScanResult> {
    scan_sup(
        w,
        &ScanConfig {
            window: window_for(cfg, w.domain),
            levels: cfg.levels,
            back_width: cfg.back_width,
        },
        Some(ratio),
    )
}

fn tag_for(domain: IndexDomain) -> TheoremTag {
    match domain {
        IndexDomain::Unilateral => TheoremTag::KotheUnilateral,
        IndexDomain::Bilateral => TheoremTag::KotheBilateral,
    }
}

/// Positive lower bound on every entry, when the catalog gives one.
fn matrix_lower_bound(m: &KotheMatrix) -> Option<Rational> {
    match m {
        KotheMatrix::Constant { value } if !value.is_zero() => Some(value.clone()),
        KotheMatrix::Power => Some(Rational::one()),
        _ => None,
    }
}

pub fn analyze_kothe(w: &WeightSpec, matrix: &KotheMatrix, p: f64, cfg: &AnalysisConfig) -> Result<Verdict> {
    if !matrix.all_nonzero() {
        return Err(Error::ZeroKotheEntry);
    }
    let space = SpaceSpec::new(w.domain, SpaceKind::Kothe { matrix: matrix.clone(), p })?;
    let notes = check_inputs(w, &space, cfg)?;
    let tag = tag_for(w.domain);

    // The ratio at l = k is the plain product for a constant matrix, and at
    // most the plain product for the power matrix on N.
    let mut refs = Vec::new();
    let ratio_bounded = match matrix {
        KotheMatrix::Constant { .. } => true,
        KotheMatrix::Power => w.domain == IndexDomain::Unilateral,
        _ => false,
    };
    if ratio_bounded {
        if let SupBound::Finite { bound } = symbolic_sup_bound(w, RangeKind::ForwardAll) {
            refs.push(Refutation::KotheRatioBound { bound });
        }
    }
    if w.domain == IndexDomain::Bilateral {
        if let (AnchoredLimit::BoundedBelow { bound }, Some(lb)) = (backward_liminf(w, 1), matrix_lower_bound(matrix)) {
            refs.push(Refutation::KotheBackwardBoundedBelow { bound: bound * lb });
        }
    }
    if !refs.is_empty() {
        let mut v = Verdict::refuted(tag, cfg, refs);
        v.notes = notes;
        return Ok(v);
    }

    // every seminorm of a constant matrix is a multiple of the first
    let (k_cap, l_cap) = match matrix {
        KotheMatrix::Constant { .. } => (1, 1),
        _ => (cfg.k_cap, cfg.l_cap),
    };
    let mut chosen: Option<(u32, Vec<CertLevel>)> = None;
    let mut best_partial: Vec<CertLevel> = Vec::new();
    for k in 1..=k_cap {
        let scans: Vec<Result<ScanResult>> = (1..=l_cap)
            .into_par_iter()
            .map(|l| scan_with(w, cfg, &KotheRatio { matrix, k, l }))
            .collect();
        let mut levels = Vec::new();
        let mut all = true;
        for (l, r) in (1..=l_cap).zip(scans) {
            let r = r?;
            all &= r.all_found(cfg.levels);
            levels.extend(r.levels.iter().map(|s| CertLevel {
                k: Some(k),
                l: Some(l),
                ..CertLevel::from_scan(s)
            }));
        }
        if all {
            chosen = Some((k, levels));
            break;
        }
        if levels.len() > best_partial.len() {
            best_partial = levels;
        }
    }

    let mut cert = Certificate::default();
    let mut vanished = true;
    if w.domain == IndexDomain::Bilateral {
        // entries grow with k, so vanishing at k_cap gives every smaller k
        let k = k_cap;
        let (mut records, ok) = adjusted_vanishing(w, &|j| matrix.log_entry(j, k), k, cfg.horizon, cfg.eps)?;
        if ok {
            let n = records.last().map_or(1, |r| r.n);
            let row = &kothe_vanishing_table(w, matrix, &(1..k).collect::<Vec<_>>(), n)?[n as usize - 1];
            for (kk, lv) in row.ks.iter().zip(&row.log_values) {
                records.push(VanishingEntry::new(n, *lv, Some(*kk as i64)));
            }
        }
        cert.vanishing = records;
        vanished = ok;
    }
    let mut v = match chosen {
        Some((_, levels)) if vanished => {
            cert.levels = levels;
            Verdict::new(Status::ChaoticCertified, tag, cfg).with_certificate(cert)
        }
        Some((k, levels)) => {
            cert.levels = levels;
            let mut v = Verdict::new(Status::Undetermined, tag, cfg).with_certificate(cert);
            v.notes.push(format!("ratio scans succeed at k = {k} but condition (a) is not reached by n = {}", cfg.horizon));
            v
        }
        None => {
            cert.levels = best_partial;
            let mut v = Verdict::new(Status::Undetermined, tag, cfg).with_certificate(cert);
            v.notes.push(format!("no k <= {} passes the ratio scans for all l <= {}", k_cap, l_cap));
            v
        }
    };
    v.notes.extend(notes);
    Ok(v)
}

fn replay_levels<'a>(w: &WeightSpec, cert: &Certificate, ratio_for: &dyn Fn(u32, u32) -> Box<dyn RatioAdjust + 'a>) -> Result<()> {
    for lvl in &cert.levels {
        let (k, l) = (lvl.k.unwrap_or(1), lvl.l.unwrap_or(1));
        let level = crate::weights::ScanLevel {
            s: lvl.s,
            i: lvl.i,
            j: lvl.j,
            log_product: lvl.log_product,
        };
        if !level.replay(w, ratio_for(k, l).as_ref())? {
            return Err(Error::ReplayFailed(format!("level {} (k = {k}, l = {l}) at ({}, {})", lvl.s, lvl.i, lvl.j)));
        }
    }
    Ok(())
}

fn replay_vanishing(
    w: &WeightSpec,
    cert: &Certificate,
    eps: f64,
    density_pow: &dyn Fn(i64, u32) -> Result<(Rational, i64)>,
) -> Result<()> {
    let eps_q = rational_from_f64(eps).ok_or_else(|| Error::ReplayFailed("tolerance".into()))?;
    let mut last = std::collections::BTreeMap::new();
    for v in &cert.vanishing {
        let k = v.k.unwrap_or(1) as u32;
        let prod = w.exact_abs_product(-(v.n as i64), -1)?;
        // density_pow returns (d, q) with the quantity equal to (d * prod^q)^(1/q)
        let (d, q) = density_pow(-(v.n as i64), k)?;
        let pow = d * powi(&prod, q);
        let log = ln_abs_rational(&pow) / q as f64;
        if (log - v.log_value).abs() > 1e-9 * v.log_value.abs().max(1.0) {
            return Err(Error::ReplayFailed(format!("vanishing value at n = {} (k = {k}) does not match", v.n)));
        }
        last.insert(k, (pow, q));
    }
    for (k, (pow, q)) in last {
        if pow >= powi(&eps_q, q) {
            return Err(Error::ReplayFailed(format!("final vanishing value for k = {k} is not below tolerance")));
        }
    }
    Ok(())
}

/// Exact replay of a Köthe certificate.
pub fn replay_kothe(w: &WeightSpec, matrix: &KotheMatrix, cert: &Certificate, eps: f64) -> Result<()> {
    replay_levels(w, cert, &|k, l| Box::new(KotheRatio { matrix, k, l }))?;
    replay_vanishing(w, cert, eps, &|j, k| Ok((matrix.entry(j, k), 1)))
}

/// Exact replay of a weighted `lp` certificate; requires integer `p`.
pub fn replay_weighted_lp(w: &WeightSpec, nu: &WeightForm, p: f64, cert: &Certificate, eps: f64) -> Result<()> {
    let q = integer_p(p).ok_or_else(|| Error::ReplayFailed(format!("exact replay needs an integer exponent, got {p}")))?;
    replay_levels(w, cert, &|_, _| Box::new(WeightedRatio { nu, p }))?;
    replay_vanishing(w, cert, eps, &|j, _| Ok((nu.eval(j)?.abs(), q)))
}

/// The weighted space `lp(Z, nu)` is the Köthe space with `a_{j,k} = nu_j^{1/p}`
/// for every `k`, so one seminorm index suffices.
pub fn analyze_weighted_lp(w: &WeightSpec, nu: &WeightForm, p: f64, cfg: &AnalysisConfig) -> Result<Verdict> {
    if w.domain != IndexDomain::Bilateral {
        return Err(Error::DomainMismatch("weighted lp is defined over Z".into()));
    }
    if nu.may_vanish() {
        return Err(Error::InvalidSpec("the density must be positive".into()));
    }
    let space = SpaceSpec::new(w.domain, SpaceKind::WeightedLp { p, nu: nu.clone() })?;
    let notes = check_inputs(w, &space, cfg)?;
    let tag = TheoremTag::WeightedLp;

    if let WeightForm::Constant { .. } = nu {
        let mut refs = Vec::new();
        if let SupBound::Finite { bound } = symbolic_sup_bound(w, RangeKind::ForwardAll) {
            refs.push(Refutation::KotheRatioBound { bound });
        }
        if let AnchoredLimit::BoundedBelow { .. } = backward_liminf(w, 1) {
            refs.push(Refutation::DensityBoundedBelow);
        }
        if !refs.is_empty() {
            let mut v = Verdict::refuted(tag, cfg, refs);
            v.notes = notes;
            return Ok(v);
        }
    }

    let mut cert = Certificate::default();
    let nu_spec = WeightSpec { domain: IndexDomain::Bilateral, form: nu.clone() };
    let density_zero = term_limit_left(&nu_spec, -1) == TermLimit::Zero;
    let vanished = match (density_zero, backward_sup(w, 1)) {
        (true, SupBound::Finite { bound }) => {
            cert.symbolic_vanishing = Some(format!(
                "nu_(-n) tends to 0 and |w_(-n) ... w_(-1)| <= {}",
                crate::scalar::format_rational(&bound)
            ));
            true
        }
        _ => {
            let (records, ok) = adjusted_vanishing(w, &|j| nu.eval_log(j).unwrap_or(f64::NAN) / p, 1, cfg.horizon, cfg.eps)?;
            cert.vanishing = records;
            ok
        }
    };
    let r = scan_with(w, cfg, &WeightedRatio { nu, p })?;
    cert.levels = r.levels.iter().map(CertLevel::from_scan).collect();
    let ok = vanished && r.all_found(cfg.levels);
    let mut v = Verdict::new(if ok { Status::ChaoticCertified } else { Status::Undetermined }, tag, cfg).with_certificate(cert);
    if !r.all_found(cfg.levels) {
        v.notes.push(format!("{} of {} levels found", r.levels.len(), cfg.levels));
    }
    if !vanished {
        v.notes.push("condition (a) not reached".into());
    }
    if integer_p(p).is_none() {
        v.notes.push("non-integer exponent: levels are numeric only".into());
    }
    v.notes.extend(notes);
    Ok(v)
}
