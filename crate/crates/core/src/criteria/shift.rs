use num_traits::Zero;

use super::{AnalysisConfig, CaseTag, CertLevel, Certificate, Refutation, Status, TheoremTag, VanishingEntry, Verdict};
use crate::error::{Error, Result};
use crate::scalar::{ln_abs_rational, pow2, rational_from_f64};
use crate::spaces::{SpaceKind, SpaceSpec};
use crate::weights::{
    backward_liminf, scan_sup, symbolic_sup_bound, weight_sup, AnchoredLimit, IndexDomain, RangeKind, ScanConfig,
    ScanResult, SupBound, WeightSpec,
};

fn check_space(space: &SpaceSpec, domain: IndexDomain) -> Result<()> {
    if space.domain != domain {
        return Err(Error::DomainMismatch(format!(
            "space over {} but weights over {}",
            space.domain.name(),
            domain.name()
        )));
    }
    match space.kind {
        SpaceKind::C0 | SpaceKind::Lp { .. } => Ok(()),
        _ => Err(Error::InvalidSpec("this analyzer handles c0 and lp only".into())),
    }
}

pub(crate) fn check_bounded(w: &WeightSpec) -> Result<()> {
    match weight_sup(w) {
        SupBound::Infinite => Err(Error::UnboundedWeight),
        _ => Ok(()),
    }
}

pub(crate) fn window_for(cfg: &AnalysisConfig, domain: IndexDomain) -> (i64, i64) {
    let (lo, hi) = cfg.window.unwrap_or(domain.default_window());
    match domain {
        IndexDomain::Unilateral => (lo.max(1), hi.max(1)),
        IndexDomain::Bilateral => (lo, hi),
    }
}

fn scan(w: &WeightSpec, window: (i64, i64), cfg: &AnalysisConfig) -> Result<ScanResult> {
    scan_sup(
        w,
        &ScanConfig {
            window,
            levels: cfg.levels,
            back_width: cfg.back_width,
        },
        None,
    )
}

fn levels_of(r: &ScanResult) -> Vec<CertLevel> {
    r.levels.iter().map(CertLevel::from_scan).collect()
}

/// Running-minimum records of `|w_{-n} ... w_{-k}|` for `n = max(k,1), ...`,
/// stopping once a value drops below `eps` (or hits an exact zero). Records
/// are thinned to drops by at least a factor of two. Returns the records and
/// whether the tolerance was reached.
pub fn backward_vanishing(w: &WeightSpec, k: i64, horizon: u64, eps: f64) -> Result<(Vec<VanishingEntry>, bool)> {
    if w.domain != IndexDomain::Bilateral {
        return Err(Error::DomainMismatch("backward products need a bilateral weight".into()));
    }
    let n0 = k.max(1);
    let target = eps.ln();
    let mut log = w.backward_product(n0, k)?.log_abs();
    let mut records: Vec<VanishingEntry> = Vec::new();
    let mut best = f64::INFINITY;
    let mut kept = f64::INFINITY;
    let last_n = n0 as u64 + horizon.saturating_sub(1);
    for n in n0 as u64..=last_n {
        if n > n0 as u64 {
            let l = w.form.eval_log(-(n as i64))?;
            log = if l == f64::NEG_INFINITY || log == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                log + l
            };
        }
        if log < best {
            best = log;
            let done = log < target;
            if done || log <= kept - std::f64::consts::LN_2 || records.is_empty() {
                records.push(VanishingEntry::new(n, log, Some(k)));
                kept = log;
            }
            if done {
                return Ok((records, true));
            }
        }
    }
    Ok((records, false))
}

/// Exact replay of plain product levels and backward vanishing entries.
pub fn replay_shift(w: &WeightSpec, cert: &Certificate, eps: f64) -> Result<()> {
    for l in &cert.levels {
        let prod = w.exact_abs_product(l.i, l.j)?;
        if prod <= pow2(l.s as i64) {
            return Err(Error::ReplayFailed(format!("level {} at ({}, {}) does not beat 2^{}", l.s, l.i, l.j, l.s)));
        }
    }
    let eps_q = rational_from_f64(eps).ok_or_else(|| Error::ReplayFailed("tolerance".into()))?;
    let mut last: std::collections::BTreeMap<i64, u64> = Default::default();
    for v in &cert.vanishing {
        let k = v.k.ok_or_else(|| Error::ReplayFailed("vanishing entry without anchor".into()))?;
        if let Some(prev) = last.insert(k, v.n) {
            if prev >= v.n {
                return Err(Error::ReplayFailed(format!("vanishing indices for k = {k} not increasing")));
            }
        }
        let exact = w.exact_abs_product(-(v.n as i64), -k)?;
        if v.exact_zero {
            if !exact.is_zero() {
                return Err(Error::ReplayFailed(format!("product at n = {} is not zero", v.n)));
            }
        } else if (ln_abs_rational(&exact) - v.log_value).abs() > 1e-9 * v.log_value.abs().max(1.0) {
            return Err(Error::ReplayFailed(format!("product at n = {} does not match", v.n)));
        }
    }
    // the last record per anchor is below tolerance
    for (&k, &n) in &last {
        let exact = w.exact_abs_product(-(n as i64), -k)?;
        if exact >= eps_q {
            return Err(Error::ReplayFailed(format!("final product for k = {k} is not below tolerance")));
        }
    }
    Ok(())
}

pub fn analyze_unilateral_shift(w: &WeightSpec, space: &SpaceSpec, cfg: &AnalysisConfig) -> Result<Verdict> {
    if w.domain != IndexDomain::Unilateral {
        return Err(Error::DomainMismatch("expected unilateral weights".into()));
    }
    check_space(space, w.domain)?;
    check_bounded(w)?;
    let tag = TheoremTag::UnilateralShift;
    if let SupBound::Finite { bound } = symbolic_sup_bound(w, RangeKind::ForwardAll) {
        return Ok(Verdict::refuted(
            tag,
            cfg,
            vec![Refutation::SupBound {
                range: RangeKind::ForwardAll,
                bound,
            }],
        ));
    }
    let r = scan(w, window_for(cfg, w.domain), cfg)?;
    let status = if r.all_found(cfg.levels) { Status::ChaoticCertified } else { Status::Undetermined };
    let mut v = Verdict::new(status, tag, cfg).with_certificate(Certificate {
        levels: levels_of(&r),
        ..Default::default()
    });
    if status == Status::Undetermined {
        v.notes.push(format!(
            "{} of {} levels found up to j = {}",
            r.levels.len(),
            cfg.levels,
            r.exhausted_horizon
        ));
    }
    Ok(v)
}

pub fn analyze_bilateral_shift_nonzero(w: &WeightSpec, space: &SpaceSpec, cfg: &AnalysisConfig) -> Result<Verdict> {
    if w.domain != IndexDomain::Bilateral {
        return Err(Error::DomainMismatch("expected bilateral weights".into()));
    }
    check_space(space, w.domain)?;
    if !w.all_nonzero() {
        return Err(Error::ZeroWeight);
    }
    check_bounded(w)?;
    let tag = TheoremTag::BilateralShift;
    let mut refs = Vec::new();
    if let AnchoredLimit::BoundedBelow { bound } = backward_liminf(w, 1) {
        refs.push(Refutation::BackwardBoundedBelow { k: 1, bound });
    }
    if let SupBound::Finite { bound } = symbolic_sup_bound(w, RangeKind::ForwardAll) {
        refs.push(Refutation::SupBound {
            range: RangeKind::ForwardAll,
            bound,
        });
    }
    if !refs.is_empty() {
        return Ok(Verdict::refuted(tag, cfg, refs));
    }
    let (vanishing, vanished) = backward_vanishing(w, 1, cfg.horizon, cfg.eps)?;
    let r = scan(w, window_for(cfg, w.domain), cfg)?;
    let ok = vanished && r.all_found(cfg.levels);
    let mut v = Verdict::new(if ok { Status::ChaoticCertified } else { Status::Undetermined }, tag, cfg).with_certificate(
        Certificate {
            levels: levels_of(&r),
            vanishing,
            ..Default::default()
        },
    );
    if !vanished {
        v.notes.push(format!("backward products stay above {} up to n = {}", cfg.eps, cfg.horizon));
    }
    if !r.all_found(cfg.levels) {
        v.notes.push(format!("{} of {} levels found", r.levels.len(), cfg.levels));
    }
    Ok(v)
}

/// Nearest zero weight to the origin within the window.
fn nearest_zero(w: &WeightSpec, window: (i64, i64)) -> Result<Option<i64>> {
    let reach = window.0.unsigned_abs().max(window.1.unsigned_abs()).min(1 << 16) as i64;
    for r in 0..=reach {
        for t in [-r, r] {
            if t >= window.0 && t <= window.1 && w.form.eval_log(t)? == f64::NEG_INFINITY {
                return Ok(Some(t));
            }
            if r == 0 {
                break;
            }
        }
    }
    Ok(None)
}

pub fn analyze_bilateral_shift_general(w: &WeightSpec, space: &SpaceSpec, cfg: &AnalysisConfig) -> Result<Verdict> {
    if w.all_nonzero() {
        return analyze_bilateral_shift_nonzero(w, space, cfg);
    }
    if w.domain != IndexDomain::Bilateral {
        return Err(Error::DomainMismatch("expected bilateral weights".into()));
    }
    check_space(space, w.domain)?;
    check_bounded(w)?;
    let tag = TheoremTag::BilateralShiftZeroWeights;
    let beta_plus = symbolic_sup_bound(w, RangeKind::ForwardNonneg);
    let beta_minus = symbolic_sup_bound(w, RangeKind::ForwardNegOnly);

    let mut refs_i = Vec::new();
    if let SupBound::Finite { bound } = &beta_plus {
        refs_i.push(Refutation::SupBound {
            range: RangeKind::ForwardNonneg,
            bound: bound.clone(),
        });
    }
    let mut refs_ii = Vec::new();
    if let SupBound::Finite { bound } = &beta_minus {
        refs_ii.push(Refutation::SupBound {
            range: RangeKind::ForwardNegOnly,
            bound: bound.clone(),
        });
    }
    for k in 1..=cfg.k_cap as i64 {
        if let AnchoredLimit::BoundedBelow { bound } = backward_liminf(w, k) {
            refs_ii.push(Refutation::BackwardBoundedBelow { k, bound });
            break;
        }
    }
    let refuted_ii = beta_plus == SupBound::Infinite || !refs_ii.is_empty();
    if !refs_i.is_empty() && refuted_ii {
        refs_i.extend(refs_ii);
        return Ok(Verdict::refuted(tag, cfg, refs_i));
    }

    let window = window_for(cfg, w.domain);
    let mut partial: Option<(Certificate, Vec<String>)> = None;
    if refs_i.is_empty() {
        let r = scan(w, (window.0.max(0), window.1), cfg)?;
        let (vanishing, vanished) = match nearest_zero(w, window)? {
            Some(t) => {
                let k = -t;
                let n = k.max(1) as u64;
                (vec![VanishingEntry::new(n, w.backward_product(n as i64, k)?.log_abs(), Some(k))], true)
            }
            None => backward_vanishing(w, 1, cfg.horizon, cfg.eps)?,
        };
        let cert = Certificate {
            levels: levels_of(&r),
            vanishing,
            case_tag: Some(CaseTag::I),
            ..Default::default()
        };
        if vanished && r.all_found(cfg.levels) {
            return Ok(Verdict::new(Status::ChaoticCertified, tag, cfg).with_certificate(cert));
        }
        partial = Some((cert, vec![format!("case I: {} of {} levels on i >= 0, vanishing {}", r.levels.len(), cfg.levels, vanished)]));
    }
    if !refuted_ii && matches!(beta_plus, SupBound::Finite { .. }) {
        let r = scan(w, (window.0, window.1.min(-1)), cfg)?;
        let mut vanishing = Vec::new();
        let mut all = true;
        for k in 1..=cfg.k_cap as i64 {
            let (v, ok) = backward_vanishing(w, k, cfg.horizon, cfg.eps)?;
            vanishing.extend(v);
            all &= ok;
        }
        let cert = Certificate {
            levels: levels_of(&r),
            vanishing,
            case_tag: Some(CaseTag::II),
            ..Default::default()
        };
        if all && r.all_found(cfg.levels) {
            return Ok(Verdict::new(Status::ChaoticCertified, tag, cfg).with_certificate(cert));
        }
        partial = Some((cert, vec![format!("case II: {} of {} levels on j <= -1, vanishing for all k <= {}: {}", r.levels.len(), cfg.levels, cfg.k_cap, all)]));
    }
    let mut v = Verdict::new(Status::Undetermined, tag, cfg);
    if let Some((cert, notes)) = partial {
        v.certificate = Some(cert);
        v.notes = notes;
    }
    Ok(v)
}
