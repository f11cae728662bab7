use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use super::shift::analyze_bilateral_shift_general;
use super::{
    analyze_unilateral_shift, AnalysisConfig, CertLevel, Certificate, Refutation, Status, TheoremTag, VanishingEntry,
    Verdict,
};
use crate::error::{Error, Result};
use crate::operators::{DiscreteSystem, Masses, MapKind};
use crate::scalar::{ln_abs_rational, pow2, powi, rational_from_f64, Rational};
use crate::spaces::SpaceSpec;
use crate::weights::{weight_sup, IndexDomain, RangeKind, SupBound, WeightSpec};

/// Singletons of the window ordered by `(|x|, x)`, at most `cap` of them.
pub fn default_candidates(sys: &DiscreteSystem, cap: usize) -> Vec<BTreeSet<i64>> {
    let (lo, hi) = sys.window;
    let mut pts: Vec<i64> = Vec::with_capacity(cap);
    let reach = lo.unsigned_abs().max(hi.unsigned_abs());
    'outer: for r in 0..=reach {
        let r = r as i64;
        for x in [-r, r] {
            if x >= lo && x <= hi && sys.domain.contains(x) && !(r == 0 && !pts.is_empty()) {
                pts.push(x);
                if pts.len() >= cap {
                    break 'outer;
                }
            }
            if r == 0 {
                break;
            }
        }
    }
    pts.into_iter().map(|x| BTreeSet::from([x])).collect()
}

/// Per-depth values for one candidate: `ln mu_n(f^{-n} B)` (or the sup of the
/// cocycle over `f^{-n} B` for c0) and whether the preimage became empty.
struct Trace {
    values: Vec<f64>,
    emptied: bool,
}

fn trace_candidate(sys: &DiscreteSystem, b: &BTreeSet<i64>, horizon: u64, c0: bool) -> Result<Trace> {
    let mut cur: BTreeMap<i64, f64> = b.iter().filter(|x| sys.domain.contains(**x) && sys.in_window(**x)).map(|x| (*x, 0.0)).collect();
    let mut values = Vec::new();
    for _ in 0..horizon {
        let mut next = BTreeMap::new();
        for (&y, &ly) in &cur {
            for x in sys.inverse_point(y) {
                if !sys.in_window(x) {
                    return Ok(Trace { values, emptied: false });
                }
                let lw = sys.weights.eval_log(x)?;
                next.insert(x, if lw == f64::NEG_INFINITY { lw } else { ly + lw });
            }
        }
        cur = next;
        if cur.is_empty() {
            values.push(f64::NEG_INFINITY);
            return Ok(Trace { values, emptied: true });
        }
        let v = if c0 {
            cur.values().cloned().fold(f64::NEG_INFINITY, f64::max)
        } else {
            let logs: Vec<f64> = cur.iter().map(|(&x, &l)| sys.p * l + ln_abs_rational(&sys.masses.mass(x))).collect();
            log_sum_exp(&logs)
        };
        values.push(v);
    }
    Ok(Trace { values, emptied: false })
}

fn log_sum_exp(logs: &[f64]) -> f64 {
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + logs.iter().map(|l| (l - m).exp()).sum::<f64>().ln()
}

fn integer_p(p: f64) -> Option<i64> {
    (p.fract() == 0.0 && p >= 1.0 && p <= 64.0).then_some(p as i64)
}

fn set_mass(sys: &DiscreteSystem, b: &BTreeSet<i64>) -> Rational {
    b.iter().map(|x| sys.masses.mass(*x)).sum()
}

/// Exact `mu_n(f^{-n} B)` for integer `p`, or the exact cocycle sup for c0.
fn exact_value(sys: &DiscreteSystem, b: &BTreeSet<i64>, n: u64, c0: bool) -> Result<Rational> {
    let pre = sys.preimage_n(b, n);
    if c0 {
        let mut best = Rational::zero();
        for &x in &pre.points {
            let c = sys.cocycle_exact(x, n)?.abs();
            if c > best {
                best = c;
            }
        }
        return Ok(best);
    }
    let q = integer_p(sys.p).ok_or_else(|| Error::ReplayFailed(format!("exact replay needs an integer exponent, got {}", sys.p)))?;
    let mut acc = Rational::zero();
    for &x in &pre.points {
        acc += powi(&sys.cocycle_exact(x, n)?.abs(), q) * sys.masses.mass(x);
    }
    Ok(acc)
}

/// `ln` of the level quantity: `mu_n / mu(B)` for lp, the cocycle sup for c0.
fn exact_level_quantity(sys: &DiscreteSystem, b: &BTreeSet<i64>, n: u64, c0: bool) -> Result<Rational> {
    let v = exact_value(sys, b, n, c0)?;
    Ok(if c0 { v } else { v / set_mass(sys, b) })
}

/// The operator never expands: `|w| <= 1` and, for lp, injective maps with
/// counting measure.
fn never_expands(sys: &DiscreteSystem, c0: bool) -> Option<Refutation> {
    let w = WeightSpec { domain: sys.domain, form: sys.weights.clone() };
    let SupBound::Finite { bound } = weight_sup(&w) else {
        return None;
    };
    if bound > Rational::one() {
        return None;
    }
    let injective = matches!(sys.map, MapKind::Shift { .. } | MapKind::Affine { .. }) && matches!(sys.masses, Masses::Counting);
    (c0 || injective).then_some(Refutation::SupBound { range: RangeKind::ForwardAll, bound: Rational::one() })
}

fn analyze(sys: &DiscreteSystem, candidates: Option<&[BTreeSet<i64>]>, cfg: &AnalysisConfig, c0: bool) -> Result<Verdict> {
    sys.validate()?;
    let tag = if c0 { TheoremTag::CompositionC0 } else { TheoremTag::CompositionLp };

    if let Some(w) = sys.as_shift() {
        let space = if c0 { SpaceSpec::c0(w.domain) } else { SpaceSpec::lp(w.domain, sys.p) };
        let v = match w.domain {
            IndexDomain::Unilateral => analyze_unilateral_shift(&w, &space, cfg)?,
            IndexDomain::Bilateral => analyze_bilateral_shift_general(&w, &space, cfg)?,
        };
        if v.status == Status::NotChaoticSymbolic {
            let mut out = Verdict::refuted(tag, cfg, v.refutation);
            out.notes.push("refuted through the shift reduction".into());
            return Ok(out);
        }
    }
    if let Some(r) = never_expands(sys, c0) {
        return Ok(Verdict::refuted(tag, cfg, vec![r]));
    }

    let owned;
    let cands: &[BTreeSet<i64>] = match candidates {
        Some(c) => c,
        None => {
            owned = default_candidates(sys, cfg.candidate_cap);
            &owned
        }
    };
    if cands.is_empty() {
        return Err(Error::InvalidSpec("no candidate sets inside the window".into()));
    }
    let eps_log = cfg.eps.ln();
    let ln2 = std::f64::consts::LN_2;
    let exact_ok = c0 || integer_p(sys.p).is_some();

    let mut found: Vec<Option<CertLevel>> = vec![None; cfg.levels as usize];
    let mut family: Vec<BTreeSet<i64>> = Vec::new();
    let mut vanishing: Vec<VanishingEntry> = Vec::new();
    let mut vanished_any = false;
    let mut max_depth = 0u64;
    for b in cands {
        if b.is_empty() {
            continue;
        }
        let tr = trace_candidate(sys, b, cfg.horizon, c0)?;
        max_depth = max_depth.max(tr.values.len() as u64);
        let Some(pos) = tr.values.iter().position(|v| *v < eps_log) else {
            continue;
        };
        vanished_any = true;
        let ln_mu_b = if c0 { 0.0 } else { ln_abs_rational(&set_mass(sys, b)) };
        let fam_idx = family.len();
        let mut used = false;
        for (d, &v) in tr.values.iter().enumerate() {
            let n = d as u64 + 1;
            let r = v - ln_mu_b;
            for s in 1..=cfg.levels {
                let slot = &mut found[s as usize - 1];
                if slot.is_some() || r <= s as f64 * ln2 {
                    continue;
                }
                if exact_ok && exact_level_quantity(sys, b, n, c0)? <= pow2(s as i64) {
                    continue;
                }
                *slot = Some(CertLevel {
                    s,
                    i: *b.first().unwrap(),
                    j: *b.last().unwrap(),
                    log_product: r,
                    k: None,
                    l: None,
                    n: Some(n),
                    candidate: Some(fam_idx),
                });
                used = true;
            }
        }
        if used {
            family.push(b.clone());
            let mut e = VanishingEntry::new(pos as u64 + 1, tr.values[pos], None);
            e.exact_zero = tr.emptied && pos + 1 == tr.values.len();
            e.candidate = Some(fam_idx);
            vanishing.push(e);
        }
        if found.iter().all(Option::is_some) {
            break;
        }
    }
    if max_depth == 0 {
        return Err(Error::HorizonTooSmall { horizon: 0, needed: 1 });
    }
    let levels: Vec<CertLevel> = found.into_iter().flatten().collect();
    let all = levels.len() as u32 == cfg.levels;
    let cert = Certificate { levels, vanishing, candidates: family, ..Default::default() };
    let mut v = Verdict::new(if all { Status::ChaoticCertified } else { Status::Undetermined }, tag, cfg).with_certificate(cert);
    if !all {
        v.notes.push(if vanished_any {
            format!("(B) levels not all reached among vanishing candidates (depth <= {max_depth})")
        } else {
            format!("(A') not observed for any of {} candidates up to depth {max_depth}", cands.len())
        });
    }
    if !exact_ok {
        v.notes.push("non-integer exponent: levels are numeric only".into());
    }
    v.notes.push("singleton candidates are not nested; the liminf form of (A) is used".into());
    Ok(v)
}

/// Verdict for `C_{w,f}` on `Lp` of the discrete system.
pub fn analyze_composition_discrete(
    sys: &DiscreteSystem,
    candidates: Option<&[BTreeSet<i64>]>,
    cfg: &AnalysisConfig,
) -> Result<Verdict> {
    analyze(sys, candidates, cfg, false)
}

/// Verdict for `C_{w,f}` on `c0` of the discrete system.
pub fn analyze_c0_discrete(sys: &DiscreteSystem, candidates: Option<&[BTreeSet<i64>]>, cfg: &AnalysisConfig) -> Result<Verdict> {
    analyze(sys, candidates, cfg, true)
}

/// Exact replay of a composition certificate.
pub fn replay_composition(sys: &DiscreteSystem, cert: &Certificate, eps: f64, c0: bool) -> Result<()> {
    let set = |idx: Option<usize>| {
        idx.and_then(|i| cert.candidates.get(i)).ok_or_else(|| Error::ReplayFailed("missing candidate".into()))
    };
    for l in &cert.levels {
        let b = set(l.candidate)?;
        let n = l.n.ok_or_else(|| Error::ReplayFailed("level without depth".into()))?;
        if exact_level_quantity(sys, b, n, c0)? <= pow2(l.s as i64) {
            return Err(Error::ReplayFailed(format!("level {} at depth {n} does not beat 2^{}", l.s, l.s)));
        }
    }
    let eps_q = rational_from_f64(eps).ok_or_else(|| Error::ReplayFailed("tolerance".into()))?;
    for v in &cert.vanishing {
        let b = set(v.candidate)?;
        let pre = sys.preimage_n(b, v.n);
        if pre.truncated {
            return Err(Error::ReplayFailed(format!("preimage at depth {} leaves the window", v.n)));
        }
        let val = exact_value(sys, b, v.n, c0)?;
        if v.exact_zero && !val.is_zero() {
            return Err(Error::ReplayFailed(format!("value at depth {} is not zero", v.n)));
        }
        if val.is_negative() || val >= eps_q {
            return Err(Error::ReplayFailed(format!("value at depth {} is not below tolerance", v.n)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{analyze_bilateral_shift_nonzero, replay_shift};
    use crate::scalar::int;
    use crate::weights::WeightForm;

    fn cfg() -> AnalysisConfig {
        AnalysisConfig::default()
    }

    #[test]
    fn shift_reduction_matches_shift_analyzer() {
        let w = WeightSpec::rapidly_decreasing_example();
        let sys = DiscreteSystem::from_shift(&w, (-2048, 2048), 2.0).unwrap();
        let a = analyze_composition_discrete(&sys, None, &cfg()).unwrap();
        let b = analyze_bilateral_shift_nonzero(&w, &SpaceSpec::lp(IndexDomain::Bilateral, 2.0), &cfg()).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.status, Status::ChaoticCertified, "{:?}", a.notes);
        replay_composition(&sys, a.certificate.as_ref().unwrap(), 1e-9, false).unwrap();
        replay_shift(&w, b.certificate.as_ref().unwrap(), 1e-9).unwrap();
        let c = analyze_c0_discrete(&sys, None, &cfg()).unwrap();
        assert_eq!(c.status, Status::ChaoticCertified);
        replay_composition(&sys, c.certificate.as_ref().unwrap(), 1e-9, true).unwrap();
    }

    #[test]
    fn unweighted_translation_is_refuted() {
        let w = WeightSpec::constant(IndexDomain::Bilateral, int(1));
        let sys = DiscreteSystem::from_shift(&w, (-512, 512), 1.0).unwrap();
        assert_eq!(analyze_composition_discrete(&sys, None, &cfg()).unwrap().status, Status::NotChaoticSymbolic);
        assert_eq!(analyze_c0_discrete(&sys, None, &cfg()).unwrap().status, Status::NotChaoticSymbolic);
    }

    #[test]
    fn double_step_constant_two_has_levels_but_no_vanishing() {
        let sys = DiscreteSystem::new(
            IndexDomain::Bilateral,
            (-512, 512),
            MapKind::Shift { d: 2 },
            WeightForm::constant(int(2)),
            Masses::Counting,
            1.0,
        )
        .unwrap();
        let b = BTreeSet::from([0]);
        assert_eq!(exact_value(&sys, &b, 5, false).unwrap(), int(32));
        let v = analyze_composition_discrete(&sys, None, &cfg()).unwrap();
        assert_eq!(v.status, Status::Undetermined);
    }

    #[test]
    fn unilateral_preimages_empty_out() {
        let w = WeightSpec::constant(IndexDomain::Unilateral, int(2));
        let sys = DiscreteSystem::from_shift(&w, (1, 2048), 1.0).unwrap();
        let v = analyze_composition_discrete(&sys, None, &cfg()).unwrap();
        assert_eq!(v.status, Status::ChaoticCertified);
        let cert = v.certificate.as_ref().unwrap();
        assert!(cert.vanishing.iter().all(|e| e.exact_zero));
        replay_composition(&sys, cert, 1e-9, false).unwrap();
    }

    #[test]
    fn candidates_are_ordered_by_distance() {
        let w = WeightSpec::constant(IndexDomain::Bilateral, int(1));
        let sys = DiscreteSystem::from_shift(&w, (-3, 5), 1.0).unwrap();
        let c: Vec<i64> = default_candidates(&sys, 6).iter().map(|s| *s.first().unwrap()).collect();
        assert_eq!(c, vec![0, -1, 1, -2, 2, -3]);
    }
}
