//! Orbit simulation with seminorm tracking, and evidence extracted from
//! traces: dips towards zero and growth along a geometric ladder.
//!
//! Orbits run in the vector's own scalar type. Once an entry leaves
//! `[2^-512, 2^512]` in magnitude the simulation continues on log magnitudes,
//! which is enough for every seminorm, and records the step of the switch.

use std::collections::BTreeMap;

use log::debug;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{apply_composition, apply_shift, DiscreteSystem, ShiftOperator};
use crate::scalar::{ln_abs_rational, powi, Rational, Scalar};
use crate::spaces::{SeminormValue, SpaceSpec, SparseVector};
use crate::weights::IndexDomain;

const SWITCH_LOG: f64 = 512.0 * std::f64::consts::LN_2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitStep {
    pub n: u64,
    /// One value per requested seminorm index, in request order.
    pub values: Vec<SeminormValue>,
    /// Window truncation dropped mass at this step.
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub ks: Vec<u32>,
    pub steps: Vec<OrbitStep>,
    /// First step computed on log magnitudes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_mode_from: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub n: u64,
    pub k: u32,
    pub seminorm: f64,
    pub boundary_flag: bool,
}

impl OrbitTrace {
    pub fn value(&self, n: u64, k: u32) -> Option<&SeminormValue> {
        let pos = self.ks.iter().position(|&q| q == k)?;
        let step = self.steps.get(n.checked_sub(1)? as usize)?;
        debug_assert_eq!(step.n, n);
        step.values.get(pos)
    }

    pub fn horizon(&self) -> u64 {
        self.steps.len() as u64
    }

    pub fn csv_rows(&self) -> Vec<CsvRow> {
        self.steps
            .iter()
            .flat_map(|s| {
                s.values.iter().map(move |v| CsvRow {
                    n: s.n,
                    k: v.k,
                    seminorm: v.value,
                    boundary_flag: s.boundary,
                })
            })
            .collect()
    }
}

enum State<S> {
    Exact(SparseVector<S>),
    Log(IndexDomain, BTreeMap<i64, f64>),
}

fn out_of_range<S: Scalar>(v: &SparseVector<S>) -> bool {
    v.iter().any(|(_, x)| x.ln_abs().abs() > SWITCH_LOG)
}

fn to_logs<S: Scalar>(v: &SparseVector<S>) -> BTreeMap<i64, f64> {
    v.iter().map(|(j, x)| (j, x.ln_abs())).collect()
}

/// Seminorm from log magnitudes of the entries.
pub(crate) fn seminorm_from_logs(space: &SpaceSpec, logs: &BTreeMap<i64, f64>, k: u32) -> SeminormValue {
    let k = if space.is_banach() { 1 } else { k.max(1) };
    let p = space.p();
    let terms: Vec<f64> = logs.iter().map(|(&j, &l)| l + space.coordinate_log(j, k)).collect();
    let log_value = if p == 0.0 {
        terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    } else {
        let scaled: Vec<f64> = terms.iter().map(|t| p * t).collect();
        log_sum_exp(&scaled) / p
    };
    SeminormValue {
        k,
        value: log_value.exp(),
        log_value,
        exact: None,
        exact_pow: None,
    }
}

fn log_sum_exp(logs: &[f64]) -> f64 {
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + logs.iter().map(|l| (l - m).exp()).sum::<f64>().ln()
}

fn shift_logs(op: &ShiftOperator, logs: &BTreeMap<i64, f64>) -> Result<BTreeMap<i64, f64>> {
    let mut out = BTreeMap::new();
    for (&j, &l) in logs {
        let t = j - 1;
        if !op.domain().contains(t) {
            continue;
        }
        let lw = op.weights.form.eval_log(t)?;
        if lw != f64::NEG_INFINITY && l != f64::NEG_INFINITY {
            out.insert(t, l + lw);
        }
    }
    Ok(out)
}

/// Orbit of `x` under a weighted shift, steps `1..=horizon`.
pub fn simulate_orbit<S: Scalar>(
    op: &ShiftOperator,
    x: &SparseVector<S>,
    space: &SpaceSpec,
    horizon: u64,
    ks: &[u32],
) -> Result<OrbitTrace> {
    if x.domain != op.domain() || space.domain != op.domain() {
        return Err(Error::DomainMismatch("operator, vector and space must share the index set".into()));
    }
    let mut state = if out_of_range(x) {
        State::Log(x.domain, to_logs(x))
    } else {
        State::Exact(x.clone())
    };
    let mut log_mode_from = matches!(state, State::Log(..)).then_some(1);
    let mut steps = Vec::with_capacity(horizon as usize);
    for n in 1..=horizon {
        state = match state {
            State::Exact(v) => {
                let next = apply_shift(op, &v)?;
                if out_of_range(&next) {
                    debug!("orbit switches to log magnitudes at step {n}");
                    log_mode_from = Some(n);
                    State::Log(next.domain, to_logs(&next))
                } else {
                    State::Exact(next)
                }
            }
            State::Log(d, logs) => State::Log(d, shift_logs(op, &logs)?),
        };
        let values = match &state {
            State::Exact(v) => ks.iter().map(|&k| space.seminorm(v, k)).collect::<Result<Vec<_>>>()?,
            State::Log(_, logs) => ks.iter().map(|&k| seminorm_from_logs(space, logs, k)).collect(),
        };
        steps.push(OrbitStep { n, values, boundary: false });
    }
    Ok(OrbitTrace { ks: ks.to_vec(), steps, log_mode_from })
}

/// Orbit of `phi` under `C_{w,f}` on `Lp(mu)` of the window; steps where
/// mass leaked past the window are flagged.
pub fn simulate_composition_orbit<S: Scalar>(sys: &DiscreteSystem, phi: &SparseVector<S>, horizon: u64) -> Result<OrbitTrace> {
    let q = (sys.p.fract() == 0.0).then_some(sys.p as i64);
    let mut cur = phi.clone();
    let mut steps = Vec::with_capacity(horizon as usize);
    for n in 1..=horizon {
        let r = apply_composition(sys, &cur)?;
        cur = r.vector;
        let logs: Vec<f64> = cur.iter().map(|(x, v)| sys.p * v.ln_abs() + ln_abs_rational(&sys.masses.mass(x))).collect();
        let log_value = log_sum_exp(&logs) / sys.p;
        let exact_pow = match (S::EXACT, q) {
            (true, Some(q)) => {
                let mut acc = Rational::zero();
                for (x, v) in cur.iter() {
                    acc += powi(&v.to_exact().unwrap_or_default().abs(), q) * sys.masses.mass(x);
                }
                Some(acc)
            }
            _ => None,
        };
        steps.push(OrbitStep {
            n,
            values: vec![SeminormValue {
                k: 1,
                value: log_value.exp(),
                log_value,
                exact: if q == Some(1) { exact_pow.clone() } else { None },
                exact_pow,
            }],
            boundary: !r.leaked.is_empty(),
        });
    }
    Ok(OrbitTrace { ks: vec![1], steps, log_mode_from: None })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NsVerdict {
    /// Dips keep occurring in the second half of the horizon.
    InNsEvidence,
    NoDips,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NsEvidence {
    /// Steps where every requested seminorm is below `eps`.
    pub dips: Vec<u64>,
    pub verdict: NsVerdict,
}

pub fn ns_membership_evidence(trace: &OrbitTrace, eps: f64) -> NsEvidence {
    let dips: Vec<u64> = trace
        .steps
        .iter()
        .filter(|s| s.values.iter().all(|v| v.value < eps))
        .map(|s| s.n)
        .collect();
    let verdict = match dips.last() {
        None => NsVerdict::NoDips,
        Some(&n) if 2 * n > trace.horizon() => NsVerdict::InNsEvidence,
        Some(_) => NsVerdict::Inconclusive,
    };
    NsEvidence { dips, verdict }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthVerdict {
    Growing,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnboundednessEvidence {
    /// First step whose largest seminorm exceeds `2^s`, for `s = 1..`.
    pub rungs: Vec<Option<u64>>,
    pub verdict: GrowthVerdict,
}

/// Ladder `2^s`, `s = 1..=rungs` (default 12).
pub fn unboundedness_evidence(trace: &OrbitTrace, rungs: u32) -> UnboundednessEvidence {
    let ln2 = std::f64::consts::LN_2;
    let mut hit: Vec<Option<u64>> = vec![None; rungs as usize];
    for step in &trace.steps {
        let top = step.values.iter().map(|v| v.log_value).fold(f64::NEG_INFINITY, f64::max);
        for (s, slot) in hit.iter_mut().enumerate() {
            if slot.is_none() && top > (s + 1) as f64 * ln2 {
                *slot = Some(step.n);
            }
        }
    }
    let verdict = if hit.iter().all(Option::is_some) { GrowthVerdict::Growing } else { GrowthVerdict::Undetermined };
    UnboundednessEvidence { rungs: hit, verdict }
}

pub const DEFAULT_RUNGS: u32 = 12;
