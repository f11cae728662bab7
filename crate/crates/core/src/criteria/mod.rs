//! Verdict-producing analyzers for the Li-Yorke characterizations.
//!
//! Every analyzer is a semi-decision: a chaos verdict carries a certificate
//! that replays in exact arithmetic, a refutation comes only from the
//! symbolic catalog prover, and everything else is `Undetermined`.

mod composition;
mod dynamics;
mod kothe;
mod shift;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::scalar::{serde_rational, Rational};
use crate::weights::RangeKind;

pub use composition::{analyze_c0_discrete, analyze_composition_discrete, default_candidates, replay_composition};
pub use dynamics::{
    hypercyclicity_check, trichotomy_classify, HypercyclicityReport, HypercyclicityVerdict, LSequenceReport,
    TrichotomyClass, TrichotomyReport,
};
pub use kothe::{analyze_kothe, analyze_weighted_lp, kothe_vanishing_table, replay_kothe, replay_weighted_lp, KotheRatio, VanishingRow, WeightedRatio};
pub use shift::{
    analyze_bilateral_shift_general, analyze_bilateral_shift_nonzero, analyze_unilateral_shift, backward_vanishing,
    replay_shift,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    ChaoticCertified,
    NotChaoticSymbolic,
    Undetermined,
}

/// Which characterization the analyzer applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremTag {
    UnilateralShift,
    BilateralShift,
    BilateralShiftZeroWeights,
    CompositionLp,
    CompositionC0,
    KotheUnilateral,
    KotheBilateral,
    WeightedLp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    I,
    II,
}

/// Caps and tolerances; echoed in every verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub levels: u32,
    pub horizon: u64,
    pub k_cap: u32,
    pub l_cap: u32,
    pub eps: f64,
    /// Scan window; the domain default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i64, i64)>,
    pub back_width: usize,
    pub candidate_cap: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            levels: 10,
            horizon: 4096,
            k_cap: 6,
            l_cap: 6,
            eps: 1e-9,
            window: None,
            back_width: crate::weights::ScanConfig::DEFAULT_BACK_WIDTH,
            candidate_cap: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertLevel {
    pub s: u32,
    pub i: i64,
    pub j: i64,
    /// Natural log of the quantity compared against `2^s`.
    pub log_product: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    /// Depth and candidate index for composition certificates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<usize>,
}

impl CertLevel {
    pub(crate) fn from_scan(l: &crate::weights::ScanLevel) -> Self {
        CertLevel {
            s: l.s,
            i: l.i,
            j: l.j,
            log_product: l.log_product,
            k: None,
            l: None,
            n: None,
            candidate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingEntry {
    pub n: u64,
    /// May underflow to 0; see `log_value`.
    pub value: f64,
    pub log_value: f64,
    pub exact_zero: bool,
    /// Anchor of a backward product `|w_{-n} ... w_{-k}|`, or the seminorm index.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<usize>,
}

impl VanishingEntry {
    pub(crate) fn new(n: u64, log_value: f64, k: Option<i64>) -> Self {
        VanishingEntry {
            n,
            value: log_value.exp(),
            log_value,
            exact_zero: log_value == f64::NEG_INFINITY,
            k,
            candidate: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub levels: Vec<CertLevel>,
    pub vanishing: Vec<VanishingEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case_tag: Option<CaseTag>,
    /// A catalog proof standing in for numeric vanishing evidence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbolic_vanishing: Option<String>,
    /// Candidate sets of composition certificates.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<BTreeSet<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    /// `sup |w_i ... w_j|` over the range is at most `bound`.
    SupBound {
        range: RangeKind,
        #[serde(with = "serde_rational")]
        bound: Rational,
    },
    /// `|w_{-n} ... w_{-k}| >= bound` for every `n`.
    BackwardBoundedBelow {
        k: i64,
        #[serde(with = "serde_rational")]
        bound: Rational,
    },
    /// `a_{i,k} |w_i ... w_j| / a_{j+1,k} <= bound` for every `k` (at `l = k`).
    KotheRatioBound {
        #[serde(with = "serde_rational")]
        bound: Rational,
    },
    /// The matrix is bounded below by `bound > 0`, so the backward bound persists.
    KotheBackwardBoundedBelow {
        #[serde(with = "serde_rational")]
        bound: Rational,
    },
    /// Weighted density bounded below along the backward ray.
    DensityBoundedBelow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub schema_version: u32,
    pub status: Status,
    pub theorem_tag: TheoremTag,
    pub caps: AnalysisConfig,
    /// Present for `ChaoticCertified`; partial evidence otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub refutation: Vec<Refutation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    pub(crate) fn new(status: Status, theorem_tag: TheoremTag, caps: &AnalysisConfig) -> Self {
        Verdict {
            schema_version: SCHEMA_VERSION,
            status,
            theorem_tag,
            caps: caps.clone(),
            certificate: None,
            refutation: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn refuted(theorem_tag: TheoremTag, caps: &AnalysisConfig, refutation: Vec<Refutation>) -> Self {
        let mut v = Verdict::new(Status::NotChaoticSymbolic, theorem_tag, caps);
        v.refutation = refutation;
        v
    }

    pub(crate) fn with_certificate(mut self, c: Certificate) -> Self {
        self.certificate = Some(c);
        self
    }

    pub fn is_chaotic(&self) -> bool {
        self.status == Status::ChaoticCertified
    }
}
