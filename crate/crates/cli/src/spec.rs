use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{bail, Context, Result};
use lyshift::criteria::AnalysisConfig;
use lyshift::operators::DiscreteSystem;
use lyshift::spaces::{SpaceKind, SpaceSpec};
use lyshift::weights::WeightSpec;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    Shift { weights: WeightSpec },
    Composition { system: DiscreteSystem },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypercyclicityOptions {
    pub l_min: i64,
    pub l_max: i64,
    pub horizon: u64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrichotomyOptions {
    pub horizon: u64,
    /// Adds the all-ones vector on the first `ones` indices as a seed.
    #[serde(default)]
    pub ones: Option<u64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessOptions {
    #[serde(default)]
    pub k: Option<u32>,
    #[serde(default)]
    pub levels: Option<u32>,
    /// Dip tolerance for the orbit check of the witness.
    #[serde(default)]
    pub dip_eps: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisOptions {
    #[serde(default)]
    pub levels: Option<u32>,
    #[serde(default)]
    pub horizon: Option<u64>,
    #[serde(default)]
    pub k_cap: Option<u32>,
    #[serde(default)]
    pub l_cap: Option<u32>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub window: Option<(i64, i64)>,
    #[serde(default)]
    pub back_width: Option<usize>,
    #[serde(default)]
    pub candidate_cap: Option<usize>,
    #[serde(default)]
    pub candidates: Option<Vec<BTreeSet<i64>>>,
    #[serde(default)]
    pub hypercyclicity: Option<HypercyclicityOptions>,
    #[serde(default)]
    pub trichotomy: Option<TrichotomyOptions>,
    #[serde(default)]
    pub witness: Option<WitnessOptions>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub schema_version: u32,
    pub operator: OperatorSpec,
    pub space: SpaceSpec,
    #[serde(default)]
    pub analysis: AnalysisOptions,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Command-line overrides of the analysis section.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub horizon: Option<u64>,
    pub levels: Option<u32>,
    pub k_cap: Option<u32>,
    pub l_cap: Option<u32>,
    pub eps: Option<f64>,
    pub seed: Option<u64>,
}

impl ProblemSpec {
    /// The parsed problem plus the raw JSON, which reports echo verbatim.
    pub fn load(path: &Path) -> Result<(ProblemSpec, serde_json::Value)> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let raw: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let spec: ProblemSpec =
            serde_json::from_value(raw.clone()).with_context(|| format!("{} does not match the problem schema", path.display()))?;
        if spec.schema_version != SCHEMA_VERSION {
            bail!("unsupported schema_version {} (expected {SCHEMA_VERSION})", spec.schema_version);
        }
        spec.space.validate()?;
        let domain = match &spec.operator {
            OperatorSpec::Shift { weights } => weights.domain,
            OperatorSpec::Composition { system } => {
                system.validate()?;
                system.domain
            }
        };
        if domain != spec.space.domain {
            bail!("operator is on {} but the space is on {}", domain.name(), spec.space.domain.name());
        }
        Ok((spec, raw))
    }

    pub fn config(&self, o: &Overrides) -> AnalysisConfig {
        let a = &self.analysis;
        let d = AnalysisConfig::default();
        AnalysisConfig {
            levels: o.levels.or(a.levels).unwrap_or(d.levels),
            horizon: o.horizon.or(a.horizon).unwrap_or(d.horizon),
            k_cap: o.k_cap.or(a.k_cap).unwrap_or(d.k_cap),
            l_cap: o.l_cap.or(a.l_cap).unwrap_or(d.l_cap),
            eps: o.eps.or(a.eps).unwrap_or(d.eps),
            window: a.window.or(d.window),
            back_width: a.back_width.unwrap_or(d.back_width),
            candidate_cap: a.candidate_cap.unwrap_or(d.candidate_cap),
        }
    }

    /// The composition system with the exponent taken from the space.
    pub fn system_for_space(&self) -> Result<Option<(DiscreteSystem, bool)>> {
        let OperatorSpec::Composition { system } = &self.operator else {
            return Ok(None);
        };
        let mut sys = system.clone();
        let c0 = match &self.space.kind {
            SpaceKind::C0 => true,
            SpaceKind::Lp { p } => {
                sys.p = *p;
                false
            }
            other => bail!("composition operators act on c0 or lp, not {other:?}"),
        };
        Ok(Some((sys, c0)))
    }
}
