//! Named scenario deltas against a baseline hypothesis, and a batch driver.

use crate::config::{read_source, HypothesisConfig};
use crate::error::{Error, Result};
use crate::hypothesis::CandidateDescriptor;
use crate::onomasticon::{Gender, Onomasticon};
use crate::qserde;
use crate::rational::{Printed, Q};
use crate::{analyze_with, Exec};
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const BUNDLED_SUITE: &str = include_str!("../data/suite.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Delta {
    /// Adds a candidate from the suite's pool by key.
    Add(String),
    /// Drops a candidate by label.
    Remove(String),
    /// Scales a candidate's weight and RR together.
    Scale {
        label: String,
        #[serde(with = "qserde")]
        factor: Q,
    },
    BonusDivisor(#[serde(with = "qserde")] Q),
    UnknownSonFactor(#[serde(with = "qserde")] Q),
    RequireYeshuaInTomb(bool),
    AllowFatherYeshua(bool),
    CountUnknownSons(bool),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub block: Option<String>,
    /// Published value as printed, used for golden comparison.
    #[serde(default)]
    pub printed: Option<String>,
    #[serde(default)]
    pub deltas: Vec<Delta>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    #[serde(default)]
    pub n2: Option<u64>,
    #[serde(default)]
    pub pool: BTreeMap<String, CandidateDescriptor>,
    #[serde(default)]
    pub scenario: Vec<Scenario>,
}

impl Suite {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_SUITE).expect("bundled suite is valid")
    }

    pub fn load(source: &str) -> Result<Self> {
        if source == "bundled" {
            return Ok(Self::bundled());
        }
        Self::parse(&read_source(source)?).map_err(|e| Error::Config(format!("{source}: {e}")))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let s: Suite = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        for sc in &s.scenario {
            if let Some(p) = &sc.printed {
                Printed::parse(p)
                    .map_err(|e| Error::Config(format!("scenario `{}`: {e}", sc.name)))?;
            }
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioReport {
    pub name: String,
    pub block: Option<String>,
    pub observed_rr: Q,
    pub proportion: Q,
    /// `n2 * proportion`.
    pub adjusted_area: Q,
    pub printed: Option<Printed>,
}

impl ScenarioReport {
    /// Whether the adjusted area rounds to the printed value.
    pub fn matches(&self) -> Option<bool> {
        self.printed
            .as_ref()
            .map(|p| p.matches(&self.adjusted_area))
    }
}

fn find_label(cfg: &HypothesisConfig, label: &str) -> Option<(Gender, usize)> {
    let w = cfg.women.iter().position(|c| c.label() == label);
    let m = cfg.men.iter().position(|c| c.label() == label);
    w.map(|i| (Gender::Female, i))
        .or(m.map(|i| (Gender::Male, i)))
}

/// Applies a scenario's deltas to a copy of `base`.
pub fn apply(
    onom: &Onomasticon,
    base: &HypothesisConfig,
    pool: &BTreeMap<String, CandidateDescriptor>,
    scenario: &Scenario,
) -> Result<HypothesisConfig> {
    let mut cfg = base.clone();
    let unknown = |what: &str, key: &str| {
        Error::Spec(format!(
            "scenario `{}`: unknown {what} `{key}`",
            scenario.name
        ))
    };
    for d in &scenario.deltas {
        match d {
            Delta::Add(key) => {
                let c = pool
                    .get(key)
                    .ok_or_else(|| unknown("pool candidate", key))?;
                let g = c
                    .gender
                    .or_else(|| {
                        c.generic
                            .as_deref()
                            .and_then(|g| onom.generic(g))
                            .map(|g| g.gender)
                    })
                    .ok_or_else(|| unknown("gender for", key))?;
                match g {
                    Gender::Female => cfg.women.push(c.clone()),
                    Gender::Male => cfg.men.push(c.clone()),
                }
            }
            Delta::Remove(label) => match find_label(&cfg, label) {
                Some((Gender::Female, i)) => drop(cfg.women.remove(i)),
                Some((Gender::Male, i)) => drop(cfg.men.remove(i)),
                None => return Err(unknown("candidate", label)),
            },
            Delta::Scale { label, factor } => {
                let (g, i) = find_label(&cfg, label).ok_or_else(|| unknown("candidate", label))?;
                let c = match g {
                    Gender::Female => &mut cfg.women[i],
                    Gender::Male => &mut cfg.men[i],
                };
                c.scale = Some(c.scale.take().unwrap_or_else(Q::one) * factor);
            }
            Delta::BonusDivisor(b) => cfg.rules.bonus_divisor = b.clone(),
            Delta::UnknownSonFactor(k) => cfg.rules.unknown_son_factor = k.clone(),
            Delta::RequireYeshuaInTomb(v) => cfg.rules.require_yeshua_in_tomb = *v,
            Delta::AllowFatherYeshua(v) => cfg.rules.allow_father_yeshua = *v,
            Delta::CountUnknownSons(v) => cfg.rules.count_unknown_sons = *v,
        }
    }
    cfg.rules.validate()?;
    Ok(cfg)
}

pub fn run_scenario(
    onom: &Onomasticon,
    base: &HypothesisConfig,
    pool: &BTreeMap<String, CandidateDescriptor>,
    scenario: &Scenario,
    n2: u64,
    exec: Exec,
) -> Result<ScenarioReport> {
    let mut cfg = apply(onom, base, pool, scenario)?;
    cfg.n2 = n2;
    let a = analyze_with(onom, &cfg, exec)?;
    let printed = match &scenario.printed {
        Some(p) => Some(Printed::parse(p).map_err(|e| Error::Config(e.to_string()))?),
        None => None,
    };
    Ok(ScenarioReport {
        name: scenario.name.clone(),
        block: scenario.block.clone(),
        observed_rr: a.observed.value,
        proportion: a.tail.proportion,
        adjusted_area: a.adjusted_area,
        printed,
    })
}

/// Runs every scenario, reporting in suite order; a failing scenario yields
/// its error and the rest still run. `n2` falls back to the suite's, then the baseline's.
pub fn run_suite(
    onom: &Onomasticon,
    base: &HypothesisConfig,
    suite: &Suite,
    n2: Option<u64>,
    exec: Exec,
) -> Vec<Result<ScenarioReport>> {
    let n2 = n2.or(suite.n2).unwrap_or(base.n2);
    let run = |s: &Scenario| run_scenario(onom, base, &suite.pool, s, n2, exec);
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            suite.scenario.par_iter().map(run).collect()
        }
        _ => suite.scenario.iter().map(run).collect(),
    }
}
