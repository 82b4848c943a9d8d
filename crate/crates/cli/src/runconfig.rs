//! The run config: one TOML file with a section per module. Command-line
//! flags override file values, which override the hypothesis file, which
//! overrides built-in defaults.

use rrtomb_core::demography::DemographyParams;
use rrtomb_core::rational::{parse_q, Q};
use rrtomb_core::rr_engine::RuleLedger;
use rrtomb_core::{Error, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Table,
    Records,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub onomasticon: Source,
    pub hypothesis: Source,
    pub rules: RuleOverrides,
    pub sweep: SweepSection,
    pub inference: InferenceSection,
    pub demography: DemographyParams,
    pub output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Source {
    pub source: String,
}

impl Default for Source {
    fn default() -> Self {
        Source {
            source: "bundled".into(),
        }
    }
}

/// An exact number in a config file: an integer or a string such as
/// `"6/5"` or `"5.491e-7"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(transparent)]
pub struct Num(#[serde(with = "rrtomb_core::qserde")] pub Q);

impl std::str::FromStr for Num {
    type Err = rrtomb_core::rational::ParseRationalError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse_q(s).map(Num)
    }
}

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&rrtomb_core::rational::fmt_exact(&self.0))
    }
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RuleOverrides {
    pub bonus_divisor: Option<Num>,
    pub unknown_son_factor: Option<Num>,
    pub require_yeshua_in_tomb: Option<bool>,
    pub allow_father_yeshua: Option<bool>,
    pub count_unknown_sons: Option<bool>,
}

impl RuleOverrides {
    /// Later values win.
    pub fn merge(self, top: RuleOverrides) -> RuleOverrides {
        RuleOverrides {
            bonus_divisor: top.bonus_divisor.or(self.bonus_divisor),
            unknown_son_factor: top.unknown_son_factor.or(self.unknown_son_factor),
            require_yeshua_in_tomb: top.require_yeshua_in_tomb.or(self.require_yeshua_in_tomb),
            allow_father_yeshua: top.allow_father_yeshua.or(self.allow_father_yeshua),
            count_unknown_sons: top.count_unknown_sons.or(self.count_unknown_sons),
        }
    }

    pub fn apply(&self, rules: &mut RuleLedger) -> Result<()> {
        if let Some(b) = &self.bonus_divisor {
            rules.bonus_divisor = b.0.clone();
        }
        if let Some(k) = &self.unknown_son_factor {
            rules.unknown_son_factor = k.0.clone();
        }
        if let Some(v) = self.require_yeshua_in_tomb {
            rules.require_yeshua_in_tomb = v;
        }
        if let Some(v) = self.allow_father_yeshua {
            rules.allow_father_yeshua = v;
        }
        if let Some(v) = self.count_unknown_sons {
            rules.count_unknown_sons = v;
        }
        rules.validate()
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub suite: String,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            suite: "bundled".into(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InferenceSection {
    pub n2: Option<u64>,
    pub q: Option<Num>,
    pub theta: Vec<Num>,
    pub alpha: Vec<Num>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn load(path: Option<&str>) -> Result<RunConfig> {
        match path {
            None => Ok(RunConfig::default()),
            Some(p) => {
                let text = rrtomb_core::config::read_source(p)?;
                toml::from_str(&text).map_err(|e| Error::Config(format!("{p}: {e}")))
            }
        }
    }
}
