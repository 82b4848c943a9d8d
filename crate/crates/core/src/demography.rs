//! Population pipeline from deceased Jerusalemites to the number of
//! comparable inscribed tombs (the trial count `n2`).

use crate::error::{Error, Result};
use crate::qserde;
use crate::rational::{frac, int, round_to_multiple, Q};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DemographyParams {
    pub era_start: i32,
    pub era_end: i32,
    /// Year of the `pop_start` estimate (negative is BCE).
    pub pop_start_year: i32,
    pub pop_start: u64,
    pub pop_end: u64,
    /// Deaths over the era, taken as an input.
    #[serde(with = "qserde")]
    pub total_deceased: Q,
    #[serde(with = "qserde")]
    pub non_jewish_fraction: Q,
    #[serde(with = "qserde")]
    pub juvenile_fraction: Q,
    #[serde(with = "qserde")]
    pub literacy_affluence_fraction: Q,
    #[serde(with = "qserde")]
    pub female_male_inscription_ratio: Q,
    pub tomb_size: u32,
    /// Excavated tombs, informational.
    pub excavated: u64,
    /// Tombs of the full population, informational.
    pub full_population_tombs: u64,
}

impl Default for DemographyParams {
    fn default() -> Self {
        DemographyParams {
            era_start: 6,
            era_end: 70,
            pop_start_year: -20,
            pop_start: 38_500,
            pop_end: 82_500,
            total_deceased: int(132_200),
            non_jewish_fraction: frac(5, 100),
            juvenile_fraction: frac(42, 100),
            literacy_affluence_fraction: frac(12, 100),
            female_male_inscription_ratio: frac(1, 2),
            tomb_size: 6,
            excavated: 100,
            full_population_tombs: 10_000,
        }
    }
}

/// Unrounded values straight through the pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDemography {
    pub adult_jewish_per_gender: Q,
    pub inscribed_males: Q,
    pub inscribed_females: Q,
    pub trials: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemographyResult {
    pub deceased_per_gender: Q,
    /// Rounded to tens.
    pub adult_jewish_per_gender: Q,
    /// Rounded to tens.
    pub inscribed_males: Q,
    pub inscribed_females: Q,
    /// `(inscribed_males + inscribed_females) / tomb_size` from the rounded counts.
    pub trials_exact: Q,
    /// `trials_exact` rounded to hundreds.
    pub trials: Q,
    pub excavated: u64,
    pub full_population_tombs: u64,
    pub raw: RawDemography,
}

impl DemographyParams {
    pub fn validate(&self) -> Result<()> {
        if self.era_start >= self.era_end {
            return Err(Error::Param(format!(
                "era {}..{} is empty",
                self.era_start, self.era_end
            )));
        }
        for (name, v) in [
            ("non_jewish_fraction", &self.non_jewish_fraction),
            ("juvenile_fraction", &self.juvenile_fraction),
            (
                "literacy_affluence_fraction",
                &self.literacy_affluence_fraction,
            ),
            (
                "female_male_inscription_ratio",
                &self.female_male_inscription_ratio,
            ),
        ] {
            if v.is_negative() || *v > Q::one() {
                return Err(Error::Param(format!("{name} must lie in [0,1]")));
            }
        }
        if self.total_deceased.is_negative() {
            return Err(Error::Param("total_deceased is negative".into()));
        }
        if self.tomb_size == 0 {
            return Err(Error::Param("tomb_size must be positive".into()));
        }
        Ok(())
    }
}

pub fn run_pipeline(p: &DemographyParams) -> Result<DemographyResult> {
    p.validate()?;
    let one = Q::one();
    let tens = int(10);
    let size = Q::from_integer(p.tomb_size.into());
    let per_gender = &p.total_deceased / int(2);
    let adult = &per_gender * (&one - &p.non_jewish_fraction) * (&one - &p.juvenile_fraction);
    let males_raw = &adult * &p.literacy_affluence_fraction;
    let males = round_to_multiple(&males_raw, &tens);
    let females = &males * &p.female_male_inscription_ratio;
    let trials_exact = (&males + &females) / &size;
    let females_raw = &males_raw * &p.female_male_inscription_ratio;
    let raw = RawDemography {
        adult_jewish_per_gender: adult.clone(),
        trials: (&males_raw + &females_raw) / &size,
        inscribed_males: males_raw,
        inscribed_females: females_raw,
    };
    Ok(DemographyResult {
        deceased_per_gender: per_gender,
        adult_jewish_per_gender: round_to_multiple(&adult, &tens),
        inscribed_males: males,
        inscribed_females: females,
        trials: round_to_multiple(&trials_exact, &int(100)),
        trials_exact,
        excavated: p.excavated,
        full_population_tombs: p.full_population_tombs,
        raw,
    })
}
