//! Realism checks and RR scoring for one tomb configuration.
//!
//! A configuration has two women, two singleton men and a generational
//! ossuary ("son, son of father"). The women and singletons contribute their
//! category RR directly; the generational pair goes through the rule ledger
//! below, which keys on the [`Figure`] carried by each male category.
//!
//! | rule | condition | effect |
//! |------|-----------|--------|
//! | R1 | father Yeshua | pair counts 1 (father's RR only when `allow_father_yeshua`) |
//! | R2 | father Other | pair counts 1 |
//! | R3 | father also a singleton | father's RR counted once, in the singleton part |
//! | R4 | singletons Yosef and Yoseh | Yosef singleton counts 1 |
//! | R5 | father Yoseh | son in {Yeshua, Yosef, James, Cleopas} counts rr·k, else 1 |
//! | R6 | father Cleopas | son in {Yosef, James, Yoseh} counts rr·k, else 1 |
//! | R7 | father Yoseh, a singleton Yosef | that singleton counts 1 |
//! | R8 | father Yosef not a singleton, Yoseh in tomb | son in {Yeshua, Yoseh, James}: rr(f)·rr(s), else 1 |
//! | R9 | father Yosef not a singleton, no Yoseh | son in {Yeshua, James}: rr(f)·rr(s), else rr(f) |
//! | R10 | father Yosef also a singleton, no Yoseh | son in {Yeshua, James} counts rr·k, else 1 |
//! | R11 | father Yosef, son Cleopas, no Yoseh | rr(Yosef)·rr(Cleopas)·k, Yosef subject to R3 |
//! | R12 | father James also a singleton | son in {Yoseh, Yeshua, Yosef} counts rr·k; son Cleopas rr; else 1 |
//! | R13 | father James not a singleton | son Cleopas: rr(f)·rr(s); son in {Yoseh, Yosef, Yeshua}: rr(f)·rr(s)·k; else rr(f) |
//! | R14 | Yeshua son of Yosef | whole value divided by the bonus divisor |
//!
//! `k` is the unknown-son factor; with `count_unknown_sons` off every rr·k
//! term becomes 1. R11 is checked before R8 to R10. Father Yosef as a
//! singleton with Yoseh present counts 1. A father with no figure multiplies
//! its own RR (subject to R3) by the son's.

use crate::error::{Error, Result};
use crate::hypothesis::{Figure, HypothesisSpec};
use crate::onomasticon::Gender;
use crate::qserde;
use crate::rational::{fmt_exact, Q};
use num_traits::One;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RuleLedger {
    /// Divisor for a "Yeshua son of Yosef" pair (R14); 1 disables it.
    #[serde(with = "qserde")]
    pub bonus_divisor: Q,
    #[serde(with = "qserde")]
    pub unknown_son_factor: Q,
    pub require_yeshua_in_tomb: bool,
    pub allow_father_yeshua: bool,
    pub count_unknown_sons: bool,
}

impl Default for RuleLedger {
    fn default() -> Self {
        RuleLedger {
            bonus_divisor: Q::new(6.into(), 5.into()),
            unknown_son_factor: Q::from_integer(5.into()),
            require_yeshua_in_tomb: false,
            allow_father_yeshua: false,
            count_unknown_sons: true,
        }
    }
}

impl RuleLedger {
    pub fn validate(&self) -> Result<()> {
        if self.bonus_divisor < Q::one() {
            return Err(Error::Config(format!(
                "bonus_divisor {} is below 1",
                fmt_exact(&self.bonus_divisor)
            )));
        }
        if self.unknown_son_factor < Q::one() {
            return Err(Error::Config(format!(
                "unknown_son_factor {} is below 1",
                fmt_exact(&self.unknown_son_factor)
            )));
        }
        Ok(())
    }
}

/// Category indices into a spec: `women` index `spec.women`, the rest
/// index `spec.men`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TombConfiguration {
    pub women: [usize; 2],
    pub singletons: [usize; 2],
    pub father: usize,
    pub son: usize,
}

/// Observed tomb by category label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservedTomb {
    pub women: [String; 2],
    pub singletons: [String; 2],
    pub father: String,
    pub son: String,
}

impl ObservedTomb {
    pub fn resolve(&self, spec: &HypothesisSpec) -> Result<TombConfiguration> {
        let find = |g: Gender, l: &str| {
            spec.index(g, l).ok_or_else(|| {
                Error::Spec(format!("observed tomb names unknown {} `{l}`", g.as_str()))
            })
        };
        Ok(TombConfiguration {
            women: [
                find(Gender::Female, &self.women[0])?,
                find(Gender::Female, &self.women[1])?,
            ],
            singletons: [
                find(Gender::Male, &self.singletons[0])?,
                find(Gender::Male, &self.singletons[1])?,
            ],
            father: find(Gender::Male, &self.father)?,
            son: find(Gender::Male, &self.son)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invalid {
    DuplicateWoman,
    DuplicateSingleton,
    FatherIsSon,
    SonIsSingleton,
}

impl Invalid {
    pub fn reason(self) -> &'static str {
        match self {
            Invalid::DuplicateWoman => "duplicate woman",
            Invalid::DuplicateSingleton => "duplicate singleton",
            Invalid::FatherIsSon => "father equals son",
            Invalid::SonIsSingleton => "son duplicates singleton",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid(Invalid),
}

pub fn women_validity(spec: &HypothesisSpec, w1: usize, w2: usize) -> Validity {
    if w1 == w2 && !spec.women[w1].is_other() {
        return Validity::Invalid(Invalid::DuplicateWoman);
    }
    Validity::Valid
}

/// Category-level collisions among the male slots. Other never collides,
/// and a father may share a singleton's category.
pub fn men_validity(spec: &HypothesisSpec, s1: usize, s2: usize, f: usize, s: usize) -> Validity {
    let other = |i: usize| spec.men[i].is_other();
    if s1 == s2 && !other(s1) {
        return Validity::Invalid(Invalid::DuplicateSingleton);
    }
    if f == s && !other(f) {
        return Validity::Invalid(Invalid::FatherIsSon);
    }
    if !other(s) && (s == s1 || s == s2) {
        return Validity::Invalid(Invalid::SonIsSingleton);
    }
    Validity::Valid
}

pub fn validate(spec: &HypothesisSpec, c: &TombConfiguration) -> Validity {
    match women_validity(spec, c.women[0], c.women[1]) {
        Validity::Valid => men_validity(spec, c.singletons[0], c.singletons[1], c.father, c.son),
        bad => bad,
    }
}

/// Male contribution: singleton part, generational part and the divisor
/// applied (1 when R14 does not fire).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MenPart {
    pub singleton_part: Q,
    pub generational_part: Q,
    pub bonus: Q,
}

impl MenPart {
    pub fn value(&self) -> Q {
        &self.singleton_part * &self.generational_part / &self.bonus
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RRValue {
    pub value: Q,
    pub women_part: Q,
    pub singleton_part: Q,
    pub generational_part: Q,
    pub bonus: Q,
}

/// Scores the male slots. Callers check [`men_validity`] first.
pub fn men_part(
    spec: &HypothesisSpec,
    rules: &RuleLedger,
    s1: usize,
    s2: usize,
    f: usize,
    s: usize,
) -> MenPart {
    use Figure::*;
    let one = Q::one;
    let fig = |i: usize| spec.men[i].figure;
    let is = |i: usize, x: Figure| fig(i) == Some(x);
    let rr = |i: usize| spec.men[i].rr.clone();
    let son_in = |set: &[Figure]| fig(s).is_some_and(|x| set.contains(&x));
    let unk = |i: usize| {
        if rules.count_unknown_sons {
            rr(i) * &rules.unknown_son_factor
        } else {
            one()
        }
    };

    let sing = [s1, s2];
    let mut srr = [rr(s1), rr(s2)];
    let yosef_yoseh = (is(s1, Yosef) && is(s2, Yoseh)) || (is(s1, Yoseh) && is(s2, Yosef));
    if yosef_yoseh || is(f, Yoseh) {
        // R4, R7
        for (k, &i) in sing.iter().enumerate() {
            if is(i, Yosef) {
                srr[k] = one();
            }
        }
    }
    let [a, b] = srr;
    let singleton_part = a * b;

    // R3
    let father_in = !spec.men[f].is_other() && sing.contains(&f);
    let frr = if father_in { one() } else { rr(f) };
    let yoseh_present = sing.iter().any(|&i| is(i, Yoseh)) || is(s, Yoseh);

    let generational_part = if spec.men[f].is_other() {
        one() // R2
    } else {
        match fig(f) {
            Some(Yeshua) => {
                // R1
                if rules.allow_father_yeshua {
                    frr
                } else {
                    one()
                }
            }
            Some(Yoseh) => {
                // R5
                frr * if son_in(&[Yeshua, Yosef, James, Cleopas]) {
                    unk(s)
                } else {
                    one()
                }
            }
            Some(Cleopas) => {
                // R6
                frr * if son_in(&[Yosef, James, Yoseh]) {
                    unk(s)
                } else {
                    one()
                }
            }
            Some(Yosef) => {
                if is(s, Cleopas) && !yoseh_present {
                    frr * unk(s) // R11
                } else if !father_in && yoseh_present {
                    // R8
                    if son_in(&[Yeshua, Yoseh, James]) {
                        rr(f) * rr(s)
                    } else {
                        one()
                    }
                } else if !father_in {
                    // R9
                    if son_in(&[Yeshua, James]) {
                        rr(f) * rr(s)
                    } else {
                        rr(f)
                    }
                } else if !yoseh_present {
                    // R10
                    if son_in(&[Yeshua, James]) {
                        unk(s)
                    } else {
                        one()
                    }
                } else {
                    one()
                }
            }
            Some(James) => {
                if father_in {
                    // R12
                    if son_in(&[Yoseh, Yeshua, Yosef]) {
                        unk(s)
                    } else if is(s, Cleopas) {
                        rr(s)
                    } else {
                        one()
                    }
                } else if is(s, Cleopas) {
                    rr(f) * rr(s) // R13
                } else if son_in(&[Yoseh, Yosef, Yeshua]) {
                    rr(f) * unk(s)
                } else {
                    rr(f)
                }
            }
            None => frr * rr(s),
        }
    };

    // R14
    let bonus = if is(s, Yeshua) && is(f, Yosef) {
        rules.bonus_divisor.clone()
    } else {
        one()
    };
    MenPart {
        singleton_part,
        generational_part,
        bonus,
    }
}

pub fn score(c: &TombConfiguration, spec: &HypothesisSpec, rules: &RuleLedger) -> Result<RRValue> {
    if let Validity::Invalid(why) = validate(spec, c) {
        return Err(Error::Contract(format!(
            "cannot score an invalid tomb: {}",
            why.reason()
        )));
    }
    let women_part = &spec.women[c.women[0]].rr * &spec.women[c.women[1]].rr;
    let m = men_part(
        spec,
        rules,
        c.singletons[0],
        c.singletons[1],
        c.father,
        c.son,
    );
    Ok(RRValue {
        value: &women_part * m.value(),
        women_part,
        singleton_part: m.singleton_part,
        generational_part: m.generational_part,
        bonus: m.bonus,
    })
}
