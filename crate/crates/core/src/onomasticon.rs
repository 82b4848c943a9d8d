//! Name-frequency data: gender totals, generic name counts and rendition
//! slices, plus the ossuary-corrected rendition frequency estimator.
//!
//! The plain-text fixture schema is documented at the top of
//! `data/onomasticon.txt`.

use crate::error::{Error, Result};
use crate::rational::{fmt_exact, parse_q, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

pub const BUNDLED: &str = include_str!("../data/onomasticon.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Female,
    Male,
}

impl Gender {
    pub fn parse(s: &str) -> Option<Gender> {
        match s {
            "female" | "f" => Some(Gender::Female),
            "male" | "m" => Some(Gender::Male),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Female => "female",
            Gender::Male => "male",
        }
    }
}

/// A table entry that may be undetermined (`-`) or uncertain (`?`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Count {
    pub value: Option<Q>,
    pub uncertain: bool,
}

impl Count {
    pub fn known(v: Q) -> Self {
        Count {
            value: Some(v),
            uncertain: false,
        }
    }

    fn parse(tok: &str) -> std::result::Result<Self, String> {
        if tok == "-" {
            return Ok(Count {
                value: None,
                uncertain: false,
            });
        }
        let (body, uncertain) = match tok.strip_suffix('?') {
            Some(b) => (b, true),
            None => (tok, false),
        };
        let v = parse_q(body).map_err(|e| e.to_string())?;
        if v.is_negative() {
            return Err(format!("negative count {tok}"));
        }
        Ok(Count {
            value: Some(v),
            uncertain,
        })
    }

    fn render(&self) -> String {
        match &self.value {
            None => "-".into(),
            Some(v) => format!("{}{}", fmt_exact(v), if self.uncertain { "?" } else { "" }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericNameCount {
    pub name: String,
    pub gender: Gender,
    /// Nonfictitious persons in the full lexicon.
    pub total_persons: Q,
    /// Carried for reference; never used by an estimator.
    pub fictitious: Count,
    pub rahmani: Count,
    pub ossuary_persons: Count,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenditionSlice {
    pub generic: String,
    pub label: String,
    /// k: ossuary-derived persons whose rendition falls in the slice.
    pub ossuary_matching: Q,
    /// K: ossuary-derived persons for the generic.
    pub ossuary_generic: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenderTotal {
    pub persons: u64,
    pub fictitious: Count,
    pub rahmani: Count,
    pub ossuary: Count,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Onomasticon {
    pub female: GenderTotal,
    pub male: GenderTotal,
    pub generics: Vec<GenericNameCount>,
    pub slices: Vec<RenditionSlice>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn verr(field: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Validation {
        field: field.into(),
        msg: msg.into(),
    }
}

impl Onomasticon {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled onomasticon fixture is valid")
    }

    /// `"bundled"` selects the built-in fixture; anything else is a path.
    pub fn load(source: &str) -> Result<Self> {
        if source == "bundled" {
            return Ok(Self::bundled());
        }
        let text = std::fs::read_to_string(Path::new(source))
            .map_err(|e| Error::Config(format!("{source}: {e}")))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut female = None;
        let mut male = None;
        let mut generics = Vec::new();
        let mut slices = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let tok: Vec<&str> = body.split_whitespace().collect();
            let count = |t: &str| Count::parse(t).map_err(|m| perr(line, m));
            let known = |t: &str| -> Result<Q> {
                count(t)?
                    .value
                    .ok_or_else(|| perr(line, format!("`{t}` must be determined")))
            };
            match tok[0] {
                "total" => {
                    if tok.len() != 6 {
                        return Err(perr(line, "total expects 5 fields"));
                    }
                    let g = Gender::parse(tok[1])
                        .ok_or_else(|| perr(line, format!("unknown gender `{}`", tok[1])))?;
                    let persons: u64 = tok[2].parse().map_err(|_| {
                        perr(line, format!("persons `{}` is not an integer", tok[2]))
                    })?;
                    let row = GenderTotal {
                        persons,
                        fictitious: count(tok[3])?,
                        rahmani: count(tok[4])?,
                        ossuary: count(tok[5])?,
                    };
                    let slot = match g {
                        Gender::Female => &mut female,
                        Gender::Male => &mut male,
                    };
                    if slot.replace(row).is_some() {
                        return Err(perr(line, format!("duplicate {} total", g.as_str())));
                    }
                }
                "generic" => {
                    if tok.len() != 7 {
                        return Err(perr(line, "generic expects 6 fields"));
                    }
                    let gender = Gender::parse(tok[1])
                        .ok_or_else(|| perr(line, format!("unknown gender `{}`", tok[1])))?;
                    generics.push(GenericNameCount {
                        name: tok[2].to_string(),
                        gender,
                        total_persons: known(tok[3])?,
                        fictitious: count(tok[4])?,
                        rahmani: count(tok[5])?,
                        ossuary_persons: count(tok[6])?,
                    });
                }
                "slice" => {
                    if tok.len() != 5 {
                        return Err(perr(line, "slice expects 4 fields"));
                    }
                    slices.push(RenditionSlice {
                        generic: tok[1].to_string(),
                        label: tok[2].to_string(),
                        ossuary_matching: known(tok[3])?,
                        ossuary_generic: known(tok[4])?,
                    });
                }
                other => return Err(perr(line, format!("unknown record `{other}`"))),
            }
        }
        if generics.is_empty() && female.is_none() && male.is_none() {
            return Err(perr(0, "empty source"));
        }
        let onom = Onomasticon {
            female: female.ok_or_else(|| perr(0, "missing female total"))?,
            male: male.ok_or_else(|| perr(0, "missing male total"))?,
            generics,
            slices,
        };
        onom.validate()?;
        Ok(onom)
    }

    pub fn validate(&self) -> Result<()> {
        for (g, t) in [(Gender::Female, &self.female), (Gender::Male, &self.male)] {
            if t.persons == 0 {
                return Err(verr(format!("total {}", g.as_str()), "must be positive"));
            }
            if let Some(o) = &t.ossuary.value {
                if *o > Q::from_integer(t.persons.into()) {
                    return Err(verr(
                        format!("total {} ossuary", g.as_str()),
                        "exceeds persons",
                    ));
                }
            }
        }
        for (i, g) in self.generics.iter().enumerate() {
            if self.generics[..i].iter().any(|h| h.name == g.name) {
                return Err(verr(format!("generic {}", g.name), "duplicate name"));
            }
            if let Some(o) = &g.ossuary_persons.value {
                if *o > g.total_persons {
                    return Err(verr(
                        format!("generic {} ossuary_persons", g.name),
                        "exceeds total_persons",
                    ));
                }
            }
            if g.total_persons > self.total(g.gender) {
                return Err(verr(
                    format!("generic {} total_persons", g.name),
                    "exceeds gender total",
                ));
            }
        }
        for s in &self.slices {
            let field = |f: &str| format!("slice {}/{} {f}", s.generic, s.label);
            if self.generic(&s.generic).is_none() {
                return Err(verr(
                    field("generic"),
                    format!("unknown generic `{}`", s.generic),
                ));
            }
            if s.ossuary_matching > s.ossuary_generic {
                return Err(verr(field("ossuary_matching"), "exceeds ossuary_generic"));
            }
            if self
                .slices
                .iter()
                .filter(|t| t.generic == s.generic && t.label == s.label)
                .count()
                > 1
            {
                return Err(verr(field("label"), "duplicate slice"));
            }
        }
        for g in &self.generics {
            let share: Q = self
                .slices
                .iter()
                .filter(|s| s.generic == g.name && !s.ossuary_generic.is_zero())
                .map(|s| &s.ossuary_matching / &s.ossuary_generic)
                .sum();
            if share > Q::from_integer(1.into()) {
                return Err(verr(
                    format!("generic {} slices", g.name),
                    "slices exceed the generic",
                ));
            }
        }
        Ok(())
    }

    pub fn total(&self, g: Gender) -> Q {
        Q::from_integer(self.gender_total(g).persons.into())
    }

    pub fn gender_total(&self, g: Gender) -> &GenderTotal {
        match g {
            Gender::Female => &self.female,
            Gender::Male => &self.male,
        }
    }

    pub fn generic(&self, name: &str) -> Option<&GenericNameCount> {
        self.generics.iter().find(|g| g.name == name)
    }

    pub fn slice(&self, generic: &str, label: &str) -> Option<&RenditionSlice> {
        self.slices
            .iter()
            .find(|s| s.generic == generic && s.label == label)
    }

    /// Generic frequency `G / N`.
    pub fn generic_frequency(&self, name: &str) -> Result<Q> {
        let g = self
            .generic(name)
            .ok_or_else(|| Error::Spec(format!("unknown generic `{name}`")))?;
        Ok(&g.total_persons / self.total(g.gender))
    }

    /// Writes the fixture schema; `parse(to_fixture())` reproduces `self`.
    pub fn to_fixture(&self) -> String {
        let mut out = String::new();
        for (g, t) in [(Gender::Female, &self.female), (Gender::Male, &self.male)] {
            let _ = writeln!(
                out,
                "total {} {} {} {} {}",
                g.as_str(),
                t.persons,
                t.fictitious.render(),
                t.rahmani.render(),
                t.ossuary.render()
            );
        }
        for g in &self.generics {
            let _ = writeln!(
                out,
                "generic {} {} {} {} {} {}",
                g.gender.as_str(),
                g.name,
                fmt_exact(&g.total_persons),
                g.fictitious.render(),
                g.rahmani.render(),
                g.ossuary_persons.render()
            );
        }
        for s in &self.slices {
            let _ = writeln!(
                out,
                "slice {} {} {} {}",
                s.generic,
                s.label,
                fmt_exact(&s.ossuary_matching),
                fmt_exact(&s.ossuary_generic)
            );
        }
        out
    }
}

/// Rendition frequency `f = (k/K) * G / N`: the slice's share among the
/// generic's ossuary-derived persons, applied to the full-lexicon generic
/// frequency.
pub fn slice_frequency(slice: &RenditionSlice, onom: &Onomasticon) -> Result<Q> {
    if slice.ossuary_generic.is_zero() {
        return Err(Error::UndefinedEstimator(format!(
            "{}/{}",
            slice.generic, slice.label
        )));
    }
    let g = onom.generic_frequency(&slice.generic)?;
    Ok(&slice.ossuary_matching / &slice.ossuary_generic * g)
}

/// `enclosing - sum(subtracted)`, rejecting a negative remainder.
pub fn residual_weight(enclosing: &Q, subtracted: &[Q]) -> Result<Q> {
    let r = enclosing - subtracted.iter().sum::<Q>();
    if r.is_negative() {
        return Err(Error::Spec(format!(
            "negative residual {} after subtracting slices",
            fmt_exact(&r)
        )));
    }
    Ok(r)
}
