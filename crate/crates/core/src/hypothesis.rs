//! A priori candidate lists and the per-category sampling weights and RR
//! values derived from them.

use crate::error::{Error, Result};
use crate::onomasticon::{residual_weight, slice_frequency, Gender, Onomasticon};
use crate::qserde;
use crate::rational::{fmt_exact, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Male figures whose names trigger configurational rules in the scorer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    /// Joseph, father of Jesus.
    Yosef,
    Yeshua,
    /// Joses, the brother; also read as Yosa.
    Yoseh,
    James,
    Cleopas,
}

impl Figure {
    pub fn from_person(id: &str) -> Option<Figure> {
        match id.to_ascii_lowercase().as_str() {
            "yosef" | "joseph" | "yehosef" => Some(Figure::Yosef),
            "yeshua" | "jesus" | "yehoshua" => Some(Figure::Yeshua),
            "yoseh" | "joses" | "yosa" => Some(Figure::Yoseh),
            "james" | "yaakov" | "jacob" => Some(Figure::James),
            "cleopas" => Some(Figure::Cleopas),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Candidate,
    ResidualGeneric,
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Category {
    pub label: String,
    pub gender: Gender,
    /// Sampling frequency.
    pub weight: Q,
    /// Relevance-and-rareness value.
    pub rr: Q,
    pub kind: Kind,
    pub figure: Option<Figure>,
}

impl Category {
    pub fn is_other(&self) -> bool {
        self.kind == Kind::Other
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisSpec {
    pub name: String,
    pub women: Vec<Category>,
    pub men: Vec<Category>,
}

pub const OTHER: &str = "Other";

/// One person on an a priori list.
///
/// `generic` alone selects the whole generic class; with `slice` it selects
/// a rendition slice. A candidate without `generic` is a placeholder and must
/// carry both `weight` and `rr`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateDescriptor {
    pub person: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gender: Option<Gender>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generic: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, with = "qserde::opt", skip_serializing_if = "Option::is_none")]
    pub weight: Option<Q>,
    #[serde(default, with = "qserde::opt", skip_serializing_if = "Option::is_none")]
    pub rr: Option<Q>,
    /// Multiplies weight and RR together; the difference is absorbed by the
    /// enclosing residual generic or by Other.
    #[serde(default, with = "qserde::opt", skip_serializing_if = "Option::is_none")]
    pub scale: Option<Q>,
}

impl CandidateDescriptor {
    pub fn new(person: &str, gender: Gender, generic: &str) -> Self {
        CandidateDescriptor {
            person: person.into(),
            gender: Some(gender),
            generic: Some(generic.into()),
            slice: None,
            label: None,
            weight: None,
            rr: None,
            scale: None,
        }
    }

    pub fn with_slice(mut self, slice: &str) -> Self {
        self.slice = Some(slice.into());
        self
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> &str {
        self.label
            .as_deref()
            .or(self.slice.as_deref())
            .or(self.generic.as_deref())
            .unwrap_or(&self.person)
    }

    fn scale(&self) -> Q {
        self.scale.clone().unwrap_or_else(Q::one)
    }
}

/// RR for a category: the rarest enclosing class. Candidates keep their own
/// frequency, residual generics take the whole generic frequency and Other
/// is uninformative.
pub fn assign_rr(kind: Kind, class_frequency: &Q) -> Q {
    match kind {
        Kind::Other => Q::one(),
        Kind::Candidate | Kind::ResidualGeneric => class_frequency.clone(),
    }
}

/// Frequency of the class a descriptor names, before residual subtraction.
fn class_frequency(d: &CandidateDescriptor, onom: &Onomasticon) -> Result<Option<Q>> {
    let Some(generic) = &d.generic else {
        return Ok(None);
    };
    let base = match &d.slice {
        Some(s) => {
            let slice = onom.slice(generic, s).ok_or_else(|| {
                Error::Spec(format!(
                    "candidate `{}`: unknown slice {generic}/{s}",
                    d.person
                ))
            })?;
            slice_frequency(slice, onom)?
        }
        None => onom.generic_frequency(generic).map_err(|_| {
            Error::Spec(format!(
                "candidate `{}`: unknown generic `{generic}`",
                d.person
            ))
        })?,
    };
    Ok(Some(base * d.scale()))
}

fn build_gender(
    onom: &Onomasticon,
    gender: Gender,
    cands: &[&CandidateDescriptor],
) -> Result<Vec<Category>> {
    for (i, c) in cands.iter().enumerate() {
        if c.label() == OTHER {
            return Err(Error::Spec(format!("`{OTHER}` is reserved")));
        }
        if let Some(generic) = &c.generic {
            if let Some(g) = onom.generic(generic) {
                if g.gender != gender {
                    return Err(Error::Spec(format!(
                        "candidate `{}`: generic `{generic}` is {}",
                        c.person,
                        g.gender.as_str()
                    )));
                }
            }
        }
        for p in &cands[..i] {
            if p.label() == c.label() {
                return Err(Error::Spec(format!("duplicate candidate `{}`", c.label())));
            }
            if p.person == c.person {
                return Err(Error::Spec(format!("duplicate person `{}`", c.person)));
            }
        }
    }
    let freqs = cands
        .iter()
        .map(|c| class_frequency(c, onom))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(cands.len() + 1);
    for (c, f) in cands.iter().zip(&freqs) {
        let (kind, weight, rr) = match f {
            None => {
                let (Some(w), Some(r)) = (&c.weight, &c.rr) else {
                    return Err(Error::Spec(format!(
                        "placeholder `{}` needs both weight and rr",
                        c.person
                    )));
                };
                (Kind::Candidate, w * c.scale(), r * c.scale())
            }
            Some(f) if c.slice.is_none() => {
                let nested: Vec<Q> = cands
                    .iter()
                    .zip(&freqs)
                    .filter(|(o, _)| o.slice.is_some() && o.generic == c.generic)
                    .map(|(o, of)| o.weight.clone().or(of.clone()).unwrap_or_default())
                    .collect();
                let kind = if nested.is_empty() {
                    Kind::Candidate
                } else {
                    Kind::ResidualGeneric
                };
                let w = residual_weight(f, &nested)?;
                (kind, w, assign_rr(kind, f))
            }
            Some(f) => (Kind::Candidate, f.clone(), assign_rr(Kind::Candidate, f)),
        };
        let weight = c.weight.clone().filter(|_| f.is_some()).unwrap_or(weight);
        let rr = c.rr.clone().filter(|_| f.is_some()).unwrap_or(rr);
        out.push(Category {
            label: c.label().to_string(),
            gender,
            weight,
            rr,
            kind,
            figure: Figure::from_person(&c.person),
        });
    }
    let used: Vec<Q> = out.iter().map(|c| c.weight.clone()).collect();
    let other = residual_weight(&Q::one(), &used)
        .map_err(|_| Error::Spec(format!("{} candidate weights exceed 1", gender.as_str())))?;
    out.push(Category {
        label: OTHER.into(),
        gender,
        weight: other,
        rr: assign_rr(Kind::Other, &Q::one()),
        kind: Kind::Other,
        figure: None,
    });
    Ok(out)
}

/// Builds a spec from descriptors. Descriptors without a gender take it from
/// their generic.
pub fn build_spec(
    name: &str,
    onom: &Onomasticon,
    candidates: &[CandidateDescriptor],
) -> Result<HypothesisSpec> {
    let gender_of = |c: &CandidateDescriptor| -> Result<Gender> {
        if let Some(g) = c.gender {
            return Ok(g);
        }
        c.generic
            .as_deref()
            .and_then(|g| onom.generic(g))
            .map(|g| g.gender)
            .ok_or_else(|| Error::Spec(format!("candidate `{}` has no gender", c.person)))
    };
    let mut women = Vec::new();
    let mut men = Vec::new();
    for c in candidates {
        match gender_of(c)? {
            Gender::Female => women.push(c),
            Gender::Male => men.push(c),
        }
    }
    let spec = HypothesisSpec {
        name: name.into(),
        women: build_gender(onom, Gender::Female, &women)?,
        men: build_gender(onom, Gender::Male, &men)?,
    };
    spec.validate()?;
    Ok(spec)
}

impl HypothesisSpec {
    pub fn categories(&self, g: Gender) -> &[Category] {
        match g {
            Gender::Female => &self.women,
            Gender::Male => &self.men,
        }
    }

    pub fn index(&self, g: Gender, label: &str) -> Option<usize> {
        self.categories(g).iter().position(|c| c.label == label)
    }

    pub fn figure(&self, f: Figure) -> Option<usize> {
        self.men.iter().position(|c| c.figure == Some(f))
    }

    pub fn validate(&self) -> Result<()> {
        for g in [Gender::Female, Gender::Male] {
            let cats = self.categories(g);
            let sum: Q = cats.iter().map(|c| &c.weight).sum();
            if !sum.is_one() {
                return Err(Error::Spec(format!(
                    "{} weights sum to {}",
                    g.as_str(),
                    fmt_exact(&sum)
                )));
            }
            if cats.iter().filter(|c| c.is_other()).count() != 1 {
                return Err(Error::Spec(format!(
                    "{} needs exactly one {OTHER}",
                    g.as_str()
                )));
            }
            for (i, c) in cats.iter().enumerate() {
                if cats[..i].iter().any(|d| d.label == c.label) {
                    return Err(Error::Spec(format!("duplicate label `{}`", c.label)));
                }
                if c.weight.is_negative() || c.weight > Q::one() {
                    return Err(Error::Spec(format!("`{}` weight outside [0,1]", c.label)));
                }
                if !c.rr.is_positive() || c.rr > Q::one() {
                    return Err(Error::Spec(format!("`{}` rr outside (0,1]", c.label)));
                }
                if c.is_other() && !c.rr.is_one() {
                    return Err(Error::Spec(format!("`{}` must have rr 1", c.label)));
                }
                if c.weight.is_zero() && !c.is_other() {
                    return Err(Error::Spec(format!("`{}` has zero weight", c.label)));
                }
            }
        }
        Ok(())
    }
}
