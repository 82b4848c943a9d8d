//! Shared fixtures for the integration tests: a person-level brute-force
//! oracle over small synthetic onomastica, and exhaustive property checks.
#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rrtomb_core::config::HypothesisConfig;
use rrtomb_core::enumerator::{enumerate_tail_with, TailResult};
use rrtomb_core::hypothesis::{Category, Figure, HypothesisSpec, Kind};
use rrtomb_core::onomasticon::{Gender, Onomasticon};
use rrtomb_core::rational::{frac, Q};
use rrtomb_core::rr_engine::{score, validate, RuleLedger, TombConfiguration, Validity};
use rrtomb_core::sensitivity::{apply, Suite};
use rrtomb_core::Exec;

/// A small onomasticon given as integer person counts per category. The
/// last category of each gender is Other.
#[derive(Debug, Clone)]
pub struct Synthetic {
    pub women: Vec<u32>,
    pub men: Vec<u32>,
    pub spec: HypothesisSpec,
    pub rules: RuleLedger,
    pub observed: Q,
}

fn categories(
    gender: Gender,
    counts: &[u32],
    rrs: &[Q],
    figures: &[Option<Figure>],
) -> Vec<Category> {
    let total: u32 = counts.iter().sum();
    let last = counts.len() - 1;
    counts
        .iter()
        .enumerate()
        .map(|(i, &n)| Category {
            label: if i == last {
                "Other".into()
            } else {
                format!("{}{i}", gender.as_str())
            },
            gender,
            weight: frac(n.into(), total.into()),
            rr: if i == last { Q::one() } else { rrs[i].clone() },
            kind: if i == last {
                Kind::Other
            } else {
                Kind::Candidate
            },
            figure: if i == last {
                None
            } else {
                figures.get(i).copied().flatten()
            },
        })
        .collect()
}

impl Synthetic {
    pub fn new(
        women: Vec<u32>,
        men: Vec<u32>,
        women_rr: Vec<Q>,
        men_rr: Vec<Q>,
        figures: Vec<Option<Figure>>,
        rules: RuleLedger,
        observed: Q,
    ) -> Self {
        let spec = HypothesisSpec {
            name: "synthetic".into(),
            women: categories(Gender::Female, &women, &women_rr, &[]),
            men: categories(Gender::Male, &men, &men_rr, &figures),
        };
        Synthetic {
            women,
            men,
            spec,
            rules,
            observed,
        }
    }

    pub fn totals(&self) -> (u64, u64) {
        (
            self.women.iter().sum::<u32>().into(),
            self.men.iter().sum::<u32>().into(),
        )
    }

    pub fn person_tuples(&self) -> u64 {
        let (f, m) = self.totals();
        f * f * m * m * m * m
    }

    pub fn enumerate(&self, exec: Exec) -> TailResult {
        enumerate_tail_with(&self.spec, &self.rules, &self.observed, self.totals(), exec)
    }
}

const FIGURES: [Figure; 5] = [
    Figure::Yosef,
    Figure::Yeshua,
    Figure::Yoseh,
    Figure::James,
    Figure::Cleopas,
];

fn random_rr(rng: &mut ChaCha8Rng) -> Q {
    let d: i64 = rng.random_range(2..=40);
    frac(rng.random_range(1..=d), d)
}

/// A random instance with at most four categories per gender, each holding
/// one to six persons, small enough for the person-level loop.
pub fn random_synthetic(seed: u64) -> Synthetic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let nw = rng.random_range(2..=4);
        let nm = rng.random_range(2..=4);
        let women: Vec<u32> = (0..nw).map(|_| rng.random_range(1..=6)).collect();
        let men: Vec<u32> = (0..nm).map(|_| rng.random_range(1..=6)).collect();
        let (f, m): (u64, u64) = (
            women.iter().sum::<u32>().into(),
            men.iter().sum::<u32>().into(),
        );
        if f * f * m.pow(4) > 300_000 {
            continue;
        }
        let women_rr = (0..nw).map(|_| random_rr(&mut rng)).collect();
        let men_rr = (0..nm).map(|_| random_rr(&mut rng)).collect();
        let mut pool = FIGURES.to_vec();
        let figures = (0..nm)
            .map(|_| {
                if rng.random_bool(0.2) || pool.is_empty() {
                    return None;
                }
                let i = rng.random_range(0..pool.len());
                Some(pool.swap_remove(i))
            })
            .collect();
        let rules = RuleLedger {
            bonus_divisor: [frac(1, 1), frac(6, 5), frac(3, 2)]
                .choose(&mut rng)
                .unwrap()
                .clone(),
            unknown_son_factor: [frac(1, 1), frac(5, 2), frac(5, 1)]
                .choose(&mut rng)
                .unwrap()
                .clone(),
            require_yeshua_in_tomb: rng.random_bool(0.3),
            allow_father_yeshua: rng.random_bool(0.3),
            count_unknown_sons: rng.random_bool(0.7),
        };
        let mut s = Synthetic::new(women, men, women_rr, men_rr, figures, rules, Q::one());
        s.observed = random_valid_score(&s.spec, &s.rules, &mut rng);
        return s;
    }
}

fn random_valid_score(spec: &HypothesisSpec, rules: &RuleLedger, rng: &mut ChaCha8Rng) -> Q {
    let (nw, nm) = (spec.women.len(), spec.men.len());
    loop {
        let t = TombConfiguration {
            women: [rng.random_range(0..nw), rng.random_range(0..nw)],
            singletons: [rng.random_range(0..nm), rng.random_range(0..nm)],
            father: rng.random_range(0..nm),
            son: rng.random_range(0..nm),
        };
        if let Ok(v) = score(&t, spec, rules) {
            return v.value;
        }
    }
}

/// Person-level counts: every ordered tuple of persons, with repetition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersonCounts {
    pub total: u64,
    pub valid: u64,
    pub tail: u64,
}

/// Two persons of the same named category cannot share a tomb in the
/// colliding slots. Other persons never collide.
fn persons_collide(a: usize, b: usize, other: usize) -> bool {
    a == b && a != other
}

/// Brute force over persons. Each person carries its category label;
/// validity is checked here from the labels and the score comes from the
/// scorer, cached per category tuple.
pub fn person_level(s: &Synthetic) -> PersonCounts {
    let label = |counts: &[u32]| -> Vec<usize> {
        counts
            .iter()
            .enumerate()
            .flat_map(|(i, &n)| std::iter::repeat_n(i, n as usize))
            .collect()
    };
    let wl = label(&s.women);
    let ml = label(&s.men);
    let (nw, nm) = (s.women.len(), s.men.len());
    let (wo, mo) = (nw - 1, nm - 1);
    let yeshua = s.spec.figure(Figure::Yeshua);

    // 0 = invalid, 1 = valid outside the tail, 2 = valid in the tail
    let mut class = vec![0u8; nw * nw * nm.pow(4)];
    for (idx, c) in class.iter_mut().enumerate() {
        let mut r = idx;
        let mut next = |n: usize| {
            let v = r % n;
            r /= n;
            v
        };
        let (w1, w2, s1, s2, f, so) = (next(nw), next(nw), next(nm), next(nm), next(nm), next(nm));
        let invalid = persons_collide(w1, w2, wo)
            || persons_collide(s1, s2, mo)
            || persons_collide(f, so, mo)
            || persons_collide(so, s1, mo)
            || persons_collide(so, s2, mo);
        if invalid {
            continue;
        }
        let t = TombConfiguration {
            women: [w1, w2],
            singletons: [s1, s2],
            father: f,
            son: so,
        };
        let v = score(&t, &s.spec, &s.rules)
            .expect("oracle-valid tuple scores")
            .value;
        let eligible =
            !s.rules.require_yeshua_in_tomb || [s1, s2, f, so].iter().any(|&m| Some(m) == yeshua);
        *c = if eligible && v <= s.observed { 2 } else { 1 };
    }

    let mut counts = PersonCounts {
        total: 0,
        valid: 0,
        tail: 0,
    };
    for &w1 in &wl {
        for &w2 in &wl {
            for &s1 in &ml {
                for &s2 in &ml {
                    for &f in &ml {
                        for &so in &ml {
                            let idx = w1 + nw * (w2 + nw * (s1 + nm * (s2 + nm * (f + nm * so))));
                            counts.total += 1;
                            match class[idx] {
                                2 => {
                                    counts.valid += 1;
                                    counts.tail += 1;
                                }
                                1 => counts.valid += 1,
                                _ => {}
                            }
                        }
                    }
                }
            }
        }
    }
    counts
}

/// Exact agreement of the category-level enumeration with the oracle.
pub fn oracle_agrees(s: &Synthetic, exec: Exec) -> Result<(), String> {
    let p = person_level(s);
    let t = s.enumerate(exec);
    let q = |n: u64| Q::from_integer(n.into());
    let expected_prop = if p.valid == 0 {
        Q::zero()
    } else {
        frac(p.tail as i64, p.valid as i64)
    };
    if t.total_mass != q(p.total)
        || t.valid_mass != q(p.valid)
        || t.tail_mass != q(p.tail)
        || t.proportion != expected_prop
    {
        return Err(format!(
            "category {}/{}/{} vs persons {}/{}/{} for {:?}",
            t.total_mass, t.valid_mass, t.tail_mass, p.total, p.valid, p.tail, s
        ));
    }
    Ok(())
}

/// The instance with women 3+2 and men 4+2+3 persons.
pub fn small_example() -> Synthetic {
    Synthetic::new(
        vec![3, 2],
        vec![4, 2, 3],
        vec![frac(3, 5)],
        vec![frac(4, 9), frac(2, 9)],
        vec![Some(Figure::Yosef), Some(Figure::Yeshua)],
        RuleLedger::default(),
        frac(2, 25),
    )
}

pub fn baseline() -> (Onomasticon, HypothesisConfig) {
    (Onomasticon::bundled(), HypothesisConfig::bundled())
}

/// Baseline and every bundled scenario's hypothesis.
pub fn scenario_configs() -> Vec<(String, HypothesisConfig)> {
    let (onom, base) = baseline();
    let suite = Suite::bundled();
    let mut out = vec![("baseline".to_string(), base.clone())];
    for sc in &suite.scenario {
        out.push((
            sc.name.clone(),
            apply(&onom, &base, &suite.pool, sc).expect("bundled scenario applies"),
        ));
    }
    out
}

pub fn all_tombs(spec: &HypothesisSpec) -> impl Iterator<Item = TombConfiguration> + '_ {
    let (nw, nm) = (spec.women.len(), spec.men.len());
    (0..nw * nw * nm.pow(4)).filter_map(move |mut r| {
        let mut next = |n: usize| {
            let v = r % n;
            r /= n;
            v
        };
        let t = TombConfiguration {
            women: [next(nw), next(nw)],
            singletons: [next(nm), next(nm)],
            father: next(nm),
            son: next(nm),
        };
        (validate(spec, &t) == Validity::Valid).then_some(t)
    })
}

/// Every valid tomb whose score is outside (0, 1].
pub fn out_of_range(spec: &HypothesisSpec, rules: &RuleLedger) -> Vec<TombConfiguration> {
    all_tombs(spec)
        .filter(|t| {
            let v = score(t, spec, rules).unwrap().value;
            v <= Q::zero() || v > Q::one()
        })
        .collect()
}

/// Every valid tomb whose score changes when its women or its singletons
/// are swapped.
pub fn asymmetric(spec: &HypothesisSpec, rules: &RuleLedger) -> Vec<TombConfiguration> {
    all_tombs(spec)
        .filter(|t| {
            let v = score(t, spec, rules).unwrap().value;
            let mut w = *t;
            w.women.swap(0, 1);
            let mut m = *t;
            m.singletons.swap(0, 1);
            score(&w, spec, rules).unwrap().value != v || score(&m, spec, rules).unwrap().value != v
        })
        .collect()
}

/// Slots of a tomb, for substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Woman1,
    Woman2,
    Singleton1,
    Singleton2,
    Father,
    Son,
}

pub const SLOTS: [Slot; 6] = [
    Slot::Woman1,
    Slot::Woman2,
    Slot::Singleton1,
    Slot::Singleton2,
    Slot::Father,
    Slot::Son,
];

pub fn with_other(spec: &HypothesisSpec, t: &TombConfiguration, slot: Slot) -> TombConfiguration {
    let wo = spec.women.iter().position(|c| c.is_other()).unwrap();
    let mo = spec.men.iter().position(|c| c.is_other()).unwrap();
    let mut u = *t;
    match slot {
        Slot::Woman1 => u.women[0] = wo,
        Slot::Woman2 => u.women[1] = wo,
        Slot::Singleton1 => u.singletons[0] = mo,
        Slot::Singleton2 => u.singletons[1] = mo,
        Slot::Father => u.father = mo,
        Slot::Son => u.son = mo,
    }
    u
}

/// Every (tomb, slot) where putting Other in the slot lowers the score.
pub fn monotonicity_violations(
    spec: &HypothesisSpec,
    rules: &RuleLedger,
) -> Vec<(TombConfiguration, Slot)> {
    let mut out = Vec::new();
    for t in all_tombs(spec) {
        let v = score(&t, spec, rules).unwrap().value;
        for slot in SLOTS {
            let u = with_other(spec, &t, slot);
            if score(&u, spec, rules).unwrap().value < v {
                out.push((t, slot));
            }
        }
    }
    out
}

/// Scores of the observed tomb's four male names over all twelve
/// assignments to (father, son, {singleton, singleton}).
pub fn male_arrangements(
    cfg: &HypothesisConfig,
    spec: &HypothesisSpec,
) -> Vec<(TombConfiguration, Q)> {
    let observed = cfg.observed.resolve(spec).unwrap();
    let names = [
        observed.father,
        observed.son,
        observed.singletons[0],
        observed.singletons[1],
    ];
    let mut out: Vec<(TombConfiguration, Q)> = Vec::new();
    for f in 0..4 {
        for s in 0..4 {
            if s == f {
                continue;
            }
            let rest: Vec<usize> = (0..4).filter(|&i| i != f && i != s).collect();
            let t = TombConfiguration {
                women: observed.women,
                singletons: [names[rest[0]], names[rest[1]]],
                father: names[f],
                son: names[s],
            };
            out.push((t, score(&t, spec, &cfg.rules).unwrap().value));
        }
    }
    out
}

/// Per-gender weight sums that are not exactly one.
pub fn unnormalized(spec: &HypothesisSpec) -> Vec<(Gender, Q)> {
    [Gender::Female, Gender::Male]
        .into_iter()
        .map(|g| (g, spec.categories(g).iter().map(|c| &c.weight).sum::<Q>()))
        .filter(|(_, s)| !s.is_one())
        .collect()
}
