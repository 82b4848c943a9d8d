//! Exact weighted enumeration of ordered tomb samples.
//!
//! Each ordered 6-tuple of categories carries mass equal to the product of
//! its category counts. Validity and score both factor into a women part and
//! a men part, so the men's quadruples are scored once, sorted, and prefix
//! summed; every women pair then finds its tail by binary search on the
//! threshold `observed / women_part`. The result equals the plain 6-fold
//! loop exactly.

use crate::hypothesis::HypothesisSpec;
use crate::rational::Q;
use crate::rr_engine::{men_part, men_validity, women_validity, RuleLedger, Validity};
use crate::Exec;
use num_bigint::BigInt;
use num_traits::Zero;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailResult {
    pub total_mass: Q,
    pub valid_mass: Q,
    pub tail_mass: Q,
    pub proportion: Q,
    pub observed_rr: Q,
}

impl TailResult {
    pub fn valid_ratio(&self) -> Q {
        &self.valid_mass / &self.total_mass
    }
}

/// `female_total^2 * male_total^4`, the number of ordered person samples.
pub fn tuple_space_size(female_total: u64, male_total: u64) -> BigInt {
    let f = BigInt::from(female_total);
    let m = BigInt::from(male_total);
    &f * &f * &m * &m * &m * &m
}

struct Quad {
    score: Q,
    mass: Q,
    eligible: bool,
}

fn quad(spec: &HypothesisSpec, rules: &RuleLedger, i: usize) -> Option<Quad> {
    let n = spec.men.len();
    let (s1, s2, f, s) = (i / (n * n * n), (i / (n * n)) % n, (i / n) % n, i % n);
    if men_validity(spec, s1, s2, f, s) != Validity::Valid {
        return None;
    }
    let m = &spec.men;
    let mass = &m[s1].weight * &m[s2].weight * &m[f].weight * &m[s].weight;
    let eligible = !rules.require_yeshua_in_tomb || {
        use crate::hypothesis::Figure::Yeshua;
        [s1, s2, f, s].iter().any(|&j| m[j].figure == Some(Yeshua))
    };
    Some(Quad {
        score: men_part(spec, rules, s1, s2, f, s).value(),
        mass,
        eligible,
    })
}

fn male_quads(spec: &HypothesisSpec, rules: &RuleLedger, exec: Exec) -> Vec<Quad> {
    let n = spec.men.len().pow(4);
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..n)
            .into_par_iter()
            .filter_map(|i| quad(spec, rules, i))
            .collect(),
        _ => (0..n).filter_map(|i| quad(spec, rules, i)).collect(),
    }
}

fn women_pairs(spec: &HypothesisSpec) -> Vec<(usize, usize)> {
    let n = spec.women.len();
    (0..n * n)
        .map(|i| (i / n, i % n))
        .filter(|&(a, b)| women_validity(spec, a, b) == Validity::Valid)
        .collect()
}

/// Enumerates valid and tail mass for `observed` with the default executor.
pub fn enumerate_tail(
    spec: &HypothesisSpec,
    rules: &RuleLedger,
    observed: &Q,
    totals: (u64, u64),
) -> TailResult {
    enumerate_tail_with(spec, rules, observed, totals, Exec::default())
}

pub fn enumerate_tail_with(
    spec: &HypothesisSpec,
    rules: &RuleLedger,
    observed: &Q,
    totals: (u64, u64),
    exec: Exec,
) -> TailResult {
    let quads = male_quads(spec, rules, exec);
    let men_valid: Q = quads.iter().map(|q| &q.mass).sum();
    let mut tail: Vec<(Q, Q)> = quads
        .into_iter()
        .filter(|q| q.eligible)
        .map(|q| (q.score, q.mass))
        .collect();
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => tail.par_sort_by(|a, b| a.0.cmp(&b.0)),
        _ => tail.sort_by(|a, b| a.0.cmp(&b.0)),
    }
    let mut cum = Vec::with_capacity(tail.len() + 1);
    cum.push(Q::zero());
    for (_, m) in &tail {
        let next = cum.last().unwrap() + m;
        cum.push(next);
    }

    let pair = |&(a, b): &(usize, usize)| -> (Q, Q) {
        let w = &spec.women;
        let wm = &w[a].weight * &w[b].weight;
        let threshold = observed / (&w[a].rr * &w[b].rr);
        let k = tail.partition_point(|(s, _)| *s <= threshold);
        (&wm * &men_valid, wm * &cum[k])
    };
    let add = |x: (Q, Q), y: (Q, Q)| (x.0 + y.0, x.1 + y.1);
    let zero = || (Q::zero(), Q::zero());
    let pairs = women_pairs(spec);
    let (valid_w, tail_w) = match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => pairs.par_iter().map(pair).reduce(zero, add),
        _ => pairs.iter().map(pair).fold(zero(), add),
    };

    let total = Q::from_integer(tuple_space_size(totals.0, totals.1));
    let proportion = if valid_w.is_zero() {
        Q::zero()
    } else {
        &tail_w / &valid_w
    };
    TailResult {
        valid_mass: valid_w * &total,
        tail_mass: tail_w * &total,
        total_mass: total,
        proportion,
        observed_rr: observed.clone(),
    }
}

/// Plain 6-fold loop over ordered category tuples. Quadratically slower
/// than [`enumerate_tail_with`]; kept as a cross-check.
pub fn enumerate_tail_direct(
    spec: &HypothesisSpec,
    rules: &RuleLedger,
    observed: &Q,
    totals: (u64, u64),
) -> TailResult {
    use crate::rr_engine::{score, validate, TombConfiguration};
    let (nw, nm) = (spec.women.len(), spec.men.len());
    let mut valid = Q::zero();
    let mut tail = Q::zero();
    for i in 0..nw * nw * nm.pow(4) {
        let mut r = i;
        let mut next = |n: usize| {
            let v = r % n;
            r /= n;
            v
        };
        let t = TombConfiguration {
            son: next(nm),
            father: next(nm),
            singletons: {
                let b = next(nm);
                [next(nm), b]
            },
            women: {
                let b = next(nw);
                [next(nw), b]
            },
        };
        if validate(spec, &t) != Validity::Valid {
            continue;
        }
        let (w, m) = (&spec.women, &spec.men);
        let mass = &w[t.women[0]].weight
            * &w[t.women[1]].weight
            * &m[t.singletons[0]].weight
            * &m[t.singletons[1]].weight
            * &m[t.father].weight
            * &m[t.son].weight;
        valid += &mass;
        let eligible = !rules.require_yeshua_in_tomb
            || [t.singletons[0], t.singletons[1], t.father, t.son]
                .iter()
                .any(|&j| m[j].figure == Some(crate::hypothesis::Figure::Yeshua));
        if eligible && score(&t, spec, rules).expect("valid").value <= *observed {
            tail += mass;
        }
    }
    let total = Q::from_integer(tuple_space_size(totals.0, totals.1));
    let proportion = if valid.is_zero() {
        Q::zero()
    } else {
        &tail / &valid
    };
    TailResult {
        valid_mass: valid * &total,
        tail_mass: tail * &total,
        total_mass: total,
        proportion,
        observed_rr: observed.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::HypothesisConfig;
    use crate::onomasticon::Onomasticon;
    use crate::rr_engine::score;
    use num_traits::One;

    #[test]
    fn space_size() {
        assert_eq!(tuple_space_size(2, 3), BigInt::from(324));
        assert_eq!(tuple_space_size(1, 1), BigInt::one());
        let s: BigInt = BigInt::from(317u64).pow(2u32) * BigInt::from(2509u64).pow(4u32);
        assert_eq!(tuple_space_size(317, 2509), s);
    }

    #[test]
    fn factored_matches_direct_loop() {
        let cfg = HypothesisConfig::bundled();
        let onom = Onomasticon::bundled();
        let spec = cfg.build(&onom).unwrap();
        let t = cfg.observed.resolve(&spec).unwrap();
        for rules in [
            RuleLedger::default(),
            RuleLedger {
                require_yeshua_in_tomb: true,
                ..RuleLedger::default()
            },
        ] {
            let obs = score(&t, &spec, &rules).unwrap().value;
            let a = enumerate_tail_with(&spec, &rules, &obs, (317, 2509), Exec::Sequential);
            let b = enumerate_tail_direct(&spec, &rules, &obs, (317, 2509));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn observed_one_gives_everything() {
        let cfg = HypothesisConfig::bundled();
        let spec = cfg.build(&Onomasticon::bundled()).unwrap();
        let r = enumerate_tail(&spec, &RuleLedger::default(), &Q::one(), (317, 2509));
        assert_eq!(r.proportion, Q::one());
        assert_eq!(r.tail_mass, r.valid_mass);
    }
}
