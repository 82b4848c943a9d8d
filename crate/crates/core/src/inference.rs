//! Two-step inference from a tail area `q` over `n2` comparable tombs.
//!
//! `beta = (n2 - 1) q` is the chance that some other tomb is at least as
//! surprising; `theta = P(B | A)` is the chance the target tomb itself would
//! score as surprising as observed.

use crate::error::{Error, Result};
use crate::rational::Q;
use num_traits::{One, Signed, Zero};

fn n(n2: u64) -> Q {
    Q::from_integer(n2.into())
}

pub fn beta(q: &Q, n2: u64) -> Q {
    n(n2.saturating_sub(1)) * q
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustedP {
    /// `n2 * q`, an upper bound rather than an exact p-value.
    pub raw: Q,
    /// `raw` capped at 1.
    pub value: Q,
    pub clamped: bool,
}

pub fn adjusted_p(q: &Q, n2: u64) -> Result<AdjustedP> {
    if q.is_negative() || *q > Q::one() {
        return Err(Error::Param("q must lie in [0,1]".into()));
    }
    if n2 == 0 {
        return Err(Error::Param("n2 must be at least 1".into()));
    }
    let raw = n(n2) * q;
    let clamped = raw > Q::one();
    let value = if clamped { Q::one() } else { raw.clone() };
    Ok(AdjustedP {
        raw,
        value,
        clamped,
    })
}

/// `theta / ((n2 - 1) q)`: prior odds `1/(n2 - 1)` times the likelihood ratio
/// `theta / q`.
pub fn posterior_odds(theta: &Q, n2: u64, q: &Q) -> Result<Q> {
    check_theta(theta)?;
    let b = beta(q, n2);
    if b.is_zero() {
        return Err(Error::Infinite(
            "posterior odds are infinite when (n2-1)q = 0".into(),
        ));
    }
    Ok(theta / b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub value: Q,
    /// Set when `alpha <= beta`, where the bound collapses to 0.
    pub degenerate: bool,
}

fn bound_inputs(alpha: &Q, n2: u64, q: &Q) -> Result<Q> {
    if !alpha.is_positive() || *alpha >= Q::one() {
        return Err(Error::Param("alpha must lie in (0,1)".into()));
    }
    let b = beta(q, n2);
    if b >= Q::one() {
        return Err(Error::Param("(n2-1)q must be below 1".into()));
    }
    Ok(b)
}

/// `100(1 - alpha)%` lower confidence bound on theta: `(alpha - beta)/(1 - beta)`.
pub fn theta_lower_bound(alpha: &Q, n2: u64, q: &Q) -> Result<Bound> {
    let b = bound_inputs(alpha, n2, q)?;
    if *alpha <= b {
        return Ok(Bound {
            value: Q::zero(),
            degenerate: true,
        });
    }
    Ok(Bound {
        value: (alpha - &b) / (Q::one() - &b),
        degenerate: false,
    })
}

/// Lower bound on the posterior odds: `(alpha - beta)/(beta (1 - beta))`.
pub fn odds_lower_bound(alpha: &Q, n2: u64, q: &Q) -> Result<Bound> {
    let b = bound_inputs(alpha, n2, q)?;
    if b.is_zero() {
        return Err(Error::Infinite(
            "odds bound is infinite when (n2-1)q = 0".into(),
        ));
    }
    if *alpha <= b {
        return Ok(Bound {
            value: Q::zero(),
            degenerate: true,
        });
    }
    Ok(Bound {
        value: (alpha - &b) / (&b * (Q::one() - &b)),
        degenerate: false,
    })
}

/// Probability that at least the observed surprise occurs:
/// `theta (1 - beta) + beta`.
pub fn tau(theta: &Q, n2: u64, q: &Q) -> Result<Q> {
    if theta.is_negative() || *theta > Q::one() {
        return Err(Error::Param("theta must lie in [0,1]".into()));
    }
    let b = beta(q, n2);
    Ok(theta * (Q::one() - &b) + b)
}

fn check_theta(theta: &Q) -> Result<()> {
    if !theta.is_positive() || *theta > Q::one() {
        return Err(Error::Param("theta must lie in (0,1]".into()));
    }
    Ok(())
}
