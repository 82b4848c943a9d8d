//! Relevance-and-rareness (RR) significance analysis for clusters of
//! inscribed names.
//!
//! An observed tomb is scored against an onomasticon, the null distribution
//! of RR over all ordered tomb samples is enumerated exactly, and the tail
//! proportion is turned into an adjusted p-value, posterior odds and lower
//! confidence bounds. All arithmetic is on exact rationals.
//!
//! ```
//! use rrtomb_core::{analyze, config::HypothesisConfig, onomasticon::Onomasticon};
//!
//! let a = analyze(&Onomasticon::bundled(), &HypothesisConfig::bundled()).unwrap();
//! assert_eq!(rrtomb_core::rational::fmt_sig(&a.adjusted_area, 4), "0.0006041");
//! ```

pub mod config;
pub mod demography;
pub mod enumerator;
pub mod error;
pub mod hypothesis;
pub mod inference;
pub mod onomasticon;
pub mod qserde;
pub mod rational;
pub mod rr_engine;
pub mod sensitivity;

pub use error::{Error, Result};

use config::HypothesisConfig;
use enumerator::{enumerate_tail_with, TailResult};
use onomasticon::Onomasticon;
use rational::Q;
use rr_engine::{score, RRValue};

/// How enumeration work is scheduled. Without the `parallel` feature both
/// variants run on the calling thread.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

/// Runs `f` on a pool of `threads` workers (`None` keeps the global pool).
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|p| p.install(f))
            .map_err(|e| Error::Config(format!("thread pool: {e}"))),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R: Send>(_threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    Ok(f())
}

/// Headline figures for one hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub observed: RRValue,
    pub tail: TailResult,
    pub n2: u64,
    pub adjusted_area: Q,
}

pub fn analyze(onom: &Onomasticon, cfg: &HypothesisConfig) -> Result<Analysis> {
    analyze_with(onom, cfg, Exec::default())
}

pub fn analyze_with(onom: &Onomasticon, cfg: &HypothesisConfig, exec: Exec) -> Result<Analysis> {
    let spec = cfg.build(onom)?;
    let tomb = cfg.observed.resolve(&spec)?;
    let observed = score(&tomb, &spec, &cfg.rules)?;
    let totals = (onom.female.persons, onom.male.persons);
    let tail = enumerate_tail_with(&spec, &cfg.rules, &observed.value, totals, exec);
    let adjusted_area = &tail.proportion * Q::from_integer(cfg.n2.into());
    Ok(Analysis {
        observed,
        tail,
        n2: cfg.n2,
        adjusted_area,
    })
}
