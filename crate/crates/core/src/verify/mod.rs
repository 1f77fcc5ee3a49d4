//! Verification suites with serializable reports.
//!
//! Every suite is a pure function of its configuration. Sampled inputs come
//! from one ChaCha8 stream per `(seed, key)` and batches are collected in
//! input order, so a report does not depend on the thread count.

pub mod algebraic;
pub mod endoscopy;
pub mod even;
pub mod flags;
pub mod parity;
mod sample;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::endoscopy::EndoscopyError;
use crate::germs::GermsError;
use crate::quadrics::QuadricsError;
use crate::zeta::ZetaError;

pub use sample::{stream_key, Sampler};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Quadrics(#[from] QuadricsError),
    #[error(transparent)]
    Germs(#[from] GermsError),
    #[error(transparent)]
    Endoscopy(#[from] EndoscopyError),
    #[error("no admissible sample of degree {degree} over F_{q} after {tries} draws")]
    SamplingExhausted { q: u64, degree: usize, tries: usize },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// Run `suite` once per thread count and compare the serialized reports.
/// Returns the report of the last run and whether all runs were
/// byte-identical.
pub fn compare_across_jobs<T, F>(jobs: &[usize], suite: F) -> Result<(T, bool), VerifyError>
where
    T: Serialize + Send,
    F: Fn() -> Result<T, VerifyError> + Sync,
{
    let mut first: Option<String> = None;
    let mut identical = true;
    let mut last = None;
    for &n in jobs {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| VerifyError::ThreadPool(e.to_string()))?;
        let report = pool.install(&suite)?;
        let bytes = serde_json::to_string(&report).expect("reports serialize");
        match &first {
            None => first = Some(bytes),
            Some(b) => identical &= *b == bytes,
        }
        last = Some(report);
    }
    Ok((last.expect("at least one thread count"), identical))
}
