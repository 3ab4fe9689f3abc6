//! Computational companion for RO(C2)-graded equivariant homology charts.
//!
//! The crate exposes five subsystems:
//!
//! * [`arith`]: 2-adic valuations, Radon–Hurwitz numbers, mod-2 binomials;
//! * [`classification`]: closed-form coefficient groups, Hurewicz images,
//!   zero-line classification and differential-length predictors;
//! * [`lambda`]: the mod-2 Lambda algebra as a DGA and Ext charts for the
//!   sphere;
//! * [`stunted`]: stunted real projective spectra as cell modules, their
//!   Lambda complexes and Ext charts;
//! * [`hurwitz_radon`]: exact Hurwitz–Radon matrix families, tangent frames
//!   and the equivariant quadratic map.
//!
//! Chart emission (TSV/SVG) and the command-line front end live in [`chart`]
//! and [`cli`].

pub mod arith;
pub mod chart;
pub mod classification;
pub mod cli;
pub mod f2;
pub mod hurwitz_radon;
pub mod labels;
pub mod lambda;
pub mod stunted;

/// Crate-wide error type. Domain errors (bad mathematical input) and
/// range/resource errors (computation window exceeded) are distinguished so
/// the CLI can map them to distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("cache rejected: {0}")]
    CacheRejected(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
}
