//! Exact computation of twisted Lusztig–Vogan multiplicity polynomials, their
//! Hodge refinements and signature multiplicity polynomials for blocks of
//! K-orbit parameters on a flag variety.
//!
//! Pipeline: [`block::Block`] → [`hecke::HeckeOps`] → [`duality::compute_duality`]
//! → [`kl::compute_lvm`] → [`hodgepoly`] conversions.

pub mod block;
pub mod builders;
pub mod duality;
pub mod hecke;
pub mod hodgepoly;
pub mod kl;
pub mod lattice;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod rootdata;
pub mod table;
pub mod verify;
pub mod weyl;

pub use block::{Block, CaseLabel};
pub use poly::{QuarterLaurent, SignedULaurent};
pub use rootdata::{RootDatum, Weight};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation failed:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parity error: {0}")]
    Parity(String),
    #[error("{0}")]
    Domain(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
