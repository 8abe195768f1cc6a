//! Index tables of bounded vector fields on G-covers.
//!
//! This crate computes, at desk scale, the index of a bounded vector field on
//! a cover M → M/G as an element of the coinvariants of bounded functions on
//! the deck group: per-domain index sums, class arithmetic in ℓ∞(G)_G, and
//! the quadrature machinery (Stokes, Thom pullbacks, antiderivatives) needed
//! to cross-check the combinatorial answers against numerical ones on flat
//! model spaces.
//!
//! Module map:
//! - [`group`]: finitely generated group families, normal forms, word-metric
//!   balls, Følner sets.
//! - [`coinvariants`]: the decidable slice of ℓ∞(G)_G, Whyte-criterion
//!   reports, Følner means, Ponzi flows on free groups.
//! - [`complex`]: voltage-labeled triangulated 1- and 2-manifolds and their
//!   covers on finite windows.
//! - [`morse`]: discrete vector fields (acyclic matchings) and their critical
//!   index tables.
//! - [`analytic`]: expression-defined vector fields on flat models, zero
//!   finding, winding indices, tameness.
//! - [`forms`]: bounded differential forms, per-domain quadrature, Stokes
//!   residuals, Thom-bump index integrals.
//! - [`harness`]: scenario configs, end-to-end verdicts, CSV/JSON reports.

pub mod analytic;
pub mod coinvariants;
pub mod complex;
pub mod expr;
pub mod flat;
pub mod forms;
pub mod group;
pub mod harness;
pub mod morse;
pub mod quad;
pub mod rat;
pub mod table;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("non-amenable family: {0}")]
    NonAmenable(String),
    #[error("window error: {0}")]
    Window(String),
    #[error("refinement needed: {0}")]
    Refinement(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("not C1-close: {0}")]
    NotC1Close(String),
    #[error("not comparable: {0}")]
    NotComparable(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use coinvariants::{CoinvariantClass, CoinvariantRep};
pub use group::{GroupElement, GroupFamily, GroupSpec};
pub use table::IndexTable;
