//! Oriented matroids on small ground sets, and a certificate engine showing
//! that the corank-2 strong map from the rank-4 alternating matroid on eight
//! elements to the rank-2 matroid `m2(8)` does not factor through any uniform
//! rank-3 matroid.
//!
//! Layers, bottom up:
//! - [`signed`]: signed vectors as bitmask pairs.
//! - [`chirotope`], [`matroid`], [`axioms`]: instances, tope and covector
//!   generation, axiom checkers, circuit extraction.
//! - [`strong_map`]: strong-map tests.
//! - [`lemma6`]: the exhaustive six-element search.
//! - [`n8`]: the eight-element contradiction.
//! - [`certificate`], [`cli`]: JSON certificates, re-validation, command line.

pub mod axioms;
pub mod certificate;
pub mod chirotope;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod lemma6;
pub mod matroid;
pub mod n8;
pub mod signed;
pub mod strong_map;

pub use chirotope::{phi, Chirotope};
pub use error::{OmError, Result};
pub use matroid::{CovectorSet, TopeSet};
pub use signed::{ElementSet, GroundSet, SignedVector};
