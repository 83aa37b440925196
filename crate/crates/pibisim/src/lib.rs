//! Open bisimilarity for the finite pi-calculus, with machine-checkable
//! distinguishing-formula certificates for non-bisimilar pairs.
//!
//! The pipeline: symbolic and fixed-world labeled transition semantics
//! ([`open_lts`], [`id_lts`]) feed the bisimulation game ([`bisim`]), whose
//! step forest is transformed into pairs of modal formulae ([`formula`])
//! that the built-in satisfaction checker ([`sat`]) validates.

pub mod bisim;
pub mod cert;
pub mod formula;
pub mod id_lts;
pub mod open_lts;
pub mod parse;
pub mod partition;
pub mod pretty;
pub mod sat;
pub mod syntax;
