//! Reasoning for multi-agent non-normal modal description logics.
//!
//! The crate provides the syntax of the logics, neighbourhood and relational
//! semantics, a labelled tableau decision procedure with model extraction, a
//! brute-force model-search oracle, propositional abstraction for the
//! fragment without modalised concepts, and translations into normal modal
//! description logic.

pub mod abstraction;
pub mod bitset;
pub mod cli;
pub mod logics;
pub mod model_extract;
pub mod oracle;
pub mod semantics;
pub mod syntax;
pub mod tableau;
pub mod translate;
