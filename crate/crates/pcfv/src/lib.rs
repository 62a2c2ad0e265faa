//! A workbench for a fine-grained call-by-value PCF: reference evaluator,
//! finite truncations with tabulation and contextual-inequivalence probing,
//! a finite-table recursion engine, and finite sheaf/site machinery built
//! from systems of partitions.
//!
//! The guide under `book/` walks through each piece; its code listings are
//! compiled as doc-tests via the [`guide`] module.

pub mod finmodel;
pub mod opsem;
pub mod ssp;
pub mod syntax;
pub mod truncation;
pub mod typing;

pub mod guide;
