//! Relation algebras over finite structures: terms, first-order logic, the
//! translations between them, safety checkers and synthesis of local queries.

pub mod error;
pub mod structures;

pub use error::{Error, Result};
pub mod terms;

mod syntax;
pub mod logic;
pub mod oracle;

mod sliced;
pub mod translate;
pub mod checkers;
pub mod constructions;
pub mod synth;
pub mod games;
