//! Model checking for inquisitive logics with team and information-state semantics.

pub mod cli;
pub mod constructions;
pub mod evaluator;
pub mod inqbq;
pub mod metatheory;
pub mod parser;
pub mod structures;
pub mod syntax;
