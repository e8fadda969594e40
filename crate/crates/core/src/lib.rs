//! Büchi type-and-effect analysis for a small language of recursive,
//! parameterless, non-deterministic procedures.

pub mod automaton;
pub mod bitset;
pub mod classes;
pub mod cli;
pub mod inference;
pub mod lang;
pub mod lattice;
pub mod ndfs;
pub mod oracle;
pub mod report;
