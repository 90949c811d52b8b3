//! A small LCF-style kernel for Isabelle's metalogic (Pure), with an
//! order-sorted type system and a checker that replays proof terms through
//! the kernel.

pub mod cli;
pub mod derived;
pub mod kernel;
pub mod proofterm;
pub mod signature;
pub mod sorts;
pub mod syntax;
pub mod format;
pub mod sexpr;
