//! Finding unions of directed stars and paths inside digraphs of bounded directed treewidth.
//!
//! The pieces, bottom up: [`graph`] (digraphs, patterns, brute-force oracle), [`decomp`]
//! (arboreal decompositions and guardedness), [`star_system`] (leaf allocation as an
//! integer system), [`saddp`] (disjoint paths with avoid-set budgets), [`rspsi`] (the full
//! search) and [`reductions`] (hardness constructions and the expansion gadget).

pub mod graph;
pub mod decomp;
pub mod star_system;
pub mod saddp;
pub mod rspsi;
pub mod reductions;

#[cfg(test)]
pub(crate) mod testgen;
