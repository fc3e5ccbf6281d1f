//! Self-similar systems: maps, words, stopping families and attractor samples.

pub mod catalog;
mod moran;
mod similarity;
mod system;
mod word;

pub use moran::{eta, lattice_class, similarity_dimension, LatticeClass};
pub use similarity::Similarity;
pub use system::{Cloud, Ifs, DEFAULT_LATTICE_CAP, DEFAULT_WORD_BUDGET};
pub use word::{Word, WordSet};

#[cfg(test)]
mod tests;
