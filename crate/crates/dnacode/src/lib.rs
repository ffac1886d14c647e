//! Constrained DNA codes with error correction.
//!
//! The crate builds DNA codes that avoid secondary structure (no two disjoint
//! windows that are reverse complements), limit homopolymer runs, and keep GC
//! content balanced globally, per segment, or in every sliding window, then
//! layers single-substitution and single-edit correction on top.
//!
//! Modules:
//! - [`alphabet`]: sequence types and the DNA <-> bit-pair <-> Z4 maps
//! - [`oracles`]: brute-force constraint checkers (the ground truth)
//! - [`engine`]: exact counting, ranking and unranking of constrained families
//! - [`construction1`]: structure-avoiding run-length-limited codec
//! - [`ecc`]: prime fields, Hamming codes, Varshamov-Tenengolts classes
//! - [`dna_ecc`]: balanced constrained codecs with substitution/edit correction
//! - [`channel`]: single-edit channel simulation campaigns
//! - [`io`]: FASTA and packed-bit serialization

// Index loops in the counting and linear-algebra code mirror the subscripts in
// the recurrences; the iterator rewrites hide the dual indexing.
#![allow(clippy::needless_range_loop)]

pub mod alphabet;
pub mod channel;
pub mod construction1;
pub mod dna_ecc;
pub mod ecc;
pub mod engine;
pub mod error;
pub mod io;
pub mod oracles;

pub use alphabet::{BitSeq, DnaSeq, Nucleotide, QuatSeq};
pub use error::{Error, Result};
pub use oracles::{BalanceKind, Eps};
