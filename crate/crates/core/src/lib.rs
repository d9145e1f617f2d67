//! Discrete Morse theory on Milnor's free simplicial monoid F⁺K, with K the
//! minimal simplicial circle, a simplicial model of the loop space of S².
//!
//! * [`simplicial`]: generators, words, face and degeneracy maps, the total
//!   order and stratum enumeration.
//! * [`chain`]: integer chains, the boundary operator and inner products.
//! * [`pairing`]: the restricted steepness pairing and a Morse-matching
//!   validator.
//! * [`flow`]: the discrete vector field, the flow operator, its
//!   stabilization and Morse boundary entries.
//! * [`homology`]: Smith normal form and homology of truncated Morse
//!   complexes.
//! * [`syntax`]: the text syntax for chains used on the command line.
//! * [`cli`]: the `fk-morse` command-line tool.

mod bigjson;
pub mod chain;
pub mod cli;
pub mod error;
pub mod flow;
pub mod homology;
pub mod pairing;
pub mod simplicial;
pub mod syntax;

pub use error::{MorseError, Result};
