//! Binary determinantal complexity: constructions of binary variable matrices
//! for the permanent and the Hamiltonian cycle polynomial, and the
//! computer-assisted lower bound `bdc(per_3) >= 7`.

pub mod algebra;
pub mod cli;
pub mod constructions;
pub mod enumeration;
pub mod error;
pub mod gadgets;
pub mod matrix;
pub mod reconstruction;

pub use error::{Error, Result};
