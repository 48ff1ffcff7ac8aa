//! Categorical entropy of cohomological Fourier-Mukai autoequivalences on
//! abelian surfaces whose Néron-Severi lattice is generated by one ample class.
//!
//! Everything is computed on the algebraic Mukai lattice
//! `L = Z + ZH + Z rho` with `(H^2) = 2D`, where an autoequivalence acts
//! through a matrix `[[a, b*sqrt(D)], [c*sqrt(D), d]]` with `ad - bcD = 1`.

pub mod cli;
pub mod entropy;
pub mod error;
pub mod exact_arith;
pub mod fm_group;
pub mod mukai_lattice;
pub mod sampling;
pub mod sympow;

pub use error::{Error, Result};
