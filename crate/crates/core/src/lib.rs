//! Exact mod-p homology of double loop spaces of odd-dimensional Moore spaces,
//! their Bockstein spectral sequences, and the torsion catalog derived from them.

pub mod algebra;
pub mod bss;
pub mod catalog;
pub mod error;
pub mod field;
pub mod freecomm;
pub mod lie;
pub mod lincomb;
pub mod mod2;
pub mod models;
pub mod oracle;
pub mod primitives;
pub mod term;

pub use error::{Error, Result};
pub use field::{fp_homology, Fp, Homology, Matrix, Subspace};
pub use lincomb::LinComb;
pub use term::{Coefficients, Grading, Parity, Term};
