//! Exact construction and verification of two-color permutation-type
//! operators, their one-parameter combinations `S + a T`, and the
//! Yang-Baxter, tetrahedron and four-simplex relations they satisfy.

pub mod bitlinalg;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod opmatrix;
pub mod polyring;
pub mod report;
pub mod simplexcheck;

pub use error::{Error, Result};
pub use polyring::{MPoly, Rational, VarTable};
pub use report::{Report, Status, Witness};
