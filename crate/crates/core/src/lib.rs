//! Exact computation of zonal polynomials and their coefficient matrices.
//!
//! The coefficient engine ([`zonal`]) builds `c[κ, λ]` from the Muirhead
//! recurrence with column-sum initialisation. Everything downstream is
//! cross-checked against independent routes: closed forms ([`closedforms`]),
//! the trace-power identity, the Laplace–Beltrami eigen-equation
//! ([`geomcheck`]), the Wishart expectation operator ([`wishart`]) and the
//! scalar reduction of the matrix-argument hypergeometric series
//! ([`hypermat`]).
//!
//! All arithmetic is exact (arbitrary precision rationals) unless a function
//! says otherwise.

pub mod closedforms;
mod error;
pub mod exactpoly;
pub mod geomcheck;
pub mod hypermat;
pub mod linalg;
pub mod parallel;
pub mod partitions;
pub mod verify;
pub mod wishart;
pub mod zonal;

pub use error::{Result, ZonalError};
pub use exactpoly::{MPoly, Rational, SymM};
pub use partitions::Partition;
pub use zonal::{CoeffEngine, CoeffTable};
