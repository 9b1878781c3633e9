//! Exact rationals, sparse multivariate polynomials and the monomial (`M`)
//! and elementary-product (`U`) symmetric bases.

mod mpoly;
mod rational;
mod symm;

pub use mpoly::{MPoly, Monomial, TermRecord};
pub use rational::{
    factorial, factorial_rat, format_rational, half_integer, parse_rational, pochhammer, pow2,
    rat, Rational,
};
pub use symm::{elementary, m_expand, m_orbit, to_m_basis, u_expand, SymM};
