//! Zonal polynomial coefficients `c[κ, λ]`, the zero pattern, assembled
//! zonal polynomials and change of basis into the zonal family.

mod engine;
mod table;

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

pub use engine::CoeffEngine;
pub use table::{CoeffTable, TableJson};

use crate::exactpoly::{m_orbit, MPoly, Rational, SymM};
use crate::parallel::Strategy;
use crate::partitions::{has_negative_prefix, Partition};
use crate::{Result, ZonalError};

/// `c[κ, λ] = 0` exactly when some zero-padded prefix sum of `κ_i − λ_i` is
/// negative, i.e. when `κ` does not dominate `λ`.
///
/// Defined for `λ ≤ κ` lexicographically; `λ > κ` is rejected.
pub fn is_zero_coefficient(kappa: &Partition, lambda: &Partition) -> Result<bool> {
    if kappa.weight() != lambda.weight() {
        return Err(ZonalError::IncomparableWeights(kappa.weight(), lambda.weight()));
    }
    if lambda > kappa {
        return Err(ZonalError::OutOfTriangle { kappa: kappa.to_string(), lambda: lambda.to_string() });
    }
    Ok(has_negative_prefix(kappa, lambda))
}

/// One-shot `c[κ, λ]`; only the pairs the recurrence actually needs are
/// computed.
pub fn coefficient(kappa: &Partition, lambda: &Partition) -> Result<Rational> {
    if kappa.weight() != lambda.weight() {
        return Err(ZonalError::IncomparableWeights(kappa.weight(), lambda.weight()));
    }
    CoeffEngine::new(kappa.weight()).coefficient(kappa, lambda)
}

pub fn coefficient_table(n: usize) -> CoeffTable {
    coefficient_table_with(n, Strategy::default())
}

pub fn coefficient_table_with(n: usize, strategy: Strategy) -> CoeffTable {
    CoeffEngine::with_options(n, true, strategy).table()
}

/// Which normalisation of the zonal family to express things in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZonalBasis {
    /// `C_κ`, summing to `(tr Y)^n`.
    C,
    /// `Z_κ = C_κ / c[κ,κ]`, monic in `M_κ`.
    Z,
}

/// Coefficient engines shared across weights.
#[derive(Default)]
pub struct ZonalCache {
    engines: HashMap<usize, CoeffEngine>,
    strategy: Strategy,
}

impl ZonalCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_strategy(strategy: Strategy) -> Self {
        ZonalCache { engines: HashMap::new(), strategy }
    }

    pub fn engine(&mut self, n: usize) -> &mut CoeffEngine {
        let strategy = self.strategy;
        self.engines
            .entry(n)
            .or_insert_with(|| CoeffEngine::with_options(n, true, strategy))
    }

    pub fn coefficient(&mut self, kappa: &Partition, lambda: &Partition) -> Result<Rational> {
        if kappa.weight() != lambda.weight() {
            return Err(ZonalError::IncomparableWeights(kappa.weight(), lambda.weight()));
        }
        self.engine(kappa.weight()).coefficient(kappa, lambda)
    }

    /// `C_κ` in monomial-symmetric coordinates.
    pub fn zonal_polynomial_m(&mut self, kappa: &Partition) -> SymM {
        let row = self.engine(kappa.weight()).row(kappa).expect("partition of its own weight");
        SymM::from_pairs(row).expect("row entries share the weight")
    }

    /// `C_κ(y1..ym)`; zero when `κ` has more than `m` parts.
    pub fn zonal_polynomial(&mut self, kappa: &Partition, m: usize) -> MPoly {
        if kappa.len() > m {
            return MPoly::zero(m);
        }
        self.zonal_polynomial_m(kappa).to_mpoly(m)
    }

    /// `Z_κ = C_κ / c[κ,κ]` in `m` variables.
    pub fn z_normalized(&mut self, kappa: &Partition, m: usize) -> Result<MPoly> {
        if kappa.len() > m {
            return Err(ZonalError::TooManyParts { partition: kappa.to_string(), vars: m });
        }
        let d = self.engine(kappa.weight()).diagonal(kappa)?;
        Ok(self.zonal_polynomial(kappa, m).scale(&d.recip()))
    }

    /// `C_κ(y)` evaluated directly from monomial orbits, without building
    /// the polynomial.
    pub fn evaluate(&mut self, kappa: &Partition, point: &[Rational]) -> Rational {
        let m = point.len();
        if kappa.len() > m {
            return Rational::zero();
        }
        let row = self.engine(kappa.weight()).row(kappa).expect("partition of its own weight");
        let mut acc = Rational::zero();
        for (lambda, c) in row {
            if lambda.len() > m {
                continue;
            }
            let mut orbit_sum = Rational::zero();
            for e in m_orbit(&lambda, m) {
                let mut t = <Rational as num_traits::One>::one();
                for (x, &k) in point.iter().zip(&e) {
                    if k > 0 {
                        t *= num_traits::pow(x.clone(), k as usize);
                    }
                }
                orbit_sum += t;
            }
            acc += c * orbit_sum;
        }
        acc
    }

    /// Solves `f = Σ a_κ · B_κ` for the chosen zonal basis `B`.
    ///
    /// The coefficient matrix is upper triangular in descending
    /// lexicographic order, so this is a single back-substitution sweep.
    pub fn express_in_zonal_basis(
        &mut self,
        f: &SymM,
        basis: ZonalBasis,
    ) -> Result<BTreeMap<Partition, Rational>> {
        let Some(n) = f.weight() else {
            return Ok(BTreeMap::new());
        };
        let engine = self.engine(n);
        let parts = engine.partitions().to_vec();
        let mut in_c: Vec<Rational> = Vec::with_capacity(parts.len());
        for (j, lambda) in parts.iter().enumerate() {
            let mut residual = f.get(lambda);
            for (i, kappa) in parts[..j].iter().enumerate() {
                if !in_c[i].is_zero() {
                    residual -= &in_c[i] * engine.coefficient(kappa, lambda)?;
                }
            }
            let diag = engine.diagonal(lambda)?;
            in_c.push(residual / diag);
        }
        let mut out = BTreeMap::new();
        for (kappa, a) in parts.into_iter().zip(in_c) {
            if a.is_zero() {
                continue;
            }
            let v = match basis {
                ZonalBasis::C => a,
                ZonalBasis::Z => a * engine.diagonal(&kappa)?,
            };
            out.insert(kappa, v);
        }
        Ok(out)
    }
}

pub fn zonal_polynomial_m(kappa: &Partition) -> SymM {
    ZonalCache::new().zonal_polynomial_m(kappa)
}

pub fn zonal_polynomial(kappa: &Partition, m: usize) -> MPoly {
    ZonalCache::new().zonal_polynomial(kappa, m)
}

pub fn z_normalized(kappa: &Partition, m: usize) -> Result<MPoly> {
    ZonalCache::new().z_normalized(kappa, m)
}

pub fn express_in_zonal_basis(f: &SymM, basis: ZonalBasis) -> Result<BTreeMap<Partition, Rational>> {
    ZonalCache::new().express_in_zonal_basis(f, basis)
}
