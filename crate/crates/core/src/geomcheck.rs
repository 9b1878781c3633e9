//! The reduced Laplace–Beltrami operator on eigenvalue space,
//!
//! `Δ_Y = Σ_i y_i² ∂_i² + Σ_i Σ_{j≠i} y_i² / (y_i − y_j) · ∂_i`,
//!
//! whose polynomial eigenfunctions are the zonal polynomials.

use serde::Serialize;

use crate::exactpoly::{MPoly, Rational};
use crate::partitions::Partition;
use crate::zonal::ZonalCache;
use crate::{Result, ZonalError};

/// Applies `Δ_Y` to a symmetric polynomial in `m` variables.
///
/// The singular part is summed pairwise as
/// `(y_i²∂_i f − y_j²∂_j f) / (y_i − y_j)`, an exact polynomial division
/// that fails precisely when `f` is not symmetric in `y_i, y_j`.
pub fn apply_delta_y(f: &MPoly, m: usize) -> Result<MPoly> {
    if f.nvars() != m {
        return Err(ZonalError::VariableMismatch(f.nvars(), m));
    }
    let y2 = |i: usize| MPoly::var(i, m).map(|v| v.pow(2));
    let mut first = Vec::with_capacity(m);
    let mut out = MPoly::zero(m);
    for i in 0..m {
        let di = f.partial_derivative(i)?;
        let dii = di.partial_derivative(i)?;
        let sq = y2(i)?;
        out = &out + &(&sq * &dii);
        first.push(&sq * &di);
    }
    for i in 0..m {
        for j in i + 1..m {
            let diff = &first[i] - &first[j];
            let q = diff.exact_div_diff(i, j).map_err(|e| match e {
                ZonalError::NotDivisible(a, b) => {
                    ZonalError::InputNotSymmetric(format!("not divisible by (y{} - y{})", a + 1, b + 1))
                }
                other => other,
            })?;
            out = &out + &q;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenCheck {
    pub eigenvalue: i64,
    pub holds: bool,
}

/// Expected eigenvalue `ρ_λ + (m − 1)|λ|`.
pub fn eigenvalue(lambda: &Partition, m: usize) -> i64 {
    lambda.rho() + (m as i64 - 1) * lambda.weight() as i64
}

/// Checks `Δ_Y C_λ = (ρ_λ + (m−1)|λ|) C_λ` as an exact polynomial identity.
pub fn check_eigen(lambda: &Partition, m: usize) -> EigenCheck {
    check_eigen_with(&mut ZonalCache::new(), lambda, m)
}

pub fn check_eigen_with(cache: &mut ZonalCache, lambda: &Partition, m: usize) -> EigenCheck {
    let ev = eigenvalue(lambda, m);
    let c = cache.zonal_polynomial(lambda, m);
    let holds = match apply_delta_y(&c, m) {
        Ok(image) => image == c.scale(&Rational::from_integer(ev.into())),
        Err(_) => false,
    };
    EigenCheck { eigenvalue: ev, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{elementary, m_expand, rat};
    use crate::partition;
    use crate::partitions::partitions_of;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(k: i64) -> Rational {
        rat(k, 1)
    }

    /// Forward-difference table of `t ↦ f(y + t·e_i)` at `t = 0..=d`.
    fn differences(f: &MPoly, y: &[Rational], i: usize, d: usize) -> Vec<Rational> {
        let mut vals: Vec<Rational> = (0..=d)
            .map(|t| {
                let mut p = y.to_vec();
                p[i] += q(t as i64);
                f.evaluate(&p).unwrap()
            })
            .collect();
        let mut out = vec![vals[0].clone()];
        for _ in 0..d {
            vals = vals.windows(2).map(|w| &w[1] - &w[0]).collect();
            out.push(vals[0].clone());
        }
        out
    }

    /// First and second derivatives along `e_i` from exact interpolation:
    /// `D = log(1 + Δ)` applied to the forward-difference table.
    fn derivatives(f: &MPoly, y: &[Rational], i: usize, d: usize) -> (Rational, Rational) {
        let diffs = differences(f, y, i, d);
        let mut d1 = Rational::zero();
        let mut d2 = Rational::zero();
        let mut harmonic = Rational::zero();
        for (k, dk) in diffs.iter().enumerate().skip(1) {
            let sign = if k % 2 == 1 { q(1) } else { q(-1) };
            d1 += &sign * dk / q(k as i64);
            if k >= 2 {
                d2 += -&sign * q(2) * &harmonic / q(k as i64) * dk;
            }
            harmonic += rat(1, k as i64);
        }
        (d1, d2)
    }

    /// The operator evaluated at a point with distinct coordinates, singular
    /// terms kept as separate quotients.
    fn pointwise(f: &MPoly, y: &[Rational]) -> Rational {
        let d = f.degree().unwrap_or(0) as usize;
        let m = y.len();
        let mut acc = Rational::zero();
        for i in 0..m {
            let (d1, d2) = derivatives(f, y, i, d);
            let y2 = &y[i] * &y[i];
            acc += &y2 * d2;
            for j in 0..m {
                if j != i {
                    acc += &y2 / (&y[i] - &y[j]) * &d1;
                }
            }
        }
        acc
    }

    #[test]
    fn one_variable_and_linear_examples() {
        for n in 0..8u32 {
            let f = MPoly::monomial(vec![n], q(1));
            let want = f.scale(&q(n as i64 * (n as i64 - 1)));
            assert_eq!(apply_delta_y(&f, 1).unwrap(), want);
        }
        let s = elementary(1, 2);
        assert_eq!(apply_delta_y(&s, 2).unwrap(), s);
        assert_eq!(eigenvalue(&partition![1], 2), 1);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let f = MPoly::var(0, 2).unwrap();
        assert!(matches!(apply_delta_y(&f, 2), Err(ZonalError::InputNotSymmetric(_))));
        assert!(apply_delta_y(&f, 3).is_err());
    }

    #[test]
    fn eigen_examples() {
        let r = check_eigen(&partition![2, 1], 3);
        assert_eq!(r, EigenCheck { eigenvalue: 7, holds: true });
        for n in 1..6u32 {
            let r = check_eigen(&partition![n], 1);
            assert_eq!(r.eigenvalue, (n * (n - 1)) as i64);
            assert!(r.holds);
        }
    }

    #[test]
    fn eigen_sweep_small() {
        let mut cache = ZonalCache::new();
        for n in 1..=5 {
            for lambda in partitions_of(n) {
                for m in lambda.len()..=4 {
                    assert!(check_eigen_with(&mut cache, &lambda, m).holds, "{lambda} m={m}");
                }
            }
        }
    }

    #[test]
    fn monomial_symmetric_is_not_an_eigenfunction() {
        let f = m_expand(&partition![2, 1], 3);
        let image = apply_delta_y(&f, 3).unwrap();
        assert_ne!(image, f.scale(&q(eigenvalue(&partition![2, 1], 3))));
    }

    fn symmetric_poly(coeffs: &[i64], m: usize) -> MPoly {
        let mut f = MPoly::zero(m);
        for (lambda, &c) in partitions_of(4).iter().zip(coeffs) {
            f = &f + &m_expand(lambda, m).scale(&q(c));
        }
        f
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn matches_pointwise_oracle(coeffs in prop::collection::vec(-5i64..5, 5), shift in 1i64..4) {
            let f = symmetric_poly(&coeffs, 3);
            let image = apply_delta_y(&f, 3).unwrap();
            let y = [rat(shift, 1), rat(-1, 2), rat(2 * shift + 1, 5)];
            prop_assert_eq!(image.evaluate(&y).unwrap(), pointwise(&f, &y));
        }

        #[test]
        fn linear_and_degree_preserving(a in prop::collection::vec(-4i64..4, 5), b in prop::collection::vec(-4i64..4, 5), s in -3i64..3) {
            let f = symmetric_poly(&a, 3);
            let g = symmetric_poly(&b, 3);
            let lhs = apply_delta_y(&(&f + &g.scale(&q(s))), 3).unwrap();
            let rhs = &apply_delta_y(&f, 3).unwrap() + &apply_delta_y(&g, 3).unwrap().scale(&q(s));
            prop_assert_eq!(&lhs, &rhs);
            prop_assert!(lhs.is_symmetric());
            if !lhs.is_zero() {
                prop_assert_eq!(lhs.homogeneous_degree(), Some(Some(4)));
            }
        }
    }
}
