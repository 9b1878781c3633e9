//! Generalised Pochhammer symbols and truncated hypergeometric series of a
//! matrix argument,
//!
//! `pFq(a; b; Y) = Σ_n Σ_{λ ⊢ n} (a_1)_λ⋯(a_p)_λ / ((b_1)_λ⋯(b_q)_λ) · C_λ(Y) / n!`,
//!
//! evaluated at the eigenvalues of `Y`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_traits::{One, ToPrimitive, Zero};

use crate::exactpoly::{factorial_rat, m_orbit, Rational};
use crate::parallel::{self, Strategy};
use crate::partitions::{partitions_of, Partition};
use crate::zonal::ZonalCache;
use crate::{Result, ZonalError};

/// Numeric kinds the series can be evaluated in.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;
    fn is_zero_value(&self) -> bool;

    fn zero_value() -> Self {
        Self::from_rational(&Rational::zero())
    }

    fn one_value() -> Self {
        Self::from_rational(&Rational::one())
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn is_zero_value(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn is_zero_value(&self) -> bool {
        *self == 0.0
    }
}

/// `(a)_λ = Π_i (a − (i−1)/2)_{λ_i}`.
pub fn gen_pochhammer<S: Scalar>(a: &S, lambda: &Partition) -> S {
    let half = S::from_rational(&Rational::new(1.into(), 2.into()));
    let mut out = S::one_value();
    let mut shift = S::zero_value();
    for &part in lambda.parts() {
        let mut x = a.clone() - shift.clone();
        for _ in 0..part {
            out = out * x.clone();
            x = x + S::one_value();
        }
        shift = shift + half.clone();
    }
    out
}

/// Parameters and truncation order of a `pFq` series.
#[derive(Clone, Debug, PartialEq)]
pub struct PfqSpec<S> {
    pub upper: Vec<S>,
    pub lower: Vec<S>,
    /// Every partition of weight `≤ order` is summed; weight classes are
    /// never split.
    pub order: usize,
}

impl<S: Scalar> PfqSpec<S> {
    pub fn new(upper: Vec<S>, lower: Vec<S>, order: usize) -> Self {
        PfqSpec { upper, lower, order }
    }

    /// `Π (a_i)_λ / Π (b_j)_λ`, failing on a vanishing denominator.
    fn ratio(&self, lambda: &Partition) -> Result<S> {
        let mut num = S::one_value();
        for a in &self.upper {
            num = num * gen_pochhammer(a, lambda);
        }
        let mut den = S::one_value();
        for b in &self.lower {
            let p = gen_pochhammer(b, lambda);
            if p.is_zero_value() {
                return Err(ZonalError::Singular(format!("lower parameter {b:?} vanishes at {lambda}")));
            }
            den = den * p;
        }
        Ok(num / den)
    }
}

/// Partial sum `Σ_{n ≤ N} Π(a_i)_n / Π(b_j)_n · z^n / n!`.
pub fn scalar_pfq<S: Scalar>(spec: &PfqSpec<S>, z: &S) -> Result<S> {
    let mut sum = S::zero_value();
    let mut z_pow = S::one_value();
    for n in 0..=spec.order {
        let lambda = if n == 0 { Partition::empty() } else { Partition::new(vec![n as u32])? };
        let term = spec.ratio(&lambda)? * z_pow.clone() / S::from_rational(&factorial_rat(n as u64));
        sum = sum + term;
        z_pow = z_pow * z.clone();
    }
    Ok(sum)
}

/// Partial sum of the matrix-argument series at eigenvalues `eigs`.
/// Partitions with more parts than eigenvalues contribute nothing.
pub fn matrix_pfq<S: Scalar>(spec: &PfqSpec<S>, eigs: &[S]) -> Result<S> {
    matrix_pfq_with(&mut ZonalCache::new(), spec, eigs, Strategy::default())
}

pub fn matrix_pfq_with<S: Scalar>(
    cache: &mut ZonalCache,
    spec: &PfqSpec<S>,
    eigs: &[S],
    strategy: Strategy,
) -> Result<S> {
    if eigs.is_empty() {
        return Err(ZonalError::EmptyEigenvalues);
    }
    let m = eigs.len();
    // Fetch every needed coefficient row up front; the cache is then only
    // read while weight classes are summed concurrently.
    let mut classes = Vec::with_capacity(spec.order + 1);
    for n in 0..=spec.order {
        let mut rows = Vec::new();
        for kappa in partitions_of(n).into_iter().filter(|k| k.len() <= m) {
            let ratio = spec.ratio(&kappa)?;
            let row = if n == 0 {
                vec![(Partition::empty(), Rational::one())]
            } else {
                cache.engine(n).row(&kappa)?
            };
            rows.push((ratio, row));
        }
        classes.push((n, rows));
    }
    let sums = parallel::map(&classes, strategy, |(n, rows)| {
        let mut class = S::zero_value();
        for (ratio, row) in rows {
            class = class + ratio.clone() * zonal_value(row, eigs);
        }
        class / S::from_rational(&factorial_rat(*n as u64))
    });
    Ok(sums.into_iter().fold(S::zero_value(), |acc, s| acc + s))
}

/// `Σ_λ c[κ,λ] M_λ(y)` from orbit sums of monomials.
fn zonal_value<S: Scalar>(row: &[(Partition, Rational)], y: &[S]) -> S {
    let mut acc = S::zero_value();
    for (lambda, c) in row {
        if lambda.len() > y.len() {
            continue;
        }
        let mut orbit = S::zero_value();
        for e in m_orbit(lambda, y.len()) {
            let mut t = S::one_value();
            for (x, &k) in y.iter().zip(&e) {
                for _ in 0..k {
                    t = t * x.clone();
                }
            }
            orbit = orbit + t;
        }
        acc = acc + S::from_rational(c) * orbit;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{pochhammer, rat};
    use crate::partition;
    use crate::parallel::Strategy as Exec;
    use proptest::prelude::*;
    use proptest::strategy::Strategy;

    #[test]
    fn pochhammer_examples() {
        let v: Rational = gen_pochhammer(&rat(3, 2), &partition![4]);
        assert_eq!(v * rat(16, 1), rat(945, 1));
        let v: Rational = gen_pochhammer(&rat(3, 2), &partition![3, 1]);
        assert_eq!(v * rat(16, 1), rat(210, 1));
        let v: Rational = gen_pochhammer(&rat(3, 2), &partition![2, 2]);
        assert_eq!(v * rat(16, 1), rat(120, 1));
        assert_eq!(gen_pochhammer(&rat(7, 3), &Partition::empty()), rat(1, 1));
        for n in 0..8u32 {
            let l = Partition::new(vec![n]).unwrap();
            assert_eq!(gen_pochhammer(&rat(-5, 4), &l), pochhammer(&rat(-5, 4), n as u64));
        }
        assert_eq!(gen_pochhammer(&1.5f64, &partition![2, 2]) * 16.0, 120.0);
    }

    #[test]
    fn scalar_series_examples() {
        let z = rat(1, 3);
        let spec: PfqSpec<Rational> = PfqSpec::new(vec![], vec![], 0);
        assert_eq!(scalar_pfq(&spec, &z).unwrap(), rat(1, 1));
        let spec = PfqSpec::new(vec![], vec![], 9);
        let exp: Rational = (0..=9).map(|n| num_traits::pow(z.clone(), n) / factorial_rat(n as u64)).sum();
        assert_eq!(scalar_pfq(&spec, &z).unwrap(), exp);
        let spec = PfqSpec::new(vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1)], 10);
        let want: Rational = (0..=10).map(|n| num_traits::pow(z.clone(), n) / rat(n as i64 + 1, 1)).sum();
        assert_eq!(scalar_pfq(&spec, &z).unwrap(), want);
        let bad = PfqSpec::new(vec![rat(1, 1)], vec![rat(-2, 1)], 5);
        assert!(matches!(scalar_pfq(&bad, &z), Err(ZonalError::Singular(_))));
        let ok = PfqSpec::new(vec![rat(1, 1)], vec![rat(-2, 1)], 2);
        assert!(scalar_pfq(&ok, &z).is_ok());
    }

    #[test]
    fn matrix_series_examples() {
        let spec: PfqSpec<Rational> = PfqSpec::new(vec![], vec![], 6);
        assert_eq!(matrix_pfq(&spec, &[rat(0, 1), rat(0, 1)]).unwrap(), rat(1, 1));
        assert!(matches!(matrix_pfq(&spec, &[]), Err(ZonalError::EmptyEigenvalues)));
        // Second lower Pochhammer row hits zero only once λ has two parts.
        let spec = PfqSpec::new(vec![rat(1, 1)], vec![rat(1, 2)], 3);
        assert!(matrix_pfq(&spec, &[rat(1, 5)]).is_ok());
        assert!(matches!(matrix_pfq(&spec, &[rat(1, 5), rat(1, 7)]), Err(ZonalError::Singular(_))));
    }

    #[test]
    fn exponential_collapse() {
        let mut cache = ZonalCache::new();
        let ys = [rat(1, 2), rat(-1, 3), rat(2, 5), rat(1, 7)];
        for m in 1..=4 {
            let y = &ys[..m];
            let trace: Rational = y.iter().sum();
            for order in [0, 3, 6] {
                let spec = PfqSpec::new(vec![], vec![], order);
                let got = matrix_pfq_with(&mut cache, &spec, y, Exec::Sequential).unwrap();
                let want: Rational =
                    (0..=order).map(|n| num_traits::pow(trace.clone(), n) / factorial_rat(n as u64)).sum();
                assert_eq!(got, want, "m={m} N={order}");
            }
        }
    }

    #[test]
    fn float_path_tracks_exact_path() {
        let spec = PfqSpec::new(vec![rat(1, 2), rat(3, 2)], vec![rat(5, 2)], 8);
        let y = [rat(1, 10), rat(1, 5)];
        let exact = matrix_pfq(&spec, &y).unwrap();
        let fspec = PfqSpec::new(vec![0.5, 1.5], vec![2.5], 8);
        let float = matrix_pfq(&fspec, &[0.1, 0.2]).unwrap();
        assert!((exact.to_f64().unwrap() - float).abs() < 1e-12);
    }

    #[test]
    fn partial_sums_nondecreasing_for_positive_data() {
        let mut cache = ZonalCache::new();
        let y = [rat(1, 3), rat(1, 4), rat(1, 2)];
        let mut last = rat(0, 1);
        for order in 0..=7 {
            let spec = PfqSpec::new(vec![rat(3, 2)], vec![rat(5, 2), rat(2, 1)], order);
            let v = matrix_pfq_with(&mut cache, &spec, &y, Exec::Parallel).unwrap();
            assert!(v >= last);
            last = v;
        }
    }

    fn param() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..7).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn one_by_one_matches_scalar(
            upper in prop::collection::vec(param(), 0..3),
            lower in prop::collection::vec(param(), 0..3),
            z in param(),
            order in 0usize..=12,
        ) {
            let spec = PfqSpec::new(upper, lower, order);
            match (scalar_pfq(&spec, &z), matrix_pfq(&spec, std::slice::from_ref(&z))) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
            }
        }
    }
}
