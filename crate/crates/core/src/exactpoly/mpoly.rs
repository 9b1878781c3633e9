use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, Rational};
use crate::{Result, ZonalError};

/// Exponent vector of a single monomial.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of `y1`, then `y2`, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `y1..ym` with exact rational coefficients.
///
/// The variable count is part of the value; combining polynomials of
/// different widths is an error. No zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

/// One term of the JSON rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The variable `y_{i+1}` (0-based index).
    pub fn var(i: usize, nvars: usize) -> Result<Self> {
        check_index(i, nvars)?;
        let mut e = vec![0; nvars];
        e[i] = 1;
        Ok(Self::monomial(e, Rational::one()))
    }

    pub fn monomial(exponents: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Adds `c · y^exponents` in place.
    pub fn add_term(&mut self, exponents: Vec<u32>, c: Rational) {
        assert_eq!(exponents.len(), self.nvars, "exponent width");
        if c.is_zero() {
            return;
        }
        let key = Monomial(exponents);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Homogeneous of the returned degree; the zero polynomial counts as
    /// homogeneous of every degree and yields `Some(None)`.
    pub fn homogeneous_degree(&self) -> Option<Option<u32>> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => Some(None),
            Some(d) => degs.all(|e| e == d).then_some(Some(d)),
        }
    }

    fn same_width(&self, other: &MPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(ZonalError::VariableMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly> {
        self.same_width(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.0.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.same_width(other)?;
        let mut out = MPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `∂f/∂y_{i+1}` (0-based index).
    pub fn partial_derivative(&self, i: usize) -> Result<MPoly> {
        check_index(i, self.nvars)?;
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(exps, c * Rational::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    /// Multiplies by `y_{i+1}^k`.
    pub fn shift(&self, i: usize, k: u32) -> Result<MPoly> {
        check_index(i, self.nvars)?;
        Ok(MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[i] += k;
                    (Monomial(e), c.clone())
                })
                .collect(),
        })
    }

    /// Exact quotient `g` with `f = (y_{i+1} − y_{j+1}) · g`.
    ///
    /// Synthetic division in `y_{i+1}`; a nonzero remainder is reported as
    /// [`ZonalError::NotDivisible`].
    pub fn exact_div_diff(&self, i: usize, j: usize) -> Result<MPoly> {
        check_index(i, self.nvars)?;
        check_index(j, self.nvars)?;
        if i == j {
            return Err(ZonalError::NotDivisible(i + 1, j + 1));
        }
        // Work keyed by (exponent of y_i, rest) so the highest y_i power is
        // always at the end.
        let mut work: BTreeMap<(u32, Vec<u32>), Rational> = self
            .terms
            .iter()
            .map(|(m, c)| ((m.0[i], m.0.clone()), c.clone()))
            .collect();
        let mut quotient = MPoly::zero(self.nvars);
        while let Some(((ei, _), _)) = work.last_key_value() {
            if *ei == 0 {
                return Err(ZonalError::NotDivisible(i + 1, j + 1));
            }
            let ((ei, exps), c) = work.pop_last().expect("non-empty");
            let mut q = exps.clone();
            q[i] -= 1;
            // f − (y_i − y_j)·c·y^q leaves + c·y^q·y_j.
            let mut carry = q.clone();
            carry[j] += 1;
            quotient.add_term(q, c.clone());
            let key = (ei - 1, carry);
            let entry = work.entry(key.clone()).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                work.remove(&key);
            }
        }
        Ok(quotient)
    }

    /// Value at `point` (length must equal the variable count).
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(ZonalError::VariableMismatch(self.nvars, point.len()));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// True when swapping any two variables leaves the polynomial unchanged.
    pub fn is_symmetric(&self) -> bool {
        (0..self.nvars.saturating_sub(1)).all(|i| {
            self.terms.iter().all(|(m, c)| {
                let mut e = m.0.clone();
                e.swap(i, i + 1);
                self.terms.get(&Monomial(e)) == Some(c)
            })
        })
    }

    /// Text rendering in descending graded-lex order, for example
    /// `12/5*a^2*b + 18/5*a*b*c`. `names` defaults to `y1, y2, …`.
    pub fn render(&self, names: Option<&[String]>) -> String {
        let default: Vec<String>;
        let names = match names {
            Some(n) => {
                assert_eq!(n.len(), self.nvars, "one name per variable");
                n
            }
            None => {
                default = (1..=self.nvars).map(|i| format!("y{i}")).collect();
                &default
            }
        };
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .zip(names)
                .filter(|(e, _)| **e > 0)
                .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
                .collect();
            if factors.is_empty() {
                out.push_str(&format_rational(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&format_rational(&abs));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    /// JSON-ready records in descending graded-lex order.
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| TermRecord { exponents: m.0.clone(), coefficient: format_rational(c) })
            .collect()
    }
}

fn check_index(i: usize, vars: usize) -> Result<()> {
    if i >= vars {
        return Err(ZonalError::VariableIndex { index: i, vars });
    }
    Ok(())
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

// Operator forms panic on width mismatch; use the `try_` methods when the
// widths are not known to agree.
impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.try_add(rhs).expect("MPoly width mismatch")
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.try_sub(rhs).expect("MPoly width mismatch")
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.try_mul(rhs).expect("MPoly width mismatch")
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;
    use proptest::prelude::*;

    fn y(i: usize, m: usize) -> MPoly {
        MPoly::var(i, m).unwrap()
    }

    #[test]
    fn square_of_sum() {
        let s = &y(0, 2) + &y(1, 2);
        let sq = s.pow(2);
        let mut want = MPoly::zero(2);
        want.add_term(vec![2, 0], rat(1, 1));
        want.add_term(vec![1, 1], rat(2, 1));
        want.add_term(vec![0, 2], rat(1, 1));
        assert_eq!(sq, want);
        assert!(s.try_mul(&MPoly::zero(2)).unwrap().is_zero());
        assert!(s.try_add(&MPoly::one(3)).is_err());
    }

    #[test]
    fn product_matches_naive_convolution() {
        // Dense convolution over a (deg+1)^2 grid as an independent oracle.
        let mut f = MPoly::zero(2);
        f.add_term(vec![2, 0], rat(3, 2));
        f.add_term(vec![1, 1], rat(-1, 3));
        f.add_term(vec![0, 1], rat(5, 1));
        let mut g = MPoly::zero(2);
        g.add_term(vec![1, 0], rat(1, 1));
        g.add_term(vec![0, 2], rat(2, 7));
        let mut dense = vec![vec![Rational::zero(); 5]; 5];
        for a in 0..3u32 {
            for b in 0..3u32 {
                for c in 0..3u32 {
                    for d in 0..3u32 {
                        let x = f.coefficient(&[a, b]) * g.coefficient(&[c, d]);
                        dense[(a + c) as usize][(b + d) as usize] += x;
                    }
                }
            }
        }
        let prod = &f * &g;
        for (a, row) in dense.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                assert_eq!(prod.coefficient(&[a as u32, b as u32]), *v);
            }
        }
    }

    #[test]
    fn derivatives() {
        let f = MPoly::monomial(vec![2, 1], rat(1, 1));
        assert_eq!(f.partial_derivative(0).unwrap(), MPoly::monomial(vec![1, 1], rat(2, 1)));
        let g = MPoly::monomial(vec![3, 0], rat(1, 1));
        assert!(g.partial_derivative(1).unwrap().is_zero());
        assert!(g.partial_derivative(2).is_err());
    }

    #[test]
    fn division_by_difference() {
        let f = &y(0, 2).pow(2) - &y(1, 2).pow(2);
        assert_eq!(f.exact_div_diff(0, 1).unwrap(), &y(0, 2) + &y(1, 2));
        let g = &y(0, 2) - &y(1, 2);
        assert_eq!(g.exact_div_diff(0, 1).unwrap(), MPoly::one(2));
        let h = &y(0, 2) + &y(1, 2);
        assert_eq!(h.exact_div_diff(0, 1), Err(ZonalError::NotDivisible(1, 2)));
    }

    #[test]
    fn rendering() {
        let mut f = MPoly::zero(3);
        f.add_term(vec![1, 1, 1], rat(18, 5));
        f.add_term(vec![2, 1, 0], rat(12, 5));
        f.add_term(vec![0, 0, 0], rat(-1, 1));
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        assert_eq!(f.render(Some(&names)), "12/5*a^2*b + 18/5*a*b*c - 1");
        assert_eq!(y(0, 1).to_string(), "y1");
        assert_eq!(MPoly::zero(2).to_string(), "0");
        assert_eq!((-&y(1, 2)).to_string(), "-y2");
        let recs = f.to_records();
        assert_eq!(recs[0].exponents, vec![2, 1, 0]);
        assert_eq!(recs[0].coefficient, "12/5");
    }

    fn small_poly(m: usize) -> impl Strategy<Value = MPoly> {
        prop::collection::vec((prop::collection::vec(0u32..4, m), -9i64..10, 1i64..5), 0..6)
            .prop_map(move |terms| {
                let mut p = MPoly::zero(m);
                for (e, a, b) in terms {
                    p.add_term(e, rat(a, b));
                }
                p
            })
    }

    proptest! {
        #[test]
        fn degree_of_product(f in small_poly(3), g in small_poly(3)) {
            let p = &f * &g;
            match (f.degree(), g.degree()) {
                (Some(a), Some(b)) => prop_assert_eq!(p.degree(), Some(a + b)),
                _ => prop_assert!(p.is_zero()),
            }
        }

        #[test]
        fn multiply_back_after_division(f in small_poly(3)) {
            let d = &y(0, 3) - &y(2, 3);
            let prod = &f * &d;
            let q = prod.exact_div_diff(0, 2).unwrap();
            prop_assert_eq!(q, f);
        }
    }
}
