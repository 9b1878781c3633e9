use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Result, ZonalError};

/// Arbitrary precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `k + 1/2` for integer `k`.
pub fn half_integer(k: i64) -> Rational {
    rat(2 * k + 1, 2)
}

pub fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn factorial_rat(k: u64) -> Rational {
    Rational::from_integer(BigInt::from(factorial(k)))
}

pub fn pow2(k: u32) -> Rational {
    Rational::from_integer(BigInt::one() << k as usize)
}

/// Rising factorial `(a)_k = a (a+1) ⋯ (a+k−1)`; `(a)_0 = 1`.
pub fn pochhammer(a: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut x = a.clone();
    for _ in 0..k {
        acc *= &x;
        x += Rational::one();
    }
    acc
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses `p/q`, an integer, or a finite decimal such as `-0.125`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |why: &str| ZonalError::Parse(format!("bad rational {s:?}: {why}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad("numerator"))?;
        let q: BigInt = q.trim().parse().map_err(|_| bad("denominator"))?;
        if q.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("fraction digits"));
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad("integer part"))?,
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad("fraction digits"))?;
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let magnitude = Rational::new(int_part * &scale + frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let p: BigInt = s.parse().map_err(|_| bad("integer"))?;
    Ok(Rational::from_integer(p))
}
