//! Closed forms for families of coefficients, the conjectured diagonal
//! formulas, and checks of the summation certificates behind the two-part
//! theorem.
//!
//! The corner tables are literal rational-function evaluators. Each refuses
//! weights below the range on which the stored formula is valid instead of
//! extrapolating.
//!
//! `conj_*` functions evaluate formulas that are conjectures, not theorems:
//! they are verified against the recurrence over finite ranges only.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::exactpoly::{factorial_rat, half_integer, pochhammer, rat, Rational};
use crate::partition;
use crate::partitions::Partition;
use crate::verify::Report;
use crate::{Result, ZonalError};

fn int(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

fn fact(k: i64) -> Rational {
    factorial_rat(k as u64)
}

/// `1/k!`, taken as zero for negative `k`.
fn rfact(k: i64) -> Rational {
    if k < 0 {
        Rational::zero()
    } else {
        factorial_rat(k as u64).recip()
    }
}

fn binom(n: i64, k: i64) -> Rational {
    int(binomial(n, k))
}

fn poch_half(start2: i64, k: i64) -> Rational {
    // (start2/2)_k for an odd numerator start2.
    pochhammer(&rat(start2, 2), k as u64)
}

/// `c[(n), (n−m, m)] = C(n, m) · (1/2)_m / (n − m + 1/2)_m`.
pub fn cf_row1(n: i64, m: i64) -> Result<Rational> {
    if m < 0 || 2 * m > n {
        return Err(ZonalError::OutOfRange(format!("row1 needs 0 <= m <= n/2, got n={n}, m={m}")));
    }
    Ok(binom(n, m) * poch_half(1, m) / pochhammer(&half_integer(n - m), m as u64))
}

/// Shapes `π` for which the largest-corner table stores `(n − |π|, π)`.
pub const LARGEST_CORNER_SHAPES: [&[u32]; 6] = [&[], &[1], &[2], &[1, 1], &[3], &[2, 1]];

/// Smallest weight at which every largest-corner formula is valid.
pub const LARGEST_CORNER_MIN_N: i64 = 6;

fn shape_index(shape: &Partition) -> Option<usize> {
    LARGEST_CORNER_SHAPES.iter().position(|s| *s == shape.parts())
}

/// `(n − |π|, π)` as a partition of `n`.
pub fn largest_corner_partition(shape: &Partition, n: i64) -> Result<Partition> {
    let head = n - shape.weight() as i64;
    if head < shape.part(0) as i64 {
        return Err(ZonalError::OutOfRange(format!("({head}, {shape}) is not a partition")));
    }
    let mut parts = vec![head as u32];
    parts.extend_from_slice(shape.parts());
    Partition::new(parts)
}

/// Closed form for `c[(n−i, π_κ), (n−j, π_λ)]` with `|π_κ|, |π_λ| ≤ 3`.
pub fn cf_corner_largest(shape_kappa: &Partition, shape_lambda: &Partition, n: i64) -> Result<Rational> {
    let missing = || ZonalError::NoClosedForm(format!("({shape_kappa}, {shape_lambda})"));
    let i = shape_index(shape_kappa).ok_or_else(missing)?;
    let j = shape_index(shape_lambda).ok_or_else(missing)?;
    if n < LARGEST_CORNER_MIN_N {
        return Err(ZonalError::OutOfRange(format!("largest-corner table needs n >= 6, got {n}")));
    }
    let n = n as i128;
    let q = |num: i128, den: i128| Rational::new(BigInt::from(num), BigInt::from(den));
    let v = match (i, j) {
        _ if j < i => Rational::zero(),
        (0, 0) => Rational::one(),
        (0, 1) => q(n, 2 * n - 1),
        (0, 2) => q(3 * (n - 1) * n, 2 * (2 * n - 3) * (2 * n - 1)),
        (0, 3) => q((n - 1) * n, (2 * n - 3) * (2 * n - 1)),
        (0, 4) => q(5 * (n - 2) * (n - 1) * n, 2 * (2 * n - 5) * (2 * n - 3) * (2 * n - 1)),
        (0, 5) => q(3 * (n - 2) * (n - 1) * n, 2 * (2 * n - 5) * (2 * n - 3) * (2 * n - 1)),
        (1, 1) => q(2 * (n - 1) * n, 2 * n - 1),
        (1, 2) => q(2 * (n - 2) * (n - 1) * n, (2 * n - 5) * (2 * n - 1)),
        (1, 3) => q(2 * n * (2 * n * n - 6 * n + 3), (2 * n - 5) * (2 * n - 1)),
        (1, 4) => q(3 * (n - 3) * (n - 2) * (n - 1) * n, (2 * n - 7) * (2 * n - 5) * (2 * n - 1)),
        (1, 5) => q((n - 2) * n * (5 * n * n - 20 * n + 11), (2 * n - 7) * (2 * n - 5) * (2 * n - 1)),
        (2, 2) => q(2 * (n - 3) * (n - 2) * (n - 1) * n, (2 * n - 5) * (2 * n - 3)),
        (2, 3) => q(4 * (n - 3) * (n - 2) * (n - 1) * n, 3 * (2 * n - 5) * (2 * n - 3)),
        (2, 4) => q(
            2 * (n - 4) * (n - 3) * (n - 2) * (n - 1) * n,
            (2 * n - 9) * (2 * n - 5) * (2 * n - 3),
        ),
        (2, 5) => q(
            2 * (n - 3) * (n - 1) * n * (5 * n * n - 30 * n + 36),
            3 * (2 * n - 9) * (2 * n - 5) * (2 * n - 3),
        ),
        (3, 3) => q(2 * (n - 2) * n, 3),
        (3, 4) => Rational::zero(),
        (3, 5) => q(2 * (n - 3) * (n - 2) * n, 3 * (2 * n - 7)),
        (4, 4) => q(
            4 * (n - 5) * (n - 4) * (n - 3) * (n - 2) * (n - 1) * n,
            3 * (2 * n - 9) * (2 * n - 7) * (2 * n - 5),
        ),
        (4, 5) => q(
            4 * (n - 5) * (n - 4) * (n - 3) * (n - 2) * (n - 1) * n,
            5 * (2 * n - 9) * (2 * n - 7) * (2 * n - 5),
        ),
        (5, 5) => q(4 * (n - 4) * (n - 3) * (n - 1) * n, 5 * (2 * n - 7)),
        _ => unreachable!("j >= i covers the stored triangle"),
    };
    Ok(v)
}

/// Largest `a` with a stored smallest-corner formula.
pub const SMALLEST_CORNER_MAX_A: u32 = 4;

/// `(2^a, 1^{n−2a})`.
pub fn smallest_corner_partition(a: u32, n: i64) -> Result<Partition> {
    if 2 * a as i64 > n {
        return Err(ZonalError::OutOfRange(format!("(2^{a}, 1^{}) is not a partition", n - 2 * a as i64)));
    }
    let mut parts = vec![2; a as usize];
    parts.extend(std::iter::repeat_n(1, (n - 2 * a as i64) as usize));
    Partition::new(parts)
}

/// Closed form for `c[(2^{aκ}, 1^{n−2aκ}), (2^{aλ}, 1^{n−2aλ})]`,
/// `aκ, aλ ≤ 4`.
pub fn cf_corner_smallest(a_kappa: u32, a_lambda: u32, n: i64) -> Result<Rational> {
    if a_kappa > SMALLEST_CORNER_MAX_A || a_lambda > SMALLEST_CORNER_MAX_A {
        return Err(ZonalError::NoClosedForm(format!("(2^{a_kappa}, 2^{a_lambda}) corner entry")));
    }
    if n < 2 * a_kappa.max(a_lambda) as i64 {
        return Err(ZonalError::OutOfRange(format!("n = {n} too small for a = {}", a_kappa.max(a_lambda))));
    }
    // Larger a is lexicographically larger; entries above the diagonal vanish.
    if a_lambda > a_kappa {
        return Ok(Rational::zero());
    }
    let m = n as i128;
    let q = |num: i128, den: i128| Rational::new(BigInt::from(num), BigInt::from(den));
    let two_pow = |shift: i64| -> Rational {
        let e = n + shift;
        if e >= 0 {
            Rational::from_integer(BigInt::one() << e as usize)
        } else {
            Rational::from_integer(BigInt::one() << (-e) as usize).recip()
        }
    };
    let v = match (a_kappa, a_lambda) {
        (4, 4) => two_pow(-3) * q((m - 6) * (m - 5) * m, 15),
        (4, 3) => two_pow(-3) * q((m - 7) * (m - 6) * (m - 6) * m, 15),
        (4, 2) => two_pow(-4) * q((m - 7) * (m - 6) * (m - 6) * (m - 5) * m, 15),
        (4, 1) => two_pow(-4) * q((m - 7) * (m - 6) * (m - 6) * (m - 5) * (m - 2) * m, 45),
        (4, 0) => two_pow(-6) * q((m - 7) * (m - 6) * (m - 6) * (m - 5) * (m - 1) * m * m, 45),
        (3, 3) => two_pow(-3) * q((m - 4) * (m - 3), 3),
        (3, 2) => two_pow(-3) * q((m - 5) * (m - 4) * (m - 4), 3),
        (3, 1) => two_pow(-4) * q((m - 5) * (m - 4) * (m - 4) * (m - 3), 3),
        (3, 0) => two_pow(-4) * q((m - 5) * (m - 4) * (m - 4) * (m - 3) * m, 9),
        (2, 2) => two_pow(-1) * q((m - 2) * (m - 1), 3 * (m + 1)),
        (2, 1) => two_pow(-1) * q((m - 3) * (m - 2) * (m - 2), 3 * (m + 1)),
        (2, 0) => two_pow(-2) * q((m - 3) * (m - 2) * (m - 2) * (m - 1), 3 * (m + 1)),
        (1, 1) => two_pow(-1) * q(m, m + 2),
        (1, 0) => two_pow(-1) * q((m - 1) * m * m, (m + 1) * (m + 2)),
        (0, 0) => two_pow(0) * q(1, m + 1),
        _ => unreachable!("a_lambda <= a_kappa <= 4"),
    };
    Ok(v)
}

/// Two-part closed form `c[(a, a−b), (a−d, a−b+d)]`.
///
/// `b = a` is accepted with `(a, 0)` read as `(a)`.
pub fn cf_two_part(a: i64, b: i64, d: i64) -> Result<Rational> {
    if !(0 <= b && b <= a && 0 <= d && 2 * d <= b) {
        return Err(ZonalError::OutOfRange(format!(
            "two-part form needs 0 <= b <= a, 0 <= d <= b/2, got a={a}, b={b}, d={d}"
        )));
    }
    let num = fact(2 * a - b) * half_integer(b) * poch_half(1, d);
    let den = fact(d) * fact(a - b) * fact(b - d) * pochhammer(&half_integer(b - d), (a - b + d + 1) as u64);
    Ok(num / den)
}

/// `c[(a, a−b), (a−d, a−b+d)] / c[(a, a−b), (a, a−b)]`, which does not
/// depend on `a`.
pub fn cf_two_part_ratio(b: i64, d: i64) -> Result<Rational> {
    if !(0 <= d && 2 * d <= b) {
        return Err(ZonalError::OutOfRange(format!("ratio needs 0 <= d <= b/2, got b={b}, d={d}")));
    }
    Ok(binom(b, d) * poch_half(1, d) / pochhammer(&half_integer(b - d), d as u64))
}

/// Product `Π_i (δ_i + 3/2)_{δ_{i+1}}` over consecutive gaps.
fn gap_pochhammers(gaps: &[i64]) -> Rational {
    gaps.windows(2)
        .map(|w| pochhammer(&(int(w[0]) + rat(3, 2)), w[1] as u64))
        .product()
}

/// Conjectured diagonal `c[κ, κ]` for `κ = (a, a−b, a−c)`.
///
/// Not a theorem: see [`crate::verify`] for the finite-range check.
pub fn conj_diag3(a: i64, b: i64, c: i64) -> Result<Rational> {
    if !(0 <= b && b <= c && c <= a) {
        return Err(ZonalError::OutOfRange(format!("need 0 <= b <= c <= a, got ({a},{b},{c})")));
    }
    let n = 3 * a - b - c;
    let gaps = [b, c - b, a - c];
    let lead = fact(c + 1) / fact(a + 1);
    let den: Rational = gaps.iter().map(|&g| fact(g)).product::<Rational>() * gap_pochhammers(&gaps);
    Ok(lead * fact(n) / den)
}

/// Conjectured diagonal `c[κ, κ]` for `κ = (a, a−b, a−c, a−d)`.
///
/// Not a theorem: see [`crate::verify`] for the finite-range check.
pub fn conj_diag4(a: i64, b: i64, c: i64, d: i64) -> Result<Rational> {
    if !(0 <= b && b <= c && c <= d && d <= a) {
        return Err(ZonalError::OutOfRange(format!("need 0 <= b <= c <= d <= a, got ({a},{b},{c},{d})")));
    }
    let n = 4 * a - b - c - d;
    let gaps = [b, c - b, d - c, a - d];
    let lead = fact(c + 1) * fact(d - b + 1)
        / (fact(a - b + 1) * fact(d + 1) * pochhammer(&half_integer(d + 2), (a - d) as u64));
    let den: Rational = gaps.iter().map(|&g| fact(g)).product::<Rational>() * gap_pochhammers(&gaps);
    Ok(lead * fact(n) / den)
}

/// `κ = (a, a−b, a−c)` as a partition (trailing zeros dropped).
pub fn diag3_partition(a: i64, b: i64, c: i64) -> Result<Partition> {
    Partition::new(vec![a as u32, (a - b) as u32, (a - c) as u32])
}

pub fn diag4_partition(a: i64, b: i64, c: i64, d: i64) -> Result<Partition> {
    Partition::new(vec![a as u32, (a - b) as u32, (a - c) as u32, (a - d) as u32])
}

/// Conjectured `lim_{n→∞} c[(n), (n − |λ'|, λ')] = Π (p)_p / (p! · 2^{2p−1})`.
pub fn conj_limit(lambda_tail: &Partition) -> Rational {
    lambda_tail
        .parts()
        .iter()
        .map(|&p| {
            let p = p as i64;
            pochhammer(&int(p), p as u64) / (fact(p) * crate::exactpoly::pow2((2 * p - 1) as u32))
        })
        .product()
}

/// Terms of the column-sum identity for two-part diagonals: for fixed
/// `a ≥ b`, `Σ_{d=0}^{a−b} f(a, b, d) = 1`.
pub fn sumid2_term(a: i64, b: i64, d: i64) -> Rational {
    fact(a) * fact(a - b) * (int(b + 2 * d) + rat(1, 2)) * poch_half(1, d) * rfact(d) * rfact(a - b - d)
        * rfact(b + d)
        / pochhammer(&half_integer(b + d), (a - b + 1) as u64)
}

/// First WZ certificate (shift in `a`).
pub fn wz_g1(a: i64, b: i64, d: i64) -> Rational {
    -(fact(a) * fact(a - b) * poch_half(1, d) * rfact(d - 1) * rfact(b + d - 1) * rfact(a - b - d + 1))
        / pochhammer(&half_integer(b + d), (a - b + 1) as u64)
}

/// Second WZ certificate (shift in `b`); needs `b < a`.
pub fn wz_g2(a: i64, b: i64, d: i64) -> Rational {
    fact(a) * fact(a - b - 1) * poch_half(1, d) * rfact(d - 1) * rfact(b + d) * rfact(a - b - d)
        / pochhammer(&half_integer(b + d), (a - b) as u64)
}

/// Summand of the ratio identity for two-part rows at fixed `b, d`.
pub fn gosper_f(b: i64, d: i64, j: i64) -> Rational {
    binom(b, j) * int(b - 2 * j) * poch_half(1, j)
        / (int(d) * int(2 * b - 2 * d + 1) * pochhammer(&half_integer(b - j), j as u64))
}

/// Gosper antidifference of [`gosper_f`].
pub fn gosper_g(b: i64, d: i64, j: i64) -> Rational {
    binom(b, j) * int(j) * int(2 * b - 2 * j + 1) * poch_half(1, j)
        / (int(d) * int(2 * b - 2 * d + 1) * pochhammer(&half_integer(b - j), j as u64))
}

/// Checks, for all `0 ≤ b ≤ a ≤ a_max`: the column-sum identity sums to 1;
/// the Gosper certificate telescopes for every `1 ≤ d ≤ b/2`; and both WZ
/// relations hold term by term for `0 ≤ d ≤ a − b`.
pub fn verify_identities(a_max: i64) -> Report {
    let mut report = Report::new("identities", [("a_max", a_max)]);
    for a in 0..=a_max {
        for b in 0..=a {
            let sum: Rational = (0..=a - b).map(|d| sumid2_term(a, b, d)).sum();
            report.check(sum.is_one(), || (format!("sumid2 a={a} b={b}"), format!("sum = {sum}")));

            if a == a_max {
                // Gosper checks depend on b only; run each b once.
                for d in 1..=b / 2 {
                    let g0 = gosper_g(b, d, 0);
                    report.check(g0.is_zero(), || (format!("gosper b={b} d={d}"), format!("g(0) = {g0}")));
                    for j in 0..d {
                        let lhs = gosper_g(b, d, j + 1) - gosper_g(b, d, j);
                        let rhs = gosper_f(b, d, j);
                        report.check(lhs == rhs, || {
                            (format!("gosper b={b} d={d} j={j}"), format!("{lhs} != {rhs}"))
                        });
                    }
                    let gd = gosper_g(b, d, d);
                    let want = cf_two_part_ratio(b, d).expect("in range");
                    report.check(gd == want, || (format!("gosper-closed b={b} d={d}"), format!("{gd} != {want}")));
                }
            }

            for d in 0..=a - b {
                let lhs = sumid2_term(a + 1, b, d) - sumid2_term(a, b, d);
                let rhs = wz_g1(a, b, d + 1) - wz_g1(a, b, d);
                report.check(lhs == rhs, || (format!("wz1 a={a} b={b} d={d}"), format!("{lhs} != {rhs}")));
                if b < a {
                    let lhs = sumid2_term(a, b + 1, d) - sumid2_term(a, b, d);
                    let rhs = wz_g2(a, b, d + 1) - wz_g2(a, b, d);
                    report.check(lhs == rhs, || (format!("wz2 a={a} b={b} d={d}"), format!("{lhs} != {rhs}")));
                }
            }
        }
    }
    report
}

/// Shapes used by the limit check.
pub fn limit_shapes() -> Vec<Partition> {
    vec![partition![1], partition![2], partition![2, 1], partition![3]]
}
