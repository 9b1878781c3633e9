//! Integer partitions: enumeration, lexicographic and dominance order, the
//! `ρ` statistic, multinomials and the part-transfer moves that drive the
//! coefficient recurrence.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::{Result, ZonalError};

/// A weakly decreasing tuple of positive integers.
///
/// The derived `Ord` is the lexicographic order on parts, which for two
/// partitions of the same weight agrees with zero-padded comparison.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Validates `parts`. Trailing zeros are dropped; any other violation of
    /// the weakly-decreasing-positive shape is an error.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(ZonalError::InvalidPartition(format!("{parts:?}")));
        }
        Ok(Partition(parts))
    }

    /// Sorts descending and discards zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    /// Part `i` (0-based) with implicit zero padding.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// `ρ = Σ λ_i (λ_i − i)` with 1-based `i`.
    pub fn rho(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &p)| p as i64 * (p as i64 - (i as i64 + 1)))
            .sum()
    }

    /// `n! / (λ_1! ⋯ λ_k!)`.
    pub fn multinomial(&self) -> BigUint {
        let mut num = BigUint::one();
        let mut k = 0u64;
        for &p in &self.0 {
            for j in 1..=p as u64 {
                k += 1;
                num *= k;
                num /= j;
            }
        }
        num
    }

    /// Dominance: every prefix sum of `self` is at least the matching prefix
    /// sum of `other`.
    pub fn dominates(&self, other: &Partition) -> bool {
        !has_negative_prefix(self, other)
    }

    /// Differences between consecutive parts, `λ_i − λ_{i+1}` with
    /// `λ_{k+1} = 0`.
    pub fn gaps(&self) -> Vec<u32> {
        (0..self.len()).map(|i| self.part(i) - self.part(i + 1)).collect()
    }
}

/// True when some prefix sum of `κ_i − λ_i` (zero padded) is negative.
pub(crate) fn has_negative_prefix(kappa: &Partition, lambda: &Partition) -> bool {
    let len = kappa.len().max(lambda.len());
    let mut acc = 0i64;
    for i in 0..len {
        acc += kappa.part(i) as i64 - lambda.part(i) as i64;
        if acc < 0 {
            return true;
        }
    }
    false
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = ZonalError;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Partition {
    type Err = ZonalError;

    /// Accepts `3,1`, `(3,1)` or `[3,1]`; the empty string and `()` give the
    /// empty partition. Parts must already be in descending order.
    fn from_str(s: &str) -> Result<Self> {
        Partition::new(parse_parts(s)?)
    }
}

/// Parses a comma separated list of parts without checking the order.
pub fn parse_parts(s: &str) -> Result<Vec<u32>> {
    let inner = s
        .trim()
        .trim_start_matches(['(', '['])
        .trim_end_matches([')', ']'])
        .trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| ZonalError::Parse(format!("bad part {t:?}: {e}")))
        })
        .collect()
}

#[macro_export]
macro_rules! partition {
    ($($p:expr),* $(,)?) => {
        $crate::partitions::Partition::new(vec![$($p),*]).expect("valid partition literal")
    };
}

/// Every partition of `n`, in strictly descending lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    if n == 0 {
        return vec![Partition::empty()];
    }
    let mut out = Vec::new();
    let mut cur = vec![n as u32];
    loop {
        out.push(Partition(cur.clone()));
        // Rightmost part greater than one; everything after it is 1s.
        let Some(pos) = cur.iter().rposition(|&p| p > 1) else {
            break;
        };
        let mut rest: u32 = cur[pos + 1..].iter().sum::<u32>() + 1;
        let cap = cur[pos] - 1;
        cur.truncate(pos);
        cur.push(cap);
        while rest > 0 {
            let p = rest.min(cap);
            cur.push(p);
            rest -= p;
        }
    }
    out
}

/// Lexicographic comparison of two partitions of the same weight.
pub fn lex_compare(kappa: &Partition, lambda: &Partition) -> Result<Ordering> {
    let (a, b) = (kappa.weight(), lambda.weight());
    if a != b {
        return Err(ZonalError::IncomparableWeights(a, b));
    }
    Ok(kappa.cmp(lambda))
}

/// A transfer of `t` units from part `s` to part `r < s` of `λ`.
///
/// Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuMove {
    /// The transferred tuple, sorted back into a partition.
    pub result: Partition,
    /// `(λ_r + t) − (λ_s − t)`.
    pub numerator: u32,
    pub r: usize,
    pub s: usize,
    pub t: u32,
}

/// Every move `(r, s, t)` with `r < s`, `1 ≤ t ≤ λ_s` whose sorted result
/// `μ` satisfies `λ < μ ≤ κ` lexicographically.
///
/// Moves are listed per `(r, s, t)`: two moves with the same sorted result
/// appear twice, each carrying its own numerator.
pub fn mu_moves(lambda: &Partition, kappa: &Partition) -> Vec<MuMove> {
    let mut out = Vec::new();
    for_each_move(lambda, |r, s, t, numerator, result| {
        if result > *lambda && result <= *kappa {
            out.push(MuMove { result, numerator, r, s, t });
        }
    });
    out
}

/// Enumerates all part transfers of `λ` without the lexicographic window.
pub(crate) fn for_each_move<F>(lambda: &Partition, mut f: F)
where
    F: FnMut(usize, usize, u32, u32, Partition),
{
    let parts = lambda.parts();
    let k = parts.len();
    let mut buf = parts.to_vec();
    for r in 0..k {
        for s in r + 1..k {
            for t in 1..=parts[s] {
                buf.copy_from_slice(parts);
                buf[r] += t;
                buf[s] -= t;
                let numerator = buf[r] - buf[s];
                f(r, s, t, numerator, Partition::from_unsorted(buf.clone()));
            }
        }
    }
}
