use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::mpoly::MPoly;
use super::rational::Rational;
use crate::partitions::Partition;
use crate::{Result, ZonalError};

/// A homogeneous symmetric polynomial in monomial-symmetric coordinates,
/// `Σ coeffs[λ] · M_λ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymM {
    coeffs: BTreeMap<Partition, Rational>,
}

impl SymM {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from pairs, requiring a common weight.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Partition, Rational)>,
    {
        let mut out = SymM::new();
        for (p, c) in pairs {
            out.add(p, c)?;
        }
        Ok(out)
    }

    /// Adds `c · M_λ`.
    pub fn add(&mut self, lambda: Partition, c: Rational) -> Result<()> {
        if let Some(w) = self.weight() {
            if w != lambda.weight() {
                return Err(ZonalError::IncomparableWeights(w, lambda.weight()));
            }
        }
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.coeffs.entry(lambda.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&lambda);
        }
        Ok(())
    }

    /// Common weight of the stored partitions; `None` when empty.
    pub fn weight(&self) -> Option<usize> {
        self.coeffs.keys().next().map(Partition::weight)
    }

    pub fn get(&self, lambda: &Partition) -> Rational {
        self.coeffs.get(lambda).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Entries in descending lexicographic order of the partition.
    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.coeffs.iter().rev()
    }

    pub fn scale(&self, c: &Rational) -> SymM {
        if c.is_zero() {
            return SymM::new();
        }
        SymM { coeffs: self.coeffs.iter().map(|(p, v)| (p.clone(), v * c)).collect() }
    }

    pub fn try_add(&self, other: &SymM) -> Result<SymM> {
        let mut out = self.clone();
        for (p, c) in other.iter() {
            out.add(p.clone(), c.clone())?;
        }
        Ok(out)
    }

    /// Expands into `m` variables; terms with more parts than `m` vanish.
    pub fn to_mpoly(&self, m: usize) -> MPoly {
        let mut out = MPoly::zero(m);
        for (lambda, c) in &self.coeffs {
            for e in m_orbit(lambda, m) {
                out.add_term(e, c.clone());
            }
        }
        out
    }
}

/// Distinct exponent vectors in the orbit of `λ` padded to `m` entries.
/// Empty when `λ` has more than `m` parts.
pub fn m_orbit(lambda: &Partition, m: usize) -> Vec<Vec<u32>> {
    if lambda.len() > m {
        return Vec::new();
    }
    let mut e: Vec<u32> = (0..m).map(|i| lambda.part(i)).collect();
    e.sort_unstable();
    let mut out = vec![e.clone()];
    while next_permutation(&mut e) {
        out.push(e.clone());
    }
    out
}

/// Advances to the next lexicographic permutation; false after the last.
fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// The monomial symmetric polynomial `M_λ(y1..ym)`.
pub fn m_expand(lambda: &Partition, m: usize) -> MPoly {
    let mut out = MPoly::zero(m);
    for e in m_orbit(lambda, m) {
        out.add_term(e, Rational::one());
    }
    out
}

/// Rewrites a homogeneous symmetric polynomial in the `M` basis.
///
/// Every orbit is checked to be complete and constant; the zero polynomial
/// maps to the empty combination.
pub fn to_m_basis(f: &MPoly) -> Result<SymM> {
    if f.homogeneous_degree().is_none() {
        return Err(ZonalError::NotHomogeneous);
    }
    let mut orbit_sizes: BTreeMap<Partition, usize> = BTreeMap::new();
    let mut out = SymM::new();
    for (e, c) in f.terms() {
        let lambda = Partition::from_unsorted(e.to_vec());
        let mut canonical: Vec<u32> = e.to_vec();
        canonical.sort_unstable_by(|a, b| b.cmp(a));
        if f.coefficient(&canonical) != *c {
            return Err(ZonalError::NotSymmetric);
        }
        *orbit_sizes.entry(lambda.clone()).or_default() += 1;
        if e == canonical.as_slice() {
            out.add(lambda, c.clone())?;
        }
    }
    for (lambda, seen) in orbit_sizes {
        if seen != m_orbit(&lambda, f.nvars()).len() {
            return Err(ZonalError::NotSymmetric);
        }
    }
    Ok(out)
}

/// Elementary symmetric polynomial `u_r(y1..ym)`.
pub fn elementary(r: usize, m: usize) -> MPoly {
    let mut out = MPoly::zero(m);
    if r > m {
        return out;
    }
    // Exponent vectors with exactly r ones, via the orbit of (1^r).
    let ones = Partition::new(vec![1; r]).expect("valid");
    for e in m_orbit(&ones, m) {
        out.add_term(e, Rational::one());
    }
    out
}

/// `U_λ = u_1^{λ1−λ2} u_2^{λ2−λ3} ⋯ u_k^{λk}` in `m` variables.
pub fn u_expand(lambda: &Partition, m: usize) -> Result<MPoly> {
    if lambda.len() > m {
        return Err(ZonalError::TooManyParts { partition: lambda.to_string(), vars: m });
    }
    let mut out = MPoly::one(m);
    for (r, gap) in lambda.gaps().into_iter().enumerate() {
        if gap > 0 {
            out = &out * &elementary(r + 1, m).pow(gap);
        }
    }
    Ok(out)
}
