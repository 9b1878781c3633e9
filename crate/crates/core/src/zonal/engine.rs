use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactpoly::Rational;
use crate::parallel::{self, Strategy};
use crate::partitions::{for_each_move, partitions_of, Partition};
use crate::{Result, ZonalError};

use super::table::CoeffTable;

/// Memoised coefficient engine for one weight `n`.
///
/// Each row is stored normalised, `r_κ(λ) = c[κ,λ] / c[κ,κ]`: the
/// recurrence only ever mixes entries of the same row, so normalised rows
/// are independent of each other and can be filled concurrently. The
/// diagonals then follow from the column sums, walking rows in descending
/// lexicographic order.
///
/// With pruning on (the default), entries whose row does not dominate the
/// column are known zeros and are neither stored nor recursed into. With
/// pruning off, the recurrence runs over the full lexicographic window and
/// every zero has to emerge from the arithmetic.
#[derive(Clone, Debug)]
pub struct CoeffEngine {
    n: usize,
    parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
    prefix: Vec<Vec<u32>>,
    rho: Vec<i64>,
    /// For every partition: (index of sorted move result, numerator).
    moves: Vec<Vec<(usize, u32)>>,
    rows: Vec<Row>,
    diag: Vec<Option<Rational>>,
    pruning: bool,
    strategy: Strategy,
}

#[derive(Clone, Debug, Default)]
struct Row {
    /// Normalised entries computed so far, keyed by column index.
    values: HashMap<usize, Rational>,
}

impl CoeffEngine {
    pub fn new(n: usize) -> Self {
        Self::with_options(n, true, Strategy::default())
    }

    /// Engine that runs the bare recurrence without the dominance shortcut.
    pub fn unpruned(n: usize) -> Self {
        Self::with_options(n, false, Strategy::default())
    }

    pub fn with_options(n: usize, pruning: bool, strategy: Strategy) -> Self {
        let parts = partitions_of(n);
        let index: HashMap<Partition, usize> =
            parts.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let prefix = parts
            .iter()
            .map(|p| {
                let mut acc = 0;
                (0..n.max(1))
                    .map(|i| {
                        acc += p.part(i);
                        acc
                    })
                    .collect()
            })
            .collect();
        let rho = parts.iter().map(Partition::rho).collect();
        let moves = parallel::map(&parts, strategy, |lambda| {
            let mut out = Vec::new();
            for_each_move(lambda, |_, _, _, numerator, mu| {
                out.push((index[&mu], numerator));
            });
            out
        });
        let count = parts.len();
        CoeffEngine {
            n,
            parts,
            index,
            prefix,
            rho,
            moves,
            rows: vec![Row::default(); count],
            diag: vec![None; count],
            pruning,
            strategy,
        }
    }

    pub fn weight(&self) -> usize {
        self.n
    }

    pub fn is_pruning(&self) -> bool {
        self.pruning
    }

    pub fn set_strategy(&mut self, strategy: Strategy) {
        self.strategy = strategy;
    }

    /// Partitions of `n` in descending lexicographic order.
    pub fn partitions(&self) -> &[Partition] {
        &self.parts
    }

    pub fn index_of(&self, p: &Partition) -> Result<usize> {
        self.index
            .get(p)
            .copied()
            .ok_or_else(|| ZonalError::IncomparableWeights(self.n, p.weight()))
    }

    fn dominates(&self, a: usize, b: usize) -> bool {
        self.prefix[a].iter().zip(&self.prefix[b]).all(|(x, y)| x >= y)
    }

    /// Whether `(row, col)` can hold a nonzero value under the active mode.
    fn in_support(&self, row: usize, col: usize) -> bool {
        row <= col && (!self.pruning || self.dominates(row, col))
    }

    /// Exact `c[κ, λ]`.
    pub fn coefficient(&mut self, kappa: &Partition, lambda: &Partition) -> Result<Rational> {
        let k = self.index_of(kappa)?;
        let l = self.index_of(lambda)?;
        if !self.in_support(k, l) {
            return Ok(Rational::zero());
        }
        let d = self.diagonal_at(k);
        self.ensure_rows(&[k], l);
        Ok(d * self.normalized_at(k, l))
    }

    /// Exact `c[κ, κ]`.
    pub fn diagonal(&mut self, kappa: &Partition) -> Result<Rational> {
        let k = self.index_of(kappa)?;
        Ok(self.diagonal_at(k))
    }

    /// `c[κ, λ] / c[κ, κ]`.
    pub fn normalized(&mut self, kappa: &Partition, lambda: &Partition) -> Result<Rational> {
        let k = self.index_of(kappa)?;
        let l = self.index_of(lambda)?;
        if !self.in_support(k, l) {
            return Ok(Rational::zero());
        }
        self.ensure_rows(&[k], l);
        Ok(self.normalized_at(k, l))
    }

    fn normalized_at(&self, k: usize, l: usize) -> Rational {
        self.rows[k].values.get(&l).cloned().unwrap_or_else(Rational::zero)
    }

    /// Fills the normalised rows `ks` down to column `target`.
    fn ensure_rows(&mut self, ks: &[usize], target: usize) {
        let todo: Vec<usize> = ks
            .iter()
            .copied()
            .filter(|&k| self.in_support(k, target) && !self.rows[k].values.contains_key(&target))
            .collect();
        if todo.is_empty() {
            return;
        }
        let mut work: Vec<(usize, Row)> =
            todo.iter().map(|&k| (k, std::mem::take(&mut self.rows[k]))).collect();
        {
            let this = &*self;
            parallel::for_each_mut(&mut work, self.strategy, |(k, row)| {
                this.fill_row(*k, row, target);
            });
        }
        for (k, row) in work {
            self.rows[k] = row;
        }
    }

    /// Runs the recurrence for row `k` over every column in the window
    /// `k..=target` that can be reached from `target`, in descending
    /// lexicographic order so every `μ > λ` is ready before `λ`.
    fn fill_row(&self, k: usize, row: &mut Row, target: usize) {
        row.values.entry(k).or_insert_with(Rational::one);
        for l in k + 1..=target {
            if row.values.contains_key(&l) || !self.in_support(k, l) {
                continue;
            }
            if self.pruning && !self.dominates(l, target) {
                continue;
            }
            let value = self.recurrence(k, l, row);
            row.values.insert(l, value);
        }
    }

    fn recurrence(&self, k: usize, l: usize, row: &Row) -> Rational {
        let denom = self.rho[k] - self.rho[l];
        // Empty sum with a vanishing denominator: the entry is zero.
        if denom == 0 {
            return Rational::zero();
        }
        let mut acc = BigSum::default();
        for &(mu, numerator) in &self.moves[l] {
            // Results lie strictly above λ; those above κ are outside the sum.
            if mu < k {
                continue;
            }
            if let Some(v) = row.values.get(&mu) {
                acc.add(numerator, v);
            } else {
                debug_assert!(!self.in_support(k, mu), "missing ({k}, {mu})");
            }
        }
        acc.finish() / Rational::from_integer(BigInt::from(denom))
    }

    fn diagonal_at(&mut self, k: usize) -> Rational {
        if let Some(d) = &self.diag[k] {
            return d.clone();
        }
        // Rows that can contribute to column k of the column sum, plus k.
        let upset: Vec<usize> = (0..=k).filter(|&j| self.in_support(j, k)).collect();
        let pending: Vec<usize> = upset.iter().copied().filter(|&j| self.diag[j].is_none()).collect();
        // Every pending diagonal needs rows in `upset` down to itself; all of
        // those lie within the window down to k.
        self.ensure_rows(&upset, k);
        for &j in &pending {
            let mut sum = Rational::zero();
            for &i in upset.iter().take_while(|&&i| i < j) {
                if self.in_support(i, j) {
                    let d = self.diag[i].as_ref().expect("processed in order");
                    sum += d * self.normalized_at(i, j);
                }
            }
            let multinomial = Rational::from_integer(BigInt::from(self.parts[j].multinomial()));
            self.diag[j] = Some(multinomial - sum);
        }
        self.diag[k].clone().expect("just computed")
    }

    /// The full matrix over all partitions of `n`.
    pub fn table(&mut self) -> CoeffTable {
        let count = self.parts.len();
        if count > 0 {
            let all: Vec<usize> = (0..count).collect();
            self.ensure_rows(&all, count - 1);
            self.diagonal_at(count - 1);
        }
        let this = &*self;
        let rows: Vec<usize> = (0..count).collect();
        let coefficients = parallel::map(&rows, self.strategy, |&k| {
            let d = this.diag[k].as_ref().expect("all diagonals computed");
            (0..count)
                .map(|l| {
                    if this.in_support(k, l) {
                        d * this.normalized_at(k, l)
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        });
        CoeffTable::new(self.n, self.parts.clone(), coefficients)
    }

    /// Row `κ` as `(λ, c[κ,λ])` pairs for every nonzero entry, descending.
    pub fn row(&mut self, kappa: &Partition) -> Result<Vec<(Partition, Rational)>> {
        let k = self.index_of(kappa)?;
        let last = self.parts.len() - 1;
        let d = self.diagonal_at(k);
        self.ensure_rows(&[k], last);
        let mut out = Vec::new();
        for l in k..=last {
            if self.in_support(k, l) {
                let v = self.normalized_at(k, l);
                if !v.is_zero() {
                    out.push((self.parts[l].clone(), &d * v));
                }
            }
        }
        Ok(out)
    }
}

/// Accumulates `Σ numerator · value` over a common denominator, deferring
/// the gcd reduction to the end.
#[derive(Default)]
struct BigSum {
    num: BigInt,
    den: Option<BigInt>,
}

impl BigSum {
    fn add(&mut self, numerator: u32, v: &Rational) {
        let term = BigInt::from(numerator) * v.numer();
        match &mut self.den {
            None => {
                self.num = term;
                self.den = Some(v.denom().clone());
            }
            Some(d) if d == v.denom() => self.num += term,
            Some(d) => {
                let g = num_integer::Integer::gcd(d, v.denom());
                let left = v.denom() / &g;
                let right = &*d / &g;
                self.num = &self.num * &left + term * right;
                *d *= left;
            }
        }
    }

    fn finish(self) -> Rational {
        match self.den {
            None => Rational::zero(),
            Some(d) => Rational::new(self.num, d),
        }
    }
}
