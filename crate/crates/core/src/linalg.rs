//! Dense exact rational matrices.

use std::fmt;

use num_traits::{One, Zero};

use crate::exactpoly::{format_rational, Rational};
use crate::{Result, ZonalError};

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ZonalError::OutOfRange("ragged matrix rows".into()));
        }
        Ok(QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(ZonalError::OutOfRange(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(ZonalError::OutOfRange(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    /// Inverse by Gauss–Jordan elimination with row pivoting; no structure
    /// is assumed.
    pub fn inverse(&self) -> Result<QMatrix> {
        if self.rows != self.cols {
            return Err(ZonalError::Singular(format!("{}x{} matrix is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or_else(|| ZonalError::Singular(format!("no pivot in column {col}")))?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a.get(col, col).recip();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                a.sub_row(r, col, &f);
                inv.sub_row(r, col, &f);
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &Rational) {
        for j in 0..self.cols {
            self.data[r * self.cols + j] *= c;
        }
    }

    /// `row[target] -= f · row[source]`.
    fn sub_row(&mut self, target: usize, source: usize, f: &Rational) {
        for j in 0..self.cols {
            let s = &self.data[source * self.cols + j];
            if !s.is_zero() {
                let d = f * s;
                self.data[target * self.cols + j] -= d;
            }
        }
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self.to_rows().iter().map(|r| r.iter().map(format_rational).collect()).collect();
        write!(f, "{rows:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;
    use proptest::prelude::*;

    #[test]
    fn inverse_of_permuted_matrix() {
        let a = QMatrix::from_i64(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 4]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), QMatrix::identity(3));
        assert!(QMatrix::from_i64(&[&[1, 2], &[2, 4]]).unwrap().inverse().is_err());
        assert!(QMatrix::zeros(2, 3).inverse().is_err());
    }

    #[test]
    fn triangularity_and_products() {
        let a = QMatrix::from_i64(&[&[1, 2], &[0, 3]]).unwrap();
        assert!(a.is_upper_triangular());
        assert!(!QMatrix::from_i64(&[&[1, 0], &[1, 1]]).unwrap().is_upper_triangular());
        assert_eq!(a.mul_vec(&[rat(1, 1), rat(1, 3)]).unwrap(), vec![rat(5, 3), rat(1, 1)]);
        assert!(a.mul(&QMatrix::zeros(3, 1)).is_err());
    }

    proptest! {
        #[test]
        fn inverse_roundtrip(entries in prop::collection::vec(-6i64..6, 16)) {
            let rows: Vec<&[i64]> = entries.chunks(4).collect();
            let a = QMatrix::from_i64(&rows).unwrap();
            if let Ok(inv) = a.inverse() {
                prop_assert_eq!(inv.mul(&a).unwrap(), QMatrix::identity(4));
            }
        }
    }
}
