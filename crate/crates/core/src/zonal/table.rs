use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exactpoly::{format_rational, parse_rational, Rational};
use crate::partitions::Partition;
use crate::{Result, ZonalError};

/// The full `c[κ, λ]` matrix for one weight, rows and columns in descending
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    n: usize,
    partitions: Vec<Partition>,
    coefficients: Vec<Vec<Rational>>,
}

/// Serialised table: `{"n", "partitions", "coefficients"}` with every
/// coefficient written as a `"p/q"` string.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableJson {
    pub n: usize,
    pub partitions: Vec<Vec<u32>>,
    pub coefficients: Vec<Vec<String>>,
}

impl CoeffTable {
    pub(crate) fn new(n: usize, partitions: Vec<Partition>, coefficients: Vec<Vec<Rational>>) -> Self {
        CoeffTable { n, partitions, coefficients }
    }

    pub fn weight(&self) -> usize {
        self.n
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.coefficients
    }

    pub fn get(&self, kappa: &Partition, lambda: &Partition) -> Option<&Rational> {
        let k = self.partitions.iter().position(|p| p == kappa)?;
        let l = self.partitions.iter().position(|p| p == lambda)?;
        Some(&self.coefficients[k][l])
    }

    pub fn column_sum(&self, col: usize) -> Rational {
        self.coefficients.iter().map(|row| &row[col]).sum()
    }

    pub fn row_sum(&self, row: usize) -> Rational {
        self.coefficients[row].iter().sum()
    }

    /// Column sums against the multinomials; returns the offending columns.
    pub fn column_sum_violations(&self) -> Vec<Partition> {
        (0..self.partitions.len())
            .filter(|&c| {
                let want = Rational::from_integer(BigInt::from(self.partitions[c].multinomial()));
                self.column_sum(c) != want
            })
            .map(|c| self.partitions[c].clone())
            .collect()
    }

    pub fn to_json(&self) -> TableJson {
        TableJson {
            n: self.n,
            partitions: self.partitions.iter().map(|p| p.parts().to_vec()).collect(),
            coefficients: self
                .coefficients
                .iter()
                .map(|row| row.iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &TableJson) -> Result<Self> {
        let partitions = json
            .partitions
            .iter()
            .map(|p| Partition::new(p.clone()))
            .collect::<Result<Vec<_>>>()?;
        let coefficients = json
            .coefficients
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if coefficients.len() != partitions.len()
            || coefficients.iter().any(|r| r.len() != partitions.len())
        {
            return Err(ZonalError::Parse("table is not square".into()));
        }
        Ok(CoeffTable { n: json.n, partitions, coefficients })
    }

    /// Fixed-width text layout with a `κ\λ` header row.
    pub fn render_text(&self) -> String {
        let mut cells: Vec<Vec<String>> = Vec::with_capacity(self.partitions.len() + 1);
        let mut header = vec!["κ\\λ".to_string()];
        header.extend(self.partitions.iter().map(|p| p.to_string()));
        cells.push(header);
        for (p, row) in self.partitions.iter().zip(&self.coefficients) {
            let mut line = vec![p.to_string()];
            line.extend(row.iter().map(|v| if v.is_zero() { "0".into() } else { format_rational(v) }));
            cells.push(line);
        }
        let cols = cells[0].len();
        let widths: Vec<usize> = (0..cols)
            .map(|c| cells.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for (i, row) in cells.iter().enumerate() {
            let mut line = String::new();
            for (c, cell) in row.iter().enumerate() {
                let pad = widths[c] - cell.chars().count();
                if c == 0 {
                    line.push_str(cell);
                    line.push_str(&" ".repeat(pad));
                    line.push_str(" |");
                } else {
                    line.push_str("  ");
                    line.push_str(&" ".repeat(pad));
                    line.push_str(cell);
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
            if i == 0 {
                out.push_str(&"-".repeat(line.trim_end().chars().count()));
                out.push('\n');
            }
        }
        out
    }
}
