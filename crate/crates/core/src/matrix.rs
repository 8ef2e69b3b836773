//! The `k × ℓ` table of joint residue counts.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, Count};

/// Entry `(i, j)` counts `σ ∈ S_n` with `maj(σ) ≡ i (mod k)` and
/// `maj(σ⁻¹) ≡ j (mod ℓ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountMatrix<T> {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub entries: Vec<Vec<T>>,
}

impl<T: Count> CountMatrix<T> {
    pub fn zeros(n: usize, k: usize, l: usize) -> Self {
        Self {
            n,
            k,
            l,
            entries: vec![vec![T::zero(); l]; k],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i][j]
    }

    pub fn row_sums(&self) -> Result<Vec<T>> {
        self.entries
            .iter()
            .map(|row| row.iter().try_fold(T::zero(), |a, x| scalar::add(&a, x)))
            .collect()
    }

    pub fn column_sums(&self) -> Result<Vec<T>> {
        (0..self.l)
            .map(|j| {
                self.entries
                    .iter()
                    .try_fold(T::zero(), |a, row| scalar::add(&a, &row[j]))
            })
            .collect()
    }

    pub fn total(&self) -> Result<T> {
        self.row_sums()?
            .iter()
            .try_fold(T::zero(), |a, x| scalar::add(&a, x))
    }

    pub fn transpose(&self) -> Self {
        Self {
            n: self.n,
            k: self.l,
            l: self.k,
            entries: (0..self.l)
                .map(|j| self.entries.iter().map(|row| row[j].clone()).collect())
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.k == self.l && *self == self.transpose()
    }

    /// Entry-wise sum of two tables of identical shape.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if (self.n, self.k, self.l) != (other.n, other.k, other.l) {
            return Err(Error::InvalidArgument("matrix shapes differ".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| scalar::add(x, y)).collect())
            .collect::<Result<_>>()?;
        Ok(Self { entries, ..*self })
    }

    /// Grand total `n!`, every row `n!/k` and every column `n!/ℓ` (margins
    /// only checked when the modulus is at most `n`).
    pub fn check_margins(&self) -> Result<(), String> {
        let err = |e: Error| e.to_string();
        let total_expected: T = scalar::factorial(self.n).map_err(err)?;
        let total = self.total().map_err(err)?;
        if total != total_expected {
            return Err(format!("total {total} != {}! = {total_expected}", self.n));
        }
        if self.k <= self.n {
            let share = scalar::div_exact(&total_expected, &scalar::lift(self.k).map_err(err)?)
                .map_err(err)?;
            for (i, s) in self.row_sums().map_err(err)?.iter().enumerate() {
                if *s != share {
                    return Err(format!("row {i} sums to {s}, expected {share}"));
                }
            }
        }
        if self.l <= self.n {
            let share = scalar::div_exact(&total_expected, &scalar::lift(self.l).map_err(err)?)
                .map_err(err)?;
            for (j, s) in self.column_sums().map_err(err)?.iter().enumerate() {
                if *s != share {
                    return Err(format!("column {j} sums to {s}, expected {share}"));
                }
            }
        }
        Ok(())
    }

    /// Header `i\j,0,…,ℓ-1`, then one line per `i`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i\\j");
        for j in 0..self.l {
            write!(out, ",{j}").unwrap();
        }
        out.push('\n');
        for (i, row) in self.entries.iter().enumerate() {
            write!(out, "{i}").unwrap();
            for x in row {
                write!(out, ",{x}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of [`to_csv`](Self::to_csv); `n` is not part of the CSV.
    pub fn from_csv(n: usize, text: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse {
            input: text.to_string(),
            reason: why.to_string(),
        };
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let mut cols = header.split(',');
        if cols.next() != Some("i\\j") {
            return Err(bad("header must start with i\\j"));
        }
        let l = cols.count();
        let mut entries = Vec::new();
        for (i, line) in lines.enumerate() {
            let mut cells = line.split(',');
            let label: usize = cells
                .next()
                .and_then(|c| c.trim().parse().ok())
                .ok_or_else(|| bad("row label"))?;
            if label != i {
                return Err(bad("row labels must be 0, 1, …"));
            }
            let row: Vec<T> = cells
                .map(|c| {
                    c.trim()
                        .parse::<u128>()
                        .ok()
                        .and_then(T::from_u128)
                        .ok_or_else(|| bad("entry"))
                })
                .collect::<Result<_>>()?;
            if row.len() != l {
                return Err(bad("ragged row"));
            }
            entries.push(row);
        }
        Ok(Self {
            n,
            k: entries.len(),
            l,
            entries,
        })
    }

    /// Plain grid with row and column residue labels.
    pub fn to_text(&self) -> String {
        let width = self
            .entries
            .iter()
            .flatten()
            .map(|x| x.to_string().len())
            .chain(std::iter::once(self.l.saturating_sub(1).to_string().len()))
            .max()
            .unwrap_or(1);
        let label = self.k.saturating_sub(1).to_string().len().max(3);
        let mut out = format!("{:>label$}", "i\\j");
        for j in 0..self.l {
            write!(out, " {j:>width$}").unwrap();
        }
        out.push('\n');
        for (i, row) in self.entries.iter().enumerate() {
            write!(out, "{i:>label$}").unwrap();
            for x in row {
                write!(out, " {:>width$}", x.to_string()).unwrap();
            }
            out.push('\n');
        }
        out
    }
}
