use std::fmt;

use super::BitVector;
use crate::error::CodeError;

/// Dense matrix over GF(2), stored by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: usize,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<BitVector>,
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn new(rows: Vec<BitVector>, cols: usize) -> Result<Self, CodeError> {
        for r in &rows {
            r.check_len(cols)?;
        }
        Ok(BitMatrix { rows, cols })
    }

    pub fn empty(cols: usize) -> Self {
        BitMatrix { rows: Vec::new(), cols }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    /// `M · v` over GF(2).
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector, CodeError> {
        v.check_len(self.cols)?;
        self.rows.iter().map(|r| r.dot(v)).collect()
    }

    /// `xᵀ · M`, the combination of rows selected by `x`.
    pub fn combine_rows(&self, x: &BitVector) -> Result<BitVector, CodeError> {
        x.check_len(self.rows.len())?;
        let mut acc = BitVector::zeros(self.cols);
        for (i, r) in self.rows.iter().enumerate() {
            if x[i] {
                acc = &acc ^ r;
            }
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j]).collect())
            .collect();
        BitMatrix {
            rows,
            cols: self.rows.len(),
        }
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Self) -> Result<Self, CodeError> {
        if self.cols != other.cols {
            return Err(CodeError::LengthMismatch {
                expected: self.cols,
                actual: other.cols,
            });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix { rows, cols: self.cols })
    }

    pub fn echelon(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i][col]) else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[col] {
                    *row = &*row ^ &pivot_row;
                }
            }
            pivots.push(col);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        Echelon { rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{x : M x = 0}`.
    pub fn nullspace(&self) -> Vec<BitVector> {
        let Echelon { rows, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = BitVector::zeros(self.cols);
                x.set(f, true);
                for (row, &p) in rows.iter().zip(&pivots) {
                    if row[f] {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }

    /// One solution of `M x = b` (free variables set to zero).
    pub fn solve(&self, b: &BitVector) -> Result<BitVector, CodeError> {
        b.check_len(self.rows.len())?;
        let augmented: Vec<BitVector> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut a = r.clone();
                a.push(b[i]);
                a
            })
            .collect();
        let aug = BitMatrix {
            rows: augmented,
            cols: self.cols + 1,
        };
        let Echelon { rows, pivots } = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return Err(CodeError::Inconsistent);
        }
        let mut x = BitVector::zeros(self.cols);
        for (row, &p) in rows.iter().zip(&pivots) {
            x.set(p, row[self.cols]);
        }
        Ok(x)
    }

    /// True iff `v` lies in the row space.
    pub fn spans(&self, v: &BitVector) -> Result<bool, CodeError> {
        match self.transpose().solve(v) {
            Ok(_) => Ok(true),
            Err(CodeError::Inconsistent) => Ok(false),
            Err(e) => Err(e),
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}
