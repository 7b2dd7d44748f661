//! Dense exact matrices over ℚ.
//!
//! Rank and kernels go through fraction-free (Bareiss) elimination: every row
//! is first cleared of denominators, and each elimination step divides exactly
//! by the previous pivot, so intermediate entries stay minors of the input.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::subset::Subset;
use crate::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
    row_labels: Option<Vec<Subset>>,
    col_labels: Option<Vec<Subset>>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols], row_labels: None, col_labels: None }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        RationalMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
    }

    /// Attaches subset labels; panics if the lengths disagree with the shape.
    pub fn with_labels(mut self, row_labels: Vec<Subset>, col_labels: Vec<Subset>) -> Self {
        assert_eq!(row_labels.len(), self.rows, "row label count");
        assert_eq!(col_labels.len(), self.cols, "column label count");
        self.row_labels = Some(row_labels);
        self.col_labels = Some(col_labels);
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_labels(&self) -> Option<&[Subset]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[Subset]> {
        self.col_labels.as_deref()
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        assert!(row < self.rows && col < self.cols);
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        assert!(row < self.rows && col < self.cols);
        self.entries[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t.row_labels = self.col_labels.clone();
        t.col_labels = self.row_labels.clone();
        t
    }

    /// Matrix product; panics on a shape mismatch. Labels are carried over.
    pub fn mul(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        out.row_labels = self.row_labels.clone();
        out.col_labels = rhs.col_labels.clone();
        out
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, x.len(), "vector length");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Equality of entries, ignoring labels.
    pub fn same_entries(&self, other: &RationalMatrix) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }

    pub fn rank(&self) -> usize {
        Echelon::of(self).pivots.len()
    }

    /// Basis of `{x : Mx = 0}`, one vector per free column in increasing column
    /// order, each scaled so that its first nonzero coordinate is 1.
    pub fn nullspace_basis(&self) -> Vec<Vec<Rational>> {
        let echelon = Echelon::of(self);
        let basis = echelon.kernel();
        for x in &basis {
            assert!(self.mul_vec(x).iter().all(Zero::is_zero), "kernel vector failed exact verification");
        }
        basis
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Row echelon form over ℤ produced by Bareiss elimination.
struct Echelon {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn of(m: &RationalMatrix) -> Self {
        let mut rows: Vec<Vec<BigInt>> = (0..m.rows).map(|i| clear_denominators(m.row(i))).collect();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let (head, tail) = rows.split_at_mut(r + 1);
            let pivot_row = &head[r];
            let pivot = &pivot_row[c];
            for row in tail.iter_mut() {
                let lead = row[c].clone();
                for j in c + 1..m.cols {
                    let num = pivot * &row[j] - &lead * &pivot_row[j];
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    row[j] = q;
                }
                row[c] = BigInt::zero();
            }
            prev = pivot.clone();
            pivots.push(c);
            r += 1;
        }
        Echelon { cols: m.cols, rows, pivots }
    }

    fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = vec![Rational::zero(); self.cols];
                x[free] = Rational::one();
                for (i, &p) in self.pivots.iter().enumerate().rev() {
                    let row = &self.rows[i];
                    let s = (p + 1..self.cols)
                        .filter(|&j| !row[j].is_zero() && !x[j].is_zero())
                        .fold(Rational::zero(), |acc, j| acc + Rational::from_integer(row[j].clone()) * &x[j]);
                    x[p] = -s / Rational::from_integer(row[p].clone());
                }
                normalize_leading(&mut x);
                x
            })
            .collect()
    }
}

fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}

/// Scales `x` so that its first nonzero coordinate becomes 1.
pub fn normalize_leading(x: &mut [Rational]) {
    if let Some(lead) = x.iter().find(|q| !q.is_zero()).cloned() {
        for q in x.iter_mut() {
            *q /= &lead;
        }
    }
}

/// Number of nonzero coordinates.
pub fn support_size(x: &[Rational]) -> usize {
    x.iter().filter(|q| !q.is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rank_of_identity_and_ones() {
        assert_eq!(RationalMatrix::identity(4).rank(), 4);
        assert_eq!(RationalMatrix::from_integer_rows(&[vec![1], vec![1], vec![1]]).rank(), 1);
        assert_eq!(RationalMatrix::zeros(3, 5).rank(), 0);
        assert_eq!(RationalMatrix::zeros(0, 0).rank(), 0);
    }

    #[test]
    fn nullspace_of_row_of_ones() {
        let m = RationalMatrix::from_integer_rows(&[vec![1, 1]]);
        assert_eq!(m.nullspace_basis(), vec![vec![q(1, 1), q(-1, 1)]]);
    }

    #[test]
    fn invertible_has_empty_kernel() {
        let m = RationalMatrix::from_integer_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        assert_eq!(m.rank(), 3);
        assert!(m.nullspace_basis().is_empty());
    }

    #[test]
    fn fractional_entries() {
        // second row is 2/3 of the first
        let m = RationalMatrix::from_rows(vec![vec![q(3, 2), q(-1, 4), q(5, 1)], vec![q(1, 1), q(-1, 6), q(10, 3)]]);
        assert_eq!(m.rank(), 1);
        let kernel = m.nullspace_basis();
        assert_eq!(kernel.len(), 2);
        for x in &kernel {
            assert_eq!(x.iter().find(|v| !v.is_zero()), Some(&q(1, 1)));
        }
    }

    #[test]
    fn rank_deficient_with_skipped_columns() {
        let m = RationalMatrix::from_integer_rows(&[vec![0, 2, 4, 1], vec![0, 1, 2, 3], vec![0, 3, 6, 4]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.nullspace_basis().len(), 2);
    }

    #[test]
    fn transpose_and_product() {
        let a = RationalMatrix::from_integer_rows(&[vec![1, 2], vec![3, 4], vec![5, 6]]);
        let p = a.transpose().mul(&a);
        assert_eq!(p, RationalMatrix::from_integer_rows(&[vec![35, 44], vec![44, 56]]));
    }
}
