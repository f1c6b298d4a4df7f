//! Dense matrices of arbitrary-precision integers.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Dense rectangular integer matrix stored in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl BigIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BigIntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// The all-ones matrix `J`.
    pub fn ones(rows: usize, cols: usize) -> Self {
        BigIntMatrix {
            rows,
            cols,
            entries: vec![BigInt::one(); rows * cols],
        }
    }

    pub fn from_diagonal<T: Into<BigInt> + Clone>(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone().into();
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(BigIntMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows<T: Into<BigInt> + Clone, R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * ncols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != ncols {
                return Err(Error::Shape(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    ncols
                )));
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(BigIntMatrix {
            rows: rows.len(),
            cols: ncols,
            entries,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&BigInt> {
        if row < self.rows && col < self.cols {
            Some(&self.entries[row * self.cols + col])
        } else {
            None
        }
    }

    pub fn row(&self, row: usize) -> &[BigInt] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.row_iter().map(<[BigInt]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        self.row_iter().map(|r| r.iter().sum()).collect()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    pub fn checked_mul(&self, rhs: &BigIntMatrix) -> Result<BigIntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &BigIntMatrix) -> Result<BigIntMatrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &BigIntMatrix) -> Result<BigIntMatrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &BigIntMatrix,
        f: impl Fn(&BigInt, &BigInt) -> BigInt,
    ) -> Result<BigIntMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape(format!(
                "{}x{} and {}x{} differ in shape",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(BigIntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &BigInt) -> BigIntMatrix {
        BigIntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    /// Returns `P M P^T` where `P` maps index `i` to `perm[i]`, i.e. the
    /// entry at `(perm[i], perm[j])` of the result is `M[i][j]`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Result<BigIntMatrix> {
        if !self.is_square() || perm.len() != self.rows {
            return Err(Error::Shape(
                "symmetric permutation needs a square matrix and a matching permutation".into(),
            ));
        }
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(perm[i], perm[j])] = self[(i, j)].clone();
            }
        }
        Ok(out)
    }

    /// Submatrix with one row and one column removed.
    pub fn minor_matrix(&self, skip_row: usize, skip_col: usize) -> BigIntMatrix {
        let mut entries =
            Vec::with_capacity(self.rows.saturating_sub(1) * self.cols.saturating_sub(1));
        for i in (0..self.rows).filter(|&i| i != skip_row) {
            for j in (0..self.cols).filter(|&j| j != skip_col) {
                entries.push(self[(i, j)].clone());
            }
        }
        BigIntMatrix {
            rows: self.rows - usize::from(skip_row < self.rows),
            cols: self.cols - usize::from(skip_col < self.cols),
            entries,
        }
    }

    /// Submatrix picking the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> BigIntMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self[(i, j)].clone());
            }
        }
        BigIntMatrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += factor * row[source]`, touching columns `from..`.
    pub(crate) fn add_row_multiple(
        &mut self,
        target: usize,
        source: usize,
        factor: &BigInt,
        from: usize,
    ) {
        debug_assert_ne!(target, source);
        let cols = self.cols;
        for j in from..cols {
            let s = &self.entries[source * cols + j];
            if !s.is_zero() {
                let delta = s * factor;
                self.entries[target * cols + j] += delta;
            }
        }
    }

    /// `col[target] += factor * col[source]`, touching rows `from..`.
    pub(crate) fn add_col_multiple(
        &mut self,
        target: usize,
        source: usize,
        factor: &BigInt,
        from: usize,
    ) {
        debug_assert_ne!(target, source);
        let cols = self.cols;
        for i in from..self.rows {
            let s = &self.entries[i * cols + source];
            if !s.is_zero() {
                let delta = s * factor;
                self.entries[i * cols + target] += delta;
            }
        }
    }

    pub(crate) fn negate_row(&mut self, row: usize) {
        for x in &mut self.entries[row * self.cols..(row + 1) * self.cols] {
            *x = -std::mem::take(x);
        }
    }
}

impl Index<(usize, usize)> for BigIntMatrix {
    type Output = BigInt;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for BigIntMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for BigIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigIntMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_list().entries(self.row_iter()).finish()
    }
}

impl fmt::Display for BigIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.row_iter() {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &BigIntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = v.div_floor(&prev);
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// Rank over the rationals, by fraction-free elimination.
pub fn rank(m: &BigIntMatrix) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[(i, j)] * &a[(r, c)] - &a[(i, c)] * &a[(r, j)];
                a[(i, j)] = v.div_floor(&prev);
            }
            a[(i, c)] = BigInt::zero();
        }
        prev = a[(r, c)].clone();
        r += 1;
    }
    r
}
