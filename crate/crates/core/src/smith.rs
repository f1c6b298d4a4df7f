//! Smith normal form over the integers and the cokernel it describes.
//!
//! The elimination always pivots on an entry of minimal absolute value in the
//! remaining submatrix. Each pivot is swept against its row and column until
//! both are clear, and then against the rest of the submatrix until it divides
//! every remaining entry. Once a pivot is fixed it is never touched again, so
//! the finished diagonal is a divisibility chain.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::{determinant, BigIntMatrix};

/// Result of [`smith_normal_form`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    /// `s_{1,1}, ..., s_{k,k}` with `k = min(rows, cols)`, all nonnegative.
    pub diagonal: Vec<BigInt>,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
    /// `(U, V)` with `U * M * V = S`, when requested.
    pub transforms: Option<(BigIntMatrix, BigIntMatrix)>,
    rows: usize,
    cols: usize,
}

impl SmithDecomposition {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// The full `rows x cols` matrix `S`.
    pub fn diagonal_matrix(&self) -> BigIntMatrix {
        let mut s = BigIntMatrix::zeros(self.rows, self.cols);
        for (i, d) in self.diagonal.iter().enumerate() {
            s[(i, i)] = d.clone();
        }
        s
    }

    /// True when each nonzero entry divides the next and zeros trail.
    pub fn is_divisibility_chain(&self) -> bool {
        let nonzero = self.diagonal.iter().take_while(|d| !d.is_zero()).count();
        nonzero == self.rank
            && self.diagonal[self.rank..].iter().all(Zero::is_zero)
            && self.diagonal.iter().all(|d| !d.is_negative())
            && self.diagonal[..self.rank]
                .windows(2)
                .all(|w| (&w[1] % &w[0]).is_zero())
    }

    /// Checks `U * M * V = S` and `|det U| = |det V| = 1`. Returns false when
    /// no transforms were computed.
    pub fn certify(&self, m: &BigIntMatrix) -> bool {
        let Some((u, v)) = &self.transforms else {
            return false;
        };
        let unimodular = |x: &BigIntMatrix| determinant(x).is_ok_and(|d| d.abs().is_one());
        let product = u.checked_mul(m).and_then(|um| um.checked_mul(v));
        matches!(product, Ok(p) if p == self.diagonal_matrix()) && unimodular(u) && unimodular(v)
    }

    /// The cokernel `Z^rows / im(M)` read off the diagonal.
    pub fn cokernel(&self) -> AbelianGroupDecomposition {
        AbelianGroupDecomposition {
            invariant_factors: self
                .diagonal
                .iter()
                .filter(|d| **d > BigInt::one())
                .cloned()
                .collect(),
            free_rank: self.rows - self.rank,
        }
    }
}

/// A finitely generated abelian group `Z_{d_1} + ... + Z_{d_k} + Z^free_rank`
/// with `1 < d_1 | d_2 | ... | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroupDecomposition {
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianGroupDecomposition {
    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_torsion_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn is_divisibility_chain(&self) -> bool {
        self.invariant_factors.iter().all(|d| *d > BigInt::one())
            && self
                .invariant_factors
                .windows(2)
                .all(|w| (&w[1] % &w[0]).is_zero())
    }
}

impl fmt::Display for AbelianGroupDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z_{d}"))
            .collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

struct Workspace {
    a: BigIntMatrix,
    u: Option<BigIntMatrix>,
    v: Option<BigIntMatrix>,
}

impl Workspace {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
    }

    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt, from: usize) {
        self.a.add_row_multiple(target, source, factor, from);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(target, source, factor, 0);
        }
    }

    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt, from: usize) {
        self.a.add_col_multiple(target, source, factor, from);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(target, source, factor, 0);
        }
    }

    fn negate_row(&mut self, row: usize) {
        self.a.negate_row(row);
        if let Some(u) = &mut self.u {
            u.negate_row(row);
        }
    }

    /// Position of a nonzero entry of least absolute value in `a[t.., t..]`.
    fn smallest_in_submatrix(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), &BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(_, b)| x.magnitude() < b.magnitude()) {
                    best = Some(((i, j), x));
                    if x.magnitude().is_one() {
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(pos, _)| pos)
    }

    /// Position of a nonzero entry of least absolute value in row `t` or
    /// column `t` (at or beyond the pivot).
    fn smallest_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let mut best_mag = self.a[(t, t)].magnitude().clone();
        let mut consider = |pos: (usize, usize), x: &BigInt| {
            if !x.is_zero() && (best_mag.is_zero() || x.magnitude() < &best_mag) {
                best = pos;
                best_mag = x.magnitude().clone();
            }
        };
        for i in t + 1..self.a.rows() {
            consider((i, t), &self.a[(i, t)]);
        }
        for j in t + 1..self.a.cols() {
            consider((t, j), &self.a[(t, j)]);
        }
        best
    }

    /// Reduces column `t` below the pivot and row `t` right of it. Returns true
    /// if every such entry is now zero.
    fn sweep_cross(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.a.rows() {
            if self.a[(i, t)].is_zero() {
                continue;
            }
            let q = self.a[(i, t)].div_floor(&self.a[(t, t)]);
            if !q.is_zero() {
                self.add_row_multiple(i, t, &-q, t);
            }
            clean &= self.a[(i, t)].is_zero();
        }
        for j in t + 1..self.a.cols() {
            if self.a[(t, j)].is_zero() {
                continue;
            }
            let q = self.a[(t, j)].div_floor(&self.a[(t, t)]);
            if !q.is_zero() {
                self.add_col_multiple(j, t, &-q, t);
            }
            clean &= self.a[(t, j)].is_zero();
        }
        clean
    }

    /// First row below `t` holding an entry the pivot does not divide.
    fn non_divisible_row(&self, t: usize) -> Option<usize> {
        let pivot = &self.a[(t, t)];
        (t + 1..self.a.rows()).find(|&i| {
            (t + 1..self.a.cols()).any(|j| {
                let x = &self.a[(i, j)];
                !x.is_zero() && !(x % pivot).is_zero()
            })
        })
    }
}

/// Smith normal form of `m`. With `want_transforms`, also returns unimodular
/// `U`, `V` satisfying `U * m * V = S`.
pub fn smith_normal_form(m: &BigIntMatrix, want_transforms: bool) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut ws = Workspace {
        a: m.clone(),
        u: want_transforms.then(|| BigIntMatrix::identity(rows)),
        v: want_transforms.then(|| BigIntMatrix::identity(cols)),
    };

    let steps = rows.min(cols);
    let mut rank = 0;
    for t in 0..steps {
        let Some((pi, pj)) = ws.smallest_in_submatrix(t) else {
            break;
        };
        ws.swap_rows(t, pi);
        ws.swap_cols(t, pj);
        loop {
            if !ws.sweep_cross(t) {
                let (i, j) = ws.smallest_in_cross(t);
                ws.swap_rows(t, i);
                ws.swap_cols(t, j);
                continue;
            }
            match ws.non_divisible_row(t) {
                // Pulling the offending row into row t leaves the pivot in
                // place and exposes a remainder on the next sweep.
                Some(i) => ws.add_row_multiple(t, i, &BigInt::one(), t),
                None => break,
            }
        }
        if ws.a[(t, t)].is_negative() {
            ws.negate_row(t);
        }
        rank = t + 1;
    }

    SmithDecomposition {
        diagonal: ws.a.diagonal(),
        rank,
        transforms: ws.u.zip(ws.v),
        rows,
        cols,
    }
}

/// `Z^rows / im(m)` in invariant-factor form.
pub fn cokernel(m: &BigIntMatrix) -> AbelianGroupDecomposition {
    smith_normal_form(m, false).cokernel()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().copied().map(BigInt::from).collect()
    }

    fn m(rows: &[&[i64]]) -> BigIntMatrix {
        BigIntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn identity_is_its_own_normal_form() {
        let snf = smith_normal_form(&BigIntMatrix::identity(3), false);
        assert_eq!(snf.diagonal, ints(&[1, 1, 1]));
        assert_eq!(snf.rank, 3);
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the diagonal is (2, 4).
        let snf = smith_normal_form(&m(&[&[2, 4], &[6, 8]]), true);
        assert_eq!(snf.diagonal, ints(&[2, 4]));
        assert!(snf.certify(&m(&[&[2, 4], &[6, 8]])));
    }

    #[test]
    fn zero_matrix() {
        let snf = smith_normal_form(&BigIntMatrix::zeros(2, 3), true);
        assert_eq!(snf.diagonal, ints(&[0, 0]));
        assert_eq!(snf.rank, 0);
        assert!(snf.certify(&BigIntMatrix::zeros(2, 3)));
    }

    #[test]
    fn divisibility_is_restored_across_the_diagonal() {
        // diag(2, 3) is diagonal but not a chain; normal form is (1, 6).
        let a = BigIntMatrix::from_diagonal(&[2, 3]);
        let snf = smith_normal_form(&a, true);
        assert_eq!(snf.diagonal, ints(&[1, 6]));
        assert!(snf.certify(&a));
        assert!(snf.is_divisibility_chain());
    }

    #[test]
    fn rectangular_inputs() {
        let a = m(&[&[4, 6, 8], &[10, 12, 14]]);
        // gcd of entries 2, gcd of 2x2 minors (-12, -24, -12) is 12
        let snf = smith_normal_form(&a, true);
        assert_eq!(snf.diagonal, ints(&[2, 6]));
        assert!(snf.certify(&a));
        let t = a.transpose();
        let snf_t = smith_normal_form(&t, true);
        assert_eq!(snf_t.diagonal, ints(&[2, 6]));
        assert!(snf_t.certify(&t));
    }

    #[test]
    fn cokernel_examples() {
        let g = cokernel(&BigIntMatrix::from_diagonal(&[1, 2, 6]));
        assert_eq!(g.invariant_factors, ints(&[2, 6]));
        assert_eq!(g.free_rank, 0);

        let g = cokernel(&BigIntMatrix::zeros(2, 2));
        assert!(g.invariant_factors.is_empty());
        assert_eq!(g.free_rank, 2);

        let g = cokernel(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(g.invariant_factors, ints(&[2, 4]));
        assert_eq!(g.free_rank, 0);
        assert_eq!(g.to_string(), "Z_2 + Z_4");
    }

    #[test]
    fn cokernel_of_wide_matrix_counts_rows() {
        // 1x3 map onto Z: surjective, so trivial cokernel.
        let g = cokernel(&m(&[&[2, 3, 0]]));
        assert!(g.is_torsion_trivial());
        assert_eq!(g.free_rank, 0);
    }

    #[test]
    fn certify_rejects_missing_or_wrong_transforms() {
        let a = m(&[&[2, 4], &[6, 8]]);
        assert!(!smith_normal_form(&a, false).certify(&a));
        let mut snf = smith_normal_form(&a, true);
        snf.diagonal[1] = BigInt::from(8);
        assert!(!snf.certify(&a));
    }
}
