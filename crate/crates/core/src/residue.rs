//! Row reduction over the residue ring `Z/p^e`.
//!
//! `Z/p^e` is not a field, so ordinary echelon form does not pin down solution
//! sets. A Howell form does: besides the echelon rows it carries, for every
//! pivot `p^k`, the row multiplied by `p^(e-k)`. That row vanishes in the pivot
//! column and is reduced further down, so every vector of the row span whose
//! leading `c` entries vanish is a combination of the form rows with pivot
//! column at least `c`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::require_prime;
use crate::error::{Error, Result};
use crate::matrix::BigIntMatrix;

/// The ring `Z/p^e` with `p^e` fitting in a machine word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePowerRing {
    p: u64,
    e: u32,
    modulus: u64,
}

impl PrimePowerRing {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        require_prime(p)?;
        if e == 0 {
            return Err(Error::InvalidArgument("exponent must be at least 1".into()));
        }
        let modulus = p.checked_pow(e).filter(|&q| q < 1 << 62).ok_or_else(|| {
            Error::InvalidArgument(format!("{p}^{e} does not fit in a machine word"))
        })?;
        Ok(PrimePowerRing { p, e, modulus })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.modulus))
            .to_u64()
            .expect("residue fits in u64")
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    /// Splits a nonzero residue as `p^k * unit`.
    fn split(&self, x: u64) -> (u32, u64) {
        debug_assert_ne!(x, 0);
        let mut k = 0;
        let mut u = x;
        while u % self.p == 0 {
            u /= self.p;
            k += 1;
        }
        (k, u)
    }

    fn inverse(&self, unit: u64) -> u64 {
        let (mut r0, mut r1) = (self.modulus as i128, unit as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "{unit} is not a unit mod {}", self.modulus);
        t0.rem_euclid(self.modulus as i128) as u64
    }
}

/// Howell form of a matrix over `Z/p^e`: rows in echelon order, each pivot a
/// power of `p`, entries above a pivot `p^k` reduced below `p^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HowellForm {
    pub ring: PrimePowerRing,
    pub rows: Vec<Vec<u64>>,
    /// Pivot column of each row.
    pub pivots: Vec<usize>,
}

impl HowellForm {
    pub fn compute(rows: Vec<Vec<u64>>, ring: PrimePowerRing) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut pending: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x % ring.modulus).collect::<Vec<_>>())
            .filter(|r| r.iter().any(|&x| x != 0))
            .collect();
        let mut basis: Vec<Vec<u64>> = Vec::new();
        let mut pivots = Vec::new();

        for c in 0..ncols {
            let Some(best) = pending
                .iter()
                .enumerate()
                .filter(|(_, r)| r[c] != 0)
                .min_by_key(|(_, r)| ring.split(r[c]).0)
                .map(|(i, _)| i)
            else {
                continue;
            };
            let mut pivot = pending.swap_remove(best);
            let (k, unit) = ring.split(pivot[c]);
            let inv = ring.inverse(unit);
            for x in &mut pivot[c..] {
                *x = ring.mul(*x, inv);
            }
            let pk = pivot[c];

            for row in pending.iter_mut() {
                if row[c] != 0 {
                    // valuation of row[c] is at least k, so this is exact
                    let q = row[c] / pk;
                    eliminate(&ring, row, &pivot, q, c);
                }
            }
            pending.retain(|r| r.iter().any(|&x| x != 0));

            for row in basis.iter_mut() {
                if row[c] >= pk {
                    let q = row[c] / pk;
                    eliminate(&ring, row, &pivot, q, c);
                }
            }

            if k > 0 {
                let annihilator = ring.p.pow(ring.e - k);
                let extra: Vec<u64> = pivot.iter().map(|&x| ring.mul(x, annihilator)).collect();
                if extra.iter().any(|&x| x != 0) {
                    pending.push(extra);
                }
            }
            basis.push(pivot);
            pivots.push(c);
        }

        HowellForm {
            ring,
            rows: basis,
            pivots,
        }
    }
}

/// `row -= q * pivot` on columns `from..`.
fn eliminate(ring: &PrimePowerRing, row: &mut [u64], pivot: &[u64], q: u64, from: usize) {
    for j in from..row.len() {
        if pivot[j] != 0 {
            row[j] = ring.sub(row[j], ring.mul(q, pivot[j]));
        }
    }
}

/// Howell form of the row space of `m` reduced mod `p^e`.
pub fn howell_form(m: &BigIntMatrix, p: u64, e: u32) -> Result<HowellForm> {
    let ring = PrimePowerRing::new(p, e)?;
    let rows = m
        .row_iter()
        .map(|r| r.iter().map(|x| ring.reduce(x)).collect())
        .collect();
    Ok(HowellForm::compute(rows, ring))
}

/// Generators of `{x in (Z/p^e)^cols : m x = 0 mod p^e}`.
///
/// Row-reduces `[m^T | I]`; the form rows whose first `rows(m)` entries vanish
/// carry kernel generators in their trailing block.
pub fn kernel_mod(m: &BigIntMatrix, p: u64, e: u32) -> Result<Vec<Vec<u64>>> {
    let ring = PrimePowerRing::new(p, e)?;
    let (rows, cols) = (m.rows(), m.cols());
    let augmented: Vec<Vec<u64>> = (0..cols)
        .map(|j| {
            let mut r: Vec<u64> = (0..rows).map(|i| ring.reduce(&m[(i, j)])).collect();
            r.extend((0..cols).map(|k| u64::from(k == j)));
            r
        })
        .collect();
    let form = HowellForm::compute(augmented, ring);
    Ok(form
        .rows
        .into_iter()
        .zip(form.pivots)
        .filter(|&(_, c)| c >= rows)
        .map(|(r, _)| r[rows..].to_vec())
        .collect())
}

/// Dimension over `F_p` of the reduction mod `p` of the solution set of
/// `m x = 0 mod p^e`, i.e. of `{x : p^e | m x}` reduced mod `p`.
pub fn kernel_dimension_mod(m: &BigIntMatrix, p: u64, e: u32) -> Result<usize> {
    let generators = kernel_mod(m, p, e)?;
    Ok(rank_mod_p(generators, p))
}

/// Rank over `F_p` of integer vectors reduced mod `p`.
pub fn rank_mod_p(vectors: Vec<Vec<u64>>, p: u64) -> usize {
    let mut rows: Vec<Vec<u64>> = vectors
        .into_iter()
        .map(|v| v.into_iter().map(|x| x % p).collect())
        .collect();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = inverse_mod_prime(rows[rank][c], p);
        for x in &mut rows[rank][c..] {
            *x = ((*x as u128 * inv as u128) % p as u128) as u64;
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let q = row[c];
                for j in c..ncols {
                    let sub = ((q as u128 * pivot[j] as u128) % p as u128) as u64;
                    row[j] = (row[j] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn inverse_mod_prime(a: u64, p: u64) -> u64 {
    let mut result = 1u128;
    let mut base = a as u128 % p as u128;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u128;
        }
        base = base * base % p as u128;
        exp >>= 1;
    }
    result as u64
}
