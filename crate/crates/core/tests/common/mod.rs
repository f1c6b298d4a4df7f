//! Brute-force oracles shared by the integration tests. Nothing here calls the
//! elimination routines under test.

#![allow(dead_code)]

use std::collections::HashSet;

use kneser_sandpile::{BigInt, BigIntMatrix};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;

/// Determinant by expansion over all permutations.
pub fn leibniz_det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = BigInt::zero();
    permute(&mut perm, 0, &mut |p| {
        let mut term = BigInt::from(permutation_sign(p));
        for (i, &j) in p.iter().enumerate() {
            term *= rows[i][j];
        }
        total += term;
    });
    total
}

fn permute(v: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, visit);
        v.swap(k, i);
    }
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if k > n {
        return vec![];
    }
    let mut out = Vec::new();
    for mut rest in combinations(n - 1, k - 1) {
        rest.push(n - 1);
        out.push(rest);
    }
    out.extend(combinations(n - 1, k));
    out
}

/// `d_k` = gcd of all `k x k` minors, for `k = 1..=min(m, n)`.
pub fn determinantal_divisors(a: &[Vec<i64>]) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    (1..=m.min(n))
        .map(|k| {
            let mut g = BigInt::zero();
            for rs in combinations(m, k) {
                for cs in combinations(n, k) {
                    let sub: Vec<Vec<i64>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| a[i][j]).collect())
                        .collect();
                    g = g.gcd(&leibniz_det(&sub));
                }
            }
            g
        })
        .collect()
}

/// Smith diagonal predicted by determinantal divisors: `s_k = d_k / d_{k-1}`
/// while `d_k != 0`, zero afterwards.
pub fn smith_diagonal_from_minors(a: &[Vec<i64>]) -> Vec<BigInt> {
    let d = determinantal_divisors(a);
    let mut out = Vec::with_capacity(d.len());
    let mut prev = BigInt::from(1);
    for dk in d {
        if dk.is_zero() || prev.is_zero() {
            out.push(BigInt::zero());
            prev = BigInt::zero();
        } else {
            out.push(&dk / &prev);
            prev = dk;
        }
    }
    out
}

/// Dimension over `F_p` of `{x mod p : x in (Z/p^e)^n, a x = 0 mod p^e}` by
/// enumerating every `x`. The image is an `F_p`-subspace, so its size is a
/// power of `p`.
pub fn kernel_dimension_by_enumeration(a: &[Vec<i64>], p: u64, e: u32) -> usize {
    let q = p.pow(e) as i64;
    let n = a.first().map_or(0, Vec::len);
    let mut images = HashSet::new();
    let mut x = vec![0i64; n];
    loop {
        let solves = a.iter().all(|row| {
            row.iter()
                .zip(&x)
                .map(|(c, v)| c * v)
                .sum::<i64>()
                .rem_euclid(q)
                == 0
        });
        if solves {
            images.insert(x.iter().map(|v| v.rem_euclid(p as i64)).collect::<Vec<_>>());
        }
        // odometer
        let mut i = 0;
        while i < n {
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let mut size = images.len();
    let mut dim = 0;
    while size > 1 {
        assert_eq!(size % p as usize, 0, "image is not a subspace");
        size /= p as usize;
        dim += 1;
    }
    dim
}

pub fn random_matrix(rng: &mut impl Rng, max_dim: usize, bound: i64) -> Vec<Vec<i64>> {
    let m = rng.gen_range(1..=max_dim);
    let n = rng.gen_range(1..=max_dim);
    // a share of low-rank and sparse inputs
    let density: f64 = if rng.gen_bool(0.3) { 0.4 } else { 1.0 };
    let mut a: Vec<Vec<i64>> = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(density) {
                        rng.gen_range(-bound..=bound)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    if m > 1 && rng.gen_bool(0.2) {
        let c: i64 = rng.gen_range(-3..=3);
        a[m - 1] = a[0].iter().map(|x| x * c).collect();
    }
    a
}

pub fn to_matrix(a: &[Vec<i64>]) -> BigIntMatrix {
    if a.is_empty() {
        return BigIntMatrix::zeros(0, 0);
    }
    BigIntMatrix::from_rows(a).unwrap()
}

pub fn abs_is_one(x: &BigInt) -> bool {
    x.abs() == BigInt::from(1)
}
