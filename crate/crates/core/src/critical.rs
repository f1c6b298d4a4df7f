//! Critical groups, spanning trees and per-prime elementary divisor data.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{require_prime, valuation};
use crate::error::{Error, Result};
use crate::graph::{laplacian_matrix, Graph};
use crate::matrix::{determinant, rank, BigIntMatrix};
use crate::residue::kernel_dimension_mod;
use crate::smith::{cokernel, smith_normal_form, AbelianGroupDecomposition, SmithDecomposition};

/// Torsion of `Z^V / im(L)` as invariant factors; `free_rank` is the number of
/// connected components when `L` is a graph Laplacian.
pub fn critical_group(laplacian: &BigIntMatrix) -> AbelianGroupDecomposition {
    cokernel(laplacian)
}

/// Number of spanning trees: the principal cofactor of `L` obtained by deleting
/// the first row and column. Zero exactly when `g` is disconnected.
pub fn spanning_tree_count(g: &Graph) -> BigInt {
    if g.vertex_count() == 0 {
        return BigInt::zero();
    }
    let reduced = laplacian_matrix(g).minor_matrix(0, 0);
    determinant(&reduced).expect("principal minor is square")
}

/// Multiplicities `e_i` of `p^i` among the elementary divisors of a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementaryDivisorProfile {
    pub prime: u64,
    /// `multiplicities[i] = e_i`, without trailing zeros.
    pub multiplicities: Vec<usize>,
    /// Rank of the free part: columns minus rank.
    pub kernel_rank: usize,
}

impl ElementaryDivisorProfile {
    pub fn new(prime: u64, multiplicities: Vec<usize>, kernel_rank: usize) -> Self {
        let mut profile = ElementaryDivisorProfile {
            prime,
            multiplicities,
            kernel_rank,
        };
        profile.trim();
        profile
    }

    fn trim(&mut self) {
        while self.multiplicities.last() == Some(&0) {
            self.multiplicities.pop();
        }
    }

    /// Reads valuations off the nonzero diagonal entries of a Smith form.
    pub fn from_smith(snf: &SmithDecomposition, p: u64) -> Result<Self> {
        require_prime(p)?;
        let mut mult = Vec::new();
        for d in snf.diagonal.iter().filter(|d| !d.is_zero()) {
            let i = valuation(d, p)? as usize;
            if mult.len() <= i {
                mult.resize(i + 1, 0);
            }
            mult[i] += 1;
        }
        Ok(ElementaryDivisorProfile::new(
            p,
            mult,
            snf.cols() - snf.rank,
        ))
    }

    pub fn e(&self, i: usize) -> usize {
        self.multiplicities.get(i).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, value: usize) {
        if self.multiplicities.len() <= i {
            self.multiplicities.resize(i + 1, 0);
        }
        self.multiplicities[i] = value;
        self.trim();
    }

    /// Largest `i` with `e_i > 0`, or 0.
    pub fn max_exponent(&self) -> usize {
        self.multiplicities.len().saturating_sub(1)
    }

    /// `sum_i e_i`.
    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// `sum_i i * e_i`, the p-adic valuation of the torsion order.
    pub fn valuation_sum(&self) -> usize {
        self.multiplicities
            .iter()
            .enumerate()
            .map(|(i, e)| i * e)
            .sum()
    }

    pub fn columns(&self) -> usize {
        self.total() + self.kernel_rank
    }

    /// Nonzero `(i, e_i)` pairs.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.multiplicities
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i, e))
    }

    /// Orders `p^i` of the cyclic factors of the Sylow `p`-subgroup, descending.
    pub fn sylow_factors(&self) -> Vec<BigInt> {
        let p = BigInt::from(self.prime);
        let mut out = Vec::new();
        for (i, e) in self.nonzero().filter(|&(i, _)| i > 0) {
            let q = num_traits::pow::pow(p.clone(), i);
            out.extend(std::iter::repeat_n(q, e));
        }
        out.reverse();
        out
    }
}

/// Elementary divisor multiplicities of `m` at `p`, via the Smith form.
pub fn p_elementary_divisors(m: &BigIntMatrix, p: u64) -> Result<ElementaryDivisorProfile> {
    require_prime(p)?;
    ElementaryDivisorProfile::from_smith(&smith_normal_form(m, false), p)
}

/// Regroups per-prime elementary divisors into an ascending invariant-factor
/// chain. The `k`-th largest invariant factor is the product over primes of
/// the `k`-th largest prime-power factor.
pub fn invariant_factors_from_profiles(profiles: &[ElementaryDivisorProfile]) -> Vec<BigInt> {
    let columns: Vec<Vec<BigInt>> = profiles.iter().map(|p| p.sylow_factors()).collect();
    let len = columns.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors: Vec<BigInt> = (0..len)
        .map(|k| {
            columns
                .iter()
                .filter_map(|c| c.get(k))
                .fold(BigInt::one(), |acc, q| acc * q)
        })
        .collect();
    factors.reverse();
    factors
}

/// `dims[i] = dim_F of the reduction mod p of {x : p^i | M x}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MbarFiltration {
    pub prime: u64,
    pub dims: Vec<usize>,
    /// Dimension of the reduction of `Ker(M)`.
    pub kernel_dim: usize,
}

impl MbarFiltration {
    pub fn i_max(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn is_monotone(&self) -> bool {
        self.dims.windows(2).all(|w| w[0] >= w[1])
            && self.dims.iter().all(|&d| d >= self.kernel_dim)
    }
}

/// Computes the filtration through congruences mod `p^i`, without using the
/// Smith form.
pub fn mbar_filtration(m: &BigIntMatrix, p: u64, i_max: usize) -> Result<MbarFiltration> {
    require_prime(p)?;
    if i_max == 0 {
        return Err(Error::InvalidArgument("i_max must be at least 1".into()));
    }
    let mut dims = Vec::with_capacity(i_max + 1);
    dims.push(m.cols());
    for i in 1..=i_max {
        let e = u32::try_from(i)
            .map_err(|_| Error::InvalidArgument(format!("i_max = {i_max} too large")))?;
        dims.push(kernel_dimension_mod(m, p, e)?);
    }
    Ok(MbarFiltration {
        prime: p,
        dims,
        kernel_dim: m.cols() - rank(m),
    })
}

/// Checks `dims[i] = kernel_dim + sum_{j >= i} e_j` for every `i <= i_max`.
pub fn verify_mdim_identity(
    profile: &ElementaryDivisorProfile,
    filt: &MbarFiltration,
) -> Result<bool> {
    if profile.prime != filt.prime {
        return Err(Error::PrimeMismatch {
            profile: profile.prime,
            filtration: filt.prime,
        });
    }
    Ok(filt.dims.iter().enumerate().all(|(i, &d)| {
        let tail: usize = profile.multiplicities.iter().skip(i).sum();
        d == filt.kernel_dim + tail
    }))
}

/// Checks the eigenspace lower bound `dims[v_p(u)] >= b` for an integer
/// eigenvalue `u` of `L(KG(n, 2))` whose eigenspace has dimension `b`.
pub fn verify_eigenspace_bound(
    n: u64,
    p: u64,
    u: &BigInt,
    b: usize,
    filt: &MbarFiltration,
) -> Result<bool> {
    require_prime(p)?;
    if filt.prime != p {
        return Err(Error::InvalidArgument(format!(
            "filtration is at p = {}, bound requested at p = {p}",
            filt.prime
        )));
    }
    let vertices = crate::arith::binomial(n, 2) as usize;
    if filt.dims[0] != vertices {
        return Err(Error::Shape(format!(
            "filtration has {} columns, KG({n},2) has {vertices} vertices",
            filt.dims[0]
        )));
    }
    let a = valuation(u, p)? as usize;
    let dim = filt.dims.get(a).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "v_{p}(u) = {a} exceeds filtration depth {}",
            filt.i_max()
        ))
    })?;
    Ok(*dim >= b)
}
