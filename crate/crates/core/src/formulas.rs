//! Closed forms for the Kneser graph `KG(n, 2)`, `n >= 5`.
//!
//! Spectral data, the spanning-tree order, the per-prime elementary divisor
//! tables with their case split, the generic "bounds force multiplicities"
//! lemma, and the invariant factors of the critical group.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{pow_big, require_prime, valuation_u64};
use crate::critical::{ElementaryDivisorProfile, MbarFiltration};
use crate::error::{Error, Result};
use crate::graph::{kneser_graph, laplacian_matrix, srg_parameters};
use crate::matrix::BigIntMatrix;

pub use crate::arith::valuation;

fn require_n(n: u64) -> Result<()> {
    if n < 5 {
        Err(Error::OutOfRange(n))
    } else {
        Ok(())
    }
}

/// Laplacian spectrum of `KG(n, 2)`: `r` with multiplicity `f`, `s` with
/// multiplicity `g`, and a simple zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpectralData {
    pub n: u64,
    pub r: u64,
    pub s: u64,
    pub f: u64,
    pub g: u64,
}

impl SpectralData {
    pub fn vertex_count(&self) -> u64 {
        self.f + self.g + 1
    }
}

pub fn spectral_data(n: u64) -> Result<SpectralData> {
    require_n(n)?;
    Ok(SpectralData {
        n,
        r: n * (n - 3) / 2,
        s: (n - 4) * (n - 1) / 2,
        f: n - 1,
        g: n * (n - 3) / 2,
    })
}

/// `|K(KG(n,2))| = n^(f-1) (n-1)^(g-1) (n-3)^f (n-4)^g / 2^(f+g-1)`.
pub fn critical_group_order(n: u64) -> Result<BigInt> {
    let sd = spectral_data(n)?;
    let numerator = pow_big(n, sd.f - 1)
        * pow_big(n - 1, sd.g - 1)
        * pow_big(n - 3, sd.f)
        * pow_big(n - 4, sd.g);
    let denominator = pow_big(2, sd.f + sd.g - 1);
    debug_assert!((&numerator % &denominator).is_zero());
    Ok(numerator / denominator)
}

/// `v_p(|K(KG(n,2))|)` from the factored order, without forming it.
pub fn order_valuation(n: u64, p: u64) -> Result<u64> {
    let sd = spectral_data(n)?;
    require_prime(p)?;
    let v = |m: u64| valuation_u64(m, p).map(u64::from);
    let total = (sd.f - 1) * v(n)? + (sd.g - 1) * v(n - 1)? + sd.f * v(n - 3)? + sd.g * v(n - 4)?;
    Ok(if p == 2 {
        total - (sd.f + sd.g - 1)
    } else {
        total
    })
}

/// Checks `(L - rI)(L - sI) = mu J` for the given Laplacian and constants.
pub fn laplacian_identity_holds(
    laplacian: &BigIntMatrix,
    r: &BigInt,
    s: &BigInt,
    mu: &BigInt,
) -> Result<bool> {
    let v = laplacian.rows();
    let id = BigIntMatrix::identity(v);
    let left = laplacian.checked_sub(&id.scale(r))?;
    let right = laplacian.checked_sub(&id.scale(s))?;
    Ok(left.checked_mul(&right)? == BigIntMatrix::ones(v, v).scale(mu))
}

/// Checks the quadratic Laplacian identity on the constructed `KG(n, 2)`.
pub fn verify_laplacian_identity(n: u64) -> Result<bool> {
    let sd = spectral_data(n)?;
    let prm = srg_parameters(n)?;
    let l = laplacian_matrix(&kneser_graph(n as usize, 2)?);
    laplacian_identity_holds(
        &l,
        &BigInt::from(sd.r),
        &BigInt::from(sd.s),
        &BigInt::from(prm.mu),
    )
}

/// The arms of the per-prime case analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    /// `p > 3`, `v_p(n) = a`.
    C1a,
    /// `p > 3`, `v_p(n-1) = a`.
    C1b,
    /// `p > 3`, `v_p(n-3) = a`.
    C1c,
    /// `p > 3`, `v_p(n-4) = a`.
    C1d,
    /// `p = 3`, `v_3(n-1) = a > 1`, `v_3(n-4) = 1`.
    C2a,
    /// `p = 3`, `v_3(n-4) = a > 1`, `v_3(n-1) = 1`.
    C2b,
    /// `p = 3`, `v_3(n-1) = v_3(n-4) = 1`.
    C2c,
    /// `p = 3`, `v_3(n) = a > 1`, `v_3(n-3) = 1`.
    C2d,
    /// `p = 3`, `v_3(n-3) = a > 1`, `v_3(n) = 1`.
    C2e,
    /// `p = 3`, `v_3(n) = v_3(n-3) = 1`.
    C2f,
    /// `p = 2`, `n = 3 mod 4`, `a = v_2(n-3)`.
    C3a,
    /// `p = 2`, `n = 2 mod 4`: the order is odd.
    C3b,
    /// `p = 2`, `n = 1 mod 4`, `a = v_2(n-1)`.
    C3c,
    /// `p = 2`, `v_2(n) = a > 2`, `v_2(n-4) = 2`.
    C3dI,
    /// `p = 2`, `v_2(n-4) = a > 2`, `v_2(n) = 2`.
    C3dII,
    /// `p = 2`, `v_2(n) = v_2(n-4) = 2`. Impossible.
    C3dIII,
}

impl Case {
    pub fn label(self) -> &'static str {
        match self {
            Case::C1a => "Case 1a",
            Case::C1b => "Case 1b",
            Case::C1c => "Case 1c",
            Case::C1d => "Case 1d",
            Case::C2a => "Case 2a",
            Case::C2b => "Case 2b",
            Case::C2c => "Case 2c",
            Case::C2d => "Case 2d",
            Case::C2e => "Case 2e",
            Case::C2f => "Case 2f",
            Case::C3a => "Case 3a",
            Case::C3b => "Case 3b",
            Case::C3c => "Case 3c",
            Case::C3dI => "Case 3 d-i",
            Case::C3dII => "Case 3 d-ii",
            Case::C3dIII => "Case 3 d-iii",
        }
    }

    pub const ALL: [Case; 16] = [
        Case::C1a,
        Case::C1b,
        Case::C1c,
        Case::C1d,
        Case::C2a,
        Case::C2b,
        Case::C2c,
        Case::C2d,
        Case::C2e,
        Case::C2f,
        Case::C3a,
        Case::C3b,
        Case::C3c,
        Case::C3dI,
        Case::C3dII,
        Case::C3dIII,
    ];
}

/// A selected arm together with its parameter `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Branch {
    pub case: Case,
    pub a: u32,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.case {
            Case::C2c | Case::C2f | Case::C3b => f.write_str(self.case.label()),
            _ => write!(f, "{}, a={}", self.case.label(), self.a),
        }
    }
}

struct Valuations {
    n: u32,
    n1: u32,
    n3: u32,
    n4: u32,
}

/// Selects the arm of the case analysis for `(n, p)`.
///
/// Every arm is a guard on the valuations of `n, n-1, n-3, n-4`; exactly one
/// must fire. The companion valuations each arm implies are checked too.
pub fn select_branch(n: u64, p: u64) -> Result<Branch> {
    require_n(n)?;
    require_prime(p)?;
    let v = |m: u64| valuation_u64(m, p);
    let val = Valuations {
        n: v(n)?,
        n1: v(n - 1)?,
        n3: v(n - 3)?,
        n4: v(n - 4)?,
    };

    let arms: Vec<(Case, bool, u32)> = match p {
        2 => vec![
            (Case::C3a, n % 4 == 3, val.n3),
            (Case::C3b, n % 4 == 2, 0),
            (Case::C3c, n % 4 == 1, val.n1),
            (Case::C3dI, n % 4 == 0 && val.n > 2, val.n),
            (Case::C3dII, n % 4 == 0 && val.n4 > 2, val.n4),
            (Case::C3dIII, val.n == 2 && val.n4 == 2, 2),
        ],
        3 => vec![
            (Case::C2a, val.n1 > 1, val.n1),
            (Case::C2b, val.n4 > 1, val.n4),
            (Case::C2c, val.n1 == 1 && val.n4 == 1, 1),
            (Case::C2d, val.n > 1, val.n),
            (Case::C2e, val.n3 > 1, val.n3),
            (Case::C2f, val.n == 1 && val.n3 == 1, 1),
        ],
        _ => vec![
            (Case::C1a, val.n > 0, val.n),
            (Case::C1b, val.n1 > 0, val.n1),
            (Case::C1c, val.n3 > 0, val.n3),
            (Case::C1d, val.n4 > 0, val.n4),
        ],
    };

    let fired: Vec<Branch> = arms
        .into_iter()
        .filter(|&(_, guard, _)| guard)
        .map(|(case, _, a)| Branch { case, a })
        .collect();
    let branch = match fired[..] {
        [] => return Err(Error::PrimeDoesNotDivide { n, p }),
        [b] => b,
        _ => {
            let labels: Vec<&str> = fired.iter().map(|b| b.case.label()).collect();
            return Err(Error::Dispatch(format!(
                "n = {n}, p = {p}: several arms fired: {}",
                labels.join(", ")
            )));
        }
    };

    let companion_ok = match branch.case {
        Case::C3dIII => {
            return Err(Error::Dispatch(format!(
                "n = {n}: Case 3 d-iii selected, which cannot occur"
            )))
        }
        Case::C3a => branch.a > 1 && val.n1 == 1,
        Case::C3c => branch.a > 1 && val.n3 == 1,
        Case::C3dI => val.n4 == 2,
        Case::C3dII => val.n == 2,
        Case::C3b => val.n == 1 && val.n4 == 1,
        Case::C2a => val.n4 == 1,
        Case::C2b => val.n1 == 1,
        Case::C2d => val.n3 == 1,
        Case::C2e => val.n == 1,
        _ => true,
    };
    if !companion_ok {
        return Err(Error::Dispatch(format!(
            "n = {n}, p = {p}: valuations contradict {}",
            branch.case.label()
        )));
    }
    Ok(branch)
}

/// The multiplicity table of an arm, as `(i, e_i)` pairs.
fn branch_table(branch: Branch, sd: &SpectralData) -> Vec<(usize, u64)> {
    let a = branch.a as usize;
    let (f, g) = (sd.f, sd.g);
    match branch.case {
        Case::C1a => vec![(a, f - 1), (0, g + 1)],
        Case::C1b => vec![(a, g - 1), (0, f + 1)],
        Case::C1c => vec![(a, f), (0, g)],
        Case::C1d => vec![(a, g), (0, f)],
        Case::C2a => vec![(1, 1), (a + 1, g - 1), (0, f)],
        Case::C2b => vec![(a, 1), (a + 1, g - 1), (0, f)],
        Case::C2c => vec![(1, 1), (2, g - 1), (0, f)],
        Case::C2d => vec![(1, 1), (a + 1, f - 1), (0, g)],
        Case::C2e => vec![(a, 1), (a + 1, f - 1), (0, g)],
        Case::C2f => vec![(1, 1), (2, f - 1), (0, g)],
        Case::C3a => vec![(a - 1, f), (0, g)],
        Case::C3b => vec![(0, f + g)],
        Case::C3c => vec![(a - 1, g - 1), (0, f + 1)],
        Case::C3dI => vec![(1, g + 1 - f), (a, f - 1), (0, f)],
        Case::C3dII => vec![(a - 1, g + 1 - f), (a, f - 1), (0, f)],
        Case::C3dIII => unreachable!("rejected by select_branch"),
    }
}

fn profile_from_table(p: u64, table: &[(usize, u64)]) -> ElementaryDivisorProfile {
    let mut profile = ElementaryDivisorProfile::new(p, Vec::new(), 1);
    for &(i, e) in table {
        profile.set(i, profile.e(i) + e as usize);
    }
    profile
}

/// Predicted elementary divisor multiplicities of `L(KG(n,2))` at `p`, with
/// the arm that produced them.
///
/// Defined for primes dividing the order, and for `p = 2` with `n = 2 mod 4`
/// where the 2-part is trivial.
pub fn predict_with_branch(n: u64, p: u64) -> Result<(Branch, ElementaryDivisorProfile)> {
    let branch = select_branch(n, p)?;
    let sd = spectral_data(n)?;
    let profile = profile_from_table(p, &branch_table(branch, &sd));
    let expected = order_valuation(n, p)? as usize;
    if profile.valuation_sum() != expected || profile.total() as u64 != sd.f + sd.g {
        return Err(Error::Dispatch(format!(
            "{branch} at n = {n}: table does not match the order (sum i*e_i = {}, v_p = {expected})",
            profile.valuation_sum()
        )));
    }
    Ok((branch, profile))
}

pub fn predicted_elementary_divisors(n: u64, p: u64) -> Result<ElementaryDivisorProfile> {
    predict_with_branch(n, p).map(|(_, profile)| profile)
}

/// The profile of a prime coprime to the order: `e_0 = f + g`.
pub fn trivial_profile(n: u64, p: u64) -> Result<ElementaryDivisorProfile> {
    let sd = spectral_data(n)?;
    require_prime(p)?;
    Ok(ElementaryDivisorProfile::new(
        p,
        vec![(sd.f + sd.g) as usize],
        1,
    ))
}

/// Lower bounds `dim M_{a_j} >= b_j` together with the target valuation `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrassmannHypothesis {
    pub prime: u64,
    /// `a_1 < ... < a_h`, all positive.
    pub indices: Vec<u32>,
    /// `b_1 > ... > b_h`.
    pub bounds: Vec<u64>,
    /// `v_p` of the torsion order.
    pub d: u64,
    /// `f + g + 1`.
    pub total_dim: u64,
    /// Dimension of the reduced kernel, `1` for a connected graph.
    pub kernel_dim: u64,
}

impl GrassmannHypothesis {
    /// `sum_j (b_j - b_{j+1}) a_j` with `b_{h+1} = kernel_dim`.
    pub fn weighted_sum(&self) -> Option<u64> {
        let mut sum = 0u64;
        for (j, (&a, &b)) in self.indices.iter().zip(&self.bounds).enumerate() {
            let next = self.bounds.get(j + 1).copied().unwrap_or(self.kernel_dim);
            sum += b.checked_sub(next)? * u64::from(a);
        }
        Some(sum)
    }

    fn check_shape(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InconsistentHypothesis(msg.to_string()));
        if self.indices.len() != self.bounds.len() {
            return bad("indices and bounds differ in length");
        }
        if self.indices.first().is_some_and(|&a| a == 0)
            || self.indices.windows(2).any(|w| w[0] >= w[1])
        {
            return bad("indices must be positive and strictly increasing");
        }
        if self.bounds.windows(2).any(|w| w[0] <= w[1])
            || self.bounds.last().is_some_and(|&b| b < self.kernel_dim)
        {
            return bad("bounds must strictly decrease and stay above the kernel dimension");
        }
        if self.bounds.first().is_some_and(|&b| b > self.total_dim) {
            return bad("b_1 exceeds the total dimension");
        }
        Ok(())
    }

    /// Whether the filtration satisfies every lower bound `dims[a_j] >= b_j`.
    pub fn bounds_hold(&self, filt: &MbarFiltration) -> bool {
        self.indices.iter().zip(&self.bounds).all(|(&a, &b)| {
            filt.dims
                .get(a as usize)
                .is_some_and(|&dim| dim as u64 >= b)
        })
    }
}

/// Multiplicities forced by the lower bounds once their weighted sum reaches
/// the valuation: `e_{a_j} = b_j - b_{j+1}`, `e_0 = total_dim - b_1`, all
/// other `e_i` zero.
pub fn grassmann_conclusion(hyp: &GrassmannHypothesis) -> Result<ElementaryDivisorProfile> {
    hyp.check_shape()?;
    match hyp.weighted_sum() {
        Some(s) if s == hyp.d => {}
        Some(s) => {
            return Err(Error::InconsistentHypothesis(format!(
                "weighted sum {s} differs from d = {}",
                hyp.d
            )))
        }
        None => return Err(Error::InconsistentHypothesis("bounds underflow".into())),
    }
    let b1 = hyp.bounds.first().copied().unwrap_or(hyp.kernel_dim);
    let mut profile = ElementaryDivisorProfile::new(
        hyp.prime,
        vec![(hyp.total_dim - b1) as usize],
        hyp.kernel_dim as usize,
    );
    for (j, (&a, &b)) in hyp.indices.iter().zip(&hyp.bounds).enumerate() {
        let next = hyp.bounds.get(j + 1).copied().unwrap_or(hyp.kernel_dim);
        profile.set(a as usize, (b - next) as usize);
    }
    Ok(profile)
}

/// The lemma parameters `(a_j, b_j)` and `d` used for each arm.
pub fn branch_hypothesis(n: u64, p: u64, branch: Branch) -> Result<GrassmannHypothesis> {
    let sd = spectral_data(n)?;
    let (f, g) = (sd.f, sd.g);
    let a = branch.a;
    let a64 = u64::from(a);
    let (pairs, d): (Vec<(u32, u64)>, u64) = match branch.case {
        Case::C1a => (vec![(a, f)], a64 * (f - 1)),
        Case::C1b => (vec![(a, g)], a64 * (g - 1)),
        Case::C1c => (vec![(a, f + 1)], a64 * f),
        Case::C1d => (vec![(a, g + 1)], a64 * g),
        Case::C2a => (vec![(1, g + 1), (a + 1, g)], a64 * (g - 1) + g),
        Case::C2b => (vec![(a, g + 1), (a + 1, g)], g - 1 + a64 * g),
        Case::C2c => (vec![(1, g + 1), (2, g)], 2 * g - 1),
        Case::C2d => (vec![(1, f + 1), (a + 1, f)], a64 * f - a64 + f),
        Case::C2e => (vec![(a, f + 1), (a + 1, f)], f - 1 + a64 * f),
        Case::C2f => (vec![(1, f + 1), (2, f)], 2 * f - 1),
        Case::C3a => (vec![(a - 1, f + 1)], a64 * f - f),
        Case::C3b => (vec![], 0),
        Case::C3c => (vec![(a - 1, g)], a64 * g - a64 - g + 1),
        Case::C3dI => (vec![(1, g + 1), (a, f)], a64 * f - a64 + g - f + 1),
        Case::C3dII => (vec![(a - 1, g + 1), (a, f)], f - 1 + a64 * g - g),
        Case::C3dIII => return Err(Error::Dispatch("Case 3 d-iii has no hypothesis".into())),
    };
    let (indices, bounds) = pairs.into_iter().unzip();
    Ok(GrassmannHypothesis {
        prime: p,
        indices,
        bounds,
        d,
        total_dim: sd.vertex_count(),
        kernel_dim: 1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

/// Invariant factors of `K(KG(n,2))` as `(order, multiplicity)` terms in the
/// order the closed form lists them, before dropping trivial factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PredictedGroup {
    pub n: u64,
    pub parity: Parity,
    pub factors: Vec<(BigInt, u64)>,
}

impl PredictedGroup {
    /// Expanded chain with factors equal to 1 removed.
    pub fn normalized(&self) -> Vec<BigInt> {
        self.factors
            .iter()
            .filter(|(d, _)| !d.is_one())
            .flat_map(|(d, m)| std::iter::repeat_n(d.clone(), *m as usize))
            .collect()
    }

    pub fn order(&self) -> BigInt {
        self.factors
            .iter()
            .map(|(d, m)| num_traits::pow::pow(d.clone(), *m as usize))
            .product()
    }
}

pub fn predicted_critical_group(n: u64) -> Result<PredictedGroup> {
    require_n(n)?;
    let big = BigInt::from;
    let (n4, n1, n3) = (n - 4, n - 1, n - 3);
    let middle = (big(n4 * n1 / 2), n * (n - 5) / 2);
    let top = (big(n4) * big(n1) * big(n3) * big(n) / big(4), n - 2);
    let (parity, first, third) = if n % 2 == 1 {
        (Parity::Odd, big(n4), big(n4) * big(n1) * big(n3) / big(4))
    } else {
        (
            Parity::Even,
            big(n4 / 2),
            big(n4) * big(n1) * big(n3) / big(2),
        )
    };
    Ok(PredictedGroup {
        n,
        parity,
        factors: vec![(first, 1), middle, (third, 1), top],
    })
}
