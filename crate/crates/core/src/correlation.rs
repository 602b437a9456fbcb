//! Pair distances, symmetric functions D^n_k, the closed-form normalization
//! N_n^2, its formal derivatives with respect to pair distances, and the
//! correlation factors beta_ij.
//!
//! The normalization is treated as a multilinear polynomial in the formal
//! variables d_ij (each k-matching uses a pair at most once), so derivatives
//! are taken on the polynomial rather than by moving stars on the sphere:
//!
//! ```text
//!   N_n^2       = (n+1)!/2^n * sum_k D^n_k / (2k+1)!!
//!   dN^2/dd_ij  = -(n+1)!/2^n * sum_k (D^{n-2}_k)'_ij / (2k+3)!!
//!   beta_ij     = -(d_ij / N^2) dN^2/dd_ij
//! ```
//!
//! D^n_k sums the product of u_i.u_j over all ways of choosing k disjoint
//! index pairs; the primed sum excludes the two derivative indices. The sums
//! are evaluated by a memoized disjoint-pair recursion over index subsets,
//! exponential in n and limited to n <= 16 (a permanent-hard computation; the
//! documented working range is n <= 12).

use crate::error::{Error, Result};
use crate::math::{factorial, odd_double_factorial};
use crate::stellar::StarSet;
use num_complex::Complex64 as C64;

/// Hard limit for the disjoint-pair enumeration behind N_n^2 and beta_ij.
pub const PAIR_SUM_MAX: usize = 16;
/// Hard limit for the brute-force permanent oracle.
pub const PERMANENT_MAX: usize = 12;

/// Symmetric matrix of star-pair distances d_ij = 1 - u_i.u_j.
#[derive(Clone, Debug)]
pub struct PairDistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl PairDistanceMatrix {
    pub fn from_stars(stars: &StarSet) -> Self {
        let n = stars.n();
        let mut m = PairDistanceMatrix {
            n,
            d: vec![0.0; n * n],
        };
        for i in 0..n {
            for j in (i + 1)..n {
                let d = stars.star(i).pair_distance(stars.star(j));
                m.set(i, j, d);
            }
        }
        m
    }

    /// Build directly from formal distance values (upper triangle read,
    /// symmetry enforced). Used by derivative oracles that perturb a single
    /// d_ij without reference to actual sphere points.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = PairDistanceMatrix {
            n,
            d: vec![0.0; n * n],
        };
        for i in 0..n {
            for j in (i + 1)..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    /// Set d_ij = d_ji = v.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.d[i * self.n + j] = v;
        self.d[j * self.n + i] = v;
    }

    /// u_i . u_j = 1 - d_ij.
    pub fn dot(&self, i: usize, j: usize) -> f64 {
        1.0 - self.get(i, j)
    }
}

/// Memoized k-matching sums over index subsets of one distance matrix.
struct MatchingEngine<'a> {
    dmat: &'a PairDistanceMatrix,
    memo: Vec<Option<Box<[f64]>>>,
}

impl<'a> MatchingEngine<'a> {
    fn new(dmat: &'a PairDistanceMatrix) -> Result<Self> {
        let n = dmat.n();
        if n > PAIR_SUM_MAX {
            return Err(Error::ResourceLimit {
                what: "disjoint-pair enumeration".into(),
                limit: PAIR_SUM_MAX,
                requested: n,
            });
        }
        Ok(MatchingEngine {
            dmat,
            memo: vec![None; 1usize << n],
        })
    }

    fn full_mask(&self) -> u64 {
        if self.dmat.n() == 64 {
            u64::MAX
        } else {
            (1u64 << self.dmat.n()) - 1
        }
    }

    /// Vector [M_0, M_1, ...] where M_k sums prod(u.u) over k disjoint pairs
    /// drawn from the index subset `mask`. M_0 = 1.
    fn sums(&mut self, mask: u64) -> Vec<f64> {
        if let Some(v) = &self.memo[mask as usize] {
            return v.to_vec();
        }
        if mask == 0 {
            return vec![1.0];
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1u64 << i);
        let mut out = self.sums(rest); // index i left unpaired
        let mut jbits = rest;
        while jbits != 0 {
            let j = jbits.trailing_zeros() as usize;
            jbits &= jbits - 1;
            let sub = self.sums(rest & !(1u64 << j));
            let w = self.dmat.dot(i, j);
            if out.len() < sub.len() + 1 {
                out.resize(sub.len() + 1, 0.0);
            }
            for (k, &v) in sub.iter().enumerate() {
                out[k + 1] += w * v;
            }
        }
        self.memo[mask as usize] = Some(out.clone().into_boxed_slice());
        out
    }
}

/// D^n_k: sum over all choices of k disjoint index pairs of the product of
/// u_i.u_j over the chosen pairs. D^n_0 = 1 by the empty-product convention.
pub fn symmetric_function_d(dmat: &PairDistanceMatrix, k: usize) -> Result<f64> {
    let n = dmat.n();
    if k > n / 2 {
        return Err(Error::invalid(format!(
            "matching order k={k} out of range for n={n}"
        )));
    }
    let mut engine = MatchingEngine::new(dmat)?;
    let sums = engine.sums(engine.full_mask());
    Ok(sums.get(k).copied().unwrap_or(0.0))
}

fn norm_sq_from_sums(n: usize, sums: &[f64]) -> f64 {
    let prefactor = factorial(n + 1) / 2f64.powi(n as i32);
    let mut total = 0.0;
    for k in 0..=(n / 2) {
        total += sums.get(k).copied().unwrap_or(0.0) / odd_double_factorial(k);
    }
    prefactor * total
}

fn derivative_from_sums(n: usize, reduced_sums: &[f64]) -> f64 {
    let prefactor = factorial(n + 1) / 2f64.powi(n as i32);
    let mut total = 0.0;
    for k in 0..=((n.max(2) - 2) / 2) {
        total += reduced_sums.get(k).copied().unwrap_or(0.0) / odd_double_factorial(k + 1);
    }
    -prefactor * total
}

/// Closed-form normalization N_n^2 evaluated on a formal distance matrix.
pub fn normalization_sq_from_distances(dmat: &PairDistanceMatrix) -> Result<f64> {
    let mut engine = MatchingEngine::new(dmat)?;
    let sums = engine.sums(engine.full_mask());
    Ok(norm_sq_from_sums(dmat.n(), &sums))
}

/// Closed-form normalization N_n^2 of a star set.
pub fn normalization_sq(stars: &StarSet) -> Result<f64> {
    normalization_sq_from_distances(&PairDistanceMatrix::from_stars(stars))
}

/// dN_n^2/dd_ij on the formal multilinear polynomial.
pub fn norm_sq_pair_derivative_from_distances(
    dmat: &PairDistanceMatrix,
    i: usize,
    j: usize,
) -> Result<f64> {
    let n = dmat.n();
    check_pair(n, i, j)?;
    let mut engine = MatchingEngine::new(dmat)?;
    let mask = engine.full_mask() & !(1u64 << i) & !(1u64 << j);
    let reduced = engine.sums(mask);
    Ok(derivative_from_sums(n, &reduced))
}

/// dN_n^2/dd_ij of a star set.
pub fn norm_sq_pair_derivative(stars: &StarSet, i: usize, j: usize) -> Result<f64> {
    norm_sq_pair_derivative_from_distances(&PairDistanceMatrix::from_stars(stars), i, j)
}

/// Correlation factor beta_ij = -(d_ij / N_n^2) dN_n^2/dd_ij.
/// Returns exactly 0 when d_ij = 0.
pub fn beta_from_distances(dmat: &PairDistanceMatrix, i: usize, j: usize) -> Result<f64> {
    check_pair(dmat.n(), i, j)?;
    let d = dmat.get(i, j);
    if d == 0.0 {
        return Ok(0.0);
    }
    let weights = PairWeights::compute(dmat)?;
    Ok(d * weights.beta_over_d(i, j))
}

/// Correlation factor beta_ij of a star set.
pub fn beta(stars: &StarSet, i: usize, j: usize) -> Result<f64> {
    beta_from_distances(&PairDistanceMatrix::from_stars(stars), i, j)
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i == j {
        return Err(Error::invalid("pair indices must differ"));
    }
    if i >= n || j >= n {
        return Err(Error::invalid(format!(
            "pair ({i}, {j}) out of range for n={n}"
        )));
    }
    Ok(())
}

/// N_n^2 together with beta_ij / d_ij = -(dN^2/dd_ij)/N^2 for every pair,
/// sharing one matching memo. The ratio stays finite at d_ij = 0, which is
/// what the Berry-phase integrand needs.
#[derive(Clone, Debug)]
pub struct PairWeights {
    n: usize,
    pub norm_sq: f64,
    neg_deriv_over_norm: Vec<f64>, // packed i < j
}

impl PairWeights {
    pub fn compute(dmat: &PairDistanceMatrix) -> Result<Self> {
        let n = dmat.n();
        let mut engine = MatchingEngine::new(dmat)?;
        let full = engine.full_mask();
        let norm_sq = norm_sq_from_sums(n, &engine.sums(full));
        let mut packed = Vec::with_capacity(n * (n.max(1) - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                let reduced = engine.sums(full & !(1u64 << i) & !(1u64 << j));
                packed.push(-derivative_from_sums(n, &reduced) / norm_sq);
            }
        }
        Ok(PairWeights {
            n,
            norm_sq,
            neg_deriv_over_norm: packed,
        })
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// -(dN^2/dd_ij)/N^2; multiply by d_ij to get beta_ij.
    pub fn beta_over_d(&self, i: usize, j: usize) -> f64 {
        self.neg_deriv_over_norm[self.index(i, j)]
    }

    pub fn beta(&self, dmat: &PairDistanceMatrix, i: usize, j: usize) -> f64 {
        let d = dmat.get(i, j);
        if d == 0.0 {
            0.0
        } else {
            d * self.beta_over_d(i, j)
        }
    }
}

/// Literal permanent form of the normalization: n! times the permanent of the
/// Gram matrix G_ij = <u_i|u_j>, evaluated by Ryser's formula. Kept as an
/// independent oracle; it differs from the closed form by an n-dependent
/// constant that cancels in every ratio quantity.
pub fn normalization_sq_permanent(stars: &StarSet) -> Result<f64> {
    let n = stars.n();
    if n > PERMANENT_MAX {
        return Err(Error::ResourceLimit {
            what: "permanent oracle".into(),
            limit: PERMANENT_MAX,
            requested: n,
        });
    }
    let mut gram = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let (ui, uj) = (stars.star(i), stars.star(j));
            let ci = (ui.theta() / 2.0).cos();
            let si = (ui.theta() / 2.0).sin();
            let cj = (uj.theta() / 2.0).cos();
            let sj = (uj.theta() / 2.0).sin();
            gram[i * n + j] =
                C64::new(ci * cj, 0.0) + C64::from_polar(si * sj, uj.phi() - ui.phi());
        }
    }

    // Ryser: perm(A) = (-1)^n sum_{S != 0} (-1)^|S| prod_i sum_{j in S} a_ij
    let mut perm = C64::new(0.0, 0.0);
    for s in 1u64..(1 << n) {
        let mut prod = C64::new(1.0, 0.0);
        for i in 0..n {
            let mut row = C64::new(0.0, 0.0);
            let mut bits = s;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                row += gram[i * n + j];
            }
            prod *= row;
        }
        if s.count_ones() % 2 == 0 {
            perm += prod;
        } else {
            perm -= prod;
        }
    }
    if n % 2 == 1 {
        perm = -perm;
    }

    let value = factorial(n) * perm.re;
    let imag = factorial(n) * perm.im;
    if imag.abs() > 1e-10 * value.abs().max(1.0) {
        return Err(Error::NumericalFailure {
            what: "permanent has a non-negligible imaginary part".into(),
            residuals: vec![imag],
        });
    }
    Ok(value)
}

/// Closed-form N_n^2 next to the permanent oracle and their ratio.
#[derive(Clone, Debug)]
pub struct NormalizationReport {
    pub value: f64,
    pub permanent_value: f64,
    pub ratio: f64,
}

pub fn normalization_report(stars: &StarSet) -> Result<NormalizationReport> {
    let value = normalization_sq(stars)?;
    let permanent_value = normalization_sq_permanent(stars)?;
    Ok(NormalizationReport {
        value,
        permanent_value,
        ratio: value / permanent_value,
    })
}
