//! Conversions between amplitude-vector states and Majorana star constellations.
//!
//! A spin-J state with amplitudes C_m (m = -J..J, n = 2J) maps to the roots of
//!
//! ```text
//!   sum_{k=0}^{n} (-1)^k C_{n/2-k} / sqrt((n-k)! k!) x^{n-k} = 0
//! ```
//!
//! via the stereographic assignment x = tan(theta/2) e^{i phi}. Each missing
//! leading degree (vanishing top coefficient) is a root at infinity and is
//! placed at the south pole. The inverse direction expands the product of
//! single-star creation operators back into amplitudes.

use crate::error::{Error, Result};
use crate::math::{self, sqrt_factorial, Vec3, MAX_BOSONS};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Default relative tolerance for root classification in [`find_stars`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

/// A point on the unit sphere in spherical coordinates.
///
/// `theta` is the colatitude in [0, pi]; `phi` the azimuth, stored in
/// [0, 2*pi). At the poles the azimuth is meaningless and is canonicalized
/// to 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Self {
        assert!(
            (-1e-9..=std::f64::consts::PI + 1e-9).contains(&theta),
            "colatitude {theta} outside [0, pi]"
        );
        let theta = theta.clamp(0.0, std::f64::consts::PI);
        let phi = if theta == 0.0 || theta == std::f64::consts::PI {
            0.0
        } else {
            phi.rem_euclid(std::f64::consts::TAU)
        };
        Direction { theta, phi }
    }

    pub fn from_cartesian(v: [f64; 3]) -> Self {
        let r = math::norm3(v);
        assert!(r > 0.0, "cannot normalize a zero vector");
        let theta = math::clamp_unit(v[2] / r).acos();
        let phi = v[1].atan2(v[0]);
        Direction::new(theta, phi)
    }

    pub fn north() -> Self {
        Direction::new(0.0, 0.0)
    }

    pub fn south() -> Self {
        Direction::new(std::f64::consts::PI, 0.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn cartesian(&self) -> Vec3 {
        let (st, ct) = (self.theta.sin(), self.theta.cos());
        let (sp, cp) = (self.phi.sin(), self.phi.cos());
        [st * cp, st * sp, ct]
    }

    /// u . v
    pub fn dot(&self, other: &Direction) -> f64 {
        math::dot3(self.cartesian(), other.cartesian())
    }

    /// Star-pair "distance" d = 1 - u . v in [0, 2].
    pub fn pair_distance(&self, other: &Direction) -> f64 {
        (1.0 - self.dot(other)).clamp(0.0, 2.0)
    }

    /// Euclidean distance between the two unit vectors.
    pub fn chordal_distance(&self, other: &Direction) -> f64 {
        math::norm3(math::sub3(self.cartesian(), other.cartesian()))
    }

    /// Great-circle angle to `other`, in [0, pi].
    pub fn angle_to(&self, other: &Direction) -> f64 {
        math::clamp_unit(self.dot(other)).acos()
    }

    pub fn antipode(&self) -> Self {
        Direction::new(
            std::f64::consts::PI - self.theta,
            self.phi + std::f64::consts::PI,
        )
    }

    /// Stereographic image tan(theta/2) e^{i phi}; infinite at the south pole.
    pub fn stereographic(&self) -> C64 {
        let r = (self.theta / 2.0).tan();
        C64::from_polar(r, self.phi)
    }
}

/// Amplitudes C_m of a spin-J state over the Dicke/Fock basis, stored
/// low-to-high: slot k holds C_m with k = J + m, i.e. the amplitude of the
/// two-mode Fock state with k bosons in mode a.
#[derive(Clone, Debug)]
pub struct SpinState {
    amplitudes: Vec<C64>,
}

impl SpinState {
    /// Build a state from n+1 amplitudes. The vector is kept as given;
    /// operations that need unit norm normalize explicitly.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::invalid("state needs at least 2 amplitudes (n >= 1)"));
        }
        if amplitudes.len() - 1 > MAX_BOSONS {
            return Err(Error::ResourceLimit {
                what: "boson number".into(),
                limit: MAX_BOSONS,
                requested: amplitudes.len() - 1,
            });
        }
        if amplitudes.iter().all(|a| a.norm_sqr() == 0.0) {
            return Err(Error::ZeroState);
        }
        Ok(SpinState { amplitudes })
    }

    /// Real amplitude convenience constructor.
    pub fn from_reals(amps: &[f64]) -> Result<Self> {
        SpinState::new(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Particle number n = 2J.
    pub fn n(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Unit-norm copy.
    pub fn normalized(&self) -> SpinState {
        let n = self.norm();
        SpinState {
            amplitudes: self.amplitudes.iter().map(|a| a / n).collect(),
        }
    }

    /// <self|other>, computed on the raw (not normalized) amplitudes.
    pub fn overlap(&self, other: &SpinState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |<self|other>| after normalizing both sides.
    pub fn fidelity(&self, other: &SpinState) -> f64 {
        self.overlap(other).norm() / (self.norm() * other.norm())
    }
}

/// The n Majorana stars of a state. Order is bookkeeping only; the physical
/// content is the multiset. `infinity_count` records how many stars came from
/// degree deficiency (roots at infinity, placed at the south pole).
#[derive(Clone, Debug)]
pub struct StarSet {
    stars: Vec<Direction>,
    infinity_count: usize,
}

impl StarSet {
    pub fn new(stars: Vec<Direction>) -> Self {
        StarSet {
            stars,
            infinity_count: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.stars.len()
    }

    pub fn stars(&self) -> &[Direction] {
        &self.stars
    }

    pub fn star(&self, k: usize) -> &Direction {
        &self.stars[k]
    }

    pub fn infinity_count(&self) -> usize {
        self.infinity_count
    }

    /// Copy with stars reordered so that slot k holds `self.stars[perm[k]]`.
    pub fn permuted(&self, perm: &[usize]) -> StarSet {
        StarSet {
            stars: perm.iter().map(|&p| self.stars[p]).collect(),
            infinity_count: self.infinity_count,
        }
    }
}

/// Coefficients of the Majorana polynomial; slot k multiplies x^(n-k).
#[derive(Clone, Debug)]
pub struct PolynomialCoefficients {
    coeffs: Vec<C64>,
}

impl PolynomialCoefficients {
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Nominal degree n (the actual degree may be lower when leading
    /// coefficients vanish).
    pub fn nominal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluate the polynomial at x (Horner, highest power first).
    pub fn eval(&self, x: C64) -> C64 {
        self.coeffs.iter().fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }
}

/// Coefficients (-1)^k C_{n/2-k} / sqrt((n-k)! k!) of the Majorana polynomial.
pub fn majorana_polynomial(state: &SpinState) -> Result<PolynomialCoefficients> {
    let n = state.n();
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        // C_{n/2-k} sits at slot J+m = n-k.
        let c = state.amplitudes()[n - k];
        coeffs.push(c * sign / (sqrt_factorial(n - k) * sqrt_factorial(k)));
    }
    Ok(PolynomialCoefficients { coeffs })
}

/// Roots of a complex polynomial given by `coeffs` (slot j multiplies
/// x^(d-j), leading and trailing coefficients nonzero) via the companion
/// matrix, with one Newton polishing step per root.
fn companion_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Ok(vec![]);
    }
    // Rescale the variable so the root moduli are O(1); the geometric mean of
    // the root magnitudes is |c_d / c_0|^(1/d).
    let mut scale = (coeffs[d].norm() / coeffs[0].norm()).powf(1.0 / d as f64);
    if !scale.is_finite() || scale == 0.0 {
        scale = 1.0;
    }
    let mut scaled: Vec<C64> = (0..=d)
        .map(|j| coeffs[j] * scale.powi((d - j) as i32))
        .collect();
    let max_mag = scaled.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for c in &mut scaled {
        *c /= max_mag;
    }

    let lead = scaled[0];
    let mut m = DMatrix::<C64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -scaled[d - i] / lead;
    }
    let schur = m.try_schur(1e-14, (400 * d).max(4000)).ok_or_else(|| {
        Error::NumericalFailure {
            what: format!("companion eigensolver for degree {d}"),
            residuals: vec![],
        }
    })?;
    let t = schur.unpack().1;
    let mut roots: Vec<C64> = (0..d).map(|i| t[(i, i)] * scale).collect();

    // One Newton step per root on the original coefficients, kept only when
    // it reduces |p|: near a multiple root the computed p(r) is rounding
    // noise while p'(r) is nearly zero, and the raw quotient would throw a
    // well-converged root far out of its cluster.
    for r in &mut roots {
        let (p0, dp0) = horner_with_derivative(coeffs, *r);
        if dp0.norm() == 0.0 {
            continue;
        }
        let step = p0 / dp0;
        if !step.norm().is_finite() {
            continue;
        }
        let candidate = *r - step;
        let (p1, _) = horner_with_derivative(coeffs, candidate);
        if p1.norm() < p0.norm() {
            *r = candidate;
        }
    }
    Ok(roots)
}

fn horner_with_derivative(coeffs: &[C64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Majorana stars of a state: finite polynomial roots mapped by
/// theta = 2 atan|x|, phi = arg x, plus one south-pole star per missing
/// leading degree. `tol` classifies coefficients as zero relative to the
/// largest coefficient magnitude.
pub fn find_stars(state: &SpinState, tol: f64) -> Result<StarSet> {
    if tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let n = state.n();
    let poly = majorana_polynomial(state)?;
    let c = poly.coeffs();
    let max_mag = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let cut = tol * max_mag;

    let lead = c.iter().position(|z| z.norm() > cut).expect("nonzero state");
    let trail = c.iter().rposition(|z| z.norm() > cut).unwrap();
    let infinity_count = lead; // roots at infinity -> south pole
    let zero_roots = n - trail; // trailing zeros -> roots at the origin

    let core = &c[lead..=trail];
    let finite = companion_roots(core).map_err(|e| match e {
        Error::NumericalFailure { what, .. } => Error::NumericalFailure {
            what,
            residuals: core.iter().map(|z| z.norm() / max_mag).collect(),
        },
        other => other,
    })?;

    // Residual sanity check on the polished roots.
    let mut residuals = Vec::with_capacity(finite.len());
    for &r in &finite {
        // Scale-invariant residual: |p(r)| relative to the largest term.
        let mut p = C64::new(0.0, 0.0);
        let mut scale_term: f64 = 0.0;
        let mut xpow = C64::new(1.0, 0.0);
        for &cj in core.iter().rev() {
            scale_term = scale_term.max((cj * xpow).norm());
            p += cj * xpow;
            xpow *= r;
        }
        residuals.push(p.norm() / scale_term.max(f64::MIN_POSITIVE));
    }
    if residuals.iter().any(|&r| !r.is_finite() || r > 1e-6) {
        return Err(Error::NumericalFailure {
            what: "root polishing left large residuals".into(),
            residuals,
        });
    }

    let mut stars = Vec::with_capacity(n);
    for _ in 0..zero_roots {
        stars.push(Direction::north());
    }
    for r in finite {
        let theta = 2.0 * r.norm().atan();
        let phi = r.im.atan2(r.re);
        stars.push(Direction::new(theta, phi));
    }
    for _ in 0..infinity_count {
        stars.push(Direction::south());
    }
    stars.sort_by(|a, b| {
        (a.theta(), a.phi())
            .partial_cmp(&(b.theta(), b.phi()))
            .unwrap()
    });
    debug_assert_eq!(stars.len(), n);
    Ok(StarSet {
        stars,
        infinity_count,
    })
}

/// Expand the product of single-star creation operators
/// (cos(theta/2) a^ + sin(theta/2) e^{i phi} b^) into n+1 amplitudes and
/// normalize to unit norm.
pub fn state_from_stars(stars: &StarSet) -> Result<SpinState> {
    let n = stars.n();
    if n == 0 {
        return Err(Error::invalid("star set is empty"));
    }
    if n > MAX_BOSONS {
        return Err(Error::ResourceLimit {
            what: "star count".into(),
            limit: MAX_BOSONS,
            requested: n,
        });
    }
    // poly[p] accumulates the coefficient of (a^)^p (b^)^(n-p).
    let mut poly = vec![C64::new(1.0, 0.0)];
    for star in stars.stars() {
        let alpha = C64::new((star.theta() / 2.0).cos(), 0.0);
        let beta = C64::from_polar((star.theta() / 2.0).sin(), star.phi());
        let mut next = vec![C64::new(0.0, 0.0); poly.len() + 1];
        for (p, &v) in poly.iter().enumerate() {
            next[p] += v * beta;
            next[p + 1] += v * alpha;
        }
        poly = next;
    }
    let mut amplitudes: Vec<C64> = (0..=n)
        .map(|p| poly[p] * sqrt_factorial(p) * sqrt_factorial(n - p))
        .collect();
    let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::NumericalFailure {
            what: "star product expansion produced a non-normalizable vector".into(),
            residuals: vec![norm],
        });
    }
    for a in &mut amplitudes {
        *a /= norm;
    }
    SpinState::new(amplitudes)
}

/// Majorana stars of a generic length-n amplitude vector (n - 1 stars).
///
/// The vector is read with its first component as the highest-weight
/// amplitude, so a single qubit (c1, c2) = (cos(theta/2), sin(theta/2)
/// e^{i phi}) yields the star at its Bloch vector, matching the spin-1/2
/// stereographic convention.
pub fn generic_state_stars(amplitudes: &[C64], tol: f64) -> Result<StarSet> {
    if amplitudes.len() < 2 {
        return Err(Error::invalid(
            "generic state needs at least 2 amplitudes",
        ));
    }
    let reversed: Vec<C64> = amplitudes.iter().rev().copied().collect();
    let state = SpinState::new(reversed)?;
    find_stars(&state, tol)
}
