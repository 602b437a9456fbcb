//! Berry phases of discretized star loops.
//!
//! The total phase splits as gamma = gamma_0 + gamma_C: the per-star solid
//! angles gamma_0 = -sum_i Omega_i / 2, and the correlation part
//!
//! ```text
//!   gamma_C = 1/2 oint sum_{i<j} beta_ij Omega(du_ij)
//! ```
//!
//! integrated with the d_ij cancellation performed so coincident-star steps
//! stay finite. gamma_C further splits into the weighted relative azimuth
//! windings (gamma_R) and the weighted absolute cos(theta) dphi terms
//! (gamma_A). Everything is cross-checked against the gauge-invariant
//! overlap-product oracle, which fixes the overall sign convention.

use crate::correlation::{PairDistanceMatrix, PairWeights};
use crate::error::{Error, Result};
use crate::geometry::{
    pair_solid_angle_increment, relative_coordinates, step_solid_angle, weighted_pair_increment,
};
use crate::math::{self, wrap_angle};
use crate::stellar::{find_stars, Direction, SpinState, StarSet};

/// Default bound on the chordal displacement of a single star across one step.
pub const DEFAULT_CONTINUITY_BOUND: f64 = 0.2;

/// Chordal separation below which a star pair counts as coincident for the
/// relative-frame split.
const COINCIDENT_TOL: f64 = 1e-9;

/// Options for star identification across trajectory steps.
#[derive(Clone, Copy, Debug)]
pub struct MatchOptions {
    /// Maximum chordal displacement of any single star across one step.
    pub continuity_bound: f64,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            continuity_bound: DEFAULT_CONTINUITY_BOUND,
        }
    }
}

/// Minimum-total-cost assignment by the Hungarian algorithm (potentials
/// formulation, O(n^3)).
fn hungarian(n: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Identify the stars of `next` with those of `prev`: returns `perm` with
/// `next[perm[k]]` continuing the path of `prev[k]`, minimizing the total
/// chordal distance. Errors when the best assignment still moves some star
/// farther than `continuity_bound`.
pub fn match_stars(prev: &StarSet, next: &StarSet, continuity_bound: f64) -> Result<Vec<usize>> {
    if prev.n() != next.n() {
        return Err(Error::invalid(format!(
            "star counts differ: {} vs {}",
            prev.n(),
            next.n()
        )));
    }
    let n = prev.n();
    let perm = hungarian(n, |i, j| prev.star(i).chordal_distance(next.star(j)));
    let worst = (0..n)
        .map(|k| prev.star(k).chordal_distance(next.star(perm[k])))
        .fold(0.0, f64::max);
    if worst > continuity_bound {
        return Err(Error::Discontinuity {
            step: 0,
            what: format!(
                "largest matched star displacement {worst:.4} exceeds bound {continuity_bound}"
            ),
        });
    }
    Ok(perm)
}

/// A closed, time-discretized star trajectory with identities aligned across
/// steps. `samples` has length N+1 and the last sample repeats the first as a
/// multiset; stars may return permuted (root braiding), recorded in
/// `closure_permutation`.
#[derive(Clone, Debug)]
pub struct LoopTrajectory {
    samples: Vec<StarSet>,
    states: Option<Vec<SpinState>>,
    closure_permutation: Vec<usize>,
    matched: bool,
}

impl LoopTrajectory {
    /// Align star identities across the raw samples and verify closure.
    pub fn from_samples(
        raw: Vec<StarSet>,
        states: Option<Vec<SpinState>>,
        opts: &MatchOptions,
    ) -> Result<Self> {
        if raw.len() < 4 {
            return Err(Error::invalid(
                "a loop needs at least 4 samples (3 steps) including the closing one",
            ));
        }
        let n = raw[0].n();
        if raw.iter().any(|s| s.n() != n) {
            return Err(Error::invalid("samples carry different star counts"));
        }
        if let Some(states) = &states {
            if states.len() != raw.len() {
                return Err(Error::invalid("states list length differs from samples"));
            }
        }
        let mut samples: Vec<StarSet> = Vec::with_capacity(raw.len());
        samples.push(raw[0].clone());
        for (t, sample) in raw.iter().enumerate().skip(1) {
            let perm = match_stars(samples.last().unwrap(), sample, opts.continuity_bound)
                .map_err(|e| at_step(e, t))?;
            samples.push(sample.permuted(&perm));
        }
        let closure_permutation =
            match_stars(samples.last().unwrap(), &samples[0], opts.continuity_bound)
                .map_err(|e| at_step(e, raw.len() - 1))?;
        Ok(LoopTrajectory {
            samples,
            states,
            closure_permutation,
            matched: true,
        })
    }

    /// Build the trajectory from a closed list of states: stars are extracted
    /// per sample and then matched.
    pub fn from_states(states: Vec<SpinState>, star_tol: f64, opts: &MatchOptions) -> Result<Self> {
        let samples = states
            .iter()
            .map(|s| find_stars(s, star_tol))
            .collect::<Result<Vec<_>>>()?;
        LoopTrajectory::from_samples(samples, Some(states), opts)
    }

    pub fn n(&self) -> usize {
        self.samples[0].n()
    }

    /// Number of integration steps (samples minus one).
    pub fn steps(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn samples(&self) -> &[StarSet] {
        &self.samples
    }

    pub fn states(&self) -> Option<&[SpinState]> {
        self.states.as_deref()
    }

    /// Star relabeling between the closing sample and the first one;
    /// the identity permutation unless the roots braid around the loop.
    pub fn closure_permutation(&self) -> &[usize] {
        &self.closure_permutation
    }

    pub fn is_matched(&self) -> bool {
        self.matched
    }

    fn require_matched(&self) -> Result<()> {
        if self.matched {
            Ok(())
        } else {
            Err(Error::UnmatchedLoop)
        }
    }

    /// Trajectory traversed backwards.
    pub fn reversed(&self) -> LoopTrajectory {
        let mut samples = self.samples.clone();
        samples.reverse();
        let mut states = self.states.clone();
        if let Some(s) = &mut states {
            s.reverse();
        }
        let n = self.n();
        let mut inverse = vec![0usize; n];
        for (k, &p) in self.closure_permutation.iter().enumerate() {
            inverse[p] = k;
        }
        LoopTrajectory {
            samples,
            states,
            closure_permutation: inverse,
            matched: self.matched,
        }
    }
}

fn at_step(e: Error, step: usize) -> Error {
    match e {
        Error::Discontinuity { what, .. } => Error::Discontinuity { step, what },
        other => other,
    }
}

/// Per-pair ledger entry of the phase decomposition.
#[derive(Clone, Copy, Debug)]
pub struct PairPhase {
    pub i: usize,
    pub j: usize,
    pub gamma_r: f64,
    pub gamma_a: f64,
    pub gamma_c: f64,
    /// Pair hit a coincident configuration; its relative/absolute split is
    /// undefined and excluded from the gamma_R/gamma_A totals.
    pub excluded: bool,
}

/// Full Berry-phase ledger of one loop.
#[derive(Clone, Debug)]
pub struct PhaseBreakdown {
    pub gamma_total: f64,
    pub gamma_0: f64,
    pub gamma_c: f64,
    pub gamma_r: f64,
    pub gamma_a: f64,
    /// Representative of gamma_total in (-pi, pi].
    pub gamma_total_mod: f64,
    pub per_star_solid_angles: Vec<f64>,
    pub per_pair: Vec<PairPhase>,
    pub closure_permutation: Vec<usize>,
    /// Overlap-product phase when the trajectory carries states.
    pub oracle_gamma: Option<f64>,
}

impl PhaseBreakdown {
    /// |gamma_total - oracle| mod 2*pi, when the oracle was computed.
    pub fn oracle_deviation(&self) -> Option<f64> {
        self.oracle_gamma
            .map(|o| math::mod_2pi_distance(self.gamma_total, o))
    }

    /// Solid angles of the closed star loops: when the roots braid around the
    /// loop, individual star paths close only through the cycles of the
    /// closure permutation, so per-star angles are summed cycle by cycle.
    /// Each entry is (star indices of the cycle, accumulated solid angle).
    pub fn cycle_solid_angles(&self) -> Vec<(Vec<usize>, f64)> {
        let n = self.closure_permutation.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut members = Vec::new();
            let mut omega = 0.0;
            let mut k = start;
            loop {
                seen[k] = true;
                members.push(k);
                omega += self.per_star_solid_angles[k];
                k = self.closure_permutation[k];
                if k == start {
                    break;
                }
            }
            cycles.push((members, omega));
        }
        cycles
    }
}

/// gamma_0 = -(1/2) sum_i Omega_i along the matched star paths. Returns the
/// total and the per-star accumulated solid angles (closed individually only
/// when the closure permutation is the identity; total is always label-free).
pub fn gamma_zero(traj: &LoopTrajectory) -> Result<(f64, Vec<f64>)> {
    traj.require_matched()?;
    let n = traj.n();
    let mut omegas = vec![0.0; n];
    for pair in traj.samples().windows(2) {
        for k in 0..n {
            omegas[k] += step_solid_angle(pair[0].star(k), pair[1].star(k));
        }
    }
    let total = -0.5 * omegas.iter().sum::<f64>();
    Ok((total, omegas))
}

fn midpoints(a: &StarSet, b: &StarSet) -> Result<StarSet> {
    let stars = (0..a.n())
        .map(|k| {
            let sum = math::add3(a.star(k).cartesian(), b.star(k).cartesian());
            if math::norm3(sum) < 1e-3 {
                return Err(Error::NumericalFailure {
                    what: format!("star {k} jumps nearly a half-turn within one step"),
                    residuals: vec![math::norm3(sum)],
                });
            }
            Ok(Direction::from_cartesian(sum))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StarSet::new(stars))
}

/// gamma_C accumulated from weighted pair increments at step midpoints.
pub fn gamma_correlation(traj: &LoopTrajectory) -> Result<(f64, Vec<PairPhase>)> {
    traj.require_matched()?;
    let n = traj.n();
    let mut per_pair: Vec<PairPhase> = pair_list(n);
    for pair in traj.samples().windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let mid = midpoints(a, b)?;
        let dmat = PairDistanceMatrix::from_stars(&mid);
        let weights = PairWeights::compute(&dmat)?;
        let chords: Vec<[f64; 3]> = (0..n)
            .map(|k| math::sub3(b.star(k).cartesian(), a.star(k).cartesian()))
            .collect();
        for entry in per_pair.iter_mut() {
            let inc = weighted_pair_increment(
                mid.star(entry.i),
                mid.star(entry.j),
                chords[entry.i],
                chords[entry.j],
                weights.beta_over_d(entry.i, entry.j),
            );
            entry.gamma_c += 0.5 * inc;
        }
    }
    let total = per_pair.iter().map(|p| p.gamma_c).sum();
    Ok((total, per_pair))
}

fn pair_list(n: usize) -> Vec<PairPhase> {
    let mut v = Vec::with_capacity(n * (n.max(1) - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            v.push(PairPhase {
                i,
                j,
                gamma_r: 0.0,
                gamma_a: 0.0,
                gamma_c: 0.0,
                excluded: false,
            });
        }
    }
    v
}

/// Relative-azimuth increment of star `a` in the frame of star `anchor`
/// across one step; zero when the frame is degenerate at either endpoint.
fn relative_dphi(
    anchor_from: &Direction,
    a_from: &Direction,
    anchor_to: &Direction,
    a_to: &Direction,
) -> f64 {
    let f0 = relative_coordinates(anchor_from, a_from);
    let f1 = relative_coordinates(anchor_to, a_to);
    if f0.degenerate || f1.degenerate {
        0.0
    } else {
        wrap_angle(f1.phi_prime - f0.phi_prime)
    }
}

/// The gamma_R / gamma_A split of the correlation phase. Pairs that hit a
/// coincident configuration anywhere on the loop are flagged `excluded` and
/// left out of both totals (their gamma_C is zero there by construction).
pub fn gamma_relative_absolute(traj: &LoopTrajectory) -> Result<(f64, f64, Vec<PairPhase>)> {
    traj.require_matched()?;
    let n = traj.n();
    let mut per_pair = pair_list(n);
    // Coincidence scan first so a pair is excluded consistently.
    for sample in traj.samples() {
        for entry in per_pair.iter_mut() {
            if sample.star(entry.i).chordal_distance(sample.star(entry.j)) < COINCIDENT_TOL {
                entry.excluded = true;
            }
        }
    }
    for pair in traj.samples().windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let mid = midpoints(a, b)?;
        let dmat = PairDistanceMatrix::from_stars(&mid);
        let weights = PairWeights::compute(&dmat)?;
        for entry in per_pair.iter_mut() {
            if entry.excluded {
                continue;
            }
            let (i, j) = (entry.i, entry.j);
            let beta = weights.beta(&dmat, i, j);
            // phi'_{i(j)}: azimuth of star i with star j rotated to the pole.
            let dphi_i_j = relative_dphi(a.star(j), a.star(i), b.star(j), b.star(i));
            let dphi_j_i = relative_dphi(a.star(i), a.star(j), b.star(i), b.star(j));
            entry.gamma_r += 0.5 * beta * (dphi_i_j + dphi_j_i);

            let mid_ci = mid.star(i).theta().cos();
            let mid_cj = mid.star(j).theta().cos();
            let dphi_i = wrap_angle(b.star(i).phi() - a.star(i).phi());
            let dphi_j = wrap_angle(b.star(j).phi() - a.star(j).phi());
            entry.gamma_a += 0.5 * beta * (mid_ci * dphi_i + mid_cj * dphi_j);
        }
    }
    let gamma_r = per_pair
        .iter()
        .filter(|p| !p.excluded)
        .map(|p| p.gamma_r)
        .sum();
    let gamma_a = per_pair
        .iter()
        .filter(|p| !p.excluded)
        .map(|p| p.gamma_a)
        .sum();
    Ok((gamma_r, gamma_a, per_pair))
}

/// Consistency report for a rigid pair (constant d_ij along the loop).
#[derive(Clone, Copy, Debug)]
pub struct RigidPairCheck {
    /// Accumulated pair solid angle, vector form.
    pub omega_pair: f64,
    /// Constant pair distance.
    pub distance: f64,
    /// Residual of the relative/absolute decomposition with the
    /// 1 - u_i.u_j denominator, mod 2*pi.
    pub residual_one_minus_dot: f64,
    /// Same with the 1 + u_i.u_j denominator; None when that denominator
    /// degenerates (antipodal pair).
    pub residual_one_plus_dot: Option<f64>,
}

/// Accumulate Omega(u_ij) for a rigid pair and compare it against the
/// relative/absolute decomposition under both denominator conventions.
pub fn rigid_body_pair_angle(traj: &LoopTrajectory, i: usize, j: usize) -> Result<RigidPairCheck> {
    traj.require_matched()?;
    let n = traj.n();
    if i == j || i >= n || j >= n {
        return Err(Error::invalid(format!("bad pair ({i}, {j}) for n={n}")));
    }
    let distances: Vec<f64> = traj
        .samples()
        .iter()
        .map(|s| s.star(i).pair_distance(s.star(j)))
        .collect();
    let d_min = distances.iter().cloned().fold(f64::INFINITY, f64::min);
    let d_max = distances.iter().cloned().fold(0.0, f64::max);
    if d_max - d_min > 1e-8 {
        return Err(Error::invalid(format!(
            "pair ({i}, {j}) is not rigid: d varies by {:.3e}",
            d_max - d_min
        )));
    }
    let d = 0.5 * (d_min + d_max);
    if d < 1e-12 {
        // Coincident rigid pair: no relative evolution at all.
        return Ok(RigidPairCheck {
            omega_pair: 0.0,
            distance: d,
            residual_one_minus_dot: 0.0,
            residual_one_plus_dot: Some(0.0),
        });
    }

    let mut omega_pair = 0.0;
    let mut winding_i_j = 0.0; // sum of dphi'_{i(j)}
    let mut winding_j_i = 0.0;
    let mut omega_i = 0.0;
    let mut omega_j = 0.0;
    for pair in traj.samples().windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let mid = midpoints(a, b)?;
        let di = math::sub3(b.star(i).cartesian(), a.star(i).cartesian());
        let dj = math::sub3(b.star(j).cartesian(), a.star(j).cartesian());
        omega_pair += pair_solid_angle_increment(mid.star(i), mid.star(j), di, dj)?;
        winding_i_j += relative_dphi(a.star(j), a.star(i), b.star(j), b.star(i));
        winding_j_i += relative_dphi(a.star(i), a.star(j), b.star(i), b.star(j));
        omega_i += step_solid_angle(a.star(i), b.star(i));
        omega_j += step_solid_angle(a.star(j), b.star(j));
    }
    // With theta' constant, Omega_{u'_{i(j)}} = (1 - cos theta') * winding.
    let relative_sum = d * (winding_i_j + winding_j_i);
    let candidate_minus = relative_sum / d - (omega_i + omega_j);
    let residual_one_minus_dot = math::mod_2pi_distance(omega_pair, candidate_minus);
    let plus_denom = 2.0 - d;
    let residual_one_plus_dot = if plus_denom.abs() < 1e-9 {
        None
    } else {
        let candidate_plus = relative_sum / plus_denom - (omega_i + omega_j);
        Some(math::mod_2pi_distance(omega_pair, candidate_plus))
    };
    Ok(RigidPairCheck {
        omega_pair,
        distance: d,
        residual_one_minus_dot,
        residual_one_plus_dot,
    })
}

/// Assemble the full phase ledger of a matched loop, including the oracle
/// phase when the trajectory carries states.
pub fn berry_phase(traj: &LoopTrajectory) -> Result<PhaseBreakdown> {
    let (gamma_0, per_star_solid_angles) = gamma_zero(traj)?;
    let (gamma_c, pairs_c) = gamma_correlation(traj)?;
    let (gamma_r, gamma_a, mut per_pair) = gamma_relative_absolute(traj)?;
    for (entry, c) in per_pair.iter_mut().zip(&pairs_c) {
        debug_assert_eq!((entry.i, entry.j), (c.i, c.j));
        entry.gamma_c = c.gamma_c;
    }
    let gamma_total = gamma_0 + gamma_c;
    let oracle_gamma = match traj.states() {
        Some(states) => Some(berry_phase_oracle(states)?),
        None => None,
    };
    Ok(PhaseBreakdown {
        gamma_total,
        gamma_0,
        gamma_c,
        gamma_r,
        gamma_a,
        gamma_total_mod: wrap_angle(gamma_total),
        per_star_solid_angles,
        per_pair,
        closure_permutation: traj.closure_permutation().to_vec(),
        oracle_gamma,
    })
}

/// Gauge-invariant overlap-product phase of a closed chain of states:
/// gamma = arg prod_t <psi_{t+1}|psi_t> taken cyclically, in (-pi, pi].
///
/// The product is invariant under per-state phase changes, so eigensolver
/// gauges are irrelevant; states are normalized internally.
pub fn berry_phase_oracle(states: &[SpinState]) -> Result<f64> {
    if states.len() < 3 {
        return Err(Error::invalid("oracle needs at least 3 states"));
    }
    let mut phase = 0.0f64;
    let len = states.len();
    for t in 0..len {
        let a = &states[t];
        let b = &states[(t + 1) % len];
        let ovl = b.overlap(a) / (a.norm() * b.norm());
        if ovl.norm() <= 1e-6 {
            return Err(Error::Discontinuity {
                step: t,
                what: format!("consecutive state overlap {:.2e} too small", ovl.norm()),
            });
        }
        phase += ovl.arg();
    }
    Ok(wrap_angle(phase))
}
