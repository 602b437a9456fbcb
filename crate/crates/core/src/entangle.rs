//! Star-geometry entanglement measures for symmetric multiqubit states.
//!
//! The diversity degree n_s (number of distinct star positions) classifies
//! the state: separable (n_s = 1), W type (n_s = 2), GHZ type (n_s = n).
//! The measures themselves are built from pair distances and the correlation
//! machinery: two-qubit concurrence d12 / (2 N_2^2), the W-type concurrence
//! 2 d12 / (3 N_3^2), the 3-tangle (2/3) b12 b13 b23 N_3^2, and an
//! experimental normalized product of distances between distinct stars.

use crate::correlation::{beta, normalization_sq};
use crate::error::{Error, Result};
use crate::stellar::StarSet;

/// Default angular clustering threshold for deciding star distinctness.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

/// Coefficient relating the W-type concurrence to the correlation phase of a
/// three-star state: gamma_C = (3/2) oint Omega(du_12) C_12.
pub const W_CONCURRENCE_PHASE_COEFFICIENT: f64 = 1.5;

/// Single-linkage clusters of star indices under the angular threshold.
pub fn star_clusters(stars: &StarSet, cluster_tol: f64) -> Vec<Vec<usize>> {
    let n = stars.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if stars.star(i).angle_to(stars.star(j)) <= cluster_tol {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut label: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        match label[r] {
            Some(c) => clusters[c].push(i),
            None => {
                label[r] = Some(clusters.len());
                clusters.push(vec![i]);
            }
        }
    }
    clusters
}

/// Number of distinct star positions under single-linkage clustering.
pub fn diversity_degree(stars: &StarSet, cluster_tol: f64) -> usize {
    star_clusters(stars, cluster_tol).len()
}

/// Two-qubit concurrence C = d12 / (2 N_2^2).
pub fn concurrence_two(stars: &StarSet) -> Result<f64> {
    if stars.n() != 2 {
        return Err(Error::invalid("two-qubit concurrence needs exactly 2 stars"));
    }
    let d = stars.star(0).pair_distance(stars.star(1));
    Ok(d / (2.0 * normalization_sq(stars)?))
}

/// W-type concurrence of a three-star state with exactly two distinct
/// positions.
#[derive(Clone, Copy, Debug)]
pub struct WConcurrence {
    /// C_12 = 2 d12 / (3 N_3^2).
    pub value: f64,
    /// Distance between the two distinct star positions.
    pub pair_distance: f64,
    /// Coefficient of the correlation-phase form for this class.
    pub phase_coefficient: f64,
}

pub fn concurrence_w(stars: &StarSet, cluster_tol: f64) -> Result<WConcurrence> {
    if stars.n() != 3 {
        return Err(Error::invalid("W-type concurrence needs exactly 3 stars"));
    }
    let clusters = star_clusters(stars, cluster_tol);
    if clusters.len() != 2 {
        return Err(Error::Classification(format!(
            "W-type concurrence needs diversity 2, found {}",
            clusters.len()
        )));
    }
    let d = stars
        .star(clusters[0][0])
        .pair_distance(stars.star(clusters[1][0]));
    Ok(WConcurrence {
        value: 2.0 * d / (3.0 * normalization_sq(stars)?),
        pair_distance: d,
        phase_coefficient: W_CONCURRENCE_PHASE_COEFFICIENT,
    })
}

/// 3-tangle tau = (2/3) beta_12 beta_13 beta_23 N_3^2.
pub fn three_tangle(stars: &StarSet) -> Result<f64> {
    if stars.n() != 3 {
        return Err(Error::invalid("3-tangle needs exactly 3 stars"));
    }
    let b12 = beta(stars, 0, 1)?;
    let b13 = beta(stars, 0, 2)?;
    let b23 = beta(stars, 1, 2)?;
    Ok(2.0 / 3.0 * b12 * b13 * b23 * normalization_sq(stars)?)
}

/// The normalized product of distances between distinct star positions:
/// (prod_{i<j} d_ij) / N_n^{2 (n_s - 1)}, with the product over the n_s
/// cluster representatives. Experimental; n_s = 1 yields the empty-product
/// value 1 and is flagged degenerate (a separable state is unentangled).
#[derive(Clone, Copy, Debug)]
pub struct ProductMeasure {
    pub value: f64,
    pub diversity: usize,
    pub degenerate: bool,
}

pub fn product_measure(stars: &StarSet, cluster_tol: f64) -> Result<ProductMeasure> {
    let clusters = star_clusters(stars, cluster_tol);
    let ns = clusters.len();
    if ns == 1 {
        return Ok(ProductMeasure {
            value: 1.0,
            diversity: 1,
            degenerate: true,
        });
    }
    let mut product = 1.0;
    for a in 0..ns {
        for b in (a + 1)..ns {
            product *= stars
                .star(clusters[a][0])
                .pair_distance(stars.star(clusters[b][0]));
        }
    }
    let norm = normalization_sq(stars)?;
    Ok(ProductMeasure {
        value: product / norm.powi(ns as i32 - 1),
        diversity: ns,
        degenerate: false,
    })
}

/// Named measure values for reporting.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasureKind {
    Concurrence,
    WConcurrence,
    ThreeTangle,
    ProductMeasure,
}

impl MeasureKind {
    pub fn name(&self) -> &'static str {
        match self {
            MeasureKind::Concurrence => "concurrence",
            MeasureKind::WConcurrence => "W-concurrence",
            MeasureKind::ThreeTangle => "three-tangle",
            MeasureKind::ProductMeasure => "product-measure",
        }
    }
}

#[derive(Clone, Debug)]
pub struct EntanglementReport {
    pub n: usize,
    pub diversity: usize,
    pub measure: MeasureKind,
    pub value: f64,
    pub degenerate: bool,
}

/// Every measure applicable to the star set, in a fixed order.
pub fn analyze(stars: &StarSet, cluster_tol: f64) -> Result<Vec<EntanglementReport>> {
    let n = stars.n();
    let ns = diversity_degree(stars, cluster_tol);
    let mut out = Vec::new();
    if n == 2 {
        out.push(EntanglementReport {
            n,
            diversity: ns,
            measure: MeasureKind::Concurrence,
            value: concurrence_two(stars)?,
            degenerate: ns == 1,
        });
    }
    if n == 3 {
        if ns == 2 {
            out.push(EntanglementReport {
                n,
                diversity: ns,
                measure: MeasureKind::WConcurrence,
                value: concurrence_w(stars, cluster_tol)?.value,
                degenerate: false,
            });
        }
        out.push(EntanglementReport {
            n,
            diversity: ns,
            measure: MeasureKind::ThreeTangle,
            value: three_tangle(stars)?,
            degenerate: ns < 3,
        });
    }
    let pm = product_measure(stars, cluster_tol)?;
    out.push(EntanglementReport {
        n,
        diversity: ns,
        measure: MeasureKind::ProductMeasure,
        value: pm.value,
        degenerate: pm.degenerate,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rotation_to_pole;
    use crate::math;
    use crate::stellar::Direction;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(seed)
    }

    fn ghz_triple() -> StarSet {
        StarSet::new(vec![
            Direction::new(FRAC_PI_2, 0.0),
            Direction::new(FRAC_PI_2, 2.0 * PI / 3.0),
            Direction::new(FRAC_PI_2, 4.0 * PI / 3.0),
        ])
    }

    fn w_dicke() -> StarSet {
        StarSet::new(vec![Direction::north(), Direction::north(), Direction::south()])
    }

    #[test]
    fn diversity_classification() {
        let coincident = StarSet::new(vec![Direction::new(1.0, 2.0); 3]);
        assert_eq!(diversity_degree(&coincident, DEFAULT_CLUSTER_TOL), 1);
        assert_eq!(diversity_degree(&w_dicke(), DEFAULT_CLUSTER_TOL), 2);
        assert_eq!(diversity_degree(&ghz_triple(), DEFAULT_CLUSTER_TOL), 3);
    }

    #[test]
    fn concurrence_two_cases() {
        let coincident = StarSet::new(vec![Direction::new(1.0, 2.0); 2]);
        assert_eq!(concurrence_two(&coincident).unwrap(), 0.0);

        let bell = StarSet::new(vec![Direction::north(), Direction::south()]);
        assert_abs_diff_eq!(concurrence_two(&bell).unwrap(), 1.0, epsilon = 1e-13);

        // d = 1 (orthogonal directions): C = d/(4-d) = 1/3.
        let ortho = StarSet::new(vec![Direction::north(), Direction::new(FRAC_PI_2, 0.7)]);
        assert_abs_diff_eq!(concurrence_two(&ortho).unwrap(), 1.0 / 3.0, epsilon = 1e-13);

        assert!(concurrence_two(&ghz_triple()).is_err());
    }

    /// Wootters concurrence of the pure two-qubit state built from two stars.
    fn wootters_two(stars: &StarSet) -> f64 {
        // psi = normalized symmetrized product of |u1>, |u2>.
        let qubit = |u: &Direction| {
            [
                num_complex::Complex64::new((u.theta() / 2.0).cos(), 0.0),
                num_complex::Complex64::from_polar((u.theta() / 2.0).sin(), u.phi()),
            ]
        };
        let (a, b) = (qubit(stars.star(0)), qubit(stars.star(1)));
        let mut psi = [[num_complex::Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                psi[i][j] = 0.5 * (a[i] * b[j] + a[j] * b[i]);
            }
        }
        let norm_sq: f64 = psi.iter().flatten().map(|z| z.norm_sqr()).sum();
        // C = 2 |psi00 psi11 - psi01 psi10| / norm.
        2.0 * (psi[0][0] * psi[1][1] - psi[0][1] * psi[1][0]).norm() / norm_sq
    }

    #[test]
    fn concurrence_two_matches_wootters() {
        let mut r = rng(3);
        for _ in 0..100 {
            let stars = StarSet::new(vec![
                Direction::new(r.gen_range(0.0..PI), r.gen_range(0.0..TAU)),
                Direction::new(r.gen_range(0.0..PI), r.gen_range(0.0..TAU)),
            ]);
            assert_abs_diff_eq!(
                concurrence_two(&stars).unwrap(),
                wootters_two(&stars),
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn w_concurrence_cases() {
        let report = concurrence_w(&w_dicke(), DEFAULT_CLUSTER_TOL).unwrap();
        // Known pairwise concurrence of the 3-qubit W state: 2/3.
        assert_abs_diff_eq!(report.value, 2.0 / 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(report.pair_distance, 2.0, epsilon = 1e-13);
        assert_eq!(report.phase_coefficient, 1.5);

        // Two coincident at the pole plus one at the equator.
        let tilted = StarSet::new(vec![
            Direction::north(),
            Direction::north(),
            Direction::new(FRAC_PI_2, 0.3),
        ]);
        let c = concurrence_w(&tilted, DEFAULT_CLUSTER_TOL).unwrap().value;
        assert!(c > 0.0 && c < 1.0);

        assert!(concurrence_w(&ghz_triple(), DEFAULT_CLUSTER_TOL).is_err());
    }

    #[test]
    fn w_concurrence_vanishes_continuously() {
        // Move the lone star toward the doubled pair: C -> 0 linearly in d.
        for eps in [0.3, 0.1, 0.03, 0.01] {
            let stars = StarSet::new(vec![
                Direction::north(),
                Direction::north(),
                Direction::new(eps, 0.0),
            ]);
            let c = concurrence_w(&stars, DEFAULT_CLUSTER_TOL).unwrap().value;
            let d = 1.0 - eps.cos();
            assert!(c > 0.0 && c < 1.2 * d, "eps={eps}: c={c} d={d}");
        }
    }

    #[test]
    fn three_tangle_cases() {
        assert_abs_diff_eq!(three_tangle(&ghz_triple()).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(three_tangle(&w_dicke()).unwrap(), 0.0);
        let separable = StarSet::new(vec![Direction::new(0.8, 0.1); 3]);
        assert_eq!(three_tangle(&separable).unwrap(), 0.0);
    }

    /// Symmetric 3-qubit tensor from a star set (qubit |0> along +z).
    fn symmetric_tensor(stars: &StarSet) -> [num_complex::Complex64; 8] {
        let state = crate::stellar::state_from_stars(stars).unwrap();
        let amps = state.amplitudes();
        let mut psi = [num_complex::Complex64::new(0.0, 0.0); 8];
        for idx in 0..8usize {
            let ones = (idx as u32).count_ones() as usize; // qubits in |1>
            let k = 3 - ones; // bosons in mode a
            let binom: f64 = [1.0, 3.0, 3.0, 1.0][k];
            psi[idx] = amps[k] / binom.sqrt();
        }
        psi
    }

    /// Cayley hyperdeterminant 3-tangle tau = 4 |Det psi|.
    fn hyperdeterminant_tangle(psi: &[num_complex::Complex64; 8]) -> f64 {
        let p = |i: usize, j: usize, k: usize| psi[4 * i + 2 * j + k];
        let d1 = p(0, 0, 0).powu(2) * p(1, 1, 1).powu(2)
            + p(0, 0, 1).powu(2) * p(1, 1, 0).powu(2)
            + p(0, 1, 0).powu(2) * p(1, 0, 1).powu(2)
            + p(1, 0, 0).powu(2) * p(0, 1, 1).powu(2);
        let d2 = p(0, 0, 0) * p(1, 1, 1) * p(0, 1, 1) * p(1, 0, 0)
            + p(0, 0, 0) * p(1, 1, 1) * p(1, 0, 1) * p(0, 1, 0)
            + p(0, 0, 0) * p(1, 1, 1) * p(1, 1, 0) * p(0, 0, 1)
            + p(0, 1, 1) * p(1, 0, 0) * p(1, 0, 1) * p(0, 1, 0)
            + p(0, 1, 1) * p(1, 0, 0) * p(1, 1, 0) * p(0, 0, 1)
            + p(1, 0, 1) * p(0, 1, 0) * p(1, 1, 0) * p(0, 0, 1);
        let d3 = p(0, 0, 0) * p(1, 1, 0) * p(1, 0, 1) * p(0, 1, 1)
            + p(1, 1, 1) * p(0, 0, 1) * p(0, 1, 0) * p(1, 0, 0);
        4.0 * (d1 - 2.0 * d2 + 4.0 * d3).norm()
    }

    #[test]
    fn three_tangle_matches_hyperdeterminant() {
        let mut r = rng(5);
        for _ in 0..100 {
            let stars = StarSet::new(
                (0..3)
                    .map(|_| Direction::new(r.gen_range(0.2..PI - 0.2), r.gen_range(0.0..TAU)))
                    .collect(),
            );
            let tau = three_tangle(&stars).unwrap();
            assert!((-1e-12..=1.0 + 1e-9).contains(&tau), "tau out of range: {tau}");
            let psi = symmetric_tensor(&stars);
            assert_abs_diff_eq!(tau, hyperdeterminant_tangle(&psi), epsilon = 1e-8);
        }
        // GHZ pins the normalization of both routes.
        assert_abs_diff_eq!(
            hyperdeterminant_tangle(&symmetric_tensor(&ghz_triple())),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn product_measure_cases() {
        let separable = StarSet::new(vec![Direction::new(0.9, 0.4); 4]);
        let pm = product_measure(&separable, DEFAULT_CLUSTER_TOL).unwrap();
        assert!(pm.degenerate);
        assert_eq!((pm.value, pm.diversity), (1.0, 1));

        // n=2: value = d / N^2 = 2 * concurrence.
        let mut r = rng(7);
        for _ in 0..50 {
            let stars = StarSet::new(vec![
                Direction::new(r.gen_range(0.1..PI - 0.1), r.gen_range(0.0..TAU)),
                Direction::new(r.gen_range(0.1..PI - 0.1), r.gen_range(0.0..TAU)),
            ]);
            let pm = product_measure(&stars, DEFAULT_CLUSTER_TOL).unwrap();
            assert_abs_diff_eq!(
                pm.value,
                2.0 * concurrence_two(&stars).unwrap(),
                epsilon = 1e-12
            );
        }

        // GHZ triple: (3/2)^3 / (3/2)^2 = 3/2, reported as-is.
        let pm = product_measure(&ghz_triple(), DEFAULT_CLUSTER_TOL).unwrap();
        assert_abs_diff_eq!(pm.value, 1.5, epsilon = 1e-12);
        assert_eq!(pm.diversity, 3);
    }

    #[test]
    fn measures_are_rotation_invariant() {
        let mut r = rng(9);
        for _ in 0..100 {
            let stars: Vec<Direction> = (0..3)
                .map(|_| Direction::new(r.gen_range(0.1..PI - 0.1), r.gen_range(0.0..TAU)))
                .collect();
            let set = StarSet::new(stars.clone());
            let axis = Direction::new(r.gen_range(0.0..PI), r.gen_range(0.0..TAU));
            let rot = rotation_to_pole(&axis);
            let rotated = StarSet::new(
                stars
                    .iter()
                    .map(|u| Direction::from_cartesian(math::matvec3(&rot, u.cartesian())))
                    .collect(),
            );
            assert_abs_diff_eq!(
                three_tangle(&set).unwrap(),
                three_tangle(&rotated).unwrap(),
                epsilon = 1e-10
            );
            assert_abs_diff_eq!(
                product_measure(&set, DEFAULT_CLUSTER_TOL).unwrap().value,
                product_measure(&rotated, DEFAULT_CLUSTER_TOL).unwrap().value,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn tangle_degenerates_continuously() {
        // Slide one GHZ star toward another along the equator.
        let mut last = f64::INFINITY;
        for sep in [1.0, 0.3, 0.1, 0.03, 0.01] {
            let stars = StarSet::new(vec![
                Direction::new(FRAC_PI_2, 0.0),
                Direction::new(FRAC_PI_2, sep),
                Direction::new(FRAC_PI_2, 4.0 * PI / 3.0),
            ]);
            let tau = three_tangle(&stars).unwrap();
            assert!(tau >= 0.0 && tau < last);
            last = tau;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn analyze_collects_applicable_measures() {
        let reports = analyze(&ghz_triple(), DEFAULT_CLUSTER_TOL).unwrap();
        let names: Vec<&str> = reports.iter().map(|r| r.measure.name()).collect();
        assert_eq!(names, vec!["three-tangle", "product-measure"]);
        for r in &reports {
            assert!(r.value >= 0.0);
            assert!(r.value <= 1.5 + 1e-9);
        }

        let reports = analyze(&w_dicke(), DEFAULT_CLUSTER_TOL).unwrap();
        let names: Vec<&str> = reports.iter().map(|r| r.measure.name()).collect();
        assert_eq!(
            names,
            vec!["W-concurrence", "three-tangle", "product-measure"]
        );
    }
}
