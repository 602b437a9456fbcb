//! Spherical geometry kernel: solid-angle increments for single-star loops,
//! pair solid-angle increments in vector and spherical-coordinate form, and
//! the rotation-to-pole relative frames.
//!
//! Orientation convention: phi increases counterclockwise viewed from the
//! north pole, and the solid angle of a counterclockwise polar-cap loop is
//! positive. Accumulated solid angles are never reduced mod 4*pi here;
//! reduction is a reporting concern.

use crate::error::{Error, Result};
use crate::math::{self, clamp_unit, wrap_angle};
use crate::stellar::Direction;

/// One discretized step of a star path with unwrapped angle increments.
#[derive(Clone, Copy, Debug)]
pub struct SphericalStep {
    u_prev: Direction,
    u_next: Direction,
}

impl SphericalStep {
    pub fn new(u_prev: Direction, u_next: Direction) -> Self {
        SphericalStep { u_prev, u_next }
    }

    pub fn u_prev(&self) -> &Direction {
        &self.u_prev
    }

    pub fn u_next(&self) -> &Direction {
        &self.u_next
    }

    pub fn dtheta(&self) -> f64 {
        self.u_next.theta() - self.u_prev.theta()
    }

    /// Azimuth increment unwrapped into (-pi, pi].
    pub fn dphi(&self) -> f64 {
        wrap_angle(self.u_next.phi() - self.u_prev.phi())
    }

    pub fn mid_theta(&self) -> f64 {
        0.5 * (self.u_prev.theta() + self.u_next.theta())
    }

    /// Midpoint azimuth, consistent with the unwrapped increment across the
    /// +-pi seam.
    pub fn mid_phi(&self) -> f64 {
        self.u_prev.phi() + 0.5 * self.dphi()
    }
}

/// Im<u|du> = ((1 - cos theta)/2) dphi at the midpoint colatitude of the step.
pub fn diagonal_connection_increment(step: &SphericalStep) -> f64 {
    0.5 * (1.0 - step.mid_theta().cos()) * step.dphi()
}

/// Solid-angle contribution of one path step, midpoint rule.
pub fn step_solid_angle(a: &Direction, b: &Direction) -> f64 {
    let mid_theta = 0.5 * (a.theta() + b.theta());
    (1.0 - mid_theta.cos()) * wrap_angle(b.phi() - a.phi())
}

/// Accumulated solid angle of a closed path: sum of (1 - cos theta_mid) dphi
/// over the steps. The path closes implicitly unless the first sample is
/// already repeated at the end.
pub fn loop_solid_angle(path: &[Direction]) -> Result<f64> {
    if path.len() < 3 {
        return Err(Error::invalid("a loop needs at least 3 samples"));
    }
    let explicit_close = path[0].chordal_distance(path.last().unwrap()) < 1e-12;
    let mut total = 0.0;
    for pair in path.windows(2) {
        total += step_solid_angle(&pair[0], &pair[1]);
    }
    if !explicit_close {
        total += step_solid_angle(path.last().unwrap(), &path[0]);
    }
    Ok(total)
}

/// Pair solid-angle increment, vector form:
/// Omega(du_ij) = u_i x u_j . d(u_j - u_i) / d_ij.
pub fn pair_solid_angle_increment(
    u_i: &Direction,
    u_j: &Direction,
    du_i: [f64; 3],
    du_j: [f64; 3],
) -> Result<f64> {
    let d = u_i.pair_distance(u_j);
    if d < 1e-14 {
        return Err(Error::DegeneratePair {
            i: 0,
            j: 1,
            what: "pair solid angle undefined for coincident stars".into(),
        });
    }
    Ok(math::dot3(
        math::cross3(u_i.cartesian(), u_j.cartesian()),
        math::sub3(du_j, du_i),
    ) / d)
}

/// Pair solid-angle increment in spherical coordinates, evaluated at the step
/// midpoints:
///
/// ```text
///   [(cos ti - cos tj)(dpj - dpi) + (sin ti dtj - sin tj dti) sin(pi - pj)]
///   -------------------------------------------------------------------
///                             1 - cos theta'
///   + cos ti dpi + cos tj dpj
/// ```
pub fn pair_solid_angle_increment_spherical(
    step_i: &SphericalStep,
    step_j: &SphericalStep,
) -> Result<f64> {
    let ti = step_i.mid_theta();
    let tj = step_j.mid_theta();
    let pi_ = step_i.mid_phi();
    let pj = step_j.mid_phi();
    let cos_rel = clamp_unit(ti.cos() * tj.cos() + ti.sin() * tj.sin() * (pi_ - pj).cos());
    let denom = 1.0 - cos_rel;
    if denom < 1e-14 {
        return Err(Error::DegeneratePair {
            i: 0,
            j: 1,
            what: "relative angle vanishes".into(),
        });
    }
    let relative = ((ti.cos() - tj.cos()) * (step_j.dphi() - step_i.dphi())
        + (ti.sin() * step_j.dtheta() - tj.sin() * step_i.dtheta()) * (pi_ - pj).sin())
        / denom;
    let absolute = ti.cos() * step_i.dphi() + tj.cos() * step_j.dphi();
    Ok(relative + absolute)
}

/// Rotation T = R_y(theta) R_z(phi) mapping `u` to the north pole.
pub fn rotation_to_pole(u: &Direction) -> [[f64; 3]; 3] {
    let (st, ct) = (u.theta().sin(), u.theta().cos());
    let (sp, cp) = (u.phi().sin(), u.phi().cos());
    [
        [ct * cp, ct * sp, -st],
        [-sp, cp, 0.0],
        [st * cp, st * sp, ct],
    ]
}

/// Coordinates of `companion` in the frame where `anchor` sits at the north
/// pole.
#[derive(Clone, Copy, Debug)]
pub struct RelativeFrame {
    /// Angle between anchor and companion, in [0, pi]. Computed from the
    /// symmetric arccos so that swapping the roles gives the identical value.
    pub theta_prime: f64,
    /// Azimuth of the companion in the rotated frame, in (-pi, pi];
    /// canonicalized to 0 when degenerate.
    pub phi_prime: f64,
    /// Set when the companion sits at a pole of the rotated frame, where the
    /// azimuth is undefined (coincident or antipodal pair).
    pub degenerate: bool,
}

pub fn relative_coordinates(anchor: &Direction, companion: &Direction) -> RelativeFrame {
    let theta_prime = anchor.angle_to(companion);
    let t = rotation_to_pole(anchor);
    let v = math::matvec3(&t, companion.cartesian());
    let transverse = v[0].hypot(v[1]);
    if transverse < 1e-12 {
        RelativeFrame {
            theta_prime,
            phi_prime: 0.0,
            degenerate: true,
        }
    } else {
        RelativeFrame {
            theta_prime,
            phi_prime: v[1].atan2(v[0]),
            degenerate: false,
        }
    }
}

/// beta_ij Omega(du_ij) with the d_ij cancellation performed:
/// `beta_over_d` = -(dN^2/dd_ij)/N^2, so the product stays finite for
/// coincident stars (the cross product vanishes there).
pub fn weighted_pair_increment(
    u_i: &Direction,
    u_j: &Direction,
    du_i: [f64; 3],
    du_j: [f64; 3],
    beta_over_d: f64,
) -> f64 {
    beta_over_d
        * math::dot3(
            math::cross3(u_i.cartesian(), u_j.cartesian()),
            math::sub3(du_j, du_i),
        )
}
