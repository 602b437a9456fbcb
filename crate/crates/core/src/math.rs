//! Small numeric helpers: factorial tables, angle wrapping, 3-vector algebra.

use std::sync::OnceLock;

/// Largest boson/star count supported by the factorial tables.
pub const MAX_BOSONS: usize = 60;

fn sqrt_fact_table() -> &'static [f64; MAX_BOSONS + 1] {
    static TABLE: OnceLock<[f64; MAX_BOSONS + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; MAX_BOSONS + 1];
        for k in 1..=MAX_BOSONS {
            t[k] = t[k - 1] * (k as f64).sqrt();
        }
        t
    })
}

/// sqrt(k!) for k <= MAX_BOSONS.
pub fn sqrt_factorial(k: usize) -> f64 {
    sqrt_fact_table()[k]
}

/// k! in floating point, k <= MAX_BOSONS + 1.
pub fn factorial(k: usize) -> f64 {
    static TABLE: OnceLock<[f64; MAX_BOSONS + 2]> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let mut t = [1.0; MAX_BOSONS + 2];
        for k in 1..=MAX_BOSONS + 1 {
            t[k] = t[k - 1] * k as f64;
        }
        t
    });
    t[k]
}

/// (2k+1)!! = 1*3*5*...*(2k+1).
pub fn odd_double_factorial(k: usize) -> f64 {
    let mut v = 1.0;
    for j in 1..=k {
        v *= (2 * j + 1) as f64;
    }
    v
}

/// Wrap an angle difference into (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut x = a.rem_euclid(two_pi);
    if x > std::f64::consts::PI {
        x -= two_pi;
    }
    x
}

/// Distance from `a` to the nearest representative of `b` modulo 2*pi.
pub fn mod_2pi_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

pub(crate) fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

pub(crate) type Vec3 = [f64; 3];

pub(crate) fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn sub3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn norm3(a: Vec3) -> f64 {
    dot3(a, a).sqrt()
}


pub(crate) fn matvec3(m: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    [dot3(m[0], v), dot3(m[1], v), dot3(m[2], v)]
}
