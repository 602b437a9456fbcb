//! Majorana star constellations and Berry phases from star trajectories.
//!
//! A spin-J state (equivalently an n = 2J boson two-mode state, or a symmetric
//! n-qubit state) is represented by n points on the unit sphere — its Majorana
//! stars, the stereographically projected roots of the Majorana polynomial.
//! This crate converts between amplitude vectors and star constellations
//! ([`stellar`]), computes the correlation weights attached to star pairs
//! ([`correlation`]), accumulates solid angles and pair solid angles along
//! discretized loops ([`geometry`]), and assembles the Berry phase of a closed
//! adiabatic loop from the star trajectories ([`berry`]), validated against a
//! gauge-invariant overlap-product oracle. A two-mode interacting boson model
//! ([`boson`]) serves as a concrete benchmark, and star-geometry entanglement
//! measures for small symmetric states live in [`entangle`].

pub mod berry;
pub mod boson;
pub mod correlation;
pub mod entangle;
mod error;
pub mod geometry;
pub mod math;
pub mod stellar;

pub use error::{Error, Result};
pub use num_complex;
