//! File formats: JSON records for states, stars, loop and sweep configs, and
//! the CSV/JSON result writers. Every record carries a `schema_version`.

use majorana_stars::num_complex::Complex64 as C64;
use majorana_stars::stellar::{Direction, SpinState, StarSet};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Format floats with 17 significant digits for CSV output.
pub fn csv_num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Serialize, Deserialize, Debug)]
pub struct StateFile {
    pub schema_version: u32,
    pub n: usize,
    /// Amplitudes [re, im] stored low-to-high by J + m.
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &SpinState) -> Self {
        StateFile {
            schema_version: SCHEMA_VERSION,
            n: state.n(),
            amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn to_state(&self) -> Result<SpinState, String> {
        if self.amplitudes.len() != self.n + 1 {
            return Err(format!(
                "state file declares n = {} but carries {} amplitudes",
                self.n,
                self.amplitudes.len()
            ));
        }
        SpinState::new(
            self.amplitudes
                .iter()
                .map(|&[re, im]| C64::new(re, im))
                .collect(),
        )
        .map_err(|e| e.to_string())
    }
}

#[derive(Serialize, Deserialize, Debug)]
pub struct StarRecord {
    pub index: usize,
    pub theta: f64,
    pub phi: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// Relative residual of the Majorana polynomial at this star's root
    /// (zero by convention for stars pinned at a pole by degree counting).
    pub residual: f64,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct StarsFile {
    pub schema_version: u32,
    pub n: usize,
    pub infinity_count: usize,
    pub stars: Vec<StarRecord>,
}

impl StarsFile {
    pub fn to_star_set(&self) -> Result<StarSet, String> {
        if self.stars.len() != self.n {
            return Err(format!(
                "stars file declares n = {} but carries {} stars",
                self.n,
                self.stars.len()
            ));
        }
        Ok(StarSet::new(
            self.stars
                .iter()
                .map(|s| Direction::new(s.theta, s.phi))
                .collect(),
        ))
    }
}

/// Loop configurations accepted by `mstars berry`.
#[derive(Serialize, Deserialize, Debug)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LoopConfig {
    /// (J+m) stars riding a latitude loop with the rest antipodal.
    Dicke {
        schema_version: u32,
        n: usize,
        stars_at_field: usize,
        theta0: f64,
        n_steps: usize,
    },
    /// All n stars coincident on a latitude loop.
    Coherent {
        schema_version: u32,
        n: usize,
        theta0: f64,
        n_steps: usize,
    },
    /// Explicit closed sample list: samples[t][k] = [theta, phi].
    Samples {
        schema_version: u32,
        samples: Vec<Vec<[f64; 2]>>,
    },
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SweepConfig {
    pub schema_version: u32,
    pub n: usize,
    /// 0-based energy level at the starting point.
    pub level: usize,
    pub r: f64,
    pub theta: f64,
    pub n_steps: usize,
    pub lambdas: Vec<f64>,
}

#[derive(Serialize, Debug)]
pub struct BerrySummary {
    pub schema_version: u32,
    pub n: usize,
    pub steps: usize,
    pub gamma_total: f64,
    pub gamma_total_mod: f64,
    pub gamma_0: f64,
    pub gamma_c: f64,
    pub gamma_r: f64,
    pub gamma_a: f64,
    pub per_star_solid_angles: Vec<f64>,
    pub closure_permutation: Vec<usize>,
    pub oracle_gamma: Option<f64>,
    /// |gamma_total - oracle| mod 2 pi.
    pub oracle_deviation: Option<f64>,
}

#[derive(Serialize, Debug)]
pub struct NormReport {
    pub schema_version: u32,
    pub n: usize,
    pub norm_sq: f64,
    /// n! times the Gram permanent; absent when n exceeds the oracle limit.
    pub permanent_value: Option<f64>,
    pub ratio: Option<f64>,
    pub pairs: Vec<PairBeta>,
}

#[derive(Serialize, Debug)]
pub struct PairBeta {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
    pub beta: f64,
}

#[derive(Serialize, Debug)]
pub struct EntangleOutput {
    pub schema_version: u32,
    pub n: usize,
    pub diversity: usize,
    pub measures: Vec<MeasureRecord>,
}

#[derive(Serialize, Debug)]
pub struct MeasureRecord {
    pub name: String,
    pub value: f64,
    pub degenerate: bool,
}

#[derive(Serialize, Debug)]
pub struct SweepMeta {
    pub schema_version: u32,
    pub config: SweepConfig,
    pub columns: Vec<String>,
}
