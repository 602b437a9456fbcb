//! Command implementations. Each writes its artifacts into the output
//! directory and prints a short summary to stdout.

use crate::formats::*;
use crate::{CliError, CliResult};
use majorana_stars::berry::{berry_phase, LoopTrajectory, MatchOptions};
use majorana_stars::boson::{lambda_zero_reference, sweep_lambda, ControlLoop};
use majorana_stars::correlation::{
    beta, normalization_sq, normalization_sq_permanent, PERMANENT_MAX,
};
use majorana_stars::entangle::analyze;
use majorana_stars::stellar::{
    find_stars, majorana_polynomial, state_from_stars, Direction, SpinState, StarSet,
};
use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

pub enum Format {
    Csv,
    Json,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("cannot parse {}: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> CliResult<PathBuf> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::numerical(format!("serialization failed: {e}")))?;
    text.push('\n');
    fs::write(&path, text)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn write_text(dir: &Path, name: &str, text: &str) -> CliResult<PathBuf> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, text)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn star_records(state: &SpinState, stars: &StarSet) -> Vec<StarRecord> {
    let poly = majorana_polynomial(state).expect("state already validated");
    let coeffs = poly.coeffs();
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    stars
        .stars()
        .iter()
        .enumerate()
        .map(|(index, u)| {
            let [x, y, z] = u.cartesian();
            // Residual of the polynomial at the stereographic root; poles
            // (roots at 0 or infinity by degree counting) report zero.
            let residual = if u.theta() == 0.0 || u.theta() == std::f64::consts::PI {
                0.0
            } else {
                poly.eval(u.stereographic()).norm() / scale
            };
            StarRecord {
                index,
                theta: u.theta(),
                phi: u.phi(),
                x,
                y,
                z,
                residual,
            }
        })
        .collect()
}

fn stars_to_csv(file: &StarsFile) -> String {
    let mut out = String::from("index,theta,phi,x,y,z,residual\n");
    for s in &file.stars {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.index,
            csv_num(s.theta),
            csv_num(s.phi),
            csv_num(s.x),
            csv_num(s.y),
            csv_num(s.z),
            csv_num(s.residual)
        ));
    }
    out
}

pub fn cmd_stars(input: &Path, out: &Path, tol: f64, format: Format) -> CliResult<()> {
    let state = read_json::<StateFile>(input)?.to_state().map_err(CliError::input)?;
    let stars = find_stars(&state, tol)?;
    let file = StarsFile {
        schema_version: SCHEMA_VERSION,
        n: stars.n(),
        infinity_count: stars.infinity_count(),
        stars: star_records(&state, &stars),
    };
    let path = match format {
        Format::Json => write_json(out, "stars.json", &file)?,
        Format::Csv => write_text(out, "stars.csv", &stars_to_csv(&file))?,
    };
    println!(
        "{} stars ({} at infinity) -> {}",
        file.n,
        file.infinity_count,
        path.display()
    );
    Ok(())
}

pub fn cmd_state(input: &Path, out: &Path) -> CliResult<()> {
    let stars = read_json::<StarsFile>(input)?
        .to_star_set()
        .map_err(CliError::input)?;
    let state = state_from_stars(&stars)?;
    let path = write_json(out, "state.json", &StateFile::from_state(&state))?;
    println!("n = {} state -> {}", state.n(), path.display());
    Ok(())
}

pub fn cmd_norm(
    state_input: Option<&Path>,
    stars_input: Option<&Path>,
    out: &Path,
) -> CliResult<()> {
    let stars = match (state_input, stars_input) {
        (Some(p), None) => {
            let state = read_json::<StateFile>(p)?.to_state().map_err(CliError::input)?;
            find_stars(&state, majorana_stars::stellar::DEFAULT_ROOT_TOL)?
        }
        (None, Some(p)) => read_json::<StarsFile>(p)?
            .to_star_set()
            .map_err(CliError::input)?,
        _ => {
            return Err(CliError::input(
                "provide exactly one of --state or --stars".to_string(),
            ))
        }
    };
    let n = stars.n();
    let norm_sq = normalization_sq(&stars)?;
    let (permanent_value, ratio) = if n <= PERMANENT_MAX {
        let p = normalization_sq_permanent(&stars)?;
        (Some(p), Some(norm_sq / p))
    } else {
        (None, None)
    };
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push(PairBeta {
                i,
                j,
                distance: stars.star(i).pair_distance(stars.star(j)),
                beta: beta(&stars, i, j)?,
            });
        }
    }
    let report = NormReport {
        schema_version: SCHEMA_VERSION,
        n,
        norm_sq,
        permanent_value,
        ratio,
        pairs,
    };
    let path = write_json(out, "norm.json", &report)?;
    println!("N^2 = {norm_sq:.12} -> {}", path.display());
    Ok(())
}

fn build_loop(config: &LoopConfig, steps_override: Option<usize>) -> CliResult<Vec<StarSet>> {
    let latitude_samples = |n: usize, at_field: usize, theta0: f64, steps: usize| {
        (0..=steps)
            .map(|t| {
                let phi = TAU * t as f64 / steps as f64;
                let up = Direction::new(theta0, phi);
                let down = up.antipode();
                let mut stars = vec![up; at_field];
                stars.extend(vec![down; n - at_field]);
                StarSet::new(stars)
            })
            .collect::<Vec<_>>()
    };
    match config {
        LoopConfig::Dicke {
            n,
            stars_at_field,
            theta0,
            n_steps,
            ..
        } => {
            if *stars_at_field > *n {
                return Err(CliError::input(format!(
                    "stars_at_field = {stars_at_field} exceeds n = {n}"
                )));
            }
            Ok(latitude_samples(
                *n,
                *stars_at_field,
                *theta0,
                steps_override.unwrap_or(*n_steps),
            ))
        }
        LoopConfig::Coherent {
            n,
            theta0,
            n_steps,
            ..
        } => Ok(latitude_samples(
            *n,
            *n,
            *theta0,
            steps_override.unwrap_or(*n_steps),
        )),
        LoopConfig::Samples { samples, .. } => Ok(samples
            .iter()
            .map(|sample| {
                StarSet::new(
                    sample
                        .iter()
                        .map(|&[theta, phi]| Direction::new(theta, phi))
                        .collect(),
                )
            })
            .collect()),
    }
}

pub fn cmd_berry(
    config_path: &Path,
    out: &Path,
    steps_override: Option<usize>,
    trace: bool,
) -> CliResult<()> {
    let config: LoopConfig = read_json(config_path)?;
    let samples = build_loop(&config, steps_override)?;
    let states = samples
        .iter()
        .map(state_from_stars)
        .collect::<Result<Vec<_>, _>>()?;
    let traj = LoopTrajectory::from_samples(samples, Some(states), &MatchOptions::default())?;
    let bd = berry_phase(&traj)?;
    let summary = BerrySummary {
        schema_version: SCHEMA_VERSION,
        n: traj.n(),
        steps: traj.steps(),
        gamma_total: bd.gamma_total,
        gamma_total_mod: bd.gamma_total_mod,
        gamma_0: bd.gamma_0,
        gamma_c: bd.gamma_c,
        gamma_r: bd.gamma_r,
        gamma_a: bd.gamma_a,
        per_star_solid_angles: bd.per_star_solid_angles.clone(),
        closure_permutation: bd.closure_permutation.clone(),
        oracle_gamma: bd.oracle_gamma,
        oracle_deviation: bd.oracle_deviation(),
    };
    let path = write_json(out, "berry.json", &summary)?;
    if trace {
        let mut csv = String::from("step,star,theta,phi,x,y,z\n");
        for (t, sample) in traj.samples().iter().enumerate() {
            for (k, u) in sample.stars().iter().enumerate() {
                let [x, y, z] = u.cartesian();
                csv.push_str(&format!(
                    "{t},{k},{},{},{},{},{}\n",
                    csv_num(u.theta()),
                    csv_num(u.phi()),
                    csv_num(x),
                    csv_num(y),
                    csv_num(z)
                ));
            }
        }
        write_text(out, "trace.csv", &csv)?;
    }
    println!(
        "gamma = {:+.9} (mod 2pi: {:+.9}), gamma_0 = {:+.9}, gamma_C = {:+.9}, oracle dev = {:.3e} -> {}",
        summary.gamma_total,
        summary.gamma_total_mod,
        summary.gamma_0,
        summary.gamma_c,
        summary.oracle_deviation.unwrap_or(f64::NAN),
        path.display()
    );
    Ok(())
}

pub fn cmd_boson_sweep(config_path: &Path, out: &Path, tol: f64) -> CliResult<()> {
    let config: SweepConfig = read_json(config_path)?;
    if config.lambdas.is_empty() {
        return Err(CliError::input("sweep needs at least one lambda"));
    }
    let control = ControlLoop::latitude(config.theta, config.n_steps)?;
    let rows = sweep_lambda(
        config.n,
        config.level,
        config.r,
        &config.lambdas,
        &control,
        tol,
    );

    let columns = vec![
        "lambda_over_R".to_string(),
        "gamma_formula".to_string(),
        "gamma_oracle".to_string(),
        "gamma0".to_string(),
        "gammaC".to_string(),
        "gammaR".to_string(),
        "gammaA".to_string(),
        "min_gap".to_string(),
        "valid".to_string(),
    ];
    let mut csv = columns.join(",");
    csv.push('\n');
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            csv_num(row.lambda_over_r),
            csv_num(row.gamma_formula),
            csv_num(row.gamma_oracle),
            csv_num(row.gamma_0),
            csv_num(row.gamma_c),
            csv_num(row.gamma_r),
            csv_num(row.gamma_a),
            csv_num(row.min_gap),
            row.valid
        ));
    }
    let csv_path = write_text(out, "sweep.csv", &csv)?;
    write_json(
        out,
        "sweep.meta.json",
        &SweepMeta {
            schema_version: SCHEMA_VERSION,
            config: config.clone(),
            columns,
        },
    )?;

    let valid = rows.iter().filter(|r| r.valid).count();
    for row in rows.iter().filter(|r| !r.valid) {
        log::warn!(
            "lambda = {}: row invalid: {}",
            row.lambda,
            row.error.as_deref().unwrap_or("unknown")
        );
    }
    let reference = lambda_zero_reference(config.n, config.level, &control)?;
    println!(
        "{valid}/{} rows valid, lambda=0 reference gamma = {reference:+.9} -> {}",
        rows.len(),
        csv_path.display()
    );
    if valid == 0 {
        return Err(CliError::empty("no valid sweep rows"));
    }
    Ok(())
}

pub fn cmd_entangle(input: &Path, out: &Path, cluster_tol: f64) -> CliResult<()> {
    let state = read_json::<StateFile>(input)?.to_state().map_err(CliError::input)?;
    let stars = find_stars(&state, majorana_stars::stellar::DEFAULT_ROOT_TOL)?;
    let reports = analyze(&stars, cluster_tol)?;
    let output = EntangleOutput {
        schema_version: SCHEMA_VERSION,
        n: stars.n(),
        diversity: majorana_stars::entangle::diversity_degree(&stars, cluster_tol),
        measures: reports
            .iter()
            .map(|r| MeasureRecord {
                name: r.measure.name().to_string(),
                value: r.value,
                degenerate: r.degenerate,
            })
            .collect(),
    };
    let path = write_json(out, "entangle.json", &output)?;
    println!(
        "n = {}, diversity = {} -> {}",
        output.n,
        output.diversity,
        path.display()
    );
    Ok(())
}

pub fn cmd_selftest(seed: u64) -> CliResult<()> {
    use majorana_stars::math::mod_2pi_distance;

    // Deterministic low-discrepancy angles from a splitmix-style generator;
    // enough randomness for a smoke test without pulling in an RNG crate.
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };

    let mut failures = 0;

    // Round trip through the stellar representation.
    let mut worst_fidelity = 1.0f64;
    for k in 0..50 {
        let n = 1 + k % 8;
        let amps: Vec<_> = (0..=n)
            .map(|_| {
                majorana_stars::num_complex::Complex64::new(2.0 * next() - 1.0, 2.0 * next() - 1.0)
            })
            .collect();
        let state = SpinState::new(amps).unwrap();
        let stars = find_stars(&state, majorana_stars::stellar::DEFAULT_ROOT_TOL)?;
        worst_fidelity = worst_fidelity.min(state.fidelity(&state_from_stars(&stars)?));
    }
    report(
        "state<->stars round trip (50 states)",
        worst_fidelity > 1.0 - 1e-8,
        &format!("worst fidelity 1 - {:.2e}", 1.0 - worst_fidelity),
        &mut failures,
    );

    // Dicke field loop against the closed form.
    let steps = 500;
    let theta0 = 1.0 + 0.5 * next();
    let samples: Vec<StarSet> = (0..=steps)
        .map(|t| {
            let phi = TAU * t as f64 / steps as f64;
            let up = Direction::new(theta0, phi);
            StarSet::new(vec![up, up, up.antipode()])
        })
        .collect();
    let states = samples
        .iter()
        .map(state_from_stars)
        .collect::<Result<Vec<_>, _>>()?;
    let traj = LoopTrajectory::from_samples(samples, Some(states), &MatchOptions::default())?;
    let bd = berry_phase(&traj)?;
    let want = -0.5 * TAU * (1.0 - theta0.cos());
    let formula_dev = mod_2pi_distance(bd.gamma_total, want);
    let oracle_dev = bd.oracle_deviation().unwrap();
    report(
        "dicke loop closed form",
        formula_dev < 1e-6,
        &format!("deviation {formula_dev:.2e}"),
        &mut failures,
    );
    report(
        "formula vs overlap-product oracle",
        oracle_dev < 1e-3,
        &format!("deviation {oracle_dev:.2e}"),
        &mut failures,
    );

    // GHZ tangle.
    let ghz = StarSet::new(vec![
        Direction::new(TAU / 4.0, 0.0),
        Direction::new(TAU / 4.0, TAU / 3.0),
        Direction::new(TAU / 4.0, 2.0 * TAU / 3.0),
    ]);
    let tau = majorana_stars::entangle::three_tangle(&ghz)?;
    report(
        "GHZ three-tangle",
        (tau - 1.0).abs() < 1e-10,
        &format!("value {tau:.12}"),
        &mut failures,
    );

    if failures > 0 {
        Err(CliError::numerical(format!("{failures} selftest check(s) failed")))
    } else {
        Ok(())
    }
}

fn report(name: &str, ok: bool, detail: &str, failures: &mut usize) {
    if ok {
        println!("selftest: {name}: PASS ({detail})");
    } else {
        println!("selftest: {name}: FAIL ({detail})");
        *failures += 1;
    }
}
