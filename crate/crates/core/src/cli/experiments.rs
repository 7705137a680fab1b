//! Named experiments. Each writes its data files and a `manifest.json` into
//! the configured output directory and reports whether every diagnostic
//! stayed within its tolerance.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{Experiment, OracleMass, SimConfig};
use super::output::{emit_spacetime_csv, emit_table_csv, format_value, write_json, SpacetimeGrid};
use crate::asymptotics::{classify_zone, composite_approx, pearcey, pearcey_shock_approx, shock_map, ShockChart, Zone};
use crate::error::{Error, Result};
use crate::init::{phase_modulated_state, plane_wave, schrodinger_initial};
use crate::madelung::{
    currents, hydro_vars, max_signless_distance, phases, phi_minus_gradient, spinor_from_hydro,
    stress_energy_hydro,
};
use crate::nonrel::{comparator_wavefunction, nonrel_compare, CompareOptions};
use crate::parallel::{map_range, worker_count};
use crate::schrodinger::{
    bessel_j_sequence, fan_half_width, greens_propagate, relative_l2, schrodinger_hydro, sign_crossings,
    spectral_propagate, SingleShock, Wavefunction,
};
use crate::spectral::{grid, principal};
use crate::walk::{build_walk, dirac_residual, fitted_order, step_walk, total_norm, SpinorField, Trajectory, WalkParams};

const GAMMA_QUARTER: f64 = 3.625_609_908_221_908_3;

#[derive(Debug, Clone, Serialize)]
pub struct TimeRecord {
    pub requested: f64,
    pub realized: f64,
    pub step: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub experiment: &'static str,
    pub package_version: &'static str,
    pub created_unix_seconds: u64,
    pub worker_threads: usize,
    pub config: SimConfig,
    pub times: Vec<TimeRecord>,
    pub diagnostics: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub outputs: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub manifest: Manifest,
    pub manifest_path: PathBuf,
    /// Data files, excluding the manifest.
    pub outputs: Vec<PathBuf>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.manifest.passed
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.manifest.checks.iter().filter(|c| !c.passed)
    }
}

struct Run<'a> {
    cfg: &'a SimConfig,
    dir: PathBuf,
    outputs: Vec<PathBuf>,
    times: Vec<TimeRecord>,
    diagnostics: BTreeMap<String, Value>,
    checks: Vec<Check>,
}

impl<'a> Run<'a> {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn csv(&mut self, name: &str, grid: &SpacetimeGrid) -> Result<()> {
        let p = emit_spacetime_csv(grid, &self.path(name))?;
        self.outputs.push(p);
        Ok(())
    }

    fn diag(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.diagnostics.insert(key.to_string(), v);
    }

    fn check(&mut self, name: &str, value: f64) {
        let tolerance = self.cfg.tolerance(name);
        self.checks.push(Check {
            name: name.to_string(),
            value,
            tolerance,
            passed: value <= tolerance,
        });
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Execute the configured experiment.
pub fn run_experiment(cfg: &SimConfig) -> Result<RunReport> {
    fs::create_dir_all(&cfg.output_dir)?;
    let mut run = Run {
        cfg,
        dir: cfg.output_dir.clone(),
        outputs: Vec::new(),
        times: Vec::new(),
        diagnostics: BTreeMap::new(),
        checks: Vec::new(),
    };
    match cfg.experiment {
        Experiment::DtqwShock => dtqw_shock(&mut run)?,
        Experiment::DtqwPlanewave => dtqw_planewave(&mut run)?,
        Experiment::SchrodingerShock => schrodinger_shock(&mut run)?,
        Experiment::PearceyMap => pearcey_map(&mut run)?,
        Experiment::AsymptoticZones => asymptotic_zones(&mut run)?,
        Experiment::NonrelCompare => nonrel(&mut run)?,
        Experiment::Validation => validation(&mut run)?,
    }
    let passed = run.passed();
    let manifest = Manifest {
        experiment: cfg.experiment.name(),
        package_version: env!("CARGO_PKG_VERSION"),
        created_unix_seconds: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        worker_threads: worker_count(),
        config: cfg.clone(),
        times: run.times,
        diagnostics: run.diagnostics,
        checks: run.checks,
        outputs: run
            .outputs
            .iter()
            .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
            .collect(),
        passed,
    };
    let manifest_path = write_json(&manifest, &run.dir.join("manifest.json"))?;
    Ok(RunReport {
        manifest,
        manifest_path,
        outputs: run.outputs,
    })
}

fn strided(values: &[f64], stride: usize) -> impl Iterator<Item = f64> + '_ {
    values.iter().step_by(stride).copied()
}

fn dump_state(path: &Path, state: &SpinorField, params: &WalkParams) -> Result<PathBuf> {
    let t = format_value(params.time_of(state.step_index));
    let rows: Vec<Vec<String>> = (0..state.len())
        .map(|i| {
            vec![
                t.clone(),
                format_value(params.x_of(i)),
                format_value(state.left[i].re),
                format_value(state.left[i].im),
                format_value(state.right[i].re),
                format_value(state.right[i].im),
            ]
        })
        .collect();
    emit_table_csv(&["t", "x", "left_re", "left_im", "right_re", "right_im"], &rows, path)
}

/// Densities and norm history of one walk run.
struct WalkOutcome {
    row_times: Vec<f64>,
    rows: Vec<f64>,
    snapshots: Vec<SpinorField>,
    drift: f64,
    tail: Vec<SpinorField>,
}

/// Step from `state` to `steps`, recording the strided density every
/// `cadence` steps (and at the end) and the full state at `keep` steps.
fn drive_walk(run: &Run, params: &WalkParams, state: SpinorField, steps: u64, keep: &[u64]) -> Result<WalkOutcome> {
    let cfg = run.cfg;
    let norm0 = total_norm(&state, params);
    let mut out = WalkOutcome {
        row_times: Vec::new(),
        rows: Vec::new(),
        snapshots: Vec::new(),
        drift: 0.0,
        tail: Vec::new(),
    };
    let mut state = state;
    for step in 0..=steps {
        if step > 0 {
            state = step_walk(&state, params)?;
        }
        if !state.is_finite() {
            dump_state(&run.path("diagnostic_snapshot.csv"), &state, params)?;
            return Err(Error::Invariant(format!("non-finite amplitude at step {step}")));
        }
        out.drift = out.drift.max((total_norm(&state, params) / norm0 - 1.0).abs());
        if step % cfg.cadence as u64 == 0 || step == steps {
            out.row_times.push(params.time_of(step));
            out.rows.extend(strided(&state.density(), cfg.x_stride));
        }
        if keep.contains(&step) {
            out.snapshots.push(state.clone());
        }
        if step + 3 > steps {
            out.tail.push(state.clone());
        }
    }
    Ok(out)
}

fn lattice_x(cfg: &SimConfig) -> Vec<f64> {
    grid(cfg.n_sites).into_iter().step_by(cfg.x_stride).collect()
}

fn snapshot_steps(run: &mut Run, params: &WalkParams) -> Vec<u64> {
    let cfg = run.cfg;
    let mut steps = Vec::new();
    for &t in &cfg.snapshot_times {
        let step = cfg.step_of(t);
        run.times.push(TimeRecord {
            requested: t,
            realized: params.time_of(step),
            step: Some(step),
        });
        steps.push(step);
    }
    steps
}

fn snapshot_grid(cfg: &SimConfig, params: &WalkParams, snaps: &[SpinorField]) -> Result<SpacetimeGrid> {
    let t: Vec<f64> = snaps.iter().map(|s| params.time_of(s.step_index)).collect();
    let values: Vec<f64> = snaps
        .iter()
        .flat_map(|s| strided(&s.density(), cfg.x_stride).collect::<Vec<_>>())
        .collect();
    SpacetimeGrid::real(lattice_x(cfg), t, values)
}

fn finish_walk(run: &mut Run, params: &WalkParams, outcome: &WalkOutcome) -> Result<()> {
    run.diag("norm_drift", outcome.drift);
    run.check("norm_drift", outcome.drift);
    if !run.passed() {
        if let Some(last) = outcome.tail.last() {
            let p = dump_state(&run.path("diagnostic_snapshot.csv"), last, params)?;
            run.outputs.push(p);
        }
    }
    Ok(())
}

fn dtqw_shock(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let params = build_walk(cfg.n_sites, cfg.mass)?;
    let spec = cfg.shock_spec();
    let state = phase_modulated_state(&params, &spec)?;
    let steps = cfg.step_of(cfg.t_final);
    let keep = snapshot_steps(run, &params);
    let outcome = drive_walk(run, &params, state, steps, &keep)?;
    run.csv(
        "density.csv",
        &SpacetimeGrid::real(lattice_x(cfg), outcome.row_times.clone(), outcome.rows.clone())?,
    )?;
    if !outcome.snapshots.is_empty() {
        run.csv("snapshots.csv", &snapshot_grid(cfg, &params, &outcome.snapshots)?)?;
    }
    run.diag("steps", steps);
    run.diag("realized_t_final", params.time_of(steps));
    run.diag("coin_angle", params.coin_angle());
    run.diag("galilean_mass", params.galilean_mass());
    run.diag("peak_speed", spec.peak_speed());
    run.diag("caustic_time", spec.caustic_time());
    run.diag("density_max", outcome.rows.iter().cloned().fold(0.0, f64::max));
    finish_walk(run, &params, &outcome)
}

fn dtqw_planewave(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let params = build_walk(cfg.n_sites, cfg.mass)?;
    let state = plane_wave(&params, cfg.wavenumber)?;
    let steps = cfg.step_of(cfg.t_final);
    let keep = snapshot_steps(run, &params);
    let outcome = drive_walk(run, &params, state, steps, &keep)?;
    run.csv(
        "density.csv",
        &SpacetimeGrid::real(lattice_x(cfg), outcome.row_times.clone(), outcome.rows.clone())?,
    )?;
    if !outcome.snapshots.is_empty() {
        run.csv("snapshots.csv", &snapshot_grid(cfg, &params, &outcome.snapshots)?)?;
    }
    if outcome.tail.len() == 3 {
        let traj = Trajectory {
            params,
            cadence: 1,
            snapshots: outcome.tail.clone(),
        };
        run.diag("dirac_residual", dirac_residual(&traj, &params)?);
    }
    // residual of the first steps on three successively refined lattices
    let mut spacings = Vec::new();
    let mut residuals = Vec::new();
    for level in 0..3 {
        let p = build_walk(cfg.n_sites << level, cfg.mass)?;
        let s0 = plane_wave(&p, cfg.wavenumber)?;
        let s1 = step_walk(&s0, &p)?;
        let s2 = step_walk(&s1, &p)?;
        let traj = Trajectory {
            params: p,
            cadence: 1,
            snapshots: vec![s0, s1, s2],
        };
        spacings.push(p.spacing());
        residuals.push(dirac_residual(&traj, &p)?);
    }
    run.diag("refinement_residuals", &residuals);
    run.diag("fitted_order", fitted_order(&spacings, &residuals));
    run.diag("steps", steps);
    run.diag("coin_angle", params.coin_angle());
    finish_walk(run, &params, &outcome)
}

/// Positions in `(−π, π]` of the strided lattice.
fn centred_x(cfg: &SimConfig) -> Vec<f64> {
    lattice_x(cfg).into_iter().map(principal).collect()
}

fn schrodinger_shock(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let spec = cfg.shock_spec();
    let psi0 = schrodinger_initial(cfg.n_sites, &spec)?;
    let norm0 = psi0.norm_sqr();
    let single = cfg.modes.len() == 1
        && cfg.modes[0].amplitude == 1.0
        && cfg.modes[0].wavenumber == 1
        && cfg.modes[0].phase_offset == 0.0
        && cfg.q_max == cfg.mass;
    let oracle = if single { Some(SingleShock::new(cfg.mass)?) } else { None };
    let speed = cfg.q_max / cfg.mass;
    let xs = centred_x(cfg);
    let mut density = Vec::new();
    let mut velocity = Vec::new();
    let mut drift: f64 = 0.0;
    let mut oracle_err: f64 = 0.0;
    let mut per_time = Vec::new();
    for &t in &cfg.snapshot_times {
        run.times.push(TimeRecord {
            requested: t,
            realized: t,
            step: None,
        });
        let psi = spectral_propagate(&psi0, cfg.mass, t);
        drift = drift.max((psi.norm_sqr() / norm0 - 1.0).abs());
        if let Some(o) = &oracle {
            oracle_err = oracle_err.max(relative_l2(&psi.values, &o.on_grid(cfg.n_sites, t).values));
        }
        let h = schrodinger_hydro(&psi, cfg.mass);
        let n: Vec<f64> = strided(&h.n, cfg.x_stride).collect();
        let v: Vec<f64> = strided(&h.v, cfg.x_stride).collect();
        let (peak_idx, peak) = n
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc });
        let crossings = fan_half_width(speed * t).map(|xf| sign_crossings(&v, |i| xs[i].abs() < xf));
        per_time.push(json!({
            "t": t,
            "density_max": peak,
            "density_argmax_x": xs[peak_idx],
            "fan_half_width": fan_half_width(speed * t),
            "fan_sign_crossings": crossings,
        }));
        density.extend(n);
        velocity.extend(v);
    }
    let x = lattice_x(cfg);
    let t = cfg.snapshot_times.clone();
    run.csv("density.csv", &SpacetimeGrid::real(x.clone(), t.clone(), density)?)?;
    run.csv("velocity.csv", &SpacetimeGrid::real(x, t, velocity)?)?;
    run.diag("snapshots", per_time);
    run.diag("caustic_time", spec.caustic_time());
    run.diag("norm_drift", drift);
    run.check("norm_drift", drift);
    if oracle.is_some() {
        run.diag("oracle_l2", oracle_err);
        run.check("oracle_l2", oracle_err);
    } else {
        run.diag("oracle_l2", Value::Null);
    }
    Ok(())
}

/// `(x, t)` pairs of the chart grid, t-major.
fn chart_points(cfg: &SimConfig) -> (Vec<f64>, Vec<f64>, Vec<(f64, f64)>) {
    let xs = cfg.grid.xs();
    let ts = cfg.grid.ts();
    let pts = ts.iter().flat_map(|&t| xs.iter().map(move |&x| (x, t))).collect();
    (xs, ts, pts)
}

fn rel_l2_real(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

fn pearcey_map(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let chart = ShockChart::new(cfg.mass)?;
    let exact = SingleShock::new(cfg.mass)?;
    let (xs, ts, pts) = chart_points(cfg);
    let field: Vec<Result<Complex64>> = map_range(pts.len(), |i| {
        let (x, t) = pts[i];
        pearcey_shock_approx(x, t, &chart, cfg.pearcey_tol)
    });
    let field: Vec<Complex64> = field.into_iter().collect::<Result<_>>()?;
    let reference: Vec<Complex64> = map_range(pts.len(), |i| exact.eval(pts[i].0, pts[i].1));
    let intensity: Vec<f64> = field.iter().map(|z| z.norm_sqr()).collect();
    let exact_density: Vec<f64> = reference.iter().map(|z| z.norm_sqr()).collect();
    run.csv("pearcey_map.csv", &SpacetimeGrid::real(xs.clone(), ts.clone(), intensity.clone())?)?;
    run.csv("pearcey_field.csv", &SpacetimeGrid::complex(xs.clone(), ts.clone(), field.clone())?)?;
    run.csv("exact_density.csv", &SpacetimeGrid::real(xs, ts, exact_density.clone())?)?;
    let density_err = rel_l2_real(&intensity, &exact_density);
    run.diag("epsilon", chart.eps);
    run.diag("bessel_terms", exact.k_max() + 1);
    run.diag("complex_l2", relative_l2(&field, &reference));
    run.diag("density_l2", density_err);
    run.check("density_l2", density_err);
    Ok(())
}

#[derive(Debug, Default, Clone, Serialize)]
struct ZoneStats {
    points: usize,
    low_confidence: usize,
    max_rel_error: f64,
    mean_rel_error: f64,
    /// Largest error over points not flagged as low confidence.
    max_rel_error_confident: f64,
}

fn asymptotic_zones(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let chart = ShockChart::new(cfg.mass)?;
    let (xs, ts, pts) = chart_points(cfg);
    let evaluated: Vec<Result<(Zone, Complex64, bool, f64)>> = map_range(pts.len(), |i| {
        let (x, t) = pts[i];
        let p = shock_map(x, t, &chart)?;
        let zone = classify_zone(p.t_param, p.x_param, cfg.zone_band).zone;
        let approx = composite_approx(x, t, &chart, cfg.zone_band)?;
        let reference = p.prefactor * pearcey(-p.t_param, p.x_param, cfg.pearcey_tol)?;
        let err = (approx.value() - reference).norm() / reference.norm();
        Ok((zone, approx.value(), approx.low_confidence, err))
    });
    let evaluated: Vec<(Zone, Complex64, bool, f64)> = evaluated.into_iter().collect::<Result<_>>()?;
    let labels: Vec<f64> = evaluated.iter().map(|e| e.0.label() as f64).collect();
    let density: Vec<f64> = evaluated.iter().map(|e| e.1.norm_sqr()).collect();
    run.csv("zone_map.csv", &SpacetimeGrid::real(xs.clone(), ts.clone(), labels)?)?;
    run.csv("composite_density.csv", &SpacetimeGrid::real(xs, ts, density)?)?;
    let mut stats: BTreeMap<&str, ZoneStats> = BTreeMap::new();
    for (zone, _, low, err) in &evaluated {
        let key = match zone {
            Zone::I => "zone_1",
            Zone::II => "zone_2",
            Zone::III => "zone_3",
        };
        let s = stats.entry(key).or_default();
        s.points += 1;
        s.low_confidence += *low as usize;
        s.max_rel_error = s.max_rel_error.max(*err);
        if !low {
            s.max_rel_error_confident = s.max_rel_error_confident.max(*err);
        }
        s.mean_rel_error += err;
    }
    for s in stats.values_mut() {
        s.mean_rel_error /= s.points as f64;
    }
    run.diag("zone_band", cfg.zone_band);
    run.diag("zones", stats);
    Ok(())
}

fn nonrel(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let params = build_walk(cfg.n_sites, cfg.mass)?;
    let spec = cfg.shock_spec();
    let state = phase_modulated_state(&params, &spec)?;
    let psi0 = schrodinger_initial(cfg.n_sites, &spec)?;
    let velocity_mass = match cfg.oracle_mass {
        OracleMass::Lattice => params.galilean_mass(),
        OracleMass::Bare => cfg.mass,
    };
    let mut keep = snapshot_steps(run, &params);
    keep.sort_unstable();
    keep.dedup();
    let steps = keep.last().copied().unwrap_or(0).max(cfg.step_of(cfg.t_final));
    let mut snapshots = Vec::new();
    let mut s = state;
    for step in 0..=steps {
        if step > 0 {
            s = step_walk(&s, &params)?;
        }
        if keep.contains(&step) {
            if !s.is_finite() {
                dump_state(&run.path("diagnostic_snapshot.csv"), &s, &params)?;
                return Err(Error::Invariant(format!("non-finite amplitude at step {step}")));
            }
            snapshots.push(s.clone());
        }
    }
    let traj = Trajectory {
        params,
        cadence: 1,
        snapshots,
    };
    let oracle = |t: f64| spectral_propagate(&psi0, velocity_mass, t);
    let opts = CompareOptions {
        comparator: cfg.comparator,
        density: cfg.density_source,
        velocity_mass,
    };
    let records = nonrel_compare(&traj, oracle, cfg.mass, 1.0, &opts)?;

    let times: Vec<f64> = records.iter().map(|r| r.time).collect();
    let mut walk_n = Vec::new();
    let mut walk_v = Vec::new();
    let mut ref_n = Vec::new();
    let mut ref_v = Vec::new();
    for snap in &traj.snapshots {
        let t = params.time_of(snap.step_index);
        let psi = comparator_wavefunction(snap, cfg.mass, 1.0, t, cfg.comparator);
        let wh = schrodinger_hydro(&psi, velocity_mass);
        let density = match cfg.density_source {
            crate::nonrel::DensitySource::Current => currents(snap).j0,
            crate::nonrel::DensitySource::Comparator => wh.n.clone(),
        };
        let rh = schrodinger_hydro(&oracle(t), velocity_mass);
        walk_n.extend(strided(&density, cfg.x_stride));
        walk_v.extend(strided(&wh.v, cfg.x_stride));
        ref_n.extend(strided(&rh.n, cfg.x_stride));
        ref_v.extend(strided(&rh.v, cfg.x_stride));
    }
    let x = lattice_x(cfg);
    run.csv("walk_density.csv", &SpacetimeGrid::real(x.clone(), times.clone(), walk_n)?)?;
    run.csv("oracle_density.csv", &SpacetimeGrid::real(x.clone(), times.clone(), ref_n)?)?;
    run.csv("walk_velocity.csv", &SpacetimeGrid::real(x.clone(), times.clone(), walk_v)?)?;
    run.csv("oracle_velocity.csv", &SpacetimeGrid::real(x, times, ref_v)?)?;

    let caustic = spec.caustic_time();
    run.diag("velocity_mass", velocity_mass);
    run.diag("caustic_time", caustic);
    run.diag("errors", &records);
    let pre_shock: Vec<f64> = records
        .iter()
        .filter(|r| r.time > 0.0 && caustic.is_none_or(|tc| r.time < tc))
        .map(|r| r.density_l2)
        .collect();
    if pre_shock.is_empty() {
        run.diag("pre_shock_density_l2", Value::Null);
    } else {
        let worst = pre_shock.iter().cloned().fold(0.0, f64::max);
        run.diag("pre_shock_density_l2", worst);
        run.check("density_l2", worst);
    }
    Ok(())
}

/// Smooth state with both components bounded away from zero.
fn smooth_state(n: usize) -> SpinorField {
    let x = grid(n);
    let left = x
        .iter()
        .map(|&x| Complex64::from_polar(1.0 + 0.3 * x.cos(), 2.0 * x.sin()))
        .collect();
    let right = x
        .iter()
        .map(|&x| Complex64::from_polar(0.8 + 0.2 * (2.0 * x).sin(), (3.0 * x).cos() + 0.4))
        .collect();
    SpinorField::new(left, right).expect("equal lengths")
}

fn validation(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let params = build_walk(cfg.n_sites, cfg.mass)?;
    let s0 = smooth_state(cfg.n_sites);

    let norm0 = total_norm(&s0, &params);
    let mut s = s0.clone();
    let mut tail = Vec::new();
    for step in 1..=1000 {
        s = step_walk(&s, &params)?;
        if step >= 998 {
            tail.push(s.clone());
        }
    }
    run.check("norm_drift", (total_norm(&s, &params) / norm0 - 1.0).abs());

    let c = currents(&s0);
    let p = phases(&s0);
    let back = spinor_from_hydro(&c, &p)?;
    run.check("roundtrip", max_signless_distance(&s0, &back));

    let identity = (0..s0.len())
        .map(|i| {
            let lhs = c.j0[i] * c.j0[i] - c.j1[i] * c.j1[i];
            let rhs = 4.0 * s0.left[i].norm_sqr() * s0.right[i].norm_sqr();
            (lhs - rhs).abs()
        })
        .fold(0.0, f64::max);
    run.check("current_identity", identity);

    let h = hydro_vars(&currents(&tail[1]), &phases(&tail[1]), cfg.mass);
    let grad = phi_minus_gradient(&tail[0], &tail[1], &tail[2], params.dt());
    let tensor = stress_energy_hydro(&h, &grad);
    let scale = tensor.t00.iter().map(|v| v.abs()).fold(0.0, f64::max);
    run.check("tensor_symmetry", tensor.max_asymmetry() / scale);

    let origin = Complex64::from_polar(GAMMA_QUARTER / 2.0, PI / 8.0);
    run.check("pearcey_origin", (pearcey(0.0, 0.0, 1e-12)? - origin).norm());

    let mut sym: f64 = 0.0;
    for (t, x) in [(1.0, 0.7), (-4.0, 2.5), (6.0, 3.1), (0.0, 9.0)] {
        sym = sym.max((pearcey(t, x, 1e-10)? - pearcey(t, -x, 1e-10)?).norm());
    }
    run.check("pearcey_symmetry", sym);

    let n = 64;
    let psi0 = Wavefunction {
        values: grid(n)
            .iter()
            .map(|&x| {
                Complex64::new(1.0, 0.0)
                    + Complex64::from_polar(0.5, x)
                    + Complex64::from_polar(0.25, -2.0 * x + 0.3)
            })
            .collect(),
        time: 0.0,
    };
    let (m, t) = (5.0, 0.4);
    let window = crate::schrodinger::default_window(m, t, 2.0 / m);
    let green = greens_propagate(&psi0, m, t, window, 1e-10)?;
    run.check(
        "greens_vs_spectral",
        relative_l2(&green.values, &spectral_propagate(&psi0, m, t).values),
    );

    let j = bessel_j_sequence(cfg.mass, (cfg.mass + 40.0 * cfg.mass.cbrt()).ceil() as usize + 40);
    let sum = j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>();
    run.check("bessel_sum_rule", (sum - 1.0).abs());

    let rows: Vec<Vec<String>> = run
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                format_value(c.value),
                format_value(c.tolerance),
                c.passed.to_string(),
            ]
        })
        .collect();
    let path = emit_table_csv(&["name", "value", "tolerance", "passed"], &rows, &run.path("checks.csv"))?;
    run.outputs.push(path);
    run.diag("coin_angle", params.coin_angle());
    Ok(())
}
