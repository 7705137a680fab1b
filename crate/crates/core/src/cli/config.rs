//! Flat `key = value` run configuration.
//!
//! One assignment per line; `#` starts a comment. `mode = a,k,δ` may repeat
//! and adds the phase term `a·cos(kx + δ)`. `tolerance.<name> = value`
//! overrides a named diagnostic limit of the chosen experiment. Keys that the
//! experiment does not use are rejected, as are repeated keys.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::asymptotics::DEFAULT_BAND;
use crate::error::{invalid, Error, Result};
use crate::init::{three_modes, ModeSpec, ShockInitSpec};
use crate::nonrel::{Comparator, DensitySource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    DtqwShock,
    DtqwPlanewave,
    SchrodingerShock,
    PearceyMap,
    AsymptoticZones,
    NonrelCompare,
    Validation,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::DtqwShock,
        Experiment::DtqwPlanewave,
        Experiment::SchrodingerShock,
        Experiment::PearceyMap,
        Experiment::AsymptoticZones,
        Experiment::NonrelCompare,
        Experiment::Validation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::DtqwShock => "dtqw_shock",
            Experiment::DtqwPlanewave => "dtqw_planewave",
            Experiment::SchrodingerShock => "schrodinger_shock",
            Experiment::PearceyMap => "pearcey_map",
            Experiment::AsymptoticZones => "asymptotic_zones",
            Experiment::NonrelCompare => "nonrel_compare",
            Experiment::Validation => "validation",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Experiment::DtqwShock => "walk density j0(x,t) grown from a phase-modulated shock state",
            Experiment::DtqwPlanewave => "plane-wave walk: norm drift and Dirac residual",
            Experiment::SchrodingerShock => "Schrodinger density and velocity at pre-, near- and post-shock times",
            Experiment::PearceyMap => "Pearcey intensity |A I_P|^2 and the exact Bessel-series density over (x,t)",
            Experiment::AsymptoticZones => "zone I/II/III labels and the stitched saddle-point approximation",
            Experiment::NonrelCompare => "walk vs Schrodinger oracle: density and velocity errors over time",
            Experiment::Validation => "fast self-checks of the core identities",
        }
    }

    /// Keys accepted in addition to `experiment`, `mass`, `output_dir` and
    /// `tolerance.*`.
    fn keys(self) -> &'static [&'static str] {
        const SHOCK: &[&str] = &["n_sites", "q_max", "mode", "t_final", "snapshot_times", "cadence", "x_stride"];
        const PLANE: &[&str] = &["n_sites", "wavenumber", "t_final", "steps", "snapshot_times", "cadence", "x_stride"];
        const SCHRO: &[&str] = &["n_sites", "q_max", "mode", "snapshot_times", "x_stride"];
        const MAP: &[&str] = &["x_min", "x_max", "nx", "t_min", "t_max", "nt", "pearcey_tol"];
        const ZONES: &[&str] = &["x_min", "x_max", "nx", "t_min", "t_max", "nt", "pearcey_tol", "zone_band"];
        const NONREL: &[&str] = &[
            "n_sites",
            "q_max",
            "mode",
            "t_final",
            "snapshot_times",
            "x_stride",
            "oracle_mass",
            "comparator",
            "density_source",
        ];
        const VALIDATION: &[&str] = &["n_sites"];
        match self {
            Experiment::DtqwShock => SHOCK,
            Experiment::DtqwPlanewave => PLANE,
            Experiment::SchrodingerShock => SCHRO,
            Experiment::PearceyMap => MAP,
            Experiment::AsymptoticZones => ZONES,
            Experiment::NonrelCompare => NONREL,
            Experiment::Validation => VALIDATION,
        }
    }

    /// Named diagnostic limits and their defaults.
    pub fn default_tolerances(self) -> &'static [(&'static str, f64)] {
        match self {
            Experiment::DtqwShock | Experiment::DtqwPlanewave => &[("norm_drift", 1e-12)],
            Experiment::SchrodingerShock => &[("norm_drift", 1e-12), ("oracle_l2", 1e-9)],
            Experiment::PearceyMap => &[("density_l2", 0.1)],
            Experiment::AsymptoticZones => &[],
            Experiment::NonrelCompare => &[("density_l2", 0.1)],
            Experiment::Validation => &[
                ("norm_drift", 1e-12),
                ("roundtrip", 1e-12),
                ("current_identity", 1e-12),
                ("tensor_symmetry", 1e-12),
                ("pearcey_origin", 1e-8),
                ("pearcey_symmetry", 1e-8),
                ("greens_vs_spectral", 1e-7),
                ("bessel_sum_rule", 1e-13),
            ],
        }
    }

    fn uses_lattice(self) -> bool {
        matches!(
            self,
            Experiment::DtqwShock
                | Experiment::DtqwPlanewave
                | Experiment::SchrodingerShock
                | Experiment::NonrelCompare
        )
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

/// Mass of the Schrödinger oracle in `nonrel_compare`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMass {
    /// The walk's effective Galilean mass `tan θ / ε`.
    Lattice,
    /// The bare Dirac mass `m`.
    Bare,
}

/// Rectangular `(x, t)` sampling for the chart experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
}

impl MapGrid {
    pub fn xs(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.nx)
    }

    pub fn ts(&self) -> Vec<f64> {
        linspace(self.t_min, self.t_max, self.nt)
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub experiment: Experiment,
    pub n_sites: usize,
    pub mass: f64,
    pub q_max: f64,
    pub modes: Vec<ModeSpec>,
    pub t_final: f64,
    pub snapshot_times: Vec<f64>,
    pub output_dir: PathBuf,
    pub tolerances: BTreeMap<String, f64>,
    /// Steps between rows of the spacetime output.
    pub cadence: usize,
    /// Sites between columns of every spatial output.
    pub x_stride: usize,
    /// Plane-wave momentum.
    pub wavenumber: i64,
    pub grid: MapGrid,
    pub zone_band: f64,
    pub pearcey_tol: f64,
    pub oracle_mass: OracleMass,
    pub comparator: Comparator,
    pub density_source: DensitySource,
}

impl SimConfig {
    pub fn shock_spec(&self) -> ShockInitSpec {
        ShockInitSpec {
            modes: self.modes.clone(),
            q_max: self.q_max,
            mass: self.mass,
        }
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    /// Walk step count that realizes `t`, rounded down.
    pub fn step_of(&self, t: f64) -> u64 {
        let spacing = std::f64::consts::TAU / self.n_sites as f64;
        (t / spacing * (1.0 + 1e-12)).floor() as u64
    }
}

struct Entry {
    line: usize,
    value: String,
}

fn parse_error(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn number<T: FromStr>(e: &Entry, key: &str) -> Result<T> {
    e.value
        .parse()
        .map_err(|_| parse_error(e.line, format!("`{key}` expects a number, got `{}`", e.value)))
}

fn number_list(e: &Entry, key: &str) -> Result<Vec<f64>> {
    e.value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| parse_error(e.line, format!("`{key}` expects numbers, got `{s}`")))
        })
        .collect()
}

fn mode(e: &Entry) -> Result<ModeSpec> {
    let parts: Vec<&str> = e.value.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(parse_error(e.line, "`mode` expects `amplitude,wavenumber,phase`"));
    }
    let bad = |what: &str| parse_error(e.line, format!("`mode` has an invalid {what}"));
    Ok(ModeSpec::new(
        parts[0].parse().map_err(|_| bad("amplitude"))?,
        parts[1].parse().map_err(|_| bad("wavenumber"))?,
        parts[2].parse().map_err(|_| bad("phase"))?,
    ))
}

fn choice<T>(e: &Entry, key: &str, options: &[(&str, T)]) -> Result<T>
where
    T: Copy,
{
    options
        .iter()
        .find(|(name, _)| *name == e.value)
        .map(|(_, v)| *v)
        .ok_or_else(|| {
            let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
            parse_error(e.line, format!("`{key}` must be one of {}, got `{}`", names.join(", "), e.value))
        })
}

/// Parse and validate a configuration.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
    let mut modes = Vec::new();
    let mut tolerance_entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| parse_error(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim().to_string());
        if key.is_empty() {
            return Err(parse_error(line, "empty key"));
        }
        let entry = Entry { line, value };
        if key == "mode" {
            modes.push(entry);
        } else if let Some(name) = key.strip_prefix("tolerance.") {
            tolerance_entries.push((name.to_string(), entry));
        } else if entries.contains_key(key) {
            return Err(parse_error(line, format!("`{key}` is set twice")));
        } else {
            entries.insert(key.to_string(), entry);
        }
    }

    let experiment: Experiment = match entries.get("experiment") {
        Some(e) => e.value.parse().map_err(|msg: String| parse_error(e.line, msg))?,
        None => return Err(invalid("experiment", "required")),
    };
    let allowed = experiment.keys();
    for (key, e) in &entries {
        let common = matches!(key.as_str(), "experiment" | "mass" | "output_dir");
        if !common && !allowed.contains(&key.as_str()) {
            return Err(parse_error(e.line, format!("unknown key `{key}` for experiment {experiment}")));
        }
    }
    if let Some(e) = modes.first() {
        if !allowed.contains(&"mode") {
            return Err(parse_error(e.line, format!("unknown key `mode` for experiment {experiment}")));
        }
    }

    let get = |k: &str| entries.get(k);
    let mass: f64 = match get("mass") {
        Some(e) => number(e, "mass")?,
        None => return Err(invalid("mass", "required")),
    };
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(invalid("mass", format!("must be positive and finite, got {mass}")));
    }

    let n_sites: usize = match get("n_sites") {
        Some(e) => number(e, "n_sites")?,
        None if experiment.uses_lattice() => return Err(invalid("n_sites", "required")),
        None => 1024,
    };
    if n_sites < 4 || n_sites % 2 != 0 {
        return Err(invalid("n_sites", format!("must be even and at least 4, got {n_sites}")));
    }

    let default_q = match experiment {
        Experiment::SchrodingerShock => mass,
        _ => 0.1 * mass,
    };
    let q_max = get("q_max").map(|e| number(e, "q_max")).transpose()?.unwrap_or(default_q);
    let mode_specs = if modes.is_empty() {
        match experiment {
            Experiment::SchrodingerShock => vec![ModeSpec::new(1.0, 1, 0.0)],
            _ => three_modes(),
        }
    } else {
        modes.iter().map(mode).collect::<Result<_>>()?
    };

    let uses_shock = allowed.contains(&"q_max");
    if uses_shock {
        if !(q_max > 0.0) || !q_max.is_finite() {
            return Err(invalid("q_max", format!("must be positive and finite, got {q_max}")));
        }
        let spec = ShockInitSpec {
            modes: mode_specs.clone(),
            q_max,
            mass,
        };
        spec.validate(n_sites).map_err(|e| invalid("mode", e.to_string()))?;
        let is_walk = matches!(experiment, Experiment::DtqwShock | Experiment::NonrelCompare);
        if is_walk && spec.peak_speed() >= 1.0 {
            return Err(invalid(
                "q_max",
                format!("peak speed |S'|/m = {:.4} must stay below 1", spec.peak_speed()),
            ));
        }
    }

    let spacing = std::f64::consts::TAU / n_sites as f64;
    let t_final = match (get("t_final"), get("steps")) {
        (Some(e), None) => number(e, "t_final")?,
        (None, Some(e)) => number::<u64>(e, "steps")? as f64 * spacing,
        (Some(_), Some(e)) => return Err(parse_error(e.line, "set either `t_final` or `steps`, not both")),
        (None, None) => match experiment {
            Experiment::DtqwPlanewave => 10_000.0 * spacing,
            Experiment::SchrodingerShock => 1.5 * mass / q_max,
            _ if uses_shock => 1.5 * mass / q_max,
            _ => 0.0,
        },
    };
    let wavenumber: i64 = get("wavenumber").map(|e| number(e, "wavenumber")).transpose()?.unwrap_or(0);
    if 2 * wavenumber.unsigned_abs() as usize >= n_sites {
        return Err(invalid("wavenumber", format!("|q| must be below n_sites/2, got {wavenumber}")));
    }

    let tc = mass / q_max;
    let snapshot_times = match get("snapshot_times") {
        Some(e) => number_list(e, "snapshot_times")?,
        None => match experiment {
            Experiment::SchrodingerShock => vec![0.5 * tc, tc, 1.5 * tc],
            Experiment::NonrelCompare => [0.05, 0.1, 0.2, 0.5, 1.0, 1.5].iter().map(|f| f * tc).collect(),
            _ => Vec::new(),
        },
    };
    let t_final = if experiment == Experiment::SchrodingerShock {
        snapshot_times.iter().cloned().fold(0.0, f64::max)
    } else {
        t_final
    };
    if experiment.uses_lattice() {
        if !(t_final > 0.0) || !t_final.is_finite() {
            return Err(invalid("t_final", format!("must be positive, got {t_final}")));
        }
        for &t in &snapshot_times {
            if !(0.0..=t_final * (1.0 + 1e-12)).contains(&t) {
                return Err(invalid("snapshot_times", format!("{t} lies outside [0, {t_final}]")));
            }
        }
    }

    let usize_key = |k: &'static str, default: usize| -> Result<usize> {
        let v = get(k).map(|e| number::<usize>(e, k)).transpose()?.unwrap_or(default);
        if v == 0 {
            return Err(invalid(k, "must be at least 1"));
        }
        Ok(v)
    };
    let steps_total = (t_final / spacing * (1.0 + 1e-12)).floor() as usize;
    let cadence = usize_key("cadence", (steps_total / 256).max(1))?;
    let x_stride = usize_key("x_stride", (n_sites / 1024).max(1))?;

    let real_key = |k: &'static str, default: f64| -> Result<f64> {
        let v = get(k).map(|e| number::<f64>(e, k)).transpose()?.unwrap_or(default);
        if !v.is_finite() {
            return Err(invalid(k, "must be finite"));
        }
        Ok(v)
    };
    let grid = MapGrid {
        x_min: real_key("x_min", -0.5)?,
        x_max: real_key("x_max", 0.5)?,
        nx: usize_key("nx", 41)?,
        t_min: real_key("t_min", 0.7)?,
        t_max: real_key("t_max", 1.3)?,
        nt: usize_key("nt", 31)?,
    };
    if grid.x_max < grid.x_min || (grid.nx > 1 && grid.x_max == grid.x_min) {
        return Err(invalid("x_max", "must exceed x_min"));
    }
    if !(grid.t_min > 0.0) {
        return Err(invalid("t_min", "must be positive"));
    }
    if grid.t_max < grid.t_min || (grid.nt > 1 && grid.t_max == grid.t_min) {
        return Err(invalid("t_max", "must exceed t_min"));
    }
    let zone_band = real_key("zone_band", DEFAULT_BAND)?;
    if !(zone_band > 0.0) {
        return Err(invalid("zone_band", "must be positive"));
    }
    let pearcey_tol = real_key("pearcey_tol", 1e-8)?;
    if !(pearcey_tol > 0.0 && pearcey_tol <= 1e-3) {
        return Err(invalid("pearcey_tol", "must lie in (0, 1e-3]"));
    }

    let oracle_mass = match get("oracle_mass") {
        Some(e) => choice(e, "oracle_mass", &[("lattice", OracleMass::Lattice), ("bare", OracleMass::Bare)])?,
        None => OracleMass::Lattice,
    };
    let comparator = match get("comparator") {
        Some(e) => choice(e, "comparator", &[("mean", Comparator::Mean), ("left", Comparator::Left)])?,
        None => Comparator::Mean,
    };
    let density_source = match get("density_source") {
        Some(e) => choice(
            e,
            "density_source",
            &[("current", DensitySource::Current), ("comparator", DensitySource::Comparator)],
        )?,
        None => DensitySource::Current,
    };

    let mut tolerances: BTreeMap<String, f64> = experiment
        .default_tolerances()
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    for (name, e) in &tolerance_entries {
        if !tolerances.contains_key(name) {
            return Err(parse_error(e.line, format!("unknown tolerance `{name}` for experiment {experiment}")));
        }
        let v: f64 = number(e, "tolerance")?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(parse_error(e.line, format!("tolerance `{name}` must be positive")));
        }
        tolerances.insert(name.clone(), v);
    }

    let output_dir = get("output_dir")
        .map(|e| PathBuf::from(&e.value))
        .unwrap_or_else(|| PathBuf::from(format!("out/{}", experiment.name())));

    Ok(SimConfig {
        experiment,
        n_sites,
        mass,
        q_max,
        modes: mode_specs,
        t_final,
        snapshot_times,
        output_dir,
        tolerances,
        cadence,
        x_stride,
        wavenumber,
        grid,
        zone_band,
        pearcey_tol,
        oracle_mass,
        comparator,
        density_source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE_MODE: &str = "\
experiment = dtqw_shock
n_sites = 4096
mass = 512
q_max = 51.2
mode = 1, 1, 0
mode = 0.3333333333333333, 3, 0
mode = 0.5, 2, 0.9
";

    #[test]
    fn three_mode_shock_config() {
        let cfg = parse_config(THREE_MODE).unwrap();
        assert_eq!(cfg.experiment, Experiment::DtqwShock);
        assert_eq!(cfg.n_sites, 4096);
        assert_eq!(cfg.modes.len(), 3);
        assert_eq!(cfg.modes[2], ModeSpec::new(0.5, 2, 0.9));
        assert!((cfg.t_final - 15.0).abs() < 1e-12);
        assert_eq!(cfg.tolerance("norm_drift"), 1e-12);
    }

    #[test]
    fn missing_mass_is_named() {
        let err = parse_config("experiment = dtqw_shock\nn_sites = 64\n").unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "mass", .. }), "{err}");
    }

    #[test]
    fn odd_lattice_rejected() {
        let err = parse_config(&THREE_MODE.replace("4096", "4095")).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "n_sites", .. }), "{err}");
    }

    #[test]
    fn unknown_key_reports_line() {
        let err = parse_config("experiment = pearcey_map\nmass = 20\nmas = 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_config("experiment = pearcey_map\nmass = 20\nn_sites = 64\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_config("experiment = pearcey_map\nmass = 20\ntolerance.bogus = 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn superluminal_profile_rejected() {
        let text = "experiment = dtqw_shock\nn_sites = 256\nmass = 10\nq_max = 9\n";
        assert!(matches!(
            parse_config(text).unwrap_err(),
            Error::InvalidParameter { name: "q_max", .. }
        ));
    }

    #[test]
    fn snapshot_outside_run_rejected() {
        let text = "experiment = dtqw_planewave\nn_sites = 64\nmass = 4\nsteps = 10\nsnapshot_times = 5\n";
        assert!(matches!(
            parse_config(text).unwrap_err(),
            Error::InvalidParameter { name: "snapshot_times", .. }
        ));
    }

    #[test]
    fn comments_and_overrides() {
        let text = "# shock\nexperiment = schrodinger_shock # Fig-style run\nn_sites = 512\nmass = 100\n\
                    tolerance.oracle_l2 = 1e-6\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.q_max, 100.0);
        assert_eq!(cfg.snapshot_times, vec![0.5, 1.0, 1.5]);
        assert_eq!(cfg.tolerance("oracle_l2"), 1e-6);
    }

    #[test]
    fn step_rounding_is_downward() {
        let cfg = parse_config("experiment = dtqw_planewave\nn_sites = 64\nmass = 4\n").unwrap();
        let eps = std::f64::consts::TAU / 64.0;
        assert_eq!(cfg.step_of(3.0 * eps), 3);
        assert_eq!(cfg.step_of(3.9 * eps), 3);
    }
}
