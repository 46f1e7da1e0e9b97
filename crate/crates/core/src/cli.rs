//! Batch front-end: config parsing, experiment orchestration, caching and
//! CSV/JSON emission.

use std::collections::hash_map::DefaultHasher;
use std::fs;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::autoform::{CuspForm4, STANDARD_R_TRUNC};
use crate::bifurcation::{
    density_noise_floor, equidistribution_compare, grid_holonomies, laplacian_density, negative_fraction, scan_with, trace_locus,
    write_loci_csv, GridSpec, ScanGrid, ScanParams, SliceFamily,
};
use crate::brownian::{stream_rng, MAX_DT, MAX_T};
use crate::devmap::{ProjectiveStructure, MAX_ABS_C};
use crate::error::{Error, Result};
use crate::estimators::{
    default_centers, default_targets, degree_estimate, dimension_estimate, lyapunov_ball, lyapunov_ball_slope, lyapunov_brownian,
    poisson_angle, predict_chi, sample_harmonic, Estimate, HarmonicSample,
};
use crate::moebius::{c64, C64};
use crate::stats::ks_one_sample;

pub const SCHEMA_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "PROJLAB_CACHE";

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Lyapunov,
    Degree,
    Harmonic,
    Dimension,
    VerifyFormula,
    Scan,
    Traceloci,
    Compare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Lyapunov => "lyapunov",
            Command::Degree => "degree",
            Command::Harmonic => "harmonic",
            Command::Dimension => "dimension",
            Command::VerifyFormula => "verify-formula",
            Command::Scan => "scan",
            Command::Traceloci => "traceloci",
            Command::Compare => "compare",
        }
    }
}

/// Command-line arguments of the `projlab` binary.
#[derive(Debug, Parser)]
#[command(name = "projlab", version, about = "Lyapunov exponents, degrees and harmonic measures of projective structures")]
pub struct Args {
    pub command: Command,
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Grid window of a scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default)]
    pub center: [f64; 2],
    pub spacing: f64,
    pub n: usize,
}

impl GridConfig {
    pub fn spec(&self) -> GridSpec {
        GridSpec::centered(c64(self.center[0], self.center[1]), self.spacing, self.n)
    }
}

/// Trace-locus selection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LociConfig {
    #[serde(default = "default_lengths")]
    pub lengths: Vec<f64>,
    #[serde(default = "default_per_length")]
    pub per_length: usize,
    #[serde(default = "default_trace")]
    pub trace: [f64; 2],
}

impl Default for LociConfig {
    fn default() -> Self {
        Self { lengths: default_lengths(), per_length: default_per_length(), trace: default_trace() }
    }
}

fn default_lengths() -> Vec<f64> {
    vec![4.0, 6.0, 8.0]
}
fn default_per_length() -> usize {
    3
}
fn default_trace() -> [f64; 2] {
    [4.0, 0.0]
}
fn default_t() -> f64 {
    200.0
}
fn default_dt() -> f64 {
    0.005
}
fn default_r() -> f64 {
    8.0
}
fn default_n() -> usize {
    400
}
fn default_seed() -> u64 {
    1
}
fn default_ball_radius() -> f64 {
    12.0
}
fn default_ball_draws() -> usize {
    4000
}
fn default_centers_count() -> usize {
    3
}
fn default_boot() -> usize {
    50
}

/// Experiment configuration, read from a TOML file. Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// When present it must match the command given on the command line.
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default)]
    pub c: [f64; 2],
    #[serde(rename = "T", default = "default_t")]
    pub t: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(rename = "R", default = "default_r")]
    pub r: f64,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub cache: Option<PathBuf>,
    /// Number of fixed centers used by the degree estimator (at most 6).
    #[serde(default = "default_centers_count")]
    pub centers: usize,
    /// Radius of the geodesic ball for the ball estimators.
    #[serde(default = "default_ball_radius")]
    pub ball_radius: f64,
    #[serde(default = "default_ball_draws")]
    pub ball_draws: usize,
    /// Scan values use log-norm increments after this time.
    #[serde(default)]
    pub burn_in: f64,
    #[serde(default = "default_boot")]
    pub bootstrap: usize,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub loci: Option<LociConfig>,
    /// Negative control: replaces the degree estimate in verify-formula.
    #[serde(default)]
    pub inject_delta: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config uses defaults")
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::precondition(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::precondition(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn c(&self) -> C64 {
        c64(self.c[0], self.c[1])
    }

    /// Checks every field the command will use.
    pub fn validate(&self, cmd: Command) -> Result<()> {
        if let Some(declared) = self.command {
            if declared != cmd {
                return Err(Error::precondition(format!("config is for {} but {} was requested", declared.name(), cmd.name())));
            }
        }
        let needs_paths = matches!(
            cmd,
            Command::Lyapunov
                | Command::Harmonic
                | Command::Dimension
                | Command::VerifyFormula
                | Command::Scan
                | Command::Traceloci
                | Command::Compare
        );
        if needs_paths {
            if !(self.t > 0.0 && self.t <= MAX_T) {
                return Err(Error::precondition(format!("T must lie in (0, {MAX_T}], got {}", self.t)));
            }
            if !(self.dt > 0.0 && self.dt <= MAX_DT) {
                return Err(Error::precondition(format!("dt must lie in (0, {MAX_DT}], got {}", self.dt)));
            }
            if self.n < 2 {
                return Err(Error::precondition(format!("n must be at least 2, got {}", self.n)));
            }
            if !(0.0..self.t).contains(&self.burn_in) {
                return Err(Error::precondition(format!("burn_in must lie in [0, T), got {}", self.burn_in)));
            }
        }
        if !(self.c().norm() <= MAX_ABS_C) {
            return Err(Error::precondition(format!("|c| must be at most {MAX_ABS_C}")));
        }
        if matches!(cmd, Command::Degree | Command::VerifyFormula) {
            if !(6.0..=12.0).contains(&self.r) {
                return Err(Error::precondition(format!("R must lie in [6, 12], got {}", self.r)));
            }
            if !(1..=default_centers().len()).contains(&self.centers) {
                return Err(Error::precondition(format!("centers must lie in [1, {}]", default_centers().len())));
            }
        }
        if cmd == Command::Dimension && self.n < 2000 {
            return Err(Error::precondition(format!("dimension needs n ≥ 2000, got {}", self.n)));
        }
        if cmd == Command::Compare && !(3.0..=14.0).contains(&self.ball_radius) {
            return Err(Error::precondition(format!("ball_radius must lie in [3, 14], got {}", self.ball_radius)));
        }
        if matches!(cmd, Command::Scan | Command::Traceloci) {
            let grid = self.grid.as_ref().ok_or_else(|| Error::precondition("scan and traceloci need a [grid] table"))?;
            let spec = grid.spec();
            spec.validate()?;
            if spec.nx < 3 {
                return Err(Error::precondition("grid needs at least 3 cells per side"));
            }
            if self.bootstrap < 2 {
                return Err(Error::precondition("bootstrap must be at least 2"));
            }
        }
        if cmd == Command::Traceloci {
            let loci = self.loci.clone().unwrap_or_default();
            if loci.lengths.len() * loci.per_length < 5 {
                return Err(Error::precondition("traceloci needs at least 5 loci (lengths × per_length)"));
            }
            if loci.lengths.iter().any(|&l| !(l > 0.0 && l <= 10.0)) {
                return Err(Error::precondition("locus lengths must lie in (0, 10]"));
            }
        }
        Ok(())
    }

    fn scan_params(&self) -> ScanParams {
        ScanParams { t: self.t, n_paths: self.n, dt: self.dt, seed: self.seed, burn_in: self.burn_in }
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Precondition(_) | Error::ElementaryRepresentation(_) => EXIT_PRECONDITION,
        Error::Io(_) => EXIT_OTHER,
        _ => EXIT_NUMERICAL,
    }
}

/// Directory for cached intermediate results: the environment variable wins
/// over the config.
pub fn cache_dir(cfg: &ExperimentConfig) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).or_else(|| cfg.cache.clone())
}

fn hash_key<T: Serialize>(v: &T) -> Result<String> {
    let mut h = DefaultHasher::new();
    serde_json::to_string(v)?.hash(&mut h);
    Ok(format!("{:016x}", h.finish()))
}

/// Standard cusp form, read from and written to the cache when one is set.
pub fn load_form(cache: Option<&Path>) -> Result<Arc<CuspForm4>> {
    let Some(dir) = cache else {
        return Ok(crate::autoform::standard_form());
    };
    let path = dir.join(format!("cusp_form_r{STANDARD_R_TRUNC}.json"));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(form) = CuspForm4::from_json(&text) {
            return Ok(Arc::new(form));
        }
    }
    let form = crate::autoform::standard_form();
    fs::create_dir_all(dir)?;
    fs::write(&path, form.to_json()?)?;
    Ok(form)
}

#[derive(Serialize, Deserialize)]
struct CachedScan {
    grid: ScanGrid,
    path_values: Vec<Vec<f64>>,
}

fn load_scan(form: &Arc<CuspForm4>, spec: &GridSpec, p: &ScanParams, cache: Option<&Path>) -> Result<ScanGrid> {
    let key = hash_key(&(spec, p))?;
    let path = cache.map(|d| d.join(format!("scan_{key}.json")));
    if let Some(path) = &path {
        if let Ok(text) = fs::read_to_string(path) {
            if let Ok(c) = serde_json::from_str::<CachedScan>(&text) {
                let mut grid = c.grid;
                grid.path_values = c.path_values;
                return Ok(grid);
            }
        }
    }
    let reps = grid_holonomies(form, spec);
    let grid = scan_with(&form.group, spec, &reps, p)?;
    if let (Some(path), Some(dir)) = (&path, cache) {
        fs::create_dir_all(dir)?;
        let doc = CachedScan { grid: grid.clone(), path_values: grid.path_values.clone() };
        fs::write(path, serde_json::to_string(&doc)?)?;
    }
    Ok(grid)
}

/// Output of one command, held in memory until everything succeeded.
#[derive(Debug, Default)]
pub struct Artifacts {
    pub results: serde_json::Map<String, Value>,
    /// `(file name, contents)` of CSV files.
    pub csv: Vec<(String, String)>,
}

impl Artifacts {
    fn put<T: Serialize>(&mut self, key: &str, v: T) -> Result<()> {
        self.results.insert(key.to_string(), serde_json::to_value(v)?);
        Ok(())
    }
}

/// Writes `re, im, chart` rows; `chart = 1` marks the chart at infinity.
pub fn harmonic_csv(h: &HarmonicSample) -> Result<String> {
    let mut out = Vec::new();
    writeln!(out, "re,im,chart")?;
    for p in &h.points {
        let (z, flipped) = p.chart();
        writeln!(out, "{},{},{}", z.re, z.im, u8::from(flipped))?;
    }
    Ok(String::from_utf8(out).expect("ascii"))
}

/// Runs the pipeline for `cmd` and returns its artifacts without touching
/// the output directory.
pub fn execute(cmd: Command, cfg: &ExperimentConfig) -> Result<Artifacts> {
    cfg.validate(cmd)?;
    let cache = cache_dir(cfg);
    let form = load_form(cache.as_deref())?;
    let g = form.group.clone();
    let s = ProjectiveStructure::new(form.clone(), cfg.c());
    let mut a = Artifacts::default();
    a.put("command", cmd.name())?;
    a.put("c", cfg.c)?;
    match cmd {
        Command::Lyapunov => {
            let rep = s.holonomy()?;
            a.put("chi", lyapunov_brownian(&rep, &g, cfg.t, cfg.n, cfg.dt, cfg.seed)?)?;
        }
        Command::Degree => {
            let e = degree_estimate(&s, cfg.r, &default_centers()[..cfg.centers], &default_targets())?;
            a.put("deg", e.params["deg"].clone())?;
            a.put("delta", e)?;
        }
        Command::Harmonic => {
            let rep = s.holonomy()?;
            let h = sample_harmonic(&rep, &g, g.base_point, cfg.t, cfg.n, cfg.dt, cfg.seed)?;
            let angles: Vec<f64> = h.points.iter().map(|p| poisson_angle(p, g.base_point)).collect();
            let ks = ks_one_sample(&angles, |x| (x + std::f64::consts::PI) / (2.0 * std::f64::consts::PI));
            a.put(
                "harmonic",
                json!({
                    "n": h.points.len(),
                    "T": h.t,
                    "x": [g.base_point.re(), g.base_point.im()],
                    "resampled": h.resampled,
                    "median_log_gap": h.median_log_gap,
                    "gap_warning": h.median_log_gap < 10.0,
                    "poisson_ks": ks,
                }),
            )?;
            a.csv.push(("harmonic_points.csv".into(), harmonic_csv(&h)?));
        }
        Command::Dimension => {
            let rep = s.holonomy()?;
            let h = sample_harmonic(&rep, &g, g.base_point, cfg.t, cfg.n, cfg.dt, cfg.seed)?;
            let dim = dimension_estimate(&h)?;
            let chi = lyapunov_brownian(&rep, &g, cfg.t, cfg.n.min(1000), cfg.dt, cfg.seed.wrapping_add(1))?;
            let bound = 1.0 / (2.0 * chi.value);
            a.put("within_bound", dim.value <= bound + 0.1)?;
            a.put("bound", bound)?;
            a.put("chi", chi)?;
            a.put("dimension", dim)?;
            a.csv.push(("harmonic_points.csv".into(), harmonic_csv(&h)?));
        }
        Command::VerifyFormula => {
            let report = verify_formula(&s, cfg)?;
            for (k, v) in report {
                a.results.insert(k, v);
            }
        }
        Command::Scan => {
            let spec = cfg.grid.as_ref().expect("validated").spec();
            let grid = load_scan(&form, &spec, &cfg.scan_params(), cache.as_deref())?;
            summarize_scan(&mut a, &grid, cfg)?;
            let mut csv = Vec::new();
            grid.write_csv(&mut csv)?;
            a.csv.push(("chi_grid.csv".into(), String::from_utf8(csv).expect("ascii")));
        }
        Command::Traceloci => {
            let spec = cfg.grid.as_ref().expect("validated").spec();
            let grid = load_scan(&form, &spec, &cfg.scan_params(), cache.as_deref())?;
            let density = laplacian_density(&grid);
            let lc = cfg.loci.clone().unwrap_or_default();
            let family = SliceFamily::new(form.clone());
            let mut rng = stream_rng(cfg.seed, u64::MAX);
            let t = c64(lc.trace[0], lc.trace[1]);
            let mut loci = Vec::new();
            for &l in &lc.lengths {
                for _ in 0..lc.per_length {
                    let w = g.random_primitive_word(l, &mut rng)?;
                    loci.push(trace_locus(&family, &spec, &w, t)?);
                }
            }
            let report = equidistribution_compare(&loci, &density)?;
            let summaries: Vec<Value> = loci
                .iter()
                .map(|l| {
                    json!({
                        "word": l.word.word.to_string(),
                        "length": l.word.translation_length(),
                        "roots": l.points.len(),
                        "stalled": l.stalled,
                        "mass": l.mass(),
                    })
                })
                .collect();
            a.put("loci", summaries)?;
            a.put("equidistribution", report)?;
            let mut csv = Vec::new();
            write_loci_csv(&loci, &mut csv)?;
            a.csv.push(("loci.csv".into(), String::from_utf8(csv).expect("ascii")));
        }
        Command::Compare => {
            let rep = s.holonomy()?;
            let brownian = lyapunov_brownian(&rep, &g, cfg.t, cfg.n, cfg.dt, cfg.seed)?;
            let ball = lyapunov_ball(&rep, &g, cfg.ball_radius, cfg.ball_draws, cfg.seed)?;
            let slope = lyapunov_ball_slope(&rep, &g, cfg.ball_radius, cfg.ball_draws, cfg.seed)?;
            let z = |e: &Estimate| (e.value - brownian.value).abs() / (e.stderr.powi(2) + brownian.stderr.powi(2)).sqrt();
            a.put("ball_z", z(&ball))?;
            a.put("ball_slope_z", z(&slope))?;
            a.put("agree", z(&ball) <= 3.0 || z(&slope) <= 3.0)?;
            a.put("brownian", brownian)?;
            a.put("ball", ball)?;
            a.put("ball_slope", slope)?;
        }
    }
    Ok(a)
}

fn summarize_scan(a: &mut Artifacts, grid: &ScanGrid, cfg: &ExperimentConfig) -> Result<()> {
    let density = laplacian_density(grid);
    let floor = density_noise_floor(grid, cfg.bootstrap, cfg.seed)?;
    let near: Vec<Value> = grid
        .spec
        .cells()
        .filter(|&(i, j)| grid.spec.point(i, j).norm() <= 0.1 + 1e-12)
        .map(|(i, j)| {
            let k = grid.spec.index(i, j);
            json!({"c": [grid.spec.point(i, j).re, grid.spec.point(i, j).im], "chi": grid.values[k], "density": density.values[k], "noise_floor": floor[k]})
        })
        .collect();
    a.put("grid", grid.spec)?;
    a.put("params", &grid.params)?;
    a.put("masked_cells", grid.mask.iter().filter(|m| !**m).count())?;
    a.put("max_parabolic_residual", grid.max_parabolic_residual())?;
    a.put("negative_fraction", negative_fraction(&density, &floor, 3.0))?;
    a.put("near_origin", near)?;
    a.put("density_convention", &density.convention)?;
    Ok(())
}

/// `χ̂`, `δ̂` and the predicted `½ + 2πδ̂`; passes when the gap is within three
/// combined standard errors.
pub fn verify_formula(s: &ProjectiveStructure, cfg: &ExperimentConfig) -> Result<serde_json::Map<String, Value>> {
    let g = s.group();
    let rep = s.holonomy()?;
    let chi = lyapunov_brownian(&rep, g, cfg.t, cfg.n, cfg.dt, cfg.seed)?;
    let mut delta = degree_estimate(s, cfg.r, &default_centers()[..cfg.centers], &default_targets())?;
    if let Some(d) = cfg.inject_delta {
        delta.value = d;
        delta.params.insert("injected".into(), json!(true));
    }
    let predicted = predict_chi(delta.value, 0);
    let combined = (chi.stderr.powi(2) + (2.0 * std::f64::consts::PI * delta.stderr).powi(2)).sqrt();
    let gap = (chi.value - predicted).abs();
    let mut m = serde_json::Map::new();
    m.insert("chi".into(), serde_json::to_value(&chi)?);
    m.insert("delta".into(), serde_json::to_value(&delta)?);
    m.insert("predicted".into(), json!(predicted));
    m.insert("gap".into(), json!(gap));
    m.insert("combined_stderr".into(), json!(combined));
    m.insert("margin".into(), json!(3.0 * combined - gap));
    m.insert("pass".into(), json!(gap <= 3.0 * combined));
    Ok(m)
}

/// Writes `results.json`, the CSV files and `manifest.json` into `out`.
pub fn write_artifacts(out: &Path, cmd: Command, cfg: &ExperimentConfig, a: &Artifacts, wall_time: f64) -> Result<()> {
    fs::create_dir_all(out)?;
    let mut results = a.results.clone();
    results.insert("schema_version".into(), json!(SCHEMA_VERSION));
    fs::write(out.join("results.json"), serde_json::to_string_pretty(&results)? + "\n")?;
    for (name, body) in &a.csv {
        fs::write(out.join(name), body)?;
    }
    let timestamp = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let manifest = json!({
        "schema_version": SCHEMA_VERSION,
        "command": cmd.name(),
        "config": cfg,
        "seed": cfg.seed,
        "version": env!("CARGO_PKG_VERSION"),
        "cusp_form_truncation": STANDARD_R_TRUNC,
        "files": std::iter::once("results.json".to_string()).chain(a.csv.iter().map(|(n, _)| n.clone())).collect::<Vec<_>>(),
        "wall_time_s": wall_time,
        "timestamp": timestamp,
    });
    fs::write(out.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(())
}

/// Reads the configuration stored in a manifest.
pub fn config_from_manifest(text: &str) -> Result<(Command, ExperimentConfig)> {
    let v: Value = serde_json::from_str(text)?;
    let cmd: Command = serde_json::from_value(v["command"].clone())?;
    let cfg: ExperimentConfig = serde_json::from_value(v["config"].clone())?;
    Ok((cmd, cfg))
}

/// Full run: apply overrides, execute, write files. Returns the exit code.
pub fn run(args: &Args) -> i32 {
    match run_inner(args) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("projlab {}: {e}", args.command.name());
            exit_code(&e)
        }
    }
}

fn run_inner(args: &Args) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(w) = args.workers {
        cfg.workers = Some(w);
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    if let Some(w) = cfg.workers {
        if w == 0 {
            return Err(Error::precondition("workers must be at least 1"));
        }
        // The global pool can only be set once per process; later calls keep it.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("projlab-out"));
    let start = Instant::now();
    let artifacts = execute(args.command, &cfg)?;
    write_artifacts(&out, args.command, &cfg, &artifacts, start.elapsed().as_secs_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let e = ExperimentConfig::from_toml("T = 10.0\nbogus = 1\n").unwrap_err();
        assert!(e.is_precondition());
        assert!(e.to_string().contains("bogus"));
    }

    #[test]
    fn defaults_fill_missing_keys() {
        let cfg = ExperimentConfig::from_toml("c = [1.0, 0.5]\n").unwrap();
        assert_eq!(cfg.t, 200.0);
        assert_eq!(cfg.c(), c64(1.0, 0.5));
        assert_eq!(cfg, ExperimentConfig { c: [1.0, 0.5], ..Default::default() });
    }

    #[test]
    fn negative_time_is_a_precondition_failure() {
        let cfg = ExperimentConfig::from_toml("T = -1.0\n").unwrap();
        let e = cfg.validate(Command::Lyapunov).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_PRECONDITION);
        assert!(e.to_string().contains("T must lie"));
    }

    #[test]
    fn declared_command_must_match() {
        let cfg = ExperimentConfig::from_toml("command = \"scan\"\n").unwrap();
        assert!(cfg.validate(Command::Lyapunov).unwrap_err().is_precondition());
    }

    #[test]
    fn scan_requires_grid() {
        let cfg = ExperimentConfig::default();
        assert!(cfg.validate(Command::Scan).unwrap_err().is_precondition());
    }

    #[test]
    fn manifest_round_trips_config() {
        let cfg = ExperimentConfig::from_toml("c = [0.5, 0.0]\nT = 3.0\nn = 4\ndt = 0.01\n").unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_artifacts(dir.path(), Command::Lyapunov, &cfg, &Artifacts::default(), 0.0).unwrap();
        let text = fs::read_to_string(dir.path().join("manifest.json")).unwrap();
        let (cmd, back) = config_from_manifest(&text).unwrap();
        assert_eq!(cmd, Command::Lyapunov);
        assert_eq!(back, cfg);
    }
}
