//! Parameter-plane scans of `c ↦ χ̂(c)`, the discrete bifurcation density
//! and trace loci.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::autoform::CuspForm4;
use crate::brownian::stream_rng;
use crate::devmap::{ProjectiveStructure, Representation};
use crate::error::{Error, Result};
use crate::estimators::{adapted_log_norm, brownian_word_pairs};
use crate::fuchsian::{FuchsianGroup, GroupElement};
use crate::moebius::{c64, C64};
use crate::stats::{mean_stderr, spearman};

pub const MAX_GRID_SIDE: usize = 101;

/// Regular grid of cell centers in the `c`-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Center of the lower-left cell.
    pub origin: C64,
    pub spacing: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// Square grid of `n × n` cells centered at `center` with the given spacing.
    pub fn centered(center: C64, spacing: f64, n: usize) -> Self {
        let half = spacing * (n as f64 - 1.0) / 2.0;
        Self { origin: center - c64(half, half), spacing, nx: n, ny: n }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spacing > 0.0) {
            return Err(Error::precondition("grid spacing must be positive"));
        }
        if self.nx == 0 || self.ny == 0 || self.nx > MAX_GRID_SIDE || self.ny > MAX_GRID_SIDE {
            return Err(Error::precondition(format!("grid must have between 1 and {MAX_GRID_SIDE} cells per side")));
        }
        Ok(())
    }

    pub fn point(&self, i: usize, j: usize) -> C64 {
        self.origin + c64(i as f64 * self.spacing, j as f64 * self.spacing)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Cell containing `c`, if inside the grid window.
    pub fn locate(&self, c: C64) -> Option<(usize, usize)> {
        let u = (c - self.origin) / self.spacing;
        let (i, j) = ((u.re + 0.5).floor(), (u.im + 0.5).floor());
        if i < 0.0 || j < 0.0 || i >= self.nx as f64 || j >= self.ny as f64 {
            return None;
        }
        Some((i as usize, j as usize))
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| (i, j)))
    }
}

/// Estimator parameters shared by every cell of a scan.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ScanParams {
    #[serde(rename = "T")]
    pub t: f64,
    pub n_paths: usize,
    pub dt: f64,
    pub seed: u64,
    /// Per-path values are `(log ‖ρ(deck(T))‖ − log ‖ρ(deck(T_b))‖)/(T − T_b)`;
    /// zero gives the plain time average.
    #[serde(default)]
    pub burn_in: f64,
}

/// `χ̂` over a grid, estimated from one shared set of Brownian paths.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
    pub stderrs: Vec<f64>,
    /// `true` where the cell was computed.
    pub mask: Vec<bool>,
    /// `|tr² ρ_c([A, B]) − 4|` per cell.
    pub parabolic_residuals: Vec<f64>,
    pub params: BTreeMap<String, Value>,
    /// Per-path `(1/T) log ‖ρ(deck)‖`, per cell.
    #[serde(skip)]
    pub path_values: Vec<Vec<f64>>,
}

impl ScanGrid {
    pub fn value_at(&self, i: usize, j: usize) -> Option<f64> {
        let k = self.spec.index(i, j);
        self.mask[k].then_some(self.values[k])
    }

    /// Largest parabolicity residual over computed cells.
    pub fn max_parabolic_residual(&self) -> f64 {
        self.parabolic_residuals.iter().zip(&self.mask).filter(|(_, &m)| m).map(|(r, _)| *r).fold(0.0, f64::max)
    }

    /// Writes `re_c, im_c, chi, stderr, mask` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "re_c,im_c,chi,stderr,mask")?;
        for (i, j) in self.spec.cells() {
            let k = self.spec.index(i, j);
            let c = self.spec.point(i, j);
            let (v, s) = if self.mask[k] { (self.values[k], self.stderrs[k]) } else { (f64::NAN, f64::NAN) };
            writeln!(out, "{},{},{},{},{}", c.re, c.im, v, s, u8::from(self.mask[k]))?;
        }
        Ok(())
    }
}

/// Holonomy of every grid cell for the standard form; failed cells are `None`.
pub fn grid_holonomies(form: &Arc<CuspForm4>, spec: &GridSpec) -> Vec<Option<Representation>> {
    let cells: Vec<(usize, usize)> = spec.cells().collect();
    cells.par_iter().map(|&(i, j)| ProjectiveStructure::new(form.clone(), spec.point(i, j)).holonomy().ok()).collect()
}

/// Scans `χ̂` over the grid with common random numbers: every cell uses the
/// same Brownian deck words. Cells whose holonomy fails are masked.
pub fn scan(form: &Arc<CuspForm4>, spec: &GridSpec, p: &ScanParams) -> Result<ScanGrid> {
    let reps = grid_holonomies(form, spec);
    scan_with(&form.group, spec, &reps, p)
}

/// [`scan`] with precomputed holonomies.
pub fn scan_with(g: &FuchsianGroup, spec: &GridSpec, reps: &[Option<Representation>], p: &ScanParams) -> Result<ScanGrid> {
    spec.validate()?;
    if !(p.t > 0.0) || p.n_paths < 2 {
        return Err(Error::precondition("scan needs T > 0 and at least 2 paths"));
    }
    let pairs = brownian_word_pairs(g, p.burn_in, p.t, p.n_paths, p.dt, p.seed)?;
    let span = p.t - p.burn_in;
    let cells: Vec<Option<(Vec<f64>, f64)>> = reps
        .par_iter()
        .map(|rep| {
            let rep = rep.as_ref()?;
            rep.check_non_elementary().ok()?;
            let letters = rep.adapted_letters(g.base_point);
            let xs: Vec<f64> = pairs
                .iter()
                .map(|(wb, w)| {
                    let start = if p.burn_in > 0.0 { adapted_log_norm(&letters, wb) } else { 0.0 };
                    (adapted_log_norm(&letters, w) - start) / span
                })
                .collect();
            let residual = (rep.commutator().trace_sq() - 4.0).norm();
            xs.iter().all(|x| x.is_finite()).then_some((xs, residual))
        })
        .collect();
    let n = spec.len();
    let mut values = vec![f64::NAN; n];
    let mut stderrs = vec![f64::NAN; n];
    let mut mask = vec![false; n];
    let mut parabolic_residuals = vec![f64::NAN; n];
    let mut path_values = vec![Vec::new(); n];
    for (k, cell) in cells.into_iter().enumerate() {
        if let Some((xs, res)) = cell {
            let (m, s) = mean_stderr(&xs);
            values[k] = m;
            stderrs[k] = s;
            mask[k] = true;
            parabolic_residuals[k] = res;
            path_values[k] = xs;
        }
    }
    let mut params = BTreeMap::new();
    params.insert("T".into(), json!(p.t));
    params.insert("n_paths".into(), json!(p.n_paths));
    params.insert("dt".into(), json!(p.dt));
    params.insert("seed".into(), json!(p.seed));
    params.insert("burn_in".into(), json!(p.burn_in));
    params.insert("common_random_numbers".into(), json!(true));
    Ok(ScanGrid { spec: *spec, values, stderrs, mask, parabolic_residuals, params, path_values })
}

/// Raw Laplacian of a grid field; NaN off the interior or next to masked cells.
fn five_point(spec: &GridSpec, field: &[f64]) -> Vec<f64> {
    let mut out = vec![f64::NAN; spec.len()];
    let h2 = spec.spacing * spec.spacing;
    for j in 1..spec.ny.saturating_sub(1) {
        for i in 1..spec.nx.saturating_sub(1) {
            let v = |a: usize, b: usize| field[spec.index(a, b)];
            out[spec.index(i, j)] = (v(i + 1, j) + v(i - 1, j) + v(i, j + 1) + v(i, j - 1) - 4.0 * v(i, j)) / h2;
        }
    }
    out
}

/// One 3×3 box pass over the finite entries.
fn box_smooth(spec: &GridSpec, field: &[f64]) -> Vec<f64> {
    let mut out = vec![f64::NAN; spec.len()];
    for (i, j) in spec.cells() {
        if !field[spec.index(i, j)].is_finite() {
            continue;
        }
        let (mut sum, mut count) = (0.0, 0);
        for b in j.saturating_sub(1)..=(j + 1).min(spec.ny - 1) {
            for a in i.saturating_sub(1)..=(i + 1).min(spec.nx - 1) {
                let v = field[spec.index(a, b)];
                if v.is_finite() {
                    sum += v;
                    count += 1;
                }
            }
        }
        out[spec.index(i, j)] = sum / count as f64;
    }
    out
}

/// Laplacian density on the grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityGrid {
    pub spec: GridSpec,
    /// Smoothed Laplacian; NaN where undefined.
    pub values: Vec<f64>,
    pub convention: String,
}

/// 5-point Laplacian of `values` divided by `spacing²`, then one 3×3 box pass.
pub fn laplacian_of(spec: &GridSpec, values: &[f64]) -> DensityGrid {
    DensityGrid {
        spec: *spec,
        values: box_smooth(spec, &five_point(spec, values)),
        convention: "raw Euclidean Laplacian in c; the bifurcation measure is this over 2π times Lebesgue".into(),
    }
}

/// Laplacian density of a scanned `χ̂` field; masked cells poison their
/// neighbours.
pub fn laplacian_density(g: &ScanGrid) -> DensityGrid {
    let field: Vec<f64> = g.values.iter().zip(&g.mask).map(|(&v, &m)| if m { v } else { f64::NAN }).collect();
    laplacian_of(&g.spec, &field)
}

/// Per-cell bootstrap standard deviation of the density under resampling of
/// the shared paths.
pub fn density_noise_floor(g: &ScanGrid, n_boot: usize, seed: u64) -> Result<Vec<f64>> {
    let n_paths = g.path_values.iter().map(Vec::len).max().unwrap_or(0);
    if n_paths < 2 || n_boot < 2 {
        return Err(Error::precondition("noise floor needs per-path values and at least 2 resamples"));
    }
    let boots: Vec<Vec<f64>> = (0..n_boot as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b);
            let picks: Vec<usize> = (0..n_paths).map(|_| rng.random_range(0..n_paths)).collect();
            let field: Vec<f64> = g
                .path_values
                .iter()
                .zip(&g.mask)
                .map(|(xs, &m)| if m { picks.iter().map(|&i| xs[i]).sum::<f64>() / n_paths as f64 } else { f64::NAN })
                .collect();
            laplacian_of(&g.spec, &field).values
        })
        .collect();
    Ok((0..g.spec.len())
        .map(|k| {
            let xs: Vec<f64> = boots.iter().map(|b| b[k]).collect();
            if xs.iter().any(|x| !x.is_finite()) {
                return f64::NAN;
            }
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
        })
        .collect())
}

/// Fraction of cells with a defined density below `-k` times their noise floor.
pub fn negative_fraction(d: &DensityGrid, floor: &[f64], k: f64) -> f64 {
    let defined: Vec<usize> = (0..d.values.len()).filter(|&i| d.values[i].is_finite() && floor[i].is_finite()).collect();
    if defined.is_empty() {
        return 0.0;
    }
    let neg = defined.iter().filter(|&&i| d.values[i] < -k * floor[i]).count();
    neg as f64 / defined.len() as f64
}

/// Zeros of `c ↦ tr² ρ_c(word) − t` in a grid window.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceLocus {
    pub word: GroupElement,
    pub t: C64,
    pub points: Vec<C64>,
    pub multiplicities: Vec<u32>,
    /// Seeds whose Newton iteration stalled.
    pub stalled: usize,
}

impl TraceLocus {
    /// `Σ mult / (4 ℓ(γ))`.
    pub fn mass(&self) -> f64 {
        self.multiplicities.iter().sum::<u32>() as f64 / (4.0 * self.word.translation_length())
    }
}

/// Family of holonomies `c ↦ ρ_c` used to follow trace loci off the grid.
pub trait HolonomyFamily: Sync {
    fn holonomy(&self, c: C64) -> Result<Representation>;
}

/// The slice of structures built on one cusp form.
pub struct SliceFamily {
    pub form: Arc<CuspForm4>,
    pub tol: crate::ode::Tolerance,
}

impl SliceFamily {
    pub fn new(form: Arc<CuspForm4>) -> Self {
        let tol = crate::ode::Tolerance { rtol: 1e-12, ..Default::default() };
        Self { form, tol }
    }
}

impl HolonomyFamily for SliceFamily {
    fn holonomy(&self, c: C64) -> Result<Representation> {
        ProjectiveStructure::new(self.form.clone(), c).with_tolerance(self.tol).holonomy()
    }
}

impl<F: Fn(C64) -> Result<Representation> + Sync> HolonomyFamily for F {
    fn holonomy(&self, c: C64) -> Result<Representation> {
        self(c)
    }
}

const NEWTON_MAX_ITER: usize = 40;
const NEWTON_TOL: f64 = 1e-9;
const ROOT_TOL: f64 = 1e-6;

fn trace_function<'a, F: HolonomyFamily>(family: &'a F, word: &'a GroupElement, t: C64) -> impl Fn(C64) -> Result<C64> + 'a {
    move |c| Ok(family.holonomy(c)?.evaluate(&word.word).trace_sq() - t)
}

/// Winding number of `f` around a square cell given its corner values.
fn corner_winding(vals: [C64; 4]) -> i64 {
    let mut turn = 0.0;
    for k in 0..4 {
        turn += (vals[(k + 1) % 4] / vals[k]).arg();
    }
    (turn / (2.0 * PI)).round() as i64
}

fn newton<G: Fn(C64) -> Result<C64>>(f: &G, mut c: C64, step_cap: f64) -> Result<C64> {
    for _ in 0..NEWTON_MAX_ITER {
        let v = f(c)?;
        let h = 1e-6;
        let df = (f(c + h)? - f(c - h)?) / (2.0 * h);
        if df.norm() == 0.0 || !df.norm().is_finite() {
            break;
        }
        let mut step = v / df;
        if step.norm() > step_cap {
            step *= step_cap / step.norm();
        }
        c -= step;
        if step.norm() < NEWTON_TOL * (1.0 + c.norm()) {
            if f(c)?.norm() < ROOT_TOL {
                return Ok(c);
            }
            break;
        }
    }
    Err(Error::NewtonStall(NEWTON_MAX_ITER))
}

fn multiplicity<G: Fn(C64) -> Result<C64>>(f: &G, c: C64, radius: f64) -> Result<u32> {
    let n = 32;
    let vals: Vec<C64> = (0..n).map(|k| f(c + C64::from_polar(radius, 2.0 * PI * k as f64 / n as f64))).collect::<Result<_>>()?;
    let turn: f64 = (0..n).map(|k| (vals[(k + 1) % n] / vals[k]).arg()).sum();
    Ok(((turn / (2.0 * PI)).round().max(1.0)) as u32)
}

/// Roots of `tr² ρ_c(word) = t` in the grid window. Seeds are grid squares
/// around which `f` winds, refined by Newton with a finite-difference
/// derivative; roots closer than `spacing/10` are merged.
pub fn trace_locus<F: HolonomyFamily>(family: &F, spec: &GridSpec, word: &GroupElement, t: C64) -> Result<TraceLocus> {
    spec.validate()?;
    if spec.nx < 2 || spec.ny < 2 {
        return Err(Error::precondition("trace locus needs at least a 2×2 grid"));
    }
    let f = trace_function(family, word, t);
    let corners: Vec<Option<C64>> = spec.cells().collect::<Vec<_>>().par_iter().map(|&(i, j)| f(spec.point(i, j)).ok()).collect();
    let mut seeds = Vec::new();
    for j in 0..spec.ny - 1 {
        for i in 0..spec.nx - 1 {
            let idx = [spec.index(i, j), spec.index(i + 1, j), spec.index(i + 1, j + 1), spec.index(i, j + 1)];
            let vals: Option<Vec<C64>> = idx.iter().map(|&k| corners[k]).collect();
            if let Some(v) = vals {
                if v.iter().all(|z| z.norm() > 0.0) && corner_winding([v[0], v[1], v[2], v[3]]) != 0 {
                    seeds.push(spec.point(i, j) + c64(spec.spacing / 2.0, spec.spacing / 2.0));
                }
            }
        }
    }
    let refined: Vec<Result<C64>> = seeds.par_iter().map(|&s| newton(&f, s, spec.spacing)).collect();
    let lo = spec.origin - c64(spec.spacing / 2.0, spec.spacing / 2.0);
    let hi = spec.point(spec.nx - 1, spec.ny - 1) + c64(spec.spacing / 2.0, spec.spacing / 2.0);
    let mut points: Vec<C64> = Vec::new();
    let mut stalled = 0;
    for r in refined {
        match r {
            Ok(c) if c.re >= lo.re && c.re <= hi.re && c.im >= lo.im && c.im <= hi.im => {
                if points.iter().all(|p| (p - c).norm() > spec.spacing / 10.0) {
                    points.push(c);
                }
            }
            Ok(_) => {}
            Err(Error::NewtonStall(_)) => stalled += 1,
            Err(e) => return Err(e),
        }
    }
    points.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let multiplicities = points.iter().map(|&c| multiplicity(&f, c, spec.spacing / 20.0)).collect::<Result<Vec<_>>>()?;
    Ok(TraceLocus { word: word.clone(), t, points, multiplicities, stalled })
}

/// Writes `re_c, im_c, mult, word, t` rows for several loci.
pub fn write_loci_csv<W: Write>(loci: &[TraceLocus], mut out: W) -> Result<()> {
    writeln!(out, "re_c,im_c,mult,word,t")?;
    for l in loci {
        for (c, m) in l.points.iter().zip(&l.multiplicities) {
            writeln!(out, "{},{},{},{},{}", c.re, c.im, m, l.word.word, l.t.re)?;
        }
    }
    Ok(())
}

/// TV distances between normalized locus measures and the density measure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquidistributionReport {
    pub lengths: Vec<f64>,
    pub masses: Vec<f64>,
    pub tv: Vec<f64>,
    /// Spearman correlation of TV against geodesic length.
    pub spearman: f64,
    pub density_mass: f64,
}

pub const COMPARE_BINS: usize = 10;

fn coarse_bin(spec: &GridSpec, c: C64) -> Option<usize> {
    let lo = spec.origin - c64(spec.spacing / 2.0, spec.spacing / 2.0);
    let w = spec.spacing * spec.nx as f64;
    let h = spec.spacing * spec.ny as f64;
    let u = (c.re - lo.re) / w;
    let v = (c.im - lo.im) / h;
    if !(0.0..1.0).contains(&u) || !(0.0..1.0).contains(&v) {
        return None;
    }
    let bi = ((u * COMPARE_BINS as f64) as usize).min(COMPARE_BINS - 1);
    let bj = ((v * COMPARE_BINS as f64) as usize).min(COMPARE_BINS - 1);
    Some(bj * COMPARE_BINS + bi)
}

/// Bifurcation measure `max(Δχ, 0)/(2π) dA` on the coarse bins.
pub fn density_histogram(d: &DensityGrid) -> Vec<f64> {
    let mut h = vec![0.0; COMPARE_BINS * COMPARE_BINS];
    let area = d.spec.spacing * d.spec.spacing;
    for (i, j) in d.spec.cells() {
        let v = d.values[d.spec.index(i, j)];
        if v.is_finite() && v > 0.0 {
            if let Some(b) = coarse_bin(&d.spec, d.spec.point(i, j)) {
                h[b] += v * area / (2.0 * PI);
            }
        }
    }
    h
}

/// `(Σ mult δ_c)/(4 ℓ(γ))` on the coarse bins.
pub fn locus_histogram(spec: &GridSpec, l: &TraceLocus) -> Vec<f64> {
    let mut h = vec![0.0; COMPARE_BINS * COMPARE_BINS];
    let norm = 4.0 * l.word.translation_length();
    for (c, m) in l.points.iter().zip(&l.multiplicities) {
        if let Some(b) = coarse_bin(spec, *c) {
            h[b] += *m as f64 / norm;
        }
    }
    h
}

pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Compares each locus measure to the density measure by TV distance on a
/// 10×10 binning of the window, and reports the trend in geodesic length.
pub fn equidistribution_compare(loci: &[TraceLocus], density: &DensityGrid) -> Result<EquidistributionReport> {
    if loci.len() < 5 {
        return Err(Error::precondition(format!("need at least 5 loci, got {}", loci.len())));
    }
    let dh = density_histogram(density);
    let lengths: Vec<f64> = loci.iter().map(|l| l.word.translation_length()).collect();
    let masses: Vec<f64> = loci.iter().map(|l| locus_histogram(&density.spec, l).iter().sum()).collect();
    let tv: Vec<f64> = loci.iter().map(|l| total_variation(&locus_histogram(&density.spec, l), &dh)).collect();
    Ok(EquidistributionReport { spearman: spearman(&lengths, &tv), lengths, masses, tv, density_mass: dh.iter().sum() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(spec: &GridSpec, f: impl Fn(C64) -> f64) -> Vec<f64> {
        spec.cells().map(|(i, j)| f(spec.point(i, j))).collect()
    }

    #[test]
    fn laplacian_kills_affine_fields() {
        let spec = GridSpec::centered(c64(0.3, -0.2), 0.1, 9);
        let d = laplacian_of(&spec, &field(&spec, |c| 2.0 * c.re - 0.7 * c.im + 3.0));
        assert!(d.values.iter().filter(|v| v.is_finite()).all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn laplacian_of_modulus_squared_is_four() {
        let spec = GridSpec::centered(c64(0.0, 0.0), 0.05, 11);
        let d = laplacian_of(&spec, &field(&spec, |c| c.norm_sqr()));
        let finite: Vec<f64> = d.values.iter().copied().filter(|v| v.is_finite()).collect();
        assert_eq!(finite.len(), 81);
        assert!(finite.iter().all(|v| (v - 4.0).abs() < 1e-10));
    }

    #[test]
    fn locate_inverts_point() {
        let spec = GridSpec::centered(c64(1.0, 1.0), 0.25, 5);
        assert_eq!(spec.locate(spec.point(3, 1)), Some((3, 1)));
        assert_eq!(spec.locate(c64(10.0, 0.0)), None);
        assert!(GridSpec::centered(c64(0.0, 0.0), 0.1, 102).validate().unwrap_err().is_precondition());
    }

    #[test]
    fn empty_locus_has_tv_of_density_mass() {
        let spec = GridSpec::centered(c64(0.0, 0.0), 0.1, 10);
        let d = laplacian_of(&spec, &field(&spec, |c| c.norm_sqr()));
        let dh = density_histogram(&d);
        let zero = vec![0.0; dh.len()];
        assert!((total_variation(&zero, &dh) - 0.5 * dh.iter().sum::<f64>()).abs() < 1e-15);
    }

    #[test]
    fn corner_winding_detects_a_simple_zero() {
        let f = |c: C64| c - c64(0.05, 0.05);
        let v = [f(c64(0.0, 0.0)), f(c64(0.1, 0.0)), f(c64(0.1, 0.1)), f(c64(0.0, 0.1))];
        assert_eq!(corner_winding(v), 1);
        let w = [f(c64(0.2, 0.0)), f(c64(0.3, 0.0)), f(c64(0.3, 0.1)), f(c64(0.2, 0.1))];
        assert_eq!(corner_winding(w), 0);
    }

    #[test]
    fn newton_finds_roots_of_polynomials() {
        let f = |c: C64| Ok(c * c - c64(2.0, 0.0));
        let r = newton(&f, c64(1.3, 0.1), 0.5).unwrap();
        assert!((r - c64(2f64.sqrt(), 0.0)).norm() < 1e-9);
        assert_eq!(multiplicity(&f, r, 0.01).unwrap(), 1);
        let g = |c: C64| Ok((c - 1.0) * (c - 1.0) * (c + 2.0));
        assert_eq!(multiplicity(&g, c64(1.0, 0.0), 0.1).unwrap(), 2);
    }
}
