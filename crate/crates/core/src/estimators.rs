//! Monte Carlo estimators of the Lyapunov exponent, the degree, harmonic
//! measures and their correlation dimension.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::brownian::{advance, stream_rng};
use crate::devmap::{ProjectiveStructure, Representation};
use crate::error::{Error, Result};
use crate::fuchsian::{FuchsianGroup, GroupElement, Word};
use crate::moebius::{ball_volume, c64, hyp_distance, HalfPlanePoint, LogNormProduct, MoebiusMap, SpherePoint};
use crate::stats::{linear_fit, mean_stderr};

/// A scalar statistic with its standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    #[serde(rename = "n")]
    pub n_samples: usize,
    pub params: BTreeMap<String, Value>,
}

impl Estimate {
    pub fn from_samples(xs: &[f64], params: BTreeMap<String, Value>) -> Self {
        let (value, stderr) = mean_stderr(xs);
        Self { value, stderr, n_samples: xs.len(), params }
    }

    pub fn with_param(mut self, key: &str, v: Value) -> Self {
        self.params.insert(key.to_string(), v);
        self
    }
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn c_json(c: crate::moebius::C64) -> Value {
    json!([c.re, c.im])
}

/// Deck words of `n` independent Brownian paths run for time `t` from the
/// base point. Stream `i` of `seed` drives path `i`.
pub fn brownian_words(g: &FuchsianGroup, t: f64, n: usize, dt: f64, seed: u64) -> Result<Vec<Word>> {
    brownian_words_from(g, g.base_point, t, n, dt, seed)
}

/// As [`brownian_words`] from an arbitrary start; the word includes the
/// deck element bringing `start` into the domain.
pub fn brownian_words_from(g: &FuchsianGroup, start: HalfPlanePoint, t: f64, n: usize, dt: f64, seed: u64) -> Result<Vec<Word>> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let mut w = Word::identity();
            let s = g.reduce_into(start, &mut w)?;
            Ok(advance(g, s, w, t, dt, &mut rng, |_, _, _| {})?.deck)
        })
        .collect()
}

/// Deck words at times `t_burn` and `t` along the same paths as
/// [`brownian_words`].
pub fn brownian_word_pairs(g: &FuchsianGroup, t_burn: f64, t: f64, n: usize, dt: f64, seed: u64) -> Result<Vec<(Word, Word)>> {
    if !(0.0..t).contains(&t_burn) {
        return Err(Error::precondition(format!("burn-in {t_burn} must lie in [0, T)")));
    }
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let mut w = Word::identity();
            let s = g.reduce_into(g.base_point, &mut w)?;
            let mid = advance(g, s, w, t_burn, dt, &mut rng, |_, _, _| {})?;
            let end = advance(g, mid.point, mid.deck.clone(), t - t_burn, dt, &mut rng, |_, _, _| {})?;
            Ok((mid.deck, end.deck))
        })
        .collect()
}

/// `log ‖P⁻¹ ρ(w) P‖_F` with `P` sending `i` to the base point.
pub fn adapted_log_norm(letters: &[MoebiusMap; 4], w: &Word) -> f64 {
    let mut prod = LogNormProduct::new();
    for &l in w.letters() {
        prod.push(&letters[l.index()]);
    }
    prod.log_norm()
}

/// Lyapunov estimate from precomputed deck words at time `t`.
pub fn lyapunov_from_words(rep: &Representation, base: HalfPlanePoint, words: &[Word], t: f64) -> Result<Estimate> {
    rep.check_non_elementary()?;
    let letters = rep.adapted_letters(base);
    let xs: Vec<f64> = words.par_iter().map(|w| adapted_log_norm(&letters, w) / t).collect();
    Ok(Estimate::from_samples(&xs, params(&[("T", json!(t)), ("c", c_json(rep.c))])))
}

/// `(1/T) log ‖ρ(deck(T))‖` averaged over `n` Brownian paths.
pub fn lyapunov_brownian(rep: &Representation, g: &FuchsianGroup, t: f64, n: usize, dt: f64, seed: u64) -> Result<Estimate> {
    rep.check_non_elementary()?;
    if !(t > 0.0) || n == 0 {
        return Err(Error::precondition("T must be positive and n at least 1"));
    }
    let words = brownian_words(g, t, n, dt, seed)?;
    Ok(lyapunov_from_words(rep, g.base_point, &words, t)?
        .with_param("dt", json!(dt))
        .with_param("seed", json!(seed))
        .with_param("estimator", json!("brownian")))
}

/// `log ‖ρ(γ)‖ / d(base, γ·base)` averaged over uniform draws from the ball.
pub fn lyapunov_ball(rep: &Representation, g: &FuchsianGroup, r: f64, n: usize, seed: u64) -> Result<Estimate> {
    if !(r <= 14.0) {
        return Err(Error::precondition(format!("ball radius must be at most 14, got {r}")));
    }
    rep.check_non_elementary()?;
    let ball: Vec<GroupElement> = g.enumerate_ball(r)?.into_iter().filter(|e| !e.word.is_empty()).collect();
    lyapunov_ball_from(rep, g, &ball, n, seed).map(|e| e.with_param("R", json!(r)))
}

/// Ball estimator over a precomputed element list (identity excluded).
pub fn lyapunov_ball_from(rep: &Representation, g: &FuchsianGroup, ball: &[GroupElement], n: usize, seed: u64) -> Result<Estimate> {
    if ball.is_empty() {
        return Err(Error::precondition("ball contains only the identity"));
    }
    let letters = rep.adapted_letters(g.base_point);
    let mut rng = stream_rng(seed, 0);
    let picks: Vec<usize> = (0..n).map(|_| rng.random_range(0..ball.len())).collect();
    let xs: Vec<f64> = picks.par_iter().map(|&i| adapted_log_norm(&letters, &ball[i].word) / g.displacement(&ball[i].matrix)).collect();
    Ok(Estimate::from_samples(&xs, params(&[("c", c_json(rep.c)), ("seed", json!(seed)), ("estimator", json!("ball"))])))
}

/// Width of the distance shells used by [`lyapunov_ball_slope`].
const SHELL_WIDTH: f64 = 0.5;

/// Least-squares slope of `log ‖ρ(γ)‖` against `d(base, γ·base)`, with draws
/// spread evenly over distance shells in `[R/3, R]`. The fit absorbs the
/// additive constant that biases the ratio estimator at finite `R`.
pub fn lyapunov_ball_slope(rep: &Representation, g: &FuchsianGroup, r: f64, n: usize, seed: u64) -> Result<Estimate> {
    if !(3.0..=14.0).contains(&r) {
        return Err(Error::precondition(format!("ball radius must lie in [3, 14], got {r}")));
    }
    rep.check_non_elementary()?;
    let ball = g.enumerate_ball(r)?;
    let lo = r / 3.0;
    let n_shells = ((r - lo) / SHELL_WIDTH).ceil() as usize;
    let mut shells: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_shells];
    for (i, e) in ball.iter().enumerate() {
        let d = g.displacement(&e.matrix);
        if d >= lo && d <= r {
            shells[(((d - lo) / SHELL_WIDTH) as usize).min(n_shells - 1)].push((i, d));
        }
    }
    let shells: Vec<Vec<(usize, f64)>> = shells.into_iter().filter(|s| !s.is_empty()).collect();
    if shells.len() < 3 {
        return Err(Error::precondition("too few populated distance shells"));
    }
    let mut rng = stream_rng(seed, 0);
    let picks: Vec<(usize, f64)> = (0..n)
        .map(|k| {
            let shell = &shells[k % shells.len()];
            shell[rng.random_range(0..shell.len())]
        })
        .collect();
    let letters = rep.adapted_letters(g.base_point);
    let ys: Vec<f64> = picks.par_iter().map(|&(i, _)| adapted_log_norm(&letters, &ball[i].word)).collect();
    let xs: Vec<f64> = picks.iter().map(|p| p.1).collect();
    let (slope, intercept) = linear_fit(&xs, &ys);
    let mx = xs.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (rss / (n as f64 - 2.0) / sxx).sqrt();
    Ok(Estimate {
        value: slope,
        stderr,
        n_samples: n,
        params: params(&[
            ("R", json!(r)),
            ("c", c_json(rep.c)),
            ("seed", json!(seed)),
            ("intercept", json!(intercept)),
            ("estimator", json!("ball slope")),
        ]),
    })
}

/// Fixed centers in the thick part used by the degree estimator.
pub fn default_centers() -> Vec<HalfPlanePoint> {
    [(0.0, 2.0), (0.35, 1.6), (-0.4, 2.5), (0.15, 3.1), (-0.2, 1.4), (0.5, 2.2)].iter().map(|&(x, y)| HalfPlanePoint(c64(x, y))).collect()
}

/// Targets in the lower half-plane: never hit by the Fuchsian developing map.
pub fn default_targets() -> Vec<SpherePoint> {
    [(0.0, -1.0), (1.0, -2.0), (-0.5, -0.7)].iter().map(|&(x, y)| SpherePoint::from_complex(c64(x, y))).collect()
}

/// Preimage counts in a ball about one center, per target.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BallCounts {
    pub center: HalfPlanePoint,
    /// Radius actually used; shrunk slightly when a preimage sits on the circle.
    pub radius: f64,
    pub counts: Vec<u64>,
}

/// Per-center preimage counts in `B(center, r)`. A center whose circle runs
/// through a preimage is retried on a slightly smaller circle.
pub fn preimage_counts(s: &ProjectiveStructure, r: f64, centers: &[HalfPlanePoint], zs: &[SpherePoint]) -> Result<Vec<BallCounts>> {
    centers
        .par_iter()
        .map(|&x| {
            let mut radius = r;
            for attempt in 0..=4 {
                match s.circles(x, &[radius], zs) {
                    Ok(p) => {
                        let counts = p.circles[0].counts.iter().map(|&k| k as u64).collect();
                        return Ok(BallCounts { center: x, radius, counts });
                    }
                    Err(Error::BoundaryHit) if attempt < 4 => radius = r - 0.01 * (attempt + 1) as f64,
                    Err(e) => return Err(e),
                }
            }
            Err(Error::BoundaryHit)
        })
        .collect()
}

/// `δ̂ = count / vol(B(R))` averaged over centers and targets.
pub fn degree_estimate(s: &ProjectiveStructure, r: f64, centers: &[HalfPlanePoint], zs: &[SpherePoint]) -> Result<Estimate> {
    if !(6.0..=12.0).contains(&r) {
        return Err(Error::precondition(format!("degree radius must lie in [6, 12], got {r}")));
    }
    if centers.is_empty() || zs.is_empty() {
        return Err(Error::precondition("need at least one center and one target"));
    }
    let balls = preimage_counts(s, r, centers, zs)?;
    let xs: Vec<f64> = balls.iter().flat_map(|b| b.counts.iter().map(move |&k| k as f64 / ball_volume(b.radius))).collect();
    let e = Estimate::from_samples(&xs, params(&[("R", json!(r)), ("c", c_json(s.c))]));
    let deg = 2.0 * PI * e.value;
    let counts: Vec<&Vec<u64>> = balls.iter().map(|b| &b.counts).collect();
    let radii: Vec<f64> = balls.iter().map(|b| b.radius).collect();
    Ok(e.with_param("deg", json!(deg)).with_param("counts", json!(counts)).with_param("radii", json!(radii)))
}

/// `χ = ½ + 2πδ − k / |eu|` with `eu = −1`.
pub fn predict_chi(delta: f64, k: u32) -> f64 {
    0.5 + 2.0 * PI * delta - k as f64
}

/// Samples of the harmonic measure at a point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HarmonicSample {
    pub points: Vec<SpherePoint>,
    pub x: HalfPlanePoint,
    #[serde(rename = "T")]
    pub t: f64,
    pub c: crate::moebius::C64,
    /// Paths redrawn because of a degenerate singular gap.
    pub resampled: usize,
    /// Median of `log(s₁/s₂)` over the accepted paths.
    pub median_log_gap: f64,
}

/// Limit points `lim dev(ω(t))` of Brownian paths from `x`, read off as the
/// expanding image of `ρ(deck(T))`.
pub fn sample_harmonic(
    rep: &Representation,
    g: &FuchsianGroup,
    x: HalfPlanePoint,
    t: f64,
    n: usize,
    dt: f64,
    seed: u64,
) -> Result<HarmonicSample> {
    let letters = rep.letters();
    let results: Vec<Result<(SpherePoint, f64, usize)>> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut redraws = 0;
            loop {
                let stream = i + (redraws as u64) * (n as u64);
                let mut rng = stream_rng(seed, stream);
                let mut w = Word::identity();
                let s = g.reduce_into(x, &mut w)?;
                let end = advance(g, s, w, t, dt, &mut rng, |_, _, _| {})?;
                let mut prod = LogNormProduct::new();
                for &l in end.deck.letters() {
                    prod.push(&letters[l.index()]);
                }
                match prod.direction().expanding_image() {
                    Ok(p) => return Ok((p, 2.0 * prod.log_operator_norm(), redraws)),
                    Err(Error::DegenerateGap { .. }) if redraws < 10 => redraws += 1,
                    Err(e) => return Err(e),
                }
            }
        })
        .collect();
    let mut points = Vec::with_capacity(n);
    let mut gaps = Vec::with_capacity(n);
    let mut resampled = 0;
    for r in results {
        let (p, gap, k) = r?;
        points.push(p);
        gaps.push(gap);
        resampled += k;
    }
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median_log_gap = gaps.get(gaps.len() / 2).copied().unwrap_or(0.0);
    Ok(HarmonicSample { points, x, t, c: rep.c, resampled, median_log_gap })
}

/// Validation sampler: the chordal medoid of `dev(ω(s))` at `k` times in
/// `[T/2, T]`.
pub fn sample_harmonic_cesaro(
    s: &ProjectiveStructure,
    rep: &Representation,
    x: HalfPlanePoint,
    t: f64,
    n: usize,
    dt: f64,
    seed: u64,
) -> Result<HarmonicSample> {
    let g = s.group();
    let k = 16usize;
    let steps = (t / dt).round() as usize;
    let results: Vec<Result<SpherePoint>> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let mut w = Word::identity();
            let s0 = g.reduce_into(x, &mut w)?;
            let mut snaps: Vec<(HalfPlanePoint, Word)> = Vec::with_capacity(k);
            let every = (steps / 2 / k).max(1);
            advance(g, s0, w, t, dt, &mut rng, |j, tau, word| {
                if j > steps / 2 && (j - steps / 2).is_multiple_of(every) && snaps.len() < k {
                    snaps.push((tau, word.clone()));
                }
            })?;
            let pts: Vec<SpherePoint> =
                snaps.iter().map(|(tau, word)| Ok(rep.evaluate(word).apply(s.dev(*tau)?))).collect::<Result<_>>()?;
            let medoid = pts
                .iter()
                .min_by(|a, b| {
                    let da: f64 = pts.iter().map(|q| a.chordal(q)).sum();
                    let db: f64 = pts.iter().map(|q| b.chordal(q)).sum();
                    da.partial_cmp(&db).unwrap()
                })
                .copied()
                .ok_or_else(|| Error::precondition("T too short for the Cesàro sampler"))?;
            Ok(medoid)
        })
        .collect();
    let points = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(HarmonicSample { points, x, t, c: rep.c, resampled: 0, median_log_gap: f64::NAN })
}

/// Boundary angle `2 atan((a − Re x) / Im x)` of a real point; uniform on
/// `(−π, π)` under the Poisson kernel at `x`.
pub fn poisson_angle(p: &SpherePoint, x: HalfPlanePoint) -> f64 {
    match p.to_complex() {
        Some(z) => 2.0 * ((z.re - x.re()) / x.im()).atan(),
        None => PI,
    }
}

/// Grid of radii for the correlation integral.
const DIM_BINS: usize = 60;
const DIM_R_MIN: f64 = 1e-6;
const DIM_R_MAX: f64 = 2.0;
const DIM_BLOCKS: usize = 20;
const DIM_MIN_PAIRS: u64 = 100;

fn radius_edges() -> Vec<f64> {
    let (a, b) = (DIM_R_MIN.ln(), DIM_R_MAX.ln());
    (0..=DIM_BINS).map(|i| (a + (b - a) * i as f64 / DIM_BINS as f64).exp()).collect()
}

/// Histogram of chordal distances between points of two index sets.
fn pair_histogram(pts: &[[f64; 3]], a: &[usize], b: &[usize], same: bool, edges: &[f64]) -> Vec<u64> {
    let mut h = vec![0u64; edges.len() + 1];
    let lo = edges[0].ln();
    let step = (edges[edges.len() - 1].ln() - lo) / (edges.len() - 1) as f64;
    for (ii, &i) in a.iter().enumerate() {
        let start = if same { ii + 1 } else { 0 };
        for &j in &b[start..] {
            let p = pts[i];
            let q = pts[j];
            // chordal distance on the unit sphere of the R³ embedding, scaled to [0, 2]
            let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
            let k = if d < edges[0] { 0 } else { (((d.ln() - lo) / step).floor() as usize + 1).min(edges.len()) };
            h[k] += 1;
        }
    }
    h
}

/// Slope window and fit from a cumulative pair count.
fn fit_window(edges: &[f64], cum: &[u64], total: u64) -> Option<(usize, usize, f64)> {
    // cum[i] = pairs with distance < edges[i]
    let usable: Vec<usize> = (0..edges.len()).filter(|&i| cum[i] >= DIM_MIN_PAIRS && cum[i] < total).collect();
    if usable.len() < 3 {
        return None;
    }
    let logc = |i: usize| (cum[i] as f64 / total as f64).ln();
    let slopes: Vec<(usize, f64)> = usable
        .windows(2)
        .filter(|w| w[1] == w[0] + 1)
        .map(|w| (w[0], (logc(w[1]) - logc(w[0])) / (edges[w[1]].ln() - edges[w[0]].ln())))
        .collect();
    let mut best: Option<(usize, usize)> = None;
    for a in 0..slopes.len() {
        for b in a..slopes.len() {
            if slopes[b].0 - slopes[a].0 != b - a {
                break;
            }
            let run = &slopes[a..=b];
            let mean = run.iter().map(|s| s.1).sum::<f64>() / run.len() as f64;
            if run.iter().any(|s| (s.1 - mean).abs() > 0.1 * mean.abs() + 0.01) {
                break;
            }
            if best.is_none_or(|(x, y)| b - a > y - x) {
                best = Some((a, b));
            }
        }
    }
    let (a, b) = best?;
    if b - a < 1 {
        return None;
    }
    let lo = slopes[a].0;
    let hi = slopes[b].0 + 1;
    let xs: Vec<f64> = (lo..=hi).map(|i| edges[i].ln()).collect();
    let ys: Vec<f64> = (lo..=hi).map(logc).collect();
    Some((lo, hi, linear_fit(&xs, &ys).0))
}

/// Correlation dimension of the sample under chordal distance, with a
/// block-bootstrap standard error.
pub fn dimension_estimate(h: &HarmonicSample) -> Result<Estimate> {
    dimension_of_points(&h.points, 0).map(|e| e.with_param("T", json!(h.t)).with_param("c", c_json(h.c)))
}

/// Correlation dimension of arbitrary sphere points.
pub fn dimension_of_points(points: &[SpherePoint], seed: u64) -> Result<Estimate> {
    let n = points.len();
    if n < 2000 {
        return Err(Error::precondition(format!("dimension estimate needs at least 2000 points, got {n}")));
    }
    let pts: Vec<[f64; 3]> = points.iter().map(|p| p.to_r3()).collect();
    let edges = radius_edges();
    let blocks: Vec<Vec<usize>> = (0..DIM_BLOCKS).map(|b| (b..n).step_by(DIM_BLOCKS).collect()).collect();
    let pairs: Vec<(usize, usize)> = (0..DIM_BLOCKS).flat_map(|a| (a..DIM_BLOCKS).map(move |b| (a, b))).collect();
    let hists: Vec<Vec<u64>> = pairs.par_iter().map(|&(a, b)| pair_histogram(&pts, &blocks[a], &blocks[b], a == b, &edges)).collect();
    let cumulative = |weights: &dyn Fn(usize, usize) -> u64| -> (Vec<u64>, u64) {
        let mut h = vec![0u64; edges.len() + 1];
        for (k, &(a, b)) in pairs.iter().enumerate() {
            let w = weights(a, b);
            if w > 0 {
                for (slot, v) in h.iter_mut().zip(&hists[k]) {
                    *slot += w * v;
                }
            }
        }
        let total: u64 = h.iter().sum();
        let mut cum = vec![0u64; edges.len()];
        let mut acc = 0;
        for i in 0..edges.len() {
            acc += h[i];
            cum[i] = acc;
        }
        (cum, total)
    };
    let (cum, total) = cumulative(&|_, _| 1);
    if cum[0] == total {
        // every pair closer than the smallest radius: an atom at this resolution
        return Ok(Estimate {
            value: 0.0,
            stderr: 0.0,
            n_samples: n,
            params: params(&[("r_lo", json!(0.0)), ("r_hi", json!(edges[0])), ("estimator", json!("correlation dimension"))]),
        });
    }
    let (lo, hi, slope) =
        fit_window(&edges, &cum, total).ok_or_else(|| Error::NoScalingWindow("no run of radii with slope variation below 10%".into()))?;
    let mut rng = stream_rng(seed, 0);
    let mut boots = Vec::with_capacity(200);
    for _ in 0..200 {
        let mut mult = [0u64; DIM_BLOCKS];
        for _ in 0..DIM_BLOCKS {
            mult[rng.random_range(0..DIM_BLOCKS)] += 1;
        }
        let (cum_b, total_b) = cumulative(&|a, b| if a == b { mult[a] } else { mult[a] * mult[b] });
        if cum_b[lo] == 0 || total_b == 0 {
            continue;
        }
        let xs: Vec<f64> = (lo..=hi).map(|i| edges[i].ln()).collect();
        let ys: Vec<f64> = (lo..=hi).map(|i| (cum_b[i].max(1) as f64 / total_b as f64).ln()).collect();
        boots.push(linear_fit(&xs, &ys).0);
    }
    let m = boots.iter().sum::<f64>() / boots.len() as f64;
    let sd = (boots.iter().map(|b| (b - m).powi(2)).sum::<f64>() / (boots.len() - 1) as f64).sqrt();
    Ok(Estimate {
        value: slope,
        stderr: sd,
        n_samples: n,
        params: params(&[
            ("r_lo", json!(edges[lo])),
            ("r_hi", json!(edges[hi])),
            ("estimator", json!("correlation dimension")),
            ("caveat", json!("correlation dimension bounds the Hausdorff dimension from below for exact-dimensional measures")),
        ]),
    })
}

/// Displacement-normalized helper used by the examples and tests.
pub fn mean_displacement_rate(g: &FuchsianGroup, words: &[Word], t: f64) -> f64 {
    words.iter().map(|w| hyp_distance(g.base_point, g.evaluate(w).apply_half_plane(g.base_point)) / t).sum::<f64>() / words.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::punctured_torus_group;

    #[test]
    fn predict_chi_values() {
        assert_eq!(predict_chi(0.0, 0), 0.5);
        assert!((predict_chi(0.01, 0) - (0.5 + 2.0 * PI * 0.01)).abs() < 1e-15);
        assert!((predict_chi(1.0 / (2.0 * PI), 1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ball_estimator_rejects_trivial_ball() {
        let g = punctured_torus_group();
        let rep = Representation::fuchsian(&g);
        assert!(lyapunov_ball(&rep, &g, 0.5, 10, 1).unwrap_err().is_precondition());
    }

    #[test]
    fn elementary_representation_is_rejected() {
        let g = punctured_torus_group();
        let t = MoebiusMap::from_real(1.0, 1.0, 0.0, 1.0).unwrap();
        let rep = Representation { rho_a: t, rho_b: t, c: Default::default() };
        assert!(matches!(lyapunov_brownian(&rep, &g, 1.0, 2, 0.01, 0), Err(Error::ElementaryRepresentation(_))));
    }

    #[test]
    fn circle_has_dimension_one() {
        let pts: Vec<SpherePoint> = (0..5000)
            .map(|i| {
                let th = 2.0 * PI * ((i as f64 * 0.618_033_988_75) % 1.0);
                SpherePoint::from_pair(c64(th.cos(), 0.0), c64(th.sin(), 0.0))
            })
            .collect();
        let e = dimension_of_points(&pts, 1).unwrap();
        assert!((e.value - 1.0).abs() < 0.05, "{e:?}");
    }

    #[test]
    fn atom_has_dimension_zero() {
        let mut rng = stream_rng(5, 0);
        let pts: Vec<SpherePoint> =
            (0..5000).map(|_| SpherePoint::from_complex(c64(0.3 + 1e-9 * rng.random::<f64>(), 0.2 + 1e-9 * rng.random::<f64>()))).collect();
        let e = dimension_of_points(&pts, 1).unwrap();
        assert!(e.value.abs() < 0.05, "{e:?}");
    }
}
