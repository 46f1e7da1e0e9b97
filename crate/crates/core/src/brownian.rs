//! Hyperbolic Brownian motion with generator `y²(∂²ₓ + ∂²ᵧ)`, tracked on the
//! surface by reduction into the fundamental domain.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::{FuchsianGroup, GroupElement, Word};
use crate::moebius::{c64, HalfPlanePoint};

pub const MAX_DT: f64 = 0.01;
pub const MAX_T: f64 = 1e4;

/// Deterministic RNG for stream `stream` of a run seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One log-Euler step: `y' = y exp(√(2dt) ξ₂ − dt)` exactly, then
/// `x' = x + √(2dt · y y') ξ₁`. Stays in the half-plane.
pub fn sample_step<R: Rng + ?Sized>(tau: HalfPlanePoint, dt: f64, rng: &mut R) -> Result<HalfPlanePoint> {
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(Error::precondition(format!("dt must lie in (0, {MAX_DT}], got {dt}")));
    }
    Ok(step_unchecked(tau, dt.sqrt() * std::f64::consts::SQRT_2, rng))
}

fn step_unchecked<R: Rng + ?Sized>(tau: HalfPlanePoint, scale: f64, rng: &mut R) -> HalfPlanePoint {
    let y = tau.im();
    let x1: f64 = rng.sample(StandardNormal);
    let x2: f64 = rng.sample(StandardNormal);
    let y1 = y * (scale * x2 - 0.5 * scale * scale).exp();
    HalfPlanePoint(c64(tau.re() + scale * (y * y1).sqrt() * x1, y1))
}

/// A path reduced into the fundamental domain with its running deck word.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrackedPath {
    pub times: Vec<f64>,
    pub points: Vec<HalfPlanePoint>,
    /// Word length of the deck element after each stored point.
    pub word_lengths: Vec<usize>,
    pub deck: GroupElement,
    pub seed: u64,
    pub dt: f64,
}

/// Options for [`run_from`].
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Store every `stride`-th point; 0 stores only the endpoints.
    pub stride: usize,
}

/// Final state of a path without stored points.
#[derive(Clone, Debug)]
pub struct PathEnd {
    pub point: HalfPlanePoint,
    pub deck: Word,
}

/// Runs Brownian motion for time `t` from `start` (inside the domain) with
/// deck word `deck`, consuming `rng`. Returns the reduced endpoint and the
/// updated word.
pub fn advance<R: Rng + ?Sized>(
    g: &FuchsianGroup,
    start: HalfPlanePoint,
    deck: Word,
    t: f64,
    dt: f64,
    rng: &mut R,
    mut visit: impl FnMut(usize, HalfPlanePoint, &Word),
) -> Result<PathEnd> {
    check_params(t, dt)?;
    let steps = (t / dt).round() as usize;
    let scale = (2.0 * dt).sqrt();
    let mut tau = start;
    let mut word = deck;
    for k in 1..=steps {
        let next = step_unchecked(tau, scale, rng);
        tau = g.reduce_into(next, &mut word)?;
        visit(k, tau, &word);
    }
    Ok(PathEnd { point: tau, deck: word })
}

fn check_params(t: f64, dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(Error::precondition(format!("dt must lie in (0, {MAX_DT}], got {dt}")));
    }
    if !(0.0..=MAX_T).contains(&t) {
        return Err(Error::precondition(format!("T must lie in [0, {MAX_T}], got {t}")));
    }
    Ok(())
}

/// Runs a path from the base point for time `t`.
pub fn run(g: &FuchsianGroup, t: f64, dt: f64, seed: u64) -> Result<TrackedPath> {
    run_from(g, g.base_point, t, dt, seed, 0, RunOptions::default())
}

/// Runs a path from `start` using RNG stream `stream` of `seed`.
pub fn run_from(
    g: &FuchsianGroup,
    start: HalfPlanePoint,
    t: f64,
    dt: f64,
    seed: u64,
    stream: u64,
    opts: RunOptions,
) -> Result<TrackedPath> {
    check_params(t, dt)?;
    let mut rng = stream_rng(seed, stream);
    let mut deck = Word::identity();
    let start = g.reduce_into(start, &mut deck)?;
    let mut times = vec![0.0];
    let mut points = vec![start];
    let mut word_lengths = vec![deck.len()];
    let steps = (t / dt).round() as usize;
    let end = advance(g, start, deck, t, dt, &mut rng, |k, tau, w| {
        if opts.stride > 0 && k % opts.stride == 0 && k != steps {
            times.push(k as f64 * dt);
            points.push(tau);
            word_lengths.push(w.len());
        }
    })?;
    if steps > 0 {
        times.push(steps as f64 * dt);
        points.push(end.point);
        word_lengths.push(end.deck.len());
    }
    Ok(TrackedPath { times, points, word_lengths, deck: g.element(&end.deck), seed, dt })
}

impl TrackedPath {
    /// Writes `t, re, im, word_delta` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,re,im,word_delta")?;
        let mut prev = 0usize;
        for ((t, p), len) in self.times.iter().zip(&self.points).zip(&self.word_lengths) {
            writeln!(out, "{t},{},{},{}", p.re(), p.im(), *len as i64 - prev as i64)?;
            prev = *len;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::punctured_torus_group;
    use crate::moebius::hyp_distance;

    #[test]
    fn zero_time_gives_identity() {
        let g = punctured_torus_group();
        let p = run(&g, 0.0, 0.01, 1).unwrap();
        assert!(p.deck.word.is_empty());
    }

    #[test]
    fn identical_seeds_give_identical_words() {
        let g = punctured_torus_group();
        let a = run(&g, 5.0, 0.01, 42).unwrap();
        let b = run(&g, 5.0, 0.01, 42).unwrap();
        assert_eq!(a.deck.word, b.deck.word);
        assert_eq!(a.points.last(), b.points.last());
    }

    #[test]
    fn rejects_large_dt() {
        let mut rng = stream_rng(0, 0);
        assert!(sample_step(HalfPlanePoint(c64(0.0, 1.0)), 0.1, &mut rng).unwrap_err().is_precondition());
        let g = punctured_torus_group();
        assert!(run(&g, -1.0, 0.01, 0).unwrap_err().is_precondition());
    }

    #[test]
    fn small_step_second_moment() {
        let mut rng = stream_rng(7, 0);
        let dt = 1e-4;
        let tau = HalfPlanePoint(c64(0.3, 1.7));
        let n = 20000;
        let m: f64 = (0..n).map(|_| (sample_step(tau, dt, &mut rng).unwrap().0 - tau.0).norm_sqr()).sum::<f64>() / n as f64;
        let expected = 4.0 * 1.7 * 1.7 * dt;
        assert!((m / expected - 1.0).abs() < 0.03, "{m} vs {expected}");
    }

    #[test]
    fn endpoint_is_deck_image_of_reduced_point() {
        let g = punctured_torus_group();
        let mut rng = stream_rng(3, 0);
        let mut tau = g.base_point;
        let mut lift = g.base_point;
        let mut word = Word::identity();
        for _ in 0..2000 {
            let next = step_unchecked(tau, (0.02f64).sqrt(), &mut rng);
            // unreduced lift follows the same increments in the lifted frame
            let before = g.evaluate(&word);
            lift = before.apply_half_plane(next);
            tau = g.reduce_into(next, &mut word).unwrap();
        }
        let deck = g.evaluate(&word);
        assert!(hyp_distance(deck.apply_half_plane(tau), lift) < 1e-6);
        assert!(g.in_domain(tau, 1e-9));
    }
}
