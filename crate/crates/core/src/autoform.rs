//! The weight-4 cusp form spanning the quadratic differentials of the
//! once-punctured torus.
//!
//! The form is a Poincaré series over the cosets of the cusp stabilizer,
//! written in the cusp-normalized coordinate `w` where the parabolic
//! commutator acts as `w ↦ w ± 1`. In this coordinate the group equals
//! `D Γ' D⁻¹` with `Γ'` the commutator subgroup of PSL(2, Z) and
//! `D = diag(1/√6, √6)`, so cosets are indexed by coprime pairs `(c, d)`.
//!
//! The Poincaré series of index 1 vanishes identically for this group, so
//! the series of index [`POINCARE_INDEX`] = 2 is used.
//!
//! Two evaluators are provided. [`CuspForm4::evaluate`] sums the truncated
//! series directly. [`CuspForm4::evaluate_fast`] reduces the point into the
//! standard domain of PSL(2, Z) and sums a short Fourier expansion whose
//! coefficients were sampled from the truncated series at build time.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::FuchsianGroup;
use crate::modular::{automorphy, character_index, complete_bottom_row, coprime_pairs, reduce_to_standard, IntMatrix};
use crate::moebius::{c64, HalfPlanePoint, MoebiusMap, C64};

/// Index `m` of the Poincaré series `Σ e^{2πi m γw} (cw + d)^{-4}`.
pub const POINCARE_INDEX: u32 = 2;
/// Width of the cusp in PSL(2, Z) coordinates.
const CUSP_WIDTH: f64 = 6.0;
/// Minimal imaginary part, in cusp-normalized coordinates, for direct series evaluation.
pub const MIN_SERIES_IM: f64 = 0.05;
/// Height, in PSL(2, Z) coordinates, at which Fourier coefficients are sampled.
const SAMPLE_HEIGHT: f64 = 0.85;
const FOURIER_SAMPLES: usize = 32;
const FOURIER_TERMS: usize = 5;
const TAIL_PROBE_HEIGHT: f64 = 0.2;
/// Truncation radius used by [`standard_form`].
pub const STANDARD_R_TRUNC: f64 = 12.0;

/// Truncated weight-4 Poincaré series.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CuspForm4 {
    pub group: FuchsianGroup,
    /// Coset representatives `[a, b, c, d]` acting on the cusp-normalized coordinate.
    pub coset_reps: Vec<[f64; 4]>,
    pub r_trunc: f64,
    /// Largest change of the unscaled series at cusp-normalized height 0.2
    /// when the truncation radius grows by 2.
    pub tail_estimate: f64,
    /// Multiplier making the hyperbolic sup-norm `sup |q₀| (Im τ)²` equal to one.
    pub scale: f64,
    /// Coefficients `b_k` of `F(τ) = Σ b_k e^{2πi (m + 6k) τ / 6}` in PSL(2, Z) coordinates, unscaled.
    pub fourier: Vec<C64>,
}

impl CuspForm4 {
    /// Builds the truncated series over all cosets with horocyclic
    /// displacement `log(c² + d²) <= r_trunc`, validating against `r_trunc + 2`
    /// on the unscaled series.
    pub fn build(group: &FuchsianGroup, r_trunc: f64) -> Result<Self> {
        if !(r_trunc >= 6.0) {
            return Err(Error::precondition(format!("R_trunc must be at least 6, got {r_trunc}")));
        }
        check_modular_embedding(group)?;
        let coset_reps = coset_representatives(0.0, r_trunc.exp());
        let annulus = coset_representatives(r_trunc.exp(), (r_trunc + 2.0).exp());
        for w in [c64(0.0, 1.0), c64(0.0, 2.0), c64(1.0, 1.0)] {
            let diff = series_sum(&annulus, w).norm();
            if diff > 1e-6 {
                return Err(Error::InsufficientTruncation(diff));
            }
        }
        let tail = (0..10).map(|i| series_sum(&annulus, c64(i as f64 / 10.0, TAIL_PROBE_HEIGHT)).norm()).fold(0.0, f64::max);
        let fourier = fourier_coefficients(&coset_reps);
        let mut f = CuspForm4 { group: group.clone(), coset_reps, r_trunc, tail_estimate: 0.0, scale: 1.0, fourier };
        f.scale = 1.0 / f.sup_norm_unscaled();
        f.tail_estimate = tail;
        Ok(f)
    }

    /// Unscaled truncated Poincaré series in the cusp-normalized coordinate.
    pub fn series_value(&self, w: HalfPlanePoint) -> Result<C64> {
        if w.im() < MIN_SERIES_IM {
            return Err(Error::TooDeep(w.im()));
        }
        Ok(series_sum(&self.coset_reps, w.0))
    }

    /// Truncated series in the cusp-normalized coordinate.
    pub fn evaluate(&self, w: HalfPlanePoint) -> Result<C64> {
        Ok(self.series_value(w)? * self.scale)
    }

    /// Fourier evaluation after reduction; valid on the whole half-plane.
    pub fn evaluate_fast(&self, w: C64) -> C64 {
        self.modular_value(w * CUSP_WIDTH) * self.scale
    }

    /// `q₀` in working coordinates: the pull-back of the cusp-normalized form
    /// by the cusp normalizer.
    pub fn q0(&self, tau: C64) -> C64 {
        let n = self.group.cusp_normalizer;
        let j = n.c * tau + n.d;
        let w = (n.a * tau + n.b) / j;
        self.evaluate_fast(w) / (j * j * j * j)
    }

    /// Same as [`CuspForm4::q0`] but through the direct series.
    pub fn q0_series(&self, tau: HalfPlanePoint) -> Result<C64> {
        let n = self.group.cusp_normalizer;
        let j = n.c * tau.0 + n.d;
        let w = n.apply_half_plane(tau);
        Ok(self.evaluate(w)? / (j * j * j * j))
    }

    /// Unscaled value `F(τ')` in PSL(2, Z) coordinates via the Fourier expansion.
    fn modular_value(&self, tau: C64) -> C64 {
        let (t, g) = reduce_to_standard(tau);
        let m = POINCARE_INDEX as f64;
        let q6 = (c64(0.0, 2.0 * PI / CUSP_WIDTH) * t).exp();
        let q = q6.powi(6);
        let mut acc = C64::default();
        for b in self.fourier.iter().rev() {
            acc = acc * q + b;
        }
        let val = acc * q6.powi(POINCARE_INDEX as i32);
        let j = automorphy(g, t);
        let j2 = j * j;
        val * character(g, m) * j2 * j2
    }

    /// `sup |q₀(τ)| (Im τ)²`, evaluated over the standard domain.
    fn sup_norm_unscaled(&self) -> f64 {
        let h = |x: f64, y: f64| self.modular_value(c64(x, y)).norm() * y * y / (CUSP_WIDTH * CUSP_WIDTH);
        let y0 = 3f64.sqrt() / 2.0;
        let (mut bx, mut by, mut best) = (0.0, 1.0, 0.0);
        for i in 0..=50 {
            let x = -0.5 + i as f64 / 50.0;
            for j in 0..=120 {
                let y = y0 + j as f64 * 0.025;
                let v = h(x, y);
                if v > best {
                    (bx, by, best) = (x, y, v);
                }
            }
        }
        let mut step = 0.02;
        while step > 1e-9 {
            let mut moved = false;
            for (dx, dy) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                let (x, y) = (bx + dx, (by + dy).max(y0));
                let v = h(x, y);
                if v > best {
                    (bx, by, best) = (x, y, v);
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        best
    }

    /// Serializes the coset list and normalization data.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Form at the default truncation over the standard group, built once per process.
pub fn standard_form() -> Arc<CuspForm4> {
    static FORM: OnceLock<Arc<CuspForm4>> = OnceLock::new();
    FORM.get_or_init(|| {
        let g = crate::fuchsian::punctured_torus_group();
        Arc::new(CuspForm4::build(&g, STANDARD_R_TRUNC).expect("standard cusp form builds"))
    })
    .clone()
}

fn character(g: IntMatrix, m: f64) -> C64 {
    let k = character_index(g) as f64;
    let th = 2.0 * PI * m * k / CUSP_WIDTH;
    c64(th.cos(), th.sin())
}

/// Checks that the cusp-normalized generators are `D M D⁻¹` with `M` in the
/// commutator subgroup of PSL(2, Z).
fn check_modular_embedding(group: &FuchsianGroup) -> Result<()> {
    let s = CUSP_WIDTH.sqrt();
    let d = MoebiusMap::from_real(1.0 / s, 0.0, 0.0, s)?;
    let n = group.cusp_normalizer;
    for gen in [group.gen_a, group.gen_b] {
        let m = d.inverse() * n * gen * n.inverse() * d;
        let mut int = [0i64; 4];
        for (slot, z) in int.iter_mut().zip(m.entries()) {
            let r = z.re.round();
            if (z - r).norm() > 1e-8 {
                return Err(Error::precondition("group is not a conjugate of the modular commutator subgroup"));
            }
            *slot = r as i64;
        }
        if character_index(int) != 0 {
            return Err(Error::precondition("generator lies outside the commutator subgroup"));
        }
    }
    Ok(())
}

/// Representatives with `lo < c² + d² <= hi`, in cusp-normalized form.
fn coset_representatives(lo: f64, hi: f64) -> Vec<[f64; 4]> {
    coprime_pairs(hi)
        .into_iter()
        .filter(|&(c, d)| ((c * c + d * d) as f64) > lo)
        .map(|(c, d)| {
            let [a, b, c, d] = complete_bottom_row(c, d);
            let k = character_index([a, b, c, d]) as i64;
            // T^{-k} M lies in the commutator subgroup.
            let (a, b) = (a - k * c, b - k * d);
            [a as f64, b as f64 / CUSP_WIDTH, c as f64 * CUSP_WIDTH, d as f64]
        })
        .collect()
}

fn series_sum(reps: &[[f64; 4]], w: C64) -> C64 {
    let m = POINCARE_INDEX as f64;
    let mut acc = C64::default();
    for r in reps {
        let j = w * r[2] + r[3];
        let gw = (w * r[0] + r[1]) / j;
        let e = (c64(0.0, 2.0 * PI * m) * gw).exp();
        let j2 = j * j;
        acc += e / (j2 * j2);
    }
    acc
}

/// Samples the series on the horizontal line `Im τ' = SAMPLE_HEIGHT` and
/// extracts the coefficients of the twisted periodic part.
fn fourier_coefficients(reps: &[[f64; 4]]) -> Vec<C64> {
    let m = POINCARE_INDEX as f64;
    let n = FOURIER_SAMPLES;
    let samples: Vec<C64> = (0..n)
        .map(|j| {
            let tau = c64(j as f64 / n as f64, SAMPLE_HEIGHT);
            let f = series_sum(reps, tau / CUSP_WIDTH);
            f * (c64(0.0, -2.0 * PI * m / CUSP_WIDTH) * tau).exp()
        })
        .collect();
    (0..FOURIER_TERMS)
        .map(|k| {
            let mut s = C64::default();
            for (j, v) in samples.iter().enumerate() {
                let th = -2.0 * PI * (k * j) as f64 / n as f64;
                s += v * c64(th.cos(), th.sin());
            }
            s / n as f64 * (2.0 * PI * k as f64 * SAMPLE_HEIGHT).exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Coefficients of `∏ (1 - x^n)^8`.
    fn eta8_coefficients(len: usize) -> Vec<f64> {
        let mut c = vec![0.0; len];
        c[0] = 1.0;
        for n in 1..len {
            for _ in 0..8 {
                for i in (n..len).rev() {
                    c[i] -= c[i - n];
                }
            }
        }
        c
    }

    #[test]
    fn fourier_coefficients_match_eta_power() {
        let f = standard_form();
        let eta = eta8_coefficients(FOURIER_TERMS);
        let b0 = f.fourier[0];
        assert!(b0.norm() > 1e-3);
        for (k, (coef, expected)) in f.fourier.iter().zip(&eta).enumerate().skip(1) {
            let ratio = coef / b0;
            // sampling error grows by e^{2πk·y0} when undoing the height
            let tol = 1e-8 * (2.0 * PI * k as f64 * SAMPLE_HEIGHT).exp() + 1e-6;
            assert!((ratio - expected).norm() < tol, "k={k} {ratio} vs {expected}");
        }
    }

    #[test]
    fn fast_and_series_evaluations_agree() {
        let f = standard_form();
        for (w, tol) in [(c64(0.0, 1.0), 1e-6), (c64(0.3, 0.2), 1e-6), (c64(-0.41, 0.08), 1e-6), (c64(0.7, 0.06), 1e-5)] {
            let a = f.evaluate(HalfPlanePoint(w)).unwrap();
            let b = f.evaluate_fast(w);
            assert!((a - b).norm() < tol * (1.0 + a.norm()), "{w}: {a} vs {b}");
        }
    }

    #[test]
    fn too_deep_is_rejected() {
        let f = standard_form();
        assert!(matches!(f.evaluate(HalfPlanePoint(c64(0.0, 0.01))), Err(Error::TooDeep(_))));
    }

    #[test]
    fn rejects_small_truncation() {
        let g = crate::fuchsian::punctured_torus_group();
        assert!(CuspForm4::build(&g, 4.0).unwrap_err().is_precondition());
    }
}
