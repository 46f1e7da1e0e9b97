//! Adaptive Dormand–Prince integration of the frame equation `M' = M K`,
//! `K = [[0, 1], [-Q, 0]]`, along a parametrized curve in the half-plane.

use crate::error::{Error, Result};
use crate::moebius::C64;

/// Row-major 2×2 complex matrix `[m00, m01, m10, m11]`.
pub type Frame = [C64; 4];

/// A curve `t ↦ τ(t)` with its derivative.
pub trait Curve {
    fn point(&self, t: f64) -> (C64, C64);
}

impl<F: Fn(f64) -> (C64, C64)> Curve for F {
    fn point(&self, t: f64) -> (C64, C64) {
        self(t)
    }
}

/// Verdict of an observer on a proposed step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Refine,
}

#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    /// Relative local error allowed per step, per column.
    pub rtol: f64,
    pub h_min: f64,
    pub h_max: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rtol: 1e-10, h_min: 1e-9, h_max: 0.25 }
    }
}

fn rhs(m: &Frame, q: C64, dtau: C64) -> Frame {
    // M K with K = [[0, 1], [-q, 0]], scaled by dτ/dt.
    [-q * m[1] * dtau, m[0] * dtau, -q * m[3] * dtau, m[2] * dtau]
}

fn axpy(m: &Frame, h: f64, terms: &[(f64, &Frame)]) -> Frame {
    let mut out = *m;
    for (c, k) in terms {
        for i in 0..4 {
            out[i] += k[i] * (h * c);
        }
    }
    out
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One Dormand–Prince step; returns the fifth-order solution and the
/// column-wise relative error estimate.
fn dp_step<C: Curve, P: Fn(C64) -> C64>(m: &Frame, t: f64, h: f64, curve: &C, potential: &P) -> (Frame, f64) {
    let f = |t: f64, y: &Frame| {
        let (tau, dtau) = curve.point(t);
        rhs(y, potential(tau), dtau)
    };
    let k1 = f(t, m);
    let k2 = f(t + C2 * h, &axpy(m, h, &[(A21, &k1)]));
    let k3 = f(t + C3 * h, &axpy(m, h, &[(A31, &k1), (A32, &k2)]));
    let k4 = f(t + C4 * h, &axpy(m, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(t + C5 * h, &axpy(m, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = f(t + h, &axpy(m, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
    let y = axpy(m, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = f(t + h, &y);
    let mut err = [C64::default(); 4];
    for i in 0..4 {
        err[i] = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
    }
    let col = |v: &Frame, j: usize| (v[j].norm_sqr() + v[j + 2].norm_sqr()).sqrt();
    let e = (0..2).map(|j| col(&err, j) / col(&y, j).max(1e-300)).fold(0.0, f64::max);
    (y, e)
}

/// Integrates from `t0` to `t1` (either direction). The observer sees every
/// proposed step `(t, frame)` and may request refinement. Returns the final
/// frame and the number of accepted steps.
#[allow(clippy::too_many_arguments)]
pub fn integrate<C, P, O>(
    m0: Frame,
    t0: f64,
    t1: f64,
    h0: f64,
    tol: &Tolerance,
    curve: &C,
    potential: &P,
    mut observer: O,
) -> Result<(Frame, usize)>
where
    C: Curve,
    P: Fn(C64) -> C64,
    O: FnMut(f64, &Frame) -> Verdict,
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok((m0, 0));
    }
    let dir = span.signum();
    let mut t = t0;
    let mut m = m0;
    let mut h = h0.abs().min(tol.h_max).min(span.abs());
    let mut steps = 0;
    while (t1 - t) * dir > 1e-14 * span.abs().max(1.0) {
        h = h.min((t1 - t).abs());
        let (y, err) = dp_step(&m, t, h * dir, curve, potential);
        if !(err <= tol.rtol) {
            let factor = if err.is_finite() { (0.9 * (tol.rtol / err).powf(0.2)).clamp(0.1, 0.9) } else { 0.1 };
            h *= factor;
            if h < tol.h_min {
                return Err(Error::StepUnderflow(h));
            }
            continue;
        }
        let t_new = if (t1 - (t + h * dir)) * dir < 1e-14 * span.abs().max(1.0) { t1 } else { t + h * dir };
        if observer(t_new, &y) == Verdict::Refine {
            h *= 0.5;
            if h < tol.h_min {
                return Err(Error::BoundaryHit);
            }
            continue;
        }
        t = t_new;
        m = y;
        steps += 1;
        let grow = if err > 0.0 { (0.9 * (tol.rtol / err).powf(0.2)).clamp(0.2, 5.0) } else { 5.0 };
        h = (h * grow).min(tol.h_max);
    }
    Ok((m, steps))
}

/// Rescales the frame to determinant one.
pub fn renormalize(m: &Frame) -> Frame {
    let det = m[0] * m[3] - m[1] * m[2];
    let s = det.sqrt().inv();
    [m[0] * s, m[1] * s, m[2] * s, m[3] * s]
}

pub fn determinant(m: &Frame) -> C64 {
    m[0] * m[3] - m[1] * m[2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::c64;

    #[test]
    fn constant_potential_matches_closed_form() {
        // u'' = -q u with q = 1 along the real segment: cos / sin solutions.
        let curve = |t: f64| (c64(t, 1.0), c64(1.0, 0.0));
        let pot = |_: C64| c64(1.0, 0.0);
        let m0 = [c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)];
        let (m, _) = integrate(m0, 0.0, 3.0, 0.1, &Tolerance::default(), &curve, &pot, |_, _| Verdict::Accept).unwrap();
        // Column 2 is (u1, u2) with u1(0)=0, u1'(0)=1: u1 = sin t; u2 = cos t.
        assert!((m[1] - c64(3f64.sin(), 0.0)).norm() < 1e-8);
        assert!((m[3] - c64(3f64.cos(), 0.0)).norm() < 1e-8);
        assert!((m[0] - c64(3f64.cos(), 0.0)).norm() < 1e-8);
        assert!((determinant(&m) - 1.0).norm() < 1e-9);
    }

    #[test]
    fn backward_integration_returns() {
        let curve = |t: f64| (c64(t, 1.0), c64(1.0, 0.0));
        let pot = |z: C64| z * 0.3;
        let m0 = [c64(1.0, 0.0), c64(0.5, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)];
        let tol = Tolerance::default();
        let (m1, _) = integrate(m0, 0.0, 2.0, 0.1, &tol, &curve, &pot, |_, _| Verdict::Accept).unwrap();
        let (m2, _) = integrate(m1, 2.0, 0.0, 0.1, &tol, &curve, &pot, |_, _| Verdict::Accept).unwrap();
        for i in 0..4 {
            assert!((m2[i] - m0[i]).norm() < 1e-8);
        }
    }
}
