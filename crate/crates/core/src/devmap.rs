//! Developing maps and holonomy of the structures `σ_c` with Schwarzian
//! `c·q₀`, obtained from the linear equation `u'' + (c/2) q₀ u = 0`.
//!
//! A frame is the matrix `M = [[u₁', u₁], [u₂', u₂]]` of two solutions. It
//! evolves by `M' = M K` with `K = [[0, 1], [-(c/2) q₀, 0]]` and the
//! developing map is `dev = M · 0 = u₁ / u₂`. The frame at the base point
//! `τ₀` is `[[1, τ₀], [0, 1]]`, so that `c = 0` gives `dev(τ) = τ`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::autoform::{standard_form, CuspForm4};
use crate::error::{Error, Result};
use crate::fuchsian::{FuchsianGroup, Letter, Word};
use crate::moebius::{c64, hyp_distance, HalfPlanePoint, MoebiusMap, SpherePoint, C64};
use crate::ode::{integrate, renormalize, Curve, Frame, Tolerance, Verdict};

/// Largest hyperbolic length of one segment accepted by `continue_frame`.
pub const MAX_SEGMENT: f64 = 0.5;
/// Slice window for holonomy computations.
pub const MAX_ABS_C: f64 = 100.0;
/// Largest radius accepted by preimage counting.
pub const MAX_COUNT_RADIUS: f64 = 12.0;
/// Largest argument change of `dev - z` allowed between accepted steps.
const MAX_ARG_STEP: f64 = PI / 4.0;
/// Largest phase jump tolerated when switching to a fresh anchor frame.
const MAX_ANCHOR_MISMATCH: f64 = 0.3;
/// Hyperbolic arc length between anchor frames on a counting circle.
const ANCHOR_SPACING: f64 = 4.0;

/// A point of the structure's parameter slice.
#[derive(Clone, Debug)]
pub struct ProjectiveStructure {
    pub form: Arc<CuspForm4>,
    pub c: C64,
    pub tol: Tolerance,
}

/// A frame of solutions at a point.
#[derive(Clone, Copy, Debug)]
pub struct DevFrame {
    pub base: HalfPlanePoint,
    pub frame: MoebiusMap,
    pub dev_value: SpherePoint,
}

impl DevFrame {
    fn from_frame(base: HalfPlanePoint, m: Frame) -> Self {
        let m = renormalize(&m);
        let frame = to_map(&m);
        Self { base, frame, dev_value: SpherePoint::from_pair(m[1], m[3]) }
    }

    fn raw(&self) -> Frame {
        self.frame.entries()
    }

    /// Wronskian `u₁' u₂ - u₁ u₂'`, the frame determinant.
    pub fn wronskian(&self) -> C64 {
        self.frame.det()
    }
}

fn to_map(m: &Frame) -> MoebiusMap {
    MoebiusMap::raw(m[0], m[1], m[2], m[3])
}

/// Holonomy representation on the generators.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Representation {
    pub rho_a: MoebiusMap,
    pub rho_b: MoebiusMap,
    pub c: C64,
}

impl Representation {
    /// The inclusion of the group itself.
    pub fn fuchsian(group: &FuchsianGroup) -> Self {
        Self { rho_a: group.gen_a, rho_b: group.gen_b, c: C64::default() }
    }

    pub fn letter(&self, l: Letter) -> MoebiusMap {
        match l {
            Letter::A => self.rho_a,
            Letter::AInv => self.rho_a.inverse(),
            Letter::B => self.rho_b,
            Letter::BInv => self.rho_b.inverse(),
        }
    }

    pub fn letters(&self) -> [MoebiusMap; 4] {
        Letter::ALL.map(|l| self.letter(l))
    }

    pub fn evaluate(&self, w: &Word) -> MoebiusMap {
        w.letters().iter().fold(MoebiusMap::identity(), |m, &l| (m * self.letter(l)).renormalized())
    }

    pub fn commutator(&self) -> MoebiusMap {
        self.rho_a * self.rho_b * self.rho_a.inverse() * self.rho_b.inverse()
    }

    /// Generators conjugated by the map sending `i` to `base`, so that the
    /// Frobenius norm of a product measures displacement from `base`.
    pub fn adapted_letters(&self, base: HalfPlanePoint) -> [MoebiusMap; 4] {
        let p = adapter(base);
        let pi = p.inverse();
        self.letters().map(|m| pi * m * p)
    }

    /// Finite non-elementarity check: some short word is loxodromic or
    /// non-unitary and the generators share no fixed point.
    pub fn check_non_elementary(&self) -> Result<()> {
        let words = [self.rho_a, self.rho_b, self.rho_a * self.rho_b, self.rho_a * self.rho_b.inverse()];
        let hyperbolic = words.iter().any(|m| {
            let t2 = m.trace_sq();
            t2.im.abs() > 1e-8 || t2.re > 4.0 + 1e-8 || t2.re < -1e-8
        });
        if !hyperbolic {
            return Err(Error::ElementaryRepresentation("no generator word is loxodromic".into()));
        }
        let fa = fixed_points(&self.rho_a);
        let fb = fixed_points(&self.rho_b);
        for p in &fa {
            for q in &fb {
                if p.chordal(q) < 1e-6 {
                    return Err(Error::ElementaryRepresentation("generators share a fixed point".into()));
                }
            }
        }
        Ok(())
    }
}

/// Real affine map sending `i` to `base`.
pub fn adapter(base: HalfPlanePoint) -> MoebiusMap {
    let s = base.im().sqrt();
    MoebiusMap::from_real(s, base.re() / s, 0.0, 1.0 / s).expect("positive height")
}

fn fixed_points(m: &MoebiusMap) -> Vec<SpherePoint> {
    // c z² + (d - a) z - b = 0
    if m.c.norm() < 1e-14 {
        let mut v = vec![SpherePoint::infinity()];
        if (m.d - m.a).norm() > 1e-14 {
            v.push(SpherePoint::from_complex(m.b / (m.d - m.a)));
        }
        return v;
    }
    let disc = ((m.d - m.a) * (m.d - m.a) + m.b * m.c * 4.0).sqrt();
    [(m.a - m.d + disc) / (m.c * 2.0), (m.a - m.d - disc) / (m.c * 2.0)].iter().map(|&z| SpherePoint::from_complex(z)).collect()
}

/// Cayley chart of the disk model centered at `x`: `ζ ↦ τ` and `dτ/dζ`.
fn from_disk(x: C64, zeta: C64) -> (C64, C64) {
    let one = c64(1.0, 0.0);
    let den = one - zeta;
    ((x - x.conj() * zeta) / den, (x - x.conj()) / (den * den))
}

fn to_disk(x: C64, tau: C64) -> C64 {
    (tau - x) / (tau - x.conj())
}

/// Geodesic from `p` to `q` parametrized by hyperbolic arc length.
struct Geodesic {
    p: C64,
    dir: C64,
}

impl Geodesic {
    /// Unit-speed ray from `p` leaving at angle `theta` in the disk model about `p`.
    fn ray(p: C64, theta: f64) -> Self {
        Self { p, dir: c64(theta.cos(), theta.sin()) }
    }

    fn new(p: C64, q: C64) -> (Self, f64) {
        let zq = to_disk(p, q);
        let len = hyp_distance(HalfPlanePoint(p), HalfPlanePoint(q));
        let dir = if zq.norm() > 0.0 { zq / zq.norm() } else { c64(1.0, 0.0) };
        (Self { p, dir }, len)
    }
}

impl Curve for Geodesic {
    fn point(&self, s: f64) -> (C64, C64) {
        let t = (s / 2.0).tanh();
        let (tau, dz) = from_disk(self.p, self.dir * t);
        let sech = 1.0 / (s / 2.0).cosh();
        (tau, dz * self.dir * (0.5 * sech * sech))
    }
}

/// Circle of disk radius `r` about `x`, parametrized by angle.
struct Circle {
    x: C64,
    r: f64,
}

impl Curve for Circle {
    fn point(&self, th: f64) -> (C64, C64) {
        let zeta = c64(self.r * th.cos(), self.r * th.sin());
        let (tau, dz) = from_disk(self.x, zeta);
        (tau, dz * c64(0.0, 1.0) * zeta)
    }
}

/// One piece of a closed loop in the disk model about `center`.
#[derive(Clone, Copy, Debug)]
pub enum LoopPiece {
    /// Geodesic segment between two half-plane points.
    Geodesic(C64, C64),
    /// Arc of the circle of hyperbolic radius `radius` about the loop center,
    /// between two angles.
    Arc { radius: f64, theta0: f64, theta1: f64 },
}

/// Winding data of `f_z = u₁ z₂ - u₂ z₁` along a curve, for several targets.
struct ArgTracker {
    zs: Vec<SpherePoint>,
    prev: Vec<C64>,
    turn: Vec<f64>,
    log_mean: Vec<f64>,
    t_prev: f64,
}

impl ArgTracker {
    fn new(zs: &[SpherePoint], m: &Frame, t0: f64) -> Self {
        let prev: Vec<C64> = zs.iter().map(|z| f_value(m, z)).collect();
        Self { zs: zs.to_vec(), turn: vec![0.0; zs.len()], log_mean: vec![0.0; zs.len()], prev, t_prev: t0 }
    }

    fn observe(&mut self, t: f64, m: &Frame) -> Verdict {
        let vals: Vec<C64> = self.zs.iter().map(|z| f_value(m, z)).collect();
        let mut deltas = Vec::with_capacity(vals.len());
        for (v, p) in vals.iter().zip(&self.prev) {
            if v.norm() == 0.0 || !v.norm().is_finite() {
                return Verdict::Refine;
            }
            let d = (v / p).arg();
            if d.abs() > MAX_ARG_STEP {
                return Verdict::Refine;
            }
            deltas.push(d);
        }
        let dt = t - self.t_prev;
        for i in 0..vals.len() {
            self.turn[i] += deltas[i];
            self.log_mean[i] += 0.5 * dt * (vals[i].norm().ln() + self.prev[i].norm().ln());
        }
        self.prev = vals;
        self.t_prev = t;
        Verdict::Accept
    }

    /// Switches to an independently computed frame at the current point,
    /// carrying the small phase mismatch into the winding.
    fn rebase(&mut self, m: &Frame) -> Result<()> {
        let vals: Vec<C64> = self.zs.iter().map(|z| f_value(m, z)).collect();
        for ((v, prev), turn) in vals.iter().zip(&self.prev).zip(&mut self.turn) {
            let d = (v / prev).arg();
            if !(d.abs() <= MAX_ANCHOR_MISMATCH) {
                return Err(Error::BoundaryHit);
            }
            *turn += d;
        }
        self.prev = vals;
        Ok(())
    }
}

/// `f_z = u₁ z₂ - u₂ z₁`, holomorphic with zeros at the preimages of `z`.
fn f_value(m: &Frame, z: &SpherePoint) -> C64 {
    m[1] * z.z2 - m[3] * z.z1
}

/// `|f_z|` relative to the size of `(u₁, u₂)`: the chordal-type distance
/// between the developed point and `z`.
fn relative_gap(m: &Frame, z: &SpherePoint) -> f64 {
    f_value(m, z).norm() / (m[1].norm_sqr() + m[3].norm_sqr()).sqrt()
}

fn rounded_winding(turn: f64) -> Result<i64> {
    let w = turn / (2.0 * PI);
    let r = w.round();
    if (w - r).abs() > 0.1 {
        return Err(Error::BoundaryHit);
    }
    Ok(r as i64)
}

/// Winding counts and Jensen means on one circle about a center.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircleData {
    /// Hyperbolic radius.
    pub radius: f64,
    /// Euclidean radius in the disk model about the center.
    pub disk_radius: f64,
    /// Number of preimages inside, per target.
    pub counts: Vec<i64>,
    /// Mean of `log |f_z|` over the circle, per target.
    pub log_means: Vec<f64>,
}

/// Nested circle data about one center.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircleProfile {
    pub center: HalfPlanePoint,
    /// `log |f_z|` at the center, per target.
    pub center_log: Vec<f64>,
    pub circles: Vec<CircleData>,
}

impl CircleProfile {
    /// `N(ρ_k)` on the `k`-th circle by Jensen's formula.
    pub fn jensen_n(&self, target: usize, k: usize) -> f64 {
        self.circles[k].log_means[target] - self.center_log[target]
    }

    /// Counting function `N(r) = Σ log(r / t_j)` with each preimage placed at
    /// the geometric middle of the ring where it was counted.
    pub fn staircase_n(&self, target: usize, r: f64) -> f64 {
        let mut n = 0.0;
        let mut prev_count = 0i64;
        let mut prev_rho = 0.0f64;
        for cd in &self.circles {
            let rho = cd.disk_radius;
            let lo = prev_rho;
            if lo >= r {
                break;
            }
            let new = cd.counts[target] - prev_count;
            if new > 0 {
                let t = if lo > 0.0 { (lo * rho).sqrt() } else { 0.5 * rho };
                if t < r {
                    n += new as f64 * (r / t).ln();
                }
            }
            prev_count = cd.counts[target];
            prev_rho = rho;
        }
        n
    }
}

impl ProjectiveStructure {
    pub fn new(form: Arc<CuspForm4>, c: C64) -> Self {
        Self { form, c, tol: Tolerance::default() }
    }

    /// Structure over the default cusp form.
    pub fn standard(c: C64) -> Self {
        Self::new(standard_form(), c)
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    pub fn group(&self) -> &FuchsianGroup {
        &self.form.group
    }

    /// Schwarzian of the developing map, `c·q₀(τ)`.
    pub fn schwarzian(&self, tau: C64) -> C64 {
        self.c * self.form.q0(tau)
    }

    fn potential(&self) -> impl Fn(C64) -> C64 + '_ {
        let half = self.c * 0.5;
        move |tau| half * self.form.q0(tau)
    }

    /// Frame `[[1, τ₀], [0, 1]]` at the base point.
    pub fn base_frame(&self) -> DevFrame {
        let b = self.group().base_point;
        DevFrame::from_frame(b, [c64(1.0, 0.0), b.0, C64::default(), c64(1.0, 0.0)])
    }

    fn run<C: Curve, O: FnMut(f64, &Frame) -> Verdict>(
        &self,
        m: Frame,
        curve: &C,
        t0: f64,
        t1: f64,
        h0: f64,
        observer: O,
    ) -> Result<Frame> {
        if self.c == C64::default() {
            // Zero potential: the frame is affine in τ.
            let (tau0, _) = curve.point(t0);
            let mut obs = observer;
            let n = (((t1 - t0).abs() / h0.max(1e-3)).ceil() as usize).max(1);
            let mut h = (t1 - t0) / n as f64;
            let mut t = t0;
            let affine = |tau: C64| -> Frame { [m[0], m[1] + m[0] * (tau - tau0), m[2], m[3] + m[2] * (tau - tau0)] };
            while (t1 - t) * (t1 - t0).signum() > 1e-14 {
                let tn = if ((t1 - t) - h).abs() < 1e-14 || (t + h - t1) * (t1 - t0).signum() > 0.0 { t1 } else { t + h };
                let (tau, _) = curve.point(tn);
                if obs(tn, &affine(tau)) == Verdict::Refine {
                    h *= 0.5;
                    if h.abs() < self.tol.h_min {
                        return Err(Error::BoundaryHit);
                    }
                    continue;
                }
                t = tn;
            }
            let (tau1, _) = curve.point(t1);
            return Ok(affine(tau1));
        }
        let pot = self.potential();
        let (m, _) = integrate(m, t0, t1, h0, &self.tol, curve, &pot, observer)?;
        Ok(m)
    }

    fn along_geodesic(&self, m: Frame, p: C64, q: C64) -> Result<Frame> {
        let (g, len) = Geodesic::new(p, q);
        self.run(m, &g, 0.0, len, 0.05, |_, _| Verdict::Accept).map(|m| renormalize(&m))
    }

    /// Continues `start` along a polyline of geodesic segments, each shorter
    /// than [`MAX_SEGMENT`].
    pub fn continue_frame(&self, start: &DevFrame, path: &[HalfPlanePoint]) -> Result<DevFrame> {
        let mut m = start.raw();
        let mut here = start.base;
        for &p in path {
            let len = hyp_distance(here, p);
            if len >= MAX_SEGMENT {
                return Err(Error::precondition(format!("path segment of length {len:.3} exceeds {MAX_SEGMENT}")));
            }
            m = self.along_geodesic(m, here.0, p.0)?;
            here = p;
        }
        Ok(DevFrame::from_frame(here, m))
    }

    /// Frame at `tau` continued from the base point along the geodesic.
    pub fn frame_at(&self, tau: HalfPlanePoint) -> Result<DevFrame> {
        self.frame_from(&self.base_frame(), tau)
    }

    /// Frame at `tau` continued from `start` along the geodesic.
    pub fn frame_from(&self, start: &DevFrame, tau: HalfPlanePoint) -> Result<DevFrame> {
        let m = self.along_geodesic(start.raw(), start.base.0, tau.0)?;
        Ok(DevFrame::from_frame(tau, m))
    }

    pub fn dev(&self, tau: HalfPlanePoint) -> Result<SpherePoint> {
        Ok(self.frame_at(tau)?.dev_value)
    }

    /// `ρ(γ)` for a group element given by its matrix, by continuation from
    /// the base point to `γ·τ₀`.
    pub fn holonomy_of(&self, gamma: &MoebiusMap) -> Result<MoebiusMap> {
        let start = self.base_frame();
        let t0 = start.base.0;
        let end = self.frame_at(gamma.apply_half_plane(start.base))?;
        let j = gamma.c * t0 + gamma.d;
        let jac = MoebiusMap::raw(j.inv(), C64::default(), gamma.c, j);
        Ok((end.frame * jac * start.frame.inverse()).renormalized())
    }

    pub fn holonomy(&self) -> Result<Representation> {
        if !(self.c.norm() <= MAX_ABS_C) {
            return Err(Error::precondition(format!("|c| = {} exceeds the slice window {MAX_ABS_C}", self.c.norm())));
        }
        let g = self.group();
        Ok(Representation { rho_a: self.holonomy_of(&g.gen_a)?, rho_b: self.holonomy_of(&g.gen_b)?, c: self.c })
    }

    /// Winding counts of `dev - z` around a closed loop made of pieces, with
    /// arcs measured about `center`. The loop must start at the frame point
    /// of `start` and close up.
    pub fn winding_along(&self, start: &DevFrame, center: HalfPlanePoint, pieces: &[LoopPiece], zs: &[SpherePoint]) -> Result<Vec<i64>> {
        let mut m = start.raw();
        let mut tracker = ArgTracker::new(zs, &m, 0.0);
        for piece in pieces {
            match *piece {
                LoopPiece::Geodesic(p, q) => {
                    let (g, len) = Geodesic::new(p, q);
                    tracker.t_prev = 0.0;
                    m = self.run(m, &g, 0.0, len, 0.05, |t, y| tracker.observe(t, y))?;
                }
                LoopPiece::Arc { radius, theta0, theta1 } => {
                    let circle = Circle { x: center.0, r: (radius / 2.0).tanh() };
                    tracker.t_prev = theta0;
                    let h0 = 0.05 / radius.sinh().max(0.05);
                    m = self.run(m, &circle, theta0, theta1, h0, |t, y| tracker.observe(t, y))?;
                }
            }
        }
        tracker.turn.iter().map(|&t| rounded_winding(t)).collect()
    }

    /// Preimages of `z` in the closed ball `B(center, r)`, with multiplicity.
    pub fn count_preimages(&self, z: SpherePoint, center: HalfPlanePoint, r: f64) -> Result<u64> {
        let data = self.circles(center, &[r], &[z])?;
        Ok(data.circles[0].counts[0] as u64)
    }

    /// Counts and Jensen means on nested circles about `center`, for every target.
    pub fn circles(&self, center: HalfPlanePoint, radii: &[f64], zs: &[SpherePoint]) -> Result<CircleProfile> {
        if radii.iter().any(|&r| !(r > 0.0 && r <= MAX_COUNT_RADIUS)) {
            return Err(Error::precondition(format!("count radius must lie in (0, {MAX_COUNT_RADIUS}]")));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::precondition("radii must be increasing"));
        }
        let m = self.frame_at(center)?.raw();
        for z in zs {
            if relative_gap(&m, z) < 1e-10 {
                return Err(Error::BoundaryHit);
            }
        }
        let center_log = zs.iter().map(|z| f_value(&m, z).norm().ln()).collect();
        let x = center.0;
        let mut out = Vec::with_capacity(radii.len());
        for &r in radii {
            // Long circles amplify integration error, so every arc starts from
            // a frame carried out along the radial geodesic from the center.
            let anchor = |theta: f64| -> Result<Frame> {
                let ray = Geodesic::ray(x, theta);
                Ok(renormalize(&self.run(m, &ray, 0.0, r, 0.05, |_, _| Verdict::Accept)?))
            };
            let circle = Circle { x, r: (r / 2.0).tanh() };
            let arcs = ((2.0 * PI * r.sinh() / ANCHOR_SPACING).ceil() as usize).max(4);
            let h0 = 0.05 / r.sinh().max(0.05);
            let first = anchor(0.0)?;
            let mut start = first;
            let mut tracker = ArgTracker::new(zs, &first, 0.0);
            for k in 0..arcs {
                let th0 = 2.0 * PI * k as f64 / arcs as f64;
                let th1 = 2.0 * PI * (k + 1) as f64 / arcs as f64;
                self.run(start, &circle, th0, th1, h0, |t, y| tracker.observe(t, y))?;
                start = if k + 1 == arcs { first } else { anchor(th1)? };
                tracker.rebase(&start)?;
            }
            let counts = tracker.turn.iter().map(|&t| rounded_winding(t)).collect::<Result<Vec<_>>>()?;
            if counts.iter().any(|&k| k < 0) {
                return Err(Error::BoundaryHit);
            }
            out.push(CircleData {
                radius: r,
                disk_radius: circle.r,
                counts,
                log_means: tracker.log_mean.iter().map(|v| v / (2.0 * PI)).collect(),
            });
        }
        Ok(CircleProfile { center, center_log, circles: out })
    }

    /// Nevanlinna counting function `N(r) = Σ log(r / |a_k|)` over preimages
    /// `a_k` of `z` in the disk model about the base point, from the counting
    /// staircase on nested circles.
    pub fn nevanlinna_n(&self, z: SpherePoint, r: f64) -> Result<f64> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::precondition("disk radius must lie in (0, 1)"));
        }
        let d = 2.0 * r.atanh();
        let profile = self.circles(self.group().base_point, &nested_radii(d, RING_STEP), &[z])?;
        Ok(profile.staircase_n(0, r))
    }
}

/// Hyperbolic width of the rings used by the counting staircase.
pub const RING_STEP: f64 = 0.35;

/// Radii `d/n, 2d/n, ..., d` with spacing at most `step`.
pub fn nested_radii(d: f64, step: f64) -> Vec<f64> {
    let n = (d / step).ceil().max(1.0) as usize;
    (1..=n).map(|k| d * k as f64 / n as f64).collect()
}
