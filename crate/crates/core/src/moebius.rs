//! Möbius maps, the Riemann sphere and the upper half-plane.
//!
//! Matrices are stored as determinant-one representatives of PSL(2, C).
//! Everything downstream only consumes sign-invariant quantities (norms,
//! squared traces, projective actions, singular directions), so no lift
//! bookkeeping is done.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Entries above this magnitude are reported as a cocycle overflow.
pub const OVERFLOW_LIMIT: f64 = 1e150;

const CLASSIFY_TOL: f64 = 1e-8;
const GAP_TOL: f64 = 1e-6;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// An element of PSL(2, C), stored with determinant one.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl fmt::Debug for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Conjugacy type of a Möbius map, read off the squared trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

impl MoebiusMap {
    /// Builds a map from arbitrary entries, rescaling to determinant one.
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::precondition("Möbius entries must be finite"));
        }
        let det = a * d - b * c;
        if det.norm() < 1e-300 {
            return Err(Error::precondition("Möbius matrix is singular"));
        }
        let s = det.sqrt().inv();
        Ok(Self { a: a * s, b: b * s, c: c * s, d: d * s })
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(c64(a, 0.0), c64(b, 0.0), c64(c, 0.0), c64(d, 0.0))
    }

    /// Entries already known to have determinant one (up to rounding).
    pub(crate) fn raw(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        let one = c64(1.0, 0.0);
        let zero = C64::default();
        Self { a: one, b: zero, c: zero, d: one }
    }

    pub fn translation(t: C64) -> Self {
        Self::raw(c64(1.0, 0.0), t, C64::default(), c64(1.0, 0.0))
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        Self::raw(self.d, -self.b, -self.c, self.a)
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    pub fn trace_sq(&self) -> C64 {
        let t = self.trace();
        t * t
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Product renormalized to determinant one; fails past the overflow limit.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let m = *self * *other;
        if !(m.max_abs() <= OVERFLOW_LIMIT) {
            return Err(Error::CocycleOverflow { limit: OVERFLOW_LIMIT });
        }
        Ok(m)
    }

    /// Divides every entry by `s`; the result no longer has determinant one.
    pub(crate) fn scaled(&self, s: f64) -> Self {
        Self::raw(self.a / s, self.b / s, self.c / s, self.d / s)
    }

    /// Restores determinant one after accumulated rounding.
    pub fn renormalized(&self) -> Self {
        let s = self.det().sqrt().inv();
        Self::raw(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn apply(&self, z: SpherePoint) -> SpherePoint {
        SpherePoint::from_pair(self.a * z.z1 + self.b * z.z2, self.c * z.z1 + self.d * z.z2)
    }

    /// Action on a finite complex number; `None` when the image is infinity.
    pub fn apply_complex(&self, z: C64) -> Option<C64> {
        let den = self.c * z + self.d;
        if den.norm() == 0.0 {
            None
        } else {
            Some((self.a * z + self.b) / den)
        }
    }

    /// Action of a real matrix on the upper half-plane.
    pub fn apply_half_plane(&self, tau: HalfPlanePoint) -> HalfPlanePoint {
        let w = (self.a * tau.0 + self.b) / (self.c * tau.0 + self.d);
        HalfPlanePoint(c64(w.re, w.im.max(f64::MIN_POSITIVE)))
    }

    /// Automorphy factor `c z + d`.
    pub fn j(&self, z: C64) -> C64 {
        self.c * z + self.d
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Frobenius norm; at least sqrt(2) for determinant-one matrices.
    pub fn matrix_norm(&self) -> f64 {
        self.frobenius_sq().sqrt()
    }

    /// Singular values `(s1, s2)` with `s1 >= s2`.
    pub fn singular_values(&self) -> (f64, f64) {
        let f = self.frobenius_sq();
        let dnorm = self.det().norm();
        let disc = (f * f - 4.0 * dnorm * dnorm).max(0.0).sqrt();
        let s1 = ((f + disc) / 2.0).sqrt();
        let s2 = if s1 > 0.0 { dnorm / s1 } else { 0.0 };
        (s1, s2)
    }

    /// Operator 2-norm.
    pub fn operator_norm(&self) -> f64 {
        self.singular_values().0
    }

    pub fn classify(&self) -> (Kind, C64) {
        let t2 = self.trace_sq();
        let kind = if (t2 - 4.0).norm() <= CLASSIFY_TOL * (1.0 + t2.norm()) {
            if self.distance_to_identity() <= CLASSIFY_TOL {
                Kind::Identity
            } else {
                Kind::Parabolic
            }
        } else if t2.im.abs() <= CLASSIFY_TOL * (1.0 + t2.norm()) && t2.re >= -CLASSIFY_TOL && t2.re < 4.0 {
            Kind::Elliptic
        } else {
            Kind::Loxodromic
        };
        (kind, t2)
    }

    /// Distance to the identity up to sign.
    pub fn distance_to_identity(&self) -> f64 {
        let id = Self::identity();
        self.distance_up_to_sign(&id)
    }

    /// Max-entry distance between the two lifts, minimized over sign.
    pub fn distance_up_to_sign(&self, other: &Self) -> f64 {
        let plus = self.entries().iter().zip(other.entries()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        let minus = self.entries().iter().zip(other.entries()).map(|(x, y)| (x + y).norm()).fold(0.0, f64::max);
        plus.min(minus)
    }

    /// Right-singular direction with the smallest singular value, i.e. the
    /// point of P¹ whose lifts are shrunk most by the matrix.
    pub fn contracting_direction(&self) -> Result<SpherePoint> {
        let (s1, s2) = self.singular_values();
        if !(s1 > s2 * (1.0 + GAP_TOL)) {
            return Err(Error::DegenerateGap { s1, s2 });
        }
        // Eigenvector of M*M for the eigenvalue s2^2.
        let h11 = self.a.norm_sqr() + self.c.norm_sqr();
        let h22 = self.b.norm_sqr() + self.d.norm_sqr();
        let h12 = self.a.conj() * self.b + self.c.conj() * self.d;
        let lambda = s2 * s2;
        let u = (h12, c64(lambda - h11, 0.0));
        let v = (c64(lambda - h22, 0.0), h12.conj());
        let nu = u.0.norm_sqr() + u.1.norm_sqr();
        let nv = v.0.norm_sqr() + v.1.norm_sqr();
        let (x, y) = if nu >= nv { u } else { v };
        Ok(SpherePoint::from_pair(x, y))
    }

    /// Left-singular direction with the largest singular value: where the
    /// map pushes almost every point of the sphere.
    pub fn expanding_image(&self) -> Result<SpherePoint> {
        // Left-singular vectors of M are right-singular vectors of M^{-1}
        // with reciprocal singular values.
        self.inverse().contracting_direction()
    }
}

impl Mul for MoebiusMap {
    type Output = MoebiusMap;

    fn mul(self, o: MoebiusMap) -> MoebiusMap {
        MoebiusMap::raw(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d, self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)
    }
}

/// A point of the Riemann sphere in unit-normalized homogeneous coordinates.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub z1: C64,
    pub z2: C64,
}

impl fmt::Debug for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_complex() {
            Some(z) => write!(f, "SpherePoint({z})"),
            None => write!(f, "SpherePoint(∞)"),
        }
    }
}

impl SpherePoint {
    pub fn from_pair(z1: C64, z2: C64) -> Self {
        let n = (z1.norm_sqr() + z2.norm_sqr()).sqrt();
        Self { z1: z1 / n, z2: z2 / n }
    }

    pub fn from_complex(z: C64) -> Self {
        Self::from_pair(z, c64(1.0, 0.0))
    }

    pub fn infinity() -> Self {
        Self { z1: c64(1.0, 0.0), z2: C64::default() }
    }

    pub fn is_infinity(&self) -> bool {
        self.z2.norm() <= 1e-300
    }

    pub fn to_complex(&self) -> Option<C64> {
        if self.is_infinity() {
            None
        } else {
            Some(self.z1 / self.z2)
        }
    }

    /// Chordal distance on the unit sphere, in [0, 2].
    pub fn chordal(&self, other: &Self) -> f64 {
        2.0 * (self.z1 * other.z2 - self.z2 * other.z1).norm()
    }

    /// Chart coordinates: the affine value `z1/z2` when `|z1| <= |z2|`,
    /// otherwise `z2/z1` with the flag set.
    pub fn chart(&self) -> (C64, bool) {
        if self.z1.norm() <= self.z2.norm() {
            (self.z1 / self.z2, false)
        } else {
            (self.z2 / self.z1, true)
        }
    }

    /// Unit vector in R³ under stereographic projection.
    pub fn to_r3(&self) -> [f64; 3] {
        let w = self.z1 * self.z2.conj();
        let n1 = self.z1.norm_sqr();
        let n2 = self.z2.norm_sqr();
        [2.0 * w.re, 2.0 * w.im, n1 - n2]
    }
}

pub fn sphere_distance(p: &SpherePoint, q: &SpherePoint) -> f64 {
    p.chordal(q)
}

/// A point of the upper half-plane.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint(pub C64);

impl fmt::Debug for HalfPlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "τ({})", self.0)
    }
}

impl HalfPlanePoint {
    pub fn new(tau: C64) -> Result<Self> {
        if tau.im > 0.0 && tau.re.is_finite() && tau.im.is_finite() {
            Ok(Self(tau))
        } else {
            Err(Error::precondition(format!("half-plane point needs Im > 0, got {tau}")))
        }
    }

    pub fn from_xy(x: f64, y: f64) -> Result<Self> {
        Self::new(c64(x, y))
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    /// `cosh d(self, other) - 1`, accurate for nearby points.
    pub fn cosh_distance_m1(&self, other: &Self) -> f64 {
        (self.0 - other.0).norm_sqr() / (2.0 * self.im() * other.im())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        hyp_distance(*self, *other)
    }
}

/// Hyperbolic distance in the curvature -1 metric |dτ|/Im τ.
pub fn hyp_distance(t1: HalfPlanePoint, t2: HalfPlanePoint) -> f64 {
    let u = t1.cosh_distance_m1(&t2);
    // arccosh(1 + u) written to stay accurate for small u
    (u + (u * (u + 2.0)).sqrt()).ln_1p()
}

/// Hyperbolic area of a ball of radius `r`.
pub fn ball_volume(r: f64) -> f64 {
    let s = (r / 2.0).sinh();
    4.0 * std::f64::consts::PI * s * s
}

/// Product of a long sequence of matrices, kept at unit Frobenius norm with
/// the discarded log-scale accumulated separately.
#[derive(Clone, Copy, Debug)]
pub struct LogNormProduct {
    pub unit: MoebiusMap,
    pub log_scale: f64,
}

impl Default for LogNormProduct {
    fn default() -> Self {
        Self::new()
    }
}

impl LogNormProduct {
    pub fn new() -> Self {
        let id = MoebiusMap::identity();
        let n = id.matrix_norm();
        Self { unit: id.scaled(n), log_scale: n.ln() }
    }

    /// Right-multiplies by `m`.
    pub fn push(&mut self, m: &MoebiusMap) {
        let p = self.unit * *m;
        let n = p.matrix_norm();
        self.unit = p.scaled(n);
        self.log_scale += n.ln();
    }

    /// Log of the Frobenius norm of the full (determinant-one) product.
    pub fn log_norm(&self) -> f64 {
        self.log_scale
    }

    /// Log of the largest singular value of the full product.
    pub fn log_operator_norm(&self) -> f64 {
        self.log_scale + self.unit.singular_values().0.ln()
    }

    /// The unit-norm representative (determinant `exp(-2 log_scale)`).
    pub fn direction(&self) -> MoebiusMap {
        self.unit
    }
}
