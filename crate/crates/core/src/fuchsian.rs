//! The once-punctured torus group.
//!
//! Generators `A = [[1,1],[1,2]]` and `B = [[1,-1],[-1,2]]` generate the
//! commutator subgroup of PSL(2, Z), a free group of rank two whose
//! commutator `[A,B]` is parabolic. The quotient has one cusp and area 2π.
//!
//! Reduction uses a numerically computed Dirichlet domain about the base
//! point `2i`. Deck transformations are tracked as freely reduced words in
//! the letters `A, a = A⁻¹, B, b = B⁻¹`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::{c64, hyp_distance, HalfPlanePoint, MoebiusMap, C64};

/// Maximum number of side-pairing steps before `reduce` gives up.
pub const REDUCE_STEP_LIMIT: usize = 1_000_000;
/// Maximum number of elements `enumerate_ball` may produce.
pub const BALL_BUDGET: usize = 10_000_000;
/// Radius of the ball whose elements seed the Dirichlet domain.
pub const DOMAIN_SEED_RADIUS: f64 = 8.0;

/// A generator letter. `a` and `b` denote inverses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    #[serde(rename = "a")]
    AInv,
    B,
    #[serde(rename = "b")]
    BInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::AInv => 'a',
            Letter::B => 'B',
            Letter::BInv => 'b',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'A' => Some(Letter::A),
            'a' => Some(Letter::AInv),
            'B' => Some(Letter::B),
            'b' => Some(Letter::BInv),
            _ => None,
        }
    }
}

/// A freely reduced word in the generators.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let mut w = Word::identity();
        if s == "1" || s.is_empty() {
            return Ok(w);
        }
        for ch in s.chars() {
            let l = Letter::from_char(ch).ok_or_else(|| Error::precondition(format!("bad letter {ch:?} in word")))?;
            w.push(l);
        }
        Ok(w)
    }
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends a letter, cancelling against the last one when inverse.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn append(&mut self, other: &Word) {
        for &l in &other.0 {
            self.push(l);
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.append(other);
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Strips conjugating prefixes: the result is cyclically reduced.
    pub fn cyclically_reduced(&self) -> Word {
        let s = &self.0;
        let mut i = 0;
        let mut j = s.len();
        while j >= i + 2 && s[i] == s[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        Word(s[i..j].to_vec())
    }

    /// Canonical representative of the conjugacy class up to inversion:
    /// the lexicographically least rotation of the cyclic reduction or of
    /// its inverse.
    pub fn conjugacy_key(&self) -> Word {
        let cr = self.cyclically_reduced();
        let inv = cr.inverse();
        let mut best: Option<Vec<Letter>> = None;
        for w in [&cr.0, &inv.0] {
            let n = w.len();
            for r in 0..n.max(1) {
                let rot: Vec<Letter> = w[r..].iter().chain(w[..r].iter()).copied().collect();
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        Word(best.unwrap_or_default())
    }

    /// True when the cyclic reduction is a proper power `u^k`, `k >= 2`.
    pub fn is_proper_power(&self) -> bool {
        let w = self.cyclically_reduced().0;
        let n = w.len();
        (1..n).filter(|p| n.is_multiple_of(*p)).any(|p| (p..n).all(|i| w[i] == w[i - p]))
    }
}

/// A group element together with a word evaluating to it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupElement {
    pub matrix: MoebiusMap,
    pub word: Word,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self { matrix: MoebiusMap::identity(), word: Word::identity() }
    }

    pub fn inverse(&self) -> Self {
        Self { matrix: self.matrix.inverse(), word: self.word.inverse() }
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        Self { matrix: self.matrix * other.matrix, word: self.word.concat(&other.word) }
    }

    /// Hyperbolic translation length `2 arccosh(|tr|/2)`; zero when not hyperbolic.
    pub fn translation_length(&self) -> f64 {
        translation_length(&self.matrix)
    }
}

pub fn translation_length(m: &MoebiusMap) -> f64 {
    let t = m.trace().norm() / 2.0;
    if t <= 1.0 {
        0.0
    } else {
        2.0 * t.acosh()
    }
}

/// One side of the Dirichlet domain: the perpendicular bisector between the
/// base point and `pairing · base`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Face {
    pub pairing: GroupElement,
    /// `pairing · base`
    pub image: C64,
    /// Hyperbolic distance from the base point to the bisector.
    pub distance: f64,
    /// True when the side runs out to an ideal vertex.
    pub touches_cusp: bool,
}

/// The once-punctured torus Fuchsian group with its Dirichlet domain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuchsianGroup {
    pub gen_a: MoebiusMap,
    pub gen_b: MoebiusMap,
    pub commutator: MoebiusMap,
    pub cusp_normalizer: MoebiusMap,
    pub base_point: HalfPlanePoint,
    pub domain_faces: Vec<Face>,
}

#[derive(Serialize, Deserialize)]
struct GroupDocument {
    gen_a: [[f64; 2]; 4],
    gen_b: [[f64; 2]; 4],
    commutator: [[f64; 2]; 4],
    cusp_normalizer: [[f64; 2]; 4],
    base_point: [f64; 2],
    domain_faces: Vec<FaceDocument>,
}

#[derive(Serialize, Deserialize)]
struct FaceDocument {
    word: String,
    matrix: [[f64; 2]; 4],
    distance: f64,
    touches_cusp: bool,
}

fn mat_doc(m: &MoebiusMap) -> [[f64; 2]; 4] {
    let e = m.entries();
    [[e[0].re, e[0].im], [e[1].re, e[1].im], [e[2].re, e[2].im], [e[3].re, e[3].im]]
}

fn mat_from_doc(d: &[[f64; 2]; 4]) -> Result<MoebiusMap> {
    MoebiusMap::new(c64(d[0][0], d[0][1]), c64(d[1][0], d[1][1]), c64(d[2][0], d[2][1]), c64(d[3][0], d[3][1]))
}

/// The once-punctured torus group with base point `2i`.
pub fn punctured_torus_group() -> FuchsianGroup {
    let base = HalfPlanePoint(c64(0.0, 2.0));
    FuchsianGroup::with_base_point(base).expect("standard punctured torus data is valid")
}

impl FuchsianGroup {
    /// Builds the group data and the Dirichlet domain about `base`.
    pub fn with_base_point(base: HalfPlanePoint) -> Result<Self> {
        let gen_a = MoebiusMap::from_real(1.0, 1.0, 1.0, 2.0)?;
        let gen_b = MoebiusMap::from_real(1.0, -1.0, -1.0, 2.0)?;
        let commutator = gen_a * gen_b * gen_a.inverse() * gen_b.inverse();
        let cusp_normalizer = cusp_normalizer(&commutator)?;
        let mut g = FuchsianGroup { gen_a, gen_b, commutator, cusp_normalizer, base_point: base, domain_faces: Vec::new() };
        let seeds = g.enumerate_with_letters(DOMAIN_SEED_RADIUS)?;
        g.domain_faces = dirichlet_faces(base, &seeds);
        Ok(g)
    }

    pub fn letter_matrix(&self, l: Letter) -> MoebiusMap {
        match l {
            Letter::A => self.gen_a,
            Letter::AInv => self.gen_a.inverse(),
            Letter::B => self.gen_b,
            Letter::BInv => self.gen_b.inverse(),
        }
    }

    pub fn evaluate(&self, w: &Word) -> MoebiusMap {
        w.letters().iter().fold(MoebiusMap::identity(), |m, &l| m * self.letter_matrix(l))
    }

    pub fn element(&self, w: &Word) -> GroupElement {
        GroupElement { matrix: self.evaluate(w), word: w.clone() }
    }

    pub fn displacement(&self, m: &MoebiusMap) -> f64 {
        hyp_distance(self.base_point, m.apply_half_plane(self.base_point))
    }

    /// True when `tau` is no farther from the base than from any face image.
    pub fn in_domain(&self, tau: HalfPlanePoint, tol: f64) -> bool {
        let v0 = (tau.0 - self.base_point.0).norm_sqr() / self.base_point.im();
        self.domain_faces.iter().all(|f| (tau.0 - f.image).norm_sqr() / f.image.im >= v0 * (1.0 - tol))
    }

    /// Moves `tau` into the Dirichlet domain, appending the side pairings
    /// used to `deck`. On return the original point equals `deck · τ'`
    /// where `deck` is the updated word.
    pub fn reduce_into(&self, tau: HalfPlanePoint, deck: &mut Word) -> Result<HalfPlanePoint> {
        let mut t = tau.0;
        let b = self.base_point.0;
        let bi = 1.0 / self.base_point.im();
        for _ in 0..REDUCE_STEP_LIMIT {
            let v0 = (t - b).norm_sqr() * bi;
            let mut best: Option<(usize, f64)> = None;
            for (k, f) in self.domain_faces.iter().enumerate() {
                let v = (t - f.image).norm_sqr() / f.image.im;
                if v < v0 * (1.0 - 1e-12) && best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((k, v));
                }
            }
            match best {
                None => return Ok(HalfPlanePoint(c64(t.re, t.im.max(f64::MIN_POSITIVE)))),
                Some((k, _)) => {
                    let f = &self.domain_faces[k];
                    let m = f.pairing.matrix;
                    // t <- pairing^{-1} t
                    t = (m.d * t - m.b) / (-m.c * t + m.a);
                    if t.im <= 0.0 {
                        t.im = f64::MIN_POSITIVE;
                    }
                    deck.append(&f.pairing.word);
                }
            }
        }
        Err(Error::NonTermination(REDUCE_STEP_LIMIT))
    }

    /// Reduces `tau` into the domain; returns the reduced point and the deck
    /// element with `tau = deck · τ'`.
    pub fn reduce(&self, tau: HalfPlanePoint) -> Result<(HalfPlanePoint, GroupElement)> {
        let mut w = Word::identity();
        let t = self.reduce_into(tau, &mut w)?;
        Ok((t, self.element(&w)))
    }

    /// All elements with `d(base, γ·base) <= r`, breadth first over the side
    /// pairings. The list starts with the identity and is duplicate free.
    pub fn enumerate_ball(&self, r: f64) -> Result<Vec<GroupElement>> {
        if !(0.0..=20.0).contains(&r) {
            return Err(Error::precondition(format!("enumerate_ball radius must lie in [0, 20], got {r}")));
        }
        let gens: Vec<GroupElement> = self.domain_faces.iter().map(|f| f.pairing.clone()).collect();
        bfs_ball(self.base_point, &gens, r, 0.5)
    }

    /// Ball enumeration using the raw generators `A, a, B, b` with a generous
    /// pruning slack. Used to seed the Dirichlet domain.
    fn enumerate_with_letters(&self, r: f64) -> Result<Vec<GroupElement>> {
        let gens: Vec<GroupElement> =
            Letter::ALL.iter().map(|&l| GroupElement { matrix: self.letter_matrix(l), word: Word(vec![l]) }).collect();
        bfs_ball(self.base_point, &gens, r, 4.0)
    }

    /// Primitive hyperbolic conjugacy classes (up to inversion) with
    /// translation length at most `max_length`, one representative each,
    /// sorted by length then word.
    pub fn primitive_classes(&self, max_length: f64) -> Result<Vec<GroupElement>> {
        if !(max_length > 0.0) {
            return Err(Error::precondition("maximum translation length must be positive"));
        }
        let radius = (max_length + CLASS_RADIUS_MARGIN).min(20.0);
        let ball = self.enumerate_ball(radius)?;
        let mut seen: HashMap<Word, GroupElement> = HashMap::new();
        for g in ball {
            let (kind, t2) = g.matrix.classify();
            if kind != crate::moebius::Kind::Loxodromic || t2.re <= 4.0 {
                continue;
            }
            if g.translation_length() > max_length + 1e-12 || g.word.is_proper_power() {
                continue;
            }
            let key = g.word.conjugacy_key();
            seen.entry(key.clone()).or_insert_with(|| self.element(&key));
        }
        let mut out: Vec<GroupElement> = seen.into_values().collect();
        out.sort_by(|x, y| x.translation_length().partial_cmp(&y.translation_length()).unwrap().then_with(|| x.word.cmp(&y.word)));
        Ok(out)
    }

    /// Uniform draw among primitive classes with translation length <= `max_length`.
    pub fn random_primitive_word<R: Rng + ?Sized>(&self, max_length: f64, rng: &mut R) -> Result<GroupElement> {
        let classes = self.primitive_classes(max_length)?;
        if classes.is_empty() {
            return Err(Error::EmptySet(max_length));
        }
        Ok(classes[rng.random_range(0..classes.len())].clone())
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = GroupDocument {
            gen_a: mat_doc(&self.gen_a),
            gen_b: mat_doc(&self.gen_b),
            commutator: mat_doc(&self.commutator),
            cusp_normalizer: mat_doc(&self.cusp_normalizer),
            base_point: [self.base_point.re(), self.base_point.im()],
            domain_faces: self
                .domain_faces
                .iter()
                .map(|f| FaceDocument {
                    word: f.pairing.word.to_string(),
                    matrix: mat_doc(&f.pairing.matrix),
                    distance: f.distance,
                    touches_cusp: f.touches_cusp,
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: GroupDocument = serde_json::from_str(s)?;
        let base = HalfPlanePoint::from_xy(doc.base_point[0], doc.base_point[1])?;
        let mut faces = Vec::with_capacity(doc.domain_faces.len());
        for f in &doc.domain_faces {
            let matrix = mat_from_doc(&f.matrix)?;
            let word: Word = f.word.parse()?;
            faces.push(Face {
                image: matrix.apply_half_plane(base).0,
                pairing: GroupElement { matrix, word },
                distance: f.distance,
                touches_cusp: f.touches_cusp,
            });
        }
        Ok(FuchsianGroup {
            gen_a: mat_from_doc(&doc.gen_a)?,
            gen_b: mat_from_doc(&doc.gen_b)?,
            commutator: mat_from_doc(&doc.commutator)?,
            cusp_normalizer: mat_from_doc(&doc.cusp_normalizer)?,
            base_point: base,
            domain_faces: faces,
        })
    }
}

const CLASS_RADIUS_MARGIN: f64 = 5.0;

/// Conjugates the parabolic `p` to `τ ↦ τ ± 1`.
fn cusp_normalizer(p: &MoebiusMap) -> Result<MoebiusMap> {
    // Fixed point of a parabolic: (a - d) / (2c), or infinity when c = 0.
    let to_inf = if p.c.norm() < 1e-12 {
        MoebiusMap::identity()
    } else {
        let fix = (p.a - p.d) / (p.c * 2.0);
        MoebiusMap::new(C64::default(), c64(-1.0, 0.0), c64(1.0, 0.0), -fix)?
    };
    let q = to_inf * *p * to_inf.inverse();
    // q = ±[[1, t], [0, 1]]
    let t = (q.b / q.a).norm();
    let s = t.sqrt();
    let scale = MoebiusMap::from_real(1.0 / s, 0.0, 0.0, s)?;
    Ok(scale * to_inf)
}

/// Key used to deduplicate group elements: entries rounded after fixing
/// the sign of the first non-negligible entry.
fn element_key(m: &MoebiusMap) -> [i64; 8] {
    let e = m.entries();
    let first = e.iter().find(|z| z.norm() > 1e-9).copied().unwrap_or(c64(1.0, 0.0));
    let sign = if first.re < 0.0 || (first.re == 0.0 && first.im < 0.0) { -1.0 } else { 1.0 };
    let mut k = [0i64; 8];
    for (i, z) in e.iter().enumerate() {
        k[2 * i] = (sign * z.re * 1e6).round() as i64;
        k[2 * i + 1] = (sign * z.im * 1e6).round() as i64;
    }
    k
}

fn bfs_ball(base: HalfPlanePoint, gens: &[GroupElement], r: f64, slack: f64) -> Result<Vec<GroupElement>> {
    let mut seen: HashSet<[i64; 8]> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let id = GroupElement::identity();
    seen.insert(element_key(&id.matrix));
    queue.push_back(id);
    while let Some(h) = queue.pop_front() {
        let dh = hyp_distance(base, h.matrix.apply_half_plane(base));
        for g in gens {
            let m = h.matrix * g.matrix;
            let d = hyp_distance(base, m.apply_half_plane(base));
            if d > r + slack {
                continue;
            }
            let key = element_key(&m);
            if seen.insert(key) {
                queue.push_back(GroupElement { matrix: m, word: h.word.concat(&g.word) });
                if seen.len() > 4 * BALL_BUDGET {
                    return Err(Error::BudgetExceeded(BALL_BUDGET));
                }
            }
        }
        if dh <= r + 1e-9 {
            out.push(h);
            if out.len() > BALL_BUDGET {
                return Err(Error::BudgetExceeded(BALL_BUDGET));
            }
        }
    }
    Ok(out)
}

/// Poincaré-disk coordinate of `tau` with `base` at the origin.
fn to_disk(base: HalfPlanePoint, tau: C64) -> C64 {
    (tau - base.0) / (tau - base.0.conj())
}

/// Intersects the Klein-model half-planes `k · ζ_γ <= |ζ_γ|²` for all seed
/// elements and keeps those contributing an edge inside the open disk.
fn dirichlet_faces(base: HalfPlanePoint, seeds: &[GroupElement]) -> Vec<Face> {
    // Polygon as (vertex, label of the edge starting at that vertex).
    let s = 1.5;
    let mut poly: Vec<([f64; 2], Option<usize>)> = vec![([-s, -s], None), ([s, -s], None), ([s, s], None), ([-s, s], None)];
    let mut order: Vec<(f64, usize)> = seeds
        .iter()
        .enumerate()
        .filter(|(_, g)| g.matrix.distance_to_identity() > 1e-9)
        .map(|(i, g)| (hyp_distance(base, g.matrix.apply_half_plane(base)), i))
        .collect();
    order.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for &(_, i) in &order {
        let zeta = to_disk(base, seeds[i].matrix.apply_half_plane(base).0);
        let n = [zeta.re, zeta.im];
        let c = zeta.norm_sqr();
        poly = clip(&poly, n, c, i);
    }
    let mut faces = Vec::new();
    let m = poly.len();
    for k in 0..m {
        let (p, label) = poly[k];
        let q = poly[(k + 1) % m].0;
        let Some(i) = label else { continue };
        let inside = segment_in_disk(p, q);
        if inside > 1e-9 {
            let g = seeds[i].clone();
            let image = g.matrix.apply_half_plane(base).0;
            let distance = hyp_distance(base, HalfPlanePoint(image)) / 2.0;
            let touches_cusp = [p, q].iter().any(|v| v[0] * v[0] + v[1] * v[1] >= 1.0 - 1e-9);
            faces.push(Face { pairing: g, image, distance, touches_cusp });
        }
    }
    faces
}

fn clip(poly: &[([f64; 2], Option<usize>)], n: [f64; 2], c: f64, label: usize) -> Vec<([f64; 2], Option<usize>)> {
    let val = |p: [f64; 2]| n[0] * p[0] + n[1] * p[1] - c;
    let m = poly.len();
    let mut out = Vec::with_capacity(m + 1);
    for k in 0..m {
        let (p, lp) = poly[k];
        let q = poly[(k + 1) % m].0;
        let vp = val(p);
        let vq = val(q);
        if vp <= 0.0 {
            out.push((p, lp));
            if vq > 0.0 {
                let t = vp / (vp - vq);
                out.push(([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])], Some(label)));
            }
        } else if vq <= 0.0 {
            let t = vp / (vp - vq);
            out.push(([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])], lp));
        }
    }
    out
}

/// Length of the part of segment `pq` inside the open unit disk.
fn segment_in_disk(p: [f64; 2], q: [f64; 2]) -> f64 {
    let d = [q[0] - p[0], q[1] - p[1]];
    let a = d[0] * d[0] + d[1] * d[1];
    if a == 0.0 {
        return 0.0;
    }
    let b = 2.0 * (p[0] * d[0] + p[1] * d[1]);
    let c = p[0] * p[0] + p[1] * p[1] - 1.0;
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return 0.0;
    }
    let sq = disc.sqrt();
    let t0 = ((-b - sq) / (2.0 * a)).max(0.0);
    let t1 = ((-b + sq) / (2.0 * a)).min(1.0);
    ((t1 - t0).max(0.0)) * a.sqrt()
}
