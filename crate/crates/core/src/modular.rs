//! Integer helpers for PSL(2, Z): the Z/6 abelianization character, reduction
//! to the standard fundamental domain, and coprime pair enumeration.

use crate::moebius::{c64, C64};

/// Integer 2×2 matrix `[a, b, c, d]` of determinant 1.
pub type IntMatrix = [i64; 4];

pub const T: IntMatrix = [1, 1, 0, 1];
pub const S: IntMatrix = [0, -1, 1, 0];

pub fn int_mul(x: IntMatrix, y: IntMatrix) -> IntMatrix {
    [x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]]
}

fn round_div(a: i64, c: i64) -> i64 {
    let (a, c) = if c < 0 { (-a, -c) } else { (a, c) };
    (2 * a + c).div_euclid(2 * c)
}

/// The character PSL(2, Z) → Z/6 sending `T` to 1 and `S` to 3. Its kernel is
/// the commutator subgroup.
pub fn character_index(m: IntMatrix) -> u8 {
    let [mut a, mut b, mut c, mut d] = m;
    let mut s: i64 = 0;
    while c != 0 {
        let k = round_div(a, c);
        a -= k * c;
        b -= k * d;
        s += k + 3;
        (a, b, c, d) = (-c, -d, a, b);
    }
    if a < 0 {
        b = -b;
    }
    (s + b).rem_euclid(6) as u8
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// A matrix of determinant 1 with bottom row `(c, d)`; requires gcd 1.
pub fn complete_bottom_row(c: i64, d: i64) -> IntMatrix {
    let (g, x, y) = egcd(d, c);
    debug_assert_eq!(g, 1);
    // d x + c y = 1  =>  a = x, b = -y
    [x, -y, c, d]
}

/// Coprime pairs `(c, d)` with `c > 0, c² + d² <= x2`, together with `(0, 1)`.
/// Each represents one coset of the translations in PSL(2, Z).
pub fn coprime_pairs(x2: f64) -> Vec<(i64, i64)> {
    let mut out = vec![(0, 1)];
    let cmax = x2.sqrt().floor() as i64;
    for c in 1..=cmax {
        let rest = x2 - (c * c) as f64;
        if rest < 0.0 {
            break;
        }
        let dmax = rest.sqrt().floor() as i64;
        for d in -dmax..=dmax {
            if egcd(c, d).0 == 1 {
                out.push((c, d));
            }
        }
    }
    out
}

/// Moves `tau` into the standard fundamental domain
/// `|Re τ| <= 1/2, |τ| >= 1`. Returns `(τ'', g)` with `τ = g · τ''`.
pub fn reduce_to_standard(tau: C64) -> (C64, IntMatrix) {
    let mut t = tau;
    let mut g: IntMatrix = [1, 0, 0, 1];
    for _ in 0..10_000 {
        let n = t.re.round();
        if n != 0.0 {
            t -= n;
            g = int_mul(g, [1, n as i64, 0, 1]);
        }
        if t.norm_sqr() < 1.0 - 1e-14 {
            t = -t.inv();
            g = int_mul(g, S);
        } else {
            break;
        }
    }
    (t, g)
}

/// Automorphy factor `cτ + d` of an integer matrix.
pub fn automorphy(g: IntMatrix, tau: C64) -> C64 {
    c64(g[2] as f64, 0.0) * tau + g[3] as f64
}
