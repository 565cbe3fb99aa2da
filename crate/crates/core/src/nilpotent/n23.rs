//! The free nilpotent group of class 2 and rank 3 in Mal'cev coordinates.
//!
//! Basis `a, b, c, d = [a,b], e = [a,c], f = [b,c]`; an element is the
//! normal form `a^xa b^xb c^xc d^xd e^xe f^xf` with `d, e, f` central.
//! Moving a generator left past another costs one commutator, which gives
//! the collection law in [`N23Element::mul`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct N23Element {
    pub coords: [i64; 6],
}

impl N23Element {
    pub const IDENTITY: N23Element = N23Element { coords: [0; 6] };

    pub fn new(coords: [i64; 6]) -> Self {
        N23Element { coords }
    }

    pub fn a() -> Self {
        Self::new([1, 0, 0, 0, 0, 0])
    }

    pub fn b() -> Self {
        Self::new([0, 1, 0, 0, 0, 0])
    }

    pub fn c() -> Self {
        Self::new([0, 0, 1, 0, 0, 0])
    }

    /// `a^i d^j e^k f^l`.
    pub fn axis(i: i64, j: i64, k: i64, l: i64) -> Self {
        Self::new([i, 0, 0, j, k, l])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let [ua, ub, uc, ud, ue, uf] = self.coords;
        let [va, vb, vc, vd, ve, vf] = other.coords;
        Self::new([
            ua + va,
            ub + vb,
            uc + vc,
            ud + vd - ub * va,
            ue + ve - uc * va,
            uf + vf - uc * vb,
        ])
    }

    pub fn invert(&self) -> Self {
        let [a, b, c, d, e, f] = self.coords;
        Self::new([-a, -b, -c, -d - b * a, -e - c * a, -f - c * b])
    }

    pub fn pow(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.invert() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `x^-1 y^-1 x y`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.invert().mul(&other.invert()).mul(self).mul(other)
    }

    /// The normal form as a word in `a, b, c` (three variables).
    pub fn normal_form_word(&self) -> Word {
        let x = |i| Word::var(i, 3);
        let basis = [
            x(0),
            x(1),
            x(2),
            Word::commutator(&x(0), &x(1)),
            Word::commutator(&x(0), &x(2)),
            Word::commutator(&x(1), &x(2)),
        ];
        basis
            .iter()
            .zip(self.coords)
            .fold(Word::empty(3), |acc, (w, k)| acc.mul(&w.pow(k)))
    }

    /// Collects a word in `a, b, c`.
    pub fn from_word(w: &Word) -> Self {
        assert!(w.arity() <= 3);
        let gens = [Self::a(), Self::b(), Self::c()];
        w.letters().iter().fold(Self::IDENTITY, |acc, l: &Letter| {
            let g = gens[l.var as usize];
            acc.mul(&if l.inverse { g.invert() } else { g })
        })
    }
}

/// The endomorphism sending `a, b, c` to `images`, applied to `g` through its
/// normal form; commutator images are computed, not assumed.
pub fn apply_endomorphism(images: &[N23Element; 3], g: &N23Element) -> N23Element {
    let [ia, ib, ic] = *images;
    let basis = [
        ia,
        ib,
        ic,
        ia.commutator(&ib),
        ia.commutator(&ic),
        ib.commutator(&ic),
    ];
    basis
        .iter()
        .zip(g.coords)
        .fold(N23Element::IDENTITY, |acc, (x, k)| acc.mul(&x.pow(k)))
}

/// Integer matrix with rows `(x z)` and `(y w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix2 {
    pub x: i64,
    pub z: i64,
    pub y: i64,
    pub w: i64,
}

impl IntMatrix2 {
    pub fn det(&self) -> i64 {
        self.x * self.w - self.z * self.y
    }

    pub fn apply(&self, j: i64, k: i64) -> (i64, i64) {
        (self.x * j + self.z * k, self.y * j + self.w * k)
    }
}

/// `(g, s, t)` with `g = gcd(a, b) >= 0` and `a s + b t = g`.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// A determinant `-1` matrix fixing `(j, k)`.
///
/// With `(j', k') = (j, k) / gcd` and `U = (j' s; k' t)` unimodular, the
/// result is `U diag(1, -1) U^-1`. `s` is taken in `[0, |j'|)` (and `t = 0`
/// when `j' = 0`) so the output is canonical.
pub fn inverting_matrix(j: i64, k: i64) -> IntMatrix2 {
    if j == 0 && k == 0 {
        return IntMatrix2 {
            x: 1,
            z: 0,
            y: 0,
            w: -1,
        };
    }
    let (g, _, _) = extended_gcd(j, k);
    let (jp, kp) = (j / g, k / g);
    // solve jp t - kp s = 1
    let (s, t) = if jp == 0 {
        (-kp, 0)
    } else {
        let m = jp.abs();
        let (_, inv, _) = extended_gcd(kp.rem_euclid(m), m);
        let s = (-inv).rem_euclid(m) % m;
        let s = if m == 1 { 0 } else { s };
        (s, (1 + kp * s) / jp)
    };
    debug_assert_eq!(jp * t - kp * s, 1);
    IntMatrix2 {
        x: jp * t + s * kp,
        z: -2 * jp * s,
        y: 2 * kp * t,
        w: -(kp * s + t * jp),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AchiralityInstance {
    pub element: N23Element,
    pub matrix: IntMatrix2,
    /// Images of `a, b, c`.
    pub images: [N23Element; 3],
    pub image: N23Element,
}

/// Builds `a -> a^-1, b -> b^x c^y, c -> b^z c^w` from [`inverting_matrix`]
/// and checks that it sends `a^i d^j e^k f^l` to its inverse.
pub fn verify_achirality_instance(i: i64, j: i64, k: i64, l: i64) -> Result<AchiralityInstance> {
    let g = N23Element::axis(i, j, k, l);
    let m = inverting_matrix(j, k);
    if m.det() != -1 || m.apply(j, k) != (j, k) {
        return Err(Error::Structural(format!("bad inverting matrix {m:?} for ({j},{k})")));
    }
    let images = [
        N23Element::a().invert(),
        N23Element::new([0, m.x, m.y, 0, 0, 0]),
        N23Element::new([0, m.z, m.w, 0, 0, 0]),
    ];
    let image = apply_endomorphism(&images, &g);
    if image != g.invert() {
        return Err(Error::Structural(format!(
            "endomorphism {images:?} sends {g:?} to {image:?}, not its inverse {:?}",
            g.invert()
        )));
    }
    Ok(AchiralityInstance {
        element: g,
        matrix: m,
        images,
        image,
    })
}

pub type IntMatrix3 = [[i64; 3]; 3];

fn det3(m: &IntMatrix3) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Signed 2x2 minors of `m` on the pair basis `(0,1), (0,2), (1,2)`:
/// entry `[P][Q]` is the minor with rows `P` and columns `Q`.
pub fn second_compound(m: &IntMatrix3) -> IntMatrix3 {
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut out = [[0; 3]; 3];
    for (r, &(i, j)) in pairs.iter().enumerate() {
        for (c, &(k, l)) in pairs.iter().enumerate() {
            out[r][c] = m[i][k] * m[j][l] - m[i][l] * m[j][k];
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisReduction {
    pub image: N23Element,
    /// Unimodular matrix acting on the abelianization (column `k` is the image of generator `k`).
    pub unimodular: IntMatrix3,
    /// Induced action on the `d, e, f` coordinates.
    pub compound: IntMatrix3,
}

/// An automorphism sending `g` to the form `a^* d^* e^* f^*`.
///
/// Row operations reduce the abelianization `(xa, xb, xc)` to `(gcd, 0, 0)`;
/// the accumulated matrix defines the automorphism on generators.
pub fn axis_reduce(g: &N23Element) -> Result<AxisReduction> {
    let mut v = [g.coords[0], g.coords[1], g.coords[2]];
    let mut u: IntMatrix3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let row_sub = |u: &mut IntMatrix3, v: &mut [i64; 3], dst: usize, src: usize, q: i64| {
        v[dst] -= q * v[src];
        for c in 0..3 {
            u[dst][c] -= q * u[src][c];
        }
    };
    loop {
        let nonzero: Vec<usize> = (0..3).filter(|&i| v[i] != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let piv = *nonzero.iter().min_by_key(|&&i| v[i].abs()).unwrap();
        for &i in &nonzero {
            if i != piv {
                let q = v[i].div_euclid(v[piv]);
                row_sub(&mut u, &mut v, i, piv, q);
            }
        }
    }
    if let Some(piv) = (0..3).find(|&i| v[i] != 0) {
        if piv != 0 {
            v.swap(0, piv);
            u.swap(0, piv);
        }
        if v[0] < 0 {
            // negate two rows to stay in SL when possible; either sign is unimodular
            v[0] = -v[0];
            u[0] = u[0].map(|x| -x);
        }
    }
    let det = det3(&u);
    if det.abs() != 1 {
        return Err(Error::Structural(format!("reduction matrix has determinant {det}")));
    }
    let col = |k: usize| N23Element::new([u[0][k], u[1][k], u[2][k], 0, 0, 0]);
    let images = [col(0), col(1), col(2)];
    let image = apply_endomorphism(&images, g);
    if image.coords[1] != 0 || image.coords[2] != 0 || image.coords[0] != v[0] {
        return Err(Error::Structural(format!("reduced element {image:?} is not on the a axis")));
    }
    Ok(AxisReduction {
        image,
        unimodular: u,
        compound: second_compound(&u),
    })
}
