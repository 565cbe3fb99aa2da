//! The free nilpotent group of class 3 and rank 2 in Mal'cev coordinates,
//! and its finite coordinate quotients.
//!
//! Basis `a, b, c = [a,b], d = [c,a], e = [c,b]`, normal form
//! `a^α b^β c^γ d^δ e^ε`. Collecting `(α1..ε1)(α2..ε2)` gives
//!
//! ```text
//! a: α1 + α2
//! b: β1 + β2
//! c: γ1 + γ2 - α2 β1
//! d: δ1 + δ2 + γ1 α2 - β1 C(α2, 2)
//! e: ε1 + ε2 + γ1 β2 - α2 C(β1, 2) - α2 β1 β2
//! ```
//!
//! with `C(n, 2) = n(n-1)/2` for any integer `n`. The law is checked against
//! the series oracle in the tests.
//!
//! A quotient reduces coordinate `i` modulo `m_i` (0 meaning no reduction).
//! Reduction is compatible with the law exactly when `m_c | m_a, m_b`,
//! `m_d | m_a, m_b, m_c, C(m_a, 2)` and `m_e | m_a, m_b, m_c, C(m_b, 2)`;
//! the kernel is then generated by `a^m_a, b^m_b, c^m_c, d^m_d, e^m_e`, so
//! `a -> u, b -> v` extends to the quotient iff the five corresponding powers
//! of `u, v, [u,v], [[u,v],u], [[u,v],v]` vanish.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::words::Word;

pub type Coords = [i64; 5];

/// Coordinate moduli `(m_a, m_b, m_c, m_d, m_e)`; 0 means infinite order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Moduli(pub [u64; 5]);

fn divides(m: u64, n: u64) -> bool {
    n == 0 || (m != 0 && n % m == 0)
}

fn choose2(n: u64) -> u64 {
    if n == 0 {
        0
    } else {
        n * (n - 1) / 2
    }
}

impl Moduli {
    pub const FREE: Moduli = Moduli([0; 5]);

    /// `(p^3, p^2, p^2, p, p)`.
    pub fn main_search(p: u64) -> Self {
        Moduli([p * p * p, p * p, p * p, p, p])
    }

    pub fn validate(&self) -> Result<()> {
        let [ma, mb, mc, md, me] = self.0;
        let bad = |what: &str| Err(Error::InvalidModuli(format!("{what} for moduli {:?}", self.0)));
        if !(divides(mc, ma) && divides(mc, mb)) {
            return bad("m_c must divide m_a and m_b");
        }
        if !(divides(md, ma) && divides(md, mb) && divides(md, mc) && divides(md, choose2(ma))) {
            return bad("m_d must divide m_a, m_b, m_c and C(m_a, 2)");
        }
        if !(divides(me, ma) && divides(me, mb) && divides(me, mc) && divides(me, choose2(mb))) {
            return bad("m_e must divide m_a, m_b, m_c and C(m_b, 2)");
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|&m| m != 0)
    }

    pub fn order(&self) -> Option<u64> {
        self.0
            .iter()
            .try_fold(1u64, |acc, &m| if m == 0 { None } else { acc.checked_mul(m) })
    }

    pub fn reduce(&self, mut c: Coords) -> Coords {
        for (x, &m) in c.iter_mut().zip(&self.0) {
            if m != 0 {
                *x = x.rem_euclid(m as i64);
            }
        }
        c
    }

    /// Coordinates of the `index`-th element in mixed-radix order.
    fn nth(&self, mut index: u64) -> Coords {
        let mut c = [0; 5];
        for (x, &m) in c.iter_mut().zip(&self.0) {
            *x = (index % m) as i64;
            index /= m;
        }
        c
    }
}

fn c2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// Unreduced collection product.
pub fn mul_raw(u: &Coords, v: &Coords) -> Coords {
    let [a1, b1, g1, d1, e1] = *u;
    let [a2, b2, g2, d2, e2] = *v;
    [
        a1 + a2,
        b1 + b2,
        g1 + g2 - a2 * b1,
        d1 + d2 + g1 * a2 - b1 * c2(a2),
        e1 + e2 + g1 * b2 - a2 * c2(b1) - a2 * b1 * b2,
    ]
}

pub fn inv_raw(u: &Coords) -> Coords {
    let [a, b, g, d, e] = *u;
    let (va, vb) = (-a, -b);
    [
        va,
        vb,
        -g - a * b,
        -d - g * va + b * c2(va),
        -e - g * vb + va * c2(b) + va * b * vb,
    ]
}

/// Arithmetic in `N_{3,2}` or one of its coordinate quotients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct N32 {
    pub moduli: Moduli,
}

impl N32 {
    pub fn free() -> Self {
        N32 {
            moduli: Moduli::FREE,
        }
    }

    pub fn quotient(moduli: Moduli) -> Result<Self> {
        moduli.validate()?;
        Ok(N32 { moduli })
    }

    pub fn mul(&self, u: &Coords, v: &Coords) -> Coords {
        self.moduli.reduce(mul_raw(u, v))
    }

    pub fn inv(&self, u: &Coords) -> Coords {
        self.moduli.reduce(inv_raw(u))
    }

    pub fn pow(&self, u: &Coords, n: i64) -> Coords {
        let mut base = if n < 0 { self.inv(u) } else { self.moduli.reduce(*u) };
        let mut e = n.unsigned_abs();
        let mut acc = [0; 5];
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn comm(&self, u: &Coords, v: &Coords) -> Coords {
        let x = self.mul(&self.inv(u), &self.inv(v));
        self.mul(&self.mul(&x, u), v)
    }

    /// `a^α b^β c^γ d^δ e^ε` evaluated at `a = u, b = v`.
    pub fn substitute(&self, u: &Coords, v: &Coords, g: &Coords) -> Coords {
        let c = self.comm(u, v);
        let basis = [*u, *v, c, self.comm(&c, u), self.comm(&c, v)];
        basis
            .iter()
            .zip(g)
            .fold([0; 5], |acc, (x, &k)| self.mul(&acc, &self.pow(x, k)))
    }

    /// Whether `a -> u, b -> v` extends to an endomorphism of the quotient.
    pub fn is_endomorphism(&self, u: &Coords, v: &Coords) -> bool {
        let [ma, mb, mc, md, me] = self.moduli.0.map(|m| m as i64);
        let c = self.comm(u, v);
        let zero = [0; 5];
        self.pow(u, ma) == zero
            && self.pow(v, mb) == zero
            && self.pow(&c, mc) == zero
            && self.pow(&self.comm(&c, u), md) == zero
            && self.pow(&self.comm(&c, v), me) == zero
    }

    /// Only the two generator power relations.
    pub fn generator_powers_vanish(&self, u: &Coords, v: &Coords) -> bool {
        let [ma, mb, ..] = self.moduli.0.map(|m| m as i64);
        self.pow(u, ma) == [0; 5] && self.pow(v, mb) == [0; 5]
    }
}

/// An element, optionally tied to a quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct N32Element {
    pub coords: Coords,
    pub moduli: Option<Moduli>,
}

impl N32Element {
    pub fn new(coords: Coords) -> Self {
        N32Element {
            coords,
            moduli: None,
        }
    }

    pub fn in_quotient(coords: Coords, moduli: Moduli) -> Result<Self> {
        moduli.validate()?;
        Ok(N32Element {
            coords: moduli.reduce(coords),
            moduli: Some(moduli),
        })
    }

    fn arith(&self) -> N32 {
        N32 {
            moduli: self.moduli.unwrap_or(Moduli::FREE),
        }
    }

    fn wrap(&self, coords: Coords) -> Self {
        N32Element {
            coords,
            moduli: self.moduli,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.moduli != other.moduli {
            return Err(Error::InvalidModuli(format!(
                "cannot multiply elements of {:?} and {:?}",
                self.moduli, other.moduli
            )));
        }
        Ok(self.wrap(self.arith().mul(&self.coords, &other.coords)))
    }

    pub fn invert(&self) -> Self {
        self.wrap(self.arith().inv(&self.coords))
    }

    pub fn pow(&self, n: i64) -> Self {
        self.wrap(self.arith().pow(&self.coords, n))
    }

    /// Collects a word in `a, b`.
    pub fn from_word(w: &Word) -> Self {
        assert!(w.arity() <= 2);
        let gens = [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]];
        let coords = w.letters().iter().fold([0; 5], |acc, l| {
            let g = gens[l.var as usize];
            mul_raw(&acc, &if l.inverse { inv_raw(&g) } else { g })
        });
        N32Element::new(coords)
    }

    /// The normal form as a word in `a, b`.
    pub fn normal_form_word(&self) -> Word {
        let a = Word::var(0, 2);
        let b = Word::var(1, 2);
        let c = Word::commutator(&a, &b);
        let basis = [
            a.clone(),
            b.clone(),
            c.clone(),
            Word::commutator(&c, &a),
            Word::commutator(&c, &b),
        ];
        basis
            .iter()
            .zip(self.coords)
            .fold(Word::empty(2), |acc, (w, k)| acc.mul(&w.pow(k)))
    }
}

/// Whether `a -> u, b -> v` extends to the quotient given by `moduli`.
pub fn quotient_endomorphism_check(u: &Coords, v: &Coords, moduli: Moduli) -> Result<bool> {
    if !moduli.is_finite() {
        return Err(Error::InvalidModuli("quotient check needs finite moduli".into()));
    }
    Ok(N32::quotient(moduli)?.is_endomorphism(u, v))
}

/// `a^(p^2) c^p d`.
pub fn chiral_element(p: u64) -> Coords {
    let p = p as i64;
    [p * p, 0, p, 1, 0]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Full,
    Restricted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// `|Q|^2`.
    pub raw_pairs: u64,
    pub u_candidates: u64,
    pub v_candidates: u64,
    /// `u_candidates * v_candidates`.
    pub examined_pairs: u64,
    /// Pairs whose image agrees with the goal in the `a`, `b` and `c` coordinates.
    pub fully_evaluated: u64,
    /// Fully evaluated pairs satisfying every relation of the quotient.
    pub endomorphism_pairs: u64,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SearchOutcome {
    /// No endomorphism of the quotient sends the target to its inverse.
    NoEndomorphism {
        moduli: Moduli,
        mode: SearchMode,
        target: Coords,
        stats: SearchStats,
    },
    Found {
        moduli: Moduli,
        mode: SearchMode,
        target: Coords,
        u: Coords,
        v: Coords,
        stats: SearchStats,
    },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<(Coords, Coords)> {
        match self {
            SearchOutcome::Found { u, v, .. } => Some((*u, *v)),
            _ => None,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            SearchOutcome::Found { stats, .. } | SearchOutcome::NoEndomorphism { stats, .. } => stats,
        }
    }
}

/// Exhaustive search for `a -> u, b -> v` sending `a^(p^2) c^p d` to its
/// inverse in the quotient.
pub fn witness_search(p: u64, moduli: Moduli, mode: SearchMode, limits: &Limits) -> Result<SearchOutcome> {
    witness_search_for(chiral_element(p), moduli, mode, limits)
}

/// Per-pair evaluation of `a -> u, b -> v` on a fixed target, staged so that
/// most pairs are rejected by coordinate arithmetic alone.
///
/// Images of the target's `a`, `b` and `c` coordinates depend only on
/// `X = u^α`, `Y = v^β` and `[u,v]`; the rest of the product is central or
/// commutes with `c`, so powers of commutators are linear in coordinates.
/// Intermediate products are collected unreduced and reduced once.
struct PairEvaluator {
    q: N32,
    target: Coords,
    goal: Coords,
}

struct Prepared {
    x: Coords,
    inv: Coords,
    base: Coords,
}

enum Stage {
    Rejected,
    Evaluated { endomorphism: bool, hit: bool },
}

impl PairEvaluator {
    fn prepare_u(&self, u: &Coords) -> Prepared {
        Prepared {
            x: self.q.pow(u, self.target[0]),
            inv: inv_raw(u),
            base: *u,
        }
    }

    fn prepare_v(&self, v: &Coords) -> Prepared {
        Prepared {
            x: self.q.pow(v, self.target[1]),
            inv: inv_raw(v),
            base: *v,
        }
    }

    fn linear(&self, c: &Coords, n: i64) -> Coords {
        debug_assert!(c[0] == 0 && c[1] == 0);
        [0, 0, c[2] * n, c[3] * n, c[4] * n]
    }

    fn vanishes(&self, c: &Coords, n: i64) -> bool {
        self.q.moduli.reduce(self.linear(c, n)) == [0; 5]
    }

    fn comm_raw(&self, u: &Coords, uinv: &Coords, v: &Coords, vinv: &Coords) -> Coords {
        mul_raw(&mul_raw(&mul_raw(uinv, vinv), u), v)
    }

    fn evaluate(&self, pu: &Prepared, pv: &Prepared) -> Stage {
        let m = self.q.moduli.0.map(|m| m as i64);
        let (x, y) = (&pu.x, &pv.x);
        if (x[0] + y[0] - self.goal[0]).rem_euclid(m[0]) != 0
            || (x[1] + y[1] - self.goal[1]).rem_euclid(m[1]) != 0
        {
            return Stage::Rejected;
        }
        let c = self
            .q
            .moduli
            .reduce(self.comm_raw(&pu.base, &pu.inv, &pv.base, &pv.inv));
        let image_c = x[2] + y[2] - y[0] * x[1] + self.target[2] * c[2];
        if (image_c - self.goal[2]).rem_euclid(m[2]) != 0 {
            return Stage::Rejected;
        }
        let cinv = inv_raw(&c);
        let cu = self.q.moduli.reduce(self.comm_raw(&c, &cinv, &pu.base, &pu.inv));
        let cv = self.q.moduli.reduce(self.comm_raw(&c, &cinv, &pv.base, &pv.inv));
        let endomorphism = self.vanishes(&c, m[2]) && self.vanishes(&cu, m[3]) && self.vanishes(&cv, m[4]);
        let t = &self.target;
        let image = mul_raw(
            &mul_raw(&mul_raw(&mul_raw(x, y), &self.linear(&c, t[2])), &self.linear(&cu, t[3])),
            &self.linear(&cv, t[4]),
        );
        let hit = endomorphism && self.q.moduli.reduce(image) == self.goal;
        Stage::Evaluated { endomorphism, hit }
    }
}

/// As [`witness_search`] for an arbitrary target.
///
/// Restricted mode keeps only `u` with `α (u_a + 1) ≡ 0 (mod m_a)`, which the
/// `a`-coordinate of the image forces when the target has `β = 0`. Full mode
/// keeps every `u` with `u^m_a = 1`.
pub fn witness_search_for(
    target: Coords,
    moduli: Moduli,
    mode: SearchMode,
    limits: &Limits,
) -> Result<SearchOutcome> {
    let start = Instant::now();
    let q = N32::quotient(moduli)?;
    let order = moduli
        .order()
        .ok_or_else(|| Error::InvalidModuli("search needs finite moduli".into()))?;
    if order > limits.tuple_budget {
        return Err(Error::BudgetExceeded {
            what: "quotient size".into(),
            needed: order as u128,
            budget: limits.tuple_budget as u128,
        });
    }
    if mode == SearchMode::Restricted && target[1] != 0 {
        return Err(Error::Precondition(
            "restricted search needs a target with zero b-exponent".into(),
        ));
    }
    let target = moduli.reduce(target);
    let ev = PairEvaluator {
        q,
        target,
        goal: q.inv(&target),
    };
    let [ma, mb, ..] = moduli.0.map(|m| m as i64);

    let us: Vec<Prepared> = (0..order)
        .into_par_iter()
        .map(|i| moduli.nth(i))
        .filter(|u| mode == SearchMode::Full || (target[0] * (u[0] + 1)).rem_euclid(ma) == 0)
        .filter(|u| q.pow(u, ma) == [0; 5])
        .map(|u| ev.prepare_u(&u))
        .collect();
    let vs: Vec<Prepared> = (0..order)
        .into_par_iter()
        .map(|i| moduli.nth(i))
        .filter(|v| q.pow(v, mb) == [0; 5])
        .map(|v| ev.prepare_v(&v))
        .collect();
    let pairs = us.len() as u64 * vs.len() as u64;
    let pair_budget = limits.tuple_budget.saturating_mul(4);
    if pairs > pair_budget {
        return Err(Error::BudgetExceeded {
            what: "candidate endomorphism pairs".into(),
            needed: pairs as u128,
            budget: pair_budget as u128,
        });
    }

    let per_u: Vec<(u64, u64, Option<(Coords, Coords)>)> = us
        .par_iter()
        .map(|pu| {
            let (mut evaluated, mut valid) = (0u64, 0u64);
            for pv in &vs {
                if let Stage::Evaluated { endomorphism, hit } = ev.evaluate(pu, pv) {
                    evaluated += 1;
                    valid += endomorphism as u64;
                    if hit {
                        return (evaluated, valid, Some((pu.base, pv.base)));
                    }
                }
            }
            (evaluated, valid, None)
        })
        .collect();
    let stats = SearchStats {
        raw_pairs: order * order,
        u_candidates: us.len() as u64,
        v_candidates: vs.len() as u64,
        examined_pairs: pairs,
        fully_evaluated: per_u.iter().map(|h| h.0).sum(),
        endomorphism_pairs: per_u.iter().map(|h| h.1).sum(),
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    Ok(match per_u.into_iter().find_map(|h| h.2) {
        Some((u, v)) => SearchOutcome::Found {
            moduli,
            mode,
            target,
            u,
            v,
            stats,
        },
        None => SearchOutcome::NoEndomorphism {
            moduli,
            mode,
            target,
            stats,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceRow {
    /// Residue of the `b`-exponent of the image of `b`, mod `p^2`.
    pub x: u64,
    /// The `c`-exponent of the image of the target matches the inverse mod `p^2`.
    pub c_matches: bool,
    /// The `d`-exponent matches mod `p`.
    pub d_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceCertificate {
    pub p: u64,
    pub moduli: Moduli,
    /// Assignments of the free exponents tried per residue.
    pub samples_per_row: u64,
    pub rows: Vec<CongruenceRow>,
}

fn is_odd_prime(p: u64) -> bool {
    p > 2 && p % 2 == 1 && (3..).step_by(2).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

/// Sweeps `x` over residues mod `p^2` for images `a -> a^-1 c^s d^t e^u`,
/// `b -> a^r b^x c^w`, with `r, s, t, u, w` ranging over `[0, p)`, in the
/// quotient `(p^3, p^2, p^2, p, p)`. The `c`-exponent of the image of
/// `a^(p^2) c^p d` must match its inverse mod `p^2` exactly when
/// `x ≡ 1 (mod p)`, the `d`-exponent mod `p` exactly when `x ≡ -1 (mod p)`,
/// and each condition must not depend on the free exponents. No residue
/// satisfies both.
pub fn congruence_certificate(p: u64) -> Result<CongruenceCertificate> {
    if !is_odd_prime(p) {
        return Err(Error::Precondition(format!("{p} is not an odd prime")));
    }
    let moduli = Moduli::main_search(p);
    let q = N32::quotient(moduli)?;
    let target = chiral_element(p);
    let goal = q.inv(&target);
    let pi = p as i64;
    let p2 = pi * pi;
    let mut rows = Vec::new();
    let mut samples = 0;
    for x in 0..p2 {
        let mut c_all = true;
        let mut c_any = false;
        let mut d_all = true;
        let mut d_any = false;
        samples = 0;
        for code in 0..pi.pow(5) {
            let digit = |k: u32| (code / pi.pow(k)) % pi;
            let (r, s, t, u, w) = (digit(0), digit(1), digit(2), digit(3), digit(4));
            let fa = q.mul(&[-1, 0, 0, 0, 0], &[0, 0, s, t, u]);
            let fb = q.mul(&q.mul(&[r, 0, 0, 0, 0], &[0, x, 0, 0, 0]), &[0, 0, w, 0, 0]);
            let img = q.substitute(&fa, &fb, &target);
            let c_ok = (img[2] - goal[2]).rem_euclid(p2) == 0;
            let d_ok = (img[3] - goal[3]).rem_euclid(pi) == 0;
            c_all &= c_ok;
            c_any |= c_ok;
            d_all &= d_ok;
            d_any |= d_ok;
            samples += 1;
        }
        if c_all != c_any || d_all != d_any {
            return Err(Error::Structural(format!(
                "congruence at x = {x} depends on the free exponents"
            )));
        }
        let expect_c = x.rem_euclid(pi) == 1;
        let expect_d = x.rem_euclid(pi) == pi - 1;
        if c_all != expect_c || d_all != expect_d {
            return Err(Error::Structural(format!(
                "at x = {x}: c-match {c_all} (expected {expect_c}), d-match {d_all} (expected {expect_d})"
            )));
        }
        rows.push(CongruenceRow {
            x: x as u64,
            c_matches: c_all,
            d_matches: d_all,
        });
    }
    if rows.iter().any(|r| r.c_matches && r.d_matches) {
        return Err(Error::Structural("a residue satisfies both congruences".into()));
    }
    Ok(CongruenceCertificate {
        p,
        moduli,
        samples_per_row: samples,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Coords = [1, 0, 0, 0, 0];
    const B: Coords = [0, 1, 0, 0, 0];

    #[test]
    fn collection() {
        let f = N32::free();
        assert_eq!(f.mul(&B, &A), [1, 1, -1, 0, 0]);
        assert_eq!(f.mul(&[0, 0, 1, 0, 0], &B), [0, 1, 1, 0, 1]);
        assert_eq!(f.mul(&[0; 5], &[3, 1, 4, 1, 5]), [3, 1, 4, 1, 5]);
        assert_eq!(f.comm(&A, &B), [0, 0, 1, 0, 0]);
        assert_eq!(f.pow(&A, 7), [7, 0, 0, 0, 0]);
        let ba = f.mul(&B, &A);
        assert_eq!(f.mul(&ba, &f.inv(&ba)), [0; 5]);
    }

    #[test]
    fn inverse_of_chiral_element() {
        let g = chiral_element(3);
        assert_eq!(g, [9, 0, 3, 1, 0]);
        // a^-p^2 c^-p d^(p^3 - 1)
        assert_eq!(N32::free().inv(&g), [-9, 0, -3, 26, 0]);
    }

    #[test]
    fn moduli_validation() {
        assert!(Moduli::main_search(3).validate().is_ok());
        assert!(Moduli([27, 9, 3, 3, 3]).validate().is_ok());
        assert!(Moduli([4, 4, 4, 4, 4]).validate().is_err());
        assert!(Moduli([27, 3, 9, 3, 3]).validate().is_err());
        assert!(Moduli([27, 9, 9, 9, 3]).validate().is_ok());
        assert!(Moduli::FREE.validate().is_ok());
    }

    #[test]
    fn endomorphism_checks() {
        let m = Moduli::main_search(3);
        assert!(quotient_endomorphism_check(&A, &B, m).unwrap());
        let q = N32::quotient(m).unwrap();
        assert!(quotient_endomorphism_check(&q.inv(&A), &q.inv(&B), m).unwrap());
        let ba = q.mul(&B, &A);
        let direct = q.pow(&ba, 9) == [0; 5];
        assert_eq!(quotient_endomorphism_check(&A, &ba, m).unwrap(), direct);
        let mixed = N32Element::in_quotient(A, m).unwrap().mul(&N32Element::new(B));
        assert!(mixed.is_err());
    }

    #[test]
    fn congruences() {
        let cert = congruence_certificate(3).unwrap();
        assert_eq!(cert.rows.len(), 9);
        assert_eq!(cert.rows.iter().filter(|r| r.c_matches).count(), 3);
        assert_eq!(cert.rows.iter().filter(|r| r.d_matches).count(), 3);
        assert!(congruence_certificate(2).is_err());
        assert!(congruence_certificate(9).is_err());
    }

    #[test]
    fn staged_evaluation_matches_generic() {
        let m = Moduli::main_search(3);
        let q = N32::quotient(m).unwrap();
        for target in [chiral_element(3), [2, 5, 1, 2, 0], [0, 0, 4, 1, 2]] {
            let target = m.reduce(target);
            let ev = PairEvaluator {
                q,
                target,
                goal: q.inv(&target),
            };
            let mut evaluated = 0;
            for i in (0..19683u64).step_by(37) {
                for j in (0..19683u64).step_by(53) {
                    let (u, v) = (m.nth(i), m.nth(j));
                    let generic_image = q.substitute(&u, &v, &target);
                    let generic_hit = q.is_endomorphism(&u, &v) && generic_image == ev.goal;
                    let staged = ev.evaluate(&ev.prepare_u(&u), &ev.prepare_v(&v));
                    match staged {
                        Stage::Rejected => assert_ne!(generic_image, ev.goal),
                        Stage::Evaluated { endomorphism, hit } => {
                            let powers = q.generator_powers_vanish(&u, &v);
                            assert_eq!(endomorphism && powers, q.is_endomorphism(&u, &v));
                            assert_eq!(hit && powers, generic_hit);
                            evaluated += 1;
                        }
                    }
                }
            }
            assert!(evaluated > 0);
        }
    }

    #[test]
    fn sanity_target() {
        let m = Moduli::main_search(3);
        let out = witness_search_for(A, m, SearchMode::Restricted, &Limits::default()).unwrap();
        let (u, _) = out.found().unwrap();
        let q = N32::quotient(m).unwrap();
        assert_eq!(u, q.inv(&A));
    }
}
