//! The chiral family `C_q ⋊ C_{pr}`, where the top generator acts on `C_q`
//! by multiplication with `phi` of multiplicative order `p`.
//!
//! Elements are pairs `(x, n)` with `x` mod `pr` and `n` mod `q`, multiplied
//! as `(x, n)(y, m) = (x + y, phi^y n + m)`. Element `(x, n)` has id `x q + n`,
//! so the identity is id 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{gcd, Elem, FiniteGroup};
use crate::limits::Limits;
use crate::verdict::{ChiralityVerdict, Method};
use crate::words::{image_with_limits, inversion_violator, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParameters {
    pub q: u64,
    pub p: u64,
    pub r: u64,
    pub phi: u64,
}

/// The on-disk form: kernel modulus, top modulus and multiplier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemidirectStanza {
    pub q: u64,
    pub pr: u64,
    pub phi: u64,
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc
}

/// Multiplicative order of `a` mod `m`, if `a` is a unit.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m < 2 || gcd(a % m, m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = x * (a % m) % m;
        k += 1;
    }
    Some(k)
}

impl FamilyParameters {
    pub fn new(q: u64, p: u64, r: u64, phi: u64) -> Self {
        FamilyParameters { q, p, r, phi }
    }

    pub fn top_order(&self) -> u64 {
        self.p * self.r
    }

    pub fn order(&self) -> u64 {
        self.q * self.p * self.r
    }

    /// Infers `p` as the order of `phi` mod `q` and `r = pr / p`, then validates.
    pub fn from_stanza(s: SemidirectStanza) -> Result<Self> {
        if s.q < 2 || s.pr == 0 {
            return Err(Error::InvalidFamily("q must be at least 2 and pr positive".into()));
        }
        let p = multiplicative_order(s.phi, s.q).ok_or_else(|| {
            Error::InvalidFamily(format!("phi = {} is not a unit mod {}", s.phi, s.q))
        })?;
        if s.pr % p != 0 {
            return Err(Error::InvalidFamily(format!(
                "order of phi ({p}) does not divide pr = {}",
                s.pr
            )));
        }
        let params = FamilyParameters::new(s.q, p, s.pr / p, s.phi);
        validate_family(&params)?;
        Ok(params)
    }

    pub fn stanza(&self) -> SemidirectStanza {
        SemidirectStanza {
            q: self.q,
            pr: self.top_order(),
            phi: self.phi,
        }
    }

    /// `phi^e` mod `q` for any integer `e` (negative powers use `phi^(p-1)`).
    pub fn phi_pow(&self, e: i64) -> u64 {
        let e = e.rem_euclid(self.p as i64) as u64;
        pow_mod(self.phi, e, self.q)
    }

    pub fn mul(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        let (x, n) = a;
        let (y, m) = b;
        (
            (x + y) % self.top_order(),
            (self.phi_pow(y as i64) * n + m) % self.q,
        )
    }

    /// `(x, n)^-1 = (-x, -phi^-x n)`.
    pub fn inverse(&self, a: (u64, u64)) -> (u64, u64) {
        let (x, n) = a;
        let pr = self.top_order();
        let m = self.phi_pow(-(x as i64)) * n % self.q;
        ((pr - x) % pr, (self.q - m) % self.q)
    }

    pub fn encode(&self, a: (u64, u64)) -> Elem {
        (a.0 * self.q + a.1) as Elem
    }

    pub fn decode(&self, id: Elem) -> (u64, u64) {
        let id = id as u64;
        (id / self.q, id % self.q)
    }
}

/// Checks that `phi` has order exactly `p` mod `q`, that `phi - 1` and
/// `phi + 1` are units mod `q`, and that `p` divides `r`.
pub fn validate_family(params: &FamilyParameters) -> Result<()> {
    let FamilyParameters { q, p, r, phi } = *params;
    if q < 2 || p == 0 || r == 0 {
        return Err(Error::InvalidFamily("q must be at least 2, p and r positive".into()));
    }
    if phi == 0 || phi >= q {
        return Err(Error::InvalidFamily(format!("phi = {phi} must satisfy 1 <= phi < q")));
    }
    if pow_mod(phi, p, q) != 1 {
        return Err(Error::InvalidFamily(format!(
            "phi^p = {phi}^{p} = {} is not 1 mod {q}",
            pow_mod(phi, p, q)
        )));
    }
    if let Some(j) = (1..p).find(|&j| pow_mod(phi, j, q) == 1) {
        return Err(Error::InvalidFamily(format!(
            "phi has order {j} mod {q}, not {p}"
        )));
    }
    if gcd(phi - 1, q) != 1 {
        return Err(Error::InvalidFamily(format!("gcd(phi - 1, q) = {} != 1", gcd(phi - 1, q))));
    }
    if gcd(phi + 1, q) != 1 {
        return Err(Error::InvalidFamily(format!("gcd(phi + 1, q) = {} != 1", gcd(phi + 1, q))));
    }
    if r % p != 0 {
        return Err(Error::InvalidFamily(format!("p = {p} does not divide r = {r}")));
    }
    Ok(())
}

pub struct FamilyGroup {
    pub params: FamilyParameters,
    pub group: FiniteGroup,
}

impl FamilyGroup {
    pub fn coords(&self, id: Elem) -> (u64, u64) {
        self.params.decode(id)
    }

    pub fn id(&self, x: i64, n: i64) -> Elem {
        let pr = self.params.top_order() as i64;
        let q = self.params.q as i64;
        self.params
            .encode((x.rem_euclid(pr) as u64, n.rem_euclid(q) as u64))
    }
}

/// Multiplication table of the family group, validated.
pub fn build_family_group(params: &FamilyParameters) -> Result<FamilyGroup> {
    validate_family(params)?;
    let n = params.order() as usize;
    let label = format!(
        "C{}:C{} (phi={})",
        params.q,
        params.top_order(),
        params.phi
    );
    let group = FiniteGroup::from_fn(label, n, |a, b| {
        params.encode(params.mul(params.decode(a), params.decode(b)))
    })?;
    Ok(FamilyGroup {
        params: *params,
        group,
    })
}

/// `x^p [x, y] [x^-1, y]^phi` on two variables.
pub fn family_witness_word(params: &FamilyParameters) -> Word {
    let x = Word::var(0, 2);
    let y = Word::var(1, 2);
    x.pow(params.p as i64)
        .mul(&Word::commutator(&x, &y))
        .mul(&Word::commutator(&x.invert(), &y).pow(params.phi as i64))
}

/// Report of the two structural checks behind the family's chirality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub params: FamilyParameters,
    pub order: u64,
    pub evaluations: u64,
    pub image_size: usize,
    /// Image elements whose first coordinate is `p`.
    pub top_p_slice: Vec<(u64, u64)>,
    /// Number of `(-p, m)` found in the image (should be `q`).
    pub bottom_coset_hits: u64,
}

/// Computes the witness word's image exhaustively and checks that (a) the
/// only image element with first coordinate `p` is `(p, 0)` and (b) the whole
/// coset `(-p, *)` is in the image. Returns chiral with witness `(-p, 1)`.
pub fn verify_family_chirality(
    params: &FamilyParameters,
    limits: &Limits,
) -> Result<(ChiralityVerdict, FamilyReport)> {
    let fg = build_family_group(params)?;
    let g = &fg.group;
    let w = family_witness_word(params);
    let img = image_with_limits(&w, g, limits)?;
    let pr = params.top_order();
    let p = params.p % pr;
    let minus_p = (pr - p) % pr;

    let top_p_slice: Vec<(u64, u64)> = img
        .iter()
        .map(|id| fg.coords(id))
        .filter(|&(x, _)| x == p)
        .collect();
    if top_p_slice != vec![(p, 0)] {
        return Err(Error::Structural(format!(
            "image meets the coset ({p}, *) in {top_p_slice:?}, expected only ({p}, 0)"
        )));
    }
    let bottom_coset_hits = (0..params.q)
        .filter(|&m| img.contains(params.encode((minus_p, m))))
        .count() as u64;
    if bottom_coset_hits != params.q {
        return Err(Error::Structural(format!(
            "image contains only {bottom_coset_hits} of the {} elements ({minus_p}, *)",
            params.q
        )));
    }
    let witness = params.encode((minus_p, 1));
    if img.contains(g.inverse(witness)) || inversion_violator(&img, g).is_none() {
        return Err(Error::Structural("witness inverse lies in the image".into()));
    }
    let report = FamilyReport {
        params: *params,
        order: params.order(),
        evaluations: params.order() * params.order(),
        image_size: img.len(),
        top_p_slice,
        bottom_coset_hits,
    };
    Ok((ChiralityVerdict::chiral(Method::FamilyWitness, w, witness), report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(validate_family(&FamilyParameters::new(7, 3, 3, 2)).is_ok());
        assert!(validate_family(&FamilyParameters::new(5, 4, 4, 2)).is_ok());
        assert!(validate_family(&FamilyParameters::new(11, 5, 5, 3)).is_ok());
        let err = validate_family(&FamilyParameters::new(7, 3, 3, 3)).unwrap_err();
        assert!(err.to_string().contains("not 1 mod 7"), "{err}");
        // phi = 6 = -1 mod 7: phi + 1 not a unit
        assert!(validate_family(&FamilyParameters::new(7, 2, 2, 6)).is_err());
        assert!(validate_family(&FamilyParameters::new(7, 3, 2, 2)).is_err());
    }

    #[test]
    fn stanza_inference() {
        let p = FamilyParameters::from_stanza(SemidirectStanza { q: 7, pr: 9, phi: 2 }).unwrap();
        assert_eq!(p, FamilyParameters::new(7, 3, 3, 2));
        assert!(FamilyParameters::from_stanza(SemidirectStanza { q: 7, pr: 8, phi: 2 }).is_err());
        assert!(FamilyParameters::from_stanza(SemidirectStanza { q: 7, pr: 9, phi: 0 }).is_err());
    }

    #[test]
    fn words() {
        let w = family_witness_word(&FamilyParameters::new(7, 3, 3, 2));
        assert_eq!(w.arity(), 2);
        assert_eq!(w.weight().0, vec![3, 0]);
        let expect: Word = "x^3*[x,y]*[x^-1,y]^2".parse().unwrap();
        assert_eq!(w, expect);
    }

    #[test]
    fn group_63() {
        let fg = build_family_group(&FamilyParameters::new(7, 3, 3, 2)).unwrap();
        assert_eq!(fg.group.order(), 63);
        assert!(!fg.group.is_abelian());
        assert_eq!(fg.group.exponent(), 63);
        for a in fg.group.elements() {
            let inv = fg.params.inverse(fg.coords(a));
            assert_eq!(fg.group.inverse(a), fg.params.encode(inv));
        }
    }
}
