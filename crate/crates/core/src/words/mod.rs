//! Free-group words: reduction, inversion, weights, substitution and the
//! power-commutator normal form, plus evaluation over a [`FiniteGroup`].
//!
//! Commutators are `[u, v] = u^-1 v^-1 u v` and longer brackets are
//! left-normed, `[u, v, w] = [[u, v], w]`.
//!
//! [`FiniteGroup`]: crate::group::FiniteGroup

mod eval;
mod normal_form;
mod parse;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub(crate) use eval::tuple_count;
pub use eval::{evaluate, image, image_with_limits, inversion_violator, is_inversion_closed};
pub use normal_form::{normalize_power_commutator, PowerCommutatorForm};
pub use parse::parse_word;

use crate::error::Error;

/// One letter `x_var^{±1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub var: u16,
    pub inverse: bool,
}

impl Letter {
    pub fn new(var: usize, inverse: bool) -> Self {
        Letter {
            var: var as u16,
            inverse,
        }
    }

    pub fn inv(self) -> Self {
        Letter {
            var: self.var,
            inverse: !self.inverse,
        }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word in `arity` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    arity: usize,
    letters: Vec<Letter>,
}

/// Exponent sum of each variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

impl Word {
    /// Builds a word and freely reduces it.
    ///
    /// # Panics
    /// If a letter's variable is not below `arity`.
    pub fn new(arity: usize, letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut reduced: Vec<Letter> = Vec::new();
        for l in letters {
            assert!((l.var as usize) < arity, "variable x{} outside arity {arity}", l.var + 1);
            if reduced.last() == Some(&l.inv()) {
                reduced.pop();
            } else {
                reduced.push(l);
            }
        }
        Word {
            arity,
            letters: reduced,
        }
    }

    pub fn empty(arity: usize) -> Self {
        Word {
            arity,
            letters: Vec::new(),
        }
    }

    /// The word `x_i` (0-based `i`).
    pub fn var(i: usize, arity: usize) -> Self {
        Word::new(arity, [Letter::new(i, false)])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Same letters over at least `arity` variables.
    pub fn with_arity(&self, arity: usize) -> Self {
        assert!(arity >= self.arity || self.letters.iter().all(|l| (l.var as usize) < arity));
        Word {
            arity,
            letters: self.letters.clone(),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::new(
            self.arity.max(other.arity),
            self.letters.iter().chain(&other.letters).copied(),
        )
    }

    /// Letters reversed with signs flipped.
    pub fn invert(&self) -> Word {
        Word {
            arity: self.arity,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut out = Word::empty(self.arity);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `[u, v] = u^-1 v^-1 u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.invert().mul(&v.invert()).mul(u).mul(v)
    }

    /// Left-normed `[w_0, w_1, ..., w_k]`.
    pub fn left_normed(parts: &[Word]) -> Word {
        let mut it = parts.iter();
        let first = it.next().cloned().unwrap_or_else(|| Word::empty(0));
        it.fold(first, |acc, w| Word::commutator(&acc, w))
    }

    pub fn weight(&self) -> WeightVector {
        let mut w = vec![0i64; self.arity];
        for l in &self.letters {
            w[l.var as usize] += l.sign();
        }
        WeightVector(w)
    }

    /// Replaces each `x_i` by `images[i]`; the result has the images' arity.
    pub fn substitute(&self, images: &[Word]) -> Word {
        assert!(images.len() >= self.arity);
        let arity = images.iter().map(Word::arity).max().unwrap_or(0);
        let mut letters = Vec::new();
        for l in &self.letters {
            let img = &images[l.var as usize];
            if l.inverse {
                letters.extend(img.letters.iter().rev().map(|x| x.inv()));
            } else {
                letters.extend(img.letters.iter().copied());
            }
        }
        Word::new(arity, letters)
    }
}

impl fmt::Display for Word {
    /// Runs of one letter are collapsed into powers: `x1^2*x2^-1`. The empty
    /// word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let exp = (j - i) as i64 * l.sign();
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", l.var + 1)?;
            if exp != 1 {
                write!(f, "^{exp}")?;
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            arity: usize,
            text: String,
        }
        Repr {
            arity: self.arity,
            text: self.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            arity: usize,
            text: String,
        }
        let r = Repr::deserialize(d)?;
        let w = if r.text.trim() == "1" {
            Word::empty(r.arity)
        } else {
            parse_word(&r.text).map_err(serde::de::Error::custom)?
        };
        if w.arity() > r.arity {
            return Err(serde::de::Error::custom("word uses more variables than its arity"));
        }
        Ok(w.with_arity(r.arity))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Word {
        Word::var(i, 2)
    }

    #[test]
    fn reduction_fixpoint() {
        let w = Word::new(
            2,
            [
                Letter::new(0, false),
                Letter::new(1, false),
                Letter::new(1, true),
                Letter::new(0, true),
                Letter::new(1, false),
            ],
        );
        assert_eq!(w.letters(), &[Letter::new(1, false)]);
    }

    #[test]
    fn inversion() {
        assert_eq!(Word::empty(2).invert(), Word::empty(2));
        let c = Word::commutator(&x(0), &x(1));
        assert_eq!(c.invert(), Word::commutator(&x(1), &x(0)));
        let w = x(0).pow(2).mul(&x(1));
        assert_eq!(w.invert().to_string(), "x2^-1*x1^-2");
        assert_eq!(w.invert().invert(), w);
    }

    #[test]
    fn weights() {
        assert_eq!(Word::commutator(&x(0), &x(1)).weight().0, vec![0, 0]);
        assert_eq!(x(0).pow(2).mul(&x(1).pow(-1)).weight().0, vec![2, -1]);
        assert_eq!(x(0).pow(3).mul(&x(1).pow(6)).weight().0, vec![3, 6]);
    }

    #[test]
    fn display_roundtrip() {
        let w = Word::left_normed(&[x(0), x(1), x(1)]);
        let back: Word = w.to_string().parse().unwrap();
        assert_eq!(back, w);
        assert_eq!(Word::empty(3).to_string(), "1");
    }

    #[test]
    fn substitution() {
        // x1 -> x1 x2 applied to [x1, x2]
        let c = Word::commutator(&x(0), &x(1));
        let s = c.substitute(&[x(0).mul(&x(1)), x(1)]);
        assert_eq!(s, Word::commutator(&x(0).mul(&x(1)), &x(1)));
    }
}
