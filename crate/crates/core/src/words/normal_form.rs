use serde::{Deserialize, Serialize};

use super::Word;

/// `x_1^a * c` with `c` in the derived subgroup of the free group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerCommutatorForm {
    pub a: i64,
    pub c: Word,
    /// The automorphism of the free group that was applied, as images of `x_1, ..., x_d`.
    pub substitution: Vec<Word>,
}

impl PowerCommutatorForm {
    pub fn to_word(&self) -> Word {
        Word::var(0, self.c.arity().max(1))
            .pow(self.a)
            .mul(&self.c)
    }
}

/// Moves `w` by elementary Nielsen moves to a word `x_1^a c` with `a >= 0`
/// and `c` of zero weight.
///
/// Euclid's algorithm runs on the weight vector: the substitution
/// `x_i -> x_i x_j^-q` lowers the weight of `x_j` by `q` times the weight of
/// `x_i`. Once a single nonzero weight remains it is swapped into the first
/// slot and made positive; then `c = x_1^-a w` is freely equal to the pushed
/// word and has zero weight. `a` ends up as the gcd of the original weights.
pub fn normalize_power_commutator(w: &Word) -> PowerCommutatorForm {
    let d = w.arity();
    let vars: Vec<Word> = (0..d).map(|i| Word::var(i, d)).collect();
    // images of the original variables under the accumulated automorphism
    let mut images = vars.clone();
    let mut current = w.clone();

    loop {
        let weight = current.weight().0;
        let nonzero: Vec<usize> = (0..d).filter(|&i| weight[i] != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let i = *nonzero
            .iter()
            .min_by_key(|&&i| (weight[i].unsigned_abs(), i))
            .unwrap();
        let j = *nonzero.iter().find(|&&j| j != i).unwrap();
        let q = weight[j].div_euclid(weight[i]);
        // x_i -> x_i x_j^-q
        let mut sub = vars.clone();
        sub[i] = vars[i].mul(&vars[j].pow(-q));
        apply(&mut current, &mut images, &sub);
    }

    let weight = current.weight().0;
    if let Some(k) = (0..d).find(|&k| weight[k] != 0) {
        if k != 0 {
            let mut sub = vars.clone();
            sub.swap(0, k);
            apply(&mut current, &mut images, &sub);
        }
        if current.weight().0[0] < 0 {
            let mut sub = vars.clone();
            sub[0] = vars[0].invert();
            apply(&mut current, &mut images, &sub);
        }
    }

    let a = if d == 0 { 0 } else { current.weight().0[0] };
    let c = if d == 0 {
        current.clone()
    } else {
        vars[0].pow(-a).mul(&current)
    };
    debug_assert!(c.weight().is_zero());
    PowerCommutatorForm {
        a,
        c,
        substitution: images,
    }
}

fn apply(current: &mut Word, images: &mut [Word], sub: &[Word]) {
    *current = current.substitute(sub);
    for img in images.iter_mut() {
        *img = img.substitute(sub);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn commutator_is_already_normal() {
        let w = parse_word("[x,y]").unwrap();
        let f = normalize_power_commutator(&w);
        assert_eq!(f.a, 0);
        assert_eq!(f.c, w);
    }

    #[test]
    fn euclid_on_weights() {
        let f = normalize_power_commutator(&parse_word("x^3 y^6").unwrap());
        assert_eq!(f.a, 3);
        assert!(f.c.weight().is_zero());
        let f = normalize_power_commutator(&parse_word("x y x y^-1").unwrap());
        assert_eq!(f.a, 2);
        assert!(f.c.weight().is_zero());
        let f = normalize_power_commutator(&parse_word("y^-4 z^6 x^10").unwrap());
        assert_eq!(f.a, 2);
    }

    #[test]
    fn substitution_reproduces_result() {
        for text in ["x^3 y^6", "x^-5 y^3 [x,z]", "y^-2", "x y^2 x^-1 z^-7 y"] {
            let w = parse_word(text).unwrap();
            let f = normalize_power_commutator(&w);
            assert_eq!(w.substitute(&f.substitution), f.to_word(), "{text}");
            let weight = w.weight().0;
            let g = weight.iter().fold(0, |acc, &x| gcd(acc, x));
            assert_eq!(f.a, g, "{text}");
        }
    }

    #[test]
    fn empty_word() {
        let f = normalize_power_commutator(&Word::empty(0));
        assert_eq!(f.a, 0);
        assert!(f.c.is_empty());
    }
}
