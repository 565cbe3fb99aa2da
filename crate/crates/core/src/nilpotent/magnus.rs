use std::collections::BTreeMap;

use crate::words::Word;

/// An element of the truncated free associative ring `Z<<X_1, ..., X_r>>`
/// modulo monomials of degree `>= degree_bound`.
///
/// The map `x_i -> 1 + X_i` sends free-group words to units here; two words
/// have the same series exactly when they agree in the free nilpotent group
/// of class `degree_bound - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub rank: usize,
    pub degree_bound: usize,
    /// Monomials are variable-index sequences; zero coefficients are dropped.
    pub coefficients: BTreeMap<Vec<u8>, i64>,
}

impl TruncatedSeries {
    pub fn one(rank: usize, degree_bound: usize) -> Self {
        let mut coefficients = BTreeMap::new();
        coefficients.insert(Vec::new(), 1);
        TruncatedSeries {
            rank,
            degree_bound,
            coefficients,
        }
    }

    /// `1 + X_i`.
    pub fn generator(i: usize, rank: usize, degree_bound: usize) -> Self {
        let mut s = Self::one(rank, degree_bound);
        if degree_bound > 1 {
            s.coefficients.insert(vec![i as u8], 1);
        }
        s
    }

    /// `1 - X_i + X_i^2 - ...` up to the bound.
    pub fn generator_inverse(i: usize, rank: usize, degree_bound: usize) -> Self {
        let mut s = Self::one(rank, degree_bound);
        for k in 1..degree_bound {
            s.coefficients
                .insert(vec![i as u8; k], if k % 2 == 0 { 1 } else { -1 });
        }
        s
    }

    pub fn coefficient(&self, monomial: &[u8]) -> i64 {
        self.coefficients.get(monomial).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rank, self.degree_bound),
            (other.rank, other.degree_bound)
        );
        let mut out: BTreeMap<Vec<u8>, i64> = BTreeMap::new();
        for (m1, c1) in &self.coefficients {
            for (m2, c2) in &other.coefficients {
                if m1.len() + m2.len() >= self.degree_bound {
                    continue;
                }
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                *out.entry(m).or_insert(0) += c1 * c2;
            }
        }
        out.retain(|_, c| *c != 0);
        TruncatedSeries {
            rank: self.rank,
            degree_bound: self.degree_bound,
            coefficients: out,
        }
    }
}

/// Image of `word` (arity at most `rank`) in the truncated series ring.
pub fn magnus_evaluate(word: &Word, rank: usize, degree_bound: usize) -> TruncatedSeries {
    assert!(word.arity() <= rank, "word has more variables than the rank");
    word.letters()
        .iter()
        .fold(TruncatedSeries::one(rank, degree_bound), |acc, l| {
            let f = if l.inverse {
                TruncatedSeries::generator_inverse(l.var as usize, rank, degree_bound)
            } else {
                TruncatedSeries::generator(l.var as usize, rank, degree_bound)
            };
            acc.mul(&f)
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        let a = magnus_evaluate(&"a".parse().unwrap(), 2, 4);
        assert_eq!(a.coefficient(&[0]), 1);
        assert_eq!(a.coefficients.len(), 2);
        let ai = magnus_evaluate(&"a^-1".parse().unwrap(), 2, 4);
        assert_eq!(ai.coefficient(&[0, 0]), 1);
        assert_eq!(ai.coefficient(&[0, 0, 0]), -1);
        assert_eq!(a.mul(&ai), TruncatedSeries::one(2, 4));
    }

    #[test]
    fn commutator_leading_term() {
        let c = magnus_evaluate(&"[a,b]".parse().unwrap(), 2, 4);
        assert_eq!(c.coefficient(&[]), 1);
        assert_eq!(c.coefficient(&[0]), 0);
        assert_eq!(c.coefficient(&[0, 1]), 1);
        assert_eq!(c.coefficient(&[1, 0]), -1);
        assert_eq!(c.coefficient(&[0, 0]), 0);
    }

    #[test]
    fn class_two_identity() {
        // [[a,b],c] vanishes in class 2 but not in class 3
        let w: Word = "[a,b,c]".parse().unwrap();
        assert_eq!(magnus_evaluate(&w, 3, 3), TruncatedSeries::one(3, 3));
        assert_ne!(magnus_evaluate(&w, 3, 4), TruncatedSeries::one(3, 4));
    }
}
