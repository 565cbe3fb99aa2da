use rayon::prelude::*;

use super::Word;
use crate::error::{Error, Result};
use crate::group::{Elem, ElementSet, FiniteGroup};
use crate::limits::Limits;

/// Left-to-right product of `tuple[i]^{±1}` over the letters of `w`.
pub fn evaluate(w: &Word, g: &FiniteGroup, tuple: &[Elem]) -> Elem {
    assert!(tuple.len() >= w.arity(), "tuple shorter than word arity");
    w.letters().iter().fold(g.identity(), |acc, l| {
        let x = tuple[l.var as usize];
        g.mul(acc, if l.inverse { g.inverse(x) } else { x })
    })
}

/// Number of tuples `n^d`, or `None` on overflow.
pub(crate) fn tuple_count(n: usize, d: usize) -> Option<u64> {
    (n as u64).checked_pow(d as u32)
}

pub fn image(w: &Word, g: &FiniteGroup) -> Result<ElementSet> {
    image_with_limits(w, g, &Limits::default())
}

/// `{ w(t) : t in G^d }` by exhaustive enumeration of tuples in mixed-radix order.
pub fn image_with_limits(w: &Word, g: &FiniteGroup, limits: &Limits) -> Result<ElementSet> {
    let n = g.order();
    let d = w.arity();
    let total = tuple_count(n, d).filter(|&t| t <= limits.tuple_budget).ok_or_else(|| {
        Error::BudgetExceeded {
            what: format!("image of a {d}-variable word over a group of order {n}"),
            needed: (n as u128).saturating_pow(d as u32),
            budget: limits.tuple_budget as u128,
        }
    })?;
    if d == 0 {
        return Ok(ElementSet::from_ids(n, [g.identity()]));
    }
    // split on the last coordinate; each chunk enumerates the remaining n^(d-1)
    let inner = total / n as u64;
    let letters = w.letters();
    let merged = (0..n)
        .into_par_iter()
        .fold(
            || ElementSet::empty(n),
            |mut acc, last| {
                let mut tuple = vec![0usize; d];
                tuple[d - 1] = last;
                let inverses: Vec<Elem> = (0..n).map(|x| g.inverse(x)).collect();
                for _ in 0..inner {
                    let mut v = g.identity();
                    for l in letters {
                        let x = tuple[l.var as usize];
                        v = g.mul(v, if l.inverse { inverses[x] } else { x });
                    }
                    acc.insert(v);
                    // advance the first d-1 digits
                    for digit in tuple.iter_mut().take(d - 1) {
                        *digit += 1;
                        if *digit < n {
                            break;
                        }
                        *digit = 0;
                    }
                }
                acc
            },
        )
        .reduce(
            || ElementSet::empty(n),
            |mut a, b| {
                a.union_with(&b);
                a
            },
        );
    Ok(merged)
}

/// Least `x` in `s` whose inverse is not in `s`.
pub fn inversion_violator(s: &ElementSet, g: &FiniteGroup) -> Option<Elem> {
    s.iter().find(|&x| !s.contains(g.inverse(x)))
}

pub fn is_inversion_closed(s: &ElementSet, g: &FiniteGroup) -> bool {
    inversion_violator(s, g).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, from_permutations};
    use crate::words::parse_word;

    fn s3() -> FiniteGroup {
        from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
    }

    #[test]
    fn evaluation() {
        let g = s3();
        assert_eq!(evaluate(&Word::empty(0), &g, &[]), g.identity());
        let sq = parse_word("x^2").unwrap();
        for x in g.elements() {
            assert_eq!(evaluate(&sq, &g, &[x]), g.mul(x, x));
        }
        let t = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
        let c = g.elements().find(|&x| g.element_order(x) == 3).unwrap();
        let comm = evaluate(&parse_word("[x,y]").unwrap(), &g, &[t, c]);
        assert_eq!(g.element_order(comm), 3);
    }

    #[test]
    fn images() {
        let g = s3();
        assert_eq!(image(&parse_word("x").unwrap(), &g).unwrap().len(), 6);
        let comm = image(&parse_word("[x,y]").unwrap(), &g).unwrap();
        assert_eq!(comm.len(), 3);
        assert!(comm.iter().all(|x| g.element_order(x) != 2));
        assert!(is_inversion_closed(&comm, &g));
        assert_eq!(image(&parse_word("x^2").unwrap(), &cyclic(4)).unwrap().to_vec(), vec![0, 2]);
        assert_eq!(image(&Word::empty(0), &g).unwrap().to_vec(), vec![0]);
    }

    #[test]
    fn budget() {
        let limits = Limits {
            tuple_budget: 100,
            ..Limits::default()
        };
        let w = parse_word("[x,y,z]").unwrap();
        assert!(matches!(
            image_with_limits(&w, &s3(), &limits),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn violators() {
        let g = cyclic(5);
        let s = ElementSet::from_ids(5, [0, 1, 4, 2]);
        assert_eq!(inversion_violator(&s, &g), Some(2));
        assert!(is_inversion_closed(&ElementSet::from_ids(5, [0]), &g));
    }
}
