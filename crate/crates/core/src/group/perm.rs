use std::collections::HashMap;

use super::FiniteGroup;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// A permutation of `0..degree` in image form: `p[i]` is the image of `i`.
pub type Permutation = Vec<usize>;

/// Product `a * b` acting on the right: apply `a` first, then `b`.
pub fn compose(a: &[usize], b: &[usize]) -> Permutation {
    a.iter().map(|&i| b[i]).collect()
}

pub fn from_permutations(
    label: impl Into<String>,
    degree: usize,
    generators: &[Permutation],
) -> Result<FiniteGroup> {
    from_permutations_with_limits(label, degree, generators, &Limits::default())
}

/// Closes `generators` under composition and returns the multiplication table.
///
/// Element 0 is the identity; the rest are numbered in breadth-first order
/// of the Cayley graph with generators applied in the given order.
pub fn from_permutations_with_limits(
    label: impl Into<String>,
    degree: usize,
    generators: &[Permutation],
    limits: &Limits,
) -> Result<FiniteGroup> {
    for (k, p) in generators.iter().enumerate() {
        if p.len() != degree {
            return Err(Error::InvalidPermutation(format!(
                "generator {k} has length {}, expected degree {degree}",
                p.len()
            )));
        }
        let mut seen = vec![false; degree];
        for &i in p {
            if i >= degree || seen[i] {
                return Err(Error::InvalidPermutation(format!(
                    "generator {k} is not a bijection on 0..{degree}"
                )));
            }
            seen[i] = true;
        }
    }
    let cap = limits.order_cap.min(limits.table_order_cap);
    let identity: Permutation = (0..degree).collect();
    let mut index: HashMap<Permutation, u32> = HashMap::new();
    let mut elements = vec![identity.clone()];
    index.insert(identity, 0);
    // right_mult[x * k + i] = x * gen_i
    let mut right_mult: Vec<u32> = Vec::new();
    let mut parent: Vec<(u32, u32)> = vec![(0, 0)];
    let mut head = 0;
    while head < elements.len() {
        for (i, g) in generators.iter().enumerate() {
            let y = compose(&elements[head], g);
            let id = match index.get(&y) {
                Some(&id) => id,
                None => {
                    let id = elements.len() as u32;
                    if elements.len() as u64 >= cap {
                        let what = if cap == limits.order_cap {
                            "permutation closure"
                        } else {
                            "multiplication table"
                        };
                        return Err(Error::CapExceeded {
                            what: what.into(),
                            cap,
                        });
                    }
                    index.insert(y.clone(), id);
                    elements.push(y);
                    parent.push((head as u32, i as u32));
                    id
                }
            };
            right_mult.push(id);
        }
        head += 1;
    }
    let n = elements.len();
    let k = generators.len();
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        let row = &mut table[a * n..(a + 1) * n];
        row[0] = a as u32;
        // BFS order guarantees parents precede children
        for b in 1..n {
            let (p, gi) = parent[b];
            let ap = row[p as usize] as usize;
            row[b] = right_mult[ap * k + gi as usize];
        }
    }
    let mut inverses = vec![0u32; n];
    for a in 0..n {
        let row = &table[a * n..(a + 1) * n];
        inverses[a] = row.iter().position(|&v| v == 0).unwrap() as u32;
    }
    Ok(FiniteGroup::from_parts_unchecked(label, n, table, 0, inverses))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transposition_gives_order_two() {
        let g = from_permutations("C2", 2, &[vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        g.validate().unwrap();
    }

    #[test]
    fn s3_closure() {
        let g = from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(g.order(), 6);
        g.validate().unwrap();
    }

    #[test]
    fn table_matches_composition() {
        let gens = vec![vec![1, 2, 3, 0], vec![1, 0, 2, 3]];
        let g = from_permutations("S4", 4, &gens).unwrap();
        assert_eq!(g.order(), 24);
        g.validate().unwrap();
    }

    #[test]
    fn cap_exceeded() {
        // (0 1 2 3 4)(5 6 7) has order 15
        let gen = vec![1, 2, 3, 4, 0, 6, 7, 5];
        let limits = Limits {
            order_cap: 10,
            ..Limits::default()
        };
        let err = from_permutations_with_limits("big", 8, &[gen.clone()], &limits).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
        assert_eq!(from_permutations("C15", 8, &[gen]).unwrap().order(), 15);
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(from_permutations("x", 3, &[vec![0, 0, 1]]).is_err());
        assert!(from_permutations("x", 3, &[vec![0, 1]]).is_err());
    }

    #[test]
    fn no_generators_is_trivial() {
        let g = from_permutations("1", 3, &[]).unwrap();
        assert_eq!(g.order(), 1);
    }
}
