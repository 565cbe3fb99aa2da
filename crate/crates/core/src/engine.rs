//! Neumann's construction of the group `W(G)` of `d`-variable word maps.
//!
//! A word map is stored as its full value array over `G^d`, indexed by the
//! mixed-radix code `t_0 + t_1 n + ... + t_{d-1} n^{d-1}`. Two words give the
//! same map iff the arrays agree, so the arrays themselves are the dedup keys.
//! `W(G)` therefore lives in the function space `G^(G^d)`.
//!
//! The Cayley graph is explored breadth first from the constant-identity map
//! along the edges "multiply pointwise by `x_i`" and "by `x_i^-1`", so every
//! stored representative word is a shortest word for its map. Each frontier
//! chunk is expanded in parallel and inserted sequentially, which keeps the
//! numbering independent of scheduling.

use std::io::Write;

use indexmap::IndexSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{Elem, ElementSet, FiniteGroup};
use crate::limits::Limits;
use crate::verdict::{Certificate, ChiralityVerdict, Method};
use crate::words::{evaluate, Letter, Word};

const CHUNK: usize = 2048;

/// A single word map with a representative word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordMapTable {
    pub values: Vec<Elem>,
    pub rep_word: Word,
}

pub struct WordMapGroup {
    group_order: usize,
    d: usize,
    maps: IndexSet<Box<[u16]>>,
    /// `(parent index, letter)`; the root's entry is unused.
    parent: Vec<(u32, Letter)>,
    truncated: bool,
}

impl WordMapGroup {
    pub fn order(&self) -> usize {
        self.maps.len()
    }

    pub fn arity(&self) -> usize {
        self.d
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn values(&self, idx: usize) -> &[u16] {
        &self.maps[idx]
    }

    pub fn index_of(&self, values: &[u16]) -> Option<usize> {
        self.maps.get_index_of(values)
    }

    /// Shortest word reaching map `idx` in the breadth-first tree.
    pub fn rep_word(&self, idx: usize) -> Word {
        let mut letters = Vec::new();
        let mut i = idx;
        while i != 0 {
            let (p, l) = self.parent[i];
            letters.push(l);
            i = p as usize;
        }
        letters.reverse();
        Word::new(self.d, letters)
    }

    pub fn map(&self, idx: usize) -> WordMapTable {
        WordMapTable {
            values: self.maps[idx].iter().map(|&v| v as Elem).collect(),
            rep_word: self.rep_word(idx),
        }
    }

    pub fn image(&self, idx: usize) -> ElementSet {
        ElementSet::from_ids(self.group_order, self.maps[idx].iter().map(|&v| v as usize))
    }

    /// Writes one line per map: the representative word, a tab, then the
    /// value array as comma-separated base-`|G|` digits.
    pub fn dump(&self, out: &mut impl Write) -> std::io::Result<()> {
        for idx in 0..self.maps.len() {
            let digits: Vec<String> = self.maps[idx].iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}\t{}", self.rep_word(idx), digits.join(","))?;
        }
        Ok(())
    }
}

/// Distinct entries of a map's value array.
pub fn word_map_image(m: &WordMapTable, group_order: usize) -> ElementSet {
    ElementSet::from_ids(group_order, m.values.iter().copied())
}

struct Steps {
    /// For letter `k` (`x_i` is `2i`, `x_i^-1` is `2i+1`), the element it takes at each tuple.
    columns: Vec<Vec<u16>>,
    letters: Vec<Letter>,
}

fn steps(g: &FiniteGroup, d: usize, tuples: usize) -> Steps {
    let n = g.order();
    let mut columns = Vec::with_capacity(2 * d);
    let mut letters = Vec::with_capacity(2 * d);
    let mut stride = 1usize;
    for i in 0..d {
        let proj: Vec<u16> = (0..tuples).map(|t| ((t / stride) % n) as u16).collect();
        let inv: Vec<u16> = proj.iter().map(|&x| g.inverse(x as usize) as u16).collect();
        columns.push(proj);
        columns.push(inv);
        letters.push(Letter::new(i, false));
        letters.push(Letter::new(i, true));
        stride *= n;
    }
    Steps { columns, letters }
}

fn check_tuple_space(g: &FiniteGroup, d: usize, limits: &Limits) -> Result<usize> {
    let n = g.order();
    if n > u16::MAX as usize + 1 {
        return Err(Error::BudgetExceeded {
            what: "word-map values are stored as 16-bit ids".into(),
            needed: n as u128,
            budget: u16::MAX as u128 + 1,
        });
    }
    crate::words::tuple_count(n, d)
        .filter(|&t| t <= limits.tuple_budget)
        .map(|t| t as usize)
        .ok_or_else(|| Error::BudgetExceeded {
            what: format!("tuple space of G^{d} for |G| = {n}"),
            needed: (n as u128).saturating_pow(d as u32),
            budget: limits.tuple_budget as u128,
        })
}

/// Maximum number of maps allowed by the map cap and the memory ceiling.
fn effective_cap(tuples: usize, limits: &Limits) -> u64 {
    let per_map = (tuples as u64) * 2 + 64;
    limits.map_cap.min(limits.map_memory / per_map).max(1)
}

/// Breadth-first construction. `visit` sees each new map (index, values) as it
/// is inserted and may stop the search by returning `true`.
fn explore(
    g: &FiniteGroup,
    d: usize,
    limits: &Limits,
    mut visit: impl FnMut(usize, &[u16]) -> bool,
) -> Result<(WordMapGroup, bool)> {
    let tuples = check_tuple_space(g, d, limits)?;
    let cap = effective_cap(tuples, limits);
    let st = steps(g, d, tuples);
    let table = g.table();
    let n = g.order();
    let e = g.identity() as u16;

    let mut maps: IndexSet<Box<[u16]>> = IndexSet::new();
    let root: Box<[u16]> = vec![e; tuples].into_boxed_slice();
    maps.insert(root);
    let mut parent = vec![(0u32, Letter::new(0, false))];
    let mut truncated = false;
    let mut stopped = visit(0, &maps[0]);

    let mut head = 0usize;
    'bfs: while head < maps.len() && !stopped {
        let end = (head + CHUNK).min(maps.len());
        let expanded: Vec<(usize, usize, Box<[u16]>)> = (head..end)
            .into_par_iter()
            .flat_map_iter(|src| {
                let cur = &maps[src];
                st.columns.iter().enumerate().map(move |(k, col)| {
                    let next: Box<[u16]> = cur
                        .iter()
                        .zip(col.iter())
                        .map(|(&a, &b)| table[a as usize * n + b as usize] as u16)
                        .collect();
                    (src, k, next)
                })
            })
            .collect();
        for (src, k, next) in expanded {
            if maps.contains(&next) {
                continue;
            }
            if maps.len() as u64 >= cap {
                truncated = true;
                break 'bfs;
            }
            let (idx, _) = maps.insert_full(next);
            parent.push((src as u32, st.letters[k]));
            if visit(idx, &maps[idx]) {
                stopped = true;
                break 'bfs;
            }
        }
        head = end;
    }
    Ok((
        WordMapGroup {
            group_order: n,
            d,
            maps,
            parent,
            truncated,
        },
        stopped,
    ))
}

/// Builds `W(G)` on `d` variables, stopping with `truncated = true` if the
/// number of maps would exceed `cap` (or the memory ceiling in `limits`).
pub fn build_word_map_group(
    g: &FiniteGroup,
    d: usize,
    cap: u64,
    limits: &Limits,
) -> Result<WordMapGroup> {
    let limits = Limits {
        map_cap: cap,
        ..*limits
    };
    explore(g, d, &limits, |_, _| false).map(|(w, _)| w)
}

fn violator(values: &[u16], g: &FiniteGroup, scratch: &mut ElementSet) -> Option<Elem> {
    *scratch = ElementSet::empty(g.order());
    for &v in values {
        scratch.insert(v as usize);
    }
    crate::words::inversion_violator(scratch, g)
}

/// Exhaustive decision on `d = minimal_generator_count(G)` variables.
///
/// Maps are checked as they are discovered, so a chiral map found before
/// truncation still yields a chiral verdict.
pub fn decide_chirality(g: &FiniteGroup, limits: &Limits) -> ChiralityVerdict {
    let d = g.minimal_generator_count();
    decide_chirality_with_arity(g, d, limits)
}

/// As [`decide_chirality`] but with a caller-chosen number of variables.
pub fn decide_chirality_with_arity(g: &FiniteGroup, d: usize, limits: &Limits) -> ChiralityVerdict {
    let mut scratch = ElementSet::empty(g.order());
    let mut hit: Option<(usize, Elem)> = None;
    let result = explore(g, d, limits, |idx, values| {
        if let Some(x) = violator(values, g, &mut scratch) {
            hit = Some((idx, x));
            true
        } else {
            false
        }
    });
    match result {
        Err(err) => ChiralityVerdict::unknown(
            Method::ResourceLimit,
            Certificate::Resource {
                reason: err.to_string(),
                explored_maps: 0,
            },
        ),
        Ok((w, _)) => {
            if let Some((idx, x)) = hit {
                ChiralityVerdict::chiral(Method::NeumannExhaustive, w.rep_word(idx), x)
            } else if w.truncated() {
                ChiralityVerdict::unknown(
                    Method::ResourceLimit,
                    Certificate::Resource {
                        reason: format!(
                            "W(G) on {d} variables exceeds the map cap ({} maps explored)",
                            w.order()
                        ),
                        explored_maps: w.order() as u64,
                    },
                )
            } else {
                ChiralityVerdict::achiral(
                    Method::NeumannExhaustive,
                    Certificate::Exhaustive {
                        d,
                        maps: w.order() as u64,
                    },
                )
            }
        }
    }
}

/// Rechecks a complete `W(G)`: identity present, closed under multiplication
/// by generators and under inverses, and every map agrees with its word.
pub fn verify_fv_group_axioms(w: &WordMapGroup, g: &FiniteGroup) -> Result<()> {
    if w.truncated() {
        return Err(Error::Precondition("cannot verify truncated set".into()));
    }
    let tuples = w.values(0).len();
    let st = steps(g, w.d, tuples);
    let n = g.order();
    if w.values(0).iter().any(|&v| v as usize != g.identity()) {
        return Err(Error::Violation("first map is not the identity map".into()));
    }
    let mut tuple = vec![0usize; w.d];
    for idx in 0..w.order() {
        let vals = w.values(idx);
        for col in &st.columns {
            let next: Vec<u16> = vals
                .iter()
                .zip(col)
                .map(|(&a, &b)| g.mul(a as usize, b as usize) as u16)
                .collect();
            if w.index_of(&next).is_none() {
                return Err(Error::Violation(format!("map {idx} times a generator leaves W(G)")));
            }
        }
        let inv: Vec<u16> = vals.iter().map(|&a| g.inverse(a as usize) as u16).collect();
        if w.index_of(&inv).is_none() {
            return Err(Error::Violation(format!("inverse of map {idx} missing")));
        }
        let word = w.rep_word(idx);
        for (t, &v) in vals.iter().enumerate() {
            let mut code = t;
            for slot in tuple.iter_mut() {
                *slot = code % n;
                code /= n;
            }
            if evaluate(&word, g, &tuple) != v as usize {
                return Err(Error::Violation(format!(
                    "map {idx} disagrees with its word {word} at tuple {t}"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, from_permutations};
    use crate::verdict::Status;
    use crate::words::image;

    fn s3() -> FiniteGroup {
        from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
    }

    #[test]
    fn small_orders() {
        let lim = Limits::default();
        assert_eq!(build_word_map_group(&cyclic(2), 1, 100, &lim).unwrap().order(), 2);
        let c2 = cyclic(2);
        let v4 = c2.direct_product(&c2);
        assert_eq!(build_word_map_group(&v4, 2, 100, &lim).unwrap().order(), 4);
        for n in 1..=12 {
            assert_eq!(build_word_map_group(&cyclic(n), 1, 100, &lim).unwrap().order(), n);
        }
    }

    #[test]
    fn s3_rank_two() {
        let g = s3();
        let w = build_word_map_group(&g, 2, 10_000, &Limits::default()).unwrap();
        assert_eq!(w.order(), 972);
        assert!(!w.truncated());
        verify_fv_group_axioms(&w, &g).unwrap();
    }

    #[test]
    fn map_images() {
        let g = s3();
        let w = build_word_map_group(&g, 2, 10_000, &Limits::default()).unwrap();
        let id = w.map(0);
        assert!(id.rep_word.is_empty());
        assert_eq!(word_map_image(&id, 6).len(), 1);
        // x1 is reached in one step
        let x1 = (0..w.order()).find(|&i| w.rep_word(i).to_string() == "x1").unwrap();
        assert_eq!(w.image(x1).len(), 6);
        let comm: Word = "[x1,x2]".parse().unwrap();
        let vals: Vec<u16> = (0..36).map(|t| evaluate(&comm, &g, &[t % 6, t / 6]) as u16).collect();
        let idx = w.index_of(&vals).unwrap();
        assert_eq!(w.image(idx), image(&comm, &g).unwrap());
        assert_eq!(w.image(idx).len(), 3);
    }

    #[test]
    fn rep_words_are_shortest() {
        let g = s3();
        let w = build_word_map_group(&g, 2, 10_000, &Limits::default()).unwrap();
        let mut last = 0;
        for i in 0..w.order() {
            let len = w.rep_word(i).len();
            assert!(len >= last);
            last = len;
        }
    }

    #[test]
    fn truncation() {
        let w = build_word_map_group(&s3(), 2, 100, &Limits::default()).unwrap();
        assert!(w.truncated());
        assert_eq!(w.order(), 100);
        assert!(verify_fv_group_axioms(&w, &s3()).is_err());
    }

    #[test]
    fn verdicts() {
        let lim = Limits::default();
        let v = decide_chirality(&s3(), &lim);
        assert_eq!(v.status, Status::Achiral);
        assert_eq!(v.certificate, Certificate::Exhaustive { d: 2, maps: 972 });
        assert_eq!(decide_chirality(&cyclic(6), &lim).status, Status::Achiral);
        let tight = Limits {
            map_cap: 50,
            ..lim
        };
        assert_eq!(decide_chirality(&s3(), &tight).status, Status::Unknown);
    }
}
