use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{minimal_generating_tuple, Elem, ElementSet, FiniteGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automorphism {
    pub images: Vec<Elem>,
    /// Images of the generating tuple used during enumeration.
    pub generator_images: Vec<Elem>,
}

impl Automorphism {
    pub fn identity(g: &FiniteGroup) -> Self {
        Automorphism {
            images: g.elements().collect(),
            generator_images: Vec::new(),
        }
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.images[x]
    }

    /// Full check: bijective and multiplicative on every pair.
    pub fn is_valid(&self, g: &FiniteGroup) -> bool {
        let mut hit = ElementSet::empty(g.order());
        self.images.len() == g.order()
            && self.images.iter().all(|&y| y < g.order() && hit.insert(y))
            && g.is_endomorphism(&self.images)
    }
}

/// Extends `gen_images` (images of `gens[..k]`) over `<gens[..k]>` by
/// breadth-first search, rejecting it on any inconsistency or collision.
fn extend(g: &FiniteGroup, gens: &[Elem], gen_images: &[Elem]) -> Option<Vec<Elem>> {
    let n = g.order();
    let k = gen_images.len();
    let mut map = vec![usize::MAX; n];
    let mut used = ElementSet::empty(n);
    map[g.identity()] = g.identity();
    used.insert(g.identity());
    let mut queue = vec![g.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for j in 0..k {
            let y = g.mul(x, gens[j]);
            let img = g.mul(map[x], gen_images[j]);
            if map[y] == usize::MAX {
                if !used.insert(img) {
                    return None;
                }
                map[y] = img;
                queue.push(y);
            } else if map[y] != img {
                return None;
            }
        }
    }
    Some(map)
}

/// All automorphisms of `g`, the identity first.
///
/// Images of a minimal generating tuple are chosen one slot at a time among
/// elements of matching order; each partial choice must extend consistently
/// and injectively over the subgroup generated so far.
pub fn enumerate_automorphisms(g: &FiniteGroup, cap: u64) -> Result<Vec<Automorphism>> {
    let gens = minimal_generating_tuple(g);
    if gens.is_empty() {
        return Ok(vec![Automorphism::identity(g)]);
    }
    let orders = g.element_orders();
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&x| g.elements().filter(|&y| orders[y] == orders[x]).collect())
        .collect();

    fn recurse(
        g: &FiniteGroup,
        gens: &[Elem],
        candidates: &[Vec<Elem>],
        chosen: &mut Vec<Elem>,
        out: &mut Vec<Automorphism>,
        cap: u64,
    ) -> bool {
        let Some(map) = extend(g, gens, chosen) else {
            return true;
        };
        if chosen.len() == gens.len() {
            if out.len() as u64 >= cap {
                return false;
            }
            out.push(Automorphism {
                images: map,
                generator_images: chosen.clone(),
            });
            return true;
        }
        for &y in &candidates[chosen.len()] {
            chosen.push(y);
            let ok = recurse(g, gens, candidates, chosen, out, cap);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    let parts: Vec<Option<Vec<Automorphism>>> = candidates[0]
        .par_iter()
        .map(|&y| {
            let mut out = Vec::new();
            let mut chosen = vec![y];
            recurse(g, &gens, &candidates, &mut chosen, &mut out, cap).then_some(out)
        })
        .collect();
    let mut all = Vec::new();
    for part in parts {
        let Some(part) = part else {
            return Err(cap_error(cap));
        };
        all.extend(part);
        if all.len() as u64 > cap {
            return Err(cap_error(cap));
        }
    }
    all.sort_by(|a, b| a.images.cmp(&b.images));
    if let Some(pos) = all.iter().position(|a| a.images.iter().enumerate().all(|(i, &y)| i == y)) {
        let id = all.remove(pos);
        all.insert(0, id);
    }
    Ok(all)
}

fn cap_error(cap: u64) -> Error {
    Error::CapExceeded {
        what: "automorphism count".into(),
        cap,
    }
}

/// Whether `x^-1` is conjugate to `x`; returns a conjugating element.
pub fn conjugate_to_inverse(g: &FiniteGroup, x: Elem) -> Option<Elem> {
    let target = g.inverse(x);
    g.elements().find(|&h| g.conjugate(x, h) == target)
}

/// The inner automorphism `y -> h^-1 y h`.
pub fn inner_automorphism(g: &FiniteGroup, h: Elem) -> Automorphism {
    Automorphism {
        images: g.elements().map(|y| g.conjugate(y, h)).collect(),
        generator_images: Vec::new(),
    }
}

/// True iff some automorphism sends `x` to `x^-1`. Conjugation is tried first.
pub fn is_automorphic_to_inverse(g: &FiniteGroup, x: Elem, auts: &[Automorphism]) -> bool {
    conjugate_to_inverse(g, x).is_some() || auts.iter().any(|a| a.apply(x) == g.inverse(x))
}

/// Orbit of `x` under the full automorphism list (which is a group, so the
/// set of images is the orbit).
pub fn orbit(x: Elem, auts: &[Automorphism], n: usize) -> ElementSet {
    ElementSet::from_ids(n, auts.iter().map(|a| a.apply(x)))
}
