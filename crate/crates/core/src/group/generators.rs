use std::collections::VecDeque;

use super::subgroup::conjugacy_classes;
use super::{Elem, ElementSet, FiniteGroup};

/// A generating tuple of least possible length, found by iterative deepening.
///
/// The first slot only ranges over one generator per conjugacy class of
/// cyclic subgroups (conjugating or re-generating a tuple entry preserves
/// the generated subgroup), tried in order of decreasing element order.
/// Later slots are ascending and must leave the current subgroup. The
/// trivial group yields the empty tuple.
pub fn minimal_generating_tuple(g: &FiniteGroup) -> Vec<Elem> {
    let n = g.order();
    if n == 1 {
        return Vec::new();
    }
    let orders = g.element_orders();
    if let Some(x) = (0..n).find(|&x| orders[x] as usize == n) {
        return vec![x];
    }

    let mut seen_cyclic = ElementSet::empty(n);
    let mut first: Vec<Elem> = Vec::new();
    for class in conjugacy_classes(g) {
        let x = class[0];
        if x == g.identity() || seen_cyclic.contains(x) {
            continue;
        }
        first.push(x);
        for &y in &class {
            let k = orders[y];
            for e in 1..k {
                if super::gcd(e, k) == 1 {
                    seen_cyclic.insert(g.pow(y, e as i64));
                }
            }
        }
    }
    first.sort_by(|&a, &b| orders[b].cmp(&orders[a]).then(a.cmp(&b)));

    let upper = g.generating_set().len();
    let trivial = ElementSet::from_ids(n, [g.identity()]);
    for depth in 2..upper {
        for &x in &first {
            let mut tuple = vec![x];
            let sub = close(g, &trivial, &tuple);
            if search(g, &mut tuple, &sub, depth, 0) {
                return tuple;
            }
        }
    }
    g.generating_set().to_vec()
}

/// Closes the subgroup `base` (generated by a prefix of `gens`) together with all of `gens`.
fn close(g: &FiniteGroup, base: &ElementSet, gens: &[Elem]) -> ElementSet {
    let mut current = base.clone();
    let mut queue: VecDeque<Elem> = current.iter().collect();
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if current.insert(y) {
                queue.push_back(y);
            }
        }
    }
    current
}

fn search(g: &FiniteGroup, tuple: &mut Vec<Elem>, sub: &ElementSet, depth: usize, min_next: Elem) -> bool {
    if sub.len() == g.order() {
        return true;
    }
    if tuple.len() == depth {
        return false;
    }
    for y in min_next..g.order() {
        if sub.contains(y) {
            continue;
        }
        tuple.push(y);
        let next = close(g, sub, tuple);
        if search(g, tuple, &next, depth, y + 1) {
            return true;
        }
        tuple.pop();
    }
    false
}

impl FiniteGroup {
    pub fn minimal_generator_count(&self) -> usize {
        minimal_generating_tuple(self).len()
    }
}
