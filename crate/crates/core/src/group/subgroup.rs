use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{Elem, ElementSet, FiniteGroup};
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupData {
    pub elements: ElementSet,
    pub generators: Vec<Elem>,
    pub is_normal: bool,
}

impl SubgroupData {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: Elem) -> bool {
        self.elements.contains(g)
    }

    pub fn is_abelian(&self, g: &FiniteGroup) -> bool {
        self.generators.iter().all(|&a| {
            self.generators
                .iter()
                .all(|&b| g.mul(a, b) == g.mul(b, a))
        })
    }
}

/// Closure of `current` (already a subgroup, possibly just `{1}`) with one more generator.
fn extend_closure(g: &FiniteGroup, current: &mut ElementSet, gens: &[Elem]) {
    let mut queue: VecDeque<Elem> = current.iter().collect();
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if current.insert(y) {
                queue.push_back(y);
            }
        }
    }
}

fn is_normalized_by(g: &FiniteGroup, elements: &ElementSet, gens: &[Elem]) -> bool {
    gens.iter().all(|&h| {
        g.generating_set()
            .iter()
            .all(|&x| elements.contains(g.conjugate(h, x)))
    })
}

/// Smallest subgroup containing `seeds`; seeds already inside are not kept as generators.
pub fn subgroup_generated(g: &FiniteGroup, seeds: &[Elem]) -> SubgroupData {
    let mut elements = ElementSet::from_ids(g.order(), [g.identity()]);
    let mut generators = Vec::new();
    for &s in seeds {
        if !elements.contains(s) {
            generators.push(s);
            extend_closure(g, &mut elements, &generators);
        }
    }
    let is_normal = is_normalized_by(g, &elements, &generators);
    SubgroupData {
        elements,
        generators,
        is_normal,
    }
}

/// The subgroup generated by all commutators `a^-1 b^-1 a b`.
pub fn derived_subgroup(g: &FiniteGroup) -> SubgroupData {
    let mut commutators = ElementSet::empty(g.order());
    for a in g.elements() {
        for b in g.elements() {
            commutators.insert(g.commutator(a, b));
        }
    }
    let seeds = commutators.to_vec();
    let mut sub = subgroup_generated(g, &seeds);
    debug_assert!(sub.is_normal);
    sub.is_normal = true;
    sub
}

/// Conjugacy classes in order of their least element.
pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<Vec<Elem>> {
    let mut assigned = ElementSet::empty(g.order());
    let mut classes = Vec::new();
    for x in g.elements() {
        if assigned.contains(x) {
            continue;
        }
        let mut class = vec![x];
        assigned.insert(x);
        let mut head = 0;
        while head < class.len() {
            let y = class[head];
            for &h in g.generating_set() {
                let z = g.conjugate(y, h);
                if assigned.insert(z) {
                    class.push(z);
                }
            }
            head += 1;
        }
        class.sort_unstable();
        classes.push(class);
    }
    classes
}

/// All normal subgroups, built as joins of normal closures of conjugacy classes.
///
/// Sorted by order, then by element list.
pub fn normal_subgroups(g: &FiniteGroup, limits: &Limits) -> Result<Vec<SubgroupData>> {
    if g.order() as u64 > limits.normal_subgroup_order_cap {
        return Err(Error::CapExceeded {
            what: "normal subgroup enumeration order".into(),
            cap: limits.normal_subgroup_order_cap,
        });
    }
    let mut found: Vec<SubgroupData> = vec![subgroup_generated(g, &[])];
    let push = |found: &mut Vec<SubgroupData>, s: SubgroupData| {
        if found.iter().all(|t| t.elements != s.elements) {
            found.push(s);
            true
        } else {
            false
        }
    };
    for class in conjugacy_classes(g) {
        let s = subgroup_generated(g, &class);
        push(&mut found, s);
    }
    let minimal = found.len();
    // every normal subgroup is a join of class closures; join each subgroup with the generators
    let mut head = 1;
    while head < found.len() {
        for k in 1..minimal {
            let mut seeds = found[head].generators.clone();
            seeds.extend(found[k].generators.iter().copied());
            let s = subgroup_generated(g, &seeds);
            push(&mut found, s);
        }
        head += 1;
    }
    for s in &mut found {
        s.is_normal = true;
    }
    found.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.elements.to_vec().cmp(&b.elements.to_vec()))
    });
    Ok(found)
}

pub struct Quotient {
    pub group: FiniteGroup,
    /// `projection[g]` is the coset id of `g`.
    pub projection: Vec<Elem>,
    /// Least element of each coset.
    pub representatives: Vec<Elem>,
}

pub fn quotient(g: &FiniteGroup, n: &SubgroupData) -> Result<Quotient> {
    if !n.is_normal || !is_normalized_by(g, &n.elements, &n.elements.to_vec()) {
        return Err(Error::NotNormal);
    }
    let mut projection = vec![usize::MAX; g.order()];
    let mut representatives = Vec::new();
    for a in g.elements() {
        if projection[a] != usize::MAX {
            continue;
        }
        let id = representatives.len();
        representatives.push(a);
        for x in n.elements.iter() {
            projection[g.mul(a, x)] = id;
        }
    }
    let k = representatives.len();
    let mut table = Vec::with_capacity(k * k);
    for &ra in &representatives {
        for &rb in &representatives {
            table.push(projection[g.mul(ra, rb)] as u32);
        }
    }
    let inverses = representatives
        .iter()
        .map(|&r| projection[g.inverse(r)] as u32)
        .collect();
    let group = FiniteGroup::from_parts_unchecked(
        format!("{}/N{}", g.label(), n.order()),
        k,
        table,
        projection[g.identity()],
        inverses,
    );
    Ok(Quotient {
        group,
        projection,
        representatives,
    })
}

/// Extracts a subgroup as a standalone group. Returns the group and the
/// embedding (`embedding[i]` is the id in `g` of element `i`).
pub fn subgroup_as_group(g: &FiniteGroup, h: &SubgroupData) -> (FiniteGroup, Vec<Elem>) {
    let mut embedding = vec![g.identity()];
    embedding.extend(h.elements.iter().filter(|&x| x != g.identity()));
    let mut local = vec![usize::MAX; g.order()];
    for (i, &x) in embedding.iter().enumerate() {
        local[x] = i;
    }
    let k = embedding.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in &embedding {
        for &b in &embedding {
            table.push(local[g.mul(a, b)] as u32);
        }
    }
    let inverses = embedding.iter().map(|&a| local[g.inverse(a)] as u32).collect();
    let group = FiniteGroup::from_parts_unchecked(
        format!("{}<{}>", g.label(), k),
        k,
        table,
        0,
        inverses,
    );
    (group, embedding)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral, from_permutations};

    fn s3() -> FiniteGroup {
        from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
    }

    fn three_cycle(g: &FiniteGroup) -> Elem {
        g.elements().find(|&x| g.element_order(x) == 3).unwrap()
    }

    fn transposition(g: &FiniteGroup) -> Elem {
        g.elements().find(|&x| g.element_order(x) == 2).unwrap()
    }

    #[test]
    fn generated_subgroups() {
        let g = s3();
        assert_eq!(subgroup_generated(&g, &[0]).order(), 1);
        let c3 = subgroup_generated(&g, &[three_cycle(&g)]);
        assert_eq!(c3.order(), 3);
        assert!(c3.is_normal);
        let c2 = subgroup_generated(&g, &[transposition(&g)]);
        assert_eq!(c2.order(), 2);
        assert!(!c2.is_normal);
    }

    #[test]
    fn derived_subgroups() {
        assert_eq!(derived_subgroup(&cyclic(6)).order(), 1);
        let g = s3();
        let d = derived_subgroup(&g);
        assert_eq!(d.order(), 3);
        assert!(d.elements.iter().all(|x| g.element_order(x) != 2));
    }

    #[test]
    fn normal_subgroup_counts() {
        let orders = |g: &FiniteGroup| -> Vec<usize> {
            normal_subgroups(g, &Limits::default())
                .unwrap()
                .iter()
                .map(|s| s.order())
                .collect()
        };
        assert_eq!(orders(&cyclic(6)), vec![1, 2, 3, 6]);
        assert_eq!(orders(&s3()), vec![1, 3, 6]);
        // D8: 1, center, three of order 4, whole group
        assert_eq!(orders(&dihedral(4)), vec![1, 2, 4, 4, 4, 8]);
        let c2 = cyclic(2);
        assert_eq!(orders(&c2.direct_product(&c2)), vec![1, 2, 2, 2, 4]);
    }

    #[test]
    fn quotients() {
        let g = s3();
        let whole = subgroup_generated(&g, &g.elements().collect::<Vec<_>>());
        assert_eq!(quotient(&g, &whole).unwrap().group.order(), 1);
        let c3 = subgroup_generated(&g, &[three_cycle(&g)]);
        let q = quotient(&g, &c3).unwrap();
        assert_eq!(q.group.order(), 2);
        q.group.validate().unwrap();
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(
                    q.projection[g.mul(a, b)],
                    q.group.mul(q.projection[a], q.projection[b])
                );
            }
        }
        let c2 = subgroup_generated(&g, &[transposition(&g)]);
        assert!(matches!(quotient(&g, &c2), Err(Error::NotNormal)));
    }

    #[test]
    fn subgroup_extraction() {
        let g = s3();
        let c3 = subgroup_generated(&g, &[three_cycle(&g)]);
        let (h, emb) = subgroup_as_group(&g, &c3);
        h.validate().unwrap();
        assert_eq!(h.order(), 3);
        assert_eq!(emb[0], g.identity());
    }

    #[test]
    fn conjugacy_classes_of_s3() {
        let sizes: Vec<usize> = conjugacy_classes(&s3()).iter().map(Vec::len).collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 3]);
    }
}
