//! Finite groups stored as full multiplication tables.
//!
//! Every other module enumerates over this representation, so products,
//! inverses and powers are plain table lookups. Element ids are dense
//! `0..n`; constructors in this crate always put the identity at id 0.

mod generators;
mod perm;
mod set;
mod subgroup;

use std::collections::VecDeque;
use std::sync::OnceLock;

pub use generators::minimal_generating_tuple;
pub use perm::{compose, from_permutations, from_permutations_with_limits, Permutation};
pub use set::ElementSet;
pub use subgroup::{
    conjugacy_classes, derived_subgroup, normal_subgroups, quotient, subgroup_as_group,
    subgroup_generated, Quotient, SubgroupData,
};

use crate::error::{Error, Result};

/// Group elements are addressed by dense ids.
pub type Elem = usize;

pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: Elem,
    inverses: Vec<u32>,
    label: String,
    generating_set: OnceLock<Vec<Elem>>,
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            order: self.order,
            table: self.table.clone(),
            identity: self.identity,
            inverses: self.inverses.clone(),
            label: self.label.clone(),
            generating_set: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish_non_exhaustive()
    }
}

impl FiniteGroup {
    /// Builds a group from table rows, validating every axiom.
    ///
    /// If the identity is not at id 0 it is swapped there, so ids in the
    /// result may differ from the input for exactly two elements.
    pub fn from_table(label: impl Into<String>, rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::MalformedTable(format!(
                        "entry ({i},{j}) = {v} out of range 0..{n}"
                    )));
                }
                table.push(v as u32);
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e * n + g] as usize == g && table[g * n + e] as usize == g))
            .ok_or_else(|| Error::Violation("no two-sided identity element".into()))?;
        let mut inverses = vec![u32::MAX; n];
        for g in 0..n {
            if let Some(h) = (0..n).find(|&h| table[g * n + h] as usize == identity) {
                inverses[g] = h as u32;
            }
        }
        if let Some(g) = inverses.iter().position(|&h| h == u32::MAX) {
            return Err(Error::Violation(format!("element {g} has no right inverse")));
        }
        let group = FiniteGroup::from_parts_unchecked(label, n, table, identity, inverses);
        group.validate()?;
        Ok(if identity == 0 { group } else { group.swap_labels(0, identity) })
    }

    /// Builds a group from a product closure. The result is validated.
    pub fn from_fn(label: impl Into<String>, n: usize, mul: impl Fn(Elem, Elem) -> Elem) -> Result<Self> {
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
        Self::from_table(label, &rows)
    }

    /// Assembles a candidate without checking anything. Call [`validate`](Self::validate)
    /// before relying on group axioms.
    pub fn from_parts_unchecked(
        label: impl Into<String>,
        order: usize,
        table: Vec<u32>,
        identity: Elem,
        inverses: Vec<u32>,
    ) -> Self {
        FiniteGroup {
            order,
            table,
            identity,
            inverses,
            label: label.into(),
            generating_set: OnceLock::new(),
        }
    }

    /// Checks all group axioms. Associativity is checked on every triple for
    /// `n <= 200` and with Light's test over a generating set above that.
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        if n == 0 || self.table.len() != n * n || self.inverses.len() != n {
            return Err(Error::MalformedTable(format!(
                "dimensions do not match order {n}"
            )));
        }
        if let Some(pos) = self.table.iter().position(|&v| v as usize >= n) {
            return Err(Error::MalformedTable(format!(
                "entry ({},{}) out of range",
                pos / n,
                pos % n
            )));
        }
        if self.identity >= n {
            return Err(Error::MalformedTable("identity out of range".into()));
        }
        let e = self.identity;
        for g in 0..n {
            if self.mul(e, g) != g || self.mul(g, e) != g {
                return Err(Error::Violation(format!("identity law fails at g={g}")));
            }
        }
        if n <= 200 {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(Error::Violation(format!(
                                "associativity at (a,b,c)=({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let gens = self.greedy_generators_unchecked();
            for &g in &gens {
                for a in 0..n {
                    let ag = self.mul(a, g);
                    for b in 0..n {
                        if self.mul(ag, b) != self.mul(a, self.mul(g, b)) {
                            return Err(Error::Violation(format!(
                                "associativity at (a,b,c)=({a},{g},{b})"
                            )));
                        }
                    }
                }
            }
        }
        for g in 0..n {
            let h = self.inverses[g] as usize;
            if h >= n || self.mul(g, h) != e || self.mul(h, g) != e {
                return Err(Error::Violation(format!("inverse law fails at g={g}")));
            }
        }
        for a in 0..n {
            let mut row = ElementSet::empty(n);
            let mut col = ElementSet::empty(n);
            for b in 0..n {
                row.insert(self.mul(a, b));
                col.insert(self.mul(b, a));
            }
            if row.len() != n {
                return Err(Error::Violation(format!("row {a} is not a permutation")));
            }
            if col.len() != n {
                return Err(Error::Violation(format!("column {a} is not a permutation")));
            }
        }
        Ok(())
    }

    fn swap_labels(self, x: Elem, y: Elem) -> Self {
        let n = self.order;
        let relabel = |v: usize| if v == x { y } else if v == y { x } else { v };
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[relabel(a) * n + relabel(b)] = relabel(self.mul(a, b)) as u32;
            }
        }
        let mut inverses = vec![0u32; n];
        for g in 0..n {
            inverses[relabel(g)] = relabel(self.inverse(g)) as u32;
        }
        FiniteGroup::from_parts_unchecked(self.label, n, table, relabel(self.identity), inverses)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inverse(&self, g: Elem) -> Elem {
        self.inverses[g] as usize
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    /// Row-major table, `table()[a * n + b] = a * b`.
    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        let ia = self.inverse(a);
        let ib = self.inverse(b);
        self.mul(self.mul(ia, ib), self.mul(a, b))
    }

    /// `h^-1 g h`.
    pub fn conjugate(&self, g: Elem, h: Elem) -> Elem {
        self.mul(self.mul(self.inverse(h), g), h)
    }

    /// `g^k` by square-and-multiply; negative `k` inverts first.
    pub fn pow(&self, g: Elem, k: i64) -> Elem {
        let mut base = if k < 0 { self.inverse(g) } else { g };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, g: Elem) -> u64 {
        let mut k = 1;
        let mut x = g;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<u64> {
        self.elements().map(|g| self.element_order(g)).collect()
    }

    /// Least `e` with `g^e = 1` for all `g`.
    pub fn exponent(&self) -> u64 {
        self.elements()
            .map(|g| self.element_order(g))
            .fold(1, lcm)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generating_set();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `{ g^k : g in G }`.
    pub fn power_image_set(&self, k: i64) -> ElementSet {
        ElementSet::from_ids(self.order, self.elements().map(|g| self.pow(g, k)))
    }

    /// A small generating set, found greedily in id order. Cached.
    pub fn generating_set(&self) -> &[Elem] {
        self.generating_set
            .get_or_init(|| self.greedy_generators_unchecked())
    }

    fn greedy_generators_unchecked(&self) -> Vec<Elem> {
        let n = self.order;
        let mut gens = Vec::new();
        let mut reached = ElementSet::from_ids(n, [self.identity]);
        for g in 0..n {
            if reached.contains(g) {
                continue;
            }
            gens.push(g);
            reached = self.right_closure(&gens);
        }
        gens
    }

    /// Everything reachable from the identity by right multiplication with `gens`.
    fn right_closure(&self, gens: &[Elem]) -> ElementSet {
        let mut seen = ElementSet::from_ids(self.order, [self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Checks that a map given by its images is a homomorphism `self -> self`.
    pub fn is_endomorphism(&self, images: &[Elem]) -> bool {
        images.len() == self.order
            && images.iter().all(|&x| x < self.order)
            && (0..self.order).all(|a| {
                (0..self.order)
                    .all(|b| images[self.mul(a, b)] == self.mul(images[a], images[b]))
            })
    }

    /// External direct product; element `(g, h)` gets id `g * |H| + h`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order, other.order);
        let size = n * m;
        let split = |x: usize| (x / m, x % m);
        let mut table = Vec::with_capacity(size * size);
        for x in 0..size {
            let (a, b) = split(x);
            for y in 0..size {
                let (c, d) = split(y);
                table.push((self.mul(a, c) * m + other.mul(b, d)) as u32);
            }
        }
        let inverses = (0..size)
            .map(|x| {
                let (a, b) = split(x);
                (self.inverse(a) * m + other.inverse(b)) as u32
            })
            .collect();
        FiniteGroup::from_parts_unchecked(
            format!("{} x {}", self.label, other.label),
            size,
            table,
            self.identity * m + other.identity,
            inverses,
        )
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// `C_n` as addition mod `n`.
pub fn cyclic(n: usize) -> FiniteGroup {
    let table = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
    let inverses = (0..n).map(|g| ((n - g) % n) as u32).collect();
    FiniteGroup::from_parts_unchecked(format!("C{n}"), n, table, 0, inverses)
}

/// Dihedral group of order `2m`: rotations `0..m`, reflections `m..2m`.
pub fn dihedral(m: usize) -> FiniteGroup {
    // r^i s^j encoded as j * m + i
    let n = 2 * m;
    let decode = |x: usize| (x % m, x / m);
    let encode = |i: usize, j: usize| j * m + i;
    let mul = |a: usize, b: usize| {
        let (i1, j1) = decode(a);
        let (i2, j2) = decode(b);
        // s r^i = r^-i s
        let i = if j1 == 0 { i1 + i2 } else { i1 + m - i2 };
        encode(i % m, (j1 + j2) % 2)
    };
    let table = (0..n * n).map(|x| mul(x / n, x % n) as u32).collect();
    let inverses = (0..n)
        .map(|x| {
            let (i, j) = decode(x);
            if j == 0 {
                encode((m - i) % m, 0) as u32
            } else {
                x as u32
            }
        })
        .collect();
    FiniteGroup::from_parts_unchecked(format!("D{n}"), n, table, 0, inverses)
}
