//! Group files and the bundled test corpus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{build_family_group, FamilyParameters, SemidirectStanza};
use crate::group::{from_permutations_with_limits, FiniteGroup, Permutation};
use crate::limits::Limits;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationStanza {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

/// On-disk group description. Exactly one of the three bodies is present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutations: Option<PermutationStanza>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semidirect: Option<SemidirectStanza>,
}

/// A parsed group, remembering family parameters when it came from a stanza.
#[derive(Clone, Debug)]
pub struct LoadedGroup {
    pub label: String,
    pub group: FiniteGroup,
    pub family: Option<FamilyParameters>,
}

impl GroupFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: GroupFile =
            serde_json::from_str(text).map_err(|e| Error::GroupFile(e.to_string()))?;
        let bodies = [f.table.is_some(), f.permutations.is_some(), f.semidirect.is_some()];
        if bodies.iter().filter(|&&b| b).count() != 1 {
            return Err(Error::GroupFile(
                "exactly one of table, permutations, semidirect is required".into(),
            ));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("group files always serialize")
    }

    pub fn load(&self, limits: &Limits) -> Result<LoadedGroup> {
        let (group, family) = if let Some(t) = &self.table {
            if t.len() as u64 > limits.table_order_cap {
                return Err(Error::CapExceeded {
                    what: "table order".into(),
                    cap: limits.table_order_cap,
                });
            }
            (FiniteGroup::from_table(self.label.clone(), t)?, None)
        } else if let Some(p) = &self.permutations {
            let g = from_permutations_with_limits(self.label.clone(), p.degree, &p.generators, limits)?;
            (g, None)
        } else if let Some(s) = self.semidirect {
            let params = FamilyParameters::from_stanza(s)?;
            if params.order() > limits.table_order_cap {
                return Err(Error::CapExceeded {
                    what: "table order".into(),
                    cap: limits.table_order_cap,
                });
            }
            let fg = build_family_group(&params)?;
            (fg.group.with_label(self.label.clone()), Some(params))
        } else {
            return Err(Error::GroupFile("no group body".into()));
        };
        Ok(LoadedGroup {
            label: self.label.clone(),
            group,
            family,
        })
    }
}

pub fn load_group_json(text: &str, limits: &Limits) -> Result<LoadedGroup> {
    GroupFile::from_json(text)?.load(limits)
}

fn cycle(degree: usize, start: usize, len: usize) -> Permutation {
    let mut p: Permutation = (0..degree).collect();
    for i in 0..len {
        p[start + i] = start + (i + 1) % len;
    }
    p
}

fn perms(label: String, degree: usize, generators: Vec<Permutation>) -> GroupFile {
    GroupFile {
        label,
        table: None,
        permutations: Some(PermutationStanza { degree, generators }),
        semidirect: None,
    }
}

/// Invariant factor lists `d1 | d2 | ... | dk` with product `n`, each `d > 1`.
pub fn abelian_invariants(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, min: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        for d in min.max(2)..=rest {
            let divides_prev = acc.last().is_none_or(|&p| d % p == 0);
            if rest % d == 0 && divides_prev {
                // the remaining factors must all be multiples of d
                let tail = rest / d;
                if tail == 1 || tail % d == 0 {
                    acc.push(d);
                    go(tail, d, acc, out);
                    acc.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(n, 2, &mut Vec::new(), &mut out);
    out
}

/// File name stem and contents of every bundled group.
pub fn bundled_corpus() -> Vec<(String, GroupFile)> {
    let mut out = Vec::new();
    for n in 2..=32 {
        for inv in abelian_invariants(n) {
            let degree: usize = inv.iter().sum();
            let mut start = 0;
            let gens = inv
                .iter()
                .map(|&d| {
                    let c = cycle(degree, start, d);
                    start += d;
                    c
                })
                .collect();
            let name = inv.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join("x");
            let stem = format!(
                "abelian-{}",
                inv.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x")
            );
            out.push((stem, perms(name, degree, gens)));
        }
    }
    for m in 3..=50 {
        let rot = cycle(m, 0, m);
        let refl = (0..m).map(|i| (m - i) % m).collect();
        out.push((format!("dihedral-{:03}", 2 * m), perms(format!("D{}", 2 * m), m, vec![rot, refl])));
    }
    // regular representation of Q8: ids 0..8 are ±1, ±i, ±j, ±k as (sign, unit)
    let q8 = {
        let unit_mul = |a: usize, b: usize| -> (bool, usize) {
            // units 0 = 1, 1 = i, 2 = j, 3 = k
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let mul = |a: usize, b: usize| {
            let (neg, u) = unit_mul(a % 4, b % 4);
            let sign = (a / 4 + b / 4 + neg as usize) % 2;
            sign * 4 + u
        };
        let right = |g: usize| (0..8).map(|x| mul(x, g)).collect::<Permutation>();
        perms("Q8".into(), 8, vec![right(1), right(2)])
    };
    out.push(("quaternion-8".into(), q8));
    out.push(("alternating-4".into(), perms("A4".into(), 4, vec![vec![1, 2, 0, 3], vec![1, 0, 3, 2]])));
    out.push(("symmetric-4".into(), perms("S4".into(), 4, vec![vec![1, 2, 3, 0], vec![1, 0, 2, 3]])));
    out.push((
        "frobenius-21".into(),
        perms(
            "F21".into(),
            7,
            vec![(0..7).map(|x| (x + 1) % 7).collect(), (0..7).map(|x| 2 * x % 7).collect()],
        ),
    ));
    for (order, q, pr, phi) in [(63, 7, 9, 2), (80, 5, 16, 2), (275, 11, 25, 3)] {
        out.push((
            format!("family-{order}"),
            GroupFile {
                label: format!("family-{order}"),
                table: None,
                permutations: None,
                semidirect: Some(SemidirectStanza { q, pr, phi }),
            },
        ));
    }
    out
}
