//! Certificate replay.
//!
//! Everything here is recomputed from the multiplication table with plain
//! loops; none of the search routines that produced a certificate are
//! called, except that an exhaustive verdict is rebuilt and audited.

use crate::engine::{build_word_map_group, verify_fv_group_axioms};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::limits::Limits;
use crate::verdict::{Certificate, ChiralityVerdict, Status};
use crate::words::Word;

fn mismatch<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Mismatch(msg.into()))
}

/// `{ w(t) }` by a sequential odometer over all tuples.
fn plain_image(w: &Word, g: &FiniteGroup, limits: &Limits) -> Result<Vec<bool>> {
    let n = g.order();
    let d = w.arity();
    let total = (n as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if total > limits.tuple_budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "certificate replay".into(),
            needed: total,
            budget: limits.tuple_budget as u128,
        });
    }
    let mut seen = vec![false; n];
    let mut tuple = vec![0usize; d];
    loop {
        let mut acc = g.identity();
        for l in w.letters() {
            let x = tuple[l.var as usize];
            acc = g.mul(acc, if l.inverse { g.inverse(x) } else { x });
        }
        seen[acc] = true;
        let mut i = 0;
        loop {
            if i == d {
                return Ok(seen);
            }
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}

fn check_automorphism(g: &FiniteGroup, images: &[Elem], what: &str) -> Result<()> {
    let n = g.order();
    if images.len() != n {
        return mismatch(format!("{what}: wrong length"));
    }
    let mut hit = vec![false; n];
    for &y in images {
        if y >= n || std::mem::replace(&mut hit[y], true) {
            return mismatch(format!("{what}: not a bijection"));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if images[g.mul(a, b)] != g.mul(images[a], images[b]) {
                return mismatch(format!("{what}: not multiplicative at ({a},{b})"));
            }
        }
    }
    Ok(())
}

fn check_all_automorphisms(g: &FiniteGroup, auts: &[Vec<Elem>]) -> Result<()> {
    for (i, a) in auts.iter().enumerate() {
        check_automorphism(g, a, &format!("automorphism {i}"))?;
    }
    Ok(())
}

fn sends_to_inverse(g: &FiniteGroup, auts: &[Vec<Elem>], idx: usize, x: Elem) -> Result<()> {
    match auts.get(idx) {
        Some(a) if a[x] == g.inverse(x) => Ok(()),
        Some(_) => mismatch(format!("automorphism {idx} does not invert element {x}")),
        None => mismatch(format!("automorphism index {idx} out of range")),
    }
}

fn order_of(g: &FiniteGroup, x: Elem) -> u64 {
    let mut k = 1;
    let mut y = x;
    while y != g.identity() {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn closure(g: &FiniteGroup, seeds: &[Elem]) -> Vec<bool> {
    let mut inside = vec![false; g.order()];
    inside[g.identity()] = true;
    let mut list = vec![g.identity()];
    let mut head = 0;
    while head < list.len() {
        let x = list[head];
        head += 1;
        for &s in seeds {
            let y = g.mul(x, s);
            if !inside[y] {
                inside[y] = true;
                list.push(y);
            }
        }
    }
    inside
}

/// What a successful replay established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replay {
    pub status: Status,
    pub summary: String,
}

/// Rechecks `verdict` against `g`.
pub fn verify_verdict(g: &FiniteGroup, verdict: &ChiralityVerdict, limits: &Limits) -> Result<Replay> {
    let n = g.order();
    let summary = match (&verdict.status, &verdict.certificate) {
        (Status::Chiral, Certificate::Witness { word, element }) => {
            if *element >= n {
                return mismatch("witness element out of range");
            }
            let img = plain_image(word, g, limits)?;
            if !img[*element] {
                return mismatch(format!("element {element} is not in the image of {word}"));
            }
            if img[g.inverse(*element)] {
                return mismatch(format!(
                    "inverse {} of the witness is in the image of {word}",
                    g.inverse(*element)
                ));
            }
            format!("{element} in image of {word}, inverse {} not", g.inverse(*element))
        }
        (Status::Achiral, Certificate::Abelian) => {
            for a in 0..n {
                for b in 0..n {
                    if g.mul(a, b) != g.mul(b, a) {
                        return mismatch(format!("elements {a} and {b} do not commute"));
                    }
                }
            }
            "group is abelian".into()
        }
        (Status::Achiral, Certificate::AutInverse { automorphisms, witness }) => {
            check_all_automorphisms(g, automorphisms)?;
            if witness.len() != n {
                return mismatch("witness list does not cover the group");
            }
            for (x, &idx) in witness.iter().enumerate() {
                sends_to_inverse(g, automorphisms, idx, x)?;
            }
            format!("{} automorphisms invert every element", automorphisms.len())
        }
        (Status::Achiral, Certificate::PowerCommutator { exponent, automorphisms, layers }) => {
            check_all_automorphisms(g, automorphisms)?;
            let e = (0..n).map(|x| order_of(g, x)).fold(1, |a, b| a / gcd(a, b) * b);
            if e != *exponent {
                return mismatch(format!("exponent is {e}, certificate says {exponent}"));
            }
            let mut is_comm = vec![false; n];
            for a in 0..n {
                for b in 0..n {
                    is_comm[g.mul(g.mul(g.inverse(a), g.inverse(b)), g.mul(a, b))] = true;
                }
            }
            let comms: Vec<Elem> = (0..n).filter(|&x| is_comm[x]).collect();
            let derived = closure(g, &comms);
            let divisors: Vec<u64> = (1..=e).filter(|k| e % k == 0).collect();
            if layers.iter().map(|l| l.k).collect::<Vec<_>>() != divisors {
                return mismatch("layers do not match the divisors of the exponent");
            }
            for layer in layers {
                let mut powers = vec![false; n];
                for x in 0..n {
                    let mut y = g.identity();
                    for _ in 0..layer.k {
                        y = g.mul(y, x);
                    }
                    powers[y] = true;
                }
                let mut expect = vec![false; n];
                for a in (0..n).filter(|&a| powers[a]) {
                    for c in (0..n).filter(|&c| derived[c]) {
                        let y = g.mul(a, c);
                        expect[y] = !powers[y];
                    }
                }
                let expect: Vec<Elem> = (0..n).filter(|&x| expect[x]).collect();
                if expect != layer.elements {
                    return mismatch(format!("layer k = {} has the wrong elements", layer.k));
                }
                if layer.automorphism.len() != layer.elements.len() {
                    return mismatch(format!("layer k = {} is missing automorphisms", layer.k));
                }
                for (&x, &idx) in layer.elements.iter().zip(&layer.automorphism) {
                    sends_to_inverse(g, automorphisms, idx, x)?;
                }
            }
            format!("{} layers checked", layers.len())
        }
        (
            Status::Achiral,
            Certificate::SplitExtension {
                normal,
                complement,
                inversion,
                automorphisms,
                landing,
                complement_verdict,
            },
        ) => {
            let mut in_n = vec![false; n];
            let mut in_h = vec![false; n];
            for &x in normal {
                if x >= n {
                    return mismatch("normal id out of range");
                }
                in_n[x] = true;
            }
            for &x in complement {
                if x >= n {
                    return mismatch("complement id out of range");
                }
                in_h[x] = true;
            }
            if closure(g, normal) != in_n || closure(g, complement) != in_h {
                return mismatch("normal part or complement is not a subgroup");
            }
            for &a in normal {
                for &b in normal {
                    if g.mul(a, b) != g.mul(b, a) {
                        return mismatch("normal part is not abelian");
                    }
                }
                for x in 0..n {
                    if !in_n[g.mul(g.mul(g.inverse(x), a), x)] {
                        return mismatch("normal part is not normal");
                    }
                }
            }
            let meet = (0..n).filter(|&x| in_n[x] && in_h[x]).count();
            if meet != 1 || normal.len() * complement.len() != n {
                return mismatch("subgroups are not complementary");
            }
            check_automorphism(g, inversion, "inversion")?;
            if normal.iter().any(|&x| inversion[x] != g.inverse(x))
                || complement.iter().any(|&x| inversion[x] != x)
            {
                return mismatch("inversion map does not invert N and fix H");
            }
            check_all_automorphisms(g, automorphisms)?;
            if landing.len() != n {
                return mismatch("landing list does not cover the group");
            }
            for (x, &(idx, y)) in landing.iter().enumerate() {
                let Some(a) = automorphisms.get(idx) else {
                    return mismatch(format!("automorphism index {idx} out of range"));
                };
                if a[x] != y || !(in_n[y] || in_h[y]) {
                    return mismatch(format!("element {x} does not land in N or H"));
                }
            }
            if complement.first() != Some(&g.identity()) {
                return mismatch("complement must list the identity first");
            }
            let mut local = vec![usize::MAX; n];
            for (i, &x) in complement.iter().enumerate() {
                local[x] = i;
            }
            let rows: Vec<Vec<usize>> = complement
                .iter()
                .map(|&a| complement.iter().map(|&b| local[g.mul(a, b)]).collect())
                .collect();
            let h = FiniteGroup::from_table("complement", &rows)?;
            if !complement_verdict.is_achiral() {
                return mismatch("complement verdict is not achiral");
            }
            verify_verdict(&h, complement_verdict, limits)?;
            format!(
                "|N| = {}, |H| = {}, every orbit meets N or H",
                normal.len(),
                complement.len()
            )
        }
        (Status::Achiral, Certificate::Exhaustive { d, maps }) => {
            let w = build_word_map_group(g, *d, maps.saturating_add(1), limits)?;
            if w.truncated() || w.order() as u64 != *maps {
                return mismatch(format!(
                    "rebuilt W(G) has {} maps{}, certificate says {maps}",
                    w.order(),
                    if w.truncated() { " (truncated)" } else { "" }
                ));
            }
            verify_fv_group_axioms(&w, g)?;
            for idx in 0..w.order() {
                let vals = w.values(idx);
                let mut inside = vec![false; n];
                for &v in vals {
                    inside[v as usize] = true;
                }
                if (0..n).any(|x| inside[x] && !inside[g.inverse(x)]) {
                    return mismatch(format!("map {} has an image not closed under inverses", w.rep_word(idx)));
                }
            }
            let arity = crate::group::minimal_generating_tuple(g).len();
            if arity != *d {
                return mismatch(format!("group needs {arity} generators, certificate used {d}"));
            }
            format!("{maps} word maps rebuilt, every image inverse-closed")
        }
        (Status::Unknown, _) => "no claim to replay".into(),
        (status, cert) => {
            return mismatch(format!("certificate {cert:?} cannot support status {status:?}"));
        }
    };
    Ok(Replay {
        status: verdict.status,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::filter_cascade;
    use crate::group::{cyclic, dihedral, from_permutations};
    use crate::verdict::Method;

    #[test]
    fn replays() {
        let lim = Limits::default();
        let s3 = from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        for g in [s3.clone(), dihedral(6), cyclic(10)] {
            let v = filter_cascade(&g, &[], &lim);
            verify_verdict(&g, &v, &lim).unwrap();
        }
        let v = crate::engine::decide_chirality(&s3, &lim);
        assert_eq!(verify_verdict(&s3, &v, &lim).unwrap().status, Status::Achiral);
    }

    #[test]
    fn tampering_is_caught() {
        let lim = Limits::default();
        let s3 = from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        let fake = ChiralityVerdict::chiral(Method::WordWitness, "[x,y]".parse().unwrap(), 1);
        assert!(matches!(verify_verdict(&s3, &fake, &lim), Err(Error::Mismatch(_))));
        let mut v = filter_cascade(&s3, &[], &lim);
        if let Certificate::AutInverse { automorphisms, witness } = &mut v.certificate {
            let id = automorphisms.iter().position(|a| a.iter().enumerate().all(|(i, &x)| i == x));
            let id = id.unwrap_or_else(|| {
                automorphisms.push((0..6).collect());
                automorphisms.len() - 1
            });
            witness.iter_mut().for_each(|w| *w = id);
        }
        assert!(verify_verdict(&s3, &v, &lim).is_err());
        let bogus = ChiralityVerdict::achiral(Method::Abelian, Certificate::Abelian);
        assert!(verify_verdict(&s3, &bogus, &lim).is_err());
    }
}
