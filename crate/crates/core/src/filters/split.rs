use super::{AutTable, Automorphism, FilterCertificate};
use crate::error::{Error, Result};
use crate::group::{
    minimal_generating_tuple, quotient, subgroup_generated, ElementSet, FiniteGroup, SubgroupData,
};
use crate::verdict::{Certificate, ChiralityVerdict, Method};

/// Upper bound on lift combinations tried while looking for a complement.
const LIFT_COMBINATIONS: u64 = 200_000;

fn check_split(g: &FiniteGroup, n: &SubgroupData, h: &SubgroupData) -> Result<()> {
    if !n.is_abelian(g) {
        return Err(Error::Hypothesis("normal subgroup is not abelian".into()));
    }
    let normal = g
        .elements()
        .all(|x| n.elements.iter().all(|y| n.contains(g.conjugate(y, x))));
    if !normal {
        return Err(Error::Hypothesis("subgroup is not normal".into()));
    }
    let meet = n.elements.intersection(&h.elements);
    if meet.len() != 1 || n.order() * h.order() != g.order() {
        return Err(Error::Hypothesis("subgroups are not complementary".into()));
    }
    Ok(())
}

/// The automorphism `n h -> n^-1 h` for `G = N ⋊ H` with `N` abelian.
pub fn inversion_automorphism(
    g: &FiniteGroup,
    n: &SubgroupData,
    h: &SubgroupData,
) -> Result<Automorphism> {
    check_split(g, n, h)?;
    let mut images = vec![usize::MAX; g.order()];
    for a in n.elements.iter() {
        for b in h.elements.iter() {
            images[g.mul(a, b)] = g.mul(g.inverse(a), b);
        }
    }
    let aut = Automorphism {
        images,
        generator_images: Vec::new(),
    };
    if !aut.is_valid(g) {
        return Err(Error::Hypothesis("inversion on the kernel is not an automorphism".into()));
    }
    Ok(aut)
}

/// A complement to the normal subgroup `n`, searched among subgroups
/// generated by lifts of a minimal generating tuple of `G/N`.
pub fn find_complement(g: &FiniteGroup, n: &SubgroupData) -> Option<SubgroupData> {
    let q = quotient(g, n).ok()?;
    let target = g.order() / n.order();
    let qgens = minimal_generating_tuple(&q.group);
    if qgens.is_empty() {
        return Some(subgroup_generated(g, &[]));
    }
    let lifts: Vec<Vec<usize>> = qgens
        .iter()
        .map(|&c| g.elements().filter(|&x| q.projection[x] == c).collect())
        .collect();
    let combos = (n.order() as u64).checked_pow(qgens.len() as u32)?;
    if combos > LIFT_COMBINATIONS {
        return None;
    }
    let mut digits = vec![0usize; qgens.len()];
    loop {
        let seeds: Vec<usize> = digits.iter().zip(&lifts).map(|(&i, l)| l[i]).collect();
        let h = subgroup_generated(g, &seeds);
        if h.order() == target && h.elements.intersection(&n.elements).len() == 1 {
            return Some(h);
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return None;
            }
            digits[i] += 1;
            if digits[i] < lifts[i].len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Certifies achirality of `G = N ⋊ H` (`N` abelian, `H` achiral) when every
/// element's automorphism orbit meets `N ∪ H`.
///
/// Returns `Ok(None)` if some orbit misses `N ∪ H`.
pub fn split_extension_certificate(
    g: &FiniteGroup,
    n: &SubgroupData,
    h: &SubgroupData,
    h_verdict: &ChiralityVerdict,
    auts: &[Automorphism],
) -> Result<Option<FilterCertificate>> {
    let inversion = inversion_automorphism(g, n, h)?;
    if !h_verdict.is_achiral() {
        return Err(Error::Hypothesis("complement is not certified achiral".into()));
    }
    let mut union = n.elements.clone();
    union.union_with(&h.elements);
    let mut table = AutTable::default();
    let mut landing = Vec::with_capacity(g.order());
    let identity: Vec<usize> = g.elements().collect();
    for x in g.elements() {
        if union.contains(x) {
            landing.push((table.add(identity.clone()), x));
            continue;
        }
        let Some(a) = auts.iter().find(|a| union.contains(a.apply(x))) else {
            return Ok(None);
        };
        landing.push((table.add(a.images.clone()), a.apply(x)));
    }
    let (_, embedding) = crate::group::subgroup_as_group(g, h);
    Ok(Some(FilterCertificate::new(
        Method::SplitExtension,
        Certificate::SplitExtension {
            normal: n.elements.to_vec(),
            complement: embedding,
            inversion: inversion.images,
            automorphisms: table.into_vec(),
            landing,
            complement_verdict: Box::new(h_verdict.clone()),
        },
    )))
}

/// Elements of `G` whose orbit under `auts` misses `N ∪ H`.
pub fn stranded_elements(
    g: &FiniteGroup,
    n: &SubgroupData,
    h: &SubgroupData,
    auts: &[Automorphism],
) -> ElementSet {
    let mut union = n.elements.clone();
    union.union_with(&h.elements);
    ElementSet::from_ids(
        g.order(),
        g.elements()
            .filter(|&x| !auts.iter().any(|a| union.contains(a.apply(x)))),
    )
}
