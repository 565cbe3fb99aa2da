//! Sufficient conditions for achirality, each producing a replayable
//! certificate, and the cascade that tries them in order of cost.
//!
//! A word map's image is closed under every automorphism, so an element
//! automorphic to its inverse can never witness chirality. All filters below
//! reduce to that observation plus a choice of which elements to inspect.

mod automorphism;
mod split;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

pub use automorphism::{
    conjugate_to_inverse, enumerate_automorphisms, inner_automorphism, is_automorphic_to_inverse,
    orbit, Automorphism,
};
pub use split::{find_complement, inversion_automorphism, split_extension_certificate, stranded_elements};

use crate::engine::decide_chirality;
use crate::error::{Error, Result};
use crate::group::{derived_subgroup, normal_subgroups, quotient, Elem, ElementSet, FiniteGroup, SubgroupData};
use crate::limits::Limits;
use crate::verdict::{Certificate, ChiralityVerdict, Method, PowerLayer, Status};
use crate::words::{image_with_limits, is_inversion_closed};

/// A successful filter: its stable name and the replayable payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterCertificate {
    pub filter_name: String,
    pub data: Certificate,
}

impl FilterCertificate {
    fn new(method: Method, data: Certificate) -> Self {
        FilterCertificate {
            filter_name: method.tag().to_string(),
            data,
        }
    }

    pub fn into_verdict(self) -> ChiralityVerdict {
        let method = match self.data {
            Certificate::Abelian => Method::Abelian,
            Certificate::AutInverse { .. } => Method::AutInverse,
            Certificate::PowerCommutator { .. } => Method::PowerCommutator,
            _ => Method::SplitExtension,
        };
        ChiralityVerdict::achiral(method, self.data)
    }
}

/// Lazily enumerated automorphism list shared by the filters of one cascade.
pub struct AutCache<'a> {
    g: &'a FiniteGroup,
    cap: u64,
    auts: Option<std::result::Result<Vec<Automorphism>, String>>,
}

impl<'a> AutCache<'a> {
    pub fn new(g: &'a FiniteGroup, limits: &Limits) -> Self {
        AutCache {
            g,
            cap: limits.automorphism_cap,
            auts: None,
        }
    }

    pub fn get(&mut self) -> Result<&[Automorphism]> {
        let g = self.g;
        let cap = self.cap;
        let entry = self
            .auts
            .get_or_insert_with(|| enumerate_automorphisms(g, cap).map_err(|e| e.to_string()));
        match entry {
            Ok(v) => Ok(v),
            Err(_) => Err(Error::CapExceeded {
                what: "automorphism count".into(),
                cap,
            }),
        }
    }
}

/// Collects the automorphisms a certificate refers to, deduplicated.
#[derive(Default)]
struct AutTable(IndexSet<Vec<Elem>>);

impl AutTable {
    fn add(&mut self, images: Vec<Elem>) -> usize {
        self.0.insert_full(images).0
    }

    fn into_vec(self) -> Vec<Vec<Elem>> {
        self.0.into_iter().collect()
    }
}

/// An automorphism sending `x` to `x^-1`, preferring an inner one.
fn inverting_automorphism(
    g: &FiniteGroup,
    x: Elem,
    cache: &mut AutCache,
) -> Result<Option<Vec<Elem>>> {
    if let Some(h) = conjugate_to_inverse(g, x) {
        return Ok(Some(inner_automorphism(g, h).images));
    }
    let auts = cache.get()?;
    Ok(auts
        .iter()
        .find(|a| a.apply(x) == g.inverse(x))
        .map(|a| a.images.clone()))
}

/// Certifies achirality when every element is automorphic to its inverse.
pub fn automorphic_to_inverse_filter(
    g: &FiniteGroup,
    cache: &mut AutCache,
) -> Result<Option<FilterCertificate>> {
    let mut table = AutTable::default();
    let mut witness = Vec::with_capacity(g.order());
    for x in g.elements() {
        match inverting_automorphism(g, x, cache)? {
            Some(images) => witness.push(table.add(images)),
            None => return Ok(None),
        }
    }
    Ok(Some(FilterCertificate::new(
        Method::AutInverse,
        Certificate::AutInverse {
            automorphisms: table.into_vec(),
            witness,
        },
    )))
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|k| n % k == 0).collect()
}

/// `G^k G'` minus `G^k`, where `G^k` is the set of `k`-th powers.
pub fn power_layer(g: &FiniteGroup, derived: &ElementSet, k: u64) -> ElementSet {
    let powers = g.power_image_set(k as i64);
    let mut product = ElementSet::empty(g.order());
    for a in powers.iter() {
        for c in derived.iter() {
            product.insert(g.mul(a, c));
        }
    }
    product.difference(&powers)
}

/// Certifies achirality when, for every divisor `k` of the exponent, each
/// element of `G^k G' \ G^k` is automorphic to its inverse.
pub fn power_commutator_filter(
    g: &FiniteGroup,
    cache: &mut AutCache,
) -> Result<Option<FilterCertificate>> {
    let derived = derived_subgroup(g).elements;
    let exponent = g.exponent();
    let mut table = AutTable::default();
    let mut layers = Vec::new();
    for k in divisors(exponent) {
        let layer = power_layer(g, &derived, k);
        let mut automorphism = Vec::with_capacity(layer.len());
        for x in layer.iter() {
            match inverting_automorphism(g, x, cache)? {
                Some(images) => automorphism.push(table.add(images)),
                None => return Ok(None),
            }
        }
        layers.push(PowerLayer {
            k,
            elements: layer.to_vec(),
            automorphism,
        });
    }
    Ok(Some(FilterCertificate::new(
        Method::PowerCommutator,
        Certificate::PowerCommutator {
            exponent,
            automorphisms: table.into_vec(),
            layers,
        },
    )))
}

/// An explicit split decomposition `G = N ⋊ H` to try before discovery.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub normal: SubgroupData,
    pub complement: SubgroupData,
}

/// Runs the abelian check, the automorphic-to-inverse filter, the
/// power-commutator filter and the split-extension filter, returning the
/// first certificate found or `unknown` listing what was tried.
pub fn filter_cascade(
    g: &FiniteGroup,
    hints: &[Decomposition],
    limits: &Limits,
) -> ChiralityVerdict {
    if g.is_abelian() {
        return ChiralityVerdict::achiral(Method::Abelian, Certificate::Abelian);
    }
    let mut cache = AutCache::new(g, limits);
    let mut tried = vec!["abelian".to_string()];

    match automorphic_to_inverse_filter(g, &mut cache) {
        Ok(Some(c)) => return c.into_verdict(),
        Ok(None) => tried.push("aut-inverse".into()),
        Err(e) => tried.push(format!("aut-inverse ({e})")),
    }
    match power_commutator_filter(g, &mut cache) {
        Ok(Some(c)) => return c.into_verdict(),
        Ok(None) => tried.push("power-commutator".into()),
        Err(e) => tried.push(format!("power-commutator ({e})")),
    }
    match split_extension_search(g, hints, &mut cache, limits) {
        Ok(Some(c)) => return c.into_verdict(),
        Ok(None) => tried.push("split-extension".into()),
        Err(e) => tried.push(format!("split-extension ({e})")),
    }
    ChiralityVerdict::unknown(
        Method::FiltersInconclusive,
        Certificate::Inconclusive { tried },
    )
}

/// Tries the given decompositions, then every abelian normal subgroup that
/// has a complement.
fn split_extension_search(
    g: &FiniteGroup,
    hints: &[Decomposition],
    cache: &mut AutCache,
    limits: &Limits,
) -> Result<Option<FilterCertificate>> {
    for hint in hints {
        if let Some(c) = try_decomposition(g, &hint.normal, &hint.complement, cache, limits)? {
            return Ok(Some(c));
        }
    }
    let normals = normal_subgroups(g, limits)?;
    for n in normals
        .iter()
        .filter(|n| n.order() > 1 && n.order() < g.order() && n.is_abelian(g))
    {
        let Some(h) = find_complement(g, n) else {
            continue;
        };
        if let Some(c) = try_decomposition(g, n, &h, cache, limits)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

fn try_decomposition(
    g: &FiniteGroup,
    n: &SubgroupData,
    h: &SubgroupData,
    cache: &mut AutCache,
    limits: &Limits,
) -> Result<Option<FilterCertificate>> {
    let (hg, _) = crate::group::subgroup_as_group(g, h);
    let h_verdict = cascade_then_engine(&hg, limits);
    if !h_verdict.is_achiral() {
        return Ok(None);
    }
    let auts = cache.get()?;
    match split_extension_certificate(g, n, h, &h_verdict, auts) {
        Ok(c) => Ok(c),
        Err(Error::Hypothesis(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Filters first; if they are inconclusive, the exhaustive engine.
pub fn cascade_then_engine(g: &FiniteGroup, limits: &Limits) -> ChiralityVerdict {
    let v = filter_cascade(g, &[], limits);
    if v.status != Status::Unknown {
        return v;
    }
    decide_chirality(g, limits)
}

/// Whether `g` is chiral with every proper quotient achiral.
///
/// `Ok(None)` means some quotient could not be decided. A quotient is first
/// tested against the evidence's witness word, then by the cascade, then
/// exhaustively.
pub fn is_minimal_chiral(
    g: &FiniteGroup,
    evidence: &ChiralityVerdict,
    limits: &Limits,
) -> Result<Option<bool>> {
    let Some((word, _)) = evidence.witness().filter(|_| evidence.is_chiral()) else {
        return Err(Error::Precondition(
            "minimality needs a chiral verdict with a witness".into(),
        ));
    };
    let mut undecided = false;
    for n in normal_subgroups(g, limits)?.iter().filter(|n| n.order() > 1) {
        let q = quotient(g, n)?.group;
        if let Ok(img) = image_with_limits(word, &q, limits) {
            if !is_inversion_closed(&img, &q) {
                return Ok(Some(false));
            }
        }
        match cascade_then_engine(&q, limits).status {
            Status::Chiral => return Ok(Some(false)),
            Status::Achiral => {}
            Status::Unknown => undecided = true,
        }
    }
    Ok(if undecided { None } else { Some(true) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral, from_permutations, subgroup_generated};

    fn s3() -> FiniteGroup {
        from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
    }

    #[test]
    fn cascade_methods() {
        let lim = Limits::default();
        assert_eq!(filter_cascade(&cyclic(12), &[], &lim).method, Method::Abelian);
        let d10 = filter_cascade(&dihedral(5), &[], &lim);
        assert_eq!(d10.method, Method::AutInverse);
        assert!(d10.is_achiral());
        assert!(filter_cascade(&dihedral(4), &[], &lim).is_achiral());
    }

    #[test]
    fn power_layers_of_s3() {
        let g = s3();
        let derived = derived_subgroup(&g).elements;
        assert_eq!(divisors(g.exponent()), vec![1, 2, 3, 6]);
        // k = 2: squares are the rotations, so nothing new
        assert!(power_layer(&g, &derived, 2).is_empty());
        // k = 6: G^6 = {1}, layer is the two 3-cycles
        assert_eq!(power_layer(&g, &derived, 6).len(), 2);
        let mut cache = AutCache::new(&g, &Limits::default());
        assert!(power_commutator_filter(&g, &mut cache).unwrap().is_some());
        let c6 = cyclic(6);
        let mut cache = AutCache::new(&c6, &Limits::default());
        let cert = power_commutator_filter(&c6, &mut cache).unwrap().unwrap();
        let Certificate::PowerCommutator { layers, .. } = cert.data else {
            panic!()
        };
        assert!(layers.iter().all(|l| l.elements.is_empty()));
    }

    #[test]
    fn minimality_needs_chiral_evidence() {
        let g = s3();
        let v = cascade_then_engine(&g, &Limits::default());
        assert!(matches!(
            is_minimal_chiral(&g, &v, &Limits::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn split_on_s3() {
        let g = s3();
        let r = g.elements().find(|&x| g.element_order(x) == 3).unwrap();
        let s = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
        let n = subgroup_generated(&g, &[r]);
        let h = subgroup_generated(&g, &[s]);
        let hint = Decomposition {
            normal: n,
            complement: h,
        };
        let lim = Limits::default();
        let mut cache = AutCache::new(&g, &lim);
        let c = split_extension_search(&g, &[hint], &mut cache, &lim).unwrap().unwrap();
        assert_eq!(c.filter_name, "split-extension");
    }
}
