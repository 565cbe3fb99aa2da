//! Three-valued chirality verdicts and the certificates backing them.
//!
//! Every certificate is replayable: [`crate::verify`] rechecks it against the
//! group without calling the code that produced it.

use serde::{Deserialize, Serialize};

use crate::group::Elem;
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Chiral,
    Achiral,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "abelian")]
    Abelian,
    #[serde(rename = "aut-inverse")]
    AutInverse,
    #[serde(rename = "power-commutator")]
    PowerCommutator,
    #[serde(rename = "split-extension")]
    SplitExtension,
    #[serde(rename = "neumann-exhaustive")]
    NeumannExhaustive,
    #[serde(rename = "family-witness")]
    FamilyWitness,
    #[serde(rename = "word-witness")]
    WordWitness,
    #[serde(rename = "filters-inconclusive")]
    FiltersInconclusive,
    #[serde(rename = "resource-limit")]
    ResourceLimit,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Abelian => "abelian",
            Method::AutInverse => "aut-inverse",
            Method::PowerCommutator => "power-commutator",
            Method::SplitExtension => "split-extension",
            Method::NeumannExhaustive => "neumann-exhaustive",
            Method::FamilyWitness => "family-witness",
            Method::WordWitness => "word-witness",
            Method::FiltersInconclusive => "filters-inconclusive",
            Method::ResourceLimit => "resource-limit",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// One divisor `k` of the exponent in a power-commutator certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerLayer {
    pub k: u64,
    /// Elements of `G^k G' \ G^k`.
    pub elements: Vec<Elem>,
    /// For each element, the index of an automorphism sending it to its inverse.
    pub automorphism: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// `element` lies in the image of `word` and its inverse does not.
    Witness { word: Word, element: Elem },
    Abelian,
    /// `witness[x]` indexes an automorphism sending `x` to `x^-1`.
    AutInverse {
        automorphisms: Vec<Vec<Elem>>,
        witness: Vec<usize>,
    },
    PowerCommutator {
        exponent: u64,
        automorphisms: Vec<Vec<Elem>>,
        layers: Vec<PowerLayer>,
    },
    /// `G = N ⋊ H`, `N` abelian; every element is sent into `N ∪ H` by `landing[g] = (aut, image)`.
    SplitExtension {
        normal: Vec<Elem>,
        complement: Vec<Elem>,
        inversion: Vec<Elem>,
        automorphisms: Vec<Vec<Elem>>,
        landing: Vec<(usize, Elem)>,
        /// Verdict for `H` as an abstract group; ids are positions in `complement`.
        complement_verdict: Box<ChiralityVerdict>,
    },
    /// Every word map in `W(G)` on `d` variables was checked.
    Exhaustive { d: usize, maps: u64 },
    Resource { reason: String, explored_maps: u64 },
    Inconclusive { tried: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiralityVerdict {
    pub status: Status,
    pub method: Method,
    pub certificate: Certificate,
}

impl ChiralityVerdict {
    pub fn achiral(method: Method, certificate: Certificate) -> Self {
        ChiralityVerdict {
            status: Status::Achiral,
            method,
            certificate,
        }
    }

    pub fn chiral(method: Method, word: Word, element: Elem) -> Self {
        ChiralityVerdict {
            status: Status::Chiral,
            method,
            certificate: Certificate::Witness { word, element },
        }
    }

    pub fn unknown(method: Method, certificate: Certificate) -> Self {
        ChiralityVerdict {
            status: Status::Unknown,
            method,
            certificate,
        }
    }

    pub fn is_chiral(&self) -> bool {
        self.status == Status::Chiral
    }

    pub fn is_achiral(&self) -> bool {
        self.status == Status::Achiral
    }

    /// The witness word and element of a chiral verdict.
    pub fn witness(&self) -> Option<(&Word, Elem)> {
        match &self.certificate {
            Certificate::Witness { word, element } => Some((word, *element)),
            _ => None,
        }
    }
}
