//! Coordinate arithmetic in the free nilpotent groups `N_{2,3}` and `N_{3,2}`,
//! the inverting endomorphisms of the former and the non-inversion search
//! in quotients of the latter.

mod magnus;
pub mod n23;
pub mod n32;

pub use magnus::{magnus_evaluate, TruncatedSeries};
pub use n23::{
    apply_endomorphism, axis_reduce, inverting_matrix, verify_achirality_instance, IntMatrix2,
    N23Element,
};
pub use n32::{
    congruence_certificate, quotient_endomorphism_check, witness_search, witness_search_for,
    CongruenceCertificate, Moduli, N32Element, SearchMode, SearchOutcome, N32,
};
