//! Resource caps shared by the enumeration routines.
//!
//! Every cap has a default but can be overridden per call; the CLI wires
//! them to flags and `VERBA_*` environment variables.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest group a permutation closure may produce.
    pub order_cap: u64,
    /// Largest group for which an `n x n` table is materialised.
    pub table_order_cap: u64,
    /// Maximum number of word maps kept while building `W(G)`.
    pub map_cap: u64,
    /// Maximum number of input tuples (`|G|^d`) for images and word maps.
    pub tuple_budget: u64,
    /// Memory ceiling, in bytes, for stored word-map value arrays.
    pub map_memory: u64,
    /// Maximum number of automorphisms enumerated.
    pub automorphism_cap: u64,
    /// Largest group on which normal subgroups are enumerated.
    pub normal_subgroup_order_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            order_cap: 1_000_000,
            table_order_cap: 8192,
            map_cap: 10_000_000,
            tuple_budget: 100_000_000,
            map_memory: 2 << 30,
            automorphism_cap: 200_000,
            normal_subgroup_order_cap: 2048,
        }
    }
}
