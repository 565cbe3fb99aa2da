//! Deciding and certifying chirality of word-map images in finite groups.

pub mod error;
pub mod group;
pub mod limits;
pub mod words;
pub mod verdict;
pub mod engine;
pub mod filters;
pub mod family;
pub mod nilpotent;
pub mod verify;
pub mod corpus;

pub use error::{Error, Result};
pub use group::{ElementSet, Elem, FiniteGroup, SubgroupData};
pub use limits::Limits;
pub use words::{Word, WeightVector};
