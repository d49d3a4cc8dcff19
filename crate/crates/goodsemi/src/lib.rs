//! Exact computations with value semigroups of plane algebroid curves.

pub mod apery;
pub mod branch;
pub mod error;
pub mod hn;
pub mod json;
pub mod point;
pub mod semigroup;
pub mod series;
pub mod transfer;
pub mod tree;
pub mod valuation;

pub use apery::{apery_set, partition_levels, AperySet, LevelPartition};
pub use error::{Error, Result};
pub use point::{Grid, Point};
pub use semigroup::{DeltaKind, GoodReport, GoodSemigroup};
