//! Finite ultrametric spaces: representing trees, ball graphs, isometry
//! groups, maximal rigidity and its graph-theoretic certificates.

#![allow(clippy::needless_range_loop)]

pub mod balls;
pub mod characterize;
pub mod dist;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod io;
pub mod isometry;
pub mod oracle;
pub mod report;
pub mod rigidity;
pub mod space;
pub mod tree;
pub mod weaksim;

pub use dist::Dist;
pub use error::{Error, Result};
pub use isometry::Isometry;
pub use space::{Kind, LevelGraph, Space, Validation};
pub use tree::{CanonCode, ReprTree, TreeShape, TreeSpec};
