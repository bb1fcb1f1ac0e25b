//! Finite latin quandles of 2-power order: affine quandles over abelian
//! 2-groups, central extensions by cocycles, Onoi rings and mappings, a
//! linear-system solver for the left-distributivity cocycle conditions, and
//! an exhaustive search over extension bases.

pub mod algebra;
pub mod extensions;
pub mod onoi;
pub mod oracle;
pub mod quandle;
pub mod search;
pub mod solver;

pub use algebra::{AbelianGroup2, EndoMatrix, GroupElement, ModMatrix};
pub use extensions::{build_extension, Cocycle, ExtensionSpec};
pub use onoi::{OnoiMapping, OnoiRing};
pub use quandle::{affine_quandle, is_isomorphic, MagmaTable};
pub use search::{search, QuandleLibrary, SearchReport};
pub use solver::LdSystem;
