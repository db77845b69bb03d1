//! Propositionally quantified modal logic over finite frames.
//!
//! Formulas quantify over sets of worlds drawn from an admissible family.
//! Besides a direct evaluator the crate computes duplicate classes of a frame
//! and uses them to eliminate quantifiers class by class.

pub mod axioms;
pub mod breakdown;
pub mod corpus;
pub mod diversity;
pub mod frames;
pub mod gallery;
pub mod io;
pub mod semantics;
pub mod syntax;
pub mod worldset;

pub use breakdown::{approx_equiv, breakdown, extend_witness, fast_extension, Breakdown};
pub use diversity::{are_duplicates, diversity, diversity_generated, DuplicateStructure, LocalKind};
pub use frames::{Admissible, GeneralFrame, KripkeFrame, Model};
pub use semantics::{extension, extension_full, holds_at, Valuation, Validity};
pub use syntax::{parse, Formula, Var};
pub use worldset::WorldSet;
