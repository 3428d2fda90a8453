//! Frame starters in finite abelian groups.
//!
//! A frame starter in `G \ H` pairs up the elements of `G` outside a subgroup `H`
//! so that the pair differences `±(x - y)` cover `G \ H` exactly once. This crate
//! provides:
//!
//! - [`group`]: finite abelian groups in invariant-factor form, subgroups, quotients;
//! - [`field`]: `GF(p^k)` arithmetic used to build strong complete mappings;
//! - [`starter`]: the frame-starter data model and its verification predicates
//!   (frame, strong, orthogonal, adder);
//! - [`construct`]: patterned starters, strong complete mappings and the
//!   product / quotient-lifting constructions;
//! - [`feasibility`]: nonexistence rules and the cyclic-group classifier;
//! - [`search`]: randomized hill-climbing, exhaustive backtracking, orthogonal mate
//!   search and the cyclic survey driver;
//! - [`format`]: the line-oriented starter file format;
//! - [`corpus`]: published starters kept as golden files, and the self-test.

pub mod arith;
mod clock;
pub mod construct;
pub mod corpus;
mod error;
pub mod feasibility;
pub mod field;
pub mod format;
pub mod group;
pub mod search;
pub mod starter;

pub use construct::Scm;
pub use error::{Error, Result};
pub use feasibility::{Verdict, VerdictKind};
pub use field::{FieldElement, FiniteField};
pub use group::{Element, Group, QuotientView, Subgroup};
pub use search::{Mode, Outcome, SearchParams, SearchReport};
pub use starter::{Adder, FrameStarter, VerificationReport, Violation};
