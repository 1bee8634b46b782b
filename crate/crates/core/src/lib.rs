//! Exact computations for topological partial actions of finite groups on
//! finite topological spaces.
//!
//! The crate validates partial-action axioms, builds the enveloping space
//! `X_G = (G×X)/R` with its quotient topology, enveloping action and
//! embedding, evaluates Vaught transforms through a finite Baire-category
//! oracle, and constructs selectors, transversals and the transversal-induced
//! topology on `X_G`, checking the Borel-structure and reducibility claims
//! exhaustively on each instance.
//!
//! Points, group elements and pairs are dense indices; sets of them are
//! [`Subset`] bitmasks, which caps every space (including `G×X` and `X×X`)
//! at 64 points.

pub mod cli;
pub mod error;
pub mod globalize;
pub mod group;
pub mod paction;
pub mod relation;
pub mod report;
pub mod selector;
pub mod spec;
pub mod subset;
pub mod topology;
pub mod vaught;

pub use error::{Error, Result};
pub use globalize::Globalization;
pub use group::{Elem, FiniteGroup};
pub use paction::{PartialAction, TotalAction, Validation};
pub use relation::EqRel;
pub use report::{Check, Outcome};
pub use selector::{BorelReport, SelectorMap};
pub use subset::Subset;
pub use topology::{FinTop, SetAlgebra, SetFamily};
