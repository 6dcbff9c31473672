//! Implication semigroups and zroupoids: terms, finite models, the lattice
//! of subvarieties of IS, exhaustive enumeration of small algebras and an
//! equational proof checker.

pub mod cli;
pub mod derivations;
pub mod enumerator;
pub mod lattice;
pub mod models;
pub mod terms;
pub mod varieties;
pub mod verify;

pub use lattice::{build_lattice, variety_lattice, Lattice, VarietyLattice};
pub use models::{builtin, FiniteAlgebra, ModelError};
pub use terms::{Identity, Mode, TreeTerm, Word};
pub use varieties::{decide, variety_of, VarietyId};
