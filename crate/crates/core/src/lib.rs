//! Finite-field laboratory for random hypergraphs defined by Galois covers.
//!
//! The relation on `n`-subsets of a finite field is "the specialized
//! polynomial `g(T, a_1, …, a_n)` has a root". The crate builds the defining
//! polynomial families, evaluates the relation, and audits the Galois-theoretic
//! predictions (cycle-type statistics, discriminant squares, ramification data)
//! at finite scale.

pub mod arith;
pub mod cli;
pub mod combin;
pub mod construct;
pub mod error;
pub mod field;
pub mod galois;
pub mod hypergraph;
pub mod poly;
pub mod symfun;

pub use construct::{ConstructionParams, FamilyKind, GBuilder};
pub use error::{Error, ErrorKind, Result};
pub use field::{Field, FieldCtx, FieldElem, FieldSpec};
pub use poly::{DegreePattern, Factorization, Poly};
pub use symfun::PointSet;
