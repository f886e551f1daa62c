//! Exact analysis of finite point configurations on Segre varieties.
//!
//! The library computes linear-dependency invariants of finite subsets of a
//! multiprojective space P^{n_1} x ... x P^{n_k} under the Segre embedding:
//! the defect e(S), width, concision, circuit/dependency classification,
//! tensor ranks and decompositions of small tensors, the standard example
//! families with their construction-time invariant checks, and
//! enumeration/sampling verifiers for the classification statements those
//! families illustrate. All arithmetic is exact: prime fields GF(p) or
//! arbitrary-precision rationals — no floating point anywhere.

pub mod constructions;
pub mod dependence;
pub mod error;
pub mod io;
pub mod linalg;
pub mod multiproj;
pub mod theorems;

pub use error::{Error, Result};
pub use linalg::{FieldSpec, Scalar, ScalarMatrix};
pub use multiproj::{ConcisionHull, MultiPoint, MultiprojectiveSpace, PointSet, ProjPoint};
