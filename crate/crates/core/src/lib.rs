//! Certified norm bounds in free Banach lattices `FBL[E]` over
//! finite-dimensional spaces `E`.
//!
//! Elements of `FBL[E]` are represented by lattice expressions over the
//! evaluations `δ_x`; their norms are bracketed by admissible dual tuples
//! (lower side) and by structural recursion or the cube-sphere
//! representation of `FBL[l1(n)]` (upper side).

pub mod c_of_k;
pub mod canonical;
pub mod dual_functionals;
pub mod error;
pub mod experiments;
pub mod fbl_norm;
pub mod lattice_expr;
pub mod lp;
pub mod rng;
pub mod spaces;
pub mod vector;

pub use dual_functionals::DualFunctional;
pub use error::{FblError, Result};
pub use fbl_norm::{DualTuple, NormCertificate};
pub use lattice_expr::LatticeExpr;
pub use spaces::{OperatorPair, Side, SpaceDescriptor, SpaceKind, SpaceModel};
