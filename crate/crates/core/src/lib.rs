//! mackeykit-core: an exact-arithmetic engine for finite group actions,
//! span categories, permutation modules, cohomological Mackey functors and
//! equivariant chain complexes.
//!
//! Everything is computed over explicit Cayley tables with exact
//! coefficients (arbitrary-precision integers, rationals, prime fields and
//! residue rings), so all reported invariants are certificates rather than
//! approximations.

pub mod error;
pub mod ring;
pub mod matrix;
pub mod linalg;
pub mod group;
pub mod gset;
pub mod span;
pub mod perm;
pub mod mackey;
pub mod chains;
pub mod corpus;
pub mod suite;
pub mod io;

pub use error::{Error, Result};
