//! Exact computations for walls, Mori cones and monodromy of manifolds of
//! K3^[n] type.

pub mod arith;
pub mod error;
pub mod forms;
pub mod lattice;
pub mod monodromy;
pub mod mori;
pub mod orbits;
pub mod pell;
pub mod serde_big;
pub mod surd;
pub mod walls;

pub use error::{Error, Result};
