//! Exact first-order quantum moduli of rank-2 bundles on noncommutative
//! deformations of the local threefolds `W_1` and `W_2`.

pub mod bundles;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod moduli;
pub mod poisson;
pub mod ring;
pub mod sampling;

pub use error::{Error, Result};
