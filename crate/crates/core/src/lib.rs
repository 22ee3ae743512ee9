//! Intersecting antichains in the k-valued n-cube.
//!
//! The lower half of `E^n` maps bijectively onto `E^(n-1)` in a way that
//! preserves intersecting antichains in both directions. This crate provides
//! the cube primitives ([`cube`]), the map and its inverse ([`bijection`]),
//! clique-based enumeration, counting and maximization of intersecting
//! antichains ([`families`]), and an exhaustive checker ([`verify`]).

pub mod bijection;
pub mod bitset;
pub mod budget;
pub mod cli;
pub mod cube;
pub mod error;
pub mod families;
pub mod verify;

pub use bijection::{phi, phi_inverse};
pub use budget::Budget;
pub use cube::{CubeParams, LowerHalfSpec, Point, Variant};
pub use error::{Error, Result};
pub use families::{CompatGraph, Family};
