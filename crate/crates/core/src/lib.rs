//! Dimension estimates for attractors of projectivised unimodular
//! non-negative matrices acting on the standard simplex.
//!
//! Exact integer products live in [`words`], simplex and polytope geometry in
//! [`geometry`], the system and its holes in [`ifs`], the series and exponent
//! estimators in [`estimators`], and independent numerical checks in
//! [`oracles`]. Geometry is generic over [`Real`]; the aliases below fix it.

pub mod error;
pub mod estimators;
pub mod geometry;
pub mod ifs;
pub mod oracles;
pub mod render;
pub mod scalar;
pub mod words;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Simplex64 = geometry::Simplex<f64>;
pub type Simplex32 = geometry::Simplex<f32>;
pub type ConvexPolytope64 = geometry::ConvexPolytope<f64>;
pub type ConvexPolytope32 = geometry::ConvexPolytope<f32>;
pub type Frame64 = geometry::Frame<f64>;
pub type Frame32 = geometry::Frame<f32>;
pub type Halfspaces64 = geometry::Halfspaces<f64>;
