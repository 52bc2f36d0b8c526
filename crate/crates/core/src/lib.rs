//! Exact dominating-set algorithms for geometric intersection graphs.
//!
//! The crate covers translates of one-dimensional point/interval patterns,
//! unit disk graphs, and translates of polygons, together with generators
//! for the hardness constructions that accompany them.

pub mod error;
pub mod exactnum;
pub mod geom2d;
pub mod graphcore;
pub mod pattern1d;
pub mod solver1d;
pub mod constructions;
pub mod diskdom;
pub mod squarelike;
pub mod suite;

pub use error::{Error, Result};
pub use exactnum::{QuadNum, Rational, SqrtExpr};
