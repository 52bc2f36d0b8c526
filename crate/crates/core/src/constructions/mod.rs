//! Generators for the hardness constructions, each paired with an exact check
//! of the property it is meant to have.

mod gadget;
mod splitpoly;
mod trigrid;
mod universal;

pub use gadget::*;
pub use splitpoly::*;
pub use trigrid::*;
pub use universal::*;
