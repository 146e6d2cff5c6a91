//! g-natural metrics on tangent bundles and the normal-bundle lift of a
//! submanifold, with numerical checks of the lift's Gauss–Weingarten identities.

pub mod bundle;
pub mod diffgeo;
pub mod error;
pub mod gnatural;
pub mod manifolds;
pub mod normal_lift;
pub mod sampling;
pub mod scenarios;
pub mod submanifold;
pub mod verify;

pub use error::{GeometryError, Result};
