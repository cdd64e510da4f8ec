//! Exact combinatorics of toric Fano surfaces and the torus reductions of
//! quaternionic spheres that produce them, with floating-point checks of
//! the associated potentials.

pub mod diamond;
pub mod error;
pub mod guillemin;
pub mod json;
pub mod lattice;
pub mod reduction;
pub mod toric;

pub use diamond::{weights_to_diamond, DiamondReport};
pub use error::{Error, Result};
pub use lattice::{ConvexLatticePolygon, IntMatrix, LatVec, RatVec, UnimodularMap};
pub use reduction::{IsotropyData, WeightMatrix};
pub use toric::{AugmentedFan, SupportFunction};
