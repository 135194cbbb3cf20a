//! Finite-dimensional complex linear algebra over labeled mode bases.
//!
//! States and operators carry their basis labels explicitly; every binary
//! operation checks that the ordered label sets agree instead of trusting
//! index positions. All values are immutable and freely shareable.

mod density;
mod label;
pub mod linalg;
mod operator;
pub mod random;
mod schmidt;
mod state;

pub use density::{fidelity_pure, DensityOperator};
pub use label::{BasisLabel, Oam, Path};
pub use operator::Operator;
pub use schmidt::{check_schmidt, schmidt_decompose, BipartiteShape, SchmidtDecomposition};
pub use state::{inner_product, tensor_product, StateVector};
