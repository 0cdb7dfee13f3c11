//! Groebner bases over Q(parameters) and the ideal operations built on them.

pub mod buchberger;
pub mod ideal;
pub mod order;
pub mod split;

pub use ideal::{eliminate, groebner_basis, ideal_dimension, ideal_membership, saturate, GbOptions, GroebnerBasis, Ideal};
pub use order::MonomialOrder;
pub use split::{split_components, Component, SplitResult};
