pub mod arith;
pub mod cli;
pub mod error;
pub mod field;
pub mod groebner;
pub mod io_elim;
pub mod model;
pub mod reparam;
pub mod witness;

pub use error::{Error, Result};
