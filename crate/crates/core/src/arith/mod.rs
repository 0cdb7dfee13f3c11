//! Exact arithmetic: rationals, sparse polynomials, reduced fractions, the
//! variable universe, canonical text, factoring and the algebraic tower.

pub mod factor;
pub mod gcd;
pub mod matrix;
pub mod mono;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod text;
pub mod tower;
pub mod universe;

pub use mono::Mono;
pub use poly::{MPoly, Poly};
pub use ratfunc::RatFunc;
pub use rational::{Coeff, Rational};
pub use tower::{reduce_mod_minpoly, FieldTower};
pub use universe::{Role, Var, VarUniverse};
