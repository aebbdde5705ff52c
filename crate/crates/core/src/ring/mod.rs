pub mod monomial;
pub mod poly;
pub mod rational;

pub use monomial::{Monomial, MonomialOrder, WeightedDegree};
pub use poly::LocalPoly;
pub use rational::Rational;
