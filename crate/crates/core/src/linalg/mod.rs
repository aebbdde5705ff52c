pub mod matrix;
pub mod upoly;

pub use matrix::QMatrix;
pub use upoly::{char_poly, rational_eigen, rational_roots, UPoly};
