pub mod brieskorn;
pub mod error;
pub mod hodge;
pub mod linalg;
pub mod parse;
pub mod pipeline;
pub mod ring;
pub mod saturation;
pub mod smodule;
pub mod stdbasis;
pub mod vstructure;

pub use error::{Error, Result};
