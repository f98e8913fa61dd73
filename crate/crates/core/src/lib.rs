#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebraic;
pub mod error;
pub mod model;
pub mod polynomials;
pub mod operators;
pub mod oracle;
mod quad;
mod roots;
pub mod spectral;
pub mod transition;

pub use error::{Error, Result};
pub use model::QueueParams;
pub use num_complex::Complex64;
