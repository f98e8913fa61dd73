//! Weights on the star, the functionals σ_j of the generator, and the star quadrature.

mod functional;
mod star_quadrature;
mod weights;

pub use functional::{sigma_apply, Contour, ContourNode, PoleAtom, SpectralFunctional, MAX_NODES};
pub(crate) use functional::column_parts;
pub use star_quadrature::{star_quadrature, QuadratureRule};
pub use weights::{markov_residual, rotated_moment, star_density, weight_rho, weight_rho_j};
