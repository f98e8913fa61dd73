//! Reference engines that never touch the polynomials: uniformization of the truncated
//! generator, Picard iteration of the Kolmogorov equations, and discrete-event simulation.

mod cross;
mod montecarlo;
mod picard;
mod uniformization;

pub use cross::{cross_validate, CrossConfig, CrossReport, CrossRow};
pub use montecarlo::{simulate_mc, simulate_replication, McConfig, McResult};
pub use picard::{picard_propagate, picard_solve, PicardState};
pub use uniformization::{expm_uniformization, uniformization_rows, DenseMatrix, LEAK_THRESHOLD, MAX_SIZE};
