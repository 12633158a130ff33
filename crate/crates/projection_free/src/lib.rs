//! Projection-free methods that only touch the feasible set through its LMO
//! (or, for the nuclear-norm ball, through a randomized matrix-exponential
//! oracle on the spectrahedron).

mod boundary;
mod error;
mod gauge;
pub mod nuclear;
pub mod spectra;

pub use boundary::boundary_fw;
pub use error::ProjectionFreeError;
pub use gauge::{gauge_fw, GaugeFwConfig};
pub use learners::gauge_ftrl_plus_solve;
pub use nuclear::{eta_limit, nuclear_run, MSchedule, MatrixCompletion, NuclearConfig, NuclearOutput};
pub use spectra::{embed_gradient, psi_oracle, ExpHalf, SpectrahedronPoint};
