//! Master-equation dynamics generated by an SLH triplet.

pub mod dop853;
pub mod evolve;
pub mod liouvillian;
pub mod spectral;

pub use evolve::{evolve, propagate_exact, Propagator, SolverOptions, SolverStats, Trajectory};
pub use liouvillian::{lindblad_rhs, unvectorize, vectorize, Liouvillian, MAX_DENSE_DIM};
pub use spectral::{asymptotic_state, effective_hamiltonian, slowest_decay_mode, steady_state, DecayMode};
