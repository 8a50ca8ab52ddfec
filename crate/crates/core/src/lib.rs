//! Cascaded open quantum networks in the SLH formalism: operator algebra on
//! labelled tensor-product spaces, network composition, Lindblad dynamics
//! and the giant-atom JQF analyses built on top of them.
//!
//! Units: angular frequencies and rates in rad/ns, times in ns, `hbar = 1`.
//! Reported lifetimes are in microseconds.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod operator;
pub mod slh;
pub mod space;
pub mod units;

pub use error::{Error, Result};
pub use operator::{
    embed, expectation, ladder, restrict_excitation, CMatrix, CVector, DensityMatrix, ExcitationSector, Operator, C64,
};
pub use slh::{SlhTriplet, SystemParams, Truncation};
pub use space::{make_space, HilbertSpace, Subsystem};
