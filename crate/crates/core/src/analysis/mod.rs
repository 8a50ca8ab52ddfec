//! Physics deliverables built on the network and dynamics layers.

pub mod dark;
pub mod fit;
pub mod purcell;
pub mod spectroscopy;
pub mod t1;

pub use dark::{dark_states, DarkState, DarkStateReport};
pub use fit::{fit_exponential, fit_lorentzian, ExpFit, LorentzFit};
pub use purcell::{dispersive_purcell_limit, dressed_qubit_frequency, purcell_limit, qubit_mode};
pub use spectroscopy::{
    dip_linewidth, emitter_decay_rate, photon_flux, power_dbm, saturation_curve, transmission, transmission_spectrum,
    SaturationPoint,
};
pub use t1::{check_excitation_conserving, t1_fit, t1_spectral, FitDiagnostics, T1Method, T1Result};
