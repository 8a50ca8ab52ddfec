//! Shared fixtures for the criterion benches.

use slhnet::analysis::dressed_qubit_frequency;
use slhnet::slh::SystemParams;
use slhnet::units::mhz;

/// Giant-atom chip with the JQF on the dressed qubit line.
pub fn working_point() -> SystemParams {
    let mut p = SystemParams::giant_atom_chip();
    p.omega_j = dressed_qubit_frequency(p.omega_q, p.omega_r, p.g_qr, p.kappa_r).expect("chip has a qubit mode");
    p
}

/// Same chip with the JQF parked 88 MHz above the qubit.
pub fn detuned_point() -> SystemParams {
    let mut p = SystemParams::giant_atom_chip();
    p.omega_j = mhz(5100.0);
    p
}
