//! SLH triplets and their composition.

pub mod builders;
pub mod components;
pub mod params;
pub mod triplet;

pub use builders::{
    build_full_giant_atom, build_giant_atom_simplified, build_giant_jqf, build_reflective_jqf,
    bare_hamiltonian_device, bare_hamiltonian_two_emitter, closed_form_full_giant_atom, closed_form_giant_atom,
    closed_form_reflective, device_space, jqf_space, two_emitter_space, JQF, QUBIT, RESONATOR,
};
pub use components::{coherent_drive, coupling_point, drive_on_port, phase_shifter};
pub use params::{phase_from_length, SystemParams, Truncation};
pub use triplet::{cascade, concatenate, series, triplet_distance, SlhTriplet};

#[cfg(test)]
mod tests;
