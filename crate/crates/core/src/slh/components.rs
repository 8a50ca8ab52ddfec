//! Primitive one-port components.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operator::{c, embed, CMatrix, Operator, C64};
use crate::space::{make_space, HilbertSpace};
use crate::slh::triplet::{concatenate, SlhTriplet};

/// Waveguide delay as a pure phase: `(e^{i phi}, 0, 0)`.
pub fn phase_shifter(phi: f64) -> SlhTriplet {
    let space = Arc::new(HilbertSpace::trivial());
    SlhTriplet::new(
        space.clone(),
        CMatrix::from_element(1, 1, C64::from_polar(1.0, phi)),
        vec![Operator::zero(&space)],
        Operator::zero(&space),
    )
    .expect("phase shifter is a valid triplet")
}

/// Point coupling of a lowering operator to one propagation direction:
/// `(1, sqrt(kappa_half) lower, 0)`, where `kappa_half` is the emission rate
/// into this direction. Bare Hamiltonians are attached separately with
/// [`SlhTriplet::with_bare_hamiltonian`].
pub fn coupling_point(label: &str, lower: &CMatrix, kappa_half: f64) -> Result<SlhTriplet> {
    if kappa_half < 0.0 || !kappa_half.is_finite() {
        return Err(Error::NegativeRate(kappa_half));
    }
    let space = Arc::new(make_space(&[(label, lower.nrows())])?);
    let l = embed(lower, label, &space)?.scale(c(kappa_half.sqrt(), 0.0));
    SlhTriplet::new(space.clone(), CMatrix::identity(1, 1), vec![l], Operator::zero(&space))
}

/// Coherent source `(1, beta, 0)`. `|beta|^2` is the photon flux in
/// photons/ns.
pub fn coherent_drive(beta: C64) -> SlhTriplet {
    let space = Arc::new(HilbertSpace::trivial());
    SlhTriplet::new(
        space.clone(),
        CMatrix::identity(1, 1),
        vec![Operator::identity(&space).scale(beta)],
        Operator::zero(&space),
    )
    .expect("coherent drive is a valid triplet")
}

/// `n_ports`-wide source driving only `port`; the other ports see vacuum.
pub fn drive_on_port(n_ports: usize, port: usize, beta: C64) -> Result<SlhTriplet> {
    if port >= n_ports {
        return Err(Error::InvalidArgument(format!("port {port} out of range for {n_ports} ports")));
    }
    let mut g = SlhTriplet::vacuum();
    for p in 0..n_ports {
        let piece = if p == port { coherent_drive(beta) } else { SlhTriplet::identity() };
        g = concatenate(&g, &piece)?;
    }
    Ok(g)
}
