//! Network builders for the giant-atom and reflective JQF devices, each
//! composed from primitives, plus closed-form counterparts used as oracles.
//!
//! Propagation chains are listed in the order the field visits them. Bare
//! Hamiltonians are attached to the first element of the first chain only.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use crate::error::Result;
use crate::operator::{c, embed, ladder, sigma_z, CMatrix, Operator, C64};
use crate::slh::components::{coupling_point, phase_shifter};
use crate::slh::params::SystemParams;
use crate::slh::triplet::{cascade, concatenate, SlhTriplet};
use crate::space::{make_space, HilbertSpace};

pub const JQF: &str = "jqf";
pub const QUBIT: &str = "q";
pub const RESONATOR: &str = "r";

/// `|qubit, JQF>` two-level space of the simplified and reflective models.
pub fn two_emitter_space() -> Arc<HilbertSpace> {
    Arc::new(make_space(&[(QUBIT, 2), (JQF, 2)]).unwrap())
}

pub fn jqf_space() -> Arc<HilbertSpace> {
    Arc::new(make_space(&[(JQF, 2)]).unwrap())
}

/// `|JQF, qubit, resonator>` space of the full device.
pub fn device_space(params: &SystemParams) -> Result<Arc<HilbertSpace>> {
    let t = params.truncation;
    Ok(Arc::new(make_space(&[(JQF, t.jqf), (QUBIT, t.qubit), (RESONATOR, t.resonator)])?))
}

fn op(space: &Arc<HilbertSpace>, local: &CMatrix, label: &str) -> Operator {
    embed(local, label, space).expect("label exists in builder space")
}

fn lower(space: &Arc<HilbertSpace>, label: &str) -> Operator {
    Operator::lowering(space, label).expect("label exists in builder space")
}

fn real(x: f64) -> C64 {
    c(x, 0.0)
}

/// `(omega - frame) sigma_z / 2` for a two-level subsystem.
fn tls_hamiltonian(space: &Arc<HilbertSpace>, label: &str, omega: f64, frame: f64) -> Operator {
    op(space, &sigma_z(), label).scale(real((omega - frame) / 2.0))
}

/// Bare Hamiltonian of the qubit and JQF as two-level systems.
pub fn bare_hamiltonian_two_emitter(params: &SystemParams, space: &Arc<HilbertSpace>) -> Operator {
    let f = params.frame_freq;
    &tls_hamiltonian(space, JQF, params.omega_j, f) + &tls_hamiltonian(space, QUBIT, params.omega_q, f)
}

/// Bare Hamiltonian of JQF + transmon + readout resonator:
/// `omega_j sz/2 + omega_q b^dag b + alpha b^dag b^dag b b + omega_r a^dag a
///  + g (a b^dag + b a^dag)`, every frequency taken relative to the frame.
pub fn bare_hamiltonian_device(params: &SystemParams, space: &Arc<HilbertSpace>) -> Operator {
    let f = params.frame_freq;
    let b = lower(space, QUBIT);
    let a = lower(space, RESONATOR);
    let bd = b.adjoint();
    let ad = a.adjoint();
    let nb = &bd * &b;
    let kerr = &(&bd * &bd) * &(&b * &b);
    let mut h = tls_hamiltonian(space, JQF, params.omega_j, f);
    h += &nb.scale(real(params.omega_q - f));
    h += &kerr.scale(real(params.alpha));
    h += &(&ad * &a).scale(real(params.omega_r - f));
    h += &(&(&a * &bd) + &(&b * &ad)).scale(real(params.g_qr));
    h
}

fn sigma_minus() -> CMatrix {
    ladder(2).unwrap()
}

/// JQF alone, coupled at two points separated by the phase `2 phi`.
pub fn build_giant_jqf(params: &SystemParams) -> Result<SlhTriplet> {
    let space = jqf_space();
    let sm = sigma_minus();
    let h = tls_hamiltonian(&space, JQF, params.omega_j, params.frame_freq);
    let point = || coupling_point(JQF, &sm, params.kappa_j / 2.0);
    let gap = phase_shifter(2.0 * params.phi);
    let right = cascade(&[point()?.with_bare_hamiltonian(&h, &[JQF])?, gap.clone(), point()?])?;
    let left = cascade(&[point()?, gap, point()?])?;
    concatenate(&right, &left)?.align_to(&space)
}

/// Simplified giant atom: JQF point, delay `phi`, qubit point, delay `phi`,
/// JQF point, once per propagation direction, concatenated.
pub fn build_giant_atom_simplified(params: &SystemParams) -> Result<SlhTriplet> {
    let space = two_emitter_space();
    let sm = sigma_minus();
    let h = bare_hamiltonian_two_emitter(params, &space);
    let jqf = || coupling_point(JQF, &sm, params.kappa_j / 2.0);
    let qubit = || coupling_point(QUBIT, &sm, params.kappa_q / 2.0);
    let leg = phase_shifter(params.phi);
    let right = cascade(&[
        jqf()?.with_bare_hamiltonian(&h, &[QUBIT, JQF])?,
        leg.clone(),
        qubit()?,
        leg.clone(),
        jqf()?,
    ])?;
    let left = cascade(&[jqf()?, leg.clone(), qubit()?, leg, jqf()?])?;
    concatenate(&right, &left)?.align_to(&space)
}

/// Full device: the readout resonator couples at the midpoint between the
/// two JQF points. Port 0 carries the right-going field (left leg first),
/// port 1 the left-going field.
pub fn build_full_giant_atom(params: &SystemParams) -> Result<SlhTriplet> {
    params.validate()?;
    let space = device_space(params)?;
    let sm = sigma_minus();
    let a_local = ladder(params.truncation.resonator)?;
    let h = bare_hamiltonian_device(params, &space);
    let jqf = || coupling_point(JQF, &sm, params.kappa_j / 2.0);
    let res = || coupling_point(RESONATOR, &a_local, params.kappa_r / 2.0);
    let left_leg = phase_shifter(params.phi_left());
    let right_leg = phase_shifter(params.phi_right());
    let rightward = cascade(&[
        jqf()?.with_bare_hamiltonian(&h, &[JQF, QUBIT, RESONATOR])?,
        left_leg.clone(),
        res()?,
        right_leg.clone(),
        jqf()?,
    ])?;
    let leftward = cascade(&[jqf()?, right_leg, res()?, left_leg, jqf()?])?;
    concatenate(&rightward, &leftward)?.align_to(&space)
}

/// Reflective JQF: the field passes the JQF, a delay `phi`, the qubit, a
/// perfect mirror, the qubit again, the delay and the JQF again, then leaves
/// through the single port.
pub fn build_reflective_jqf(params: &SystemParams) -> Result<SlhTriplet> {
    let space = two_emitter_space();
    let sm = sigma_minus();
    let h = bare_hamiltonian_two_emitter(params, &space);
    let jqf = || coupling_point(JQF, &sm, params.kappa_j / 2.0);
    let qubit = || coupling_point(QUBIT, &sm, params.kappa_q / 2.0);
    let leg = phase_shifter(params.phi);
    let mirror = SlhTriplet::identity();
    cascade(&[
        jqf()?.with_bare_hamiltonian(&h, &[QUBIT, JQF])?,
        leg.clone(),
        qubit()?,
        mirror,
        qubit()?,
        leg,
        jqf()?,
    ])?
    .align_to(&space)
}

fn closed_form(
    space: &Arc<HilbertSpace>,
    scattering: CMatrix,
    coupling: Vec<Operator>,
    h: &Operator,
    owners: &[&str],
) -> Result<SlhTriplet> {
    SlhTriplet::new(space.clone(), scattering, coupling, Operator::zero(space))?.with_bare_hamiltonian(h, owners)
}

/// Resonant, `phi = pi` simplified giant atom:
/// `S = 1`, both ports `L = sqrt(2 kappa_j) s_j - sqrt(kappa_q/2) s_q`,
/// `H = omega_j sz_j/2 + omega_q sz_q/2`.
pub fn closed_form_giant_atom(params: &SystemParams) -> Result<SlhTriplet> {
    let space = two_emitter_space();
    let sj = lower(&space, JQF);
    let sq = lower(&space, QUBIT);
    let l = &sj.scale(real((2.0 * params.kappa_j).sqrt())) - &sq.scale(real((params.kappa_q / 2.0).sqrt()));
    let h = bare_hamiltonian_two_emitter(params, &space);
    closed_form(&space, CMatrix::identity(2, 2), vec![l.clone(), l], &h, &[QUBIT, JQF])
}

/// Full device triplet for arbitrary `(phi1, phi2)`.
pub fn closed_form_full_giant_atom(params: &SystemParams) -> Result<SlhTriplet> {
    params.validate()?;
    let space = device_space(params)?;
    let (p1, p2) = (params.phi1, params.phi2);
    let sj = lower(&space, JQF);
    let a = lower(&space, RESONATOR);
    let sqrt_kr = params.kappa_r.sqrt();
    let sqrt_kj = params.kappa_j.sqrt();
    let jqf_amp = (real(1.0) + C64::from_polar(1.0, 2.0 * p1)) * sqrt_kj;
    let port = |phase: f64| {
        (&a.scale(C64::from_polar(sqrt_kr, phase)) + &sj.scale(jqf_amp)).scale(real(1.0 / SQRT_2))
    };
    let l = vec![port(p1 - p2 / 2.0), port(p1 + p2 / 2.0)];
    let s = C64::from_polar(1.0, 2.0 * p1);
    let scattering = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![s, s]));

    let mut shifted = params.clone();
    shifted.omega_j += (2.0 * p1).sin() * params.kappa_j;
    let mut h = bare_hamiltonian_device(&shifted, &space);
    let exchange = p1.sin() * (p2 / 2.0).cos() * (params.kappa_j * params.kappa_r).sqrt();
    h += &(&(&sj * &a.adjoint()) + &(&a * &sj.adjoint())).scale(real(exchange));
    closed_form(&space, scattering, l, &h, &[JQF, QUBIT, RESONATOR])
}

/// Resonant, `phi = pi` reflective JQF: `S = e^{2 i phi}`,
/// `L = sqrt(2) (-sqrt(kappa_q) s_q + sqrt(kappa_j) s_j)`, bare H.
pub fn closed_form_reflective(params: &SystemParams) -> Result<SlhTriplet> {
    let space = two_emitter_space();
    let sj = lower(&space, JQF);
    let sq = lower(&space, QUBIT);
    let l = (&sj.scale(real(params.kappa_j.sqrt())) - &sq.scale(real(params.kappa_q.sqrt()))).scale(real(SQRT_2));
    let h = bare_hamiltonian_two_emitter(params, &space);
    let s = CMatrix::from_element(1, 1, C64::from_polar(1.0, 2.0 * params.phi));
    closed_form(&space, s, vec![l], &h, &[QUBIT, JQF])
}
