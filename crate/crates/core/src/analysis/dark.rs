//! States annihilated by every coupling operator.

use crate::error::Result;
use crate::operator::{c, CMatrix, CVector, C64};
use crate::slh::SlhTriplet;

/// Singular values below this are treated as exact zeros.
pub const NULL_SINGULAR_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct DarkState {
    /// Unit vector, phase fixed so that its largest component is real positive.
    pub vector: CVector,
    /// `|L_j psi|` per port.
    pub coupling_residuals: Vec<f64>,
    /// `|(H - <H>) psi|`; zero when the dark state is also stationary.
    pub hamiltonian_residual: f64,
    pub energy: f64,
    /// Basis-state label and amplitude for every non-negligible component.
    pub components: Vec<(String, C64)>,
}

impl DarkState {
    pub fn max_coupling_residual(&self) -> f64 {
        self.coupling_residuals.iter().cloned().fold(0.0, f64::max)
    }

    /// `|<basis|psi>|^2` for a flat basis index.
    pub fn weight(&self, index: usize) -> f64 {
        self.vector[index].norm_sqr()
    }
}

#[derive(Clone, Debug, Default)]
pub struct DarkStateReport {
    pub states: Vec<DarkState>,
}

fn fix_phase(v: &CVector) -> CVector {
    let (k, _) = v.iter().enumerate().fold((0, 0.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
    let phase = v[k] / c(v[k].norm(), 0.0);
    v / phase
}

/// Null space of the stacked coupling operators, with the global ground
/// state (flat index 0) projected out.
pub fn dark_states(g: &SlhTriplet) -> Result<DarkStateReport> {
    let d = g.space().total_dim();
    let n = g.n_ports();
    let mut stacked = CMatrix::zeros((n * d).max(d), d);
    for (j, l) in g.coupling().iter().enumerate() {
        stacked.view_mut((j * d, 0), (d, d)).copy_from(l.matrix());
    }
    let svd = stacked.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut null: Vec<CVector> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] < NULL_SINGULAR_THRESHOLD)
        .map(|k| v_t.row(k).adjoint())
        .collect();

    // Drop the ground state from the null space, then re-orthonormalize.
    let mut ground = CVector::zeros(d);
    ground[0] = c(1.0, 0.0);
    for v in null.iter_mut() {
        let p = ground.dotc(v);
        *v -= &ground * p;
    }
    let mut basis: Vec<CVector> = Vec::new();
    for mut v in null {
        for b in &basis {
            let p = b.dotc(&v);
            v -= b * p;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v / c(norm, 0.0));
        }
    }

    let h = g.hamiltonian().matrix();
    let space = g.space();
    let states = basis
        .into_iter()
        .map(|v| {
            let v = fix_phase(&v);
            let coupling_residuals = g.coupling().iter().map(|l| (l.matrix() * &v).norm()).collect();
            let hv = h * &v;
            let energy = v.dotc(&hv).re;
            let hamiltonian_residual = (hv - &v * c(energy, 0.0)).norm();
            let components = v
                .iter()
                .enumerate()
                .filter(|(_, z)| z.norm() > 1e-12)
                .map(|(i, z)| (space.basis_label(i), *z))
                .collect();
            DarkState { vector: v, coupling_residuals, hamiltonian_residual, energy, components }
        })
        .collect();
    Ok(DarkStateReport { states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slh::{build_giant_atom_simplified, build_reflective_jqf, SystemParams};

    #[test]
    fn simplified_giant_atom_dark_state() {
        let p = SystemParams::giant_atom_chip();
        let report = dark_states(&build_giant_atom_simplified(&p).unwrap()).unwrap();
        assert_eq!(report.states.len(), 1);
        let s = &report.states[0];
        let space = crate::slh::two_emitter_space();
        let q_excited = space.index(&[1, 0]);
        let j_excited = space.index(&[0, 1]);
        let (a, b) = ((2.0 * p.kappa_j).sqrt(), (p.kappa_q / 2.0).sqrt());
        let norm = (a * a + b * b).sqrt();
        assert!((s.vector[q_excited] - c(a / norm, 0.0)).norm() < 1e-12);
        assert!((s.vector[j_excited] - c(b / norm, 0.0)).norm() < 1e-12);
        assert!(s.max_coupling_residual() < 1e-12);
        assert!(s.hamiltonian_residual < 1e-12);
    }

    #[test]
    fn reflective_dark_state() {
        let p = SystemParams::reflective_chip();
        let report = dark_states(&build_reflective_jqf(&p).unwrap()).unwrap();
        assert_eq!(report.states.len(), 1);
        let s = &report.states[0];
        let space = crate::slh::two_emitter_space();
        let ratio = s.vector[space.index(&[0, 1])].re / s.vector[space.index(&[1, 0])].re;
        assert!((ratio - (p.kappa_q / p.kappa_j).sqrt()).abs() < 1e-12);
        assert_eq!(s.components.len(), 2);
    }

    #[test]
    fn no_dark_state_for_a_single_emitter() {
        let g = crate::slh::coupling_point("q", &crate::operator::ladder(3).unwrap(), 1.0).unwrap();
        assert!(dark_states(&g).unwrap().states.is_empty());
    }
}
