use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{hermitize, CMatrix, CVector, DensityMatrix, Operator, C64};
use crate::slh::SlhTriplet;

use super::liouvillian::{effective_matrix, unvectorize, vectorize, Liouvillian};

/// Minimum normalized overlap `|tr(O^dag R)| / (|O| |R|)` for a Liouvillian
/// eigenmode to count as seen by an observable.
pub const MODE_OVERLAP_THRESHOLD: f64 = 1e-6;

/// Non-Hermitian `H - (i/2) sum_j L_j^dag L_j`.
pub fn effective_hamiltonian(g: &SlhTriplet) -> Operator {
    let ls: Vec<CMatrix> = g.coupling().iter().map(|l| l.matrix().clone()).collect();
    Operator::new(g.space().clone(), effective_matrix(g.hamiltonian().matrix(), &ls))
        .expect("effective Hamiltonian shares the triplet space")
}

/// The unique stationary state. A stationary manifold of dimension above
/// one is reported as an error rather than resolved arbitrarily.
pub fn steady_state(g: &SlhTriplet) -> Result<DensityMatrix> {
    let liou = Liouvillian::new(g)?;
    let thr = liou.zero_threshold();
    let zeros = liou.eigenvalues()?.iter().filter(|l| l.norm() < thr).count();
    if zeros > 1 {
        return Err(Error::DegenerateSteadyState { multiplicity: zeros });
    }
    let d = liou.dim();
    let trace = vectorize(&CMatrix::identity(d, d));
    let x = linalg::constrained_null_vector(liou.matrix(), &trace, 0)?;
    let mut rho = hermitize(&unvectorize(&x, d));
    let tr = rho.trace();
    rho /= tr;
    DensityMatrix::new(g.space().clone(), rho)
}

#[derive(Clone, Debug)]
pub struct DecayMode {
    pub eigenvalue: C64,
    pub overlap: f64,
    /// Right eigenmatrix, unit Frobenius norm.
    pub mode: CMatrix,
}

impl DecayMode {
    /// `-1 / Re(lambda)` in microseconds.
    pub fn lifetime_us(&self) -> f64 {
        crate::units::ns_to_us(-1.0 / self.eigenvalue.re)
    }
}

/// Slowest decaying Liouvillian eigenmode that overlaps `observable`.
pub fn slowest_decay_mode(g: &SlhTriplet, observable: &Operator) -> Result<DecayMode> {
    if **observable.space() != **g.space() {
        return Err(Error::SpaceMismatch);
    }
    let liou = Liouvillian::new(g)?;
    let thr = liou.zero_threshold();
    let eig = linalg::eig(liou.matrix())?;
    let d = liou.dim();
    let o = observable.matrix();
    let o_norm = o.norm();
    if o_norm == 0.0 {
        return Err(Error::NoDecayMode);
    }
    let mut best: Option<(usize, f64)> = None;
    for (k, lambda) in eig.values.iter().enumerate() {
        if lambda.re >= -thr {
            continue;
        }
        let r = unvectorize(&eig.vectors.column(k).into_owned(), d);
        let overlap = (o.adjoint() * &r).trace().norm() / (o_norm * r.norm());
        if overlap <= MODE_OVERLAP_THRESHOLD {
            continue;
        }
        if best.is_none_or(|(b, _)| lambda.re > eig.values[b].re) {
            best = Some((k, overlap));
        }
    }
    let (k, overlap) = best.ok_or(Error::NoDecayMode)?;
    let v: CVector = eig.vectors.column(k).into_owned();
    let parallel = (0..eig.vectors.ncols())
        .filter(|&j| j != k)
        .map(|j| eig.vectors.column(j).dotc(&v).norm())
        .fold(0.0, f64::max);
    if parallel > 1.0 - 1e-8 {
        log::warn!("eigenbasis is ill-conditioned near lambda = {}", eig.values[k]);
    }
    Ok(DecayMode { eigenvalue: eig.values[k], overlap, mode: unvectorize(&v, d) })
}

/// Long-time limit of `exp(L t) rho0`. Unlike [`steady_state`] this accepts
/// a degenerate stationary manifold and resolves it by the initial state,
/// via the spectral projector `R (U^dag R)^{-1} U^dag` built from the right
/// (`R`) and left (`U`) null spaces of the Liouvillian.
pub fn asymptotic_state(g: &SlhTriplet, rho0: &DensityMatrix) -> Result<DensityMatrix> {
    if **rho0.space() != **g.space() {
        return Err(Error::SpaceMismatch);
    }
    let liou = Liouvillian::new(g)?;
    let thr = liou.zero_threshold();
    let d = liou.dim();
    let svd = liou.matrix().clone().svd(true, true);
    let u = svd.u.as_ref().ok_or_else(|| Error::Numerical("SVD without U".into()))?;
    let v = svd.v_t.as_ref().ok_or_else(|| Error::Numerical("SVD without V".into()))?.adjoint();
    let null: Vec<usize> = (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] < thr).collect();
    if null.is_empty() {
        return Err(Error::Numerical("Liouvillian has no zero mode".into()));
    }
    let r = CMatrix::from_fn(d * d, null.len(), |i, k| v[(i, null[k])]);
    let l = CMatrix::from_fn(d * d, null.len(), |i, k| u[(i, null[k])]);
    let gram = l.adjoint() * &r;
    let coeff = gram
        .lu()
        .solve(&(l.adjoint() * vectorize(rho0.matrix())))
        .ok_or_else(|| Error::Numerical("singular stationary-manifold projector".into()))?;
    let mut rho = hermitize(&unvectorize(&(r * coeff), d));
    let tr = rho.trace();
    rho /= tr;
    DensityMatrix::new(g.space().clone(), rho)
}
