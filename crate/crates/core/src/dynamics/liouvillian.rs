//! Lindblad superoperator in the column-stacking convention
//! `vec(A X B) = (B^T (x) A) vec(X)`:
//!
//! `-i (I (x) H - H^T (x) I) + sum_j [conj(L_j) (x) L_j
//!   - (I (x) L_j^dag L_j + (L_j^dag L_j)^T (x) I) / 2]`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{c, CMatrix, CVector, C64, ZERO};
use crate::slh::SlhTriplet;
use crate::space::HilbertSpace;

/// Largest Hilbert-space dimension handled by dense superoperator methods
/// (a 1600 x 1600 Liouvillian).
pub const MAX_DENSE_DIM: usize = 40;

/// Eigenvalues below `ZERO_EIGEN_FACTOR * eps * max(1, |L|_F)` in modulus
/// count as zero.
pub const ZERO_EIGEN_FACTOR: f64 = 1e6;

/// Column-stacked vector of a square matrix.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVector, d: usize) -> CMatrix {
    CMatrix::from_column_slice(d, d, v.as_slice())
}

/// `H - (i/2) sum_j L_j^dag L_j` on raw matrices.
pub(crate) fn effective_matrix(h: &CMatrix, ls: &[CMatrix]) -> CMatrix {
    let mut heff = h.clone();
    for l in ls {
        heff -= (l.adjoint() * l) * c(0.0, 0.5);
    }
    heff
}

/// Direct evaluation of `-i[H, rho] + sum_j D[L_j] rho`.
pub fn lindblad_rhs(h: &CMatrix, ls: &[CMatrix], rho: &CMatrix) -> CMatrix {
    let mut out = (h * rho - rho * h) * c(0.0, -1.0);
    for l in ls {
        let ldl = l.adjoint() * l;
        out += l * rho * l.adjoint() - (&ldl * rho + rho * &ldl) * c(0.5, 0.0);
    }
    out
}

#[derive(Clone, Debug)]
pub struct Liouvillian {
    space: Arc<HilbertSpace>,
    matrix: CMatrix,
}

impl Liouvillian {
    pub fn new(g: &SlhTriplet) -> Result<Self> {
        let d = g.space().total_dim();
        if d > MAX_DENSE_DIM {
            return Err(Error::Capacity { dim: d, max: MAX_DENSE_DIM });
        }
        let ls: Vec<CMatrix> = g.coupling().iter().map(|l| l.matrix().clone()).collect();
        Ok(Self { space: g.space().clone(), matrix: superoperator(g.hamiltonian().matrix(), &ls) })
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Hilbert-space dimension `d`; the superoperator is `d^2 x d^2`.
    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        unvectorize(&(&self.matrix * vectorize(rho)), self.dim())
    }

    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        linalg::eigenvalues(&self.matrix)
    }

    pub fn zero_threshold(&self) -> f64 {
        ZERO_EIGEN_FACTOR * f64::EPSILON * self.matrix.norm().max(1.0)
    }
}

/// Superoperator from raw `H` and couplings (no capacity check).
pub(crate) fn superoperator(h: &CMatrix, ls: &[CMatrix]) -> CMatrix {
    let d = h.nrows();
    let id = CMatrix::identity(d, d);
    let heff = effective_matrix(h, ls);
    // -i Heff rho + i rho Heff^dag
    let mut m = id.kronecker(&(&heff * c(0.0, -1.0))) + heff.map(|z| z.conj() * c(0.0, 1.0)).kronecker(&id);
    for l in ls {
        if l.iter().all(|z| *z == ZERO) {
            continue;
        }
        m += l.map(|z| z.conj()).kronecker(l);
    }
    m
}
