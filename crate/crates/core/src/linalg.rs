//! Dense complex eigen-solvers built on nalgebra's Schur decomposition.

use nalgebra::linalg::Schur;

use crate::error::{Error, Result};
use crate::operator::{c, max_abs, CMatrix, CVector, C64, ZERO};

const SCHUR_MAX_ITER: usize = 0; // nalgebra: 0 means no limit

/// Eigenvalues and unit-norm right eigenvectors (columns).
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<C64>,
    pub vectors: CMatrix,
}

fn schur(m: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    if m.nrows() != m.ncols() {
        return Err(Error::Numerical("eigenproblem needs a square matrix".into()));
    }
    let s = Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    Ok(s.unpack())
}

/// Eigenvalues only.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    let (_, t) = schur(m)?;
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Full eigendecomposition of a general complex matrix.
///
/// Eigenvectors come from back substitution on the triangular Schur factor;
/// near-coincident eigenvalues get a perturbed pivot, as in LAPACK `ztrevc`.
pub fn eig(m: &CMatrix) -> Result<Eigen> {
    let n = m.nrows();
    let (q, t) = schur(m)?;
    let scale = max_abs(&t).max(f64::MIN_POSITIVE);
    let small = scale * f64::EPSILON;
    let values: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    let mut y = CVector::zeros(n);
    for k in 0..n {
        y.fill(ZERO);
        y[k] = c(1.0, 0.0);
        let lambda = values[k];
        for i in (0..k).rev() {
            let mut acc = ZERO;
            for j in i + 1..=k {
                acc += t[(i, j)] * y[j];
            }
            let mut pivot = t[(i, i)] - lambda;
            if pivot.norm() < small {
                pivot = c(small, 0.0);
            }
            y[i] = -acc / pivot;
        }
        let v = &q * &y;
        let norm = v.norm();
        vectors.set_column(k, &(v / c(norm, 0.0)));
    }
    Ok(Eigen { values, vectors })
}

/// Right null vector of a matrix expected to have a one-dimensional kernel,
/// fixing the normalization with one linear constraint: `constraint . x = 1`
/// replaces row `replace_row`.
pub fn constrained_null_vector(m: &CMatrix, constraint: &CVector, replace_row: usize) -> Result<CVector> {
    let n = m.nrows();
    let mut a = m.clone();
    for j in 0..n {
        a[(replace_row, j)] = constraint[j];
    }
    let mut rhs = CVector::zeros(n);
    rhs[replace_row] = c(1.0, 0.0);
    a.lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("singular system while solving for the null vector".into()))
}

/// Eigen-decomposition of a 2x2 complex matrix in closed form, used by the
/// Purcell estimate where a Schur iteration is overkill.
pub fn eig2(m: &CMatrix) -> Eigen {
    let (a, b, cc, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * cc;
    let root = disc.sqrt();
    let values = vec![half_tr + root, half_tr - root];
    let mut vectors = CMatrix::zeros(2, 2);
    for (k, &l) in values.iter().enumerate() {
        // (a - l) x + b y = 0  or  c x + (d - l) y = 0
        let v = if b.norm() >= cc.norm() && b.norm() > 0.0 {
            CVector::from_vec(vec![b, l - a])
        } else if cc.norm() > 0.0 {
            CVector::from_vec(vec![l - d, cc])
        } else if k == 0 {
            // diagonal matrix: eigenvectors are the basis states matching each value
            if (a - l).norm() <= (d - l).norm() {
                CVector::from_vec(vec![c(1.0, 0.0), ZERO])
            } else {
                CVector::from_vec(vec![ZERO, c(1.0, 0.0)])
            }
        } else if (d - l).norm() <= (a - l).norm() {
            CVector::from_vec(vec![ZERO, c(1.0, 0.0)])
        } else {
            CVector::from_vec(vec![c(1.0, 0.0), ZERO])
        };
        let norm = v.norm();
        vectors.set_column(k, &(v / c(norm, 0.0)));
    }
    Eigen { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(m: &CMatrix, e: &Eigen) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..m.nrows() {
            let v = e.vectors.column(k).into_owned();
            let r = m * &v - &v * e.values[k];
            worst = worst.max(r.norm());
        }
        worst
    }

    #[test]
    fn eig_of_non_hermitian_matrix() {
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.2), c(0.3, -0.1), c(0.0, 0.5),
                c(-0.4, 0.0), c(0.2, -1.0), c(0.7, 0.1),
                c(0.1, 0.1), c(0.0, 0.0), c(-0.5, 0.3),
            ],
        );
        let e = eig(&m).unwrap();
        assert!(residual(&m, &e) < 1e-12);
        let tr: C64 = e.values.iter().sum();
        assert!((tr - m.trace()).norm() < 1e-12);
    }

    #[test]
    fn eig2_matches_general_solver() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.9, 0.0), c(0.9, 0.0), c(10.1, -0.0066)]);
        let e = eig2(&m);
        assert!(residual(&m, &e) < 1e-12);
        let diag = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), ZERO, ZERO, c(2.0, -0.1)]);
        let e = eig2(&diag);
        assert!(residual(&diag, &e) < 1e-14);
    }

    #[test]
    fn constrained_null_vector_of_rank_deficient_matrix() {
        // columns sum to zero, kernel spanned by (1, 2)
        let m = CMatrix::from_row_slice(2, 2, &[c(-2.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0)]);
        let x = constrained_null_vector(&m, &CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]), 0).unwrap();
        assert!((x[0] - c(1.0 / 3.0, 0.0)).norm() < 1e-14);
        assert!((x[1] - c(2.0 / 3.0, 0.0)).norm() < 1e-14);
    }
}
