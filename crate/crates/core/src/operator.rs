//! Dense operators on labeled composite spaces.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::space::HilbertSpace;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest element modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest element of `|M - M^dag|`.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Truncated annihilation operator, `a|n> = sqrt(n)|n-1>`.
pub fn ladder(dim: usize) -> Result<CMatrix> {
    if dim < 2 {
        return Err(Error::LadderDimension(dim));
    }
    let mut m = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = c((n as f64).sqrt(), 0.0);
    }
    Ok(m)
}

/// Pauli-z with the convention `sigma_z |1> = +|1>` (level 1 is excited).
pub fn sigma_z() -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_vec(vec![c(-1.0, 0.0), ONE]))
}

#[derive(Clone, Debug)]
pub struct Operator {
    space: Arc<HilbertSpace>,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(space: Arc<HilbertSpace>, matrix: CMatrix) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::MatrixShape { rows: matrix.nrows(), cols: matrix.ncols(), expected: d });
        }
        Ok(Self { space, matrix })
    }

    pub fn zero(space: &Arc<HilbertSpace>) -> Self {
        let d = space.total_dim();
        Self { space: space.clone(), matrix: CMatrix::zeros(d, d) }
    }

    pub fn identity(space: &Arc<HilbertSpace>) -> Self {
        let d = space.total_dim();
        Self { space: space.clone(), matrix: CMatrix::identity(d, d) }
    }

    /// Annihilation operator of subsystem `label`.
    pub fn lowering(space: &Arc<HilbertSpace>, label: &str) -> Result<Self> {
        let d = space.dim_of(label).ok_or_else(|| Error::UnknownLabel(label.into()))?;
        embed(&ladder(d)?, label, space)
    }

    /// Number operator of subsystem `label`.
    pub fn number(space: &Arc<HilbertSpace>, label: &str) -> Result<Self> {
        let a = Self::lowering(space, label)?;
        Ok(&a.adjoint() * &a)
    }

    /// Projector onto level `level` of subsystem `label`.
    pub fn level_projector(space: &Arc<HilbertSpace>, label: &str, level: usize) -> Result<Self> {
        let d = space.dim_of(label).ok_or_else(|| Error::UnknownLabel(label.into()))?;
        let mut local = CMatrix::zeros(d, d);
        if level >= d {
            return Err(Error::InvalidArgument(format!("level {level} out of range for `{label}`")));
        }
        local[(level, level)] = ONE;
        embed(&local, label, space)
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self { space: self.space.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn scale(&self, z: C64) -> Self {
        Self { space: self.space.clone(), matrix: &self.matrix * z }
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        &(self * other) - &(other * self)
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.matrix)
    }

    /// Check Hermiticity to `tol` in max |M - M^dag|.
    pub fn assert_hermitian(&self, what: &'static str, tol: f64) -> Result<()> {
        let deviation = self.hermiticity_error();
        if deviation > tol {
            return Err(Error::NotHermitian { what, deviation });
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Re-express this operator on `target`, a space containing every
    /// subsystem of `self.space()` (possibly reordered and with extra
    /// subsystems, which receive identities).
    pub fn extend_to(&self, target: &Arc<HilbertSpace>) -> Result<Operator> {
        if *self.space == **target {
            return Ok(Operator { space: target.clone(), matrix: self.matrix.clone() });
        }
        let map = IndexMap::new(&self.space, target)?;
        let d = target.total_dim();
        let mut m = CMatrix::zeros(d, d);
        for i in 0..d {
            let (si, ri) = map.split[i];
            for j in 0..d {
                let (sj, rj) = map.split[j];
                if ri == rj {
                    m[(i, j)] = self.matrix[(si, sj)];
                }
            }
        }
        Ok(Operator { space: target.clone(), matrix: m })
    }

    fn check_same(&self, other: &Operator) {
        assert!(
            self.space == other.space || *self.space == *other.space,
            "operator arithmetic across different spaces ({} vs {})",
            self.space,
            other.space
        );
    }
}

/// For each target basis index: (index in the source space, index of the
/// remaining subsystems).
struct IndexMap {
    split: Vec<(usize, usize)>,
}

impl IndexMap {
    fn new(source: &HilbertSpace, target: &HilbertSpace) -> Result<Self> {
        for s in source.subsystems() {
            match target.dim_of(&s.label) {
                None => return Err(Error::MissingSubsystem(s.label.clone())),
                Some(d) if d != s.dim => {
                    return Err(Error::IncompatibleSubsystem { label: s.label.clone(), a: s.dim, b: d })
                }
                _ => {}
            }
        }
        let split = (0..target.total_dim())
            .map(|idx| {
                let levels = target.levels(idx);
                let mut src = 0;
                for s in source.subsystems() {
                    let p = target.position(&s.label).unwrap();
                    src = src * s.dim + levels[p];
                }
                let mut rest = 0;
                for (p, t) in target.subsystems().iter().enumerate() {
                    if !source.contains(&t.label) {
                        rest = rest * t.dim + levels[p];
                    }
                }
                (src, rest)
            })
            .collect();
        Ok(Self { split })
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.check_same(rhs);
        Operator { space: self.space.clone(), matrix: &self.matrix + &rhs.matrix }
    }
}

impl AddAssign<&Operator> for Operator {
    fn add_assign(&mut self, rhs: &Operator) {
        self.check_same(rhs);
        self.matrix += &rhs.matrix;
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.check_same(rhs);
        Operator { space: self.space.clone(), matrix: &self.matrix - &rhs.matrix }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.check_same(rhs);
        Operator { space: self.space.clone(), matrix: &self.matrix * &rhs.matrix }
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self.scale(c(rhs, 0.0))
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(c(-1.0, 0.0))
    }
}

/// Extend a local operator on subsystem `label` to the whole space with
/// identities on every other subsystem.
pub fn embed(local: &CMatrix, label: &str, space: &Arc<HilbertSpace>) -> Result<Operator> {
    let pos = space.position(label).ok_or_else(|| Error::UnknownLabel(label.into()))?;
    let dim = space.subsystems()[pos].dim;
    if local.nrows() != dim || local.ncols() != dim {
        return Err(Error::LocalDimension { label: label.into(), expected: dim, got: local.nrows() });
    }
    let before: usize = space.subsystems()[..pos].iter().map(|s| s.dim).product();
    let after = space.stride(pos);
    let m = kron(&kron(&CMatrix::identity(before, before), local), &CMatrix::identity(after, after));
    Operator::new(space.clone(), m)
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    space: Arc<HilbertSpace>,
    matrix: CMatrix,
}

pub const STATE_TRACE_TOL: f64 = 1e-9;
pub const STATE_HERMITIAN_TOL: f64 = 1e-12;
pub const STATE_POSITIVITY_TOL: f64 = 1e-9;

impl DensityMatrix {
    pub fn new(space: Arc<HilbertSpace>, matrix: CMatrix) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::MatrixShape { rows: matrix.nrows(), cols: matrix.ncols(), expected: d });
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > STATE_TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let herm = hermiticity_error(&matrix);
        if herm > STATE_HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian ({herm:.3e})")));
        }
        let min_eig = min_eigenvalue(&matrix);
        if min_eig < -STATE_POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(Self { space, matrix })
    }

    /// Pure state `|psi><psi|` (normalized internally).
    pub fn pure(space: Arc<HilbertSpace>, psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v = psi / c(norm, 0.0);
        let mut m = &v * v.adjoint();
        m = hermitize(&m);
        Self::new(space, m)
    }

    /// Basis state given by per-subsystem levels.
    pub fn basis(space: Arc<HilbertSpace>, levels: &[usize]) -> Result<Self> {
        if levels.len() != space.subsystems().len() {
            return Err(Error::InvalidArgument("level list length differs from subsystem count".into()));
        }
        for (l, s) in levels.iter().zip(space.subsystems()) {
            if *l >= s.dim {
                return Err(Error::InvalidArgument(format!("level {l} out of range for `{}`", s.label)));
            }
        }
        let d = space.total_dim();
        let mut m = CMatrix::zeros(d, d);
        let i = space.index(levels);
        m[(i, i)] = ONE;
        Self::new(space, m)
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

/// `(M + M^dag) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    let eig = SymmetricEigen::new(hermitize(m));
    eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// `tr(op rho)`.
pub fn expectation(op: &Operator, rho: &DensityMatrix) -> Result<C64> {
    if *op.space != *rho.space {
        return Err(Error::SpaceMismatch);
    }
    Ok(trace_product(op.matrix(), rho.matrix()))
}

/// `tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Basis states of fixed total excitation number, in ascending flat-index
/// order (which is lexicographic in declaration order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcitationSector {
    pub n_total: usize,
    pub indices: Vec<usize>,
}

impl ExcitationSector {
    pub fn new(space: &HilbertSpace, n_total: usize) -> Result<Self> {
        let max = space.max_excitation();
        if n_total > max {
            return Err(Error::ExcitationOutOfRange { requested: n_total, max });
        }
        let indices = (0..space.total_dim()).filter(|&i| space.excitation(i) == n_total).collect();
        Ok(Self { n_total, indices })
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// Position of a flat basis index inside the sector.
    pub fn position(&self, flat: usize) -> Option<usize> {
        self.indices.iter().position(|&i| i == flat)
    }

    pub fn restrict_matrix(&self, m: &CMatrix) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, n, |a, b| m[(self.indices[a], self.indices[b])])
    }

    pub fn restrict_vector(&self, v: &CVector) -> CVector {
        CVector::from_fn(self.dim(), |a, _| v[self.indices[a]])
    }

    pub fn embed_vector(&self, v: &CVector, total_dim: usize) -> CVector {
        let mut out = CVector::zeros(total_dim);
        for (a, &i) in self.indices.iter().enumerate() {
            out[i] = v[a];
        }
        out
    }

    pub fn embed_matrix(&self, m: &CMatrix, total_dim: usize) -> CMatrix {
        let mut out = CMatrix::zeros(total_dim, total_dim);
        for (a, &i) in self.indices.iter().enumerate() {
            for (b, &j) in self.indices.iter().enumerate() {
                out[(i, j)] = m[(a, b)];
            }
        }
        out
    }
}

/// Restrict an operator to the sector of total excitation `n_total`.
/// Returns the reduced matrix and the basis index map.
pub fn restrict_excitation(op: &Operator, n_total: usize) -> Result<(CMatrix, ExcitationSector)> {
    let sector = ExcitationSector::new(op.space(), n_total)?;
    Ok((sector.restrict_matrix(op.matrix()), sector))
}

/// Total excitation number operator `sum_k a_k^dag a_k`.
pub fn excitation_number(space: &Arc<HilbertSpace>) -> Operator {
    let d = space.total_dim();
    let diag = CVector::from_fn(d, |i, _| c(space.excitation(i) as f64, 0.0));
    Operator { space: space.clone(), matrix: CMatrix::from_diagonal(&diag) }
}
