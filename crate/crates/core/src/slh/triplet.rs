use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operator::{c, max_abs, CMatrix, Operator, C64, ONE, ZERO};
use crate::space::HilbertSpace;

/// Tolerance for the structural invariants of a triplet (unitary S,
/// Hermitian H), relative to `max(1, |H|_max)`.
pub const TRIPLET_TOL: f64 = 1e-12;

/// An open system with `n` input-output ports: scalar scattering matrix,
/// one coupling operator per port and a Hamiltonian, all on one space.
///
/// The triplet also records which subsystems' bare Hamiltonians it already
/// contains, so that composition can refuse to count any of them twice.
#[derive(Clone, Debug)]
pub struct SlhTriplet {
    space: Arc<HilbertSpace>,
    scattering: CMatrix,
    coupling: Vec<Operator>,
    hamiltonian: Operator,
    owners: BTreeSet<String>,
}

impl SlhTriplet {
    pub fn new(
        space: Arc<HilbertSpace>,
        scattering: CMatrix,
        coupling: Vec<Operator>,
        hamiltonian: Operator,
    ) -> Result<Self> {
        let n = coupling.len();
        if scattering.nrows() != n || scattering.ncols() != n {
            return Err(Error::ScatteringShape { rows: scattering.nrows(), cols: scattering.ncols(), ports: n });
        }
        for l in &coupling {
            if **l.space() != *space {
                return Err(Error::SpaceMismatch);
            }
        }
        if **hamiltonian.space() != *space {
            return Err(Error::SpaceMismatch);
        }
        let g = Self { space, scattering, coupling, hamiltonian, owners: BTreeSet::new() };
        g.check()?;
        Ok(g)
    }

    /// Zero-port system with no dynamics, the unit of concatenation.
    pub fn vacuum() -> Self {
        let space = Arc::new(HilbertSpace::trivial());
        Self {
            hamiltonian: Operator::zero(&space),
            space,
            scattering: CMatrix::zeros(0, 0),
            coupling: Vec::new(),
            owners: BTreeSet::new(),
        }
    }

    /// `(1, 0, 0)` on one port, the unit of the series product.
    pub fn identity() -> Self {
        let space = Arc::new(HilbertSpace::trivial());
        Self {
            coupling: vec![Operator::zero(&space)],
            hamiltonian: Operator::zero(&space),
            space,
            scattering: CMatrix::identity(1, 1),
            owners: BTreeSet::new(),
        }
    }

    fn check(&self) -> Result<()> {
        let n = self.n_ports();
        let unitarity = max_abs(&(&self.scattering * self.scattering.adjoint() - CMatrix::identity(n, n)));
        if unitarity > TRIPLET_TOL {
            return Err(Error::NotUnitary(unitarity));
        }
        let tol = TRIPLET_TOL * self.hamiltonian.max_abs().max(1.0);
        self.hamiltonian.assert_hermitian("triplet Hamiltonian", tol)
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn n_ports(&self) -> usize {
        self.coupling.len()
    }

    pub fn scattering(&self) -> &CMatrix {
        &self.scattering
    }

    pub fn coupling(&self) -> &[Operator] {
        &self.coupling
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    /// Subsystems whose bare Hamiltonian is already part of `H`.
    pub fn hamiltonian_owners(&self) -> &BTreeSet<String> {
        &self.owners
    }

    /// Add a bare Hamiltonian for the listed subsystems. `h` may live on any
    /// space; the triplet is widened to hold it.
    pub fn with_bare_hamiltonian(self, h: &Operator, owners: &[&str]) -> Result<Self> {
        let space = Arc::new(self.space.union(h.space())?);
        let mut g = self.align_to(&space)?;
        for o in owners {
            if !g.owners.insert((*o).to_owned()) {
                return Err(Error::HamiltonianDoubleCounted((*o).to_owned()));
            }
        }
        g.hamiltonian += &h.extend_to(&space)?;
        g.check()?;
        Ok(g)
    }

    /// Re-express every operator on `target` (a superset of the current
    /// space, possibly reordered).
    pub fn align_to(&self, target: &Arc<HilbertSpace>) -> Result<Self> {
        Ok(Self {
            space: target.clone(),
            scattering: self.scattering.clone(),
            coupling: self.coupling.iter().map(|l| l.extend_to(target)).collect::<Result<_>>()?,
            hamiltonian: self.hamiltonian.extend_to(target)?,
            owners: self.owners.clone(),
        })
    }

    /// Feed this system's output into `downstream`: `downstream ◁ self`.
    pub fn then(&self, downstream: &SlhTriplet) -> Result<SlhTriplet> {
        series(downstream, self)
    }

    /// `sum_j L_j^dag L_j`.
    pub fn total_decay(&self) -> Operator {
        let mut acc = Operator::zero(&self.space);
        for l in &self.coupling {
            acc += &(&l.adjoint() * l);
        }
        acc
    }
}

fn merged_owners(a: &SlhTriplet, b: &SlhTriplet) -> Result<BTreeSet<String>> {
    if let Some(dup) = a.owners.intersection(&b.owners).next() {
        return Err(Error::HamiltonianDoubleCounted(dup.clone()));
    }
    Ok(a.owners.union(&b.owners).cloned().collect())
}

fn common_space(first: &SlhTriplet, second: &SlhTriplet) -> Result<Arc<HilbertSpace>> {
    if first.space == second.space || *first.space == *second.space {
        return Ok(first.space.clone());
    }
    Ok(Arc::new(first.space.union(&second.space)?))
}

/// Series product `g2 ◁ g1`: the output of `g1` drives `g2`.
///
/// `(S2 S1, S2 L1 + L2, H1 + H2 + (L2^dag S2 L1 - L1^dag S2^dag L2) / 2i)`.
/// Operators are aligned onto the union of both spaces, upstream subsystems
/// first.
pub fn series(g2: &SlhTriplet, g1: &SlhTriplet) -> Result<SlhTriplet> {
    if g1.n_ports() != g2.n_ports() {
        return Err(Error::PortMismatch(g2.n_ports(), g1.n_ports()));
    }
    let owners = merged_owners(g1, g2)?;
    let space = common_space(g1, g2)?;
    let a = g1.align_to(&space)?;
    let b = g2.align_to(&space)?;
    let n = a.n_ports();

    let scattering = &b.scattering * &a.scattering;
    // S2 L1
    let routed: Vec<Operator> = (0..n)
        .map(|i| {
            let mut acc = Operator::zero(&space);
            for k in 0..n {
                let s = b.scattering[(i, k)];
                if s != ZERO {
                    acc += &a.coupling[k].scale(s);
                }
            }
            acc
        })
        .collect();
    let coupling: Vec<Operator> = routed.iter().zip(&b.coupling).map(|(r, l2)| r + l2).collect();

    // X = L2^dag S2 L1; the cross term is (X - X^dag) / 2i.
    let mut x = Operator::zero(&space);
    for (l2, r) in b.coupling.iter().zip(&routed) {
        x += &(&l2.adjoint() * r);
    }
    let cross = (&x - &x.adjoint()).scale(ONE / c(0.0, 2.0));
    let hamiltonian = &(&a.hamiltonian + &b.hamiltonian) + &cross;

    let g = SlhTriplet { space, scattering, coupling, hamiltonian, owners };
    g.check()?;
    Ok(g)
}

/// Concatenation product `g1 ⊞ g2`: block-diagonal S, stacked L, summed H.
pub fn concatenate(g1: &SlhTriplet, g2: &SlhTriplet) -> Result<SlhTriplet> {
    let owners = merged_owners(g1, g2)?;
    let space = common_space(g1, g2)?;
    let a = g1.align_to(&space)?;
    let b = g2.align_to(&space)?;
    let (n1, n2) = (a.n_ports(), b.n_ports());
    let mut scattering = CMatrix::zeros(n1 + n2, n1 + n2);
    scattering.view_mut((0, 0), (n1, n1)).copy_from(&a.scattering);
    scattering.view_mut((n1, n1), (n2, n2)).copy_from(&b.scattering);
    let coupling = a.coupling.iter().chain(&b.coupling).cloned().collect();
    let hamiltonian = &a.hamiltonian + &b.hamiltonian;
    let g = SlhTriplet { space, scattering, coupling, hamiltonian, owners };
    g.check()?;
    Ok(g)
}

/// Fold a chain of components given in propagation order (first element
/// sees the input field first).
pub fn cascade(chain: &[SlhTriplet]) -> Result<SlhTriplet> {
    let mut iter = chain.iter();
    let first = iter.next().ok_or_else(|| Error::InvalidArgument("empty cascade".into()))?;
    iter.try_fold(first.clone(), |acc, g| series(g, &acc))
}

/// Element-wise distance between two triplets after aligning spaces,
/// removing one overall U(1) phase of the output fields (applied to S and L
/// together) and discarding the identity part of H.
pub fn triplet_distance(a: &SlhTriplet, b: &SlhTriplet) -> Result<f64> {
    if a.n_ports() != b.n_ports() {
        return Err(Error::PortMismatch(a.n_ports(), b.n_ports()));
    }
    let space = common_space(a, b)?;
    let a = a.align_to(&space)?;
    let b = b.align_to(&space)?;
    let overlap: C64 = a.scattering.iter().zip(b.scattering.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
    let undo = phase.conj();

    let mut worst = max_abs(&(&a.scattering - &b.scattering * undo));
    for (la, lb) in a.coupling.iter().zip(&b.coupling) {
        worst = worst.max(max_abs(&(la.matrix() - lb.matrix() * undo)));
    }
    let d = space.total_dim() as f64;
    let traceless = |h: &Operator| {
        let shift = h.trace() / c(d, 0.0);
        h.matrix() - CMatrix::identity(h.dim(), h.dim()) * shift
    };
    worst = worst.max(max_abs(&(traceless(&a.hamiltonian) - traceless(&b.hamiltonian))));
    Ok(worst)
}
