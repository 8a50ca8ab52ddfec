//! Composite Hilbert spaces with labeled subsystems.
//!
//! Basis ordering is fixed by declaration order: the first subsystem is the
//! leftmost tensor factor and therefore the most significant digit of the
//! flat basis index. For `[("jqf", 2), ("q", 4), ("r", 3)]` the state
//! `|j, q, r>` sits at index `12 j + 3 q + r`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subsystem {
    pub label: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    subsystems: Vec<Subsystem>,
    total_dim: usize,
}

/// Build a composite space from `(label, dimension)` pairs.
pub fn make_space<S: AsRef<str>>(subsystems: &[(S, usize)]) -> Result<HilbertSpace> {
    HilbertSpace::new(subsystems.iter().map(|(l, d)| (l.as_ref().to_owned(), *d)))
}

impl HilbertSpace {
    pub fn new<I>(subsystems: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, usize)>,
    {
        let mut subs: Vec<Subsystem> = Vec::new();
        for (label, dim) in subsystems {
            if subs.iter().any(|s| s.label == label) {
                return Err(Error::DuplicateLabel(label));
            }
            if dim < 2 {
                return Err(Error::DimensionTooSmall { label, dim });
            }
            subs.push(Subsystem { label, dim });
        }
        let total_dim = subs.iter().map(|s| s.dim).product();
        Ok(Self { subsystems: subs, total_dim })
    }

    /// The one-dimensional space with no subsystems. Scalar-only components
    /// (phase shifters, coherent sources) live here.
    pub fn trivial() -> Self {
        Self { subsystems: Vec::new(), total_dim: 1 }
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn is_trivial(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.subsystems.iter().position(|s| s.label == label)
    }

    pub fn dim_of(&self, label: &str) -> Option<usize> {
        self.position(label).map(|i| self.subsystems[i].dim)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.position(label).is_some()
    }

    /// Stride of subsystem `pos` in the flat index.
    pub(crate) fn stride(&self, pos: usize) -> usize {
        self.subsystems[pos + 1..].iter().map(|s| s.dim).product()
    }

    /// Per-subsystem levels of a flat basis index.
    pub fn levels(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.subsystems.len()];
        for (slot, s) in out.iter_mut().zip(&self.subsystems).rev() {
            *slot = index % s.dim;
            index /= s.dim;
        }
        out
    }

    /// Flat basis index of per-subsystem levels.
    pub fn index(&self, levels: &[usize]) -> usize {
        debug_assert_eq!(levels.len(), self.subsystems.len());
        levels
            .iter()
            .zip(&self.subsystems)
            .fold(0, |acc, (&l, s)| acc * s.dim + l)
    }

    /// Total excitation number of a basis state: the sum of its levels.
    pub fn excitation(&self, index: usize) -> usize {
        self.levels(index).iter().sum()
    }

    pub fn max_excitation(&self) -> usize {
        self.subsystems.iter().map(|s| s.dim - 1).sum()
    }

    /// Basis state with `label` at `level` and all other subsystems in 0.
    pub fn single_excitation_index(&self, label: &str, level: usize) -> Result<usize> {
        let pos = self.position(label).ok_or_else(|| Error::UnknownLabel(label.into()))?;
        if level >= self.subsystems[pos].dim {
            return Err(Error::InvalidArgument(format!(
                "level {level} out of range for `{label}`"
            )));
        }
        Ok(level * self.stride(pos))
    }

    /// `|1,0,2>`-style label of a basis index.
    pub fn basis_label(&self, index: usize) -> String {
        let levels = self.levels(index);
        let body: Vec<String> = levels.iter().map(|l| l.to_string()).collect();
        format!("|{}>", body.join(","))
    }

    /// Union of two spaces: `self`'s subsystems in order, followed by those of
    /// `other` that `self` lacks. Shared labels must agree on dimension.
    pub fn union(&self, other: &HilbertSpace) -> Result<HilbertSpace> {
        let mut subs = self.subsystems.clone();
        for s in &other.subsystems {
            match self.dim_of(&s.label) {
                Some(d) if d != s.dim => {
                    return Err(Error::IncompatibleSubsystem {
                        label: s.label.clone(),
                        a: d,
                        b: s.dim,
                    })
                }
                Some(_) => {}
                None => subs.push(s.clone()),
            }
        }
        let total_dim = subs.iter().map(|s| s.dim).product();
        Ok(HilbertSpace { subsystems: subs, total_dim })
    }
}

impl fmt::Display for HilbertSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.subsystems.is_empty() {
            return write!(f, "C^1");
        }
        let parts: Vec<String> =
            self.subsystems.iter().map(|s| format!("{}[{}]", s.label, s.dim)).collect();
        write!(f, "{}", parts.join(" (x) "))
    }
}
