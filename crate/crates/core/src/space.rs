//! Finite state spaces and bit-vector subsets.
//!
//! States are identified by their index in declaration order, and every
//! operation iterates in index order, so all derived values are
//! deterministic. Empty spaces are legal; quantifiers over them take their
//! vacuous truth value.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A named finite set of states. Construct once, share via [`Space`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSpace {
    name: String,
    states: Vec<String>,
}

/// Shared handle to a state space.
pub type Space = Arc<StateSpace>;

impl StateSpace {
    pub fn new(name: impl Into<String>, states: Vec<String>) -> Result<Space> {
        let name = name.into();
        let mut seen = std::collections::HashSet::new();
        for s in &states {
            if !seen.insert(s.as_str()) {
                return Err(Error::Invalid(format!(
                    "duplicate state `{s}` in space `{name}`"
                )));
            }
        }
        Ok(Arc::new(StateSpace { name, states }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_name(&self, index: usize) -> &str {
        &self.states[index]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn index_of(&self, state: &str) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }
}

pub(crate) fn check_same_space(expected: &Space, found: &Space) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::SpaceMismatch {
            expected: expected.name().to_string(),
            found: found.name().to_string(),
        })
    }
}

/// A subset of a state space, stored as a dense bit-vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    space: Space,
    bits: Vec<bool>,
}

impl Subset {
    pub fn empty(space: &Space) -> Subset {
        Subset {
            space: space.clone(),
            bits: vec![false; space.len()],
        }
    }

    pub fn full(space: &Space) -> Subset {
        Subset {
            space: space.clone(),
            bits: vec![true; space.len()],
        }
    }

    pub fn singleton(space: &Space, index: usize) -> Subset {
        Subset::from_indices(space, std::iter::once(index))
    }

    pub fn from_indices(space: &Space, indices: impl IntoIterator<Item = usize>) -> Subset {
        let mut bits = vec![false; space.len()];
        for i in indices {
            bits[i] = true;
        }
        Subset {
            space: space.clone(),
            bits,
        }
    }

    /// Every subset of `space`, in binary counting order (lowest index is
    /// the least significant position). Only sensible at desk scale.
    pub fn enumerate_all(space: &Space) -> Vec<Subset> {
        let n = space.len();
        assert!(n < usize::BITS as usize, "space too large to enumerate");
        (0..1usize << n)
            .map(|mask| Subset::from_indices(space, (0..n).filter(|i| mask >> i & 1 == 1)))
            .collect()
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn member(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn with_member(mut self, index: usize) -> Subset {
        self.bits[index] = true;
        self
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.then_some(i))
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        check_same_space(&self.space, &other.space)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| *a || *b)
            .collect();
        Ok(Subset {
            space: self.space.clone(),
            bits,
        })
    }

    pub fn intersection(&self, other: &Subset) -> Result<Subset> {
        check_same_space(&self.space, &other.space)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| *a && *b)
            .collect();
        Ok(Subset {
            space: self.space.clone(),
            bits,
        })
    }

    pub fn difference(&self, other: &Subset) -> Result<Subset> {
        check_same_space(&self.space, &other.space)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| *a && !*b)
            .collect();
        Ok(Subset {
            space: self.space.clone(),
            bits,
        })
    }

    pub fn complement(&self) -> Subset {
        Subset {
            space: self.space.clone(),
            bits: self.bits.iter().map(|b| !*b).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Subset) -> Result<bool> {
        check_same_space(&self.space, &other.space)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b))
    }

    /// Positive non-disjointness: the least-index state in both subsets,
    /// if any.
    pub fn overlap(&self, other: &Subset) -> Result<Option<usize>> {
        check_same_space(&self.space, &other.space)?;
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .position(|(a, b)| *a && *b))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.members().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.space.state_name(i))?;
        }
        write!(f, "}}")
    }
}
