//! Binary relations as dense bit-matrices, the usual relation algebra,
//! and the two update transformers a relation induces on subsets.

use std::fmt;

use crate::error::{Error, Result};
use crate::space::{check_same_space, Space, Subset};

/// A relation between two state spaces, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    domain: Space,
    codomain: Space,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(domain: &Space, codomain: &Space) -> Relation {
        Relation {
            domain: domain.clone(),
            codomain: codomain.clone(),
            bits: vec![false; domain.len() * codomain.len()],
        }
    }

    pub fn full(domain: &Space, codomain: &Space) -> Relation {
        Relation {
            domain: domain.clone(),
            codomain: codomain.clone(),
            bits: vec![true; domain.len() * codomain.len()],
        }
    }

    pub fn identity(space: &Space) -> Relation {
        let mut r = Relation::empty(space, space);
        for i in 0..space.len() {
            r.set(i, i, true);
        }
        r
    }

    pub fn from_pairs(
        domain: &Space,
        codomain: &Space,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Relation {
        let mut r = Relation::empty(domain, codomain);
        for (i, j) in pairs {
            r.set(i, j, true);
        }
        r
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn codomain(&self) -> &Space {
        &self.codomain
    }

    pub fn is_endo(&self) -> bool {
        self.domain == self.codomain
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.codomain.len() + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, value: bool) {
        self.bits[i * self.codomain.len() + j] = value;
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let cols = self.codomain.len();
        self.bits
            .iter()
            .enumerate()
            .filter_map(move |(k, b)| b.then_some((k / cols, k % cols)))
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    pub fn with_pair(mut self, i: usize, j: usize) -> Relation {
        self.set(i, j, true);
        self
    }

    pub fn without_pair(mut self, i: usize, j: usize) -> Relation {
        self.set(i, j, false);
        self
    }

    /// The row `R(i)` as a subset of the codomain.
    pub fn row(&self, i: usize) -> Subset {
        Subset::from_indices(
            &self.codomain,
            (0..self.codomain.len()).filter(|j| self.contains(i, *j)),
        )
    }

    /// The column `R˘(j)` as a subset of the domain.
    pub fn column(&self, j: usize) -> Subset {
        Subset::from_indices(
            &self.domain,
            (0..self.domain.len()).filter(|i| self.contains(*i, j)),
        )
    }

    pub fn converse(&self) -> Relation {
        let mut r = Relation::empty(&self.codomain, &self.domain);
        for (i, j) in self.pairs() {
            r.set(j, i, true);
        }
        r
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.check_same_type(other)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| *a || *b)
            .collect();
        Ok(Relation {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            bits,
        })
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        self.check_same_type(other)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| *a && *b)
            .collect();
        Ok(Relation {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            bits,
        })
    }

    pub fn is_subset_of(&self, other: &Relation) -> Result<bool> {
        self.check_same_type(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b))
    }

    fn check_same_type(&self, other: &Relation) -> Result<()> {
        check_same_space(&self.domain, &other.domain)?;
        check_same_space(&self.codomain, &other.codomain)
    }

    /// Relational composition `self ; other`.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        check_same_space(&self.codomain, &other.domain)?;
        let mut r = Relation::empty(&self.domain, &other.codomain);
        for i in 0..self.domain.len() {
            for k in 0..self.codomain.len() {
                if self.contains(i, k) {
                    for j in 0..other.codomain.len() {
                        if other.contains(k, j) {
                            r.set(i, j, true);
                        }
                    }
                }
            }
        }
        Ok(r)
    }

    /// Least reflexive-transitive superset, by squaring until stable.
    pub fn rtc(&self) -> Result<Relation> {
        check_same_space(&self.domain, &self.codomain)?;
        let mut closure = self.union(&Relation::identity(&self.domain))?;
        loop {
            let next = closure.union(&closure.compose(&closure)?)?;
            if next == closure {
                return Ok(closure);
            }
            closure = next;
        }
    }

    /// Post-division `Q / R`: `(i, j)` holds iff `R(j) ⊆ Q(i)`.
    pub fn post_divide(q: &Relation, r: &Relation) -> Result<Relation> {
        check_same_space(&q.codomain, &r.codomain)?;
        let mut out = Relation::empty(&q.domain, &r.domain);
        for i in 0..q.domain.len() {
            let qi = q.row(i);
            for j in 0..r.domain.len() {
                if r.row(j).is_subset_of(&qi)? {
                    out.set(i, j, true);
                }
            }
        }
        Ok(out)
    }

    /// Pre-division `R \ Q`, derived from post-division by converses.
    pub fn pre_divide(r: &Relation, q: &Relation) -> Result<Relation> {
        Ok(Relation::post_divide(&q.converse(), &r.converse())?.converse())
    }

    /// Angelic update `⟨R⟩(U) = { s | R(s) ⋒ U }`.
    pub fn angelic_update(&self, u: &Subset) -> Result<Subset> {
        check_same_space(&self.codomain, u.space())?;
        Ok(Subset::from_indices(
            &self.domain,
            (0..self.domain.len())
                .filter(|i| (0..self.codomain.len()).any(|j| self.contains(*i, j) && u.member(j))),
        ))
    }

    /// Demonic update `[R](U) = { s | R(s) ⊆ U }`.
    pub fn demonic_update(&self, u: &Subset) -> Result<Subset> {
        check_same_space(&self.codomain, u.space())?;
        Ok(Subset::from_indices(
            &self.domain,
            (0..self.domain.len())
                .filter(|i| (0..self.codomain.len()).all(|j| !self.contains(*i, j) || u.member(j))),
        ))
    }

    /// Direct relational image, i.e. the angelic update of the converse.
    pub fn image(&self, u: &Subset) -> Result<Subset> {
        self.converse().angelic_update(u)
    }

    pub fn is_reflexive(&self) -> bool {
        self.is_endo() && (0..self.domain.len()).all(|i| self.contains(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        if !self.is_endo() {
            return false;
        }
        let n = self.domain.len();
        for i in 0..n {
            for j in 0..n {
                if self.contains(i, j) {
                    for k in 0..n {
                        if self.contains(j, k) && !self.contains(i, k) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub(crate) fn check_preorder(&self) -> Result<()> {
        if !self.is_endo() {
            return Err(Error::InvalidPreorder {
                space: self.domain.name().to_string(),
                reason: "domain and codomain differ".into(),
            });
        }
        if !self.is_reflexive() {
            return Err(Error::InvalidPreorder {
                space: self.domain.name().to_string(),
                reason: "not reflexive".into(),
            });
        }
        if !self.is_transitive() {
            return Err(Error::InvalidPreorder {
                space: self.domain.name().to_string(),
                reason: "not transitive".into(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (i, j)) in self.pairs().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(
                f,
                "({},{})",
                self.domain.state_name(i),
                self.codomain.state_name(j)
            )?;
        }
        write!(f, "}}")
    }
}
