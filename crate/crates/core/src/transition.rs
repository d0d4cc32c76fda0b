//! Transition structures: per-state labelled successor families. These are
//! the computational counterpart of relations; they compose, have units,
//! and can pre-compose with or post-divide relations.

use crate::error::Result;
use crate::relation::Relation;
use crate::space::{check_same_space, Space, Subset};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub next: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionStructure {
    source: Space,
    target: Space,
    arrows: Vec<Vec<Arrow>>,
}

impl TransitionStructure {
    pub fn new(source: &Space, target: &Space, arrows: Vec<Vec<Arrow>>) -> Result<Self> {
        if arrows.len() != source.len() {
            return Err(crate::error::Error::Invalid(format!(
                "arrow table has {} rows for a space of {} states",
                arrows.len(),
                source.len()
            )));
        }
        for (s, row) in arrows.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for arrow in row {
                if arrow.next >= target.len() {
                    return Err(crate::error::Error::IndexOutOfRange(format!(
                        "transition `{}` at state `{}` targets index {}",
                        arrow.label,
                        source.state_name(s),
                        arrow.next
                    )));
                }
                if !seen.insert(arrow.label.as_str()) {
                    return Err(crate::error::Error::Invalid(format!(
                        "duplicate label `{}` at state `{}`",
                        arrow.label,
                        source.state_name(s)
                    )));
                }
            }
        }
        Ok(TransitionStructure {
            source: source.clone(),
            target: target.clone(),
            arrows,
        })
    }

    /// One label per state, staying in place.
    pub fn identity(space: &Space) -> Self {
        TransitionStructure {
            source: space.clone(),
            target: space.clone(),
            arrows: (0..space.len())
                .map(|s| {
                    vec![Arrow {
                        label: "*".into(),
                        next: s,
                    }]
                })
                .collect(),
        }
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn arrows_at(&self, state: usize) -> &[Arrow] {
        &self.arrows[state]
    }

    /// Sequential composition; labels are paired.
    pub fn compose(&self, other: &TransitionStructure) -> Result<TransitionStructure> {
        check_same_space(&self.target, &other.source)?;
        let arrows = (0..self.source.len())
            .map(|s| {
                let mut row = Vec::new();
                for a1 in &self.arrows[s] {
                    for a2 in &other.arrows[a1.next] {
                        row.push(Arrow {
                            label: format!("{}·{}", a1.label, a2.label),
                            next: a2.next,
                        });
                    }
                }
                row
            })
            .collect();
        Ok(TransitionStructure {
            source: self.source.clone(),
            target: other.target.clone(),
            arrows,
        })
    }

    /// The relation `{ (s, s[t]) }` induced by forgetting labels.
    pub fn to_relation(&self) -> Relation {
        let mut pairs = Vec::new();
        for (s, row) in self.arrows.iter().enumerate() {
            for arrow in row {
                pairs.push((s, arrow.next));
            }
        }
        Relation::from_pairs(&self.source, &self.target, pairs)
    }

    /// Pre-composition with a relation: `(s1, s3) ⊨ T;R` iff some
    /// transition from `s1` lands in `R˘(s3)`.
    pub fn pre_compose_rel(&self, r: &Relation) -> Result<Relation> {
        check_same_space(&self.target, r.domain())?;
        let mut out = Relation::empty(&self.source, r.codomain());
        for s1 in 0..self.source.len() {
            for s3 in 0..r.codomain().len() {
                if self.arrows[s1].iter().any(|a| r.contains(a.next, s3)) {
                    out.set(s1, s3, true);
                }
            }
        }
        Ok(out)
    }

    /// Post-division of a relation: `(s1, s2) ⊨ Q/T` iff every transition
    /// from `s2` lands in `Q(s1)`.
    pub fn post_divide(q: &Relation, t: &TransitionStructure) -> Result<Relation> {
        check_same_space(q.codomain(), &t.target)?;
        let mut out = Relation::empty(q.domain(), &t.source);
        for s1 in 0..q.domain().len() {
            for s2 in 0..t.source.len() {
                if t.arrows[s2].iter().all(|a| q.contains(s1, a.next)) {
                    out.set(s1, s2, true);
                }
            }
        }
        Ok(out)
    }

    /// The family at `state` as a subset of the target space.
    pub fn successors(&self, state: usize) -> Subset {
        Subset::from_indices(&self.target, self.arrows[state].iter().map(|a| a.next))
    }
}
