//! Round-based least/greatest fixpoint engines for the cover and interior
//! operators, with the stage and choice bookkeeping that makes their
//! results executable (client synthesis reads off stages and witnesses,
//! server synthesis reads off the choice table).

use std::collections::BTreeMap;

use crate::error::Result;
use crate::istruct::InteractionStructure;
use crate::relation::Relation;
use crate::space::{check_same_space, Subset};

/// Least fixpoint of `X ↦ U ∪ w°(X)` together with its derivation: the
/// round each member entered and, for members of positive stage, the
/// command whose responses all land in earlier stages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverResult {
    pub subset: Subset,
    stage: Vec<Option<u32>>,
    witness: Vec<Option<usize>>,
    rounds: u32,
}

impl CoverResult {
    pub fn stage(&self, state: usize) -> Option<u32> {
        self.stage[state]
    }

    /// Witness command for a member that entered at a positive stage.
    pub fn witness(&self, state: usize) -> Option<usize> {
        self.witness[state]
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }
}

/// Greatest fixpoint of `X ↦ V ∩ w•(X)` with, for every member and every
/// command there, the least response that stays inside the fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteriorResult {
    pub subset: Subset,
    choice: BTreeMap<(usize, usize), usize>,
    rounds: u32,
}

impl InteriorResult {
    pub fn choice(&self, state: usize, command: usize) -> Option<usize> {
        self.choice.get(&(state, command)).copied()
    }

    pub fn choices(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.choice
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }
}

/// The states from which the Angel can force `goal`, by saturation rounds.
/// With a preorder the goal is first closed downward, which is how the
/// order-aware cover is evaluated throughout.
pub fn cover(
    w: &InteractionStructure,
    goal: &Subset,
    preorder: Option<&Relation>,
) -> Result<CoverResult> {
    w.require_homogeneous()?;
    check_same_space(w.source(), goal.space())?;
    let seed = match preorder {
        None => goal.clone(),
        Some(leq) => {
            leq.check_preorder()?;
            check_same_space(w.source(), leq.domain())?;
            leq.angelic_update(goal)?
        }
    };
    let n = w.source().len();
    let mut stage: Vec<Option<u32>> = vec![None; n];
    let mut witness: Vec<Option<usize>> = vec![None; n];
    let mut current = seed;
    for s in current.members() {
        stage[s] = Some(0);
    }
    let mut rounds = 0;
    loop {
        let mut extension = Vec::new();
        for s in 0..n {
            if stage[s].is_some() {
                continue;
            }
            let found = w
                .commands(s)
                .iter()
                .position(|c| c.responses.iter().all(|r| current.member(r.next)));
            if let Some(a) = found {
                extension.push((s, a));
            }
        }
        if extension.is_empty() {
            return Ok(CoverResult {
                subset: current,
                stage,
                witness,
                rounds,
            });
        }
        rounds += 1;
        for (s, a) in extension {
            stage[s] = Some(rounds);
            witness[s] = Some(a);
            current = current.with_member(s);
        }
    }
}

/// The states on which the Demon can keep `safe` forever.
pub fn interior(w: &InteractionStructure, safe: &Subset) -> Result<InteriorResult> {
    w.require_homogeneous()?;
    check_same_space(w.source(), safe.space())?;
    let mut current = safe.clone();
    let mut rounds = 0;
    loop {
        let survives = |s: usize| {
            w.commands(s)
                .iter()
                .all(|c| c.responses.iter().any(|r| current.member(r.next)))
        };
        let next = Subset::from_indices(w.source(), current.members().filter(|s| survives(*s)));
        if next == current {
            break;
        }
        current = next;
        rounds += 1;
    }
    let mut choice = BTreeMap::new();
    for s in current.members() {
        for (a, c) in w.commands(s).iter().enumerate() {
            let d = c
                .responses
                .iter()
                .position(|r| current.member(r.next))
                .expect("fixpoint member has a surviving response for every command");
            choice.insert((s, a), d);
        }
    }
    Ok(InteriorResult {
        subset: current,
        choice,
        rounds,
    })
}

/// Join in the lattice of fixed points of the cover.
pub fn open_join(w: &InteractionStructure, parts: &[Subset]) -> Result<Subset> {
    let mut acc = Subset::empty(w.source());
    for u in parts {
        acc = acc.union(u)?;
    }
    Ok(cover(w, &acc, None)?.subset)
}

/// Meet in the lattice of fixed points of the interior.
pub fn closed_meet(w: &InteractionStructure, parts: &[Subset]) -> Result<Subset> {
    let mut acc = Subset::full(w.source());
    for v in parts {
        acc = acc.intersection(v)?;
    }
    Ok(interior(w, &acc)?.subset)
}

pub fn is_open(w: &InteractionStructure, u: &Subset) -> Result<bool> {
    Ok(cover(w, u, None)?.subset == *u)
}

pub fn is_closed(w: &InteractionStructure, v: &Subset) -> Result<bool> {
    Ok(interior(w, v)?.subset == *v)
}

/// The positivity predicate: states where the Demon survives the full space.
pub fn positivity(w: &InteractionStructure) -> Result<Subset> {
    Ok(interior(w, &Subset::full(w.source()))?.subset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn cover_of_count3_goal() {
        let w = fixtures::count3();
        let goal = Subset::singleton(w.source(), 2);
        let result = cover(&w, &goal, None).unwrap();
        assert_eq!(result.subset, Subset::full(w.source()));
        assert_eq!(result.stage(2), Some(0));
        assert_eq!(result.stage(1), Some(1));
        assert_eq!(result.stage(0), Some(2));
        assert_eq!(result.witness(1), Some(0));
        assert_eq!(result.witness(2), None);
    }

    #[test]
    fn cover_of_coin_win_is_stuck() {
        let w = fixtures::coin();
        let goal = Subset::singleton(w.source(), 1);
        let result = cover(&w, &goal, None).unwrap();
        assert_eq!(result.subset, goal);
    }

    #[test]
    fn cover_is_extensive() {
        let w = fixtures::coin();
        for u in Subset::enumerate_all(w.source()) {
            let result = cover(&w, &u, None).unwrap();
            assert!(u.is_subset_of(&result.subset).unwrap());
            assert!(result.rounds() as usize <= w.source().len() + 1);
        }
    }

    #[test]
    fn interior_on_count3() {
        let w = fixtures::count3();
        let full = Subset::full(w.source());
        let result = interior(&w, &full).unwrap();
        assert_eq!(result.subset, full);
        assert_eq!(result.choice(0, 0), Some(0));

        let clipped = Subset::from_indices(w.source(), [0, 1]);
        let result = interior(&w, &clipped).unwrap();
        assert!(result.subset.is_empty());
        assert_eq!(result.rounds(), 2);
    }

    #[test]
    fn interior_on_coin() {
        let w = fixtures::coin();
        let safe = Subset::from_indices(w.source(), [0, 1]);
        let result = interior(&w, &safe).unwrap();
        assert_eq!(result.subset, safe);
        assert_eq!(result.choice(0, 0), Some(0));
    }

    #[test]
    fn lattice_ops_on_count3() {
        let w = fixtures::count3();
        assert_eq!(positivity(&w).unwrap(), Subset::full(w.source()));
        let joined = open_join(&w, &[Subset::singleton(w.source(), 2)]).unwrap();
        assert_eq!(joined, Subset::full(w.source()));
        for u in Subset::enumerate_all(w.source()) {
            let c = cover(&w, &u, None).unwrap().subset;
            assert!(is_open(&w, &c).unwrap());
        }
    }

    #[test]
    fn cover_with_preorder_closes_goal_downward() {
        let w = fixtures::coin();
        let sp = w.source().clone();
        // win ≥ s in the order s ≤ win, plus reflexivity
        let leq = Relation::identity(&sp).with_pair(0, 1);
        let goal = Subset::singleton(&sp, 1);
        let result = cover(&w, &goal, Some(&leq)).unwrap();
        assert_eq!(result.subset, Subset::from_indices(&sp, [0, 1]));
        assert_eq!(result.stage(0), Some(0));

        let not_transitive = Relation::identity(&sp).with_pair(0, 1).with_pair(1, 2);
        assert!(cover(&w, &goal, Some(&not_transitive)).is_err());
    }

    #[test]
    fn rejects_heterogeneous_structures() {
        let w = fixtures::count3();
        let other = fixtures::coin();
        let hetero = InteractionStructure::from_parts(
            w.source(),
            other.source(),
            vec![vec![], vec![], vec![]],
        )
        .unwrap();
        assert!(cover(&hetero, &Subset::empty(other.source()), None).is_err());
        assert!(interior(&hetero, &Subset::empty(other.source())).is_err());
    }
}
