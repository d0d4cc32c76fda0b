//! Simulation checking between two interfaces, with certificate
//! extraction. A certificate carries, for every related state pair and
//! high-level command, the low-level translation that sustains the
//! relation: one command (linear), an optional command (affine), or a
//! whole low-level client tree with an exit translation (tc, general).
//!
//! All witness searches pick least indices and stage-minimal trees, so
//! certificates are identical across runs.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fixpoint::cover;
use crate::istruct::InteractionStructure;
use crate::programs::{client_exits, tree_from_cover, ClientProgram, ClientTree};
use crate::relation::Relation;
use crate::space::{check_same_space, Subset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SimKind {
    /// One low-level step per high-level step.
    Linear,
    /// At most one low-level step per high-level step.
    Affine,
    /// At least one low-level step per high-level step.
    Tc,
    /// Any number of low-level steps per high-level step.
    General,
}

impl fmt::Display for SimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            SimKind::Linear => "linear",
            SimKind::Affine => "affine",
            SimKind::Tc => "tc",
            SimKind::General => "general",
        };
        f.write_str(label)
    }
}

impl std::str::FromStr for SimKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<SimKind> {
        match s {
            "linear" => Ok(SimKind::Linear),
            "affine" => Ok(SimKind::Affine),
            "tc" => Ok(SimKind::Tc),
            "general" => Ok(SimKind::General),
            other => Err(Error::Invalid(format!("unknown simulation kind `{other}`"))),
        }
    }
}

/// How one high-level command is matched in the one-step kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepWitness {
    /// Stay put (affine only): translate the silent step back as this
    /// high-level response.
    Stay { response: usize },
    /// Issue `command`; entry `d_l` of `responses` is the high-level
    /// response covering the low-level response `d_l`.
    Step {
        command: usize,
        responses: Vec<usize>,
    },
}

/// Certificate for the linear and affine kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSimCert {
    pub kind: SimKind,
    pub relation: Relation,
    pub witness: BTreeMap<(usize, usize, usize), StepWitness>,
}

/// How one high-level command is matched in the tree kinds: a low-level
/// client tree plus, for every complete response path, the high-level
/// response its exit realizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeWitness {
    pub tree: ClientTree,
    pub exits: BTreeMap<Vec<usize>, usize>,
}

/// Certificate for the tc and general kinds; consumed by cross-interface
/// execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralSimCert {
    pub kind: SimKind,
    pub relation: Relation,
    pub witness: BTreeMap<(usize, usize, usize), TreeWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimCert {
    Linear(LinearSimCert),
    General(GeneralSimCert),
}

impl SimCert {
    pub fn kind(&self) -> SimKind {
        match self {
            SimCert::Linear(c) => c.kind,
            SimCert::General(c) => c.kind,
        }
    }

    pub fn relation(&self) -> &Relation {
        match self {
            SimCert::Linear(c) => &c.relation,
            SimCert::General(c) => &c.relation,
        }
    }
}

/// A related pair and a high-level command that no translation sustains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimCounterexample {
    pub high_state: usize,
    pub low_state: usize,
    pub command: usize,
}

pub type SimOutcome = std::result::Result<SimCert, SimCounterexample>;

fn check_shapes(
    high: &InteractionStructure,
    low: &InteractionStructure,
    relation: &Relation,
) -> Result<()> {
    high.require_homogeneous()?;
    low.require_homogeneous()?;
    check_same_space(high.source(), relation.domain())?;
    check_same_space(low.source(), relation.codomain())
}

/// Exhaustive sustainability check for `relation`, with witness
/// extraction; a failure is reported as the offending
/// (high state, low state, command) triple.
pub fn check_sim(
    high: &InteractionStructure,
    low: &InteractionStructure,
    relation: &Relation,
    kind: SimKind,
) -> Result<SimOutcome> {
    check_shapes(high, low, relation)?;
    match kind {
        SimKind::Linear | SimKind::Affine => check_one_step(high, low, relation, kind),
        SimKind::Tc | SimKind::General => check_tree(high, low, relation, kind),
    }
}

fn step_witness(
    high: &InteractionStructure,
    low: &InteractionStructure,
    relation: &Relation,
    kind: SimKind,
    s_h: usize,
    s_l: usize,
    a_h: usize,
) -> Option<StepWitness> {
    let responses_h = &high.command(s_h, a_h).responses;
    if kind == SimKind::Affine {
        let stay = responses_h
            .iter()
            .position(|r| relation.contains(r.next, s_l));
        if let Some(response) = stay {
            return Some(StepWitness::Stay { response });
        }
    }
    'low: for (a_l, c_l) in low.commands(s_l).iter().enumerate() {
        let mut responses = Vec::with_capacity(c_l.responses.len());
        for r_l in &c_l.responses {
            match responses_h
                .iter()
                .position(|r_h| relation.contains(r_h.next, r_l.next))
            {
                Some(d_h) => responses.push(d_h),
                None => continue 'low,
            }
        }
        return Some(StepWitness::Step {
            command: a_l,
            responses,
        });
    }
    None
}

fn check_one_step(
    high: &InteractionStructure,
    low: &InteractionStructure,
    relation: &Relation,
    kind: SimKind,
) -> Result<SimOutcome> {
    let mut witness = BTreeMap::new();
    for (s_h, s_l) in relation.pairs() {
        for a_h in 0..high.commands(s_h).len() {
            match step_witness(high, low, relation, kind, s_h, s_l, a_h) {
                Some(found) => {
                    witness.insert((s_h, s_l, a_h), found);
                }
                None => {
                    return Ok(Err(SimCounterexample {
                        high_state: s_h,
                        low_state: s_l,
                        command: a_h,
                    }));
                }
            }
        }
    }
    Ok(Ok(SimCert::Linear(LinearSimCert {
        kind,
        relation: relation.clone(),
        witness,
    })))
}

fn check_tree(
    high: &InteractionStructure,
    low: &InteractionStructure,
    relation: &Relation,
    kind: SimKind,
) -> Result<SimOutcome> {
    let mut witness = BTreeMap::new();
    for s_h in 0..high.source().len() {
        let row = relation.row(s_h);
        if row.is_empty() {
            continue;
        }
        for a_h in 0..high.commands(s_h).len() {
            let targets = successor_union(high, relation, s_h, a_h)?;
            let derivation = cover(low, &targets, None)?;
            for s_l in row.members() {
                let tree = match kind {
                    SimKind::General => {
                        if derivation.stage(s_l).is_none() {
                            return Ok(Err(SimCounterexample {
                                high_state: s_h,
                                low_state: s_l,
                                command: a_h,
                            }));
                        }
                        tree_from_cover(low, s_l, &derivation)?
                    }
                    SimKind::Tc => {
                        // at least one step: a first command all of whose
                        // responses land in the covered region
                        let first = low.commands(s_l).iter().position(|c| {
                            c.responses
                                .iter()
                                .all(|r| derivation.stage(r.next).is_some())
                        });
                        match first {
                            None => {
                                return Ok(Err(SimCounterexample {
                                    high_state: s_h,
                                    low_state: s_l,
                                    command: a_h,
                                }));
                            }
                            Some(a_l) => {
                                let branches = low
                                    .command(s_l, a_l)
                                    .responses
                                    .iter()
                                    .map(|r| tree_from_cover(low, r.next, &derivation))
                                    .collect::<Result<Vec<_>>>()?;
                                ClientTree::Call {
                                    command: a_l,
                                    branches,
                                }
                            }
                        }
                    }
                    _ => unreachable!(),
                };
                let program = ClientProgram { root: s_l, tree };
                let mut exits = BTreeMap::new();
                for (path, exit) in client_exits(low, &program)? {
                    let d_h = high
                        .command(s_h, a_h)
                        .responses
                        .iter()
                        .position(|r| relation.contains(r.next, exit))
                        .expect("cover exit lands in a related successor");
                    exits.insert(path, d_h);
                }
                witness.insert(
                    (s_h, s_l, a_h),
                    TreeWitness {
                        tree: program.tree,
                        exits,
                    },
                );
            }
        }
    }
    Ok(Ok(SimCert::General(GeneralSimCert {
        kind,
        relation: relation.clone(),
        witness,
    })))
}

fn successor_union(
    high: &InteractionStructure,
    relation: &Relation,
    s_h: usize,
    a_h: usize,
) -> Result<Subset> {
    let mut acc = Subset::empty(relation.codomain());
    for r_h in &high.command(s_h, a_h).responses {
        acc = acc.union(&relation.row(r_h.next))?;
    }
    Ok(acc)
}

/// The union of all simulations of the given kind, by pruning the full
/// relation until the kind's condition holds at every pair. The result
/// always admits a certificate. Only the linear and general kinds are
/// supported.
pub fn greatest_sim(
    high: &InteractionStructure,
    low: &InteractionStructure,
    kind: SimKind,
) -> Result<Relation> {
    if !matches!(kind, SimKind::Linear | SimKind::General) {
        return Err(Error::Invalid(format!(
            "greatest simulation is computed for the linear and general kinds, not {kind}"
        )));
    }
    high.require_homogeneous()?;
    low.require_homogeneous()?;
    let mut relation = Relation::full(high.source(), low.source());
    loop {
        let mut removals = Vec::new();
        match kind {
            SimKind::Linear => {
                for (s_h, s_l) in relation.pairs() {
                    let ok = (0..high.commands(s_h).len()).all(|a_h| {
                        step_witness(high, low, &relation, kind, s_h, s_l, a_h).is_some()
                    });
                    if !ok {
                        removals.push((s_h, s_l));
                    }
                }
            }
            SimKind::General => {
                for s_h in 0..high.source().len() {
                    let row = relation.row(s_h);
                    if row.is_empty() {
                        continue;
                    }
                    for a_h in 0..high.commands(s_h).len() {
                        let targets = successor_union(high, &relation, s_h, a_h)?;
                        let covered = cover(low, &targets, None)?.subset;
                        for s_l in row.members() {
                            if !covered.member(s_l) {
                                removals.push((s_h, s_l));
                            }
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        if removals.is_empty() {
            return Ok(relation);
        }
        for (s_h, s_l) in removals {
            relation = relation.without_pair(s_h, s_l);
        }
    }
}

/// Composition in the Kleisli category: plain relational composition of
/// two general simulations.
pub fn kleisli_compose(first: &Relation, second: &Relation) -> Result<Relation> {
    first.compose(second)
}

/// Row-wise cover closure: relates a high state to every low state from
/// which the Angel can reach its old counterparts.
pub fn saturate(relation: &Relation, low: &InteractionStructure) -> Result<Relation> {
    low.require_homogeneous()?;
    check_same_space(relation.codomain(), low.source())?;
    let mut out = Relation::empty(relation.domain(), relation.codomain());
    for s_h in 0..relation.domain().len() {
        let closed = cover(low, &relation.row(s_h), None)?.subset;
        for s_l in closed.members() {
            out.set(s_h, s_l, true);
        }
    }
    Ok(out)
}

/// Outcome of comparing two simulations by their saturations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimComparison {
    /// The left simulation is weaker (saturation included in the right's).
    Leq,
    /// The left simulation is stronger.
    Geq,
    Equivalent,
    Incomparable,
}

impl fmt::Display for SimComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            SimComparison::Leq => "leq",
            SimComparison::Geq => "geq",
            SimComparison::Equivalent => "equiv",
            SimComparison::Incomparable => "incomparable",
        };
        f.write_str(label)
    }
}

pub fn sim_compare(
    first: &Relation,
    second: &Relation,
    low: &InteractionStructure,
) -> Result<SimComparison> {
    let sat_first = saturate(first, low)?;
    let sat_second = saturate(second, low)?;
    let leq = sat_first.is_subset_of(&sat_second)?;
    let geq = sat_second.is_subset_of(&sat_first)?;
    Ok(match (leq, geq) {
        (true, true) => SimComparison::Equivalent,
        (true, false) => SimComparison::Leq,
        (false, true) => SimComparison::Geq,
        (false, false) => SimComparison::Incomparable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn certifies(
        high: &InteractionStructure,
        low: &InteractionStructure,
        relation: &Relation,
        kind: SimKind,
    ) -> bool {
        check_sim(high, low, relation, kind).unwrap().is_ok()
    }

    #[test]
    fn identity_is_a_linear_simulation() {
        let w = fixtures::count3();
        let identity = Relation::identity(w.source());
        assert!(certifies(&w, &w, &identity, SimKind::Linear));
    }

    #[test]
    fn empty_relation_certifies_every_kind() {
        let high = fixtures::jump2();
        let low = fixtures::coin();
        let empty = Relation::empty(high.source(), low.source());
        for kind in [SimKind::Linear, SimKind::Affine, SimKind::Tc, SimKind::General] {
            assert!(certifies(&high, &low, &empty, kind));
        }
    }

    #[test]
    fn jump_into_count3_needs_the_general_kind() {
        let high = fixtures::jump2();
        let low = fixtures::count3();
        let relation = Relation::from_pairs(high.source(), low.source(), [(0, 0), (1, 2)]);
        let outcome = check_sim(&high, &low, &relation, SimKind::Linear).unwrap();
        assert_eq!(
            outcome.unwrap_err(),
            SimCounterexample {
                high_state: 0,
                low_state: 0,
                command: 0
            }
        );
        let outcome = check_sim(&high, &low, &relation, SimKind::General).unwrap();
        let cert = match outcome.unwrap() {
            SimCert::General(c) => c,
            other => panic!("unexpected certificate {other:?}"),
        };
        let witness = cert.witness.get(&(0, 0, 0)).unwrap();
        assert_eq!(witness.tree.depth(), 2);
        assert_eq!(witness.exits.get(&vec![0, 0]), Some(&0));
        // two steps are too many for tc? tc allows >= 1, so it certifies too
        assert!(certifies(&high, &low, &relation, SimKind::Tc));
        // but affine (at most one step) does not
        assert!(!certifies(&high, &low, &relation, SimKind::Affine));
    }

    #[test]
    fn affine_stays_put_when_the_high_step_is_silent() {
        let high = fixtures::count3();
        let low = fixtures::coin();
        // map everything to the coin's terminal `win` state; count3's incs
        // translate to silent steps only if the next state is still related
        let relation = Relation::from_pairs(high.source(), low.source(), [(0, 1), (1, 1), (2, 1)]);
        assert!(!certifies(&high, &low, &relation, SimKind::Linear));
        let outcome = check_sim(&high, &low, &relation, SimKind::Affine).unwrap();
        let cert = match outcome.unwrap() {
            SimCert::Linear(c) => c,
            other => panic!("unexpected certificate {other:?}"),
        };
        assert_eq!(
            cert.witness.get(&(0, 1, 0)),
            Some(&StepWitness::Stay { response: 0 })
        );
    }

    #[test]
    fn greatest_linear_sim_on_count3() {
        let w = fixtures::count3();
        let greatest = greatest_sim(&w, &w, SimKind::Linear).unwrap();
        let expected = Relation::from_pairs(
            w.source(),
            w.source(),
            [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)],
        );
        assert_eq!(greatest, expected);
        assert!(certifies(&w, &w, &greatest, SimKind::Linear));
    }

    #[test]
    fn greatest_general_sim_on_count3_is_full() {
        let w = fixtures::count3();
        let greatest = greatest_sim(&w, &w, SimKind::General).unwrap();
        assert_eq!(greatest, Relation::full(w.source(), w.source()));
        assert!(certifies(&w, &w, &greatest, SimKind::General));
    }

    #[test]
    fn greatest_sim_contains_identity() {
        for w in [fixtures::count3(), fixtures::coin(), fixtures::magic()] {
            let identity = Relation::identity(w.source());
            for kind in [SimKind::Linear, SimKind::General] {
                let greatest = greatest_sim(&w, &w, kind).unwrap();
                assert!(identity.is_subset_of(&greatest).unwrap());
            }
        }
    }

    #[test]
    fn saturation_on_count3() {
        let w = fixtures::count3();
        let r = Relation::from_pairs(w.source(), w.source(), [(2, 2)]);
        let saturated = saturate(&r, &w).unwrap();
        let expected = Relation::from_pairs(w.source(), w.source(), [(2, 0), (2, 1), (2, 2)]);
        assert_eq!(saturated, expected);
        assert_eq!(saturate(&saturated, &w).unwrap(), saturated);
        assert_eq!(sim_compare(&r, &saturated, &w).unwrap(), SimComparison::Equivalent);

        let empty = Relation::empty(w.source(), w.source());
        assert_eq!(saturate(&empty, &w).unwrap(), empty);
        assert!(matches!(
            sim_compare(&empty, &r, &w).unwrap(),
            SimComparison::Leq | SimComparison::Equivalent
        ));
    }

    #[test]
    fn kleisli_unit_laws() {
        let high = fixtures::jump2();
        let low = fixtures::count3();
        let relation = Relation::from_pairs(high.source(), low.source(), [(0, 0), (1, 2)]);
        let id_high = Relation::identity(high.source());
        let id_low = Relation::identity(low.source());
        assert_eq!(kleisli_compose(&id_high, &relation).unwrap(), relation);
        assert_eq!(kleisli_compose(&relation, &id_low).unwrap(), relation);
        // composing with the identity simulation still certifies
        assert!(certifies(&high, &low, &relation, SimKind::General));
    }

    #[test]
    fn space_mismatch_is_reported() {
        let high = fixtures::count3();
        let low = fixtures::coin();
        let wrong = Relation::identity(high.source());
        assert!(check_sim(&high, &low, &wrong, SimKind::Linear).is_err());
    }
}
