//! The point-free layer induced by a structure: cover and interior as
//! closure/interior operators, a self-simulation preorder, order-aware
//! covers, localization, convergence, formal points, and the continuity
//! conditions that characterize simulations.

use crate::error::{Error, Result};
use crate::fixpoint::{cover, interior, CoverResult, InteriorResult};
use crate::istruct::InteractionStructure;
use crate::relation::Relation;
use crate::simulation::{check_sim, GeneralSimCert, SimCert, SimCounterexample, SimKind};
use crate::space::{check_same_space, Subset};

/// A homogeneous structure together with a preorder whose converse is a
/// certified self-simulation: `s ≤ s'` reads "s simulates s'".
#[derive(Debug, Clone)]
pub struct SelfSimulation {
    structure: InteractionStructure,
    leq: Relation,
    cert: GeneralSimCert,
}

impl SelfSimulation {
    pub fn new(structure: InteractionStructure, leq: Relation) -> Result<SelfSimulation> {
        structure.require_homogeneous()?;
        check_same_space(structure.source(), leq.domain())?;
        leq.check_preorder()?;
        let geq = leq.converse();
        match check_sim(&structure, &structure, &geq, SimKind::General)? {
            Ok(SimCert::General(cert)) => Ok(SelfSimulation {
                structure,
                leq,
                cert,
            }),
            Ok(_) => unreachable!("general checking yields general certificates"),
            Err(cex) => Err(Error::Invalid(format!(
                "the converse order is not a self-simulation: stuck at (`{}`, `{}`), command index {}",
                structure.source().state_name(cex.high_state),
                structure.source().state_name(cex.low_state),
                cex.command
            ))),
        }
    }

    pub fn structure(&self) -> &InteractionStructure {
        &self.structure
    }

    pub fn leq(&self) -> &Relation {
        &self.leq
    }

    pub fn cert(&self) -> &GeneralSimCert {
        &self.cert
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq.contains(a, b)
    }

    /// `↓U = { s | s ≤ s' for some s' in U }`.
    pub fn down_closure(&self, u: &Subset) -> Result<Subset> {
        self.leq.angelic_update(u)
    }

    /// `↑U = { s | s' ≤ s for some s' in U }`.
    pub fn up_closure(&self, u: &Subset) -> Result<Subset> {
        self.leq.converse().angelic_update(u)
    }

    /// The meet representative `U ↓ V = ↓U ∩ ↓V`.
    pub fn bin_down(&self, u: &Subset, v: &Subset) -> Result<Subset> {
        self.down_closure(u)?.intersection(&self.down_closure(v)?)
    }

    /// Order-aware cover: the plain cover of the down-closed goal.
    pub fn localized_cover(&self, goal: &Subset) -> Result<CoverResult> {
        cover(&self.structure, goal, Some(&self.leq))
    }

    /// Order-aware interior: the plain interior of the up-closed predicate.
    pub fn localized_interior(&self, safe: &Subset) -> Result<InteriorResult> {
        interior(&self.structure, &self.up_closure(safe)?)
    }
}

/// An order pair and a command at the larger state that the smaller state
/// cannot track while staying below both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalizedCounterexample {
    pub smaller: usize,
    pub larger: usize,
    pub command: usize,
}

/// Checks the localization condition of a self-simulation. The default
/// asks the smaller state to cover the meet of the step's successors with
/// itself; with `strict_one_step` a single step must do.
pub fn check_localized(
    ss: &SelfSimulation,
    strict_one_step: bool,
) -> Result<std::result::Result<(), LocalizedCounterexample>> {
    let w = ss.structure();
    for (s1, s2) in ss.leq().pairs() {
        for (a2, c2) in w.commands(s2).iter().enumerate() {
            let mut successors = Subset::empty(w.source());
            for r in &c2.responses {
                successors = successors.with_member(r.next);
            }
            let target = ss.bin_down(&successors, &Subset::singleton(w.source(), s1))?;
            let holds = if strict_one_step {
                w.one_step(&target, crate::istruct::Agent::Angel)?.member(s1)
            } else {
                cover(w, &target, None)?.subset.member(s1)
            };
            if !holds {
                return Ok(Err(LocalizedCounterexample {
                    smaller: s1,
                    larger: s2,
                    command: a2,
                }));
            }
        }
    }
    Ok(Ok(()))
}

/// The order `s ≤ s'` iff `s` covers the singleton `{s'}`; always a
/// certified self-simulation.
pub fn saturation_preorder(w: &InteractionStructure) -> Result<SelfSimulation> {
    w.require_homogeneous()?;
    let space = w.source().clone();
    let mut leq = Relation::empty(&space, &space);
    for target in 0..space.len() {
        let covered = cover(w, &Subset::singleton(&space, target), None)?.subset;
        for s in covered.members() {
            leq.set(s, target, true);
        }
    }
    SelfSimulation::new(w.clone(), leq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointFailure {
    NotClosed,
    Empty,
    NotConvergent { first: usize, second: usize },
}

impl std::fmt::Display for PointFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PointFailure::NotClosed => write!(f, "closed"),
            PointFailure::Empty => write!(f, "nonempty"),
            PointFailure::NotConvergent { .. } => write!(f, "convergent"),
        }
    }
}

/// A formal point: closed, inhabited, and convergent. The first failing
/// condition is reported.
pub fn check_formal_point(
    ss: &SelfSimulation,
    alpha: &Subset,
) -> Result<std::result::Result<(), PointFailure>> {
    check_same_space(ss.structure().source(), alpha.space())?;
    if ss.localized_interior(alpha)?.subset != *alpha {
        return Ok(Err(PointFailure::NotClosed));
    }
    if alpha.overlap(alpha)?.is_none() {
        return Ok(Err(PointFailure::Empty));
    }
    let space = ss.structure().source();
    for s1 in alpha.members() {
        for s2 in alpha.members() {
            let meet = ss.bin_down(
                &Subset::singleton(space, s1),
                &Subset::singleton(space, s2),
            )?;
            if meet.overlap(alpha)?.is_none() {
                return Ok(Err(PointFailure::NotConvergent {
                    first: s1,
                    second: s2,
                }));
            }
        }
    }
    Ok(Ok(()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContinuityFailure {
    NotSimulation(SimCounterexample),
    /// A low state not covered by the image of the high space.
    NotTotal { state: usize },
    /// A pair of high states whose image meet escapes the image of their
    /// meet.
    NotConvergent { first: usize, second: usize },
}

impl std::fmt::Display for ContinuityFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ContinuityFailure::NotSimulation(_) => write!(f, "simulation"),
            ContinuityFailure::NotTotal { .. } => write!(f, "totality"),
            ContinuityFailure::NotConvergent { .. } => write!(f, "convergence"),
        }
    }
}

/// A continuous map between two self-simulations: a general simulation
/// that is total and preserves meets, both evaluated with order-aware
/// covers on the low side.
pub fn check_continuous_map(
    relation: &Relation,
    high: &SelfSimulation,
    low: &SelfSimulation,
) -> Result<std::result::Result<(), ContinuityFailure>> {
    if let Err(cex) = check_sim(high.structure(), low.structure(), relation, SimKind::General)? {
        return Ok(Err(ContinuityFailure::NotSimulation(cex)));
    }
    let high_space = high.structure().source();
    let low_space = low.structure().source();
    let image_of_all = relation.image(&Subset::full(high_space))?;
    let covered = low.localized_cover(&image_of_all)?.subset;
    if let Some(state) = (0..low_space.len()).find(|s| !covered.member(*s)) {
        return Ok(Err(ContinuityFailure::NotTotal { state }));
    }
    for s1 in 0..high_space.len() {
        for s2 in 0..high_space.len() {
            let lhs = low.bin_down(&relation.row(s1), &relation.row(s2))?;
            let high_meet = high.bin_down(
                &Subset::singleton(high_space, s1),
                &Subset::singleton(high_space, s2),
            )?;
            let rhs = low.localized_cover(&relation.image(&high_meet)?)?.subset;
            if !lhs.is_subset_of(&rhs)? {
                return Ok(Err(ContinuityFailure::NotConvergent {
                    first: s1,
                    second: s2,
                }));
            }
        }
    }
    Ok(Ok(()))
}

/// Outcome of evaluating the two continuity inclusions for a relation
/// between the topologies of two structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContinuityReport {
    /// `R˘(A₂(V)) ⊆ A₁(R˘(V))` for the swept subsets `V`.
    pub cover_condition: bool,
    /// `R(J₁(U)) ⊆ J₂(R(U))` for the swept subsets `U`.
    pub interior_condition: bool,
    /// Whether the sweep was over all subsets.
    pub exhaustive: bool,
}

const EXHAUSTIVE_LIMIT: usize = 4;
const SAMPLE_COUNT: usize = 64;

/// Evaluates the two continuity inclusions of `relation` from the
/// topology of `first` to the topology of `second`, sweeping all subsets
/// for small spaces and a seeded sample otherwise.
pub fn continuity_conditions(
    relation: &Relation,
    first: &InteractionStructure,
    second: &InteractionStructure,
    force_exhaustive: bool,
) -> Result<ContinuityReport> {
    first.require_homogeneous()?;
    second.require_homogeneous()?;
    check_same_space(first.source(), relation.domain())?;
    check_same_space(second.source(), relation.codomain())?;
    let exhaustive = force_exhaustive
        || (first.source().len() <= EXHAUSTIVE_LIMIT
            && second.source().len() <= EXHAUSTIVE_LIMIT);
    if exhaustive && (first.source().len() > 16 || second.source().len() > 16) {
        return Err(Error::SizeCapExceeded {
            state: first.source().name().to_string(),
            needed: 1usize << first.source().len().max(second.source().len()).min(63),
            cap: 1 << 16,
        });
    }

    let sweep = |w: &InteractionStructure, salt: u64| -> Vec<Subset> {
        if exhaustive {
            Subset::enumerate_all(w.source())
        } else {
            let mut state = 0x6a09e667f3bcc908u64 ^ salt;
            let mut next = move || {
                state = state.wrapping_add(0x9e3779b97f4a7c15);
                let mut z = state;
                z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
                z ^ (z >> 31)
            };
            let mut out = vec![Subset::empty(w.source()), Subset::full(w.source())];
            for _ in 0..SAMPLE_COUNT {
                let bits: Vec<usize> = (0..w.source().len())
                    .filter(|_| next() & 1 == 1)
                    .collect();
                out.push(Subset::from_indices(w.source(), bits));
            }
            out
        }
    };

    let mut cover_condition = true;
    for v in sweep(second, 1) {
        let lhs = relation.angelic_update(&cover(second, &v, None)?.subset)?;
        let rhs = cover(first, &relation.angelic_update(&v)?, None)?.subset;
        if !lhs.is_subset_of(&rhs)? {
            cover_condition = false;
            break;
        }
    }
    let mut interior_condition = true;
    for u in sweep(first, 2) {
        let lhs = relation.image(&interior(first, &u)?.subset)?;
        let rhs = interior(second, &relation.image(&u)?)?.subset;
        if !lhs.is_subset_of(&rhs)? {
            interior_condition = false;
            break;
        }
    }
    Ok(ContinuityReport {
        cover_condition,
        interior_condition,
        exhaustive,
    })
}
