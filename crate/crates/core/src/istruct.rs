//! Interaction structures: per-state command families, per-command response
//! families, and a next-state map. The one-step transformers, the dual, and
//! the whole lattice/monoid algebra live here.
//!
//! Synthesized command and response names are structured strings built with
//! `·` (pairing), `↦` (function entries), `:` (tags) and `ε` (empty), so
//! that derived structures stay readable and printable in model syntax.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::space::{check_same_space, Space, StateSpace, Subset};
use crate::transition::TransitionStructure;

/// Default cap on per-state enumeration for the exponential constructions
/// (dual, sequential composition, intersections, localization).
pub const DEFAULT_SIZE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub name: String,
    pub next: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub name: String,
    pub responses: Vec<Response>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agent {
    Angel,
    Demon,
}

/// Reference to a command at a state; used in diagnostics and witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CommandRef {
    pub state: usize,
    pub command: usize,
}

/// Reference to a response of a command at a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ResponseRef {
    pub state: usize,
    pub command: usize,
    pub response: usize,
}

/// A well-formedness defect, located by state/command/response names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.location, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionStructure {
    source: Space,
    target: Space,
    entries: Vec<Vec<Command>>,
}

impl InteractionStructure {
    /// Builds a structure and checks every invariant; the violation list
    /// is folded into the error message.
    pub fn from_parts(source: &Space, target: &Space, entries: Vec<Vec<Command>>) -> Result<Self> {
        let w = Self::from_raw_parts(source, target, entries);
        let violations = w.validate();
        if violations.is_empty() {
            Ok(w)
        } else {
            Err(Error::Invalid(
                violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            ))
        }
    }

    /// Builds a structure without checking invariants. Callers are expected
    /// to run [`validate`](Self::validate) before using it.
    pub fn from_raw_parts(source: &Space, target: &Space, entries: Vec<Vec<Command>>) -> Self {
        InteractionStructure {
            source: source.clone(),
            target: target.clone(),
            entries,
        }
    }

    /// Checks every type invariant; never panics, returns one entry per
    /// violation found.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.entries.len() != self.source.len() {
            out.push(Violation {
                location: format!("structure over `{}`", self.source.name()),
                message: format!(
                    "command table has {} rows for {} states",
                    self.entries.len(),
                    self.source.len()
                ),
            });
            return out;
        }
        for (s, commands) in self.entries.iter().enumerate() {
            let state = self.source.state_name(s);
            let mut seen = std::collections::HashSet::new();
            for (a, command) in commands.iter().enumerate() {
                if !seen.insert(command.name.as_str()) {
                    out.push(Violation {
                        location: format!("state `{state}`"),
                        message: format!("duplicate command name `{}`", command.name),
                    });
                }
                let mut seen_d = std::collections::HashSet::new();
                for (d, response) in command.responses.iter().enumerate() {
                    if !seen_d.insert(response.name.as_str()) {
                        out.push(Violation {
                            location: format!("state `{state}`, command `{}`", command.name),
                            message: format!("duplicate response name `{}`", response.name),
                        });
                    }
                    if response.next >= self.target.len() {
                        out.push(Violation {
                            location: format!(
                                "state `{state}`, command `{}`, response `{}` (s={s},a={a},d={d})",
                                command.name, response.name
                            ),
                            message: format!(
                                "next index {} exceeds target space `{}` of size {}",
                                response.next,
                                self.target.name(),
                                self.target.len()
                            ),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn is_homogeneous(&self) -> bool {
        self.source == self.target
    }

    pub(crate) fn require_homogeneous(&self) -> Result<()> {
        if self.is_homogeneous() {
            Ok(())
        } else {
            Err(Error::NotHomogeneous {
                source_space: self.source.name().to_string(),
                target_space: self.target.name().to_string(),
            })
        }
    }

    pub fn commands(&self, state: usize) -> &[Command] {
        &self.entries[state]
    }

    pub fn command(&self, state: usize, command: usize) -> &Command {
        &self.entries[state][command]
    }

    pub fn next(&self, state: usize, command: usize, response: usize) -> usize {
        self.entries[state][command].responses[response].next
    }

    /// One-step transformer: for the Angel `∃a ∀d`, for the Demon `∀a ∃d`.
    pub fn one_step(&self, u: &Subset, agent: Agent) -> Result<Subset> {
        check_same_space(&self.target, u.space())?;
        let holds = |s: usize| -> bool {
            match agent {
                Agent::Angel => self.entries[s]
                    .iter()
                    .any(|c| c.responses.iter().all(|r| u.member(r.next))),
                Agent::Demon => self.entries[s]
                    .iter()
                    .all(|c| c.responses.iter().any(|r| u.member(r.next))),
            }
        };
        Ok(Subset::from_indices(
            &self.source,
            (0..self.source.len()).filter(|s| holds(*s)),
        ))
    }

    /// Number of choice functions at `state`: the product of the response
    /// counts, with the empty product equal to one.
    pub fn choice_function_count(&self, state: usize) -> Option<usize> {
        self.entries[state]
            .iter()
            .try_fold(1usize, |acc, c| acc.checked_mul(c.responses.len()))
    }

    /// Swaps the agents: commands of the dual are the choice functions
    /// `a ↦ d`, enumerated lexicographically (command-major), and its
    /// responses are the original commands.
    pub fn dual(&self, cap: usize) -> Result<InteractionStructure> {
        let mut entries = Vec::with_capacity(self.source.len());
        for s in 0..self.source.len() {
            let commands = &self.entries[s];
            let count = self.choice_function_count(s).unwrap_or(usize::MAX);
            if count > cap {
                return Err(Error::SizeCapExceeded {
                    state: self.source.state_name(s).to_string(),
                    needed: count,
                    cap,
                });
            }
            let mut row = Vec::with_capacity(count);
            for pick in Odometer::new(commands.iter().map(|c| c.responses.len()).collect()) {
                let name = if pick.is_empty() {
                    "ε".to_string()
                } else {
                    pick.iter()
                        .enumerate()
                        .map(|(a, d)| {
                            format!("{}↦{}", commands[a].name, commands[a].responses[*d].name)
                        })
                        .collect::<Vec<_>>()
                        .join("·")
                };
                let responses = pick
                    .iter()
                    .enumerate()
                    .map(|(a, d)| Response {
                        name: commands[a].name.clone(),
                        next: commands[a].responses[*d].next,
                    })
                    .collect();
                row.push(Command { name, responses });
            }
            entries.push(row);
        }
        Ok(InteractionStructure {
            source: self.source.clone(),
            target: self.target.clone(),
            entries,
        })
    }

    /// Unit: a single command with a single response that stays in place.
    pub fn skip(space: &Space) -> InteractionStructure {
        InteractionStructure {
            source: space.clone(),
            target: space.clone(),
            entries: (0..space.len())
                .map(|s| {
                    vec![Command {
                        name: "*".into(),
                        responses: vec![Response {
                            name: "*".into(),
                            next: s,
                        }],
                    }]
                })
                .collect(),
        }
    }

    /// Angelic update of a transition structure: its labels become
    /// commands, each with a single response.
    pub fn angelic(t: &TransitionStructure) -> InteractionStructure {
        InteractionStructure {
            source: t.source().clone(),
            target: t.target().clone(),
            entries: (0..t.source().len())
                .map(|s| {
                    t.arrows_at(s)
                        .iter()
                        .map(|a| Command {
                            name: a.label.clone(),
                            responses: vec![Response {
                                name: "*".into(),
                                next: a.next,
                            }],
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// Demonic update of a transition structure: a single command whose
    /// responses are the labels.
    pub fn demonic(t: &TransitionStructure) -> InteractionStructure {
        InteractionStructure {
            source: t.source().clone(),
            target: t.target().clone(),
            entries: (0..t.source().len())
                .map(|s| {
                    vec![Command {
                        name: "*".into(),
                        responses: t
                            .arrows_at(s)
                            .iter()
                            .map(|a| Response {
                                name: a.label.clone(),
                                next: a.next,
                            })
                            .collect(),
                    }]
                })
                .collect(),
        }
    }

    /// Indexed union; the empty union has no commands anywhere (bottom of
    /// the lattice).
    pub fn union_all(
        source: &Space,
        target: &Space,
        members: &[&InteractionStructure],
    ) -> Result<InteractionStructure> {
        for w in members {
            check_same_space(source, &w.source)?;
            check_same_space(target, &w.target)?;
        }
        let entries = (0..source.len())
            .map(|s| {
                let mut row = Vec::new();
                for (i, w) in members.iter().enumerate() {
                    for c in &w.entries[s] {
                        row.push(Command {
                            name: format!("{i}:{}", c.name),
                            responses: c.responses.clone(),
                        });
                    }
                }
                row
            })
            .collect();
        Ok(InteractionStructure {
            source: source.clone(),
            target: target.clone(),
            entries,
        })
    }

    /// Indexed intersection; commands are tuples picking one command per
    /// member, responses are tagged. The empty intersection has one
    /// response-free command everywhere (top of the lattice).
    pub fn intersection_all(
        source: &Space,
        target: &Space,
        members: &[&InteractionStructure],
        cap: usize,
    ) -> Result<InteractionStructure> {
        for w in members {
            check_same_space(source, &w.source)?;
            check_same_space(target, &w.target)?;
        }
        let mut entries = Vec::with_capacity(source.len());
        for s in 0..source.len() {
            let counts: Vec<usize> = members.iter().map(|w| w.entries[s].len()).collect();
            let total = counts
                .iter()
                .try_fold(1usize, |acc, c| acc.checked_mul(*c))
                .unwrap_or(usize::MAX);
            if total > cap {
                return Err(Error::SizeCapExceeded {
                    state: source.state_name(s).to_string(),
                    needed: total,
                    cap,
                });
            }
            let mut row = Vec::with_capacity(total);
            for pick in Odometer::new(counts) {
                let name = if pick.is_empty() {
                    "ε".to_string()
                } else {
                    pick.iter()
                        .enumerate()
                        .map(|(i, a)| members[i].entries[s][*a].name.clone())
                        .collect::<Vec<_>>()
                        .join("·")
                };
                let mut responses = Vec::new();
                for (i, a) in pick.iter().enumerate() {
                    for r in &members[i].entries[s][*a].responses {
                        responses.push(Response {
                            name: format!("{i}:{}", r.name),
                            next: r.next,
                        });
                    }
                }
                row.push(Command { name, responses });
            }
            entries.push(row);
        }
        Ok(InteractionStructure {
            source: source.clone(),
            target: target.clone(),
            entries,
        })
    }

    /// Sequential composition: a command is a first-step command together
    /// with a continuation mapping each response to a second-step command.
    pub fn seq(
        first: &InteractionStructure,
        second: &InteractionStructure,
        cap: usize,
    ) -> Result<InteractionStructure> {
        check_same_space(&first.target, &second.source)?;
        let mut entries = Vec::with_capacity(first.source.len());
        for s in 0..first.source.len() {
            let mut total = 0usize;
            let mut row = Vec::new();
            for c1 in &first.entries[s] {
                let branch_counts: Vec<usize> = c1
                    .responses
                    .iter()
                    .map(|r| second.entries[r.next].len())
                    .collect();
                let count = branch_counts
                    .iter()
                    .try_fold(1usize, |acc, c| acc.checked_mul(*c))
                    .unwrap_or(usize::MAX);
                total = total.saturating_add(count);
                if total > cap {
                    return Err(Error::SizeCapExceeded {
                        state: first.source.state_name(s).to_string(),
                        needed: total,
                        cap,
                    });
                }
                for pick in Odometer::new(branch_counts) {
                    let continuation = if pick.is_empty() {
                        "ε".to_string()
                    } else {
                        pick.iter()
                            .enumerate()
                            .map(|(d1, a2)| {
                                format!(
                                    "{}↦{}",
                                    c1.responses[d1].name,
                                    second.entries[c1.responses[d1].next][*a2].name
                                )
                            })
                            .collect::<Vec<_>>()
                            .join("·")
                    };
                    let mut responses = Vec::new();
                    for (d1, a2) in pick.iter().enumerate() {
                        let mid = c1.responses[d1].next;
                        for r2 in &second.entries[mid][*a2].responses {
                            responses.push(Response {
                                name: format!("{}·{}", c1.responses[d1].name, r2.name),
                                next: r2.next,
                            });
                        }
                    }
                    row.push(Command {
                        name: format!("{}·{}", c1.name, continuation),
                        responses,
                    });
                }
            }
            entries.push(row);
        }
        Ok(InteractionStructure {
            source: first.source.clone(),
            target: second.target.clone(),
            entries,
        })
    }

    /// Lock-step product: both sides issue a command and step together.
    pub fn tensor(
        left: &InteractionStructure,
        right: &InteractionStructure,
    ) -> Result<InteractionStructure> {
        let source = product_space(&left.source, &right.source)?;
        let target = if left.is_homogeneous() && right.is_homogeneous() {
            source.clone()
        } else {
            product_space(&left.target, &right.target)?
        };
        let rn = right.source.len();
        let tn = right.target.len();
        let mut entries = Vec::with_capacity(source.len());
        for s1 in 0..left.source.len() {
            for s2 in 0..rn {
                let mut row = Vec::new();
                for c1 in &left.entries[s1] {
                    for c2 in &right.entries[s2] {
                        let mut responses = Vec::new();
                        for r1 in &c1.responses {
                            for r2 in &c2.responses {
                                responses.push(Response {
                                    name: format!("{}·{}", r1.name, r2.name),
                                    next: r1.next * tn + r2.next,
                                });
                            }
                        }
                        row.push(Command {
                            name: format!("{}·{}", c1.name, c2.name),
                            responses,
                        });
                    }
                }
                entries.push(row);
            }
        }
        Ok(InteractionStructure {
            source,
            target,
            entries,
        })
    }

    /// Angelic product: the Angel picks a side; only that side steps.
    /// Both factors must be homogeneous (the idle side keeps its state).
    pub fn angelic_product(
        left: &InteractionStructure,
        right: &InteractionStructure,
    ) -> Result<InteractionStructure> {
        left.require_homogeneous()?;
        right.require_homogeneous()?;
        let space = product_space(&left.source, &right.source)?;
        let rn = right.source.len();
        let mut entries = Vec::with_capacity(space.len());
        for s1 in 0..left.source.len() {
            for s2 in 0..rn {
                let mut row = Vec::new();
                for c1 in &left.entries[s1] {
                    row.push(Command {
                        name: format!("inl:{}", c1.name),
                        responses: c1
                            .responses
                            .iter()
                            .map(|r| Response {
                                name: r.name.clone(),
                                next: r.next * rn + s2,
                            })
                            .collect(),
                    });
                }
                for c2 in &right.entries[s2] {
                    row.push(Command {
                        name: format!("inr:{}", c2.name),
                        responses: c2
                            .responses
                            .iter()
                            .map(|r| Response {
                                name: r.name.clone(),
                                next: s1 * rn + r.next,
                            })
                            .collect(),
                    });
                }
                entries.push(row);
            }
        }
        Ok(InteractionStructure {
            source: space.clone(),
            target: space,
            entries,
        })
    }

    /// Splits the structure into an issuing transition structure (labelled
    /// by commands, into pending states) followed by a performing one
    /// (labelled by responses, out of pending states).
    pub fn factorize(&self) -> Result<Factorization> {
        let mut mid_names = Vec::new();
        let mut mid_index = HashMap::new();
        for (s, commands) in self.entries.iter().enumerate() {
            for (a, c) in commands.iter().enumerate() {
                mid_index.insert((s, a), mid_names.len());
                mid_names.push(format!("{}·{}", self.source.state_name(s), c.name));
            }
        }
        let mid = StateSpace::new(format!("{}!", self.source.name()), mid_names)?;
        let issue = TransitionStructure::new(
            &self.source,
            &mid,
            (0..self.source.len())
                .map(|s| {
                    self.entries[s]
                        .iter()
                        .enumerate()
                        .map(|(a, c)| crate::transition::Arrow {
                            label: c.name.clone(),
                            next: mid_index[&(s, a)],
                        })
                        .collect()
                })
                .collect(),
        )?;
        let mut perform_rows = Vec::with_capacity(mid.len());
        for commands in &self.entries {
            for c in commands {
                perform_rows.push(
                    c.responses
                        .iter()
                        .map(|r| crate::transition::Arrow {
                            label: r.name.clone(),
                            next: r.next,
                        })
                        .collect(),
                );
            }
        }
        let perform = TransitionStructure::new(&mid, &self.target, perform_rows)?;
        Ok(Factorization {
            issue,
            perform,
            mid,
        })
    }

    /// Log-keeping localization: states are the subsets of the original
    /// space reachable from `{init}`, a command picks a logged state and
    /// one of its commands, and the response is appended to the log.
    /// The accompanying order is reverse inclusion of logs.
    pub fn localize(&self, init: usize, cap: usize) -> Result<Localization> {
        self.require_homogeneous()?;
        if init >= self.source.len() {
            return Err(Error::IndexOutOfRange(format!(
                "initial state index {init} in space `{}`",
                self.source.name()
            )));
        }
        let n = self.source.len();
        let start: Vec<bool> = (0..n).map(|i| i == init).collect();
        let mut sets: Vec<Vec<bool>> = vec![start.clone()];
        let mut index: HashMap<Vec<bool>, usize> = HashMap::from([(start, 0)]);
        let mut entries: Vec<Vec<Command>> = Vec::new();
        let mut cursor = 0;
        while cursor < sets.len() {
            let current = sets[cursor].clone();
            let mut row = Vec::new();
            for i in 0..n {
                if !current[i] {
                    continue;
                }
                for c in &self.entries[i] {
                    let mut responses = Vec::new();
                    for r in &c.responses {
                        let mut next_set = current.clone();
                        next_set[r.next] = true;
                        let next_index = match index.get(&next_set) {
                            Some(k) => *k,
                            None => {
                                if sets.len() >= cap {
                                    return Err(Error::SizeCapExceeded {
                                        state: self.source.state_name(init).to_string(),
                                        needed: sets.len() + 1,
                                        cap,
                                    });
                                }
                                let k = sets.len();
                                index.insert(next_set.clone(), k);
                                sets.push(next_set);
                                k
                            }
                        };
                        responses.push(Response {
                            name: r.name.clone(),
                            next: next_index,
                        });
                    }
                    row.push(Command {
                        name: format!("{}:{}", self.source.state_name(i), c.name),
                        responses,
                    });
                }
            }
            entries.push(row);
            cursor += 1;
        }
        let names = sets
            .iter()
            .map(|set| {
                (0..n)
                    .filter(|i| set[*i])
                    .map(|i| self.source.state_name(i).to_string())
                    .collect::<Vec<_>>()
                    .join("·")
            })
            .collect();
        let space = StateSpace::new(format!("{}*", self.source.name()), names)?;
        let mut leq = Relation::empty(&space, &space);
        for (x, sx) in sets.iter().enumerate() {
            for (y, sy) in sets.iter().enumerate() {
                // x ≤ y: the bigger log x simulates the smaller log y
                if sy.iter().zip(sx).all(|(b, a)| !*b || *a) {
                    leq.set(x, y, true);
                }
            }
        }
        let structure = InteractionStructure {
            source: space.clone(),
            target: space,
            entries,
        };
        Ok(Localization { structure, leq })
    }
}

/// Result of [`InteractionStructure::factorize`].
#[derive(Debug, Clone)]
pub struct Factorization {
    pub issue: TransitionStructure,
    pub perform: TransitionStructure,
    pub mid: Space,
}

/// Result of [`InteractionStructure::localize`].
#[derive(Debug, Clone)]
pub struct Localization {
    pub structure: InteractionStructure,
    /// `x ≤ y` as pairs `(x, y)`: reverse inclusion of logged states.
    pub leq: Relation,
}

pub(crate) fn product_space(a: &Space, b: &Space) -> Result<Space> {
    let mut names = Vec::with_capacity(a.len() * b.len());
    for x in a.state_names() {
        for y in b.state_names() {
            names.push(format!("{x}·{y}"));
        }
    }
    StateSpace::new(format!("{}×{}", a.name(), b.name()), names)
}

/// Mixed-radix counter over the given digit bounds, most significant digit
/// first. Zero digits yields a single empty assignment; a zero bound yields
/// nothing.
struct Odometer {
    bounds: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl Odometer {
    fn new(bounds: Vec<usize>) -> Self {
        let current = if bounds.iter().any(|b| *b == 0) {
            None
        } else {
            Some(vec![0; bounds.len()])
        };
        Odometer { bounds, current }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.current.take()?;
        let mut next = current.clone();
        let mut pos = self.bounds.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            next[pos] += 1;
            if next[pos] < self.bounds[pos] {
                self.current = Some(next);
                break;
            }
            next[pos] = 0;
        }
        Some(current)
    }
}
