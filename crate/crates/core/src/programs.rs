//! Client programs (well-founded command trees), server programs
//! (invariant plus response-choice table), their synthesis from fixpoint
//! results, and the execution of a client against a server — including
//! execution across two interfaces through a simulation certificate.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fixpoint::{cover, interior, CoverResult};
use crate::istruct::InteractionStructure;
use crate::simulation::GeneralSimCert;
use crate::space::{check_same_space, Subset};

/// A strategy for the issuing side: either stop, or issue the command and
/// branch on every possible response.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClientTree {
    Exit,
    Call {
        command: usize,
        branches: Vec<ClientTree>,
    },
}

impl ClientTree {
    pub fn depth(&self) -> usize {
        match self {
            ClientTree::Exit => 0,
            ClientTree::Call { branches, .. } => {
                1 + branches.iter().map(ClientTree::depth).max().unwrap_or(0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientProgram {
    pub root: usize,
    pub tree: ClientTree,
}

/// A coalgebra on an invariant: for every invariant state and command, a
/// response that stays inside the invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerProgram {
    pub invariant: Subset,
    pub choice: BTreeMap<(usize, usize), usize>,
}

impl ServerProgram {
    /// An empty invariant is legal but serves no state.
    pub fn is_vacuous(&self) -> bool {
        self.invariant.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub state: usize,
    pub command: usize,
    pub response: usize,
    pub next: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub final_state: usize,
}

impl Trace {
    /// Folds the steps through the structure's next map and checks the
    /// chaining invariant; returns the reproduced final state.
    pub fn replay(&self, w: &InteractionStructure, start: usize) -> Result<usize> {
        let mut cursor = start;
        for step in &self.steps {
            if step.state != cursor {
                return Err(Error::ContractViolation(format!(
                    "trace step starts at {} but the run is at {}",
                    step.state, cursor
                )));
            }
            let next = w.next(step.state, step.command, step.response);
            if next != step.next {
                return Err(Error::ContractViolation(format!(
                    "trace step records next {} but the structure steps to {}",
                    step.next, next
                )));
            }
            cursor = next;
        }
        if cursor != self.final_state {
            return Err(Error::ContractViolation(format!(
                "trace ends at {} but records final {}",
                cursor, self.final_state
            )));
        }
        Ok(cursor)
    }
}

/// Reads the command tree rooted at `state` off a cover derivation.
pub fn tree_from_cover(
    w: &InteractionStructure,
    state: usize,
    derivation: &CoverResult,
) -> Result<ClientTree> {
    match derivation.stage(state) {
        None => Err(Error::NotCovered {
            state: w.source().state_name(state).to_string(),
        }),
        Some(0) => Ok(ClientTree::Exit),
        Some(_) => {
            let command = derivation
                .witness(state)
                .expect("positive-stage member carries a witness");
            let branches = w
                .command(state, command)
                .responses
                .iter()
                .map(|r| tree_from_cover(w, r.next, derivation))
                .collect::<Result<Vec<_>>>()?;
            Ok(ClientTree::Call { command, branches })
        }
    }
}

/// Client synthesis: the tree read off the cover of the goal, if the start
/// state is covered.
pub fn synth_client(
    w: &InteractionStructure,
    start: usize,
    goal: &Subset,
) -> Result<ClientProgram> {
    let derivation = cover(w, goal, None)?;
    let tree = tree_from_cover(w, start, &derivation)?;
    Ok(ClientProgram { root: start, tree })
}

/// All complete response paths of the program and the state each exits in,
/// in lexicographic response order.
pub fn client_exits(
    w: &InteractionStructure,
    program: &ClientProgram,
) -> Result<Vec<(Vec<usize>, usize)>> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    walk_exits(w, program.root, &program.tree, &mut path, &mut out)?;
    Ok(out)
}

fn walk_exits(
    w: &InteractionStructure,
    state: usize,
    tree: &ClientTree,
    path: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, usize)>,
) -> Result<()> {
    match tree {
        ClientTree::Exit => {
            out.push((path.clone(), state));
            Ok(())
        }
        ClientTree::Call { command, branches } => {
            let commands = w.commands(state);
            if *command >= commands.len() {
                return Err(Error::MalformedClient(format!(
                    "command index {command} at state `{}`",
                    w.source().state_name(state)
                )));
            }
            let responses = &commands[*command].responses;
            if branches.len() != responses.len() {
                return Err(Error::MalformedClient(format!(
                    "{} branches for {} responses at state `{}`, command `{}`",
                    branches.len(),
                    responses.len(),
                    w.source().state_name(state),
                    commands[*command].name
                )));
            }
            for (d, branch) in branches.iter().enumerate() {
                path.push(d);
                walk_exits(w, responses[d].next, branch, path, out)?;
                path.pop();
            }
            Ok(())
        }
    }
}

/// Checks that every exit of the program satisfies the goal.
pub fn verify_client(
    w: &InteractionStructure,
    program: &ClientProgram,
    goal: &Subset,
) -> Result<bool> {
    check_same_space(w.source(), goal.space())?;
    Ok(client_exits(w, program)?
        .iter()
        .all(|(_, exit)| goal.member(*exit)))
}

/// Server synthesis: the greatest invariant inside `safe` with its choice
/// table. An empty invariant is returned as-is; callers decide whether
/// that is useful.
pub fn synth_server(w: &InteractionStructure, safe: &Subset) -> Result<ServerProgram> {
    let result = interior(w, safe)?;
    Ok(ServerProgram {
        invariant: result.subset.clone(),
        choice: result.choices().clone(),
    })
}

/// Checks totality and closure of the choice table over the invariant.
pub fn verify_server(w: &InteractionStructure, server: &ServerProgram) -> Result<()> {
    w.require_homogeneous()?;
    check_same_space(w.source(), server.invariant.space())?;
    for s in server.invariant.members() {
        for (a, c) in w.commands(s).iter().enumerate() {
            let d = server.choice.get(&(s, a)).copied().ok_or_else(|| {
                Error::ServerChoiceMissing {
                    state: w.source().state_name(s).to_string(),
                    command: c.name.clone(),
                }
            })?;
            if d >= c.responses.len() {
                return Err(Error::IndexOutOfRange(format!(
                    "response index {d} for command `{}` at state `{}`",
                    c.name,
                    w.source().state_name(s)
                )));
            }
            let next = c.responses[d].next;
            if !server.invariant.member(next) {
                return Err(Error::ServerEscapesInvariant {
                    state: w.source().state_name(s).to_string(),
                    command: c.name.clone(),
                    response: c.responses[d].name.clone(),
                    next: w.source().state_name(next).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Runs a client against a server: at every call the server's choice picks
/// the response. Preconditions are re-checked at run time since programs
/// may be hand-written.
pub fn exec(
    w: &InteractionStructure,
    start: usize,
    client: &ClientProgram,
    server: &ServerProgram,
) -> Result<(usize, Trace)> {
    w.require_homogeneous()?;
    check_same_space(w.source(), server.invariant.space())?;
    if start != client.root {
        return Err(Error::ContractViolation(format!(
            "client is rooted at `{}`, not `{}`",
            w.source().state_name(client.root),
            w.source().state_name(start)
        )));
    }
    let mut steps = Vec::new();
    let mut state = start;
    let mut tree = &client.tree;
    loop {
        if !server.invariant.member(state) {
            return Err(Error::ContractViolation(format!(
                "state `{}` is outside the server invariant",
                w.source().state_name(state)
            )));
        }
        match tree {
            ClientTree::Exit => {
                return Ok((
                    state,
                    Trace {
                        steps,
                        final_state: state,
                    },
                ));
            }
            ClientTree::Call { command, branches } => {
                let commands = w.commands(state);
                if *command >= commands.len() {
                    return Err(Error::MalformedClient(format!(
                        "command index {command} at state `{}`",
                        w.source().state_name(state)
                    )));
                }
                let c = &commands[*command];
                if branches.len() != c.responses.len() {
                    return Err(Error::MalformedClient(format!(
                        "{} branches for {} responses at state `{}`, command `{}`",
                        branches.len(),
                        c.responses.len(),
                        w.source().state_name(state),
                        c.name
                    )));
                }
                let d = server.choice.get(&(state, *command)).copied().ok_or_else(
                    || Error::ContractViolation(format!(
                        "server has no choice for state `{}`, command `{}`",
                        w.source().state_name(state),
                        c.name
                    )),
                )?;
                if d >= c.responses.len() {
                    return Err(Error::IndexOutOfRange(format!(
                        "server picks response {d} for command `{}` at state `{}`",
                        c.name,
                        w.source().state_name(state)
                    )));
                }
                let next = c.responses[d].next;
                steps.push(TraceStep {
                    state,
                    command: *command,
                    response: d,
                    next,
                });
                state = next;
                tree = &branches[d];
            }
        }
    }
}

/// Result of running a high-level client on a low-level server through a
/// certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossExecution {
    pub final_high: usize,
    pub final_low: usize,
    pub high_trace: Trace,
    pub low_trace: Trace,
}

/// Each high-level call is expanded, via the certificate's witness, into a
/// low-level client tree which is run against the server; the low-level
/// exit path is then translated back into a high-level response.
pub fn exec_across(
    high: &InteractionStructure,
    low: &InteractionStructure,
    cert: &GeneralSimCert,
    start_high: usize,
    start_low: usize,
    client: &ClientProgram,
    server: &ServerProgram,
) -> Result<CrossExecution> {
    high.require_homogeneous()?;
    low.require_homogeneous()?;
    check_same_space(cert.relation.domain(), high.source())?;
    check_same_space(cert.relation.codomain(), low.source())?;
    if start_high != client.root {
        return Err(Error::ContractViolation(format!(
            "client is rooted at `{}`, not `{}`",
            high.source().state_name(client.root),
            high.source().state_name(start_high)
        )));
    }
    if !cert.relation.contains(start_high, start_low) {
        return Err(Error::ContractViolation(format!(
            "start pair (`{}`, `{}`) is not in the certificate relation",
            high.source().state_name(start_high),
            low.source().state_name(start_low)
        )));
    }
    let mut high_steps = Vec::new();
    let mut low_steps = Vec::new();
    let mut state_high = start_high;
    let mut state_low = start_low;
    let mut tree = &client.tree;
    loop {
        match tree {
            ClientTree::Exit => {
                return Ok(CrossExecution {
                    final_high: state_high,
                    final_low: state_low,
                    high_trace: Trace {
                        steps: high_steps,
                        final_state: state_high,
                    },
                    low_trace: Trace {
                        steps: low_steps,
                        final_state: state_low,
                    },
                });
            }
            ClientTree::Call { command, branches } => {
                let commands = high.commands(state_high);
                if *command >= commands.len() {
                    return Err(Error::MalformedClient(format!(
                        "command index {command} at state `{}`",
                        high.source().state_name(state_high)
                    )));
                }
                let c = &commands[*command];
                if branches.len() != c.responses.len() {
                    return Err(Error::MalformedClient(format!(
                        "{} branches for {} responses at state `{}`, command `{}`",
                        branches.len(),
                        c.responses.len(),
                        high.source().state_name(state_high),
                        c.name
                    )));
                }
                let missing = || Error::MissingWitness {
                    high: high.source().state_name(state_high).to_string(),
                    low: low.source().state_name(state_low).to_string(),
                    command: c.name.clone(),
                };
                let witness = cert
                    .witness
                    .get(&(state_high, state_low, *command))
                    .ok_or_else(missing)?;
                let low_client = ClientProgram {
                    root: state_low,
                    tree: witness.tree.clone(),
                };
                let (low_final, low_run) = exec(low, state_low, &low_client, server)?;
                let path: Vec<usize> = low_run.steps.iter().map(|s| s.response).collect();
                let d_high = witness.exits.get(&path).copied().ok_or_else(missing)?;
                if d_high >= c.responses.len() {
                    return Err(Error::IndexOutOfRange(format!(
                        "certificate maps a path to response {d_high} of command `{}`",
                        c.name
                    )));
                }
                let next_high = c.responses[d_high].next;
                if !cert.relation.contains(next_high, low_final) {
                    return Err(Error::ContractViolation(format!(
                        "certificate relation broken at (`{}`, `{}`)",
                        high.source().state_name(next_high),
                        low.source().state_name(low_final)
                    )));
                }
                high_steps.push(TraceStep {
                    state: state_high,
                    command: *command,
                    response: d_high,
                    next: next_high,
                });
                low_steps.extend(low_run.steps);
                state_high = next_high;
                state_low = low_final;
                tree = &branches[d_high];
            }
        }
    }
}
