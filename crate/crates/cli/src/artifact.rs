//! On-disk documents for client programs, server programs, simulation
//! certificates and traces. Everything is named (states, commands and
//! responses by their model names), serialized with a fixed key order, and
//! byte-identical across runs for identical inputs.

use std::collections::BTreeMap;

use interax::istruct::InteractionStructure;
use interax::programs::{ClientProgram, ClientTree, ServerProgram, Trace};
use interax::relation::Relation;
use interax::simulation::{
    GeneralSimCert, LinearSimCert, SimCert, SimKind, StepWitness, TreeWitness,
};
use interax::space::Subset;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
#[error("{0}")]
pub struct ArtifactError(pub String);

type AResult<T> = Result<T, ArtifactError>;

fn fail<T>(message: impl Into<String>) -> AResult<T> {
    Err(ArtifactError(message.into()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum TreeDoc {
    Exit,
    Call {
        command: String,
        branches: Vec<BranchDoc>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchDoc {
    pub response: String,
    pub tree: TreeDoc,
}

pub fn tree_to_doc(w: &InteractionStructure, state: usize, tree: &ClientTree) -> TreeDoc {
    match tree {
        ClientTree::Exit => TreeDoc::Exit,
        ClientTree::Call { command, branches } => {
            let c = w.command(state, *command);
            TreeDoc::Call {
                command: c.name.clone(),
                branches: branches
                    .iter()
                    .enumerate()
                    .map(|(d, b)| BranchDoc {
                        response: c.responses[d].name.clone(),
                        tree: tree_to_doc(w, c.responses[d].next, b),
                    })
                    .collect(),
            }
        }
    }
}

pub fn tree_from_doc(w: &InteractionStructure, state: usize, doc: &TreeDoc) -> AResult<ClientTree> {
    match doc {
        TreeDoc::Exit => Ok(ClientTree::Exit),
        TreeDoc::Call { command, branches } => {
            let state_name = w.source().state_name(state);
            let a = match w.commands(state).iter().position(|c| c.name == *command) {
                Some(a) => a,
                None => return fail(format!("state `{state_name}` has no command `{command}`")),
            };
            let c = w.command(state, a);
            if branches.len() != c.responses.len() {
                return fail(format!(
                    "command `{command}` at `{state_name}` needs {} branches, found {}",
                    c.responses.len(),
                    branches.len()
                ));
            }
            let mut out = Vec::with_capacity(branches.len());
            for (d, r) in c.responses.iter().enumerate() {
                if branches[d].response != r.name {
                    return fail(format!(
                        "branch {d} of `{command}` at `{state_name}` should be labelled `{}`",
                        r.name
                    ));
                }
                out.push(tree_from_doc(w, r.next, &branches[d].tree)?);
            }
            Ok(ClientTree::Call {
                command: a,
                branches: out,
            })
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClientDoc {
    pub istruct: String,
    pub root: String,
    pub tree: TreeDoc,
}

pub fn client_to_doc(
    name: &str,
    w: &InteractionStructure,
    program: &ClientProgram,
) -> ClientDoc {
    ClientDoc {
        istruct: name.to_string(),
        root: w.source().state_name(program.root).to_string(),
        tree: tree_to_doc(w, program.root, &program.tree),
    }
}

pub fn client_from_doc(
    expected_istruct: &str,
    w: &InteractionStructure,
    doc: &ClientDoc,
) -> AResult<ClientProgram> {
    if doc.istruct != expected_istruct {
        return fail(format!(
            "client was synthesized for istruct `{}`, not `{expected_istruct}`",
            doc.istruct
        ));
    }
    let root = match w.source().index_of(&doc.root) {
        Some(s) => s,
        None => return fail(format!("unknown root state `{}`", doc.root)),
    };
    Ok(ClientProgram {
        root,
        tree: tree_from_doc(w, root, &doc.tree)?,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChoiceDoc {
    pub state: String,
    pub command: String,
    pub response: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ServerDoc {
    pub istruct: String,
    pub invariant: Vec<String>,
    pub choice: Vec<ChoiceDoc>,
}

pub fn server_to_doc(name: &str, w: &InteractionStructure, server: &ServerProgram) -> ServerDoc {
    ServerDoc {
        istruct: name.to_string(),
        invariant: server
            .invariant
            .members()
            .map(|s| w.source().state_name(s).to_string())
            .collect(),
        choice: server
            .choice
            .iter()
            .map(|((s, a), d)| {
                let c = w.command(*s, *a);
                ChoiceDoc {
                    state: w.source().state_name(*s).to_string(),
                    command: c.name.clone(),
                    response: c.responses[*d].name.clone(),
                }
            })
            .collect(),
    }
}

pub fn server_from_doc(
    expected_istruct: &str,
    w: &InteractionStructure,
    doc: &ServerDoc,
) -> AResult<ServerProgram> {
    if doc.istruct != expected_istruct {
        return fail(format!(
            "server was synthesized for istruct `{}`, not `{expected_istruct}`",
            doc.istruct
        ));
    }
    let mut members = Vec::new();
    for name in &doc.invariant {
        match w.source().index_of(name) {
            Some(s) => members.push(s),
            None => return fail(format!("unknown invariant state `{name}`")),
        }
    }
    let invariant = Subset::from_indices(w.source(), members);
    let mut choice = BTreeMap::new();
    for entry in &doc.choice {
        let s = match w.source().index_of(&entry.state) {
            Some(s) => s,
            None => return fail(format!("unknown state `{}`", entry.state)),
        };
        let a = match w.commands(s).iter().position(|c| c.name == entry.command) {
            Some(a) => a,
            None => {
                return fail(format!(
                    "state `{}` has no command `{}`",
                    entry.state, entry.command
                ))
            }
        };
        let d = match w
            .command(s, a)
            .responses
            .iter()
            .position(|r| r.name == entry.response)
        {
            Some(d) => d,
            None => {
                return fail(format!(
                    "command `{}` at `{}` has no response `{}`",
                    entry.command, entry.state, entry.response
                ))
            }
        };
        choice.insert((s, a), d);
    }
    Ok(ServerProgram { invariant, choice })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepWitnessDoc {
    pub high_state: String,
    pub low_state: String,
    pub command: String,
    /// Low-level command issued, or absent for an affine stay.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub low_command: Option<String>,
    /// For a stay: the single translated response. For a step: the
    /// high-level response covering each low-level response, in low
    /// response order.
    pub responses: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExitDoc {
    pub path: Vec<String>,
    pub response: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeWitnessDoc {
    pub high_state: String,
    pub low_state: String,
    pub command: String,
    pub tree: TreeDoc,
    pub exits: Vec<ExitDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertDoc {
    pub kind: String,
    pub from: String,
    pub to: String,
    pub relation: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub step_witnesses: Vec<StepWitnessDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub tree_witnesses: Vec<TreeWitnessDoc>,
}

pub fn cert_to_doc(
    from: &str,
    to: &str,
    high: &InteractionStructure,
    low: &InteractionStructure,
    cert: &SimCert,
) -> CertDoc {
    let relation = cert
        .relation()
        .pairs()
        .map(|(i, j)| {
            [
                high.source().state_name(i).to_string(),
                low.source().state_name(j).to_string(),
            ]
        })
        .collect();
    let mut doc = CertDoc {
        kind: cert.kind().to_string(),
        from: from.to_string(),
        to: to.to_string(),
        relation,
        step_witnesses: Vec::new(),
        tree_witnesses: Vec::new(),
    };
    match cert {
        SimCert::Linear(c) => {
            for ((s_h, s_l, a_h), step) in &c.witness {
                let c_h = high.command(*s_h, *a_h);
                let entry = match step {
                    StepWitness::Stay { response } => StepWitnessDoc {
                        high_state: high.source().state_name(*s_h).to_string(),
                        low_state: low.source().state_name(*s_l).to_string(),
                        command: c_h.name.clone(),
                        low_command: None,
                        responses: vec![c_h.responses[*response].name.clone()],
                    },
                    StepWitness::Step { command, responses } => {
                        let c_l = low.command(*s_l, *command);
                        StepWitnessDoc {
                            high_state: high.source().state_name(*s_h).to_string(),
                            low_state: low.source().state_name(*s_l).to_string(),
                            command: c_h.name.clone(),
                            low_command: Some(c_l.name.clone()),
                            responses: responses
                                .iter()
                                .map(|d_h| c_h.responses[*d_h].name.clone())
                                .collect(),
                        }
                    }
                };
                doc.step_witnesses.push(entry);
            }
        }
        SimCert::General(c) => {
            for ((s_h, s_l, a_h), witness) in &c.witness {
                let c_h = high.command(*s_h, *a_h);
                doc.tree_witnesses.push(TreeWitnessDoc {
                    high_state: high.source().state_name(*s_h).to_string(),
                    low_state: low.source().state_name(*s_l).to_string(),
                    command: c_h.name.clone(),
                    tree: tree_to_doc(low, *s_l, &witness.tree),
                    exits: witness
                        .exits
                        .iter()
                        .map(|(path, d_h)| ExitDoc {
                            path: path_names(low, *s_l, &witness.tree, path),
                            response: c_h.responses[*d_h].name.clone(),
                        })
                        .collect(),
                });
            }
        }
    }
    doc
}

/// Resolves a response-index path through a tree into response names.
fn path_names(
    w: &InteractionStructure,
    mut state: usize,
    tree: &ClientTree,
    path: &[usize],
) -> Vec<String> {
    let mut names = Vec::with_capacity(path.len());
    let mut cursor = tree;
    for d in path {
        match cursor {
            ClientTree::Call { command, branches } => {
                let c = w.command(state, *command);
                names.push(c.responses[*d].name.clone());
                state = c.responses[*d].next;
                cursor = &branches[*d];
            }
            ClientTree::Exit => break,
        }
    }
    names
}

/// Rebuilds a general certificate (the form consumed by cross-interface
/// execution) from its document. Linear and affine documents are lifted:
/// a step becomes a one-call tree, a stay becomes an immediate exit.
pub fn cert_from_doc(
    high: &InteractionStructure,
    low: &InteractionStructure,
    doc: &CertDoc,
) -> AResult<GeneralSimCert> {
    let kind: SimKind = doc
        .kind
        .parse()
        .map_err(|e: interax::Error| ArtifactError(e.to_string()))?;
    let mut pairs = Vec::new();
    for [h, l] in &doc.relation {
        let i = high
            .source()
            .index_of(h)
            .ok_or_else(|| ArtifactError(format!("unknown high state `{h}`")))?;
        let j = low
            .source()
            .index_of(l)
            .ok_or_else(|| ArtifactError(format!("unknown low state `{l}`")))?;
        pairs.push((i, j));
    }
    let relation = Relation::from_pairs(high.source(), low.source(), pairs);

    let mut witness = BTreeMap::new();
    let locate = |h: &str, l: &str, cmd: &str| -> AResult<(usize, usize, usize)> {
        let s_h = high
            .source()
            .index_of(h)
            .ok_or_else(|| ArtifactError(format!("unknown high state `{h}`")))?;
        let s_l = low
            .source()
            .index_of(l)
            .ok_or_else(|| ArtifactError(format!("unknown low state `{l}`")))?;
        let a_h = high
            .commands(s_h)
            .iter()
            .position(|c| c.name == cmd)
            .ok_or_else(|| ArtifactError(format!("state `{h}` has no command `{cmd}`")))?;
        Ok((s_h, s_l, a_h))
    };
    for entry in &doc.tree_witnesses {
        let key = locate(&entry.high_state, &entry.low_state, &entry.command)?;
        let tree = tree_from_doc(low, key.1, &entry.tree)?;
        let mut exits = BTreeMap::new();
        for exit in &entry.exits {
            let path = path_indices(low, key.1, &tree, &exit.path)?;
            let d_h = high
                .command(key.0, key.2)
                .responses
                .iter()
                .position(|r| r.name == exit.response)
                .ok_or_else(|| {
                    ArtifactError(format!(
                        "command `{}` has no response `{}`",
                        entry.command, exit.response
                    ))
                })?;
            exits.insert(path, d_h);
        }
        witness.insert(key, TreeWitness { tree, exits });
    }
    for entry in &doc.step_witnesses {
        let key = locate(&entry.high_state, &entry.low_state, &entry.command)?;
        let witness_entry = lift_step_witness(high, low, key, entry)?;
        witness.insert(key, witness_entry);
    }
    Ok(GeneralSimCert {
        kind,
        relation,
        witness,
    })
}

fn lift_step_witness(
    high: &InteractionStructure,
    low: &InteractionStructure,
    (s_h, s_l, a_h): (usize, usize, usize),
    entry: &StepWitnessDoc,
) -> AResult<TreeWitness> {
    let c_h = high.command(s_h, a_h);
    let high_resp = |name: &str| -> AResult<usize> {
        c_h.responses
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| {
                ArtifactError(format!(
                    "command `{}` has no response `{name}`",
                    entry.command
                ))
            })
    };
    match &entry.low_command {
        None => {
            if entry.responses.len() != 1 {
                return fail("a stay entry carries exactly one response");
            }
            let d_h = high_resp(&entry.responses[0])?;
            Ok(TreeWitness {
                tree: ClientTree::Exit,
                exits: BTreeMap::from([(Vec::new(), d_h)]),
            })
        }
        Some(low_command) => {
            let a_l = low
                .commands(s_l)
                .iter()
                .position(|c| c.name == *low_command)
                .ok_or_else(|| {
                    ArtifactError(format!(
                        "low state `{}` has no command `{low_command}`",
                        entry.low_state
                    ))
                })?;
            let c_l = low.command(s_l, a_l);
            if entry.responses.len() != c_l.responses.len() {
                return fail(format!(
                    "witness for `{}` lists {} responses, command `{low_command}` has {}",
                    entry.command,
                    entry.responses.len(),
                    c_l.responses.len()
                ));
            }
            let mut exits = BTreeMap::new();
            for (d_l, name) in entry.responses.iter().enumerate() {
                exits.insert(vec![d_l], high_resp(name)?);
            }
            Ok(TreeWitness {
                tree: ClientTree::Call {
                    command: a_l,
                    branches: vec![ClientTree::Exit; c_l.responses.len()],
                },
                exits,
            })
        }
    }
}

fn path_indices(
    w: &InteractionStructure,
    mut state: usize,
    tree: &ClientTree,
    names: &[String],
) -> AResult<Vec<usize>> {
    let mut path = Vec::with_capacity(names.len());
    let mut cursor = tree;
    for name in names {
        match cursor {
            ClientTree::Call { command, branches } => {
                let c = w.command(state, *command);
                let d = c
                    .responses
                    .iter()
                    .position(|r| r.name == *name)
                    .ok_or_else(|| {
                        ArtifactError(format!("no response `{name}` along the witness path"))
                    })?;
                path.push(d);
                state = c.responses[d].next;
                cursor = &branches[d];
            }
            ClientTree::Exit => return fail("witness path is longer than its tree"),
        }
    }
    Ok(path)
}

/// Line-delimited trace rendering: one record per step, then the final
/// state.
pub fn render_trace(w: &InteractionStructure, trace: &Trace) -> String {
    let mut out = String::new();
    for step in &trace.steps {
        let c = w.command(step.state, step.command);
        let record = serde_json::json!({
            "state": w.source().state_name(step.state),
            "command": c.name,
            "response": c.responses[step.response].name,
            "next": w.source().state_name(step.next),
        });
        out.push_str(&serde_json::to_string(&record).expect("trace records serialize"));
        out.push('\n');
    }
    let final_record = serde_json::json!({
        "final": w.source().state_name(trace.final_state),
    });
    out.push_str(&serde_json::to_string(&final_record).expect("trace records serialize"));
    out.push('\n');
    out
}

pub fn to_json_bytes<T: Serialize>(doc: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(doc).expect("documents serialize");
    bytes.push(b'\n');
    bytes
}

/// Round-trips a linear certificate through the general form so it can be
/// executed across; exposed for tests.
pub fn lift_linear_cert(low: &InteractionStructure, cert: &LinearSimCert) -> GeneralSimCert {
    let mut witness = BTreeMap::new();
    for ((s_h, s_l, a_h), step) in &cert.witness {
        let entry = match step {
            StepWitness::Stay { response } => TreeWitness {
                tree: ClientTree::Exit,
                exits: BTreeMap::from([(Vec::new(), *response)]),
            },
            StepWitness::Step { command, responses } => {
                let n = low.command(*s_l, *command).responses.len();
                TreeWitness {
                    tree: ClientTree::Call {
                        command: *command,
                        branches: vec![ClientTree::Exit; n],
                    },
                    exits: responses
                        .iter()
                        .enumerate()
                        .map(|(d_l, d_h)| (vec![d_l], *d_h))
                        .collect(),
                }
            }
        };
        witness.insert((*s_h, *s_l, *a_h), entry);
    }
    GeneralSimCert {
        kind: cert.kind,
        relation: cert.relation.clone(),
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use interax::fixtures;
    use interax::programs::synth_client;
    use interax::simulation::check_sim;

    #[test]
    fn client_doc_round_trip() {
        let w = fixtures::count3();
        let goal = Subset::singleton(w.source(), 2);
        let p = synth_client(&w, 0, &goal).unwrap();
        let doc = client_to_doc("count3", &w, &p);
        let bytes = to_json_bytes(&doc);
        let parsed: ClientDoc = serde_json::from_slice(&bytes).unwrap();
        let rebuilt = client_from_doc("count3", &w, &parsed).unwrap();
        assert_eq!(rebuilt, p);
    }

    #[test]
    fn cert_doc_round_trip_general() {
        let high = fixtures::jump2();
        let low = fixtures::count3();
        let relation = Relation::from_pairs(high.source(), low.source(), [(0, 0), (1, 2)]);
        let cert = check_sim(&high, &low, &relation, SimKind::General)
            .unwrap()
            .unwrap();
        let doc = cert_to_doc("jump2", "count3", &high, &low, &cert);
        let bytes = to_json_bytes(&doc);
        let parsed: CertDoc = serde_json::from_slice(&bytes).unwrap();
        let rebuilt = cert_from_doc(&high, &low, &parsed).unwrap();
        match cert {
            SimCert::General(c) => assert_eq!(rebuilt, c),
            _ => unreachable!(),
        }
    }

    #[test]
    fn linear_cert_lifts_to_executable_form() {
        let w = fixtures::count3();
        let identity = Relation::identity(w.source());
        let cert = match check_sim(&w, &w, &identity, SimKind::Linear).unwrap().unwrap() {
            SimCert::Linear(c) => c,
            _ => unreachable!(),
        };
        let lifted = lift_linear_cert(&w, &cert);
        let goal = Subset::singleton(w.source(), 2);
        let client = synth_client(&w, 0, &goal).unwrap();
        let server = interax::programs::synth_server(&w, &Subset::full(w.source())).unwrap();
        let run =
            interax::programs::exec_across(&w, &w, &lifted, 0, 0, &client, &server).unwrap();
        assert_eq!(run.final_high, 2);
    }

    #[test]
    fn trace_rendering_names_everything() {
        let w = fixtures::count3();
        let goal = Subset::singleton(w.source(), 2);
        let client = synth_client(&w, 0, &goal).unwrap();
        let server = interax::programs::synth_server(&w, &Subset::full(w.source())).unwrap();
        let (_, trace) = interax::programs::exec(&w, 0, &client, &server).unwrap();
        let text = render_trace(&w, &trace);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].contains("\"command\":\"inc\""));
        assert!(lines[2].contains("\"final\":\"s2\""));
    }
}
