//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use interax::fixpoint::{cover, interior};
use interax::istruct::InteractionStructure;
use interax::programs::{exec, exec_across, synth_client, synth_server, verify_server};
use interax::relation::Relation;
use interax::simulation::{check_sim, greatest_sim, SimCert, SimKind};
use interax::space::Subset;
use interax::topology::{
    check_continuous_map, check_formal_point, check_localized, saturation_preorder,
    SelfSimulation,
};
use interax::Error as CoreError;

use crate::artifact::{
    cert_from_doc, cert_to_doc, client_from_doc, client_to_doc, render_trace, server_from_doc,
    server_to_doc, to_json_bytes, CertDoc, ClientDoc, ServerDoc,
};
use crate::laws::{run_laws, LawConfig};
use crate::model::{parse_model, print_model, ModelFile};
use crate::report::{Report, Status};

#[derive(Parser)]
#[command(
    name = "interax",
    about = "Checks, synthesizes and runs programs over finite command-response interfaces",
    version
)]
struct Cli {
    /// Seed driving every randomized command
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Cap on per-state enumeration in derived structures
    #[arg(long, global = true, default_value_t = interax::DEFAULT_SIZE_CAP)]
    max_size: usize,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Linear,
    Affine,
    Tc,
    General,
}

impl From<KindArg> for SimKind {
    fn from(kind: KindArg) -> SimKind {
        match kind {
            KindArg::Linear => SimKind::Linear,
            KindArg::Affine => SimKind::Affine,
            KindArg::Tc => SimKind::Tc,
            KindArg::General => SimKind::General,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GreatestKindArg {
    Linear,
    General,
}

#[derive(Subcommand)]
enum Cmd {
    /// States from which the issuing side can force a goal
    Cover {
        file: PathBuf,
        #[arg(long)]
        istruct: String,
        #[arg(long)]
        subset: String,
        #[arg(long)]
        preorder: Option<String>,
    },
    /// States on which the serving side can maintain a predicate
    Interior {
        file: PathBuf,
        #[arg(long)]
        istruct: String,
        #[arg(long)]
        subset: String,
    },
    /// Check a relation as a simulation and extract a certificate
    Sim {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        relation: String,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// The union of all simulations of a kind
    SimGreatest {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: GreatestKindArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Synthesize client or server programs
    Synth {
        #[command(subcommand)]
        what: SynthCmd,
    },
    /// Run a client against a server on one interface
    Exec {
        file: PathBuf,
        #[arg(long)]
        istruct: String,
        #[arg(long)]
        start: String,
        #[arg(long)]
        client: PathBuf,
        #[arg(long)]
        server: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run a high-level client on a low-level server through a certificate
    ExecAcross {
        file: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        start_high: String,
        #[arg(long)]
        start_low: String,
        #[arg(long)]
        client: PathBuf,
        #[arg(long)]
        server: PathBuf,
    },
    /// Derived structures: dual, composition, products, factorization,
    /// localization
    Algebra {
        #[command(subcommand)]
        what: AlgebraCmd,
    },
    /// Orders, localization, points and continuity
    Topology {
        #[command(subcommand)]
        what: TopologyCmd,
    },
    /// Run the law suite over random or file-supplied structures
    Laws {
        file: Option<PathBuf>,
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
        #[arg(long, default_value_t = 5)]
        max_states: usize,
    },
}

#[derive(Subcommand)]
enum SynthCmd {
    /// A command tree whose every run ends in the goal
    Client {
        file: PathBuf,
        #[arg(long)]
        istruct: String,
        #[arg(long)]
        start: String,
        #[arg(long)]
        goal: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The greatest invariant inside a predicate with its choice table
    Server {
        file: PathBuf,
        #[arg(long)]
        istruct: String,
        #[arg(long)]
        maintain: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    Dual {
        file: PathBuf,
        #[arg(long)]
        istruct: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Seq {
        file: PathBuf,
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Tensor {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Oplus {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Factorize {
        file: PathBuf,
        #[arg(long)]
        istruct: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Localize {
        file: PathBuf,
        #[arg(long)]
        istruct: String,
        #[arg(long)]
        init: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TopologyCmd {
    /// The order `s ≤ s'` iff `s` covers `{s'}`, as a certified
    /// self-simulation
    Saturation {
        file: PathBuf,
        #[arg(long)]
        istruct: String,
    },
    /// Check the localization condition of an order
    Localized {
        file: PathBuf,
        #[arg(long)]
        istruct: String,
        #[arg(long)]
        order: Option<String>,
        /// Require a single step instead of a full cover
        #[arg(long)]
        strict: bool,
    },
    /// Check that a subset is a formal point
    Point {
        file: PathBuf,
        #[arg(long)]
        istruct: String,
        #[arg(long)]
        subset: String,
        #[arg(long)]
        order: Option<String>,
    },
    /// Check the continuous-map conditions of a relation
    Continuous {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        relation: String,
        #[arg(long)]
        order_high: Option<String>,
        #[arg(long)]
        order_low: Option<String>,
    },
}

enum CmdError {
    /// Negative verdict of a check or a violated run-time contract.
    Fail(String),
    /// Unusable input: parse failures, unresolved names, exceeded caps.
    Error(String),
}

type CmdResult = Result<(), CmdError>;

impl From<CoreError> for CmdError {
    fn from(e: CoreError) -> CmdError {
        match e {
            CoreError::NotCovered { .. }
            | CoreError::ContractViolation(_)
            | CoreError::MissingWitness { .. }
            | CoreError::ServerChoiceMissing { .. }
            | CoreError::ServerEscapesInvariant { .. }
            | CoreError::MalformedClient(_) => CmdError::Fail(e.to_string()),
            other => CmdError::Error(other.to_string()),
        }
    }
}

impl From<crate::artifact::ArtifactError> for CmdError {
    fn from(e: crate::artifact::ArtifactError) -> CmdError {
        CmdError::Error(e.to_string())
    }
}

impl From<String> for CmdError {
    fn from(message: String) -> CmdError {
        CmdError::Error(message)
    }
}

/// Parses and runs one invocation; never panics on user input.
pub fn run<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let cli = match Cli::try_parse_from(argv.iter().cloned()) {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own rendering carries usage details
            let mut report = Report::error(echo, e.to_string());
            if e.kind() == clap::error::ErrorKind::DisplayHelp
                || e.kind() == clap::error::ErrorKind::DisplayVersion
            {
                report.status = Status::Pass;
            }
            return report;
        }
    };
    let mut report = Report::new(echo);
    let outcome = dispatch(&cli, &mut report);
    match outcome {
        Ok(()) => {}
        Err(CmdError::Fail(reason)) => report.fail(reason),
        Err(CmdError::Error(reason)) => {
            report.status = Status::Error;
            report.payload.clear();
            report.note(reason);
        }
    }
    report
}

fn load_model(path: &Path) -> Result<ModelFile, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::Error(format!("cannot read `{}`: {e}", path.display())))?;
    parse_model(&text).map_err(|e| CmdError::Error(format!("{}: {e}", path.display())))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CmdError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CmdError::Error(format!("cannot read `{}`: {e}", path.display())))?;
    serde_json::from_slice(&bytes)
        .map_err(|e| CmdError::Error(format!("{}: {e}", path.display())))
}

fn write_bytes(report: &mut Report, path: &Path, bytes: &[u8]) -> CmdResult {
    std::fs::write(path, bytes)
        .map_err(|e| CmdError::Error(format!("cannot write `{}`: {e}", path.display())))?;
    report.note(format!("wrote {}", path.display()));
    Ok(())
}

fn state_index(w: &InteractionStructure, name: &str) -> Result<usize, CmdError> {
    w.source().index_of(name).ok_or_else(|| {
        CmdError::Error(format!(
            "space `{}` has no state `{name}`",
            w.source().name()
        ))
    })
}

fn order_for<'m>(
    model: &'m ModelFile,
    w: &InteractionStructure,
    order: &Option<String>,
) -> Result<SelfSimulation, CmdError> {
    match order {
        Some(name) => {
            let leq: &'m Relation = model.preorder(name)?;
            Ok(SelfSimulation::new(w.clone(), leq.clone())?)
        }
        None => Ok(saturation_preorder(w)?),
    }
}

fn dispatch(cli: &Cli, report: &mut Report) -> CmdResult {
    match &cli.command {
        Cmd::Cover {
            file,
            istruct,
            subset,
            preorder,
        } => {
            let model = load_model(file)?;
            let w = model.istruct(istruct)?;
            let goal = model.subset(subset)?;
            let order = match preorder {
                Some(name) => Some(model.preorder(name)?),
                None => None,
            };
            let result = cover(w, goal, order)?;
            report.line(result.subset.to_string());
            for s in result.subset.members() {
                let state = w.source().state_name(s);
                match result.witness(s) {
                    Some(a) => report.line(format!(
                        "stage {state} {} via {}",
                        result.stage(s).unwrap(),
                        w.command(s, a).name
                    )),
                    None => report.line(format!("stage {state} 0")),
                }
            }
            Ok(())
        }
        Cmd::Interior {
            file,
            istruct,
            subset,
        } => {
            let model = load_model(file)?;
            let w = model.istruct(istruct)?;
            let safe = model.subset(subset)?;
            let result = interior(w, safe)?;
            report.line(result.subset.to_string());
            for ((s, a), d) in result.choices() {
                let c = w.command(*s, *a);
                report.line(format!(
                    "choice {} {} -> {}",
                    w.source().state_name(*s),
                    c.name,
                    c.responses[*d].name
                ));
            }
            Ok(())
        }
        Cmd::Sim {
            file,
            kind,
            from,
            to,
            relation,
            cert,
        } => {
            let model = load_model(file)?;
            let high = model.istruct(from)?;
            let low = model.istruct(to)?;
            let r = model.relation(relation)?;
            let kind: SimKind = (*kind).into();
            match check_sim(high, low, r, kind)? {
                Ok(found) => {
                    let witnesses = match &found {
                        SimCert::Linear(c) => c.witness.len(),
                        SimCert::General(c) => c.witness.len(),
                    };
                    report.line(format!(
                        "certified kind={kind} pairs={} witnesses={witnesses}",
                        found.relation().count()
                    ));
                    if let Some(path) = cert {
                        let doc = cert_to_doc(from, to, high, low, &found);
                        write_bytes(report, path, &to_json_bytes(&doc))?;
                    }
                    Ok(())
                }
                Err(cex) => {
                    report.line(format!(
                        "counterexample high={} low={} command={}",
                        high.source().state_name(cex.high_state),
                        low.source().state_name(cex.low_state),
                        high.command(cex.high_state, cex.command).name
                    ));
                    Err(CmdError::Fail(format!(
                        "`{relation}` is not a {kind} simulation"
                    )))
                }
            }
        }
        Cmd::SimGreatest {
            file,
            kind,
            from,
            to,
        } => {
            let model = load_model(file)?;
            let high = model.istruct(from)?;
            let low = model.istruct(to)?;
            let kind = match kind {
                GreatestKindArg::Linear => SimKind::Linear,
                GreatestKindArg::General => SimKind::General,
            };
            let greatest = greatest_sim(high, low, kind)?;
            report.line(greatest.to_string());
            report.line(format!("pairs={}", greatest.count()));
            Ok(())
        }
        Cmd::Synth { what } => synth(what, report),
        Cmd::Exec {
            file,
            istruct,
            start,
            client,
            server,
            trace,
        } => {
            let model = load_model(file)?;
            let w = model.istruct(istruct)?;
            let start = state_index(w, start)?;
            let client_doc: ClientDoc = load_json(client)?;
            let server_doc: ServerDoc = load_json(server)?;
            let client = client_from_doc(istruct, w, &client_doc)?;
            let server = server_from_doc(istruct, w, &server_doc)?;
            let (final_state, run) = exec(w, start, &client, &server)?;
            let rendered = render_trace(w, &run);
            for line in rendered.lines() {
                report.line(line);
            }
            report.line(format!("final {}", w.source().state_name(final_state)));
            if let Some(path) = trace {
                write_bytes(report, path, rendered.as_bytes())?;
            }
            Ok(())
        }
        Cmd::ExecAcross {
            file,
            cert,
            start_high,
            start_low,
            client,
            server,
        } => {
            let model = load_model(file)?;
            let cert_doc: CertDoc = load_json(cert)?;
            let high = model.istruct(&cert_doc.from)?;
            let low = model.istruct(&cert_doc.to)?;
            let certificate = cert_from_doc(high, low, &cert_doc)?;
            let s_h = state_index(high, start_high)?;
            let s_l = state_index(low, start_low)?;
            let client_doc: ClientDoc = load_json(client)?;
            let server_doc: ServerDoc = load_json(server)?;
            let client = client_from_doc(&cert_doc.from, high, &client_doc)?;
            let server = server_from_doc(&cert_doc.to, low, &server_doc)?;
            let run = exec_across(high, low, &certificate, s_h, s_l, &client, &server)?;
            report.line(format!(
                "final high={} low={}",
                high.source().state_name(run.final_high),
                low.source().state_name(run.final_low)
            ));
            report.line("high trace:".to_string());
            for line in render_trace(high, &run.high_trace).lines() {
                report.line(format!("  {line}"));
            }
            report.line("low trace:".to_string());
            for line in render_trace(low, &run.low_trace).lines() {
                report.line(format!("  {line}"));
            }
            Ok(())
        }
        Cmd::Algebra { what } => algebra(what, cli.max_size, report),
        Cmd::Topology { what } => topology(what, report),
        Cmd::Laws {
            file,
            random,
            iterations,
            max_states,
        } => {
            let structures = match (file, random) {
                (Some(path), false) => {
                    let model = load_model(path)?;
                    let homogeneous: Vec<InteractionStructure> = model
                        .istructs
                        .iter()
                        .filter(|(_, w)| w.is_homogeneous())
                        .map(|(_, w)| w.clone())
                        .collect();
                    if homogeneous.is_empty() {
                        return Err(CmdError::Error(format!(
                            "`{}` declares no homogeneous istruct",
                            path.display()
                        )));
                    }
                    Some(homogeneous)
                }
                (None, true) => None,
                (Some(_), true) => {
                    return Err(CmdError::Error(
                        "pass either a model file or --random, not both".into(),
                    ))
                }
                (None, false) => {
                    return Err(CmdError::Error(
                        "pass a model file or --random".into(),
                    ))
                }
            };
            let config = LawConfig {
                seed: cli.seed,
                iterations: *iterations,
                max_states: *max_states,
                cap: cli.max_size,
            };
            report.line(format!(
                "seed={} iterations={} max-states={}",
                config.seed, config.iterations, config.max_states
            ));
            let outcome = run_laws(&config, structures);
            for line in &outcome.lines {
                report.line(line);
            }
            if !outcome.passed() {
                return Err(CmdError::Fail(format!(
                    "{} of {} checks failed",
                    outcome.failures, outcome.checks
                )));
            }
            Ok(())
        }
    }
}

fn render_tree_text(w: &InteractionStructure, state: usize, tree: &interax::ClientTree) -> String {
    match tree {
        interax::ClientTree::Exit => "exit".to_string(),
        interax::ClientTree::Call { command, branches } => {
            let c = w.command(state, *command);
            let inner = c
                .responses
                .iter()
                .zip(branches)
                .map(|(r, b)| format!("{} => {}", r.name, render_tree_text(w, r.next, b)))
                .collect::<Vec<_>>()
                .join(", ");
            format!("call {} ({inner})", c.name)
        }
    }
}

fn synth(cmd: &SynthCmd, report: &mut Report) -> CmdResult {
    match cmd {
        SynthCmd::Client {
            file,
            istruct,
            start,
            goal,
            out,
        } => {
            let model = load_model(file)?;
            let w = model.istruct(istruct)?;
            let start = state_index(w, start)?;
            let goal = model.subset(goal)?;
            let client = synth_client(w, start, goal)?;
            report.line(render_tree_text(w, client.root, &client.tree));
            let exits = interax::programs::client_exits(w, &client)?;
            report.line(format!("exits={}", exits.len()));
            if let Some(path) = out {
                let doc = client_to_doc(istruct, w, &client);
                write_bytes(report, path, &to_json_bytes(&doc))?;
            }
            Ok(())
        }
        SynthCmd::Server {
            file,
            istruct,
            maintain,
            out,
        } => {
            let model = load_model(file)?;
            let w = model.istruct(istruct)?;
            let safe = model.subset(maintain)?;
            let server = synth_server(w, safe)?;
            verify_server(w, &server)?;
            report.line(format!("invariant {}", server.invariant));
            for ((s, a), d) in &server.choice {
                let c = w.command(*s, *a);
                report.line(format!(
                    "choice {} {} -> {}",
                    w.source().state_name(*s),
                    c.name,
                    c.responses[*d].name
                ));
            }
            if server.is_vacuous() {
                report.note("invariant is empty: the server serves no state");
            }
            if let Some(path) = out {
                let doc = server_to_doc(istruct, w, &server);
                write_bytes(report, path, &to_json_bytes(&doc))?;
            }
            Ok(())
        }
    }
}

fn print_derived(
    report: &mut Report,
    out: &Option<PathBuf>,
    model: ModelFile,
) -> CmdResult {
    let text = print_model(&model);
    for line in text.lines() {
        report.line(line);
    }
    if let Some(path) = out {
        write_bytes(report, path, text.as_bytes())?;
    }
    Ok(())
}

fn algebra(cmd: &AlgebraCmd, cap: usize, report: &mut Report) -> CmdResult {
    match cmd {
        AlgebraCmd::Dual { file, istruct, out } => {
            let model = load_model(file)?;
            let w = model.istruct(istruct)?;
            let dual = w.dual(cap)?;
            let mut spaces = vec![(w.source().name().to_string(), w.source().clone())];
            if !w.is_homogeneous() {
                spaces.push((w.target().name().to_string(), w.target().clone()));
            }
            print_derived(
                report,
                out,
                ModelFile {
                    spaces,
                    istructs: vec![(format!("{istruct}_dual"), dual)],
                    ..Default::default()
                },
            )
        }
        AlgebraCmd::Seq {
            file,
            first,
            second,
            out,
        } => {
            let model = load_model(file)?;
            let w1 = model.istruct(first)?;
            let w2 = model.istruct(second)?;
            let composed = InteractionStructure::seq(w1, w2, cap)?;
            let mut spaces = vec![(composed.source().name().to_string(), composed.source().clone())];
            if !composed.is_homogeneous() {
                spaces.push((composed.target().name().to_string(), composed.target().clone()));
            }
            print_derived(
                report,
                out,
                ModelFile {
                    spaces,
                    istructs: vec![(format!("{first}_seq_{second}"), composed)],
                    ..Default::default()
                },
            )
        }
        AlgebraCmd::Tensor {
            file,
            left,
            right,
            out,
        } => {
            let model = load_model(file)?;
            let w1 = model.istruct(left)?;
            let w2 = model.istruct(right)?;
            let product = InteractionStructure::tensor(w1, w2)?;
            let mut spaces = vec![(product.source().name().to_string(), product.source().clone())];
            if !product.is_homogeneous() {
                spaces.push((product.target().name().to_string(), product.target().clone()));
            }
            print_derived(
                report,
                out,
                ModelFile {
                    spaces,
                    istructs: vec![(format!("{left}_tensor_{right}"), product)],
                    ..Default::default()
                },
            )
        }
        AlgebraCmd::Oplus {
            file,
            left,
            right,
            out,
        } => {
            let model = load_model(file)?;
            let w1 = model.istruct(left)?;
            let w2 = model.istruct(right)?;
            let product = InteractionStructure::angelic_product(w1, w2)?;
            print_derived(
                report,
                out,
                ModelFile {
                    spaces: vec![(product.source().name().to_string(), product.source().clone())],
                    istructs: vec![(format!("{left}_oplus_{right}"), product)],
                    ..Default::default()
                },
            )
        }
        AlgebraCmd::Factorize { file, istruct, out } => {
            let model = load_model(file)?;
            let w = model.istruct(istruct)?;
            let f = w.factorize()?;
            let issue = InteractionStructure::angelic(&f.issue);
            let perform = InteractionStructure::demonic(&f.perform);
            let mut spaces = vec![
                (w.source().name().to_string(), w.source().clone()),
                (f.mid.name().to_string(), f.mid.clone()),
            ];
            if !w.is_homogeneous() {
                spaces.push((w.target().name().to_string(), w.target().clone()));
            }
            print_derived(
                report,
                out,
                ModelFile {
                    spaces,
                    istructs: vec![
                        (format!("{istruct}_issue"), issue),
                        (format!("{istruct}_perform"), perform),
                    ],
                    ..Default::default()
                },
            )
        }
        AlgebraCmd::Localize {
            file,
            istruct,
            init,
            out,
        } => {
            let model = load_model(file)?;
            let w = model.istruct(istruct)?;
            let init = state_index(w, init)?;
            let loc = w.localize(init, cap)?;
            report.line(format!(
                "states={}",
                loc.structure.source().len()
            ));
            print_derived(
                report,
                out,
                ModelFile {
                    spaces: vec![(
                        loc.structure.source().name().to_string(),
                        loc.structure.source().clone(),
                    )],
                    istructs: vec![(format!("{istruct}_loc"), loc.structure.clone())],
                    preorders: vec![(format!("{istruct}_loc_leq"), loc.leq)],
                    ..Default::default()
                },
            )
        }
    }
}

fn topology(cmd: &TopologyCmd, report: &mut Report) -> CmdResult {
    match cmd {
        TopologyCmd::Saturation { file, istruct } => {
            let model = load_model(file)?;
            let w = model.istruct(istruct)?;
            let ss = saturation_preorder(w)?;
            report.line(ss.leq().to_string());
            report.line(format!("pairs={}", ss.leq().count()));
            report.note("the converse order certifies as a general self-simulation");
            Ok(())
        }
        TopologyCmd::Localized {
            file,
            istruct,
            order,
            strict,
        } => {
            let model = load_model(file)?;
            let w = model.istruct(istruct)?;
            let ss = order_for(&model, w, order)?;
            match check_localized(&ss, *strict)? {
                Ok(()) => {
                    report.line("localized".to_string());
                    Ok(())
                }
                Err(cex) => {
                    report.line(format!(
                        "counterexample smaller={} larger={} command={}",
                        w.source().state_name(cex.smaller),
                        w.source().state_name(cex.larger),
                        w.command(cex.larger, cex.command).name
                    ));
                    Err(CmdError::Fail("the order is not localized".into()))
                }
            }
        }
        TopologyCmd::Point {
            file,
            istruct,
            subset,
            order,
        } => {
            let model = load_model(file)?;
            let w = model.istruct(istruct)?;
            let alpha = model.subset(subset)?;
            let ss = order_for(&model, w, order)?;
            match check_formal_point(&ss, alpha)? {
                Ok(()) => {
                    report.line("point".to_string());
                    Ok(())
                }
                Err(failure) => {
                    report.line(format!("failed {failure}"));
                    Err(CmdError::Fail(format!(
                        "`{subset}` is not a formal point (condition: {failure})"
                    )))
                }
            }
        }
        TopologyCmd::Continuous {
            file,
            from,
            to,
            relation,
            order_high,
            order_low,
        } => {
            let model = load_model(file)?;
            let high = model.istruct(from)?;
            let low = model.istruct(to)?;
            let r = model.relation(relation)?;
            let ss_high = order_for(&model, high, order_high)?;
            let ss_low = order_for(&model, low, order_low)?;
            match check_continuous_map(r, &ss_high, &ss_low)? {
                Ok(()) => {
                    report.line("continuous".to_string());
                    Ok(())
                }
                Err(failure) => {
                    report.line(format!("failed {failure}"));
                    Err(CmdError::Fail(format!(
                        "`{relation}` is not a continuous map (condition: {failure})"
                    )))
                }
            }
        }
    }
}
