//! The model file format: named spaces, structures, subsets, relations and
//! preorders in one line-oriented text file.
//!
//! ```text
//! # comments run to the end of the line
//! space counter { s0 s1 s2 }
//!
//! istruct count3 on counter {
//!   state s0 { cmd inc { ok -> s1 } }
//!   state s1 { cmd inc { ok -> s2 } }
//! }
//!
//! subset goal in counter { s2 }
//! relation refine : jumper -> counter { (a0,s0) (a2,s2) }
//! preorder chain on counter { (s0,s1) (s1,s2) }
//! ```
//!
//! States omitted from an `istruct` have no commands. Preorders are closed
//! reflexively and transitively on load. `print_model` emits the canonical
//! form, which parses back to the same model.

use std::fmt::Write as _;

use interax::istruct::{Command, Response};
use interax::relation::Relation;
use interax::space::{Space, StateSpace, Subset};
use interax::InteractionStructure;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Arrow,
    Colon,
    Atom(String),
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::LBrace => write!(f, "{{"),
            Tok::RBrace => write!(f, "}}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Comma => write!(f, ","),
            Tok::Arrow => write!(f, "->"),
            Tok::Colon => write!(f, ":"),
            Tok::Atom(a) => write!(f, "{a}"),
        }
    }
}

struct Lexer {
    tokens: Vec<(Tok, usize, usize)>,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let mut tokens = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let mut chars = line.char_indices().peekable();
        let col_of = |byte: usize| line[..byte].chars().count() + 1;
        while let Some((i, c)) = chars.next() {
            if c.is_whitespace() {
                continue;
            }
            if c == '#' {
                break;
            }
            let col = col_of(i);
            match c {
                '{' => tokens.push((Tok::LBrace, ln + 1, col)),
                '}' => tokens.push((Tok::RBrace, ln + 1, col)),
                '(' => tokens.push((Tok::LParen, ln + 1, col)),
                ')' => tokens.push((Tok::RParen, ln + 1, col)),
                ',' => tokens.push((Tok::Comma, ln + 1, col)),
                '-' if matches!(chars.peek(), Some((_, '>'))) => {
                    chars.next();
                    tokens.push((Tok::Arrow, ln + 1, col));
                }
                _ => {
                    let mut atom = String::new();
                    atom.push(c);
                    while let Some((_, p)) = chars.peek().copied() {
                        if p.is_whitespace() || "{}(),#".contains(p) {
                            break;
                        }
                        if p == '-' {
                            // a `->` terminates the atom; a lone dash does not
                            let mut ahead = chars.clone();
                            ahead.next();
                            if matches!(ahead.peek(), Some((_, '>'))) {
                                break;
                            }
                        }
                        atom.push(p);
                        chars.next();
                    }
                    // bare `:` separates relation signatures
                    if atom == ":" {
                        tokens.push((Tok::Colon, ln + 1, col));
                    } else {
                        tokens.push((Tok::Atom(atom), ln + 1, col));
                    }
                }
            }
        }
    }
    Ok(Lexer { tokens })
}

/// All named objects of one file.
#[derive(Debug, Clone, Default)]
pub struct ModelFile {
    pub spaces: Vec<(String, Space)>,
    pub istructs: Vec<(String, InteractionStructure)>,
    pub subsets: Vec<(String, Subset)>,
    pub relations: Vec<(String, Relation)>,
    pub preorders: Vec<(String, Relation)>,
}

macro_rules! lookup {
    ($fn:ident, $field:ident, $ty:ty, $kind:literal) => {
        pub fn $fn(&self, name: &str) -> Result<&$ty, String> {
            self.$field
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v)
                .ok_or_else(|| format!(concat!("no ", $kind, " named `{}`"), name))
        }
    };
}

impl ModelFile {
    lookup!(space, spaces, Space, "space");
    lookup!(istruct, istructs, InteractionStructure, "istruct");
    lookup!(subset, subsets, Subset, "subset");
    lookup!(relation, relations, Relation, "relation");
    lookup!(preorder, preorders, Relation, "preorder");

    /// Name of a structure already held by this model, if any.
    pub fn istruct_name(&self, w: &InteractionStructure) -> Option<&str> {
        self.istructs
            .iter()
            .find(|(_, v)| v == w)
            .map(|(n, _)| n.as_str())
    }
}

struct Parser {
    tokens: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self
            .tokens
            .get(self.pos.min(self.tokens.len().saturating_sub(1)))
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((0, 0));
        Err(ParseError {
            line,
            col,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _, _)| t)
    }

    fn next(&mut self, what: &str) -> Result<Tok, ParseError> {
        match self.tokens.get(self.pos) {
            Some((t, _, _)) => {
                let t = t.clone();
                self.pos += 1;
                Ok(t)
            }
            None => self.err(format!("unexpected end of file, expected {what}")),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        let found = self.next(&tok.to_string())?;
        if found == tok {
            Ok(())
        } else {
            self.pos -= 1;
            self.err(format!("expected `{tok}`, found `{found}`"))
        }
    }

    fn atom(&mut self, what: &str) -> Result<String, ParseError> {
        let found = self.next(what)?;
        match found {
            Tok::Atom(a) => Ok(a),
            other => {
                self.pos -= 1;
                self.err(format!("expected {what}, found `{other}`"))
            }
        }
    }
}

pub fn parse_model(text: &str) -> Result<ModelFile, ParseError> {
    let lexer = lex(text)?;
    let mut p = Parser {
        tokens: lexer.tokens,
        pos: 0,
    };
    let mut model = ModelFile::default();
    while p.peek().is_some() {
        let keyword = p.atom("a declaration keyword")?;
        match keyword.as_str() {
            "space" => parse_space(&mut p, &mut model)?,
            "istruct" => parse_istruct(&mut p, &mut model)?,
            "subset" => parse_subset(&mut p, &mut model)?,
            "relation" => parse_relation(&mut p, &mut model)?,
            "preorder" => parse_preorder(&mut p, &mut model)?,
            other => {
                p.pos -= 1;
                return p.err(format!(
                    "expected `space`, `istruct`, `subset`, `relation` or `preorder`, found `{other}`"
                ));
            }
        }
    }
    Ok(model)
}

fn check_fresh<T>(p: &Parser, names: &[(String, T)], name: &str, kind: &str) -> Result<(), ParseError> {
    if names.iter().any(|(n, _)| n == name) {
        let q = Parser {
            tokens: p.tokens.clone(),
            pos: p.pos.saturating_sub(1),
        };
        return q.err(format!("duplicate {kind} name `{name}`"));
    }
    Ok(())
}

fn resolve_space(p: &Parser, model: &ModelFile, name: &str) -> Result<Space, ParseError> {
    match model.space(name) {
        Ok(space) => Ok(space.clone()),
        Err(message) => {
            let q = Parser {
                tokens: p.tokens.clone(),
                pos: p.pos.saturating_sub(1),
            };
            q.err(message)
        }
    }
}

fn resolve_state(p: &Parser, space: &Space, name: &str) -> Result<usize, ParseError> {
    match space.index_of(name) {
        Some(i) => Ok(i),
        None => {
            let q = Parser {
                tokens: p.tokens.clone(),
                pos: p.pos.saturating_sub(1),
            };
            q.err(format!(
                "space `{}` has no state `{name}`",
                space.name()
            ))
        }
    }
}

fn parse_space(p: &mut Parser, model: &mut ModelFile) -> Result<(), ParseError> {
    let name = p.atom("a space name")?;
    check_fresh(p, &model.spaces, &name, "space")?;
    p.expect(Tok::LBrace)?;
    let mut states = Vec::new();
    loop {
        match p.next("a state name or `}`")? {
            Tok::RBrace => break,
            Tok::Atom(state) => states.push(state),
            other => {
                p.pos -= 1;
                return p.err(format!("expected a state name or `}}`, found `{other}`"));
            }
        }
    }
    match StateSpace::new(name.clone(), states) {
        Ok(space) => {
            model.spaces.push((name, space));
            Ok(())
        }
        Err(e) => p.err(e.to_string()),
    }
}

fn parse_istruct(p: &mut Parser, model: &mut ModelFile) -> Result<(), ParseError> {
    let name = p.atom("an istruct name")?;
    check_fresh(p, &model.istructs, &name, "istruct")?;
    let on = p.atom("`on`")?;
    if on != "on" {
        p.pos -= 1;
        return p.err(format!("expected `on`, found `{on}`"));
    }
    let source_name = p.atom("a space name")?;
    let source = resolve_space(p, model, &source_name)?;
    let target = if matches!(p.peek(), Some(Tok::Atom(a)) if a == "to") {
        p.atom("`to`")?;
        let target_name = p.atom("a space name")?;
        resolve_space(p, model, &target_name)?
    } else {
        source.clone()
    };
    p.expect(Tok::LBrace)?;
    let mut entries: Vec<Vec<Command>> = vec![Vec::new(); source.len()];
    let mut declared = vec![false; source.len()];
    loop {
        match p.next("`state` or `}`")? {
            Tok::RBrace => break,
            Tok::Atom(kw) if kw == "state" => {
                let state_name = p.atom("a state name")?;
                let s = resolve_state(p, &source, &state_name)?;
                if declared[s] {
                    p.pos -= 1;
                    return p.err(format!("state `{state_name}` declared twice"));
                }
                declared[s] = true;
                p.expect(Tok::LBrace)?;
                loop {
                    match p.next("`cmd` or `}`")? {
                        Tok::RBrace => break,
                        Tok::Atom(kw) if kw == "cmd" => {
                            let cmd_name = p.atom("a command name")?;
                            p.expect(Tok::LBrace)?;
                            let mut responses = Vec::new();
                            loop {
                                match p.next("a response name or `}`")? {
                                    Tok::RBrace => break,
                                    Tok::Atom(resp) => {
                                        p.expect(Tok::Arrow)?;
                                        let next_name = p.atom("a state name")?;
                                        let next = resolve_state(p, &target, &next_name)?;
                                        responses.push(Response {
                                            name: resp,
                                            next,
                                        });
                                    }
                                    other => {
                                        p.pos -= 1;
                                        return p.err(format!(
                                            "expected a response name or `}}`, found `{other}`"
                                        ));
                                    }
                                }
                            }
                            entries[s].push(Command {
                                name: cmd_name,
                                responses,
                            });
                        }
                        other => {
                            p.pos -= 1;
                            return p.err(format!("expected `cmd` or `}}`, found `{other}`"));
                        }
                    }
                }
            }
            other => {
                p.pos -= 1;
                return p.err(format!("expected `state` or `}}`, found `{other}`"));
            }
        }
    }
    match InteractionStructure::from_parts(&source, &target, entries) {
        Ok(w) => {
            model.istructs.push((name, w));
            Ok(())
        }
        Err(e) => p.err(e.to_string()),
    }
}

fn parse_subset(p: &mut Parser, model: &mut ModelFile) -> Result<(), ParseError> {
    let name = p.atom("a subset name")?;
    check_fresh(p, &model.subsets, &name, "subset")?;
    let kw = p.atom("`in`")?;
    if kw != "in" {
        p.pos -= 1;
        return p.err(format!("expected `in`, found `{kw}`"));
    }
    let space_name = p.atom("a space name")?;
    let space = resolve_space(p, model, &space_name)?;
    p.expect(Tok::LBrace)?;
    let mut members = Vec::new();
    loop {
        match p.next("a state name or `}`")? {
            Tok::RBrace => break,
            Tok::Atom(state) => members.push(resolve_state(p, &space, &state)?),
            other => {
                p.pos -= 1;
                return p.err(format!("expected a state name or `}}`, found `{other}`"));
            }
        }
    }
    model
        .subsets
        .push((name, Subset::from_indices(&space, members)));
    Ok(())
}

fn parse_pairs(
    p: &mut Parser,
    domain: &Space,
    codomain: &Space,
) -> Result<Vec<(usize, usize)>, ParseError> {
    p.expect(Tok::LBrace)?;
    let mut pairs = Vec::new();
    loop {
        match p.next("`(` or `}`")? {
            Tok::RBrace => break,
            Tok::LParen => {
                let a = p.atom("a state name")?;
                let i = resolve_state(p, domain, &a)?;
                p.expect(Tok::Comma)?;
                let b = p.atom("a state name")?;
                let j = resolve_state(p, codomain, &b)?;
                p.expect(Tok::RParen)?;
                pairs.push((i, j));
            }
            other => {
                p.pos -= 1;
                return p.err(format!("expected `(` or `}}`, found `{other}`"));
            }
        }
    }
    Ok(pairs)
}

fn parse_relation(p: &mut Parser, model: &mut ModelFile) -> Result<(), ParseError> {
    let name = p.atom("a relation name")?;
    check_fresh(p, &model.relations, &name, "relation")?;
    p.expect(Tok::Colon)?;
    let domain_name = p.atom("a space name")?;
    let domain = resolve_space(p, model, &domain_name)?;
    p.expect(Tok::Arrow)?;
    let codomain_name = p.atom("a space name")?;
    let codomain = resolve_space(p, model, &codomain_name)?;
    let pairs = parse_pairs(p, &domain, &codomain)?;
    model
        .relations
        .push((name, Relation::from_pairs(&domain, &codomain, pairs)));
    Ok(())
}

fn parse_preorder(p: &mut Parser, model: &mut ModelFile) -> Result<(), ParseError> {
    let name = p.atom("a preorder name")?;
    check_fresh(p, &model.preorders, &name, "preorder")?;
    let kw = p.atom("`on`")?;
    if kw != "on" {
        p.pos -= 1;
        return p.err(format!("expected `on`, found `{kw}`"));
    }
    let space_name = p.atom("a space name")?;
    let space = resolve_space(p, model, &space_name)?;
    let pairs = parse_pairs(p, &space, &space)?;
    let closed = Relation::from_pairs(&space, &space, pairs)
        .rtc()
        .expect("endo-relation always closes");
    model.preorders.push((name, closed));
    Ok(())
}

/// Canonical rendering; `parse_model(print_model(m))` reproduces `m`.
pub fn print_model(model: &ModelFile) -> String {
    let mut out = String::new();
    for (name, space) in &model.spaces {
        write!(out, "space {name} {{").unwrap();
        for s in space.state_names() {
            write!(out, " {s}").unwrap();
        }
        out.push_str(" }\n");
    }
    for (name, w) in &model.istructs {
        if w.is_homogeneous() {
            writeln!(out, "istruct {name} on {} {{", w.source().name()).unwrap();
        } else {
            writeln!(
                out,
                "istruct {name} on {} to {} {{",
                w.source().name(),
                w.target().name()
            )
            .unwrap();
        }
        for s in 0..w.source().len() {
            if w.commands(s).is_empty() {
                continue;
            }
            writeln!(out, "  state {} {{", w.source().state_name(s)).unwrap();
            for c in w.commands(s) {
                write!(out, "    cmd {} {{", c.name).unwrap();
                for r in &c.responses {
                    write!(out, " {} -> {}", r.name, w.target().state_name(r.next)).unwrap();
                }
                out.push_str(" }\n");
            }
            out.push_str("  }\n");
        }
        out.push_str("}\n");
    }
    for (name, subset) in &model.subsets {
        write!(out, "subset {name} in {} {{", subset.space().name()).unwrap();
        for s in subset.members() {
            write!(out, " {}", subset.space().state_name(s)).unwrap();
        }
        out.push_str(" }\n");
    }
    for (name, relation) in &model.relations {
        write!(
            out,
            "relation {name} : {} -> {} {{",
            relation.domain().name(),
            relation.codomain().name()
        )
        .unwrap();
        for (i, j) in relation.pairs() {
            write!(
                out,
                " ({},{})",
                relation.domain().state_name(i),
                relation.codomain().state_name(j)
            )
            .unwrap();
        }
        out.push_str(" }\n");
    }
    for (name, relation) in &model.preorders {
        write!(out, "preorder {name} on {} {{", relation.domain().name()).unwrap();
        for (i, j) in relation.pairs() {
            write!(
                out,
                " ({},{})",
                relation.domain().state_name(i),
                relation.codomain().state_name(j)
            )
            .unwrap();
        }
        out.push_str(" }\n");
    }
    out
}
