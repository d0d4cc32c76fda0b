//! Small canonical structures used throughout the test suites and docs.

use crate::istruct::{Command, InteractionStructure, Response};
use crate::space::{Space, StateSpace};

fn named(name: &str, states: &[&str]) -> Space {
    StateSpace::new(name, states.iter().map(|s| s.to_string()).collect()).unwrap()
}

fn cmd(name: &str, responses: &[(&str, usize)]) -> Command {
    Command {
        name: name.into(),
        responses: responses
            .iter()
            .map(|(n, next)| Response {
                name: (*n).into(),
                next: *next,
            })
            .collect(),
    }
}

/// Three states in a row; `inc` moves right, the last state is command-free.
pub fn count3() -> InteractionStructure {
    let sp = named("counter", &["s0", "s1", "s2"]);
    InteractionStructure::from_parts(
        &sp,
        &sp,
        vec![
            vec![cmd("inc", &[("ok", 1)])],
            vec![cmd("inc", &[("ok", 2)])],
            vec![],
        ],
    )
    .unwrap()
}

/// One gamble: `play` is answered by `good` or `bad`; both outcomes are
/// terminal.
pub fn coin() -> InteractionStructure {
    let sp = named("coin", &["s", "win", "lose"]);
    InteractionStructure::from_parts(
        &sp,
        &sp,
        vec![vec![cmd("play", &[("good", 1), ("bad", 2)])], vec![], vec![]],
    )
    .unwrap()
}

/// A single state with one command that has no responses at all.
pub fn magic() -> InteractionStructure {
    let sp = named("unit", &["m"]);
    InteractionStructure::from_parts(&sp, &sp, vec![vec![cmd("go", &[])]]).unwrap()
}

/// Two states bridged by a single `jump`.
pub fn jump2() -> InteractionStructure {
    let sp = named("jumper", &["a0", "a2"]);
    InteractionStructure::from_parts(&sp, &sp, vec![vec![cmd("jump", &[("ok", 1)])], vec![]])
        .unwrap()
}
