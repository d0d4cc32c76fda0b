//! Independent brute-force evaluators used as oracles. These deliberately
//! avoid the crate's fixpoint and checker engines: covers are decided by
//! depth-bounded tree search, closures by path enumeration, simulations by
//! direct quantifier evaluation.

use interax::istruct::InteractionStructure;
use interax::programs::ClientTree;
use interax::relation::Relation;
use interax::space::Subset;

/// States admitting an explicit command tree of depth at most `depth`
/// whose exits all satisfy `goal`, by backtracking search.
pub fn oracle_cover(w: &InteractionStructure, goal: &Subset, depth: usize) -> Subset {
    Subset::from_indices(
        w.source(),
        (0..w.source().len()).filter(|s| oracle_tree(w, *s, goal, depth).is_some()),
    )
}

/// Searches for an explicit tree witnessing the cover, trying commands in
/// index order.
pub fn oracle_tree(
    w: &InteractionStructure,
    state: usize,
    goal: &Subset,
    depth: usize,
) -> Option<ClientTree> {
    if goal.member(state) {
        return Some(ClientTree::Exit);
    }
    if depth == 0 {
        return None;
    }
    'candidates: for (a, c) in w.commands(state).iter().enumerate() {
        let mut branches = Vec::with_capacity(c.responses.len());
        for r in &c.responses {
            match oracle_tree(w, r.next, goal, depth - 1) {
                Some(b) => branches.push(b),
                None => continue 'candidates,
            }
        }
        return Some(ClientTree::Call {
            command: a,
            branches,
        });
    }
    None
}

/// Greatest subset of `safe` on which every command keeps some response
/// inside, found by scanning all subsets (top-down by popcount).
pub fn oracle_interior(w: &InteractionStructure, safe: &Subset) -> Subset {
    let mut best = Subset::empty(w.source());
    for candidate in Subset::enumerate_all(w.source()) {
        if !candidate.is_subset_of(safe).unwrap() {
            continue;
        }
        let invariant = candidate.members().all(|s| {
            w.commands(s)
                .iter()
                .all(|c| c.responses.iter().any(|r| candidate.member(r.next)))
        });
        if invariant && candidate.count() > best.count() {
            best = candidate;
        }
    }
    best
}

/// Reflexive-transitive closure by per-node depth-first reachability.
pub fn oracle_rtc(r: &Relation) -> Relation {
    let n = r.domain().len();
    let mut out = Relation::empty(r.domain(), r.domain());
    for start in 0..n {
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            for t in 0..n {
                if r.contains(v, t) && !seen[t] {
                    stack.push(t);
                }
            }
        }
        for (t, reached) in seen.iter().enumerate() {
            if *reached {
                out = out.with_pair(start, t);
            }
        }
    }
    out
}

/// The four-quantifier sustainability block, evaluated directly.
pub fn oracle_linear_sim(
    high: &InteractionStructure,
    low: &InteractionStructure,
    r: &Relation,
) -> bool {
    r.pairs().all(|(s_h, s_l)| {
        high.commands(s_h).iter().all(|c_h| {
            low.commands(s_l).iter().any(|c_l| {
                c_l.responses.iter().all(|r_l| {
                    c_h.responses
                        .iter()
                        .any(|r_h| r.contains(r_h.next, r_l.next))
                })
            })
        })
    })
}

/// The tree-based sustainability condition, with the cover decided by the
/// independent depth-bounded search.
pub fn oracle_general_sim(
    high: &InteractionStructure,
    low: &InteractionStructure,
    r: &Relation,
) -> bool {
    let depth = low.source().len();
    r.pairs().all(|(s_h, s_l)| {
        (0..high.commands(s_h).len()).all(|a_h| {
            let mut targets = Subset::empty(low.source());
            for r_h in &high.command(s_h, a_h).responses {
                targets = targets.union(&r.row(r_h.next)).unwrap();
            }
            oracle_tree(low, s_l, &targets, depth).is_some()
        })
    })
}
