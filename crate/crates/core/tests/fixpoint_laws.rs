//! Cross-module laws for the transformer and fixpoint layers, checked
//! against the independent oracles in `common` over seeded random
//! structures, exhaustively over all subsets where the spaces are small.

mod common;

use common::{oracle_cover, oracle_interior, oracle_rtc, oracle_tree};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use interax::fixpoint::{cover, interior, is_closed, is_open, open_join};
use interax::gen::{gen_istruct, gen_istruct_between, gen_relation, gen_space, gen_subset, GenLimits};
use interax::istruct::{Agent, InteractionStructure, DEFAULT_SIZE_CAP};
use interax::programs::{client_exits, exec, synth_client, synth_server, verify_client};
use interax::space::Subset;

fn small_limits() -> GenLimits {
    GenLimits {
        max_states: 4,
        max_commands: 3,
        max_responses: 3,
    }
}

#[test]
fn one_step_homomorphisms_over_random_structures() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let limits = small_limits();
    for _ in 0..120 {
        let space = gen_space(&mut rng, "S", &limits);
        let w1 = gen_istruct_between(&mut rng, &space, &space, &limits);
        let w2 = gen_istruct_between(&mut rng, &space, &space, &limits);
        let skip = InteractionStructure::skip(&space);
        let union = InteractionStructure::union_all(&space, &space, &[&w1, &w2]).unwrap();
        let inter =
            InteractionStructure::intersection_all(&space, &space, &[&w1, &w2], DEFAULT_SIZE_CAP)
                .unwrap();
        let seq = InteractionStructure::seq(&w1, &w2, DEFAULT_SIZE_CAP).unwrap();
        for u in Subset::enumerate_all(&space) {
            assert_eq!(skip.one_step(&u, Agent::Angel).unwrap(), u);
            let a1 = w1.one_step(&u, Agent::Angel).unwrap();
            let a2 = w2.one_step(&u, Agent::Angel).unwrap();
            assert_eq!(
                union.one_step(&u, Agent::Angel).unwrap(),
                a1.union(&a2).unwrap()
            );
            assert_eq!(
                inter.one_step(&u, Agent::Angel).unwrap(),
                a1.intersection(&a2).unwrap()
            );
            assert_eq!(
                seq.one_step(&u, Agent::Angel).unwrap(),
                w1.one_step(&a2, Agent::Angel).unwrap()
            );
        }
    }
}

#[test]
fn dual_realizes_the_demonic_transformer() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let limits = small_limits();
    for _ in 0..120 {
        let w = gen_istruct(&mut rng, "S", &limits);
        let dual = w.dual(DEFAULT_SIZE_CAP).unwrap();
        for s in 0..w.source().len() {
            let expected: usize = w
                .commands(s)
                .iter()
                .map(|c| c.responses.len())
                .product();
            assert_eq!(dual.commands(s).len(), expected);
        }
        for u in Subset::enumerate_all(w.source()) {
            assert_eq!(
                dual.one_step(&u, Agent::Angel).unwrap(),
                w.one_step(&u, Agent::Demon).unwrap()
            );
        }
    }
}

#[test]
fn update_structures_match_relational_updates() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let limits = small_limits();
    for _ in 0..60 {
        let space = gen_space(&mut rng, "S", &limits);
        let rel = gen_relation(&mut rng, &space, &space);
        // carve a transition structure out of the relation
        let arrows = (0..space.len())
            .map(|s| {
                rel.row(s)
                    .members()
                    .map(|t| interax::transition::Arrow {
                        label: format!("t{t}"),
                        next: t,
                    })
                    .collect()
            })
            .collect();
        let t = interax::TransitionStructure::new(&space, &space, arrows).unwrap();
        assert_eq!(t.to_relation(), rel);
        let ang = InteractionStructure::angelic(&t);
        let dem = InteractionStructure::demonic(&t);
        for u in Subset::enumerate_all(&space) {
            assert_eq!(
                ang.one_step(&u, Agent::Angel).unwrap(),
                rel.angelic_update(&u).unwrap()
            );
            assert_eq!(
                dem.one_step(&u, Agent::Angel).unwrap(),
                rel.demonic_update(&u).unwrap()
            );
        }
    }
}

#[test]
fn factorization_preserves_the_transformer() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let limits = small_limits();
    for _ in 0..100 {
        let w = gen_istruct(&mut rng, "S", &limits);
        let f = w.factorize().unwrap();
        let composed = InteractionStructure::seq(
            &InteractionStructure::angelic(&f.issue),
            &InteractionStructure::demonic(&f.perform),
            DEFAULT_SIZE_CAP,
        )
        .unwrap();
        for u in Subset::enumerate_all(w.source()) {
            assert_eq!(
                composed.one_step(&u, Agent::Angel).unwrap(),
                w.one_step(&u, Agent::Angel).unwrap()
            );
        }
    }
}

#[test]
fn rtc_agrees_with_path_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let limits = small_limits();
    for _ in 0..100 {
        let space = gen_space(&mut rng, "S", &limits);
        let r = gen_relation(&mut rng, &space, &space);
        let closure = r.rtc().unwrap();
        assert_eq!(closure, oracle_rtc(&r));
        assert_eq!(closure.rtc().unwrap(), closure);
        assert!(closure.is_reflexive() && closure.is_transitive());
    }
}

#[test]
fn cover_is_a_closure_operator_and_matches_tree_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let limits = small_limits();
    for _ in 0..100 {
        let w = gen_istruct(&mut rng, "S", &limits);
        let depth = w.source().len();
        let subsets = Subset::enumerate_all(w.source());
        for u in &subsets {
            let cu = cover(&w, u, None).unwrap();
            assert!(cu.rounds() as usize <= depth + 1);
            assert!(u.is_subset_of(&cu.subset).unwrap());
            assert_eq!(
                cover(&w, &cu.subset, None).unwrap().subset,
                cu.subset,
                "cover must be idempotent"
            );
            assert_eq!(cu.subset, oracle_cover(&w, u, depth));
            for v in &subsets {
                if u.is_subset_of(&cover(&w, v, None).unwrap().subset).unwrap() {
                    let cv = cover(&w, v, None).unwrap().subset;
                    assert!(cu.subset.is_subset_of(&cv).unwrap());
                }
            }
        }
    }
}

#[test]
fn cover_is_the_least_saturated_superset() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let limits = small_limits();
    for _ in 0..60 {
        let w = gen_istruct(&mut rng, "S", &limits);
        let subsets = Subset::enumerate_all(w.source());
        for u in &subsets {
            let covered = cover(&w, u, None).unwrap().subset;
            // saturated: one more step adds nothing, and it contains u
            let stepped = w.one_step(&covered, Agent::Angel).unwrap();
            assert!(stepped.is_subset_of(&covered).unwrap());
            // least: every saturated superset of u contains it
            for x in &subsets {
                let saturated = w
                    .one_step(x, Agent::Angel)
                    .unwrap()
                    .is_subset_of(x)
                    .unwrap();
                if saturated && u.is_subset_of(x).unwrap() {
                    assert!(covered.is_subset_of(x).unwrap());
                }
            }
        }
    }
}

#[test]
fn interior_is_the_greatest_invariant_and_matches_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let limits = small_limits();
    for _ in 0..60 {
        let w = gen_istruct(&mut rng, "S", &limits);
        let subsets = Subset::enumerate_all(w.source());
        for v in &subsets {
            let inner = interior(&w, v).unwrap();
            assert!(inner.rounds() as usize <= w.source().len() + 1);
            assert!(inner.subset.is_subset_of(v).unwrap());
            assert_eq!(
                interior(&w, &inner.subset).unwrap().subset,
                inner.subset,
                "interior must be idempotent"
            );
            assert_eq!(inner.subset, oracle_interior(&w, v));
            // invariant: the demon steps back inside
            let stepped = w.one_step(&inner.subset, Agent::Demon).unwrap();
            assert!(inner.subset.is_subset_of(&stepped).unwrap());
            for x in &subsets {
                let invariant = x
                    .is_subset_of(&w.one_step(x, Agent::Demon).unwrap())
                    .unwrap();
                if invariant && x.is_subset_of(v).unwrap() {
                    assert!(x.is_subset_of(&inner.subset).unwrap());
                }
            }
        }
    }
}

#[test]
fn lattice_fixed_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let limits = small_limits();
    for _ in 0..40 {
        let w = gen_istruct(&mut rng, "S", &limits);
        let u = gen_subset(&mut rng, w.source());
        let v = gen_subset(&mut rng, w.source());
        let joined = open_join(&w, &[u.clone(), v.clone()]).unwrap();
        assert!(is_open(&w, &joined).unwrap());
        let met = interax::fixpoint::closed_meet(&w, &[u, v]).unwrap();
        assert!(is_closed(&w, &met).unwrap());
    }
}

#[test]
fn synthesized_clients_verify_and_execute() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let limits = small_limits();
    let mut runs = 0;
    let mut attempts = 0;
    while runs < 100 {
        attempts += 1;
        assert!(attempts < 4000, "generator starved");
        let w = gen_istruct(&mut rng, "S", &limits);
        let goal = gen_subset(&mut rng, w.source());
        let safe = gen_subset(&mut rng, w.source());
        let covered = cover(&w, &goal, None).unwrap().subset;
        let server = synth_server(&w, &safe).unwrap();
        let start = match covered.overlap(&server.invariant).unwrap() {
            Some(s) => s,
            None => continue,
        };
        let client = synth_client(&w, start, &goal).unwrap();
        assert!(verify_client(&w, &client, &goal).unwrap());
        let (final_state, trace) = exec(&w, start, &client, &server).unwrap();
        assert!(goal.member(final_state));
        assert!(server.invariant.member(final_state));
        assert_eq!(trace.replay(&w, start).unwrap(), final_state);
        // the executed path is one of the client's exits
        let path: Vec<usize> = trace.steps.iter().map(|s| s.response).collect();
        assert!(client_exits(&w, &client)
            .unwrap()
            .iter()
            .any(|(p, e)| *p == path && *e == final_state));
        runs += 1;
    }
}

#[test]
fn oracle_trees_are_honest_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let limits = small_limits();
    for _ in 0..60 {
        let w = gen_istruct(&mut rng, "S", &limits);
        let goal = gen_subset(&mut rng, w.source());
        let depth = w.source().len();
        for s in 0..w.source().len() {
            if let Some(tree) = oracle_tree(&w, s, &goal, depth) {
                let program = interax::ClientProgram { root: s, tree };
                assert!(verify_client(&w, &program, &goal).unwrap());
            }
        }
    }
}
