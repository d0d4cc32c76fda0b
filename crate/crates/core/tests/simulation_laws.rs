//! Laws for the simulation and topology layers: checker agreement with the
//! direct quantifier blocks, subcommutativity, closure under unions,
//! saturation, Kleisli monotonicity, invariant transport, and the
//! simulation/continuity correspondence.

mod common;

use common::{oracle_general_sim, oracle_linear_sim};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use interax::fixpoint::cover;
use interax::gen::{gen_istruct_between, gen_relation, gen_space, gen_subset, GenLimits};
use interax::istruct::{Agent, InteractionStructure};
use interax::relation::Relation;
use interax::simulation::{
    check_sim, greatest_sim, kleisli_compose, saturate, sim_compare, SimComparison, SimKind,
};
use interax::space::{Space, Subset};
use interax::topology::{continuity_conditions, saturation_preorder, check_localized};

fn small_limits() -> GenLimits {
    GenLimits {
        max_states: 4,
        max_commands: 3,
        max_responses: 3,
    }
}

fn gen_pair(rng: &mut ChaCha8Rng) -> (InteractionStructure, InteractionStructure, Relation) {
    let limits = small_limits();
    let high_space = gen_space(rng, "H", &limits);
    let low_space = gen_space(rng, "L", &limits);
    let high = gen_istruct_between(rng, &high_space, &high_space, &limits);
    let low = gen_istruct_between(rng, &low_space, &low_space, &limits);
    let relation = gen_relation(rng, &high_space, &low_space);
    (high, low, relation)
}

/// Largest simulation of the given kind inside `bound`, by pruning; used
/// to manufacture certified simulations with varied shapes.
fn certified_inside(
    high: &InteractionStructure,
    low: &InteractionStructure,
    bound: &Relation,
    kind: SimKind,
) -> Relation {
    // prune with the direct per-pair conditions until stable
    let mut current = bound.clone();
    loop {
        let mut next = current.clone();
        for (s_h, s_l) in current.pairs() {
            let ok = match kind {
                SimKind::Linear => high.commands(s_h).iter().all(|c_h| {
                    low.commands(s_l).iter().any(|c_l| {
                        c_l.responses.iter().all(|r_l| {
                            c_h.responses
                                .iter()
                                .any(|r_h| current.contains(r_h.next, r_l.next))
                        })
                    })
                }),
                SimKind::General => (0..high.commands(s_h).len()).all(|a_h| {
                    let mut targets = Subset::empty(low.source());
                    for r_h in &high.command(s_h, a_h).responses {
                        targets = targets.union(&current.row(r_h.next)).unwrap();
                    }
                    cover(low, &targets, None).unwrap().subset.member(s_l)
                }),
                _ => unreachable!(),
            };
            if !ok {
                next = next.without_pair(s_h, s_l);
            }
        }
        if next == current {
            return current;
        }
        current = next;
    }
}

#[test]
fn linear_checker_agrees_with_quantifier_block() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..100 {
        let (high, low, relation) = gen_pair(&mut rng);
        let checked = check_sim(&high, &low, &relation, SimKind::Linear)
            .unwrap()
            .is_ok();
        assert_eq!(checked, oracle_linear_sim(&high, &low, &relation));
    }
}

#[test]
fn general_checker_agrees_with_tree_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let (high, low, relation) = gen_pair(&mut rng);
        let checked = check_sim(&high, &low, &relation, SimKind::General)
            .unwrap()
            .is_ok();
        assert_eq!(checked, oracle_general_sim(&high, &low, &relation));
    }
}

#[test]
fn subcommutativity_characterizes_linear_simulations() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..60 {
        let (high, low, relation) = gen_pair(&mut rng);
        let certified = check_sim(&high, &low, &relation, SimKind::Linear)
            .unwrap()
            .is_ok();
        let image = relation.converse();
        let subcommutes = Subset::enumerate_all(high.source()).iter().all(|u| {
            let lhs = image
                .angelic_update(&high.one_step(u, Agent::Angel).unwrap())
                .unwrap();
            let rhs = low
                .one_step(&image.angelic_update(u).unwrap(), Agent::Angel)
                .unwrap();
            lhs.is_subset_of(&rhs).unwrap()
        });
        assert_eq!(certified, subcommutes);
    }
}

#[test]
fn linear_simulations_are_closed_under_union() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..60 {
        let (high, low, bound1) = gen_pair(&mut rng);
        let bound2 = gen_relation(&mut rng, high.source(), low.source());
        let r1 = certified_inside(&high, &low, &bound1, SimKind::Linear);
        let r2 = certified_inside(&high, &low, &bound2, SimKind::Linear);
        assert!(check_sim(&high, &low, &r1, SimKind::Linear).unwrap().is_ok());
        assert!(check_sim(&high, &low, &r2, SimKind::Linear).unwrap().is_ok());
        let union = r1.union(&r2).unwrap();
        assert!(check_sim(&high, &low, &union, SimKind::Linear)
            .unwrap()
            .is_ok());
    }
}

#[test]
fn greatest_simulations_dominate_certified_ones() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..40 {
        let (high, low, bound) = gen_pair(&mut rng);
        for kind in [SimKind::Linear, SimKind::General] {
            let greatest = greatest_sim(&high, &low, kind).unwrap();
            assert!(check_sim(&high, &low, &greatest, kind).unwrap().is_ok());
            let sample = certified_inside(&high, &low, &bound, kind);
            assert!(sample.is_subset_of(&greatest).unwrap());
        }
    }
}

#[test]
fn saturation_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let limits = small_limits();
    for _ in 0..60 {
        let high_space = gen_space(&mut rng, "H", &limits);
        let low_space = gen_space(&mut rng, "L", &limits);
        let high = gen_istruct_between(&mut rng, &high_space, &high_space, &limits);
        let low = gen_istruct_between(&mut rng, &low_space, &low_space, &limits);
        let bound = gen_relation(&mut rng, &high_space, &low_space);
        let r = certified_inside(&high, &low, &bound, SimKind::General);
        let sat = saturate(&r, &low).unwrap();
        assert!(r.is_subset_of(&sat).unwrap());
        assert_eq!(saturate(&sat, &low).unwrap(), sat);
        assert_eq!(sim_compare(&r, &sat, &low).unwrap(), SimComparison::Equivalent);
        // saturation of a general simulation is again one
        assert!(check_sim(&high, &low, &sat, SimKind::General).unwrap().is_ok());
        // the empty simulation is below everything
        let empty = Relation::empty(&high_space, &low_space);
        assert!(matches!(
            sim_compare(&empty, &r, &low).unwrap(),
            SimComparison::Leq | SimComparison::Equivalent
        ));
    }
}

#[test]
fn kleisli_composition_certifies_and_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let limits = small_limits();
    for _ in 0..60 {
        let sh = gen_space(&mut rng, "H", &limits);
        let sm = gen_space(&mut rng, "M", &limits);
        let sl = gen_space(&mut rng, "L", &limits);
        let wh = gen_istruct_between(&mut rng, &sh, &sh, &limits);
        let wm = gen_istruct_between(&mut rng, &sm, &sm, &limits);
        let wl = gen_istruct_between(&mut rng, &sl, &sl, &limits);
        let r2 = certified_inside(
            &wh,
            &wm,
            &gen_relation(&mut rng, &sh, &sm),
            SimKind::General,
        );
        let q2 = certified_inside(
            &wm,
            &wl,
            &gen_relation(&mut rng, &sm, &sl),
            SimKind::General,
        );
        // sub-simulations, still certified
        let r1 = certified_inside(&wh, &wm, &thin(&mut rng, &r2), SimKind::General);
        let q1 = certified_inside(&wm, &wl, &thin(&mut rng, &q2), SimKind::General);

        let c2 = kleisli_compose(&r2, &q2).unwrap();
        assert!(check_sim(&wh, &wl, &c2, SimKind::General).unwrap().is_ok());
        let c1 = kleisli_compose(&r1, &q1).unwrap();
        let sat1 = saturate(&c1, &wl).unwrap();
        let sat2 = saturate(&c2, &wl).unwrap();
        assert!(sat1.is_subset_of(&sat2).unwrap());
    }
}

fn thin(rng: &mut ChaCha8Rng, r: &Relation) -> Relation {
    let keep: Vec<(usize, usize)> = r.pairs().filter(|_| rand::Rng::gen_bool(rng, 0.6)).collect();
    Relation::from_pairs(r.domain(), r.codomain(), keep)
}

#[test]
fn identity_is_a_unit_for_kleisli_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..40 {
        let (high, low, bound) = gen_pair(&mut rng);
        let r = certified_inside(&high, &low, &bound, SimKind::General);
        let left = kleisli_compose(&Relation::identity(high.source()), &r).unwrap();
        let right = kleisli_compose(&r, &Relation::identity(low.source())).unwrap();
        assert_eq!(left, r);
        assert_eq!(right, r);
    }
}

#[test]
fn linear_simulations_transport_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    for _ in 0..60 {
        let (high, low, bound) = gen_pair(&mut rng);
        let r = certified_inside(&high, &low, &bound, SimKind::Linear);
        for u in Subset::enumerate_all(high.source()) {
            let invariant = u
                .is_subset_of(&high.one_step(&u, Agent::Angel).unwrap())
                .unwrap();
            if !invariant {
                continue;
            }
            let image = r.image(&u).unwrap();
            assert!(image
                .is_subset_of(&low.one_step(&image, Agent::Angel).unwrap())
                .unwrap());
        }
    }
}

#[test]
fn simulation_iff_continuity() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..60 {
        let (high, low, relation) = gen_pair(&mut rng);
        let simulated = check_sim(&high, &low, &relation, SimKind::General)
            .unwrap()
            .is_ok();
        let report = continuity_conditions(&relation.converse(), &low, &high, false).unwrap();
        assert!(report.exhaustive);
        assert_eq!(simulated, report.cover_condition && report.interior_condition);
        if simulated {
            assert!(report.cover_condition && report.interior_condition);
        }
    }
}

#[test]
fn certified_simulations_transport_covers() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for _ in 0..40 {
        let (high, low, bound) = gen_pair(&mut rng);
        let r = certified_inside(&high, &low, &bound, SimKind::General);
        for u in Subset::enumerate_all(high.source()) {
            let covered_high = cover(&high, &u, None).unwrap().subset;
            let lhs = r.image(&covered_high).unwrap();
            let rhs = cover(&low, &r.image(&u).unwrap(), None).unwrap().subset;
            assert!(lhs.is_subset_of(&rhs).unwrap());
        }
    }
}

#[test]
fn stage_indexed_condition_matches_single_step_condition() {
    // quantifying the high side over short command trees instead of single
    // commands does not change the verdict
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..40 {
        let (high, low, relation) = gen_pair(&mut rng);
        let plain = check_sim(&high, &low, &relation, SimKind::General)
            .unwrap()
            .is_ok();
        let staged = stage_indexed_general(&high, &low, &relation, 2);
        assert_eq!(plain, staged);
    }
}

/// The generalized condition over high-level trees of depth ≤ `depth`.
fn stage_indexed_general(
    high: &InteractionStructure,
    low: &InteractionStructure,
    relation: &Relation,
    depth: usize,
) -> bool {
    fn exits_of_trees(
        high: &InteractionStructure,
        state: usize,
        depth: usize,
        relation: &Relation,
        out: &mut Vec<Subset>,
    ) {
        // Exit tree: exits = {state}
        out.push(relation.row(state));
        if depth == 0 {
            return;
        }
        for (a, c) in high.commands(state).iter().enumerate() {
            let _ = a;
            // all per-branch alternatives, combined by union of exit rows
            let mut branch_sets: Vec<Vec<Subset>> = Vec::new();
            for r in &c.responses {
                let mut alts = Vec::new();
                exits_of_trees(high, r.next, depth - 1, relation, &mut alts);
                branch_sets.push(alts);
            }
            // cartesian choice over branches
            let mut combos: Vec<Subset> = vec![Subset::empty(relation.codomain())];
            for alts in branch_sets {
                let mut next = Vec::new();
                for base in &combos {
                    for alt in &alts {
                        next.push(base.union(alt).unwrap());
                    }
                }
                combos = next;
            }
            out.extend(combos);
        }
    }

    for (s_h, s_l) in relation.pairs() {
        let mut exit_unions = Vec::new();
        exits_of_trees(high, s_h, depth, relation, &mut exit_unions);
        for (k, targets) in exit_unions.iter().enumerate() {
            if k == 0 {
                // the Exit tree imposes s_l ◁ R(s_h), true by reflexivity
                continue;
            }
            if !cover(low, targets, None).unwrap().subset.member(s_l) {
                return false;
            }
        }
    }
    true
}

#[test]
fn saturation_preorders_are_localized_on_deterministic_chains() {
    // structures whose every command has exactly one response behave like
    // transition systems; their saturation order is always localized
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let limits = GenLimits {
        max_states: 4,
        max_commands: 2,
        max_responses: 1,
    };
    for _ in 0..40 {
        let space = gen_space(&mut rng, "S", &limits);
        let w = gen_istruct_between(&mut rng, &space, &space, &limits);
        if (0..space.len()).any(|s| w.commands(s).iter().any(|c| c.responses.is_empty())) {
            continue;
        }
        let ss = saturation_preorder(&w).unwrap();
        assert!(check_localized(&ss, false).unwrap().is_ok());
    }
}

#[test]
fn projections_from_the_angelic_product_are_linear_simulations() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let limits = small_limits();
    for _ in 0..40 {
        let s1 = gen_space(&mut rng, "A", &limits);
        let s2 = gen_space(&mut rng, "B", &limits);
        let w1 = gen_istruct_between(&mut rng, &s1, &s1, &limits);
        let w2 = gen_istruct_between(&mut rng, &s2, &s2, &limits);
        let product = InteractionStructure::angelic_product(&w1, &w2).unwrap();
        let pi1 = projection(&s1, &s2, product.source(), true);
        let pi2 = projection(&s1, &s2, product.source(), false);
        assert!(check_sim(&w1, &product, &pi1, SimKind::Linear)
            .unwrap()
            .is_ok());
        assert!(check_sim(&w2, &product, &pi2, SimKind::Linear)
            .unwrap()
            .is_ok());
    }
}

fn projection(s1: &Space, s2: &Space, product: &Space, left: bool) -> Relation {
    let mut pairs = Vec::new();
    for i in 0..s1.len() {
        for j in 0..s2.len() {
            let p = i * s2.len() + j;
            pairs.push((if left { i } else { j }, p));
        }
    }
    Relation::from_pairs(if left { s1 } else { s2 }, product, pairs)
}

#[test]
fn tensor_transformer_dominates_componentwise_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let limits = GenLimits {
        max_states: 3,
        max_commands: 2,
        max_responses: 2,
    };
    for _ in 0..30 {
        let s1 = gen_space(&mut rng, "A", &limits);
        let s2 = gen_space(&mut rng, "B", &limits);
        let w1 = gen_istruct_between(&mut rng, &s1, &s1, &limits);
        let w2 = gen_istruct_between(&mut rng, &s2, &s2, &limits);
        let tensor = InteractionStructure::tensor(&w1, &w2).unwrap();
        for u in Subset::enumerate_all(&s1) {
            for v in Subset::enumerate_all(&s2) {
                let mut product_goal = Subset::empty(tensor.source());
                for i in u.members() {
                    for j in v.members() {
                        product_goal = product_goal.with_member(i * s2.len() + j);
                    }
                }
                let both = tensor.one_step(&product_goal, Agent::Angel).unwrap();
                let a1 = w1.one_step(&u, Agent::Angel).unwrap();
                let a2 = w2.one_step(&v, Agent::Angel).unwrap();
                for i in a1.members() {
                    for j in a2.members() {
                        assert!(both.member(i * s2.len() + j));
                    }
                }
            }
        }
    }
}

#[test]
fn generated_subsets_exercise_both_verdicts() {
    // sanity on the generators themselves: over many draws both verdicts
    // of the linear checker occur
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let mut pass = 0;
    let mut fail = 0;
    for _ in 0..200 {
        let (high, low, relation) = gen_pair(&mut rng);
        if check_sim(&high, &low, &relation, SimKind::Linear)
            .unwrap()
            .is_ok()
        {
            pass += 1;
        } else {
            fail += 1;
        }
        let _ = gen_subset(&mut rng, high.source());
    }
    assert!(pass > 5, "only {pass} certified draws");
    assert!(fail > 5, "only {fail} refuted draws");
}
