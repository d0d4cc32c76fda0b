//! Seeded random generation of spaces, structures, subsets and relations.
//! Used by the law-suite runner and the test suites; everything is a pure
//! function of the RNG stream, so a fixed seed reproduces byte-identical
//! runs.

use rand::Rng;

use crate::istruct::{Command, InteractionStructure, Response};
use crate::relation::Relation;
use crate::space::{Space, StateSpace, Subset};

#[derive(Debug, Clone, Copy)]
pub struct GenLimits {
    pub max_states: usize,
    pub max_commands: usize,
    pub max_responses: usize,
}

impl Default for GenLimits {
    fn default() -> Self {
        GenLimits {
            max_states: 5,
            max_commands: 3,
            max_responses: 3,
        }
    }
}

pub fn gen_space(rng: &mut impl Rng, name: &str, limits: &GenLimits) -> Space {
    let n = rng.gen_range(1..=limits.max_states);
    StateSpace::new(name, (0..n).map(|i| format!("s{i}")).collect()).unwrap()
}

pub fn gen_subset(rng: &mut impl Rng, space: &Space) -> Subset {
    Subset::from_indices(space, (0..space.len()).filter(|_| rng.gen_bool(0.5)))
}

pub fn gen_relation(rng: &mut impl Rng, domain: &Space, codomain: &Space) -> Relation {
    let mut pairs = Vec::new();
    for i in 0..domain.len() {
        for j in 0..codomain.len() {
            if rng.gen_bool(0.4) {
                pairs.push((i, j));
            }
        }
    }
    Relation::from_pairs(domain, codomain, pairs)
}

/// A random heterogeneous structure with bounded command/response counts.
pub fn gen_istruct_between(
    rng: &mut impl Rng,
    source: &Space,
    target: &Space,
    limits: &GenLimits,
) -> InteractionStructure {
    let entries = (0..source.len())
        .map(|_| {
            let n_cmd = rng.gen_range(0..=limits.max_commands);
            (0..n_cmd)
                .map(|a| {
                    let n_resp = rng.gen_range(0..=limits.max_responses);
                    Command {
                        name: format!("a{a}"),
                        responses: (0..n_resp)
                            .map(|d| Response {
                                name: format!("d{d}"),
                                next: rng.gen_range(0..target.len()),
                            })
                            .collect(),
                    }
                })
                .collect()
        })
        .collect();
    InteractionStructure::from_parts(source, target, entries).unwrap()
}

/// A random homogeneous structure on a fresh space.
pub fn gen_istruct(rng: &mut impl Rng, name: &str, limits: &GenLimits) -> InteractionStructure {
    let space = gen_space(rng, name, limits);
    gen_istruct_between(rng, &space, &space, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generation_is_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        let limits = GenLimits::default();
        let wa = gen_istruct(&mut a, "g", &limits);
        let wb = gen_istruct(&mut b, "g", &limits);
        assert_eq!(wa, wb);
    }

    #[test]
    fn generated_structures_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let limits = GenLimits::default();
        for _ in 0..50 {
            let w = gen_istruct(&mut rng, "g", &limits);
            assert!(w.validate().is_empty());
            assert!(w.source().len() <= limits.max_states);
        }
    }
}
