//! Fixtures, random generators and property sweeps shared by the
//! integration, property and acceptance test targets.
#![allow(dead_code)]

use mealy_orbits::analysis::{index_word, spherical_failure_level};
use mealy_orbits::catalog;
use mealy_orbits::orbitaut::{decompose, orbit_automaton, orbit_context, tau, OrbitAutomatonResult, OrbitContext};
use mealy_orbits::{enumerate_group, Factor, Group, GroupWord, MealyAutomaton};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}
#[allow(unused_imports)]
pub(crate) use ensure;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random automaton with every out-row a permutation.
pub fn random_invertible(rng: &mut StdRng, states: usize, degree: usize) -> MealyAutomaton {
    let names = (0..states).map(|i| format!("s{i}")).collect();
    let next = (0..states)
        .map(|_| (0..degree).map(|_| rng.gen_range(0..states)).collect())
        .collect();
    let out = (0..states)
        .map(|_| {
            let mut row: Vec<usize> = (0..degree).collect();
            row.shuffle(rng);
            row
        })
        .collect();
    MealyAutomaton::with_degree(names, degree, next, out).unwrap()
}

/// Random automaton with arbitrary out-rows.
pub fn random_automaton(rng: &mut StdRng, states: usize, degree: usize) -> MealyAutomaton {
    let names = (0..states).map(|i| format!("s{i}")).collect();
    let table = |rng: &mut StdRng, m: usize| -> Vec<Vec<usize>> {
        (0..states)
            .map(|_| (0..degree).map(|_| rng.gen_range(0..m)).collect())
            .collect()
    };
    let next = table(rng, states);
    let out = table(rng, degree);
    MealyAutomaton::with_degree(names, degree, next, out).unwrap()
}

/// Every invertible automaton with 2 states over 2 letters (64 of them).
pub fn all_invertible_2x2() -> Vec<MealyAutomaton> {
    let mut all = Vec::new();
    for code in 0..64u32 {
        let bit = |i: u32| ((code >> i) & 1) as usize;
        let next = vec![vec![bit(0), bit(1)], vec![bit(2), bit(3)]];
        let row = |b: usize| if b == 1 { vec![1, 0] } else { vec![0, 1] };
        let out = vec![row(bit(4)), row(bit(5))];
        all.push(MealyAutomaton::with_degree(vec!["x".into(), "y".into()], 2, next, out).unwrap());
    }
    all
}

pub fn random_word(rng: &mut StdRng, states: usize, max_len: usize, signed: bool) -> GroupWord {
    let len = rng.gen_range(0..=max_len);
    GroupWord::from_factors(
        (0..len)
            .map(|_| Factor {
                state: rng.gen_range(0..states),
                inverse: signed && rng.gen_bool(0.5),
            })
            .collect(),
    )
}

pub fn random_letters(rng: &mut StdRng, degree: usize, max_len: usize) -> Vec<usize> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..degree)).collect()
}

/// The minimized orbit automaton of the dual of B for the orbit of `qw`.
pub fn automaton_a() -> (MealyAutomaton, OrbitContext, OrbitAutomatonResult) {
    let d = catalog::automaton_b().dual();
    let ctx = orbit_context(&d, &d.parse_letter_word("qw").unwrap()).unwrap();
    let r = orbit_automaton(&ctx);
    (d, ctx, r)
}

/// Fixture automata used by the sweeps.
pub fn fixtures() -> Vec<(&'static str, MealyAutomaton)> {
    vec![
        ("B3", catalog::bellaterra()),
        ("B", catalog::automaton_b()),
        ("C", catalog::automaton_c()),
    ]
}

/// `section(g, v)` equals the dual action of `v` on the letters of `g`.
pub fn section_dual_identity(cases: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    for (name, a) in fixtures() {
        let group = Group::new(&a);
        let dual = Group::new(&a.dual());
        for _ in 0..cases {
            let g = random_word(&mut rng, a.num_states(), 6, false);
            let v = random_letters(&mut rng, a.degree(), 6);
            let section = group.section(&g, &v).map_err(|e| e.to_string())?;
            let states: Vec<usize> = g.factors().iter().map(|f| f.state).collect();
            let image = dual
                .act(&GroupWord::from_states(&v), &states)
                .map_err(|e| e.to_string())?;
            ensure!(
                section == GroupWord::from_states(&image),
                "{name}: section of {states:?} at {v:?} disagrees with dual action"
            );
        }
    }
    Ok(())
}

/// `act(gh, v) = act(h, act(g, v))` and the section suffix property.
pub fn composition_convention(cases: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    for (name, a) in fixtures() {
        let group = Group::new(&a);
        for _ in 0..cases {
            let g = random_word(&mut rng, a.num_states(), 5, true);
            let h = random_word(&mut rng, a.num_states(), 5, true);
            let v = random_letters(&mut rng, a.degree(), 7);
            let lhs = group.act(&g.mul(&h), &v).unwrap();
            let rhs = group.act(&h, &group.act(&g, &v).unwrap()).unwrap();
            ensure!(lhs == rhs, "{name}: composition convention fails");

            let w = random_letters(&mut rng, a.degree(), 5);
            let mut vw = v.clone();
            vw.extend(&w);
            let full = group.act(&g, &vw).unwrap();
            let sec = group.section(&g, &v).unwrap();
            ensure!(
                group.act(&sec, &w).unwrap() == full[v.len()..],
                "{name}: section does not act as the suffix"
            );
        }
    }
    Ok(())
}

/// For every invertible 2-state 2-letter automaton, the group is finite
/// exactly when the semigroup of the dual is (pairs both over the cap are skipped).
pub fn dual_finiteness_sweep(cap: usize) -> Check {
    for a in all_invertible_2x2() {
        let here = enumerate_group(&a, cap);
        let there = enumerate_group(&a.dual(), cap);
        if !here.is_finite() && !there.is_finite() {
            continue;
        }
        ensure!(
            here.is_finite() == there.is_finite(),
            "finiteness differs between {a:?} ({here:?}) and its dual ({there:?})",
            here = here.count(),
            there = there.count()
        );
    }
    Ok(())
}

/// Transitivity of a single element on level `n`, by following the cycle of `0^n`.
pub fn element_transitive_on_level(group: &Group, g: &GroupWord, n: usize) -> bool {
    let start = vec![0; n];
    let mut v = group.act(g, &start).unwrap();
    let mut len = 1usize;
    while v != start {
        v = group.act(g, &v).unwrap();
        len += 1;
    }
    len == 1 << n
}

/// The spherical-transitivity decision matches level-by-level cycle lengths
/// up to level `max_level`.
pub fn spherical_vs_bfs(words: usize, max_level: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut automata: Vec<MealyAutomaton> = vec![
        catalog::automaton_b(),
        catalog::automaton_c(),
        catalog::bellaterra(),
        mealy_orbits::parse_wreath("a=(e,a)(1,2); e=(e,e)").unwrap(),
        automaton_a().2.minimized,
    ];
    for _ in 0..5 {
        let n = rng.gen_range(2..=3);
        automata.push(random_invertible(&mut rng, n, 2));
    }
    for i in 0..words {
        let a = &automata[i % automata.len()];
        let group = Group::new(a);
        let g = random_word(&mut rng, a.num_states(), 4, true);
        let fail = spherical_failure_level(&group, &g).map_err(|e| e.to_string())?;
        for n in 1..=max_level {
            let expected = fail.is_none_or(|f| n < f);
            ensure!(
                element_transitive_on_level(&group, &g, n) == expected,
                "{a:?}, word {g:?}: level {n} disagrees with failure level {fail:?}"
            );
        }
    }
    Ok(())
}

/// Orbital trees are invariant under the group.
pub fn orbital_tree_invariance(cases: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let contexts = [
        (catalog::bellaterra().dual(), "ab"),
        (catalog::automaton_b().dual(), "qw"),
        (catalog::automaton_b().dual(), "qq"),
        (catalog::automaton_c().dual(), "ac"),
    ];
    for (d, rep) in &contexts {
        let ctx = orbit_context(d, &d.parse_letter_word(rep).unwrap()).unwrap();
        let group = Group::new(d);
        for _ in 0..cases {
            let len = rng.gen_range(0..=8);
            let mut u = Vec::new();
            for _ in 0..len {
                let children = ctx.children_of(&u);
                u.push(*children.choose(&mut rng).unwrap());
            }
            ensure!(ctx.is_member(&u), "generated word left the orbital tree");
            let g = random_word(&mut rng, d.num_states(), 6, true);
            let image = group.act(&g, &u).unwrap();
            ensure!(ctx.is_member(&image), "orbit {rep}: image of {u:?} leaves the tree");
        }
    }
    Ok(())
}

/// Raw orbit-automaton seeds act on rank-encoded words exactly as the
/// corresponding sections act on the orbital subtree.
pub fn orbit_automaton_soundness(max_len: usize) -> Check {
    let contexts = [
        (catalog::bellaterra().dual(), "ab"),
        (catalog::automaton_b().dual(), "qw"),
        (catalog::automaton_b().dual(), "qq"),
        (catalog::automaton_c().dual(), "ac"),
    ];
    for (d, rep) in &contexts {
        let ctx = orbit_context(d, &d.parse_letter_word(rep).unwrap()).unwrap();
        let r = orbit_automaton(&ctx);
        let base = Group::new(d);
        let orbit = Group::new(&r.raw);
        let level_t = d.degree().pow(ctx.t() as u32);
        let k = ctx.k();
        for q in 0..d.num_states() {
            for vi in 0..level_t {
                let v = index_word(vi, d.degree(), ctx.t());
                let g = GroupWord::from_states(&[q]);
                let w = base.act(&g, &v).unwrap();
                let seed = GroupWord::from_states(&[r.seed(q, vi)]);
                for len in 0..=max_len {
                    for code in 0..k.pow(len as u32) {
                        let ranks = index_word(code, k, len);
                        let u = ctx.decode(&v, &ranks);
                        let mut vu = v.clone();
                        vu.extend(&u);
                        let image = base.act(&g, &vu).unwrap();
                        ensure!(image[..v.len()] == w[..], "prefix image changed");
                        let expected = ctx.encode(&w, &image[v.len()..]).ok_or("image left the tree")?;
                        ensure!(
                            orbit.act(&seed, &ranks).unwrap() == expected,
                            "orbit {rep}: seed ({q},{v:?}) disagrees on {ranks:?}"
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

/// `tau(gh) = tau(g) tau(h)` as actions for random words fixing a vertex,
/// and `tau(g)` acts as the rank-encoded section of `g`.
pub fn tau_homomorphism(cases: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let contexts = [
        (catalog::bellaterra().dual(), "ab"),
        (catalog::automaton_b().dual(), "qw"),
        (catalog::automaton_c().dual(), "ac"),
    ];
    for (d, rep) in &contexts {
        let ctx = orbit_context(d, &d.parse_letter_word(rep).unwrap()).unwrap();
        let r = orbit_automaton(&ctx);
        let base = Group::new(d);
        let orbit = Group::new(&r.raw);
        let mut found = 0;
        let mut attempts = 0;
        while found < cases && attempts < 200 * cases {
            attempts += 1;
            let v: Vec<usize> = (0..ctx.t()).map(|_| rng.gen_range(0..d.degree())).collect();
            let g = random_word(&mut rng, d.num_states(), 4, true);
            let h = random_word(&mut rng, d.num_states(), 4, true);
            if base.act(&g, &v).unwrap() != v || base.act(&h, &v).unwrap() != v {
                continue;
            }
            found += 1;
            let tg = tau(&ctx, &r, &v, &g).map_err(|e| e.to_string())?;
            let th = tau(&ctx, &r, &v, &h).map_err(|e| e.to_string())?;
            let tgh = tau(&ctx, &r, &v, &g.mul(&h)).map_err(|e| e.to_string())?;
            ensure!(
                orbit.are_equal(&tgh, &tg.mul(&th)).unwrap(),
                "orbit {rep}: tau is not multiplicative on {g:?}, {h:?}"
            );
            for _ in 0..4 {
                let ranks = random_letters(&mut rng, ctx.k(), 6);
                let u = ctx.decode(&v, &ranks);
                let mut vu = v.clone();
                vu.extend(&u);
                let image = base.act(&g, &vu).unwrap();
                let expected = ctx.encode(&v, &image[v.len()..]).ok_or("image left the tree")?;
                ensure!(
                    orbit.act(&tg, &ranks).unwrap() == expected,
                    "orbit {rep}: tau({g:?}) does not act as the section"
                );
            }
        }
        ensure!(found == cases, "orbit {rep}: only {found} stabilizing pairs found");
    }
    Ok(())
}

/// Outcome of running the decomposition over a family of automata.
#[derive(Debug, Default)]
pub struct ConjectureReport {
    /// Automata whose group was found finite and decomposed.
    pub checked: usize,
    /// Finite-group automata with an orbit automaton whose group does not
    /// close within the cap, paired with that orbit automaton.
    pub counterexamples: Vec<(MealyAutomaton, MealyAutomaton)>,
}

/// Decomposes every automaton of the family whose group is finite and
/// collects orbit automata whose groups do not close within `cap` elements.
pub fn conjecture_harness(family: &[MealyAutomaton], cap: usize) -> Result<ConjectureReport, String> {
    let mut report = ConjectureReport::default();
    for a in family {
        if !enumerate_group(a, 2000).is_finite() {
            continue;
        }
        report.checked += 1;
        let decomposition = decompose(a, 6, 0).map_err(|e| e.to_string())?;
        for node in decomposition.orbit_automata() {
            if !enumerate_group(&node.automaton, cap).is_finite() {
                report.counterexamples.push((a.clone(), node.automaton.clone()));
            }
        }
    }
    Ok(report)
}

/// All invertible 2-state 2-letter automata plus `sample` random invertible
/// 3-state 2-letter automata.
pub fn conjecture_family(sample: usize, seed: u64) -> Vec<MealyAutomaton> {
    let mut rng = rng(seed);
    let mut family = all_invertible_2x2();
    family.extend((0..sample).map(|_| random_invertible(&mut rng, 3, 2)));
    family
}
