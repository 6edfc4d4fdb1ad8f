//! Symmetries of automata (permuting states, permuting letters, inverting),
//! symmetry classes, and the petal map: dualize, then take the unique
//! nontrivial minimized orbit automaton.

use std::collections::HashSet;

use itertools::Itertools;
use serde::Serialize;

use crate::analysis::{level_orbits, transitivity_level, TransitivityVerdict};
use crate::automaton::MealyAutomaton;
use crate::canonical::canonical_relabeling;
use crate::element::enumerate_group;
use crate::error::{Error, Result};
use crate::minimize::minimize;
use crate::orbitaut::{orbit_automaton, orbit_context_with_cap};

/// Transitivity cap used by [`petal_map`].
pub const PETAL_LEVEL_CAP: usize = 8;

/// Orbit automata whose group closes within this many elements count as
/// trivial pieces in [`petal_map`].
pub const PETAL_FINITE_CAP: usize = 256;

/// A state permutation, a letter permutation and an optional inversion.
///
/// Applying it sends state `q` to `state_perm[q]` and letter `x` to
/// `letter_perm[x]`; state names stay attached to positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SymmetryOp {
    pub state_perm: Vec<usize>,
    pub letter_perm: Vec<usize>,
    pub invert: bool,
}

impl SymmetryOp {
    pub fn identity(states: usize, degree: usize) -> Self {
        Self {
            state_perm: (0..states).collect(),
            letter_perm: (0..degree).collect(),
            invert: false,
        }
    }

    /// Swaps two letters, fixing everything else.
    pub fn letter_swap(states: usize, degree: usize, x: usize, y: usize) -> Self {
        let mut op = Self::identity(states, degree);
        op.letter_perm.swap(x, y);
        op
    }

    /// The op equal to applying `self` and then `then`.
    pub fn then(&self, then: &Self) -> Self {
        Self {
            state_perm: self.state_perm.iter().map(|&q| then.state_perm[q]).collect(),
            letter_perm: self.letter_perm.iter().map(|&x| then.letter_perm[x]).collect(),
            invert: self.invert ^ then.invert,
        }
    }

    fn is_valid_for(&self, a: &MealyAutomaton) -> bool {
        let perm_ok = |p: &[usize], n: usize| {
            p.len() == n && p.iter().copied().collect::<HashSet<_>>().len() == n && p.iter().all(|&i| i < n)
        };
        perm_ok(&self.state_perm, a.num_states()) && perm_ok(&self.letter_perm, a.degree())
    }
}

/// Applies `op`: `next'(σq, ρx) = σ(next(q,x))`, `out'(σq, ρx) = ρ(out(q,x))`,
/// followed by inversion when flagged.
pub fn apply_symmetry(a: &MealyAutomaton, op: &SymmetryOp) -> Result<MealyAutomaton> {
    if !op.is_valid_for(a) {
        return Err(Error::Invalid("symmetry does not match the automaton's sizes".into()));
    }
    let (n, d) = (a.num_states(), a.degree());
    let mut next = vec![vec![0; d]; n];
    let mut out = vec![vec![0; d]; n];
    for q in 0..n {
        for x in 0..d {
            let (sq, rx) = (op.state_perm[q], op.letter_perm[x]);
            next[sq][rx] = op.state_perm[a.next(q, x)];
            out[sq][rx] = op.letter_perm[a.out(q, x)];
        }
    }
    let b = MealyAutomaton::new(a.states().to_vec(), a.letters().to_vec(), next, out)?;
    if op.invert {
        b.inverse()
    } else {
        Ok(b)
    }
}

/// All symmetry ops for the sizes of `a`; inversions only when `a` is invertible.
pub fn all_ops(a: &MealyAutomaton) -> Vec<SymmetryOp> {
    let (n, d) = (a.num_states(), a.degree());
    let inversions: &[bool] = if a.is_invertible() { &[false, true] } else { &[false] };
    let mut ops = Vec::new();
    for state_perm in (0..n).permutations(n) {
        for letter_perm in (0..d).permutations(d) {
            for &invert in inversions {
                ops.push(SymmetryOp {
                    state_perm: state_perm.clone(),
                    letter_perm: letter_perm.clone(),
                    invert,
                });
            }
        }
    }
    ops
}

/// The orbit of `a` under all symmetry ops, one automaton per distinct
/// table pair, in order of first appearance.
pub fn symmetry_class(a: &MealyAutomaton) -> Vec<MealyAutomaton> {
    let mut seen = HashSet::new();
    all_ops(a)
        .iter()
        .map(|op| apply_symmetry(a, op).expect("ops match the automaton"))
        .filter(|b| seen.insert((b.next_table().to_vec(), b.out_table().to_vec())))
        .collect()
}

/// Whether `b` equals (as tables) some symmetric image of `a`.
pub fn are_symmetric(a: &MealyAutomaton, b: &MealyAutomaton) -> bool {
    a.num_states() == b.num_states()
        && a.degree() == b.degree()
        && all_ops(a)
            .iter()
            .any(|op| apply_symmetry(a, op).is_ok_and(|s| s.same_tables(b)))
}

/// Whether the minimizations of `a` and `b` are symmetric.
pub fn are_minimally_symmetric(a: &MealyAutomaton, b: &MealyAutomaton) -> bool {
    are_symmetric(&minimize(a).0, &minimize(b).0)
}

/// Dualizes `a` and returns its nontrivial orbit automaton (see
/// [`nontrivial_orbit_automaton`]) with states in canonical order, so that
/// automata differing only in how the construction numbered states map to
/// the same table.
pub fn petal_map(a: &MealyAutomaton) -> Result<MealyAutomaton> {
    Ok(canonical_relabeling(&nontrivial_orbit_automaton(&a.dual())?))
}

/// The unique nontrivial minimized orbit automaton among the orbits on
/// level `t + 1` of the group generated by `a`.
///
/// An orbit automaton is nontrivial when it has at least two states and its
/// group does not close within [`PETAL_FINITE_CAP`] elements; orbit automata
/// of small finite groups (which occur, e.g., for the orbit of `qq` under the
/// dual of `B`) are skipped like 1-state ones.
pub fn nontrivial_orbit_automaton(a: &MealyAutomaton) -> Result<MealyAutomaton> {
    let t = match transitivity_level(a, PETAL_LEVEL_CAP)? {
        TransitivityVerdict::ExactLevel(t) => t,
        TransitivityVerdict::AtLeast(n) => return Err(Error::TransitivityLevelUnknown(n)),
    };
    let part = level_orbits(a, t + 1)?;
    let base = a.degree().pow(t as u32);
    let mut found = Vec::new();
    for o in 0..part.num_orbits() {
        if part.sizes()[o] / base < 2 {
            continue;
        }
        let ctx = orbit_context_with_cap(a, &part.representative(o), PETAL_LEVEL_CAP)?;
        let m = orbit_automaton(&ctx).minimized;
        if m.num_states() >= 2 && !enumerate_group(&m, PETAL_FINITE_CAP).is_finite() {
            found.push(m);
        }
    }
    if found.len() == 1 {
        Ok(found.pop().unwrap())
    } else {
        Err(Error::AmbiguousNontrivialOrbit(found.len()))
    }
}

/// The functional graph of [`petal_map`] on the closure of a seed set.
#[derive(Clone, Debug)]
pub struct PetalDiagram {
    /// Distinct automata (by tables), seeds first.
    pub nodes: Vec<MealyAutomaton>,
    /// `edges[i]` is the node index of `petal_map(nodes[i])`.
    pub edges: Vec<usize>,
    /// Symmetry class of each node, numbered by first appearance.
    pub tags: Vec<usize>,
    /// A representative of each symmetry class.
    pub classes: Vec<MealyAutomaton>,
}

impl PetalDiagram {
    /// Distinct nodes hit by an edge.
    pub fn image(&self) -> Vec<usize> {
        let mut image: Vec<usize> = self.edges.clone();
        image.sort_unstable();
        image.dedup();
        image
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.edges[i] == i).collect()
    }

    /// Number of steps from `i` until a node on a cycle is reached.
    pub fn steps_to_cycle(&self, i: usize) -> usize {
        let mut path = vec![i];
        loop {
            let next = self.edges[*path.last().unwrap()];
            if let Some(pos) = path.iter().position(|&p| p == next) {
                return pos;
            }
            path.push(next);
        }
    }
}

pub fn petal_diagram(seeds: &[MealyAutomaton]) -> Result<PetalDiagram> {
    let mut nodes: Vec<MealyAutomaton> = Vec::new();
    let find = |nodes: &[MealyAutomaton], a: &MealyAutomaton| nodes.iter().position(|n| n.same_tables(a));
    for s in seeds {
        if find(&nodes, s).is_none() {
            nodes.push(s.clone());
        }
    }
    let mut edges = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let image = petal_map(&nodes[i])?;
        let j = match find(&nodes, &image) {
            Some(j) => j,
            None => {
                nodes.push(image);
                nodes.len() - 1
            }
        };
        edges.push(j);
        i += 1;
    }
    let mut classes: Vec<MealyAutomaton> = Vec::new();
    let mut class_members: Vec<Vec<MealyAutomaton>> = Vec::new();
    let mut tags = Vec::with_capacity(nodes.len());
    for n in &nodes {
        let tag = class_members
            .iter()
            .position(|members| members.iter().any(|m| m.same_tables(n)))
            .unwrap_or_else(|| {
                classes.push(n.clone());
                class_members.push(symmetry_class(n));
                classes.len() - 1
            });
        tags.push(tag);
    }
    Ok(PetalDiagram {
        nodes,
        edges,
        tags,
        classes,
    })
}
