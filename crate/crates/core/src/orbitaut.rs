//! Orbital trees and orbit automata.
//!
//! Let `t` be the maximum transitivity level of the group generated by `A`
//! and `O` an orbit on level `t + 1`. The orbital tree `T_O` consists of the
//! words all of whose length-`(t+1)` subwords lie in `O`; below level `t`
//! every vertex has exactly `k = |O| / d^t` children. The group acts on each
//! subtree `T_v` (`v` of length `t`), and after renaming children by their
//! rank this action is generated by a finite automaton over `k` letters, the
//! orbit automaton.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::analysis::{
    act_index, index_word, level_orbits, level_size, transitivity_level, word_index, TransitivityVerdict,
};
use crate::automaton::{default_letters, MealyAutomaton};
use crate::canonical::{canonical_form, CanonicalForm};
use crate::element::{enumerate_group, FinitenessVerdict};
use crate::error::{Error, Result};
use crate::minimize::minimize;
use crate::words::{Factor, Group, GroupWord};

/// Transitivity cap used by [`orbit_context`].
pub const DEFAULT_LEVEL_CAP: usize = 8;

/// An orbit on level `t + 1` together with the tables describing its
/// orbital tree.
#[derive(Clone, Debug)]
pub struct OrbitContext {
    base: MealyAutomaton,
    t: usize,
    /// Membership of each level-`(t+1)` vertex in the orbit.
    in_orbit: Vec<bool>,
    orbit_size: usize,
    /// Sorted children of each level-`t` vertex, by vertex index.
    children: Vec<Vec<usize>>,
    k: usize,
}

/// Answer of [`OrbitContext::query`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitalQuery {
    pub member: bool,
    pub children: Vec<usize>,
}

pub fn orbit_context(a: &MealyAutomaton, rep: &[usize]) -> Result<OrbitContext> {
    orbit_context_with_cap(a, rep, DEFAULT_LEVEL_CAP)
}

pub fn orbit_context_with_cap(a: &MealyAutomaton, rep: &[usize], cap: usize) -> Result<OrbitContext> {
    let t = match transitivity_level(a, cap)? {
        TransitivityVerdict::ExactLevel(t) => t,
        TransitivityVerdict::AtLeast(n) => return Err(Error::TransitivityLevelUnknown(n)),
    };
    if rep.len() != t + 1 {
        return Err(Error::WrongOrbitLevel {
            expected: t + 1,
            found: rep.len(),
        });
    }
    rep.iter().try_for_each(|&x| a.check_letter(x))?;
    let d = a.degree();
    let size = level_size(d, t + 1)?;
    let start = word_index(rep, d);
    let mut in_orbit = vec![false; size];
    in_orbit[start] = true;
    let mut stack = vec![start];
    let mut orbit_size = 0;
    while let Some(i) = stack.pop() {
        orbit_size += 1;
        for q in 0..a.num_states() {
            let j = act_index(a, q, i, t + 1);
            if !in_orbit[j] {
                in_orbit[j] = true;
                stack.push(j);
            }
        }
    }
    let children: Vec<Vec<usize>> = (0..size / d)
        .map(|v| (0..d).filter(|&x| in_orbit[v * d + x]).collect())
        .collect();
    let k = orbit_size / (size / d);
    if children.iter().any(|c| c.len() != k) {
        return Err(Error::Invalid(format!(
            "orbit of size {orbit_size} does not give every level-{t} vertex the same number of children"
        )));
    }
    Ok(OrbitContext {
        base: a.clone(),
        t,
        in_orbit,
        orbit_size,
        children,
        k,
    })
}

impl OrbitContext {
    pub fn base(&self) -> &MealyAutomaton {
        &self.base
    }

    /// The maximum transitivity level.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of children of every vertex at or below level `t`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn orbit_size(&self) -> usize {
        self.orbit_size
    }

    /// Members of the orbit in lexicographic order.
    pub fn orbit(&self) -> Vec<Vec<usize>> {
        let d = self.base.degree();
        (0..self.in_orbit.len())
            .filter(|&i| self.in_orbit[i])
            .map(|i| index_word(i, d, self.t + 1))
            .collect()
    }

    /// Sorted children of a level-`t` vertex given by index.
    pub fn children_at(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    fn suffix_index(&self, word: &[usize]) -> usize {
        word_index(&word[word.len() - self.t..], self.base.degree())
    }

    pub fn is_member(&self, word: &[usize]) -> bool {
        let d = self.base.degree();
        word.windows(self.t + 1)
            .all(|w| w.iter().all(|&x| x < d) && self.in_orbit[word_index(w, d)])
            && word.iter().all(|&x| x < d)
    }

    pub fn query(&self, word: &[usize]) -> OrbitalQuery {
        let member = self.is_member(word);
        let children = if !member {
            Vec::new()
        } else if word.len() < self.t {
            (0..self.base.degree()).collect()
        } else {
            self.children[self.suffix_index(word)].clone()
        };
        OrbitalQuery { member, children }
    }

    /// All orbital-tree words of length `n`, in lexicographic order.
    pub fn level_words(&self, n: usize) -> Vec<Vec<usize>> {
        let mut layer = vec![Vec::new()];
        for _ in 0..n {
            layer = layer
                .iter()
                .flat_map(|w: &Vec<usize>| {
                    self.query(w).children.into_iter().map(move |x| {
                        let mut c = w.clone();
                        c.push(x);
                        c
                    })
                })
                .collect();
        }
        layer
    }

    /// Rank-encodes a word `u` of the subtree below the level-`t` vertex `v`:
    /// each letter becomes its rank among the children of the preceding
    /// length-`t` suffix. Returns `None` when `v·u` leaves the orbital tree.
    pub fn encode(&self, v: &[usize], u: &[usize]) -> Option<Vec<usize>> {
        let mut word = v.to_vec();
        let mut ranks = Vec::with_capacity(u.len());
        for &x in u {
            let children = &self.children[self.suffix_index(&word)];
            ranks.push(children.iter().position(|&c| c == x)?);
            word.push(x);
        }
        Some(ranks)
    }

    /// Inverse of [`OrbitContext::encode`].
    pub fn decode(&self, v: &[usize], ranks: &[usize]) -> Vec<usize> {
        let mut word = v.to_vec();
        for &i in ranks {
            let x = self.children[self.suffix_index(&word)][i];
            word.push(x);
        }
        word.split_off(v.len())
    }
}

/// A raw orbit-automaton state: the base state acting as a section, the
/// level-`t` vertex it acts below, and the vertex it maps that one to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Triple {
    pub section: usize,
    pub source: usize,
    pub image: usize,
}

/// Raw and minimized orbit automata of an [`OrbitContext`].
#[derive(Clone, Debug)]
pub struct OrbitAutomatonResult {
    pub raw: MealyAutomaton,
    pub triples: Vec<Triple>,
    pub minimized: MealyAutomaton,
    /// Minimized state of each raw state.
    pub class_of: Vec<usize>,
    seeds: HashMap<(usize, usize), usize>,
}

impl OrbitAutomatonResult {
    /// Raw state seeded by base state `q` at level-`t` vertex index `v`.
    pub fn seed(&self, q: usize, v: usize) -> usize {
        self.seeds[&(q, v)]
    }

    /// Maps a word over raw states to the same element over minimized states.
    pub fn minimize_word(&self, w: &GroupWord) -> GroupWord {
        GroupWord::from_factors(
            w.factors()
                .iter()
                .map(|f| Factor {
                    state: self.class_of[f.state],
                    inverse: f.inverse,
                })
                .collect(),
        )
    }

    /// Pairs (minimized state name, names of the raw states it merges).
    pub fn legend(&self) -> Vec<(String, Vec<String>)> {
        (0..self.minimized.num_states())
            .map(|c| {
                let members = (0..self.raw.num_states())
                    .filter(|&r| self.class_of[r] == c)
                    .map(|r| self.raw.state_name(r).to_string())
                    .collect();
                (self.minimized.state_name(c).to_string(), members)
            })
            .collect()
    }
}

/// Builds the orbit automaton by breadth-first search from the seeds
/// `(π(q,v), v, λ(q,v))` for all states `q` and level-`t` vertices `v`.
pub fn orbit_automaton(ctx: &OrbitContext) -> OrbitAutomatonResult {
    let a = &ctx.base;
    let d = a.degree();
    let t = ctx.t;
    let level_t = ctx.children.len();
    let mut index: HashMap<Triple, usize> = HashMap::new();
    let mut triples = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |tr: Triple, triples: &mut Vec<Triple>, queue: &mut VecDeque<usize>| {
        *index.entry(tr).or_insert_with(|| {
            triples.push(tr);
            queue.push_back(triples.len() - 1);
            triples.len() - 1
        })
    };
    let mut seeds = HashMap::new();
    for q in 0..a.num_states() {
        for v in 0..level_t {
            let vw = index_word(v, d, t);
            let (s, w) = a.run(q, &vw).expect("letters in range");
            let tr = Triple {
                section: s,
                source: v,
                image: word_index(&w, d),
            };
            seeds.insert((q, v), intern(tr, &mut triples, &mut queue));
        }
    }
    let shift = |v: usize, x: usize| if t == 0 { 0 } else { (v * d + x) % level_t };
    let mut next = Vec::new();
    let mut out = Vec::new();
    while let Some(i) = queue.pop_front() {
        let tr = triples[i];
        let mut next_row = Vec::with_capacity(ctx.k);
        let mut out_row = Vec::with_capacity(ctx.k);
        for &x in &ctx.children[tr.source] {
            let y = a.out(tr.section, x);
            let target = Triple {
                section: a.next(tr.section, x),
                source: shift(tr.source, x),
                image: shift(tr.image, y),
            };
            next_row.push(intern(target, &mut triples, &mut queue));
            let rank = ctx.children[tr.image].iter().position(|&c| c == y);
            out_row.push(rank.expect("orbital tree is invariant under the group"));
        }
        next.push((i, next_row));
        out.push(out_row);
    }
    next.sort_by_key(|(i, _)| *i);
    let next: Vec<Vec<usize>> = next.into_iter().map(|(_, row)| row).collect();

    let vertex_name = |v: usize| a.format_letter_word(&index_word(v, d, t));
    let base_names: Vec<String> = triples
        .iter()
        .map(|tr| {
            if t == 0 {
                a.state_name(tr.section).to_string()
            } else {
                format!("{}_{}", a.state_name(tr.section), vertex_name(tr.source))
            }
        })
        .collect();
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for n in &base_names {
        *counts.entry(n).or_default() += 1;
    }
    let names: Vec<String> = triples
        .iter()
        .zip(&base_names)
        .map(|(tr, n)| {
            if counts[n.as_str()] > 1 {
                format!("{n}_{}", vertex_name(tr.image))
            } else {
                n.clone()
            }
        })
        .collect();
    let raw =
        MealyAutomaton::new(names, default_letters(ctx.k), next, out).expect("orbit automaton tables are well formed");

    // Order minimized states by their least member under (source, section, image)
    // and name each after that member.
    let (merged, map) = minimize(&raw);
    let mut least: Vec<Option<usize>> = vec![None; merged.num_states()];
    for (r, &c) in map.iter().enumerate() {
        let key = |r: usize| (triples[r].source, triples[r].section, triples[r].image);
        if least[c].is_none_or(|m| key(r) < key(m)) {
            least[c] = Some(r);
        }
    }
    let mut order: Vec<usize> = (0..merged.num_states()).collect();
    order.sort_by_key(|&c| {
        let r = least[c].unwrap();
        (triples[r].source, triples[r].section, triples[r].image)
    });
    let mut position = vec![0; order.len()];
    for (p, &c) in order.iter().enumerate() {
        position[c] = p;
    }
    let mn: Vec<Vec<usize>> = order
        .iter()
        .map(|&c| merged.next_row(c).iter().map(|&s| position[s]).collect())
        .collect();
    let mo: Vec<Vec<usize>> = order.iter().map(|&c| merged.out_row(c).to_vec()).collect();
    let mnames: Vec<String> = order
        .iter()
        .map(|&c| raw.state_name(least[c].unwrap()).to_string())
        .collect();
    let minimized =
        MealyAutomaton::new(mnames, default_letters(ctx.k), mn, mo).expect("minimized tables are well formed");
    let class_of = map.iter().map(|&c| position[c]).collect();
    OrbitAutomatonResult {
        raw,
        triples,
        minimized,
        class_of,
        seeds,
    }
}

/// Maps an element fixing the level-`t` vertex `v` to the word over raw
/// orbit-automaton states describing its action below `v`.
///
/// A factor `q` met at vertex `u` becomes the seed of `(q, u)`; an inverse
/// factor `q⁻¹` met at `u` becomes the inverse of the seed of `(q, q⁻¹(u))`.
pub fn tau(ctx: &OrbitContext, result: &OrbitAutomatonResult, v: &[usize], g: &GroupWord) -> Result<GroupWord> {
    let group = Group::new(&ctx.base);
    if v.len() != ctx.t {
        return Err(Error::WrongOrbitLevel {
            expected: ctx.t,
            found: v.len(),
        });
    }
    if group.act(g, v)? != v {
        return Err(Error::DoesNotFixVertex);
    }
    let d = ctx.base.degree();
    let mut vertex = v.to_vec();
    let mut factors = Vec::with_capacity(g.len());
    for &f in g.factors() {
        let single = GroupWord::from_factors(vec![f]);
        let image = group.act(&single, &vertex)?;
        if f.inverse {
            factors.push(Factor::neg(result.seed(f.state, word_index(&image, d))));
        } else {
            factors.push(Factor::pos(result.seed(f.state, word_index(&vertex, d))));
        }
        vertex = image;
    }
    Ok(GroupWord::from_factors(factors))
}

/// How a node of a decomposition was resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DecompositionVerdict {
    /// The node acts on a unary tree.
    Trivial,
    /// Every orbit on level `t + 1` has `d^t` elements, so the group is finite.
    FiniteCertificate,
    /// No non-transitive level was found up to the cap.
    TransitiveUpToCap,
    /// Orbit automata were built for the orbits on level `t + 1`.
    Expanded,
}

/// One orbit of an expanded node and the node holding its orbit automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionEdge {
    pub orbit_rep: Vec<usize>,
    pub orbit_size: usize,
    pub k: usize,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct DecompositionNode {
    pub automaton: MealyAutomaton,
    pub canonical: CanonicalForm,
    pub verdict: DecompositionVerdict,
    pub transitivity: Option<TransitivityVerdict>,
    pub edges: Vec<DecompositionEdge>,
    pub group: Option<FinitenessVerdict>,
}

/// Orbit automata reachable by iterating the construction, with node 0 the input.
#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub nodes: Vec<DecompositionNode>,
}

impl DecompositionReport {
    /// Orbit automata found below the input, excluding the input itself.
    pub fn orbit_automata(&self) -> impl Iterator<Item = &DecompositionNode> {
        self.nodes.iter().skip(1)
    }
}

/// Iterated orbit-automaton decomposition of the group generated by `a`.
///
/// With `element_cap > 0` each node also records the outcome of
/// enumerating its group up to that many elements.
pub fn decompose(a: &MealyAutomaton, level_cap: usize, element_cap: usize) -> Result<DecompositionReport> {
    if !a.is_invertible() {
        return Err(Error::NotInvertible);
    }
    let mut nodes: Vec<DecompositionNode> = Vec::new();
    let mut by_form: HashMap<CanonicalForm, usize> = HashMap::new();
    let mut add = |aut: MealyAutomaton, nodes: &mut Vec<DecompositionNode>| -> usize {
        let canonical = canonical_form(&aut);
        if let Some(&i) = by_form.get(&canonical) {
            return i;
        }
        by_form.insert(canonical.clone(), nodes.len());
        let group = (element_cap > 0).then(|| enumerate_group(&aut, element_cap));
        nodes.push(DecompositionNode {
            automaton: aut,
            canonical,
            verdict: DecompositionVerdict::Trivial,
            transitivity: None,
            edges: Vec::new(),
            group,
        });
        nodes.len() - 1
    };
    add(a.clone(), &mut nodes);
    let unary = MealyAutomaton::identity(1);
    let mut current = 0;
    while current < nodes.len() {
        let aut = nodes[current].automaton.clone();
        if aut.degree() == 1 {
            current += 1;
            continue;
        }
        let verdict = transitivity_level(&aut, level_cap)?;
        nodes[current].transitivity = Some(verdict);
        let t = match verdict {
            TransitivityVerdict::AtLeast(_) => {
                nodes[current].verdict = DecompositionVerdict::TransitiveUpToCap;
                current += 1;
                continue;
            }
            TransitivityVerdict::ExactLevel(t) => t,
        };
        let part = level_orbits(&aut, t + 1)?;
        let base = aut.degree().pow(t as u32);
        if part.sizes().iter().all(|&s| s == base) {
            nodes[current].verdict = DecompositionVerdict::FiniteCertificate;
            current += 1;
            continue;
        }
        let mut edges = Vec::new();
        for o in 0..part.num_orbits() {
            let rep = part.representative(o);
            let size = part.sizes()[o];
            let k = size / base;
            let target = if k == 1 {
                add(unary.clone(), &mut nodes)
            } else {
                let ctx = orbit_context_with_cap(&aut, &rep, level_cap)?;
                add(orbit_automaton(&ctx).minimized, &mut nodes)
            };
            edges.push(DecompositionEdge {
                orbit_rep: rep,
                orbit_size: size,
                k,
                target,
            });
        }
        nodes[current].verdict = DecompositionVerdict::Expanded;
        nodes[current].edges = edges;
        current += 1;
    }
    Ok(DecompositionReport { nodes })
}
