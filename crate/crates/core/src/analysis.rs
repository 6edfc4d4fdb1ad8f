//! Orbits of the generated group on tree levels, labeled orbit trees,
//! transitivity levels, spherical transitivity for binary elements, and
//! certification of nontrivial elements through the dual action.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::automaton::MealyAutomaton;
use crate::error::{Error, Result};
use crate::orbitaut::{orbit_context, OrbitContext};
use crate::words::{Group, GroupWord};

/// Largest level size (number of vertices) materialized by the level BFS.
pub const MAX_LEVEL_SIZE: usize = 1 << 24;

/// Index of a word in the lexicographic enumeration of `X^n`.
pub fn word_index(word: &[usize], degree: usize) -> usize {
    word.iter().fold(0, |acc, &x| acc * degree + x)
}

/// Inverse of [`word_index`] for words of length `n`.
pub fn index_word(mut index: usize, degree: usize, n: usize) -> Vec<usize> {
    let mut word = vec![0; n];
    for slot in word.iter_mut().rev() {
        *slot = index % degree;
        index /= degree;
    }
    word
}

/// Number of vertices on level `n`, or `LevelTooLarge`.
pub fn level_size(degree: usize, n: usize) -> Result<usize> {
    let size = (degree as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > MAX_LEVEL_SIZE as u128 {
        return Err(Error::LevelTooLarge {
            level: n,
            size,
            limit: MAX_LEVEL_SIZE,
        });
    }
    Ok(size as usize)
}

/// Image of the level-`n` vertex `index` under state `q`.
pub(crate) fn act_index(a: &MealyAutomaton, q: usize, index: usize, n: usize) -> usize {
    let d = a.degree();
    let mut place = d.pow(n as u32);
    let mut state = q;
    let mut image = 0;
    for _ in 0..n {
        place /= d;
        let x = (index / place) % d;
        image = image * d + a.out(state, x);
        state = a.next(state, x);
    }
    image
}

/// Partition of one tree level into orbits of the generated group.
///
/// Orbits are numbered by increasing representative, the lexicographically
/// least member.
#[derive(Clone, Debug)]
pub struct LevelPartition {
    degree: usize,
    level: usize,
    orbit_of: Vec<u32>,
    representatives: Vec<usize>,
    sizes: Vec<usize>,
}

impl LevelPartition {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_orbits(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn representative(&self, orbit: usize) -> Vec<usize> {
        index_word(self.representatives[orbit], self.degree, self.level)
    }

    pub fn orbit_of(&self, word: &[usize]) -> usize {
        self.orbit_of[word_index(word, self.degree)] as usize
    }

    pub fn orbit_of_index(&self, index: usize) -> usize {
        self.orbit_of[index] as usize
    }

    /// Members of an orbit in lexicographic order.
    pub fn members(&self, orbit: usize) -> Vec<Vec<usize>> {
        self.member_indices(orbit)
            .into_iter()
            .map(|i| index_word(i, self.degree, self.level))
            .collect()
    }

    pub fn member_indices(&self, orbit: usize) -> Vec<usize> {
        (self.representatives[orbit]..self.orbit_of.len())
            .filter(|&i| self.orbit_of[i] as usize == orbit)
            .collect()
    }

    pub fn orbits(&self) -> Vec<Vec<Vec<usize>>> {
        (0..self.num_orbits()).map(|o| self.members(o)).collect()
    }
}

fn require_invertible(a: &MealyAutomaton) -> Result<()> {
    if a.is_invertible() {
        Ok(())
    } else {
        Err(Error::NotInvertible)
    }
}

/// Orbits of the group generated by `a` on `X^n`.
///
/// The generators act by permutations on a finite level, so closing under
/// the generators alone already yields full group orbits.
pub fn level_orbits(a: &MealyAutomaton, n: usize) -> Result<LevelPartition> {
    require_invertible(a)?;
    let size = level_size(a.degree(), n)?;
    const UNSEEN: u32 = u32::MAX;
    let mut orbit_of = vec![UNSEEN; size];
    let mut representatives = Vec::new();
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for start in 0..size {
        if orbit_of[start] != UNSEEN {
            continue;
        }
        let id = sizes.len() as u32;
        orbit_of[start] = id;
        stack.push(start);
        let mut count = 0;
        while let Some(i) = stack.pop() {
            count += 1;
            for q in 0..a.num_states() {
                let j = act_index(a, q, i, n);
                if orbit_of[j] == UNSEEN {
                    orbit_of[j] = id;
                    stack.push(j);
                }
            }
        }
        representatives.push(start);
        sizes.push(count);
    }
    Ok(LevelPartition {
        degree: a.degree(),
        level: n,
        orbit_of,
        representatives,
        sizes,
    })
}

/// Size of the orbit of the level-`n` vertex `index`, visiting at most the
/// whole level.
fn orbit_size_of(a: &MealyAutomaton, index: usize, n: usize, size: usize) -> usize {
    let mut seen = vec![false; size];
    seen[index] = true;
    let mut stack = vec![index];
    let mut count = 0;
    while let Some(i) = stack.pop() {
        count += 1;
        for q in 0..a.num_states() {
            let j = act_index(a, q, i, n);
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    count
}

/// One vertex of a labeled orbit tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitNode {
    pub representative: Vec<usize>,
    pub size: usize,
    /// Index of the parent orbit on the previous level (`None` at the root).
    pub parent: Option<usize>,
    /// `size / parent size`; 1 at the root.
    pub label: usize,
}

/// Orbits of every level up to a depth, linked to their parents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledOrbitTree {
    pub degree: usize,
    /// Letter names of the automaton, used when displaying representatives.
    pub letters: Vec<String>,
    pub levels: Vec<Vec<OrbitNode>>,
}

impl LabeledOrbitTree {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Indices of the orbits on level `n + 1` below orbit `i` of level `n`.
    pub fn children(&self, n: usize, i: usize) -> Vec<usize> {
        self.levels
            .get(n + 1)
            .map(|next| {
                next.iter()
                    .enumerate()
                    .filter(|(_, c)| c.parent == Some(i))
                    .map(|(j, _)| j)
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Representative of a vertex spelled with letter names.
    pub fn format_word(&self, word: &[usize]) -> String {
        crate::automaton::format_symbols(word, &self.letters)
    }

    /// Number of levels below the root along which the tree has a single
    /// vertex, i.e. the number of transitive levels seen in this tree.
    pub fn initial_chain_length(&self) -> usize {
        self.levels.iter().skip(1).take_while(|level| level.len() == 1).count()
    }
}

pub fn orbit_tree(a: &MealyAutomaton, depth: usize) -> Result<LabeledOrbitTree> {
    require_invertible(a)?;
    let mut levels = vec![vec![OrbitNode {
        representative: Vec::new(),
        size: 1,
        parent: None,
        label: 1,
    }]];
    let mut previous: Option<LevelPartition> = None;
    for n in 1..=depth {
        let part = level_orbits(a, n)?;
        let parents = &levels[n - 1];
        let nodes = (0..part.num_orbits())
            .map(|o| {
                let representative = part.representative(o);
                let parent = match &previous {
                    Some(p) => p.orbit_of(&representative[..n - 1]),
                    None => 0,
                };
                let size = part.sizes()[o];
                OrbitNode {
                    representative,
                    size,
                    parent: Some(parent),
                    label: size / parents[parent].size,
                }
            })
            .collect();
        levels.push(nodes);
        previous = Some(part);
    }
    Ok(LabeledOrbitTree {
        degree: a.degree(),
        letters: a.letters().to_vec(),
        levels,
    })
}

/// Largest level on which the group acts transitively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TransitivityVerdict {
    /// Levels `1..=t` are single orbits and level `t + 1` is not.
    ExactLevel(usize),
    /// Every level up to the given one is a single orbit.
    AtLeast(usize),
}

/// Finds the maximum transitivity level, checking levels `1..=cap`. Levels
/// too large to materialize stop the search with `AtLeast`.
pub fn transitivity_level(a: &MealyAutomaton, cap: usize) -> Result<TransitivityVerdict> {
    require_invertible(a)?;
    for n in 1..=cap {
        let Ok(size) = level_size(a.degree(), n) else {
            return Ok(TransitivityVerdict::AtLeast(n - 1));
        };
        if orbit_size_of(a, 0, n, size) != size {
            return Ok(TransitivityVerdict::ExactLevel(n - 1));
        }
    }
    Ok(TransitivityVerdict::AtLeast(cap))
}

/// Whether each level `1..=depth` is a single orbit. Once a level fails,
/// all deeper levels fail too and are not materialized.
pub fn level_transitive_up_to(a: &MealyAutomaton, depth: usize) -> Result<Vec<bool>> {
    require_invertible(a)?;
    let mut result = Vec::with_capacity(depth);
    let mut transitive = true;
    for n in 1..=depth {
        if transitive {
            let size = level_size(a.degree(), n)?;
            transitive = orbit_size_of(a, 0, n, size) == size;
        }
        result.push(transitive);
    }
    Ok(result)
}

/// Upper bound on the number of levels examined before the section-count
/// sequence must have repeated.
pub const SPHERICAL_ITERATION_LIMIT: usize = 1 << 20;

/// Decides whether a binary element acts transitively on every level.
///
/// On the binary tree `g` is transitive on level `n + 1` exactly when it is
/// transitive on level `n` and an odd number of its level-`n` sections are
/// active. The parities of section multiplicities evolve by a linear map over
/// GF(2) on the states of the element automaton, so the sequence is
/// eventually periodic and checking one full period decides all levels.
pub fn spherically_transitive_binary(group: &Group, g: &GroupWord) -> Result<bool> {
    Ok(spherical_failure_level(group, g)?.is_none())
}

/// First level on which the binary element `g` is not transitive, or `None`
/// when it is transitive on every level.
pub fn spherical_failure_level(group: &Group, g: &GroupWord) -> Result<Option<usize>> {
    if group.degree() != 2 {
        return Err(Error::DegreeNot2(group.degree()));
    }
    if !group.is_invertible() {
        return Err(Error::NotInvertible);
    }
    let e = group.element_automaton(g)?;
    let n = e.num_states();
    let active: Vec<bool> = (0..n).map(|s| e.is_active(s)).collect();
    let mut counts = vec![false; n];
    counts[0] = true;
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    for level in 0..SPHERICAL_ITERATION_LIMIT {
        if !seen.insert(counts.clone()) {
            return Ok(None);
        }
        let odd = (0..n).filter(|&s| counts[s] && active[s]).count() % 2 == 1;
        if !odd {
            return Ok(Some(level + 1));
        }
        let mut next = vec![false; n];
        for s in (0..n).filter(|&s| counts[s]) {
            for x in 0..2 {
                let t = e.next(s, x);
                next[t] = !next[t];
            }
        }
        counts = next;
    }
    Err(Error::Invalid(format!(
        "section parities did not repeat within {SPHERICAL_ITERATION_LIMIT} levels"
    )))
}

/// Per-level evidence collected by [`certify_nontrivial`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateLevel {
    pub level: usize,
    /// Number of orbital-tree vertices on this level.
    pub vertices: usize,
    /// The dual group acts with a single orbit on these vertices.
    pub transitive: bool,
    /// Lexicographically first vertex whose product of states moves a letter.
    pub witness: Vec<usize>,
}

/// Evidence that every orbital-tree word of length at most `depth`
/// represents a nontrivial element of the group generated by the automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NontrivialityCertificate {
    pub orbit_rep: Vec<usize>,
    pub depth: usize,
    pub levels: Vec<CertificateLevel>,
}

/// Transitivity cap used when locating the orbit for certification.
pub const CERTIFY_LEVEL_CAP: usize = 8;

/// Certifies nontriviality of all orbital-tree words up to `depth`.
///
/// Words over the states of `a` are vertices of the tree of the dual
/// automaton `D`. If `D` acts transitively on the level-`n` vertices of the
/// orbital tree and one of them acts nontrivially on the first level, then
/// every one of them is nontrivial, because `h(w)` is a section of the
/// element `w` (conjugated into place) for each `h` in the dual group.
///
/// `orbit_rep` is given by state names of `a`.
pub fn certify_nontrivial(a: &MealyAutomaton, orbit_rep: &[usize], depth: usize) -> Result<NontrivialityCertificate> {
    require_invertible(a)?;
    if !a.is_reversible() {
        return Err(Error::Invalid("automaton must be reversible".into()));
    }
    let dual = a.dual();
    let ctx = orbit_context(&dual, orbit_rep)?;
    let group = Group::new(a);
    let mut levels = Vec::with_capacity(depth);
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for n in 1..=depth {
        layer = layer
            .iter()
            .flat_map(|w| {
                ctx.children_of(w).into_iter().map(move |x| {
                    let mut child = w.clone();
                    child.push(x);
                    child
                })
            })
            .collect();
        if !single_dual_orbit(&dual, &layer) {
            return Err(Error::TransitivityFailed(n));
        }
        let witness = layer
            .iter()
            .find(|w| {
                let g = GroupWord::from_states(w);
                let root = group.root_action(&g).expect("states in range");
                root.iter().enumerate().any(|(x, &y)| x != y)
            })
            .ok_or(Error::NoWitness(n))?;
        levels.push(CertificateLevel {
            level: n,
            vertices: layer.len(),
            transitive: true,
            witness: witness.clone(),
        });
    }
    Ok(NontrivialityCertificate {
        orbit_rep: orbit_rep.to_vec(),
        depth,
        levels,
    })
}

/// Whether `words` (sorted, of equal length) form one orbit of the group of `d`.
fn single_dual_orbit(d: &MealyAutomaton, words: &[Vec<usize>]) -> bool {
    let Some(first) = words.first() else {
        return false;
    };
    let n = first.len();
    let index: HashMap<usize, usize> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (word_index(w, d.degree()), i))
        .collect();
    let mut seen = vec![false; words.len()];
    seen[0] = true;
    let mut stack = vec![word_index(first, d.degree())];
    let mut reached = 1;
    while let Some(i) = stack.pop() {
        for q in 0..d.num_states() {
            let j = act_index(d, q, i, n);
            match index.get(&j) {
                Some(&k) if !seen[k] => {
                    seen[k] = true;
                    reached += 1;
                    stack.push(j);
                }
                Some(_) => {}
                None => return false,
            }
        }
    }
    reached == words.len()
}

impl OrbitContext {
    /// Letters extending `word` inside the orbital tree (empty for non-members).
    pub fn children_of(&self, word: &[usize]) -> Vec<usize> {
        self.query(word).children
    }
}
