//! Minimal initial automata of single group elements.
//!
//! An [`ElementAutomaton`] has its initial state at index 0, is minimal, and
//! its states are numbered in breadth-first order from the initial state.
//! Two elements act identically on the tree exactly when their element
//! automata are equal, so the type doubles as a hash key for elements.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use crate::automaton::MealyAutomaton;
use crate::minimize::table_classes;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ElementAutomaton {
    degree: usize,
    next: Vec<usize>,
    out: Vec<usize>,
}

impl ElementAutomaton {
    pub fn identity(degree: usize) -> Self {
        Self {
            degree,
            next: vec![0; degree],
            out: (0..degree).collect(),
        }
    }

    /// The element defined by state `q` of `a`.
    pub fn of_state(a: &MealyAutomaton, q: usize) -> Self {
        let d = a.degree();
        let mut index = HashMap::from([(q, 0usize)]);
        let mut order = vec![q];
        let mut head = 0;
        while head < order.len() {
            let s = order[head];
            head += 1;
            for &p in a.next_row(s) {
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(p) {
                    e.insert(order.len());
                    order.push(p);
                }
            }
        }
        let mut next = Vec::with_capacity(order.len() * d);
        let mut out = Vec::with_capacity(order.len() * d);
        for &s in &order {
            next.extend(a.next_row(s).iter().map(|p| index[p]));
            out.extend_from_slice(a.out_row(s));
        }
        Self::normalized(d, next, out)
    }

    fn normalized(degree: usize, next: Vec<usize>, out: Vec<usize>) -> Self {
        let n = next.len() / degree;
        let class = table_classes(n, degree, &next, &out);
        let classes = class.iter().max().map_or(0, |m| m + 1);
        let mut rep = vec![usize::MAX; classes];
        for (q, &c) in class.iter().enumerate() {
            if rep[c] == usize::MAX {
                rep[c] = q;
            }
        }
        let mut label = vec![usize::MAX; classes];
        label[class[0]] = 0;
        let mut order = vec![class[0]];
        let mut head = 0;
        while head < order.len() {
            let q = rep[order[head]];
            head += 1;
            for x in 0..degree {
                let c = class[next[q * degree + x]];
                if label[c] == usize::MAX {
                    label[c] = order.len();
                    order.push(c);
                }
            }
        }
        let mut new_next = Vec::with_capacity(order.len() * degree);
        let mut new_out = Vec::with_capacity(order.len() * degree);
        for &c in &order {
            let q = rep[c];
            for x in 0..degree {
                new_next.push(label[class[next[q * degree + x]]]);
                new_out.push(out[q * degree + x]);
            }
        }
        Self {
            degree,
            next: new_next,
            out: new_out,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_states(&self) -> usize {
        self.next.len() / self.degree
    }

    #[inline]
    pub fn next(&self, s: usize, x: usize) -> usize {
        self.next[s * self.degree + x]
    }

    #[inline]
    pub fn out(&self, s: usize, x: usize) -> usize {
        self.out[s * self.degree + x]
    }

    pub fn is_identity(&self) -> bool {
        self.num_states() == 1 && (0..self.degree).all(|x| self.out[x] == x)
    }

    pub fn is_active(&self, s: usize) -> bool {
        (0..self.degree).any(|x| self.out(s, x) != x)
    }

    /// `self` followed by `other`.
    pub fn product(&self, other: &Self) -> Self {
        let d = self.degree;
        let m = other.num_states();
        let mut index = vec![usize::MAX; self.num_states() * m];
        index[0] = 0;
        let mut order = vec![0usize];
        let mut next = Vec::new();
        let mut out = Vec::new();
        let mut head = 0;
        while head < order.len() {
            let pair = order[head];
            head += 1;
            let (i, j) = (pair / m, pair % m);
            for x in 0..d {
                let y = self.out(i, x);
                out.push(other.out(j, y));
                let target = self.next(i, x) * m + other.next(j, y);
                if index[target] == usize::MAX {
                    index[target] = order.len();
                    order.push(target);
                }
                next.push(index[target]);
            }
        }
        Self::normalized(d, next, out)
    }

    pub fn act(&self, word: &[usize]) -> Vec<usize> {
        let mut s = 0;
        word.iter()
            .map(|&x| {
                let y = self.out(s, x);
                s = self.next(s, x);
                y
            })
            .collect()
    }

    /// As a Mealy automaton whose state `s<i>` is the section reached in `i` BFS steps order.
    pub fn to_automaton(&self) -> MealyAutomaton {
        let names = (0..self.num_states()).map(|i| format!("s{i}")).collect();
        MealyAutomaton::from_flat(
            names,
            crate::automaton::default_letters(self.degree),
            self.next.clone(),
            self.out.clone(),
        )
    }
}

/// Outcome of a bounded enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FinitenessVerdict {
    /// The closure finished; `elements` holds one shortest word per element.
    Finite {
        count: usize,
        elements: Vec<crate::words::GroupWord>,
    },
    ExceedsCap(usize),
}

impl FinitenessVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite { .. })
    }

    pub fn count(&self) -> Option<usize> {
        match self {
            Self::Finite { count, .. } => Some(*count),
            Self::ExceedsCap(_) => None,
        }
    }
}

/// Number of factors in the pseudo-random word probed by [`enumerate_group`].
const PROBE_LEN: usize = 64;

/// Breadth-first closure of the identity under right multiplication by
/// generators (and their inverses when the automaton is invertible).
/// A non-invertible automaton is enumerated as the monoid it generates.
///
/// Every state of an element automaton is a section of the element, and
/// sections stay inside the generated group (or monoid). So before
/// enumerating, a long pseudo-random product of generators is built; if its
/// element automaton already has more than `cap` states, so does the group,
/// and the closure is skipped.
pub fn enumerate_group(a: &MealyAutomaton, cap: usize) -> FinitenessVerdict {
    use crate::words::{Factor, GroupWord};

    let mut gens: Vec<(GroupWord, ElementAutomaton)> = (0..a.num_states())
        .map(|q| {
            (
                GroupWord::from_factors(vec![Factor::pos(q)]),
                ElementAutomaton::of_state(a, q),
            )
        })
        .collect();
    if let Ok(inv) = a.inverse() {
        gens.extend((0..a.num_states()).map(|q| {
            (
                GroupWord::from_factors(vec![Factor::neg(q)]),
                ElementAutomaton::of_state(&inv, q),
            )
        }));
    }
    if sections_exceed(a.degree(), &gens, cap) {
        return FinitenessVerdict::ExceedsCap(cap.max(1));
    }
    enumerate_generated(a.degree(), &gens, cap)
}

/// Whether some product of at most [`PROBE_LEN`] generators has more than
/// `cap` distinct sections.
fn sections_exceed(degree: usize, gens: &[(crate::words::GroupWord, ElementAutomaton)], cap: usize) -> bool {
    if gens.is_empty() {
        return false;
    }
    let mut state: u64 = 0x2545_F491_4F6C_DD1D;
    let mut e = ElementAutomaton::identity(degree);
    for _ in 0..PROBE_LEN {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        e = e.product(&gens[(state % gens.len() as u64) as usize].1);
        if e.num_states() > cap.max(1) {
            return true;
        }
    }
    false
}

/// Length of the test words used to fingerprint elements.
const TEST_WORD_LEN: usize = 48;

/// Deterministic test words: short prefixes followed by a constant run of
/// each letter, period-2 words, and a few pseudo-random words. Elements that
/// agree on a whole level often first differ on long runs of one letter.
fn test_words(degree: usize) -> Vec<Vec<usize>> {
    use crate::analysis::index_word;

    let pad = |mut w: Vec<usize>, fill: &dyn Fn(usize) -> usize| {
        while w.len() < TEST_WORD_LEN {
            w.push(fill(w.len()));
        }
        w
    };
    let mut words = Vec::new();
    let mut prefix_len = 0;
    while words.len() < 16 {
        for i in 0..degree.pow(prefix_len as u32) {
            for x in 0..degree {
                words.push(pad(index_word(i, degree, prefix_len), &|_| x));
            }
        }
        prefix_len += 1;
    }
    for x in 0..degree.min(4) {
        for y in 0..degree.min(4) {
            if x != y {
                words.push(pad(Vec::new(), &|n| if n % 2 == 0 { x } else { y }));
            }
        }
    }
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    for _ in 0..8 {
        words.push(
            (0..TEST_WORD_LEN)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state % degree as u64) as usize
                })
                .collect(),
        );
    }
    words
}

/// Closure of the identity under right multiplication by the given
/// elements, each paired with a word naming it.
///
/// Elements are first bucketed by their images of a fixed set of test
/// words, which are cheap to update; element automata (whose size can grow
/// exponentially with word length) are only built to separate elements that
/// agree on every test word.
pub fn enumerate_generated(
    degree: usize,
    gens: &[(crate::words::GroupWord, ElementAutomaton)],
    cap: usize,
) -> FinitenessVerdict {
    use crate::words::GroupWord;

    let cap = cap.max(1);
    let identity: Vec<u16> = test_words(degree).concat().iter().map(|&x| x as u16).collect();
    let fp_len = identity.len();
    let hash = |fp: &[u16]| {
        let mut h = DefaultHasher::new();
        fp.hash(&mut h);
        h.finish()
    };
    // A generator followed by its inverse gives back a known element.
    let cancels: Vec<Option<usize>> = gens
        .iter()
        .map(|(w, _)| gens.iter().position(|(v, _)| !w.is_empty() && *v == w.inverse()))
        .collect();
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::from([(hash(&identity), vec![0])]);
    let mut store = ElementStore {
        fingerprints: identity,
        automata: vec![Some(ElementAutomaton::identity(degree))],
        parents: vec![None],
    };
    let mut words = vec![GroupWord::identity()];
    let mut fp: Vec<u16> = Vec::with_capacity(fp_len);
    let mut head = 0;
    while head < words.len() {
        let idx = head;
        head += 1;
        for (gi, (w, g)) in gens.iter().enumerate() {
            if let Some((_, last)) = store.parents[idx] {
                if cancels[last] == Some(gi) {
                    continue;
                }
            }
            fp.clear();
            for chunk in store.fingerprints[idx * fp_len..(idx + 1) * fp_len].chunks(TEST_WORD_LEN) {
                let mut s = 0;
                fp.extend(chunk.iter().map(|&x| {
                    let y = g.out(s, x as usize);
                    s = g.next(s, x as usize);
                    y as u16
                }));
            }
            let key = hash(&fp);
            let mut product = None;
            let same: Vec<usize> = buckets
                .get(&key)
                .map(|bucket| {
                    bucket
                        .iter()
                        .copied()
                        .filter(|&c| store.fingerprints[c * fp_len..(c + 1) * fp_len] == fp[..])
                        .collect()
                })
                .unwrap_or_default();
            if !same.is_empty() {
                let p = store.automaton(idx, gens).product(g);
                if same.iter().any(|&c| *store.automaton(c, gens) == p) {
                    continue;
                }
                product = Some(p);
            }
            if words.len() >= cap {
                return FinitenessVerdict::ExceedsCap(cap);
            }
            buckets.entry(key).or_default().push(words.len());
            store.fingerprints.extend_from_slice(&fp);
            store.automata.push(product);
            store.parents.push(Some((idx, gi)));
            words.push(words[idx].mul(w));
        }
    }
    FinitenessVerdict::Finite {
        count: words.len(),
        elements: words,
    }
}

/// Enumerated elements with lazily built element automata.
struct ElementStore {
    /// Test-word images of all elements, concatenated.
    fingerprints: Vec<u16>,
    automata: Vec<Option<ElementAutomaton>>,
    /// Parent element and generator index it was reached by.
    parents: Vec<Option<(usize, usize)>>,
}

impl ElementStore {
    fn automaton(&mut self, idx: usize, gens: &[(crate::words::GroupWord, ElementAutomaton)]) -> &ElementAutomaton {
        let mut chain = Vec::new();
        let mut i = idx;
        while self.automata[i].is_none() {
            chain.push(i);
            i = self.parents[i].expect("the identity is always built").0;
        }
        for &j in chain.iter().rev() {
            let (parent, gi) = self.parents[j].expect("only non-identity elements are unbuilt");
            let e = self.automata[parent]
                .as_ref()
                .expect("built in order")
                .product(&gens[gi].1);
            self.automata[j] = Some(e);
        }
        self.automata[idx].as_ref().expect("just built")
    }
}
