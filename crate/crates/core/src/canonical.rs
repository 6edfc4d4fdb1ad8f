//! Relabeling-invariant encoding of an automaton.
//!
//! States are numbered in breadth-first order from a start state, visiting
//! letters in order. When the search runs out of reachable states every
//! remaining state is tried as the next start. The canonical form is the
//! lexicographically least resulting table over all choices.

use std::fmt;

use crate::automaton::MealyAutomaton;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u32>);

impl CanonicalForm {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|v| v.to_be_bytes()).collect()
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({self})")
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.to_bytes() {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

struct Search<'a> {
    a: &'a MealyAutomaton,
    best: Option<(Vec<u32>, Vec<usize>)>,
}

impl Search<'_> {
    fn explore(&mut self, mut order: Vec<usize>, mut label: Vec<Option<usize>>, mut head: usize) {
        let n = self.a.num_states();
        while head < order.len() {
            let q = order[head];
            for &p in self.a.next_row(q) {
                if label[p].is_none() {
                    label[p] = Some(order.len());
                    order.push(p);
                }
            }
            head += 1;
        }
        if order.len() < n {
            for start in 0..n {
                if label[start].is_none() {
                    let mut o = order.clone();
                    let mut l = label.clone();
                    l[start] = Some(o.len());
                    o.push(start);
                    self.explore(o, l, head);
                }
            }
            return;
        }
        let d = self.a.degree();
        let mut code = Vec::with_capacity(2 + 2 * n * d);
        code.push(n as u32);
        code.push(d as u32);
        for &q in &order {
            for x in 0..d {
                code.push(label[self.a.next(q, x)].unwrap() as u32);
                code.push(self.a.out(q, x) as u32);
            }
        }
        if self.best.as_ref().is_none_or(|(b, _)| code < *b) {
            self.best = Some((code, order));
        }
    }
}

fn search(a: &MealyAutomaton) -> (Vec<u32>, Vec<usize>) {
    let n = a.num_states();
    let mut search = Search { a, best: None };
    for start in 0..n {
        let mut label = vec![None; n];
        label[start] = Some(0);
        search.explore(vec![start], label, 0);
    }
    search.best.expect("automaton has at least one state")
}

pub fn canonical_form(a: &MealyAutomaton) -> CanonicalForm {
    CanonicalForm(search(a).0)
}

/// The automaton with its states reordered into canonical order; each state
/// keeps its name. Automata related by a state relabeling have equal tables
/// after this reordering.
pub fn canonical_relabeling(a: &MealyAutomaton) -> MealyAutomaton {
    let order = search(a).1;
    let mut position = vec![0; order.len()];
    for (i, &q) in order.iter().enumerate() {
        position[q] = i;
    }
    let next = order
        .iter()
        .map(|&q| a.next_row(q).iter().map(|&p| position[p]).collect())
        .collect();
    let out = order.iter().map(|&q| a.out_row(q).to_vec()).collect();
    let names = order.iter().map(|&q| a.state_name(q).to_string()).collect();
    MealyAutomaton::new(names, a.letters().to_vec(), next, out).expect("reordered tables are valid")
}
