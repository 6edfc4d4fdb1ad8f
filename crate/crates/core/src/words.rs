//! Group elements as words over the states of an automaton.
//!
//! Products compose left to right: in `g*h` the factor `g` acts first.
//! Sections follow `(g1 g2 ... gn)|_v = g1|_v · g2|_{g1(v)} ⋯`.

use std::collections::HashSet;
use std::fmt;

use crate::automaton::MealyAutomaton;
use crate::element::{enumerate_generated, ElementAutomaton, FinitenessVerdict};
use crate::error::{Error, Result};

/// A generator or the inverse of a generator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Factor {
    pub state: usize,
    pub inverse: bool,
}

impl Factor {
    pub fn pos(state: usize) -> Self {
        Self { state, inverse: false }
    }

    pub fn neg(state: usize) -> Self {
        Self { state, inverse: true }
    }

    pub fn inv(self) -> Self {
        Self {
            inverse: !self.inverse,
            ..self
        }
    }

    fn slot(self) -> usize {
        2 * self.state + self.inverse as usize
    }
}

/// A signed sequence of states; the empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct GroupWord {
    factors: Vec<Factor>,
}

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_factors(factors: Vec<Factor>) -> Self {
        Self { factors }
    }

    /// Positive word on the given states.
    pub fn from_states(states: &[usize]) -> Self {
        Self::from_factors(states.iter().map(|&q| Factor::pos(q)).collect())
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.factors.iter().all(|f| !f.inverse)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Self { factors }
    }

    pub fn inverse(&self) -> Self {
        Self {
            factors: self.factors.iter().rev().map(|f| f.inv()).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        Self {
            factors: self.factors.repeat(n),
        }
    }

    /// `h^{-1} g h`, i.e. `g` conjugated by `h`.
    pub fn conjugate_by(&self, h: &Self) -> Self {
        h.inverse().mul(self).mul(h)
    }

    /// Parses `"e*r"`, `"1*0^-1"`, `"0_a*1_c"`. Powers `^n` and `^-n` are
    /// accepted on single factors; an empty string or `"1"` when no state is
    /// named `1` denotes the identity.
    pub fn parse(a: &MealyAutomaton, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "ε" || (text == "1" && a.state_index("1").is_none()) {
            return Ok(Self::identity());
        }
        let mut factors = Vec::new();
        for tok in text.split('*') {
            let tok = tok.trim();
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.trim().parse().map_err(|_| Error::Syntax {
                        pos: 0,
                        msg: format!("bad exponent in `{tok}`"),
                    })?;
                    (n.trim(), e)
                }
                None => (tok, 1),
            };
            let q = a
                .state_index(name)
                .ok_or_else(|| Error::UnknownState(name.to_string()))?;
            let f = if exp < 0 { Factor::neg(q) } else { Factor::pos(q) };
            factors.extend(std::iter::repeat_n(f, exp.unsigned_abs() as usize));
        }
        Ok(Self { factors })
    }

    pub fn display<'a>(&'a self, a: &'a MealyAutomaton) -> WordDisplay<'a> {
        WordDisplay { word: self, a }
    }
}

pub struct WordDisplay<'a> {
    word: &'a GroupWord,
    a: &'a MealyAutomaton,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, fac) in self.word.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(self.a.state_name(fac.state))?;
            if fac.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// Result of a bounded order computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderVerdict {
    Finite(usize),
    ExceedsCap(usize),
}

/// The group (or monoid) generated by an automaton, with the tables needed
/// to evaluate words.
#[derive(Clone, Debug)]
pub struct Group {
    automaton: MealyAutomaton,
    inverse: Option<MealyAutomaton>,
    /// Representative of each signed generator, `None` for the identity.
    rep: Vec<Option<Factor>>,
}

impl Group {
    pub fn new(automaton: &MealyAutomaton) -> Self {
        let inverse = automaton.inverse().ok();
        let mut group = Self {
            automaton: automaton.clone(),
            inverse,
            rep: Vec::new(),
        };
        group.rep = group.generator_representatives();
        group
    }

    pub fn automaton(&self) -> &MealyAutomaton {
        &self.automaton
    }

    pub fn inverse_automaton(&self) -> Option<&MealyAutomaton> {
        self.inverse.as_ref()
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn degree(&self) -> usize {
        self.automaton.degree()
    }

    pub fn parse(&self, text: &str) -> Result<GroupWord> {
        let w = GroupWord::parse(&self.automaton, text)?;
        self.check_word(&w)?;
        Ok(w)
    }

    pub fn generators(&self) -> Vec<GroupWord> {
        (0..self.automaton.num_states())
            .map(|q| GroupWord::from_states(&[q]))
            .collect()
    }

    pub fn check_word(&self, g: &GroupWord) -> Result<()> {
        let n = self.automaton.num_states();
        for f in &g.factors {
            if f.state >= n {
                return Err(Error::StateOutOfRange {
                    state: f.state,
                    count: n,
                });
            }
            if f.inverse && self.inverse.is_none() {
                return Err(Error::NotInvertible);
            }
        }
        Ok(())
    }

    fn check_vertex(&self, v: &[usize]) -> Result<()> {
        v.iter().try_for_each(|&x| self.automaton.check_letter(x))
    }

    /// One letter through one factor: the factor's section and the image letter.
    #[inline]
    fn step(&self, f: Factor, x: usize) -> (Factor, usize) {
        let table = if f.inverse {
            self.inverse.as_ref().expect("checked invertible")
        } else {
            &self.automaton
        };
        (
            Factor {
                state: table.next(f.state, x),
                inverse: f.inverse,
            },
            table.out(f.state, x),
        )
    }

    /// Image of a whole word under a single factor, plus the section there.
    fn run_factor(&self, f: Factor, v: &[usize]) -> (Factor, Vec<usize>) {
        let mut cur = f;
        let image = v
            .iter()
            .map(|&x| {
                let (n, y) = self.step(cur, x);
                cur = n;
                y
            })
            .collect();
        (cur, image)
    }

    pub fn act(&self, g: &GroupWord, v: &[usize]) -> Result<Vec<usize>> {
        self.check_word(g)?;
        self.check_vertex(v)?;
        Ok(g.factors.iter().fold(v.to_vec(), |w, &f| self.run_factor(f, &w).1))
    }

    pub fn section(&self, g: &GroupWord, v: &[usize]) -> Result<GroupWord> {
        self.check_word(g)?;
        self.check_vertex(v)?;
        let mut vertex = v.to_vec();
        let factors = g
            .factors
            .iter()
            .map(|&f| {
                let (s, image) = self.run_factor(f, &vertex);
                vertex = image;
                s
            })
            .collect();
        Ok(GroupWord { factors })
    }

    /// Permutation (or map) induced on the first level.
    pub fn root_action(&self, g: &GroupWord) -> Result<Vec<usize>> {
        self.check_word(g)?;
        Ok(self.root_of(&g.factors))
    }

    fn root_of(&self, factors: &[Factor]) -> Vec<usize> {
        (0..self.degree())
            .map(|x| factors.iter().fold(x, |y, &f| self.step(f, y).1))
            .collect()
    }

    // Signed generators equal as elements share a representative; generators
    // acting trivially map to `None`.
    fn generator_representatives(&self) -> Vec<Option<Factor>> {
        let n = self.automaton.num_states();
        let mut signed: Vec<Factor> = (0..n).map(Factor::pos).collect();
        if self.inverse.is_some() {
            signed.extend((0..n).map(Factor::neg));
        }
        let mut rep = vec![None; 2 * n];
        let elems: Vec<ElementAutomaton> = signed.iter().map(|&f| self.element_of_factor(f)).collect();
        for (i, &f) in signed.iter().enumerate() {
            if elems[i].is_identity() {
                continue;
            }
            let first = (0..i).find(|&j| elems[j] == elems[i]).map(|j| signed[j]);
            rep[f.slot()] = Some(first.unwrap_or(f));
        }
        rep
    }

    fn element_of_factor(&self, f: Factor) -> ElementAutomaton {
        let table = if f.inverse {
            self.inverse.as_ref().expect("checked invertible")
        } else {
            &self.automaton
        };
        ElementAutomaton::of_state(table, f.state)
    }

    /// Rewrites a word using equalities between generators and free cancellation.
    fn reduce(&self, factors: &[Factor]) -> Vec<Factor> {
        let mut out: Vec<Factor> = Vec::with_capacity(factors.len());
        for &f in factors {
            let Some(r) = self.rep[f.slot()] else { continue };
            if let Some(&last) = out.last() {
                if self.inverse.is_some() && self.rep[last.inv().slot()] == Some(r) {
                    out.pop();
                    continue;
                }
            }
            out.push(r);
        }
        out
    }

    /// Decides whether `g` acts trivially on the whole tree by exploring its
    /// sections depth first; stops at the first nontrivial root action.
    pub fn is_trivial(&self, g: &GroupWord) -> Result<bool> {
        self.check_word(g)?;
        let start = self.reduce(&g.factors);
        if start.is_empty() {
            return Ok(true);
        }
        let d = self.degree();
        let mut seen: HashSet<Vec<Factor>> = HashSet::from([start.clone()]);
        let mut stack = vec![start];
        let mut sections: Vec<Vec<Factor>> = vec![Vec::new(); d];
        while let Some(w) = stack.pop() {
            for (x, sec) in sections.iter_mut().enumerate() {
                sec.clear();
                let mut y = x;
                for &f in &w {
                    let (s, z) = self.step(f, y);
                    sec.push(s);
                    y = z;
                }
                if y != x {
                    return Ok(false);
                }
            }
            for sec in &sections {
                let r = self.reduce(sec);
                if !r.is_empty() && !seen.contains(&r) {
                    seen.insert(r.clone());
                    stack.push(r);
                }
            }
        }
        Ok(true)
    }

    pub fn are_equal(&self, g: &GroupWord, h: &GroupWord) -> Result<bool> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible);
        }
        self.is_trivial(&g.mul(&h.inverse()))
    }

    /// Least `n <= cap` with `g^n` trivial, computing powers one at a time.
    pub fn order_bounded(&self, g: &GroupWord, cap: usize) -> Result<OrderVerdict> {
        self.check_word(g)?;
        let mut power = g.clone();
        for n in 1..=cap.max(1) {
            if self.is_trivial(&power)? {
                return Ok(OrderVerdict::Finite(n));
            }
            power = power.mul(g);
        }
        Ok(OrderVerdict::ExceedsCap(cap))
    }

    /// Minimal initial automaton of the element `g`.
    pub fn element_automaton(&self, g: &GroupWord) -> Result<ElementAutomaton> {
        self.check_word(g)?;
        Ok(g.factors
            .iter()
            .fold(ElementAutomaton::identity(self.degree()), |acc, &f| {
                acc.product(&self.element_of_factor(f))
            }))
    }

    /// Enumerates the subgroup generated by `gens` (and their inverses).
    pub fn enumerate_subgroup(&self, gens: &[GroupWord], cap: usize) -> Result<FinitenessVerdict> {
        let mut pairs = Vec::new();
        for g in gens {
            pairs.push((g.clone(), self.element_automaton(g)?));
            if self.is_invertible() {
                let inv = g.inverse();
                let e = self.element_automaton(&inv)?;
                pairs.push((inv, e));
            }
        }
        Ok(enumerate_generated(self.degree(), &pairs, cap))
    }
}
