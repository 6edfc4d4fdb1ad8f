//! Finite Mealy automata over a finite alphabet.
//!
//! States and letters are addressed by index; names are kept for display and
//! for parsing user input. Letters default to the names `"0"`, `"1"`, ... and
//! appear 1-based in cycle notation.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A complete Mealy automaton with tables `next(q, x)` and `out(q, x)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MealyAutomaton {
    states: Vec<String>,
    letters: Vec<String>,
    next: Vec<usize>,
    out: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutomatonProperties {
    pub invertible: bool,
    pub reversible: bool,
    pub bireversible: bool,
    pub num_states: usize,
    pub degree: usize,
}

pub fn default_letters(degree: usize) -> Vec<String> {
    (0..degree).map(|i| i.to_string()).collect()
}

fn check_names(kind: &str, names: &[String]) -> Result<()> {
    let mut seen = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() {
            return Err(Error::Invalid(format!("empty {kind} name")));
        }
        if let Some(j) = seen.insert(n.as_str(), i) {
            return Err(Error::Invalid(format!(
                "duplicate {kind} name `{n}` at positions {j} and {i}"
            )));
        }
    }
    Ok(())
}

impl MealyAutomaton {
    /// Builds an automaton from row-major tables indexed by `[state][letter]`.
    pub fn new(states: Vec<String>, letters: Vec<String>, next: Vec<Vec<usize>>, out: Vec<Vec<usize>>) -> Result<Self> {
        let d = letters.len();
        let n = states.len();
        if n == 0 {
            return Err(Error::Invalid("automaton needs at least one state".into()));
        }
        if d == 0 {
            return Err(Error::Invalid("alphabet must be nonempty".into()));
        }
        check_names("state", &states)?;
        check_names("letter", &letters)?;
        if next.len() != n || out.len() != n {
            return Err(Error::Invalid("table row count differs from state count".into()));
        }
        let mut flat_next = Vec::with_capacity(n * d);
        let mut flat_out = Vec::with_capacity(n * d);
        for (q, (nr, or)) in next.iter().zip(&out).enumerate() {
            if nr.len() != d || or.len() != d {
                return Err(Error::Invalid(format!("row {q} does not have {d} entries")));
            }
            for (&t, &y) in nr.iter().zip(or) {
                if t >= n {
                    return Err(Error::StateOutOfRange { state: t, count: n });
                }
                if y >= d {
                    return Err(Error::LetterOutOfRange { letter: y, degree: d });
                }
                flat_next.push(t);
                flat_out.push(y);
            }
        }
        Ok(Self {
            states,
            letters,
            next: flat_next,
            out: flat_out,
        })
    }

    /// Same as [`MealyAutomaton::new`] with anonymous letters `0..degree`.
    pub fn with_degree(
        states: Vec<String>,
        degree: usize,
        next: Vec<Vec<usize>>,
        out: Vec<Vec<usize>>,
    ) -> Result<Self> {
        Self::new(states, default_letters(degree), next, out)
    }

    /// Builds from flat tables without validation; callers guarantee the shape.
    pub(crate) fn from_flat(states: Vec<String>, letters: Vec<String>, next: Vec<usize>, out: Vec<usize>) -> Self {
        debug_assert_eq!(next.len(), states.len() * letters.len());
        debug_assert_eq!(out.len(), states.len() * letters.len());
        Self {
            states,
            letters,
            next,
            out,
        }
    }

    /// The one-state identity automaton on `degree` letters.
    pub fn identity(degree: usize) -> Self {
        Self::from_flat(
            vec!["id".into()],
            default_letters(degree),
            vec![0; degree],
            (0..degree).collect(),
        )
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn has_default_letters(&self) -> bool {
        self.letters.iter().enumerate().all(|(i, l)| *l == i.to_string())
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn letter_name(&self, x: usize) -> &str {
        &self.letters[x]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|s| s == name)
    }

    #[inline]
    pub fn next(&self, q: usize, x: usize) -> usize {
        self.next[q * self.letters.len() + x]
    }

    #[inline]
    pub fn out(&self, q: usize, x: usize) -> usize {
        self.out[q * self.letters.len() + x]
    }

    pub fn next_row(&self, q: usize) -> &[usize] {
        let d = self.degree();
        &self.next[q * d..(q + 1) * d]
    }

    pub fn out_row(&self, q: usize) -> &[usize] {
        let d = self.degree();
        &self.out[q * d..(q + 1) * d]
    }

    /// Flat `next` table, row-major by state.
    pub fn next_table(&self) -> &[usize] {
        &self.next
    }

    pub fn out_table(&self) -> &[usize] {
        &self.out
    }

    /// True when both automata have identical tables, regardless of names.
    pub fn same_tables(&self, other: &Self) -> bool {
        self.degree() == other.degree() && self.next == other.next && self.out == other.out
    }

    /// Returns a copy with new state names.
    pub fn with_state_names(&self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.num_states() {
            return Err(Error::Invalid("state name count mismatch".into()));
        }
        check_names("state", &names)?;
        Ok(Self {
            states: names,
            ..self.clone()
        })
    }

    pub fn with_letter_names(&self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.degree() {
            return Err(Error::Invalid("letter name count mismatch".into()));
        }
        check_names("letter", &names)?;
        Ok(Self {
            letters: names,
            ..self.clone()
        })
    }

    pub fn is_invertible(&self) -> bool {
        (0..self.num_states()).all(|q| is_permutation(self.out_row(q)))
    }

    /// The dual is invertible: every column `q -> next(q, x)` is a bijection.
    pub fn is_reversible(&self) -> bool {
        let n = self.num_states();
        (0..self.degree()).all(|x| {
            let mut seen = vec![false; n];
            (0..n).all(|q| !std::mem::replace(&mut seen[self.next(q, x)], true))
        })
    }

    pub fn properties(&self) -> AutomatonProperties {
        let invertible = self.is_invertible();
        let reversible = self.is_reversible();
        let bireversible = invertible && reversible && self.inverse().map(|inv| inv.is_reversible()).unwrap_or(false);
        AutomatonProperties {
            invertible,
            reversible,
            bireversible,
            num_states: self.num_states(),
            degree: self.degree(),
        }
    }

    /// The inverse automaton: every arrow `q --x|y--> p` becomes `q --y|x--> p`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let d = self.degree();
        let mut next = vec![0; self.next.len()];
        let mut out = vec![0; self.out.len()];
        for q in 0..self.num_states() {
            for x in 0..d {
                let y = self.out(q, x);
                next[q * d + y] = self.next(q, x);
                out[q * d + y] = x;
            }
        }
        Ok(Self::from_flat(self.states.clone(), self.letters.clone(), next, out))
    }

    /// Exchanges the roles of states and letters and of the two tables.
    pub fn dual(&self) -> Self {
        let n = self.num_states();
        let d = self.degree();
        let mut next = Vec::with_capacity(n * d);
        let mut out = Vec::with_capacity(n * d);
        for x in 0..d {
            for q in 0..n {
                next.push(self.out(q, x));
                out.push(self.next(q, x));
            }
        }
        Self::from_flat(self.letters.clone(), self.states.clone(), next, out)
    }

    /// Extended transition and output functions on a word.
    pub fn run(&self, q: usize, word: &[usize]) -> Result<(usize, Vec<usize>)> {
        if q >= self.num_states() {
            return Err(Error::StateOutOfRange {
                state: q,
                count: self.num_states(),
            });
        }
        let mut state = q;
        let mut output = Vec::with_capacity(word.len());
        for &x in word {
            self.check_letter(x)?;
            output.push(self.out(state, x));
            state = self.next(state, x);
        }
        Ok((state, output))
    }

    pub(crate) fn check_letter(&self, x: usize) -> Result<()> {
        if x >= self.degree() {
            Err(Error::LetterOutOfRange {
                letter: x,
                degree: self.degree(),
            })
        } else {
            Ok(())
        }
    }

    /// Parses a word over the alphabet. Single-character letter names may be
    /// juxtaposed (`"qw"`); otherwise letters are separated by commas or spaces.
    pub fn parse_letter_word(&self, text: &str) -> Result<Vec<usize>> {
        parse_symbols(text, &self.letters).map_err(Error::UnknownLetter)
    }

    /// Parses a word over the state set with the same rules as letters.
    pub fn parse_state_word(&self, text: &str) -> Result<Vec<usize>> {
        parse_symbols(text, &self.states).map_err(Error::UnknownState)
    }

    pub fn format_letter_word(&self, word: &[usize]) -> String {
        format_symbols(word, &self.letters)
    }

    pub fn format_state_word(&self, word: &[usize]) -> String {
        format_symbols(word, &self.states)
    }
}

pub(crate) fn is_permutation(row: &[usize]) -> bool {
    let mut seen = vec![false; row.len()];
    row.iter()
        .all(|&y| y < row.len() && !std::mem::replace(&mut seen[y], true))
}

fn all_single_char(names: &[String]) -> bool {
    names.iter().all(|n| n.chars().count() == 1)
}

fn parse_symbols(text: &str, names: &[String]) -> std::result::Result<Vec<usize>, String> {
    let text = text.trim();
    if text.is_empty() || text == "ε" {
        return Ok(Vec::new());
    }
    let lookup = |tok: &str| names.iter().position(|n| n == tok).ok_or_else(|| tok.to_string());
    if text.contains(|c: char| c == ',' || c.is_whitespace()) || !all_single_char(names) {
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(lookup)
            .collect()
    } else {
        text.chars().map(|c| lookup(&c.to_string())).collect()
    }
}

pub(crate) fn format_symbols(word: &[usize], names: &[String]) -> String {
    let sep = if all_single_char(names) { "" } else { "," };
    word.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(sep)
}

impl fmt::Debug for MealyAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MealyAutomaton {{ {} }}",
            crate::wreath::to_text(self).replace('\n', "; ")
        )
    }
}

impl fmt::Display for MealyAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::wreath::to_text(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::wreath::parse_wreath;

    #[test]
    fn run_examples() {
        let b3 = catalog::bellaterra();
        let a = b3.state_index("a").unwrap();
        let c = b3.state_index("c").unwrap();
        assert_eq!(b3.run(c, &[0]).unwrap(), (a, vec![1]));
        assert_eq!(b3.run(a, &[0]).unwrap(), (c, vec![0]));
        assert_eq!(b3.run(a, &[]).unwrap(), (a, vec![]));
        assert!(matches!(
            b3.run(a, &[2]),
            Err(Error::LetterOutOfRange { letter: 2, degree: 2 })
        ));
    }

    #[test]
    fn properties_of_fixtures() {
        assert!(catalog::bellaterra().properties().bireversible);
        assert!(catalog::automaton_c().properties().bireversible);
        assert!(catalog::automaton_b().properties().bireversible);
        let constant = parse_wreath("x=(x,x)").unwrap();
        let constant = MealyAutomaton::new(
            constant.states().to_vec(),
            constant.letters().to_vec(),
            vec![vec![0, 0]],
            vec![vec![0, 0]],
        )
        .unwrap();
        let p = constant.properties();
        assert!(!p.invertible && !p.bireversible);
    }

    #[test]
    fn inverse_rules() {
        let b3 = catalog::bellaterra();
        assert_eq!(b3.inverse().unwrap().inverse().unwrap(), b3);
        let flip = parse_wreath("x=(x,x)(1,2)").unwrap();
        assert_eq!(flip.inverse().unwrap(), flip);

        let c = catalog::automaton_c();
        let inv = c.inverse().unwrap();
        for q in 0..c.num_states() {
            for x in 0..c.degree() {
                let y = c.out(q, x);
                assert_eq!(inv.next(q, y), c.next(q, x));
                assert_eq!(inv.out(q, y), x);
            }
        }
        // a = (d,d)σ, so a^{-1} = (d^{-1}, d^{-1})σ: still the swap
        let a = c.state_index("a").unwrap();
        let d = c.state_index("d").unwrap();
        assert_eq!(inv.out_row(a), &[1, 0]);
        assert_eq!(inv.next_row(a), &[d, d]);

        let noninv = MealyAutomaton::with_degree(vec!["x".into()], 2, vec![vec![0, 0]], vec![vec![1, 1]]).unwrap();
        assert_eq!(noninv.inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn reversible_matches_dual_invertible() {
        for a in [catalog::bellaterra(), catalog::automaton_b(), catalog::automaton_c()] {
            assert_eq!(a.is_reversible(), a.dual().is_invertible());
        }
        let lamp = parse_wreath("a=(b,a)(1,2); b=(b,a)").unwrap();
        assert_eq!(lamp.is_reversible(), lamp.dual().is_invertible());
        assert!(!lamp.is_reversible());
    }

    #[test]
    fn construction_errors() {
        assert!(MealyAutomaton::with_degree(vec![], 2, vec![], vec![]).is_err());
        assert!(MealyAutomaton::with_degree(vec!["a".into()], 0, vec![vec![]], vec![vec![]]).is_err());
        assert!(MealyAutomaton::with_degree(
            vec!["a".into(), "a".into()],
            1,
            vec![vec![0], vec![0]],
            vec![vec![0], vec![0]]
        )
        .is_err());
        assert!(MealyAutomaton::with_degree(vec!["a".into()], 1, vec![vec![1]], vec![vec![0]]).is_err());
    }

    #[test]
    fn letter_words() {
        let d = catalog::automaton_b().dual();
        assert_eq!(d.parse_letter_word("qw").unwrap(), vec![0, 1]);
        assert_eq!(d.parse_letter_word("q, w r").unwrap(), vec![0, 1, 3]);
        assert_eq!(d.format_letter_word(&[3, 2]), "re");
        assert!(d.parse_letter_word("qz").is_err());
    }
}
