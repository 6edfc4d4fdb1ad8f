//! Wreath-recursion text format.
//!
//! ```text
//! a=(c,b); b=(b,c)
//! c=(a,a)(1,2)
//! ```
//!
//! The i-th tuple entry is the section at input letter i. The trailing
//! disjoint cycles (1-based) give the output permutation; absent means
//! identity. A non-bijective output map is written as an image list
//! `[y1,...,yd]`, which only `to_text` of a non-invertible automaton emits.

use std::collections::HashMap;

use crate::automaton::{is_permutation, MealyAutomaton};
use crate::error::{Error, Result};

struct StateDef {
    name: String,
    sections: Vec<(String, usize)>,
    output: OutputSpec,
}

enum OutputSpec {
    Cycles(Vec<Vec<usize>>),
    Images(Vec<usize>, usize),
}

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_inline_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == ' ' || c == '\t' || c == '\r' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Skips whitespace, newlines and `;` separators; returns whether any separator was seen.
    fn skip_separators(&mut self) -> bool {
        let mut seen = false;
        while let Some(c) = self.peek() {
            if c == ';' || c == '\n' {
                seen = true;
            } else if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
        seen
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        self.skip_inline_ws();
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{ch}`"))
        }
    }

    fn name(&mut self) -> Result<(String, usize)> {
        self.skip_inline_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return self.err("expected a name");
        }
        Ok((self.src[start..self.pos].to_string(), start))
    }

    fn int(&mut self) -> Result<usize> {
        let (tok, pos) = self.name()?;
        tok.parse().map_err(|_| Error::Syntax {
            pos,
            msg: format!("expected an integer, found `{tok}`"),
        })
    }

    fn int_list(&mut self, close: char) -> Result<Vec<usize>> {
        let mut items = vec![self.int()?];
        loop {
            self.skip_inline_ws();
            match self.peek() {
                Some(',') => {
                    self.pos += 1;
                    items.push(self.int()?);
                }
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(items);
                }
                _ => return self.err(format!("expected `,` or `{close}`")),
            }
        }
    }

    fn statedef(&mut self) -> Result<StateDef> {
        let (name, _) = self.name()?;
        self.expect('=')?;
        self.expect('(')?;
        let mut sections = vec![self.name()?];
        loop {
            self.skip_inline_ws();
            match self.peek() {
                Some(',') => {
                    self.pos += 1;
                    sections.push(self.name()?);
                }
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                _ => return self.err("expected `,` or `)` in section tuple"),
            }
        }
        self.skip_inline_ws();
        let at = self.pos;
        let output = match self.peek() {
            Some('[') => {
                self.pos += 1;
                OutputSpec::Images(self.int_list(']')?, at)
            }
            _ => {
                let mut cycles = Vec::new();
                while self.peek() == Some('(') {
                    self.pos += 1;
                    cycles.push(self.int_list(')')?);
                    self.skip_inline_ws();
                }
                OutputSpec::Cycles(cycles)
            }
        };
        Ok(StateDef { name, sections, output })
    }
}

fn cycles_to_row(cycles: &[Vec<usize>], degree: usize) -> Result<Vec<usize>> {
    let mut row: Vec<usize> = (0..degree).collect();
    let mut used = vec![false; degree];
    for cycle in cycles {
        if cycle.len() < 2 {
            return Err(Error::MalformedCycle(format!(
                "cycle {cycle:?} needs at least two points"
            )));
        }
        for &p in cycle {
            if p == 0 || p > degree {
                return Err(Error::MalformedCycle(format!("point {p} outside 1..{degree}")));
            }
            if std::mem::replace(&mut used[p - 1], true) {
                return Err(Error::MalformedCycle(format!(
                    "point {p} repeated; cycles must be disjoint"
                )));
            }
        }
        for (i, &p) in cycle.iter().enumerate() {
            row[p - 1] = cycle[(i + 1) % cycle.len()] - 1;
        }
    }
    Ok(row)
}

/// Parses wreath-recursion text; state order is declaration order.
pub fn parse_wreath(text: &str) -> Result<MealyAutomaton> {
    let mut sc = Scanner { src: text, pos: 0 };
    let mut defs = Vec::new();
    sc.skip_separators();
    while sc.pos < text.len() {
        defs.push(sc.statedef()?);
        sc.skip_inline_ws();
        if sc.pos >= text.len() {
            break;
        }
        if !sc.skip_separators() {
            return sc.err("expected `;` or newline between definitions");
        }
    }
    if defs.is_empty() {
        return sc.err("no state definitions");
    }

    let degree = defs[0].sections.len();
    let mut index = HashMap::new();
    for (i, def) in defs.iter().enumerate() {
        if index.insert(def.name.clone(), i).is_some() {
            return Err(Error::Invalid(format!("state `{}` defined twice", def.name)));
        }
        if def.sections.len() != degree {
            return Err(Error::Arity {
                state: def.name.clone(),
                expected: degree,
                found: def.sections.len(),
            });
        }
    }

    let mut next = Vec::with_capacity(defs.len());
    let mut out = Vec::with_capacity(defs.len());
    for def in &defs {
        let row = def
            .sections
            .iter()
            .map(|(s, _)| index.get(s).copied().ok_or_else(|| Error::UnknownState(s.clone())))
            .collect::<Result<Vec<_>>>()?;
        next.push(row);
        out.push(match &def.output {
            OutputSpec::Cycles(cycles) => cycles_to_row(cycles, degree)?,
            OutputSpec::Images(images, pos) => {
                if images.len() != degree || images.iter().any(|&y| y == 0 || y > degree) {
                    return Err(Error::Syntax {
                        pos: *pos,
                        msg: format!("output list must have {degree} entries in 1..{degree}"),
                    });
                }
                images.iter().map(|y| y - 1).collect()
            }
        });
    }
    MealyAutomaton::with_degree(defs.into_iter().map(|d| d.name).collect(), degree, next, out)
}

/// Disjoint-cycle notation of a permutation row, 1-based, fixed points omitted.
pub fn cycle_notation(row: &[usize]) -> String {
    let mut seen = vec![false; row.len()];
    let mut text = String::new();
    for start in 0..row.len() {
        if seen[start] || row[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut p = start;
        while !seen[p] {
            seen[p] = true;
            cycle.push((p + 1).to_string());
            p = row[p];
        }
        text.push('(');
        text.push_str(&cycle.join(","));
        text.push(')');
    }
    text
}

/// Renders the automaton as wreath-recursion text, one state per line.
///
/// Letter names are not part of the format; `parse_wreath(to_text(a))`
/// reproduces `a` exactly when its letters carry the default names.
pub fn to_text(a: &MealyAutomaton) -> String {
    (0..a.num_states())
        .map(|q| {
            let sections = a
                .next_row(q)
                .iter()
                .map(|&p| a.state_name(p))
                .collect::<Vec<_>>()
                .join(",");
            let row = a.out_row(q);
            let output = if is_permutation(row) {
                cycle_notation(row)
            } else {
                format!(
                    "[{}]",
                    row.iter().map(|y| (y + 1).to_string()).collect::<Vec<_>>().join(",")
                )
            };
            format!("{}=({}){}", a.state_name(q), sections, output)
        })
        .collect::<Vec<_>>()
        .join("\n")
}
