//! Alternating minimization and dualization.

use crate::automaton::MealyAutomaton;
use crate::minimize::minimize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdOperation {
    Minimize,
    Dualize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MdStep {
    pub operation: MdOperation,
    pub states: usize,
    pub letters: usize,
}

#[derive(Debug, Clone)]
pub struct MdReductionTrace {
    pub steps: Vec<MdStep>,
    pub input: crate::automaton::AutomatonProperties,
    pub result: MealyAutomaton,
    pub md_trivial: bool,
}

impl MdReductionTrace {
    /// Whether the trace certifies an infinite group: the input is invertible
    /// and reversible, has two states or two letters, and is not md-trivial.
    pub fn certifies_infinite(&self) -> bool {
        self.input.invertible
            && self.input.reversible
            && (self.input.num_states == 2 || self.input.degree == 2)
            && !self.md_trivial
    }
}

fn step(op: MdOperation, a: &MealyAutomaton) -> MdStep {
    MdStep {
        operation: op,
        states: a.num_states(),
        letters: a.degree(),
    }
}

/// Minimizes, then repeats dual+minimize until the dual of the current
/// (minimal) automaton is itself minimal.
pub fn md_reduce(a: &MealyAutomaton) -> MdReductionTrace {
    let input = a.properties();
    let mut current = minimize(a).0;
    let mut steps = vec![step(MdOperation::Minimize, &current)];
    loop {
        let dual = current.dual();
        steps.push(step(MdOperation::Dualize, &dual));
        let reduced = minimize(&dual).0;
        steps.push(step(MdOperation::Minimize, &reduced));
        if reduced.num_states() == dual.num_states() {
            break;
        }
        current = reduced;
    }
    let md_trivial = current.num_states() == 1 && current.degree() == 1;
    MdReductionTrace {
        steps,
        input,
        result: current,
        md_trivial,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::wreath::parse_wreath;

    #[test]
    fn identity_is_md_trivial() {
        let t = md_reduce(&parse_wreath("x=(x,x)").unwrap());
        assert!(t.md_trivial);
        assert!(!t.certifies_infinite());
        assert_eq!(t.result.num_states(), 1);
        assert_eq!(t.result.degree(), 1);
    }

    #[test]
    fn c_is_not_md_trivial() {
        let t = md_reduce(&catalog::automaton_c());
        assert!(!t.md_trivial);
        assert!(t.certifies_infinite());
        assert_eq!(t.result.num_states(), 4);
        assert_eq!(
            t.steps,
            vec![
                step(MdOperation::Minimize, &catalog::automaton_c()),
                MdStep {
                    operation: MdOperation::Dualize,
                    states: 2,
                    letters: 4
                },
                MdStep {
                    operation: MdOperation::Minimize,
                    states: 2,
                    letters: 4
                },
            ]
        );
    }

    #[test]
    fn adding_machine_collapses() {
        // finite-state but infinite group; md-reduction reaches the trivial pair
        // only for finite groups, so the adding machine must stay nontrivial
        let t = md_reduce(&parse_wreath("a=(e,a)(1,2); e=(e,e)").unwrap());
        assert!(!t.md_trivial);
    }
}
