//! Named automata used throughout the tests and the command line.

use crate::automaton::MealyAutomaton;
use crate::wreath::parse_wreath;

/// Three-state bireversible automaton generating a free product of three
/// groups of order two.
pub const BELLATERRA: &str = "a=(c,b); b=(b,c); c=(a,a)(1,2)";

/// Four-state bireversible automaton on states q, w, e, r.
pub const AUTOMATON_B: &str = "q=(w,w); w=(e,q)(1,2); e=(r,r)(1,2); r=(q,e)(1,2)";

/// Four-state bireversible automaton on states a, b, c, d.
pub const AUTOMATON_C: &str = "a=(d,d)(1,2); b=(c,c); c=(a,b); d=(b,a)";

pub fn bellaterra() -> MealyAutomaton {
    parse_wreath(BELLATERRA).expect("valid fixture")
}

pub fn automaton_b() -> MealyAutomaton {
    parse_wreath(AUTOMATON_B).expect("valid fixture")
}

pub fn automaton_c() -> MealyAutomaton {
    parse_wreath(AUTOMATON_C).expect("valid fixture")
}

pub fn by_name(name: &str) -> Option<MealyAutomaton> {
    match name.to_ascii_lowercase().as_str() {
        "bellaterra" | "b3" => Some(bellaterra()),
        "b" | "h" => Some(automaton_b()),
        "c" | "g" => Some(automaton_c()),
        _ => None,
    }
}
