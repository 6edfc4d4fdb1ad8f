//! Mealy automata acting on rooted trees: transducer algebra, group words,
//! orbit trees, orbit automata and symmetry classes.
//!
//! Conventions used throughout:
//!
//! * letters are indexed `0..d` internally and shown 1-based in cycle notation;
//! * products compose left to right, `(gh)(v) = h(g(v))`;
//! * the dual automaton has the source letters as states and vice versa.

pub mod analysis;
pub mod automaton;
pub mod canonical;
pub mod catalog;
pub mod element;
pub mod error;
pub mod md;
pub mod minimize;
pub mod orbitaut;
pub mod serialize;
pub mod symmetry;
pub mod words;
pub mod wreath;

pub use automaton::{AutomatonProperties, MealyAutomaton};
pub use canonical::{canonical_form, CanonicalForm};
pub use element::{enumerate_group, ElementAutomaton, FinitenessVerdict};
pub use error::{Error, Result};
pub use md::{md_reduce, MdOperation, MdReductionTrace, MdStep};
pub use minimize::{is_minimal, minimize};
pub use words::{Factor, Group, GroupWord, OrderVerdict};
pub use wreath::{parse_wreath, to_text};
