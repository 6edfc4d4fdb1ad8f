use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("state `{state}` has {found} sections, expected {expected}")]
    Arity {
        state: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("malformed cycle: {0}")]
    MalformedCycle(String),
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error("automaton is not invertible")]
    NotInvertible,
    #[error("letter {letter} out of range for degree {degree}")]
    LetterOutOfRange { letter: usize, degree: usize },
    #[error("state {state} out of range for {count} states")]
    StateOutOfRange { state: usize, count: usize },
    #[error("words belong to different automata")]
    MismatchedAutomata,
    #[error("operation requires a binary alphabet, got degree {0}")]
    DegreeNot2(usize),
    #[error("level {level} has {size} vertices, over the limit of {limit}")]
    LevelTooLarge { level: usize, size: u128, limit: usize },
    #[error("maximum transitivity level not determined within cap {0}")]
    TransitivityLevelUnknown(usize),
    #[error("orbit representative has length {found}, expected {expected}")]
    WrongOrbitLevel { expected: usize, found: usize },
    #[error("element does not fix the vertex")]
    DoesNotFixVertex,
    #[error("orbital tree level {0} is not a single orbit")]
    TransitivityFailed(usize),
    #[error("no vertex with nontrivial root action on orbital tree level {0}")]
    NoWitness(usize),
    #[error("expected exactly one nontrivial orbit automaton, found {0}")]
    AmbiguousNontrivialOrbit(usize),
    #[error("json: {0}")]
    Json(String),
}
