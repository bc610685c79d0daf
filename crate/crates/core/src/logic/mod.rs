//! First-order queries over a numeration system, decided by compilation to
//! synchronized automata.

pub mod ast;
pub mod compile;
pub mod env;
pub mod parser;
pub mod script;

pub use ast::{CmpOp, Formula, Term};
pub use compile::Rel;
pub use env::Environment;
pub use parser::parse_formula;
pub use script::{run_script, Statement, StatementOutcome};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LogicError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unresolved name '{0}'")]
    Unresolved(String),
    #[error("'{name}' expects {want} arguments, got {got}")]
    Arity { name: String, want: usize, got: usize },
    #[error("name '{0}' is already defined")]
    NameCollision(String),
    #[error("'+' and scaled terms need an adder; none is registered for {0}")]
    NoAdder(String),
    #[error("constant multiplier {0} exceeds the unfolding cap of 64")]
    ConstantTooLarge(u64),
    #[error("variable '{0}' is bound twice on one path")]
    DuplicateBinding(String),
    #[error("formula has free variables: {0}")]
    FreeVariables(String),
    #[error("numeration system '{0}' is not the active one")]
    WrongSystem(String),
    #[error("combine: {0}")]
    Combine(String),
    #[error(transparent)]
    Automaton(#[from] crate::automata::AutomatonError),
    #[error(transparent)]
    Numeration(#[from] crate::numeration::NumerationError),
    #[error("{0}")]
    Script(String),
}
