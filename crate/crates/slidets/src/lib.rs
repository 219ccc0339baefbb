//! Linear-time checking of sliding time-series constraints, backed by an exact
//! automata algebra that classifies signature patterns and infers the properties
//! licensing each window-contribution equation.

pub mod automata;
pub mod checker;
pub mod classify;
pub mod error;
pub mod patterns;
pub mod reformulate;
pub mod regex;
pub mod series;

pub use automata::{Automaton, Letter};
pub use error::{Error, Result};
pub use regex::{parse, RegexAst};
