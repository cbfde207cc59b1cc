//! Fixtures shared by unit tests.

use crate::certificate::{parse_term, parse_trs};
use crate::term::{Position, Term, Trs};

pub(crate) fn ground_trs() -> Trs {
    parse_trs("(RULES a -> b a -> d b -> a c -> a c -> b)").unwrap()
}

pub(crate) fn dup_trs() -> Trs {
    parse_trs("(VAR x)(RULES a -> b f(a,b) -> f(a,a) f(b,a) -> f(a,a) f(a,a) -> c g(x) -> f(x,x))")
        .unwrap()
}

/// Parses a term where `x`, `y`, `z` and their primed forms are variables.
pub(crate) fn t(s: &str) -> Term {
    parse_term(s, &["x", "y", "z", "x'", "y'", "z'"]).unwrap()
}

pub(crate) fn p(v: &[usize]) -> Position {
    Position::from(v.to_vec())
}
