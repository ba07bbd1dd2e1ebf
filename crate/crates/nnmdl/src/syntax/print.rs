//! Printing in the concrete syntax accepted by the parser.

use super::{Concept, Formula};
use std::fmt;

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Name(n) => write!(f, "{n}"),
            Concept::Top => write!(f, "top"),
            Concept::Bot => write!(f, "bot"),
            Concept::Not(c) => write!(f, "~{c}"),
            Concept::And(a, b) => write!(f, "({a} & {b})"),
            Concept::Or(a, b) => write!(f, "({a} | {b})"),
            Concept::Exists(r, c) => write!(f, "some {r}.{c}"),
            Concept::Forall(r, c) => write!(f, "all {r}.{c}"),
            Concept::Box(i, c) => write!(f, "[{i}]{c}"),
            Concept::Diamond(i, c) => write!(f, "<{i}>{c}"),
        }
    }
}

/// Prints a formula operand, grouping assertions so that a preceding
/// formula-level operator is not read as part of the asserted concept.
struct Operand<'a>(&'a Formula);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Formula::Assert(..) | Formula::Role(..) => write!(f, "({})", self.0),
            other => write!(f, "{other}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Sub(a, b) => write!(f, "({a} sub {b})"),
            Formula::Assert(c, a) => write!(f, "{c}({a})"),
            Formula::Role(r, a, b) => write!(f, "{r}({a}, {b})"),
            Formula::NegRole(r, a, b) => write!(f, "~{r}({a}, {b})"),
            Formula::Not(g) => write!(f, "~{}", Operand(g)),
            Formula::And(a, b) => write!(f, "({a} /\\ {b})"),
            Formula::Or(a, b) => write!(f, "({a} \\/ {b})"),
            Formula::Box(i, g) => write!(f, "[{i}]{}", Operand(g)),
            Formula::Diamond(i, g) => write!(f, "<{i}>{}", Operand(g)),
        }
    }
}
