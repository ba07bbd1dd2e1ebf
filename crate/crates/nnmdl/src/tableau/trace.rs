//! Trace records and printing of constraints.

use super::{CompletionSet, Constraint, RuleInstance, Tableau};

/// One rule application: the instance, the chosen expansion and the
/// labelled constraints it added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub instance: RuleInstance,
    pub branch: usize,
    pub added: Vec<(usize, Constraint)>,
}

impl Tableau {
    /// Prints a constraint payload, with variables written `v0, v1, …`.
    pub fn render_constraint(&self, c: Constraint) -> String {
        match c {
            Constraint::Formula(f) => self.int.formula_of(f).to_string(),
            Constraint::Concept(k, x) => format!("{}({})", self.int.concept_of(k), self.term_name(x)),
            Constraint::Role(r, x, y) => {
                format!("{}({}, {})", self.role_name(r), self.term_name(x), self.term_name(y))
            }
            Constraint::NegRole(r, x, y) => {
                format!("~{}({}, {})", self.role_name(r), self.term_name(x), self.term_name(y))
            }
        }
    }

    /// Prints a completion set, one `label : constraint` line each.
    pub fn render(&self, s: &CompletionSet) -> String {
        let mut out = String::new();
        for n in 0..s.n_labels() {
            for &c in s.constraints(n) {
                out.push_str(&format!("{n} : {}\n", self.render_constraint(c)));
            }
        }
        out
    }

    /// Prints a trace, one line per added constraint, starting with the
    /// initial constraint.
    pub fn render_trace(&self, steps: &[TraceStep]) -> String {
        let init = self.initialize();
        let mut out = format!("0 : {}\n", self.render_constraint(init.constraints(0)[0]));
        for step in steps {
            let rule = step.instance.rule();
            if step.added.is_empty() {
                out.push_str(&format!("   (no new constraint)  ({rule})\n"));
            }
            for &(n, c) in &step.added {
                out.push_str(&format!("{n} : {}  ({rule})\n", self.render_constraint(c)));
            }
        }
        out
    }
}
