//! Browser bindings: satisfiability checking, the pantheon of logics and
//! model checking, each returning JSON text for the page to render.

use nnmdl::logics::{enumerate_pantheon, LogicSpec};
use nnmdl::semantics::{formula_holds, NeighbourhoodModel};
use nnmdl::syntax::{parse_formula, Agent};
use nnmdl::tableau::{solve, Verdict};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Rule applications allowed per check; lower than the CLI default so the
/// page stays responsive.
const PAGE_BUDGET: u64 = 200_000;

fn parse_agents(agents: u32) -> Result<Agent, String> {
    if agents == 0 {
        return Err("at least one agent is required".into());
    }
    Ok(agents as Agent)
}

/// Decides `formula` under `logic` and returns the verdict, the run's
/// statistics and, when satisfiable, the extracted model.
pub fn check_json(formula: &str, logic: &str, agents: u32) -> Result<Value, String> {
    let agents = parse_agents(agents)?;
    let spec: LogicSpec = logic.parse().map_err(|e| format!("{e}"))?;
    let phi = parse_formula(formula, agents).map_err(|e| format!("{e}"))?;
    let sol = solve(&phi, spec, PAGE_BUDGET).map_err(|e| format!("{e}"))?;
    let stats = json!({
        "applications": sol.stats.applications,
        "branches": sol.stats.branches,
        "labels": sol.stats.max_labels,
    });
    Ok(match sol.verdict {
        Verdict::Sat { model, .. } => {
            let model: Value = serde_json::from_str(&model.to_json()).map_err(|e| e.to_string())?;
            json!({ "verdict": "sat", "formula": phi.to_string(), "stats": stats, "model": model })
        }
        Verdict::Unsat => json!({ "verdict": "unsat", "formula": phi.to_string(), "stats": stats }),
        Verdict::BudgetExceeded(_) => json!({ "verdict": "budget", "formula": phi.to_string(), "stats": stats }),
    })
}

/// The canonical logics with their class members and the logics they imply.
pub fn pantheon_json() -> Value {
    let all = enumerate_pantheon();
    let rows: Vec<Value> = all
        .iter()
        .map(|s| {
            let members: Vec<String> = s.class_members().iter().map(|l| l.to_string()).collect();
            let below: Vec<String> = all
                .iter()
                .filter(|t| *t != s && s.implies(t))
                .map(|t| t.to_string())
                .collect();
            json!({ "spec": s.to_string(), "members": members, "implies": below })
        })
        .collect();
    Value::Array(rows)
}

/// Evaluates `formula` at `world` of a neighbourhood model in JSON form.
pub fn model_check_json(model: &str, world: usize, formula: &str) -> Result<Value, String> {
    let m = NeighbourhoodModel::from_json(model).map_err(|e| format!("{e}"))?;
    let phi = parse_formula(formula, m.n_agents.max(1)).map_err(|e| format!("{e}"))?;
    let holds = formula_holds(&m, world, &phi).map_err(|e| format!("{e}"))?;
    Ok(json!({ "holds": holds, "world": world, "formula": phi.to_string() }))
}

fn to_js(v: Result<Value, String>) -> Result<String, JsValue> {
    v.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn check(formula: &str, logic: &str, agents: u32) -> Result<String, JsValue> {
    to_js(check_json(formula, logic, agents))
}

#[wasm_bindgen]
pub fn pantheon() -> String {
    pantheon_json().to_string()
}

#[wasm_bindgen(js_name = modelCheck)]
pub fn model_check(model: &str, world: usize, formula: &str) -> Result<String, JsValue> {
    to_js(model_check_json(model, world, formula))
}
