//! Human-readable and JSON renderings of driver outcomes.

use serde::Serialize;

use crate::driver::{Failure, Outcome, Success, TraceStep};

#[derive(Serialize)]
#[serde(untagged)]
pub enum ErrorInfo {
    Meet { left: String, right: String },
    Message {
        message: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        line: Option<u32>,
        #[serde(skip_serializing_if = "Option::is_none")]
        column: Option<u32>,
    },
}

#[derive(Serialize)]
pub struct TraceEntry {
    pub rule: &'static str,
    pub state: String,
}

/// The JSON object printed in `--json` mode; absent fields are omitted.
#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JsonResult {
    pub status: &'static str,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub ty: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuel_used: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceEntry>>,
}

impl JsonResult {
    fn new(status: &'static str) -> JsonResult {
        JsonResult { status, ty: None, value: None, error: None, steps: None, fuel_used: None, trace: None }
    }
}

fn message(message: String, pos: Option<(u32, u32)>) -> Option<ErrorInfo> {
    Some(ErrorInfo::Message { message, line: pos.map(|p| p.0), column: pos.map(|p| p.1) })
}

fn trace_entries(trace: &Option<Vec<TraceStep>>) -> Option<Vec<TraceEntry>> {
    trace.as_ref().map(|t| t.iter().map(|t| TraceEntry { rule: t.rule, state: t.state.clone() }).collect())
}

/// Status string for each outcome category.
pub fn status(outcome: &Outcome) -> &'static str {
    match outcome {
        Ok(_) => "ok",
        Err(f) => match f {
            Failure::Read(_) | Failure::Parse(_) => "parse-error",
            Failure::Type(_) | Failure::NoMain | Failure::StaticType { .. } => "type-error",
            Failure::Runtime { .. } => "err",
            Failure::Stuck { .. } => "stuck",
            Failure::NormFuel { .. } | Failure::RunFuel { .. } => "fuel",
        },
    }
}

pub fn to_json(outcome: &Outcome) -> JsonResult {
    let mut j = JsonResult::new(status(outcome));
    match outcome {
        Ok(Success::Checked { ty }) => j.ty = Some(ty.clone()),
        Ok(Success::Normalized { ty, value }) => {
            j.ty = Some(ty.clone());
            j.value = Some(value.clone());
        }
        Ok(Success::Elaborated { ty, term }) => {
            j.ty = Some(ty.clone());
            j.value = Some(term.clone());
        }
        Ok(Success::Ran { ty, value, steps, trace }) => {
            j.ty = Some(ty.clone());
            j.value = Some(value.clone());
            j.steps = Some(*steps);
            j.trace = trace_entries(trace);
        }
        Err(Failure::Read(m)) => j.error = message(m.clone(), None),
        Err(Failure::Parse(ds)) => {
            let d = &ds[0];
            j.error = message(d.message.clone(), Some((d.line, d.column)));
        }
        Err(Failure::NoMain) => j.error = message("no `main` declaration".into(), None),
        Err(Failure::Type(e)) => j.error = message(e.message(), e.span),
        Err(Failure::StaticType { message: m, line, column }) => j.error = message(m.clone(), Some((*line, *column))),
        Err(Failure::NormFuel { budget, .. }) => j.fuel_used = Some(*budget),
        Err(Failure::Runtime { left, right, steps, trace }) => {
            j.error = Some(ErrorInfo::Meet { left: left.clone(), right: right.clone() });
            j.steps = Some(*steps);
            j.trace = trace_entries(trace);
        }
        Err(Failure::RunFuel { used, trace }) => {
            j.fuel_used = Some(*used);
            j.trace = trace_entries(trace);
        }
        Err(Failure::Stuck { state, steps }) => {
            j.error = message(format!("evaluation stuck at {state}"), None);
            j.steps = Some(*steps);
        }
    }
    j
}

pub fn json_string(outcome: &Outcome) -> String {
    serde_json::to_string(&to_json(outcome)).expect("results serialize")
}

/// Text for stdout and stderr in human mode.
pub fn human(path: &str, outcome: &Outcome) -> (String, String) {
    // One `rule | term` line per step, then the final status.
    let trace_text = |trace: &Option<Vec<TraceStep>>, status: &str| -> String {
        match trace {
            Some(t) => t.iter().map(|t| format!("{} | {}\n", t.rule, t.state)).chain([format!("{status}\n")]).collect(),
            None => String::new(),
        }
    };
    match outcome {
        Ok(Success::Checked { ty }) => (format!("{ty}\n"), String::new()),
        Ok(Success::Normalized { value, .. }) => (format!("{value}\n"), String::new()),
        Ok(Success::Elaborated { term, .. }) => (format!("{term}\n"), String::new()),
        Ok(Success::Ran { value, trace, .. }) => (format!("{}{value}\n", trace_text(trace, "VALUE")), String::new()),
        Err(f) => {
            let (out, err) = match f {
                Failure::Read(m) => (String::new(), format!("{path}: error: {m}")),
                Failure::Parse(ds) => {
                    (String::new(), ds.iter().map(|d| format!("{path}:{d}")).collect::<Vec<_>>().join("\n"))
                }
                Failure::NoMain => (String::new(), format!("{path}: error: no `main` declaration")),
                Failure::Type(e) => {
                    let (l, c) = e.span.unwrap_or((1, 1));
                    (String::new(), format!("{path}:{l}:{c}: error: {}", e.message()))
                }
                Failure::StaticType { message, line, column } => {
                    (String::new(), format!("{path}:{line}:{column}: error: {message}"))
                }
                Failure::NormFuel { budget, line, column } => (
                    String::new(),
                    format!("{path}:{line}:{column}: error: normalization fuel exhausted (budget {budget})"),
                ),
                Failure::Runtime { left, right, trace, .. } => {
                    (trace_text(trace, "ERR"), format!("runtime type error: ⟨{left}⟩ ⊓ ⟨{right}⟩ undefined"))
                }
                Failure::RunFuel { used, trace } => (trace_text(trace, "FUEL"), format!("fuel exhausted after {used} steps")),
                Failure::Stuck { state, .. } => (String::new(), format!("evaluation stuck at {state}")),
            };
            (out, err + "\n")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_instances() {
        let ok: Outcome = Ok(Success::Checked { ty: "Nat".into() });
        assert_eq!(json_string(&ok), r#"{"status":"ok","type":"Nat"}"#);
        let err: Outcome = Err(Failure::Runtime {
            left: "Vec Nat 0".into(),
            right: "Vec Nat 1".into(),
            steps: 7,
            trace: None,
        });
        assert_eq!(
            json_string(&err),
            r#"{"status":"err","error":{"left":"Vec Nat 0","right":"Vec Nat 1"},"steps":7}"#
        );
        let fuel: Outcome = Err(Failure::RunFuel { used: 1000, trace: None });
        assert_eq!(json_string(&fuel), r#"{"status":"fuel","fuelUsed":1000}"#);
    }

    #[test]
    fn human_runtime_error() {
        let err: Outcome = Err(Failure::Runtime {
            left: "Vec Nat 0".into(),
            right: "Vec Nat 1".into(),
            steps: 7,
            trace: None,
        });
        let (out, e) = human("f.gdtl", &err);
        assert!(out.is_empty());
        assert_eq!(e, "runtime type error: ⟨Vec Nat 0⟩ ⊓ ⟨Vec Nat 1⟩ undefined\n");
    }
}
