//! Runs a `.gdtl` file through the pipeline for one command.

use gdtl_core::evidence::{run_traced, RunOutcome};
use gdtl_core::normalize::{norm_synth, Fuel};
use gdtl_core::slang;
use gdtl_core::surface::{parse_file, Diagnostic, SourceFile};
use gdtl_core::syntax::{Canonical, Context, Term};
use gdtl_core::typecheck::{elab_synth, synth};
use gdtl_core::TypeError;

pub const DEFAULT_RUN_FUEL: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Norm,
    Elab,
    Run,
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Step budget for `run`.
    pub fuel: u64,
    /// Eliminator-reduction budget for normalization during checking.
    pub norm_fuel: u64,
    pub trace: bool,
    /// Use the static language instead of the gradual one.
    pub static_lang: bool,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            fuel: DEFAULT_RUN_FUEL,
            norm_fuel: gdtl_core::normalize::DEFAULT_NORM_FUEL,
            trace: false,
            static_lang: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: &'static str,
    pub state: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Success {
    Checked { ty: String },
    Normalized { ty: String, value: String },
    Elaborated { ty: String, term: String },
    Ran { ty: String, value: String, steps: u64, trace: Option<Vec<TraceStep>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    Read(String),
    Parse(Vec<Diagnostic>),
    NoMain,
    Type(TypeError),
    /// Static-language rejection, with the declaration position.
    StaticType { message: String, line: u32, column: u32 },
    /// Normalization during checking ran out of budget.
    NormFuel { budget: u64, line: u32, column: u32 },
    Runtime { left: String, right: String, steps: u64, trace: Option<Vec<TraceStep>> },
    RunFuel { used: u64, trace: Option<Vec<TraceStep>> },
    Stuck { state: String, steps: u64 },
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Type(_) | Failure::NoMain | Failure::StaticType { .. } => 1,
            Failure::Runtime { .. } | Failure::Stuck { .. } => 2,
            Failure::Read(_) | Failure::Parse(_) => 3,
            Failure::NormFuel { .. } | Failure::RunFuel { .. } => 4,
        }
    }
}

pub type Outcome = Result<Success, Failure>;

fn parse(path: &str, src: &str) -> Result<SourceFile, Failure> {
    parse_file(path, src).map_err(Failure::Parse)
}

fn type_failure(e: TypeError, line: u32, column: u32, budget: u64) -> Failure {
    if e.is_fuel() {
        Failure::NormFuel { budget, line, column }
    } else {
        Failure::Type(e.with_span(line, column))
    }
}

/// Checks every declaration in order, so errors point at the first bad one.
fn check_decls(file: &SourceFile, opts: &Options) -> Result<(Term, Canonical), Failure> {
    let empty = Context::new();
    let mut main = None;
    for d in &file.decls {
        let t = d.inlined();
        let ty = synth(&empty, &t, &mut Fuel::new(opts.norm_fuel))
            .map_err(|e| type_failure(e, d.line, d.column, opts.norm_fuel))?;
        if d.name == "main" {
            main = Some((t, ty));
        }
    }
    main.ok_or(Failure::NoMain)
}

pub fn process(path: &str, src: &str, cmd: Command, opts: &Options) -> Outcome {
    let file = parse(path, src)?;
    if opts.static_lang {
        return process_static(&file, cmd, opts);
    }
    let (main, ty) = check_decls(&file, opts)?;
    let (line, column) = file.main.as_ref().map(|d| (d.line, d.column)).unwrap_or((1, 1));
    let ty_s = ty.to_string();
    match cmd {
        Command::Check => Ok(Success::Checked { ty: ty_s }),
        Command::Norm => {
            let (nf, _) = norm_synth(&Context::new(), &main, &mut Fuel::new(opts.norm_fuel))
                .map_err(|e| type_failure(e, line, column, opts.norm_fuel))?;
            Ok(Success::Normalized { ty: ty_s, value: nf.to_string() })
        }
        Command::Elab => {
            let (e, _) = elab_synth(&Context::new(), &main, &mut Fuel::new(opts.norm_fuel))
                .map_err(|e| type_failure(e, line, column, opts.norm_fuel))?;
            Ok(Success::Elaborated { ty: ty_s, term: e.to_string() })
        }
        Command::Run => {
            let (e, _) = elab_synth(&Context::new(), &main, &mut Fuel::new(opts.norm_fuel))
                .map_err(|e| type_failure(e, line, column, opts.norm_fuel))?;
            let mut steps_seen = Vec::new();
            let report = run_traced(&e, opts.fuel, |rule, state| {
                if opts.trace {
                    steps_seen.push(TraceStep { rule, state: state.to_string() });
                }
            });
            let trace = opts.trace.then_some(steps_seen);
            let steps = report.steps;
            match report.outcome {
                RunOutcome::Value(v) => Ok(Success::Ran { ty: ty_s, value: v.erase().to_string(), steps, trace }),
                RunOutcome::Err(f) => {
                    Err(Failure::Runtime { left: f.left.to_string(), right: f.right.to_string(), steps, trace })
                }
                RunOutcome::FuelExhausted(_) => Err(Failure::RunFuel { used: steps, trace }),
                RunOutcome::Stuck(t) => Err(Failure::Stuck { state: t.to_string(), steps }),
            }
        }
    }
}

fn process_static(file: &SourceFile, cmd: Command, opts: &Options) -> Outcome {
    let empty = Context::new();
    let mut main = None;
    for d in &file.decls {
        let t = d.inlined();
        let r = slang::snorm_synth(&empty, &t).map_err(|e| Failure::StaticType {
            message: e.0,
            line: d.line,
            column: d.column,
        })?;
        if d.name == "main" {
            main = Some((t, r));
        }
    }
    let (t, (nf, ty)) = main.ok_or(Failure::NoMain)?;
    let ty = ty.to_string();
    match cmd {
        Command::Check => Ok(Success::Checked { ty }),
        Command::Norm => Ok(Success::Normalized { ty, value: nf.to_string() }),
        Command::Elab => Ok(Success::Elaborated { ty, term: slang::embed_static(&t).to_string() }),
        Command::Run => {
            let mut steps = 0;
            let mut cur = t;
            let mut trace = opts.trace.then(Vec::new);
            loop {
                match slang::sstep(&cur) {
                    slang::SStep::Value => {
                        return Ok(Success::Ran { ty, value: cur.to_string(), steps, trace });
                    }
                    slang::SStep::Stuck => return Err(Failure::Stuck { state: cur.to_string(), steps }),
                    slang::SStep::Stepped(next) => {
                        if steps >= opts.fuel {
                            return Err(Failure::RunFuel { used: steps, trace });
                        }
                        steps += 1;
                        if let Some(t) = trace.as_mut() {
                            t.push(TraceStep { rule: "StaticStep", state: next.to_string() });
                        }
                        cur = next;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "head : (A : Type 1) -> (n : Nat) -> Vec A (n + 1) -> A\n\
                        head = \\A n v. vecElim A (n + 1) (\\k w. A) ? (\\k h t r. h) v\n";

    #[test]
    fn head_of_nil() {
        let src = format!("{HEAD}main = head Nat 0 (Nil Nat :: Vec Nat ?)\n");
        let opts = Options::default();
        assert_eq!(process("t.gdtl", &src, Command::Check, &opts), Ok(Success::Checked { ty: "Nat".into() }));
        match process("t.gdtl", &src, Command::Run, &opts) {
            Err(Failure::Runtime { left, right, .. }) => assert_eq!((left.as_str(), right.as_str()), ("Vec Nat 0", "Vec Nat 1")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn error_positions() {
        let src = format!("{HEAD}bad : Nat = Nil Nat\nmain = 0\n");
        match process("t.gdtl", &src, Command::Check, &Options::default()) {
            Err(Failure::Type(e)) => assert_eq!(e.span, Some((3, 1))),
            other => panic!("{other:?}"),
        }
        let r = process("t.gdtl", "x = 0\n", Command::Check, &Options::default());
        assert_eq!(r.unwrap_err().exit_code(), 1);
        let r = process("t.gdtl", "main = (\n", Command::Check, &Options::default());
        assert_eq!(r.unwrap_err().exit_code(), 3);
    }

    #[test]
    fn static_route() {
        let opts = Options { static_lang: true, ..Options::default() };
        let src = "id : (A : Type 1) -> A -> A = \\A x. x\nmain = id Nat 2\n";
        assert_eq!(process("t.gdtl", src, Command::Check, &opts), Ok(Success::Checked { ty: "Nat".into() }));
        match process("t.gdtl", src, Command::Run, &opts) {
            Ok(Success::Ran { value, .. }) => assert_eq!(value, "2"),
            other => panic!("{other:?}"),
        }
        let r = process("t.gdtl", "main = (\\x. x) :: ?\n", Command::Check, &opts);
        assert_eq!(r.unwrap_err().exit_code(), 1);
    }
}
