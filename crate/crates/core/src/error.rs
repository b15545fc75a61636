//! Type errors and normalization failures.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::print;
use crate::syntax::{Builtin, Canonical, Context};

/// Internal failures of the compile-time evaluator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormError {
    /// Eliminator reduction or hereditary substitution ran out of budget.
    FuelExhausted,
    /// A non-canonical intermediate appeared; always an implementation defect.
    Defect(String),
}

impl fmt::Display for NormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormError::FuelExhausted => f.write_str("normalization fuel exhausted"),
            NormError::Defect(m) => write!(f, "internal error: {m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeErrorKind {
    Unbound(usize),
    /// A consistency check failed.
    Inconsistent { expected: Canonical, actual: Canonical },
    NotAFunction(Canonical),
    /// The term was used as a type but synthesized this non-universe type.
    NotAType(Canonical),
    LambdaAgainst(Canonical),
    CannotSynthesize(&'static str),
    Arity { builtin: Builtin, expected: usize, got: usize },
    BadMotive(Canonical),
    /// An atomic form at a function type (canonical checking only).
    NotEtaLong,
    /// A canonical form whose shape is not allowed at the expected type.
    Malformed(&'static str),
    Norm(NormError),
}

/// A type error together with the names in scope where it happened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub names: Vec<String>,
    /// 1-based (line, column) of the enclosing declaration, filled in by the driver.
    pub span: Option<(u32, u32)>,
}

impl TypeError {
    pub fn new(kind: TypeErrorKind, ctx: &Context) -> TypeError {
        TypeError { kind, names: ctx.names(), span: None }
    }

    pub fn with_span(mut self, line: u32, column: u32) -> TypeError {
        self.span.get_or_insert((line, column));
        self
    }

    pub fn is_fuel(&self) -> bool {
        matches!(self.kind, TypeErrorKind::Norm(NormError::FuelExhausted))
    }

    /// The failed consistency pair as (expected, actual), if this is a consistency failure.
    pub fn pair(&self) -> Option<(&Canonical, &Canonical)> {
        match &self.kind {
            TypeErrorKind::Inconsistent { expected, actual } => Some((expected, actual)),
            _ => None,
        }
    }

    pub fn message(&self) -> String {
        let show = |c: &Canonical| print::canonical(c, &self.names);
        match &self.kind {
            TypeErrorKind::Unbound(i) => alloc::format!("unbound variable #{i}"),
            TypeErrorKind::Inconsistent { expected, actual } => {
                alloc::format!("type mismatch: expected {}, found {}", show(expected), show(actual))
            }
            TypeErrorKind::NotAFunction(t) => alloc::format!("applying a non-function of type {}", show(t)),
            TypeErrorKind::NotAType(t) => alloc::format!("expected a type, found a term of type {}", show(t)),
            TypeErrorKind::LambdaAgainst(t) => alloc::format!("a function cannot have type {}", show(t)),
            TypeErrorKind::CannotSynthesize(what) => alloc::format!("cannot infer the type of {what}; add an annotation"),
            TypeErrorKind::Arity { builtin, expected, got } => {
                alloc::format!("{} expects {expected} arguments, got {got}", builtin.name())
            }
            TypeErrorKind::BadMotive(t) => alloc::format!("ill-formed motive of type {}", show(t)),
            TypeErrorKind::NotEtaLong => String::from("atomic form at a function type"),
            TypeErrorKind::Malformed(what) => alloc::format!("malformed canonical form: {what}"),
            TypeErrorKind::Norm(e) => alloc::format!("{e}"),
        }
    }
}

impl From<NormError> for TypeErrorKind {
    fn from(e: NormError) -> TypeErrorKind {
        TypeErrorKind::Norm(e)
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((l, c)) = self.span {
            write!(f, "{l}:{c}: ")?;
        }
        f.write_str(&self.message())
    }
}

impl From<NormError> for TypeError {
    fn from(e: NormError) -> TypeError {
        TypeError { kind: TypeErrorKind::Norm(e), names: Vec::new(), span: None }
    }
}
