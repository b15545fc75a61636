//! Core of the GDTL implementation: syntax, parsing, printing, the gradual lattice
//! operations, approximate normalization, typechecking, the static sublanguage and the
//! evidence-based runtime.

#![no_std]

extern crate alloc;

pub mod error;
pub mod evidence;
pub mod gradops;
pub mod normalize;
pub mod print;
pub mod sig;
pub mod slang;
pub mod surface;
pub mod syntax;
pub mod typecheck;

pub use error::{NormError, TypeError, TypeErrorKind};
pub use syntax::{Builtin, Canonical, Context, Elim, EvTerm, Evidence, Hint, Level, Term};
