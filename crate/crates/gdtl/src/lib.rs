//! Driver, output formats and property harness for GDTL.

pub mod driver;
pub mod harness;
pub mod output;
