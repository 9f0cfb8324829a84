//! Script front end: statement parsing, name resolution, execution, and
//! report emission for the `semistar` binary.

pub mod emit;
pub mod exec;
pub mod script;
pub mod starexpr;
