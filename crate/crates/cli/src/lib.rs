//! File formats, Graphviz output and command implementations behind the
//! `pfdual` binary.

pub mod commands;
pub mod dot;
pub mod formats;
