//! Library surface of the `fairdiv` CLI: wire formats, instance
//! generators, solver dispatch, and the benchmark runner. The binary in
//! `main.rs` is a thin wrapper over [`cli::main_entry`].

pub mod bench;
pub mod cli;
pub mod format;
pub mod gen;
pub mod solve;
