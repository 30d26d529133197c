//! Command-line driver for `divlaw-core`: CSV tables of the special
//! functions and the limit law, the empirical scan over `n <= x`, and the
//! verification suite.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod config;
pub mod output;
pub mod scan;
pub mod verify;
