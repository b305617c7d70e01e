//! Grover-based adaptive maze path search.
//!
//! Mazes, path encoding and the classical fitness landscape live in
//! [`maze`], [`codec`] and [`fitness`]; the gate-level oracle in
//! [`circuit`]; exact amplitude dynamics in [`grover`]; the adaptive cutoff
//! loop in [`search`]; analytic cost predictions in [`resources`].

pub mod circuit;
pub mod codec;
pub mod error;
pub mod fitness;
pub mod maze;

pub use error::{Error, Result};
pub mod cli;
pub mod config;
pub mod grover;
pub mod resources;
pub mod search;
pub mod verify;
