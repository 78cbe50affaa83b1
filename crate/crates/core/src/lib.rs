//! locclab simulates property inference on small bipartite systems.
//!
//! The library has three layers:
//!
//! * dense complex linear algebra for bipartite Hilbert spaces
//!   ([`hilbert`]), property assignment and von Neumann measurement
//!   ([`properties`]), and general quantum operations in Kraus form
//!   ([`operation`]);
//! * LOCC protocol trees with classical-communication branching
//!   ([`locc`]) and ensemble-level analysis: orthogonality and
//!   entanglement census, basis-spoiling scans, and the holism verdict
//!   report ([`analysis`]);
//! * finite classical product spaces with an exhaustive proof that every
//!   global property is locally inferable ([`classical`]).
//!
//! The [`cli`] module backs the `locclab` binary: ensemble / protocol file
//! parsing, report formatting, and the demo commands.

pub mod analysis;
pub mod classical;
pub mod cli;
pub mod error;
pub mod hilbert;
pub mod locc;
pub mod operation;
mod optimize;
pub mod properties;
pub mod sample;
pub mod tol;

pub use error::{Error, Result};
pub use hilbert::{CMatrix, DensityOperator, Observable, Party, StateVector};
