//! IO, benchmark sweeps and the command-line front end for [`kldist_core`].
//!
//! * [`io`] reads token-count histograms (`# d=<int>` header, then
//!   `token_id,count` lines) and writes result tables.
//! * [`runner`] runs the trials of one cell on several threads and merges
//!   them by trial index, so output never depends on scheduling.
//! * [`sweep`] drives benchmark sweeps and hyperparameter grid searches.
//! * [`cli`] is the `kldist` binary.

pub mod cli;
mod error;
pub mod format;
pub mod io;
pub mod runner;
pub mod sweep;

pub use error::{Error, Result};
