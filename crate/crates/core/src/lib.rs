//! Secure linear network codes on single-source multicast DAGs over prime
//! fields.
//!
//! A [`LinearNetworkCode`] fixes local kernels at every node; a
//! [`SecureCodeSpec`] adds an invertible source matrix `Q` and a
//! (rate, level) split so that any `level` wiretapped edges learn nothing
//! about the message. The [`construct`] module builds such matrices while
//! leaving every relay kernel untouched, so one deployed network serves a
//! whole family of rates and levels. [`secure`] checks them two ways: a
//! subspace criterion and brute-force enumeration.
//!
//! See `examples/` for one runnable program per capability.

pub mod cli;
pub mod code;
pub mod construct;
pub mod error;
mod flow;
pub mod format;
pub mod gen;
pub mod gf;
pub mod linalg;
pub mod network;
pub mod secure;
#[cfg(test)]
mod testutil;

pub use code::{CodeFamily, LinearNetworkCode, SecureCodeSpec};
pub use error::{Error, Result};
pub use gf::{Elem, Field};
pub use linalg::{Matrix, Subspace, Vector};
pub use network::{CutProfile, EdgeSet, Network, NetworkBuilder};
