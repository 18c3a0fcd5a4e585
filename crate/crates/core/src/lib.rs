//! Simulation and limit theory of the N-interactions preferential
//! attachment graph.
//!
//! Each step either brings in a new vertex that interacts with `N-1` old
//! ones (probability `p`) or lets `N` old vertices interact. Participants
//! are picked either in proportion to the weight of an existing clique or
//! uniformly at random. Every interaction completes the clique among its
//! participants and raises the weights of the participants, the clique and
//! its `(N-1)`-subcliques by one.
//!
//! * [`params`]: the inputs `(N, p, q, r)` and the constants
//!   `alpha1, alpha2, alpha, beta` they determine.
//! * [`simulator`]: the evolving graph and its counting snapshots.
//! * [`limits`]: the limiting joint law `x_{d,w}` of degree and weight, its
//!   marginals, moments and asymptotics.
//! * [`stats`]: empirical-versus-limit comparison and power-law fits.
//! * [`io`] and [`cli`]: CSV/JSON artifacts and the `ncg` command.
//!
//! ```
//! use ncg::params::ModelParams;
//! use ncg::limits::xdw_table;
//!
//! let params = ModelParams::new(4, 0.5, 0.5, 0.5)?;
//! let c = params.derive_constants()?;
//! let table = xdw_table(&c, 4, 10);
//! assert_eq!(table.get(5, 2), 0.0);
//! assert!((table.get(3, 1) - 1.0 / 4.9375).abs() < 1e-15);
//! # Ok::<(), ncg::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod io;
pub mod limits;
pub mod params;
pub mod simulator;
mod special;
pub mod stats;

pub use error::{Error, Result};
pub use params::{DerivedConstants, ModelParams, ValidationTier};
