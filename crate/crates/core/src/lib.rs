//! Remote projections onto families of closed convex sets.
//!
//! A sequence of *remote projections* starts at `x0` and at step `n` projects
//! the current iterate onto a set whose distance is at least `t_n` times the
//! largest distance over the whole family. `t_n = 1` gives the remotest
//! projection; smaller weakness parameters relax the choice. On a family of
//! hyperplanes `g^⊥` the iteration is exactly the Weak Greedy Algorithm.
//!
//! The crate is organised as
//!
//! - [`hilbert`]: dense vectors and the inner-product arithmetic,
//! - [`sets`]: convex primitives with exact projection and distance oracles,
//! - [`schedule`]: weakness-parameter sequences and their analyzers,
//! - [`engine`]: the projection iteration and the weak greedy algorithm,
//! - [`diagnostics`]: per-step convergence inequalities and verdicts,
//! - [`scenarios`]: reproducible constructions (stripe example, cap lines, ...),
//! - [`io`] and [`cli`]: CSV/JSON export and the command-line front end.
//!
//! ```
//! use remoteproj::scenarios;
//!
//! let cfg = scenarios::stripe_example();
//! let trace = cfg.run().unwrap();
//! assert_eq!(trace.steps.len(), 2);
//! assert!((trace.final_point[1] - 1.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod diagnostics;
pub mod engine;
mod error;
pub mod hilbert;
pub mod io;
pub mod scenarios;
pub mod schedule;
pub mod sets;

pub use crate::engine::{RemoteProjection, SelectionPolicy, StepRecord, StopReason, Trace, WeakGreedy};
pub use crate::error::{Error, Result};
pub use crate::hilbert::Vector;
pub use crate::scenarios::ScenarioConfig;
pub use crate::schedule::Schedule;
pub use crate::sets::ConvexSet;
