//! Orienteering with time windows: restricted-version decompositions,
//! modular-instance dynamic programs and the approximation algorithms built
//! on them, together with exact solvers for verification.

pub mod algorithms;
pub mod bench;
pub mod brute;
pub mod decomposition;
pub mod error;
pub mod generate;
pub mod instance;
pub mod io;
pub mod metric;
pub mod modular;
pub mod oracles;
pub mod rational;

pub use error::{Error, Result};
pub use instance::{evaluate_walk, TimeWindow, TwInstance, WaitPolicy, WalkSolution};
pub use metric::{metric_closure, Graph, Metric};
pub use rational::Rational;
