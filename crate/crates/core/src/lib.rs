//! Numerical laboratory for tracial matrix algebras: conditional
//! expectations, Schatten and vector-valued sequence norms, checkers for
//! Stein-type martingale inequalities, and a search engine for extremal
//! ratios.

pub mod error;
pub mod expectation;
pub mod inequality;
pub mod opcore;
pub mod runner;
pub mod search;
pub mod seqnorm;

pub use error::{Error, Result};
