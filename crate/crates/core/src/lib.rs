pub mod cli;
pub mod error;
pub mod geometry;
pub mod herglotz;
pub mod means;
pub mod quadrature;
pub mod series;
pub mod verify;
pub mod zoo;

pub use error::{Error, Result};
pub use series::{EvaluatorKind, HolomorphicMap, PointEvaluator, TaylorSeries, C64};
