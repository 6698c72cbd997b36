//! The k-firefighter process on graphs: exact and heuristic solvers, surviving
//! rates, the discharging bound on sparse graphs, random biregular graphs
//! from the pairing model, and their expansion properties.

pub mod analysis;
pub mod discharging;
pub mod engine;
pub mod error;
pub mod expansion;
pub mod graph;
pub mod io;
pub mod pairing;
pub mod rational;
pub mod strategies;

pub use error::{Error, Result};
pub use graph::{Graph, Side};
