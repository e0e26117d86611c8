pub mod coloring;
pub mod combin;
pub mod dist;
pub mod error;
pub mod events;
pub mod exact;
pub mod graph;
pub mod graph6;
pub mod mc;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
