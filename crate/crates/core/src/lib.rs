pub mod config;
pub mod error;
pub mod exec;
pub mod field;
pub mod interval;
pub mod pipeline;
pub mod poly;
pub mod quaternion;
pub mod search;
pub mod sieve;
pub mod splitting;
pub mod volume;

pub use error::{Error, Result};
