pub mod circuits;
pub mod design;
pub mod error;
pub mod metrics;
pub mod qmath;
pub mod security;
pub mod seed;

pub use error::{Error, Result};
