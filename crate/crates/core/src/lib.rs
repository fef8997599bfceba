//! Average secrecy capacity of RIS-aided vehicular links.

pub mod capacity;
pub mod channel;
pub mod error;
pub mod exec;
pub mod mgf;
pub mod montecarlo;
pub mod output;
pub mod quadrature;
pub mod specfun;
pub mod sweep;

pub use error::{Error, Result};
pub use exec::Execution;
