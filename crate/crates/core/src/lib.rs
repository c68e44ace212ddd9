pub mod edmonds;
pub mod error;
pub mod ffield;
pub mod harness;
pub mod matrix;
pub mod params;
pub mod pmsearch;
pub mod mixedrank;
pub mod tape;
pub mod tutte;

pub use error::{Error, Result};
pub use params::{RunConfig, ScanStrategy};
