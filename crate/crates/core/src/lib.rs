#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod bouncer;
pub mod config;
pub mod error;
pub mod expansion;
pub mod grid;
pub mod infomeasures;
pub mod pipeline;
pub mod plot;
pub mod revival;
pub mod ring;
pub mod specfun;

pub use error::{Error, Result};
