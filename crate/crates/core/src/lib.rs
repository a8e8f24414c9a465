//! Exact Fourier transforms of orbit indicator functions on the
//! prehomogeneous vector spaces `sym3-2`, `sym2-2`, `sym2-3`, `2sym2-2` and
//! `2sym2-3` over prime fields.

pub mod census;
pub mod counts;
pub mod error;
pub mod exactla;
pub mod exec;
pub mod ffield;
pub mod ftsolver;
pub mod paperdata;
pub mod poly;
pub mod reps;
pub mod symbolic;

pub use error::{Error, Result};
