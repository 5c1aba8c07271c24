//! Concentration inequalities on the multislice and for sampling without
//! replacement, with exhaustive verification tools.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cdist;
pub mod error;
pub mod fi;
pub mod harness;
pub mod io;
pub mod rng;
pub mod sampling;
pub mod space;
pub mod spec;
pub mod statistics;
pub mod tensor;
pub mod verdict;

pub use error::{Error, Result};
pub use rng::{RandomStream, StreamFactory};
pub use spec::{Configuration, MultisliceSpec, DEFAULT_ENUMERATION_CAP};
pub use verdict::Verdict;
