//! Homological index toolkit: an exact cyclic-chain engine over the free
//! algebra on two generators, plus numerical operator checks.

// `!(x > 0.0)` is used on purpose so NaN parameters are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod cyclic;
pub mod dirac;
pub mod exec;
pub mod experiment;
pub mod freealg;
pub mod homotopy;
pub mod numop;
pub mod sample;
pub mod scalar;
pub mod tensor;
