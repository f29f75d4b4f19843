//! Prime differences, Kronecker numbers and the combinatorics around them,
//! checked at desk scale.
//!
//! - [`primes`]: segmented sieve and its on-disk cache
//! - [`diffstats`]: prime-pair counts per gap and empirical Kronecker sets
//! - [`density`]: difference sets, progression windows, the exact density bound
//! - [`ramsey`]: finite sums, dilation blocks, sub-IP certificates
//! - [`linforms`]: affine-linear systems, complexity, local factors, the
//!   Kronecker system and its constants
//! - [`ratios`]: positive rationals as ratios of set members
//! - [`cli`]: the `kronecker` command-line front end

pub mod cli;
pub mod density;
pub mod diffstats;
pub mod error;
pub mod linforms;
pub mod primes;
pub mod ramsey;
pub mod rational;
pub mod ratios;
pub mod sets;

pub use error::{Error, Result};
pub use rational::ExactRational;
pub use sets::NumberSet;
