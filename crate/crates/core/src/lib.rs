//! Space-efficient exact algorithms for TSP and permutation problems over
//! semirings, driven by set systems whose maximal chains cover all orderings.
//!
//! A set system `F ⊆ 2^[n]` with normalized size `S = |F|^{1/n}` and inverse
//! normalized chain density `P = (n!/C(F))^{1/n}` yields a solver in space
//! `S^n` and time `(S·P)^n`, up to polynomial factors.

pub mod analysis;
pub mod constructions;
pub mod cover;
pub mod error;
pub mod rng;
pub mod semiring;
pub mod setsys;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use setsys::{ChainCount, ElementSet, Metrics, Permutation, SetSystem};
