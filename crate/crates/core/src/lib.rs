//! Exact generalized commutativity degrees of finite groups.
//!
//! The probability that a left-normed commutator `[x₁,…,xₙ,y₁,…,yₘ]` with
//! `xᵢ` drawn uniformly from `H` and `yⱼ` from `K` equals a fixed `g` is
//! computed exactly by brute enumeration, by a class-size formula, and by a
//! distribution dynamic program; character-theoretic formulas are evaluated
//! numerically alongside. [`audit`] checks a catalog of identities and bounds
//! about these quantities on batteries of small groups.

pub mod audit;
pub mod character;
pub mod comm;
pub mod error;
pub mod group;

pub use error::{Error, Result};
