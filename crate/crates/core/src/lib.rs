//! Algebraic core for building rational fractions `S` whose numerator
//! transform `T_S(f) = numerator(f(S))` produces infinite families of
//! irreducible polynomials over finite fields.
//!
//! The fractions come from elliptic-curve endomorphisms: the x-coordinate
//! map (Lattès map) of a separable endomorphism with cyclic kernel.
//!
//! Everything here is `no_std` with `alloc`. IO, command-line handling and
//! table emission live in the companion `lattes` crate.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cm_catalog;
pub mod ec;
pub mod endosearch;
pub mod error;
pub mod families;
pub mod ff;
pub mod poly;
pub mod ratfrac;

pub use error::{Error, Result};
pub use ff::{Embedding, Fe, Field};
pub use poly::Poly;
pub use ratfrac::{Mobius, RatFrac};

/// Default enumeration budget (number of candidate objects).
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;
