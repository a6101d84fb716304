// SPDX-License-Identifier: Apache-2.0

//! Bernays' constant C(D) for negative fundamental discriminants.
//!
//! `B_f(x)`, the number of integers up to `x` represented by a positive
//! definite binary quadratic form `f` of discriminant `D`, grows like
//! `C(D) x / sqrt(ln x)`. For fundamental `D` the constant has the closed form
//!
//! ```text
//! C(D) = 2^(1 - ω(D)) * sqrt( |D|/φ(|D|) * L(1, χ_D)/π * E(D) ),
//! E(D) = ∏_{χ_D(p) = -1} 1 / (1 - p^-2)
//! ```
//!
//! The crate evaluates it and checks it several independent ways: exact class
//! enumeration against a character sum for `L(1, χ_D)`, a direct Euler product
//! against an accelerated one for `E(D)`, the genus-sum identity, and
//! brute-force censuses of represented integers.

pub mod arith;
pub mod census;
pub mod cli;
pub mod constants;
pub mod error;
pub mod forms;
pub mod lfunc;
pub mod numeric;
pub mod search;

pub use error::{Error, Result};
