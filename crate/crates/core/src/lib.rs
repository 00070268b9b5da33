//! Symmetry-preserving finite-difference schemes for the 1-D Burgers equation.
//!
//! The crate is `no_std` (with `alloc`): exact differential algebra
//! ([`diffalg`]), Lie prolongation and invariance residuals ([`symmetry`]),
//! modified-equation analysis of stencils ([`modeq`]), the time-stepping
//! schemes ([`schemes`]), reference solutions and frame changes
//! ([`problems`]) and linear stability checks ([`stability`]).

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diffalg;
pub mod symmetry;
pub mod modeq;
pub mod schemes;
pub mod problems;
pub mod stability;
