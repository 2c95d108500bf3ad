//! Bound states of the hyperbolic double-well family
//! `V_m(z; v) = -v sinh^(2m)(z) / cosh^(2m+2)(z)`.
//!
//! The crate provides
//!
//! * closed-form Pöschl–Teller levels for `m = 0` ([`poschl_teller`]),
//! * polynomial solutions of the confluent Heun form
//!   `(a2 z² + a1 z) f'' + (b2 z² + b1 z + b0) f' - (τ1 z + τ0) f = 0`
//!   ([`heun`]) and the quasi-exact `m = 2` pairs built on it ([`qes`]),
//! * an asymptotic-iteration eigenvalue engine for `m ∈ {0, 1, 2}` ([`aim`]),
//! * a hardware-precision finite-difference oracle ([`fd`]).
//!
//! All high-precision arithmetic goes through [`precision::BigReal`].

pub mod aim;
pub mod error;
pub mod fd;
pub mod heun;
pub mod poschl_teller;
pub mod potential;
pub mod precision;
pub mod qes;
pub mod reference;
pub mod roots;
pub mod spectrum;

pub use error::{Error, Result};
pub use precision::{BigReal, Precision, TaylorSeries};
pub use spectrum::{EigenResult, Method, Parity};
