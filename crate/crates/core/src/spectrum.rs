//! Parity sectors and eigenvalue records shared by every solver.

use std::fmt;

use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};

/// Wavefunction parity, carried as the exponent `β` of the `(1 - η)^β` factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    /// `β = 0`, `ψ(-z) = ψ(z)`.
    Even,
    /// `β = 1/2`, `ψ(-z) = -ψ(z)`.
    Odd,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Even, Parity::Odd];

    /// `4β`, the form in which β enters every coefficient.
    pub fn four_beta(self) -> i64 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 2,
        }
    }

    pub fn beta(self, prec: Precision) -> BigReal {
        BigReal::from_ratio(self.four_beta(), 4, prec)
    }

    /// Accepts `0` / `0.5` (and `1/2`, `even`, `odd`).
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "0" | "0.0" | "even" | "+" => Ok(Parity::Even),
            "0.5" | ".5" | "1/2" | "odd" | "-" => Ok(Parity::Odd),
            other => Err(Error::Usage(format!("beta must be 0 or 0.5, got {other:?}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "0",
            Parity::Odd => "0.5",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    QuasiExact,
    Aim,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::QuasiExact => "quasi-exact",
            Method::Aim => "aim",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One bound-state energy.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Level index within the parity sector, ordered by energy.
    pub n: usize,
    pub parity: Parity,
    pub epsilon: BigReal,
    pub method: Method,
    pub iterations: Option<usize>,
    pub residual: Option<BigReal>,
    /// False when an iterative solver stopped before its convergence test passed.
    pub converged: bool,
}
