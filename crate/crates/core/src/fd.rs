//! Finite-difference reference spectrum in `f64`.
//!
//! `-ψ'' + V ψ = ε ψ` on `[-L, L]` with Dirichlet ends becomes a symmetric
//! tridiagonal eigenproblem; the lowest eigenvalues come from bisection on
//! Sturm sequence counts. Deliberately shares no arithmetic with the
//! high-precision solvers so the two can fail independently.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::potential::PotentialSpec;

/// Uniform grid on `[-half_width, half_width]`, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    /// Odd, so that `z = 0` is a node.
    pub points: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width >= 10.0) {
            return Err(Error::Usage(format!("grid half-width must be at least 10, got {half_width}")));
        }
        if points < 2001 || points % 2 == 0 {
            return Err(Error::Usage(format!("grid needs an odd point count ≥ 2001, got {points}")));
        }
        Ok(GridSpec { half_width, points })
    }

    /// The default oracle grid: `L = 15`, 8001 points.
    pub fn standard() -> Self {
        GridSpec {
            half_width: 15.0,
            points: 8001,
        }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    /// Interior nodes, where the unknowns live.
    pub fn interior(&self) -> Vec<f64> {
        let h = self.spacing();
        (1..self.points - 1).map(|i| -self.half_width + h * i as f64).collect()
    }

    /// Same interval, every other node (`h` doubled).
    pub fn coarsened(&self) -> Self {
        GridSpec {
            half_width: self.half_width,
            points: (self.points - 1) / 2 + 1,
        }
    }
}

/// `-v tanh^{2m} z sech² z` in hardware precision.
fn potential_f64(m: u32, v: f64, z: f64) -> f64 {
    let sech2 = 1.0 / z.cosh().powi(2);
    -v * z.tanh().powi(2 * m as i32) * sech2
}

struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn build(spec: &PotentialSpec, grid: &GridSpec) -> Self {
        let h = grid.spacing();
        let v = spec.v().to_f64();
        let kinetic = 2.0 / (h * h);
        let diag = grid
            .interior()
            .into_iter()
            .map(|z| kinetic + potential_f64(spec.m(), v, z))
            .collect();
        Tridiagonal { diag, off: -1.0 / (h * h) }
    }

    /// Number of eigenvalues strictly below `x` (Sturm count via the LDLᵀ pivots).
    fn count_below(&self, x: f64) -> usize {
        let off2 = self.off * self.off;
        let mut count = 0;
        let mut pivot = 1.0;
        for (i, d) in self.diag.iter().enumerate() {
            pivot = if i == 0 { d - x } else { d - x - off2 / pivot };
            if pivot == 0.0 {
                pivot = -f64::EPSILON * (d.abs() + x.abs()).max(1.0);
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin bounds on the spectrum.
    fn bounds(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().cloned().fold(f64::INFINITY, f64::min) - r;
        let hi = self.diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + r;
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// The `k` lowest eigenvalues of the discretized Hamiltonian, ascending.
/// Only the negative ones approximate bound states.
pub fn fd_spectrum(spec: &PotentialSpec, grid: &GridSpec, k: usize) -> Result<Vec<f64>> {
    let matrix = Tridiagonal::build(spec, grid);
    if k > matrix.diag.len() {
        return Err(Error::Usage(format!("asked for {k} eigenvalues of a {}-point matrix", matrix.diag.len())));
    }
    Ok((0..k).into_par_iter().map(|i| matrix.eigenvalue(i)).collect())
}

/// Negative eigenvalues only.
pub fn fd_bound_states(spec: &PotentialSpec, grid: &GridSpec) -> Vec<f64> {
    let matrix = Tridiagonal::build(spec, grid);
    let count = matrix.count_below(0.0);
    (0..count).into_par_iter().map(|i| matrix.eigenvalue(i)).collect()
}

/// `(4 E_h - E_{2h}) / 3`, cancelling the leading `O(h²)` error term.
pub fn fd_spectrum_richardson(spec: &PotentialSpec, grid: &GridSpec, k: usize) -> Result<Vec<f64>> {
    let fine = fd_spectrum(spec, grid, k)?;
    let coarse = fd_spectrum(spec, &grid.coarsened(), k)?;
    Ok(fine.iter().zip(&coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect())
}

/// Eigenvector for an eigenvalue estimate, by inverse iteration with a
/// tridiagonal solve. Normalized to unit Euclidean length.
pub fn fd_eigenvector(spec: &PotentialSpec, grid: &GridSpec, eigenvalue: f64) -> Vec<f64> {
    let matrix = Tridiagonal::build(spec, grid);
    let n = matrix.diag.len();
    // a tiny shift keeps the factorization regular
    let shift = eigenvalue - 1e-10 * eigenvalue.abs().max(1.0);
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + (i % 7) as f64 * 1e-3).collect();
    for _ in 0..4 {
        x = solve_shifted(&matrix, shift, &x);
        let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        x.iter_mut().for_each(|a| *a /= norm);
    }
    x
}

/// Thomas algorithm for `(T - shift I) y = rhs`.
fn solve_shifted(matrix: &Tridiagonal, shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let b = matrix.off;
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    let mut denom = matrix.diag[0] - shift;
    c_prime[0] = b / denom;
    d_prime[0] = rhs[0] / denom;
    for i in 1..n {
        denom = matrix.diag[i] - shift - b * c_prime[i - 1];
        c_prime[i] = b / denom;
        d_prime[i] = (rhs[i] - b * d_prime[i - 1]) / denom;
    }
    let mut y = vec![0.0; n];
    y[n - 1] = d_prime[n - 1];
    for i in (0..n - 1).rev() {
        y[i] = d_prime[i] - c_prime[i] * y[i + 1];
    }
    y
}

/// `⟨ψ, Rψ⟩ / ⟨ψ, ψ⟩` with `R` the reflection `z → -z`: `+1` even, `-1` odd.
pub fn reflection_overlap(vector: &[f64]) -> f64 {
    let n = vector.len();
    let dot: f64 = (0..n).map(|i| vector[i] * vector[n - 1 - i]).sum();
    let norm: f64 = vector.iter().map(|a| a * a).sum();
    dot / norm
}
