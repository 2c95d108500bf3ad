//! Closed-form levels and eigenfunctions of the modified Pöschl–Teller
//! well `V(z) = -v sech²(z)` (the `m = 0` member of the family).

use crate::error::{Error, Result};
use crate::potential::{exact_bound_state_count_pt, pt_level_ceiling};
use crate::precision::{BigReal, Precision};
use crate::spectrum::{EigenResult, Method, Parity};

/// `ε_n = -(√(1+4v) - 1 - 4β - 4n)² / 4`, defined while that bracket is positive.
pub fn pt_eigenvalue(v: &BigReal, parity: Parity, n: usize) -> Result<BigReal> {
    let ceiling = pt_level_ceiling(v, parity);
    if !(BigReal::from_i64(n as i64, v.precision()) < ceiling) {
        let count = exact_bound_state_count_pt(v, parity);
        return Err(Error::NoSuchState {
            n,
            max_level: count.checked_sub(1),
        });
    }
    let root = (v * 4 + 1).sqrt();
    let bracket = root - (1 + parity.four_beta() + 4 * n as i64);
    Ok(-bracket.square() / 4)
}

/// Every bound level of the sector, ascending.
pub fn pt_spectrum(v: &BigReal, parity: Parity) -> Vec<EigenResult> {
    (0..exact_bound_state_count_pt(v, parity))
        .map(|n| EigenResult {
            n,
            parity,
            epsilon: pt_eigenvalue(v, parity, n).expect("level below count"),
            method: Method::Exact,
            iterations: None,
            residual: None,
            converged: true,
        })
        .collect()
}

/// Terminating Gauss series `₂F₁(-n, b; c; x) = Σ_{k≤n} (-n)_k (b)_k / ((c)_k k!) x^k`.
pub fn gauss_2f1_terminating(n: usize, b: &BigReal, c: &BigReal, x: &BigReal) -> Result<BigReal> {
    let prec = b.precision().max(c.precision()).max(x.precision());
    let mut term = BigReal::one(prec);
    let mut sum = term.clone();
    for k in 0..n as i64 {
        let denom = (c + k) * (k + 1);
        if denom.is_zero() {
            return Err(Error::PochhammerZero(k as usize));
        }
        // ratio of successive terms: (k - n)(b + k) x / ((c + k)(k + 1))
        term = term * (b + k) * (k - n as i64) * x / denom;
        sum = sum + &term;
    }
    Ok(sum)
}

/// Unnormalized eigenfunction:
/// `sech^s(z) [tanh z] ₂F₁(-n, 1/2 + 2β + s + n; 1 + s; sech² z)`, `s = √(-ε_n)`.
pub fn pt_wavefunction(v: &BigReal, parity: Parity, n: usize, z: &BigReal) -> Result<BigReal> {
    let eps = pt_eigenvalue(v, parity, n)?;
    let prec = v.precision().max(z.precision());
    let s = (-eps).sqrt();
    let sech = z.sech();
    let b = &s + &BigReal::from_ratio(1 + parity.four_beta() + 2 * n as i64, 2, prec);
    let c = &s + 1;
    let poly = gauss_2f1_terminating(n, &b, &c, &sech.square())?;
    let mut psi = sech.powf(&s) * poly;
    if parity == Parity::Odd {
        psi = psi * z.tanh();
    }
    Ok(psi)
}

/// L² norm of [`pt_wavefunction`] by the trapezoid rule on `[-half_width, half_width]`.
pub fn pt_norm(
    v: &BigReal,
    parity: Parity,
    n: usize,
    half_width: &BigReal,
    points: usize,
) -> Result<BigReal> {
    let prec = v.precision();
    let h = half_width * 2 / (points as i64 - 1);
    let mut sum = BigReal::zero(prec);
    for i in 0..points {
        let z = -half_width + &(&h * i as i64);
        let w = if i == 0 || i + 1 == points { BigReal::half(prec) } else { BigReal::one(prec) };
        sum = sum + pt_wavefunction(v, parity, n, &z)?.square() * w;
    }
    Ok((sum * h).sqrt())
}

/// Normalized eigenfunction using the default `[-25, 25]`, 4001-node quadrature.
pub fn pt_wavefunction_normalized(
    v: &BigReal,
    parity: Parity,
    n: usize,
    z: &BigReal,
) -> Result<BigReal> {
    let prec = v.precision().min(Precision::new(40).expect("valid"));
    let norm = pt_norm(&v.with_precision(prec), parity, n, &BigReal::from_i64(25, prec), 4001)?;
    Ok(pt_wavefunction(v, parity, n, z)? / norm)
}
