//! Polynomial solutions of
//! `(a2 z² + a1 z) f'' + (b2 z² + b1 z + b0) f' - (τ1 z + τ0) f = 0`.
//!
//! A degree-`N` solution needs `τ1 = N b2` and `P_{N+1}(τ0) = 0`, where
//! `P_{-1} = 0`, `P_0 = 1` and
//!
//! ```text
//! P_{k+1} = (τ0 - k(k-1) a2 - k b1) P_k + k b2 (N-k+1) ((k-1) a1 + b0) P_{k-1}.
//! ```
//!
//! The solution is then `f_N(z) = Σ_k P_k / (k! a1^k (b0/a1)_k) z^k`.

use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};
use crate::roots;

#[derive(Debug, Clone, PartialEq)]
pub struct HeunCoefficients {
    pub a1: BigReal,
    pub a2: BigReal,
    pub b0: BigReal,
    pub b1: BigReal,
    pub b2: BigReal,
    pub tau0: BigReal,
    pub tau1: BigReal,
}

impl HeunCoefficients {
    pub fn precision(&self) -> Precision {
        [&self.a2, &self.b0, &self.b1, &self.b2, &self.tau0, &self.tau1]
            .iter()
            .fold(self.a1.precision(), |p, x| p.max(x.precision()))
    }

    /// Copy with `τ0` replaced.
    pub fn with_tau0(&self, tau0: BigReal) -> Self {
        HeunCoefficients {
            tau0,
            ..self.clone()
        }
    }

    /// Copy with `τ1 = N b2` imposed.
    pub fn with_necessary_tau1(&self, degree: usize) -> Self {
        HeunCoefficients {
            tau1: necessary_tau1(degree, &self.b2),
            ..self.clone()
        }
    }
}

/// `τ1 = N b2`.
pub fn necessary_tau1(degree: usize, b2: &BigReal) -> BigReal {
    b2 * degree as i64
}

/// `P_0 ..= P_{N+1}` at `coeffs.tau0`.
pub fn recurrence_p(coeffs: &HeunCoefficients, degree: usize) -> Vec<BigReal> {
    recurrence_p_at(coeffs, degree, &coeffs.tau0)
}

fn recurrence_p_at(coeffs: &HeunCoefficients, degree: usize, tau0: &BigReal) -> Vec<BigReal> {
    let prec = coeffs.precision().max(tau0.precision());
    let n = degree as i64;
    let mut out = Vec::with_capacity(degree + 2);
    let mut prev = BigReal::zero(prec);
    let mut cur = BigReal::one(prec);
    out.push(cur.clone());
    for k in 0..=n {
        let diag = tau0 - &(&coeffs.a2 * (k * (k - 1))) - &(&coeffs.b1 * k);
        let coupling = &coeffs.b2 * (k * (n - k + 1)) * (&coeffs.a1 * (k - 1) + &coeffs.b0);
        let next = diag * &cur + coupling * &prev;
        prev = cur;
        cur = next;
        out.push(cur.clone());
    }
    out
}

/// `P_{N+1}(τ0)`, the sufficiency function.
pub fn sufficiency(coeffs: &HeunCoefficients, degree: usize, tau0: &BigReal) -> BigReal {
    recurrence_p_at(coeffs, degree, tau0)
        .pop()
        .expect("recurrence yields N+2 values")
}

#[derive(Debug, Clone)]
pub struct RootSearch {
    /// Uniform scan nodes across the bracket.
    pub scan_points: usize,
    /// Refinement tolerance; `None` means `10^-(digits-10)`.
    pub tol: Option<BigReal>,
}

impl Default for RootSearch {
    fn default() -> Self {
        RootSearch {
            scan_points: 512,
            tol: None,
        }
    }
}

/// Real roots of `τ0 ↦ P_{N+1}(τ0)` inside `[lo, hi]`, ascending.
///
/// Only sign changes are detected, so roots of even multiplicity are missed.
pub fn find_tau0_roots(
    coeffs: &HeunCoefficients,
    degree: usize,
    lo: &BigReal,
    hi: &BigReal,
    search: &RootSearch,
) -> Result<Vec<BigReal>> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Usage("bracket must be finite with lo < hi".into()));
    }
    let prec = coeffs.precision();
    let tol = search
        .tol
        .clone()
        .unwrap_or_else(|| BigReal::pow10(-(prec.digits() as i32 - 10), prec));
    let f = |t: &BigReal| sufficiency(coeffs, degree, t);
    let grid = roots::uniform_grid(lo, hi, search.scan_points.max(2));
    let values = roots::evaluate_grid(&f, &grid);
    let mut found = roots::refine_all(&f, roots::sign_changes(&grid, &values), &tol);
    found.truncate(degree + 1);
    Ok(found)
}

/// An accepted polynomial solution `f_N(z) = Σ c_k z^k` with `c_0 = 1`.
#[derive(Debug, Clone)]
pub struct PolynomialSolution {
    pub degree: usize,
    pub coeffs: Vec<BigReal>,
    pub tau0: BigReal,
    /// `P_0 ..= P_{N+1}`.
    pub p_values: Vec<BigReal>,
}

impl PolynomialSolution {
    pub fn eval(&self, z: &BigReal) -> BigReal {
        horner(&self.coeffs, z)
    }

    pub fn derivative_coeffs(&self) -> Vec<BigReal> {
        derivative(&self.coeffs)
    }
}

pub(crate) fn horner(coeffs: &[BigReal], z: &BigReal) -> BigReal {
    let mut iter = coeffs.iter().rev();
    let mut acc = iter.next().cloned().unwrap_or_else(|| BigReal::zero(z.precision()));
    for c in iter {
        acc = acc * z + c;
    }
    acc
}

fn derivative(coeffs: &[BigReal]) -> Vec<BigReal> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as i64)
        .collect()
}

/// `|P_{N+1}| / max_k |P_k|` must stay below `10^-(digits/2)`.
pub fn sufficiency_tolerance(prec: Precision) -> BigReal {
    BigReal::pow10(-(prec.digits() as i32 / 2), prec)
}

/// Builds `f_N` from the recurrence after checking both existence conditions.
pub fn build_solution(coeffs: &HeunCoefficients, degree: usize) -> Result<PolynomialSolution> {
    let prec = coeffs.precision();
    let tol = sufficiency_tolerance(prec);
    let expected_tau1 = necessary_tau1(degree, &coeffs.b2);
    let tau1_scale = coeffs.b2.abs().max(BigReal::one(prec)) * (degree as i64 + 1);
    if (&coeffs.tau1 - &expected_tau1).abs() > &tol * &tau1_scale {
        return Err(Error::Domain(format!(
            "necessary condition τ1 = N b2 fails: τ1 = {}, N b2 = {}",
            coeffs.tau1.to_significant(20),
            expected_tau1.to_significant(20)
        )));
    }
    let p_values = recurrence_p(coeffs, degree);
    let scale = p_values[..=degree]
        .iter()
        .fold(BigReal::zero(prec), |m, p| m.max(p.abs()));
    let residual = p_values[degree + 1].abs();
    if residual > &tol * &scale {
        return Err(Error::Sufficiency {
            residual: residual.to_significant(10),
        });
    }
    let mut denom = BigReal::one(prec);
    let mut out = Vec::with_capacity(degree + 1);
    for (k, p) in p_values.iter().take(degree + 1).enumerate() {
        if k > 0 {
            // k! a1^k (b0/a1)_k = Π_{j<k} (j+1)(b0 + j a1)
            let j = k as i64 - 1;
            let factor = (&coeffs.b0 + &(&coeffs.a1 * j)) * (j + 1);
            if factor.is_zero() {
                return Err(Error::PochhammerZero(k));
            }
            denom = denom * factor;
        }
        out.push(p / &denom);
    }
    if out[degree].is_zero() {
        return Err(Error::Domain(format!(
            "leading coefficient of the degree-{degree} solution vanishes"
        )));
    }
    Ok(PolynomialSolution {
        degree,
        coeffs: out,
        tau0: coeffs.tau0.clone(),
        p_values,
    })
}

/// `(a2 z² + a1 z) f'' + (b2 z² + b1 z + b0) f' - (τ1 z + τ0) f` at `z`.
pub fn ode_residual(coeffs: &HeunCoefficients, sol: &PolynomialSolution, z: &BigReal) -> BigReal {
    let d1 = derivative(&sol.coeffs);
    let d2 = derivative(&d1);
    let f = horner(&sol.coeffs, z);
    let f1 = horner(&d1, z);
    let f2 = horner(&d2, z);
    let z2 = z.square();
    (&coeffs.a2 * &z2 + &coeffs.a1 * z) * f2
        + (&coeffs.b2 * &z2 + &coeffs.b1 * z + &coeffs.b0) * f1
        - (&coeffs.tau1 * z + &coeffs.tau0) * f
}
