//! Power-series eigenfunctions of `V_1(z; v) = -v sinh² z / cosh⁴ z`.
//!
//! With `γ = 0`, `y(η) = Σ c_n ηⁿ` solves the reduced equation when
//!
//! ```text
//! 4n(n + 2α) c_n = [4(n-1)(n-2) + (6 + 8β + 8α)(n-1) + C] c_{n-1} + v c_{n-2},
//! C = 2α + 4β + 8αβ - ε - v,   c_0 = 1.
//! ```

use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};
use crate::spectrum::Parity;

/// `c_0 ..= c_K` at energy `ε < 0`.
pub fn m1_series_coefficients(parity: Parity, epsilon: &BigReal, v: &BigReal, k_max: usize) -> Result<Vec<BigReal>> {
    if !epsilon.is_sign_negative() {
        return Err(Error::Domain("ε must be negative".into()));
    }
    let prec = epsilon.precision().max(v.precision());
    let two_alpha = (-epsilon).sqrt();
    let four_beta = BigReal::from_i64(parity.four_beta(), prec);
    let big_c = &two_alpha + &four_beta + &two_alpha * &four_beta - epsilon - v;
    let slope = &two_alpha * 4 + &four_beta * 2 + 6;

    let mut c = Vec::with_capacity(k_max + 1);
    c.push(BigReal::one(prec));
    for n in 1..=k_max as i64 {
        let diag = &slope * (n - 1) + &big_c + 4 * (n - 1) * (n - 2);
        let mut rhs = diag * &c[n as usize - 1];
        if n >= 2 {
            rhs.add_product(v, &c[n as usize - 2]);
        }
        c.push(rhs / ((&two_alpha + n) * (4 * n)));
    }
    Ok(c)
}

/// `ψ(z) = sech^{2α} z · [tanh z] · Σ_{n≤K} c_n sech^{2n} z`, requiring the
/// last retained term to be below `10^{-digits/2}` of the partial sum.
pub fn m1_wavefunction(parity: Parity, epsilon: &BigReal, v: &BigReal, z: &BigReal, k_max: usize) -> Result<BigReal> {
    let prec = epsilon.precision().max(v.precision());
    m1_wavefunction_with_tolerance(parity, epsilon, v, z, k_max, &default_tail_tolerance(prec))
}

fn default_tail_tolerance(prec: Precision) -> BigReal {
    BigReal::pow10(-(prec.digits() as i32 / 2), prec)
}

/// As [`m1_wavefunction`] with an explicit relative tail tolerance.
pub fn m1_wavefunction_with_tolerance(
    parity: Parity,
    epsilon: &BigReal,
    v: &BigReal,
    z: &BigReal,
    k_max: usize,
    tail_tolerance: &BigReal,
) -> Result<BigReal> {
    let coeffs = m1_series_coefficients(parity, epsilon, v, k_max)?;
    let sech = z.sech();
    let eta = sech.square();
    let mut power = BigReal::one(eta.precision());
    let mut sum = BigReal::zero(eta.precision());
    let mut last = BigReal::zero(eta.precision());
    for c in &coeffs {
        last = c * &power;
        sum += &last;
        power = power * &eta;
    }
    let tail = if sum.is_zero() { last.abs() } else { (&last / &sum).abs() };
    if tail > *tail_tolerance {
        return Err(Error::Truncation {
            tail: tail.to_significant(6),
            tolerance: tail_tolerance.to_significant(6),
        });
    }
    let mut psi = sech.powf(&(-epsilon).sqrt()) * sum;
    if parity == Parity::Odd {
        psi = psi * z.tanh();
    }
    Ok(psi)
}
