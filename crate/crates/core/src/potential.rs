//! The potential family `V_m(z; v) = -v sinh^(2m)(z) / cosh^(2m+2)(z)`.

use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};
use crate::spectrum::Parity;

/// Family index `m` and dimensionless strength `v > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    m: u32,
    v: BigReal,
}

impl PotentialSpec {
    pub fn new(m: u32, v: BigReal) -> Result<Self> {
        if !v.is_sign_positive() || !v.is_finite() {
            return Err(Error::Usage(format!(
                "potential strength must be positive, got {}",
                v.to_significant(20)
            )));
        }
        Ok(PotentialSpec { m, v })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn v(&self) -> &BigReal {
        &self.v
    }

    pub fn precision(&self) -> Precision {
        self.v.precision()
    }

    /// `V_m(z; v)`.
    pub fn value(&self, z: &BigReal) -> BigReal {
        let c = z.cosh();
        let t = z.tanh();
        // sinh^2m / cosh^(2m+2) = tanh^2m sech^2
        let shape = t.powi(2 * self.m as i32) / c.square();
        -(&self.v * &shape)
    }

    /// Non-negative minimizer and the minimum value. The mirror point `-z`
    /// is an equal minimum.
    pub fn minimum(&self) -> (BigReal, BigReal) {
        let prec = self.precision();
        let m = i64::from(self.m);
        let z_min = BigReal::from_i64(1 + 2 * m, prec).acosh() / 2;
        // m^m / (1+m)^(1+m), with 0^0 = 1
        let ratio = BigReal::from_i64(m, prec).powi(self.m as i32)
            / BigReal::from_i64(1 + m, prec).powi(self.m as i32 + 1);
        (z_min, -(&self.v * &ratio))
    }

    /// `(∫V dz, ∫z² V dz)` over the real line.
    pub fn moment_integrals(&self) -> (BigReal, BigReal) {
        let two_m_plus_1 = 2 * i64::from(self.m) + 1;
        let i0 = -(&self.v * 2) / two_m_plus_1;
        let i2 = -(&self.v * 4) / two_m_plus_1 * self.second_moment_shape();
        (i0, i2)
    }

    /// `π²/24 + Σ_{k=1}^{m} (ln 4 + H_{k-1/2}) / (4k)`.
    fn second_moment_shape(&self) -> BigReal {
        let prec = self.precision();
        let pi = BigReal::pi(prec);
        let ln4 = BigReal::ln2(prec) * 2;
        let mut total = pi.square() / 24;
        let mut h = half_integer_harmonic_seed(prec);
        for k in 1..=i64::from(self.m) {
            if k > 1 {
                // H_{k-1/2} = H_{k-3/2} + 1/(k-1/2)
                h = h + BigReal::from_ratio(2, 2 * k - 1, prec);
            }
            total = total + (&ln4 + &h) / (4 * k);
        }
        total
    }

    /// Samples `|-ψ'' + V ψ - ε ψ|` on `points` nodes of `[z_lo, z_hi]`,
    /// with ψ'' from a five-point central difference.
    pub fn residual_check<F>(
        &self,
        psi: &F,
        epsilon: &BigReal,
        z_lo: &BigReal,
        z_hi: &BigReal,
        points: usize,
    ) -> ResidualCheck
    where
        F: Fn(&BigReal) -> BigReal,
    {
        let prec = self.precision();
        let h = BigReal::pow10(-(prec.digits() as i32) / 5, prec);
        let step = (z_hi - z_lo) / (points as i64 - 1);
        let mut max_residual = 0f64;
        let mut max_psi = 0f64;
        for i in 0..points {
            let z = z_lo + &(&step * i as i64);
            let at = |k: i64| psi(&(&z + &(&h * k)));
            let p0 = at(0);
            let second = (-at(2) + at(1) * 16 - &p0 * 30 + at(-1) * 16 - at(-2)) / (h.square() * 12);
            let residual = -second + (self.value(&z) - epsilon) * &p0;
            max_residual = max_residual.max(residual.abs().to_f64());
            max_psi = max_psi.max(p0.abs().to_f64());
        }
        ResidualCheck {
            max_residual,
            max_psi,
            relative: if max_psi > 0.0 { max_residual / max_psi } else { f64::INFINITY },
        }
    }

    /// Upper bound on the number of bound states; the count is strictly below it.
    pub fn bound_state_upper_bound(&self) -> BigReal {
        let prec = self.precision();
        let two_m_plus_1 = 2 * i64::from(self.m) + 1;
        let inner = self.second_moment_shape() * 32;
        let quarter = BigReal::from_ratio(1, 4, prec);
        BigReal::one(prec) + (&self.v / two_m_plus_1).sqrt() * inner.powf(&quarter)
    }
}

/// Outcome of [`PotentialSpec::residual_check`].
#[derive(Debug, Clone, Copy)]
pub struct ResidualCheck {
    pub max_residual: f64,
    pub max_psi: f64,
    /// `max_residual / max_psi`.
    pub relative: f64,
}

/// `H_{1/2} = 2 - 2 ln 2`.
fn half_integer_harmonic_seed(prec: Precision) -> BigReal {
    BigReal::from_i64(2, prec) - BigReal::ln2(prec) * 2
}

/// `H_{k - 1/2}` for `k ≥ 1`.
pub fn half_integer_harmonic(k: u32, prec: Precision) -> BigReal {
    assert!(k >= 1, "half-integer harmonic numbers start at H_(1/2)");
    let mut h = half_integer_harmonic_seed(prec);
    for j in 2..=i64::from(k) {
        h = h + BigReal::from_ratio(2, 2 * j - 1, prec);
    }
    h
}

/// Physical parameters of `-ħ²/(2μ) ψ'' + V ψ = E ψ`, `V = -U0 sinh^2m(x/d)/cosh^(2m+2)(x/d)`.
#[derive(Debug, Clone)]
pub struct PhysicalSpec {
    pub depth: BigReal,
    pub width: BigReal,
    pub mass: BigReal,
    pub hbar: BigReal,
}

/// Dimensionless form of a physical problem: `E = ε · energy_unit`.
#[derive(Debug, Clone)]
pub struct Dimensionless {
    pub spec: PotentialSpec,
    pub energy_unit: BigReal,
}

impl PhysicalSpec {
    pub fn to_dimensionless(&self, m: u32) -> Result<Dimensionless> {
        for (name, x) in [
            ("depth", &self.depth),
            ("width", &self.width),
            ("mass", &self.mass),
            ("hbar", &self.hbar),
        ] {
            if !x.is_sign_positive() {
                return Err(Error::Usage(format!("{name} must be positive")));
            }
        }
        let scale = &self.mass * 2 * self.width.square() / self.hbar.square();
        let v = &scale * &self.depth;
        Ok(Dimensionless {
            spec: PotentialSpec::new(m, v)?,
            energy_unit: scale.recip(),
        })
    }
}

/// Number of Pöschl–Teller (`m = 0`) bound states in a parity sector:
/// the count of levels `n ≥ 0` with `n < (-1 - 4β + √(1+4v)) / 4`.
pub fn exact_bound_state_count_pt(v: &BigReal, parity: Parity) -> usize {
    let x = pt_level_ceiling(v, parity);
    if !x.is_sign_positive() {
        return 0;
    }
    let floor = x.floor();
    let whole = floor.to_i64().unwrap_or(0).max(0) as usize;
    if floor == x {
        whole
    } else {
        whole + 1
    }
}

/// `(-1 - 4β + √(1+4v)) / 4`; level `n` exists iff `n` is strictly below it.
pub(crate) fn pt_level_ceiling(v: &BigReal, parity: Parity) -> BigReal {
    let root = (v * 4 + 1).sqrt();
    (root - (1 + parity.four_beta())) / 4
}
