//! Quasi-exact states of `V_2(z; v) = -v sinh⁴ z / cosh⁶ z`.
//!
//! With `η = sech² z` and `ψ = η^α (1-η)^β e^{-γη} f(η)`, `α = √(-ε)/2`,
//! `γ = √v/2`, the reduced equation has the confluent Heun form handled by
//! [`crate::heun`]. A degree-`N` polynomial `f` exists when
//! `√v = 3 + 4β + 2√(-ε) + 4N` and `P_{N+1}(ε, v) = 0`; the first fixes `ε`
//! as a function of `v`, the second selects the admissible strengths.

use crate::error::{Error, Result};
use crate::heun::{horner, HeunCoefficients};
use crate::precision::{BigReal, Precision};
use crate::roots::{self, GridRoot};
use crate::spectrum::Parity;

/// Maps the `m = 2` reduced equation onto the Heun coefficient set.
pub fn build_heun_coeffs_m2(parity: Parity, v: &BigReal, epsilon: &BigReal) -> Result<HeunCoefficients> {
    if !epsilon.is_sign_negative() || !v.is_sign_positive() {
        return Err(Error::Domain("need ε < 0 and v > 0".into()));
    }
    let prec = v.precision().max(epsilon.precision());
    let alpha = (-epsilon).sqrt() / 2;
    let gamma = v.sqrt() / 2;
    let beta = parity.beta(prec);
    let four_alpha = &alpha * 4;
    let four_beta = &beta * 4;
    let four_gamma = &gamma * 4;
    let tau1 = -(&gamma * &(&gamma * 2 - 3 - &four_alpha - &four_beta));
    let tau0 = -(&alpha + &(alpha.square() * 2) + &(&beta * 2) + &(&four_alpha * &beta)
        + &(&gamma * 2)
        + &(&four_alpha * &gamma)
        - &(gamma.square() * 2));
    Ok(HeunCoefficients {
        a2: BigReal::from_i64(2, prec),
        a1: BigReal::from_i64(-2, prec),
        b2: -four_gamma.clone(),
        b1: &four_alpha + &four_beta + &four_gamma + 3,
        b0: -(&four_alpha + 2),
        tau0,
        tau1,
    })
}

/// `3 + 4β + 4N`, the smallest `√v` admitting a degree-`N` polynomial.
pub fn threshold_sqrt_v(degree: usize, parity: Parity, prec: Precision) -> BigReal {
    BigReal::from_ratio(6 + 2 * parity.four_beta() + 8 * degree as i64, 2, prec)
}

/// `ε_N = -(√v - 3 - 4β - 4N)² / 4`, valid for `v > (3 + 4β + 4N)²`.
pub fn qes_epsilon(degree: usize, parity: Parity, v: &BigReal) -> Result<BigReal> {
    let t0 = threshold_sqrt_v(degree, parity, v.precision());
    if !(v > &t0.square()) {
        return Err(Error::NoPolynomialState {
            degree,
            threshold: t0.square().to_significant(12),
        });
    }
    Ok(epsilon_from_sqrt_v(&v.sqrt(), &t0))
}

fn epsilon_from_sqrt_v(t: &BigReal, t0: &BigReal) -> BigReal {
    -(t - t0).square() / 4
}

/// `P_0 ..= P_{N+1}` from the explicit `m = 2` recurrence
///
/// ```text
/// P_{k+1} = (ε/2 - (√-ε/2)(1 + 4β + 4k + 2√v) + v/2 - (2β + k)(1 + 2k) - (1 + 2k)√v) P_k
///         + 4k(N - k + 1) √v (√-ε + k) P_{k-1}
/// ```
pub fn qes_recurrence_p(degree: usize, parity: Parity, v: &BigReal, epsilon: &BigReal) -> Vec<BigReal> {
    let prec = v.precision().max(epsilon.precision());
    let s = (-epsilon).sqrt();
    let t = v.sqrt();
    let two_beta = BigReal::from_ratio(parity.four_beta(), 2, prec);
    let n = degree as i64;
    let base = epsilon / 2 + v / 2;
    let mut out = Vec::with_capacity(degree + 2);
    let mut prev = BigReal::zero(prec);
    let mut cur = BigReal::one(prec);
    out.push(cur.clone());
    for k in 0..=n {
        let diag = &base
            - &(&s * &(&t * 2 + (1 + parity.four_beta() + 4 * k)) / 2)
            - &((&two_beta + k) * (1 + 2 * k))
            - &(&t * (1 + 2 * k));
        let coupling = &t * (4 * k * (n - k + 1)) * (&s + k);
        let next = diag * &cur + coupling * &prev;
        prev = cur;
        cur = next;
        out.push(cur.clone());
    }
    out
}

/// `c_k = P_k / (k! (1 + √-ε)_k) (-1/2)^k`, `k = 0..=N`.
fn polynomial_coeffs(p_values: &[BigReal], degree: usize, epsilon: &BigReal) -> Vec<BigReal> {
    let prec = epsilon.precision();
    let s = (-epsilon).sqrt();
    let mut denom = BigReal::one(prec);
    let mut out = Vec::with_capacity(degree + 1);
    for (k, p) in p_values.iter().take(degree + 1).enumerate() {
        if k > 0 {
            let j = k as i64 - 1;
            denom = denom * (&s + (1 + j)) * (-2 * k as i64);
        }
        out.push(p / &denom);
    }
    out
}

/// A quasi-exact `(ε, v)` pair with its polynomial factor.
#[derive(Debug, Clone)]
pub struct QesPair {
    pub degree: usize,
    pub parity: Parity,
    pub v: BigReal,
    pub epsilon: BigReal,
    pub p_values: Vec<BigReal>,
    /// Coefficients of `f_N(η) = Σ c_k η^k`, `c_0 = 1`.
    pub f_coeffs: Vec<BigReal>,
}

impl QesPair {
    /// Builds the pair at strength `v`, checking every invariant.
    pub fn at_strength(degree: usize, parity: Parity, v: BigReal) -> Result<Self> {
        let epsilon = qes_epsilon(degree, parity, &v)?;
        let p_values = qes_recurrence_p(degree, parity, &v, &epsilon);
        let prec = v.precision();
        let scale = p_values[..=degree]
            .iter()
            .fold(BigReal::zero(prec), |m, p| m.max(p.abs()));
        let residual = p_values[degree + 1].abs();
        if residual > scale * crate::heun::sufficiency_tolerance(prec) {
            return Err(Error::Sufficiency {
                residual: residual.to_significant(10),
            });
        }
        let f_coeffs = polynomial_coeffs(&p_values, degree, &epsilon);
        Ok(QesPair {
            degree,
            parity,
            v,
            epsilon,
            p_values,
            f_coeffs,
        })
    }

    pub fn alpha(&self) -> BigReal {
        (-&self.epsilon).sqrt() / 2
    }

    pub fn gamma(&self) -> BigReal {
        self.v.sqrt() / 2
    }

    /// `f_N(η)`.
    pub fn polynomial(&self, eta: &BigReal) -> BigReal {
        horner(&self.f_coeffs, eta)
    }
}

/// `ψ(z) = sech^{2α} z · [tanh z] · e^{-γ sech² z} · f_N(sech² z)`.
pub fn qes_wavefunction(pair: &QesPair, z: &BigReal) -> BigReal {
    let sech = z.sech();
    let eta = sech.square();
    let two_alpha = pair.alpha() * 2;
    let mut psi = sech.powf(&two_alpha) * (-(pair.gamma() * &eta)).exp() * pair.polynomial(&eta);
    if pair.parity == Parity::Odd {
        psi = psi * z.tanh();
    }
    psi
}

#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    /// Upper end of the `√v` scan; `None` means threshold + 100.
    pub t_max: Option<BigReal>,
    pub scan_points: usize,
    /// Root tolerance in `√v`; `None` means `10^-(digits-10)`.
    pub tol: Option<BigReal>,
    pub precision: Precision,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            t_max: None,
            scan_points: 4096,
            tol: None,
            precision: Precision::DEFAULT,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub pairs: Vec<QesPair>,
    /// The `√v` range actually scanned.
    pub t_range: (BigReal, BigReal),
}

/// Every admissible strength for degree `N` in the scanned `√v` window,
/// ascending in `v`.
pub fn qes_enumerate(degree: usize, parity: Parity, options: &EnumerateOptions) -> Result<Enumeration> {
    let prec = options.precision;
    let t0 = threshold_sqrt_v(degree, parity, prec);
    let t_max = options
        .t_max
        .clone()
        .map(|t| t.with_precision(prec))
        .unwrap_or_else(|| &t0 + 100);
    if !(t_max > t0) {
        return Ok(Enumeration {
            pairs: Vec::new(),
            t_range: (t0, t_max),
        });
    }
    let tol = options
        .tol
        .clone()
        .unwrap_or_else(|| BigReal::pow10(-(prec.digits() as i32 - 10), prec));
    let condition = |t: &BigReal| {
        let eps = epsilon_from_sqrt_v(t, &t0);
        qes_recurrence_p(degree, parity, &t.square(), &eps)
            .pop()
            .expect("N+2 values")
    };
    let grid = roots::uniform_grid(&t0, &t_max, options.scan_points.max(3));
    let values = roots::evaluate_grid(&condition, &grid);
    let mut brackets: Vec<GridRoot> = roots::sign_changes(&grid, &values)
        .into_iter()
        .filter(|r| !matches!(r, GridRoot::Node(x) if *x == t0))
        .collect();
    brackets.extend(tangential_candidates(&condition, &grid, &values, &tol));
    let t_roots = roots::refine_all(&condition, brackets, &tol);

    let mut pairs = Vec::new();
    for t in t_roots {
        if pairs
            .last()
            .is_some_and(|p: &QesPair| p.v.sqrt().close_to(&t, &(&tol * 10)))
        {
            continue;
        }
        pairs.push(QesPair::at_strength(degree, parity, t.square())?);
    }
    Ok(Enumeration {
        pairs,
        t_range: (t0, t_max),
    })
}

/// Re-solves the degree-`N` pair whose strength lies within a relative
/// `window` of `v_approx`, for strengths known only to a few digits.
pub fn refine_pair_near(degree: usize, parity: Parity, v_approx: &BigReal, window: &BigReal) -> Result<QesPair> {
    let prec = v_approx.precision();
    let t0 = threshold_sqrt_v(degree, parity, prec);
    let t = v_approx.sqrt();
    let lo = (&t * (BigReal::one(prec) - window)).max(&t0 + &BigReal::pow10(-(prec.digits() as i32) / 2, prec));
    let hi = &t * (BigReal::one(prec) + window);
    if !(hi > lo) {
        return Err(Error::NoPolynomialState {
            degree,
            threshold: t0.square().to_significant(12),
        });
    }
    let condition = |t: &BigReal| {
        qes_recurrence_p(degree, parity, &t.square(), &epsilon_from_sqrt_v(t, &t0))
            .pop()
            .expect("N+2 values")
    };
    let (f_lo, f_hi) = (condition(&lo), condition(&hi));
    if f_lo.signum() * f_hi.signum() > 0 {
        return Err(Error::Sufficiency {
            residual: f_lo.abs().min(f_hi.abs()).to_significant(6),
        });
    }
    let tol = BigReal::pow10(-(prec.digits() as i32 - 10), prec);
    let root = roots::refine(&condition, lo, hi, f_lo, f_hi, &tol);
    QesPair::at_strength(degree, parity, root.square())
}

/// The lowest degree `N ≤ max_degree` with a quasi-exact pair near `v_approx`.
pub fn identify_degree(parity: Parity, v_approx: &BigReal, max_degree: usize, window: &BigReal) -> Option<QesPair> {
    (0..=max_degree).find_map(|degree| refine_pair_near(degree, parity, v_approx, window).ok())
}

/// Double roots touch zero without a sign change: look for local minima of
/// `|g|` whose derivative changes sign, and keep those where `g` vanishes.
fn tangential_candidates<F>(g: &F, grid: &[BigReal], values: &[BigReal], tol: &BigReal) -> Vec<GridRoot>
where
    F: Fn(&BigReal) -> BigReal + Sync,
{
    let prec = tol.precision();
    let h = BigReal::pow10(-(prec.digits() as i32) / 3, prec);
    let dg = |t: &BigReal| (g(&(t + &h)) - g(&(t - &h))) / (&h * 2);
    let mut out = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let (a, b, c) = (&values[i - 1], &values[i], &values[i + 1]);
        let same_sign = a.signum() == b.signum() && b.signum() == c.signum() && b.signum() != 0;
        if !same_sign || !(b.abs() < a.abs() && b.abs() < c.abs()) {
            continue;
        }
        let (lo, hi) = (grid[i - 1].clone(), grid[i + 1].clone());
        let (d_lo, d_hi) = (dg(&lo), dg(&hi));
        if d_lo.signum() * d_hi.signum() >= 0 {
            continue;
        }
        let t = roots::refine(&dg, lo, hi, d_lo, d_hi, tol);
        let scale = values[i - 1].abs().max(values[i + 1].abs());
        if g(&t).abs() <= scale * crate::heun::sufficiency_tolerance(prec) {
            out.push(GridRoot::Node(t));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heun::{build_solution, necessary_tau1, ode_residual, recurrence_p};
    use crate::potential::PotentialSpec;

    fn p() -> Precision {
        Precision::DEFAULT
    }

    fn num(x: i64) -> BigReal {
        BigReal::from_i64(x, p())
    }

    fn dec(s: &str) -> BigReal {
        BigReal::parse(s, p()).unwrap()
    }

    fn zero_degree_even_v() -> BigReal {
        num(13).sqrt() * 8 + 29
    }

    fn zero_degree_odd_v() -> BigReal {
        num(61).sqrt() * 16 + 125
    }

    #[test]
    fn trivial_coefficient_map() {
        let c = build_heun_coeffs_m2(Parity::Even, &num(4), &num(-4)).unwrap();
        assert_eq!(c.b0, num(-6));
        assert_eq!(c.a1, num(-2));
        assert_eq!(c.a2, num(2));
        assert!(build_heun_coeffs_m2(Parity::Even, &num(4), &num(1)).is_err());
    }

    #[test]
    fn zero_degree_pair_has_vanishing_taus() {
        let v = zero_degree_even_v();
        let eps = -(num(13).sqrt() + 7) / 2;
        let c = build_heun_coeffs_m2(Parity::Even, &v, &eps).unwrap();
        let tol = BigReal::pow10(-90, p());
        assert!(c.tau1.abs() < tol);
        assert!(c.tau0.abs() < tol);
    }

    #[test]
    fn necessary_condition_matches_square_root_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let parity = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
            let degree = rng.gen_range(0..6usize);
            let v = BigReal::from_f64(rng.gen_range(1.0..4000.0), p());
            let eps = BigReal::from_f64(-rng.gen_range(0.01..500.0), p());
            let c = build_heun_coeffs_m2(parity, &v, &eps).unwrap();
            let lhs = &c.tau1 - &necessary_tau1(degree, &c.b2);
            let identity = (-&eps).sqrt() * 2 + (3 + parity.four_beta() + 4 * degree as i64) - v.sqrt();
            // τ1 - N b2 = -γ (2γ - 3 - 4α - 4β - 4N) = (√v/2)·identity
            let expect = v.sqrt() / 2 * identity;
            assert!(lhs.close_to(&expect, &BigReal::pow10(-85, p())));

            let on_curve = qes_epsilon(degree, parity, &(v.clone() + threshold_sqrt_v(degree, parity, p()).square()));
            let on_curve = on_curve.unwrap();
            let v_on = v.clone() + threshold_sqrt_v(degree, parity, p()).square();
            let c = build_heun_coeffs_m2(parity, &v_on, &on_curve).unwrap();
            assert!((&c.tau1 - &necessary_tau1(degree, &c.b2)).abs() < BigReal::pow10(-85, p()));
        }
    }

    #[test]
    fn zero_degree_energies() {
        let e = qes_epsilon(0, Parity::Even, &zero_degree_even_v()).unwrap();
        assert!(e.close_to(&(-(num(13).sqrt() + 7) / 2), &BigReal::pow10(-95, p())));
        assert_eq!(e.to_fixed(12), "-5.302775637732");
        let e = qes_epsilon(0, Parity::Odd, &zero_degree_odd_v()).unwrap();
        assert!(e.close_to(&(-(num(61).sqrt() * 3 + 35) / 2), &BigReal::pow10(-95, p())));
        assert_eq!(e.to_fixed(12), "-29.215374513860");
        let e = qes_epsilon(1, Parity::Even, &dec("149.57425693331263")).unwrap();
        assert!((e.to_f64() + 6.838370069149139).abs() < 1e-12);
        assert!(matches!(qes_epsilon(1, Parity::Even, &num(49)), Err(Error::NoPolynomialState { .. })));
    }

    #[test]
    fn recurrence_seed_and_sufficiency() {
        let v = dec("37.5");
        let eps = dec("-3.25");
        let ps = qes_recurrence_p(2, Parity::Odd, &v, &eps);
        let s = (-&eps).sqrt();
        let t = v.sqrt();
        let expect = &eps / 2 - &(&s / 2 * (&t * 2 + 3)) + &v / 2 - 1 - &t;
        assert!(ps[1].close_to(&expect, &BigReal::pow10(-90, p())));

        let v = zero_degree_even_v();
        let eps = qes_epsilon(0, Parity::Even, &v).unwrap();
        assert!(qes_recurrence_p(0, Parity::Even, &v, &eps)[1].abs() < BigReal::pow10(-90, p()));
    }

    /// The explicit recurrence and the generic engine on mapped coefficients agree.
    #[test]
    fn explicit_and_generic_recurrences_agree() {
        for (degree, parity, v, eps) in [(0, Parity::Even, "57.1", "-2.2"), (3, Parity::Odd, "900.5", "-41.25"), (5, Parity::Even, "1234.0", "-7.5")] {
            let v = dec(v);
            let eps = dec(eps);
            let explicit = qes_recurrence_p(degree, parity, &v, &eps);
            let generic = recurrence_p(&build_heun_coeffs_m2(parity, &v, &eps).unwrap(), degree);
            for (a, b) in explicit.iter().zip(&generic) {
                let scale = a.abs().max(BigReal::one(p()));
                assert!((a - b).abs() < scale * BigReal::pow10(-85, p()));
            }
        }
    }

    #[test]
    fn zero_degree_enumeration() {
        let e = qes_enumerate(0, Parity::Even, &EnumerateOptions::default()).unwrap();
        assert_eq!(e.pairs.len(), 1);
        assert!(e.pairs[0].v.close_to(&zero_degree_even_v(), &BigReal::pow10(-80, p())));
        let e = qes_enumerate(0, Parity::Odd, &EnumerateOptions::default()).unwrap();
        assert_eq!(e.pairs.len(), 1);
        assert!(e.pairs[0].v.close_to(&zero_degree_odd_v(), &BigReal::pow10(-80, p())));
    }

    #[test]
    fn narrow_window_is_empty() {
        let opts = EnumerateOptions {
            t_max: Some(num(5)),
            ..EnumerateOptions::default()
        };
        let e = qes_enumerate(0, Parity::Even, &opts).unwrap();
        assert!(e.pairs.is_empty());
        assert_eq!(e.t_range.1, num(5));
    }

    #[test]
    fn first_degree_pairs() {
        let e = qes_enumerate(1, Parity::Even, &EnumerateOptions::default()).unwrap();
        let got: Vec<(f64, f64)> = e.pairs.iter().map(|p| (p.v.to_f64(), p.epsilon.to_f64())).collect();
        assert_eq!(got.len(), 2);
        assert!((got[0].0 - 149.57425693331263).abs() < 1e-10);
        assert!((got[0].1 + 6.838370069149139).abs() < 1e-10);
        assert!((got[1].0 - 595.8386548720352).abs() < 1e-9);
        assert!((got[1].1 + 75.77534086014268).abs() < 1e-10);

        let e = qes_enumerate(1, Parity::Odd, &EnumerateOptions::default()).unwrap();
        let got: Vec<(f64, f64)> = e.pairs.iter().map(|p| (p.v.to_f64(), p.epsilon.to_f64())).collect();
        assert!((got[0].0 - 426.2320480269515).abs() < 1e-9);
        assert!((got[0].1 + 33.9037657499279850).abs() < 1e-10);
        assert!((got[1].0 - 1092.7989741175716).abs() < 1e-9);
        assert!((got[1].1 + 144.69094807218215).abs() < 1e-10);
    }

    /// Printed first-degree constraint in (ε, v), used as an independent oracle.
    fn printed_first_degree_constraint(beta: &BigReal, v: &BigReal, eps: &BigReal) -> BigReal {
        let s = (-eps).sqrt();
        let t = v.sqrt();
        let s3 = &s * &s * &s;
        let term1 = v.square() - num(4) * (&s + 2) * v * &t;
        let term2 = -(num(2) * (eps - &(&s * 5) + &(beta * 4 * (&s + 2)) - 3) * v);
        let term3 = num(4) * (num(7) + beta * 4 * (num(3) + &s * 4 - eps) + &s * 11 + &s3 - eps * 5) * &t;
        let term4 = beta.square() * 16 * (num(3) + &s * 4 - eps) + &s * 6 + &s3 * 6 - eps * 11 + eps.square()
            - beta * 8 * ((&s + 5) * eps - 3 - &s * 7);
        term1 + term2 + term3 + term4
    }

    #[test]
    fn first_degree_roots_solve_printed_constraint() {
        for parity in Parity::BOTH {
            let e = qes_enumerate(1, parity, &EnumerateOptions::default()).unwrap();
            let beta = parity.beta(p());
            for pair in &e.pairs {
                let r = printed_first_degree_constraint(&beta, &pair.v, &pair.epsilon);
                assert!(r.abs() < BigReal::pow10(-70, p()), "{r}");
            }
            // and the printed constraint has no other root on the curve
            let t0 = threshold_sqrt_v(1, parity, p());
            let g = |t: &BigReal| {
                printed_first_degree_constraint(&beta, &t.square(), &epsilon_from_sqrt_v(t, &t0))
            };
            let grid = roots::uniform_grid(&t0, &(&t0 + 100), 4096);
            let vals = roots::evaluate_grid(&g, &grid);
            let roots = roots::refine_all(&g, roots::sign_changes(&grid, &vals), &BigReal::pow10(-80, p()));
            assert_eq!(roots.len(), e.pairs.len());
            for (r, pair) in roots.iter().zip(&e.pairs) {
                assert!(r.close_to(&pair.v.sqrt(), &BigReal::pow10(-70, p())));
            }
        }
    }

    #[test]
    fn first_degree_coefficient_matches_printed_form() {
        for parity in Parity::BOTH {
            let beta = parity.beta(p());
            for pair in qes_enumerate(1, parity, &EnumerateOptions::default()).unwrap().pairs {
                let s = (-&pair.epsilon).sqrt();
                let t = pair.v.sqrt();
                let printed = ((&beta * 4 + &t * 2 + &s) * (&s + 1) - &pair.v) / ((&s + 1) * 4);
                assert!(pair.f_coeffs[1].close_to(&printed, &BigReal::pow10(-85, p())));
            }
        }
        // printed polynomial factor of the first even state
        let pair = &qes_enumerate(1, Parity::Even, &EnumerateOptions::default()).unwrap().pairs[0];
        assert!((pair.f_coeffs[1].to_f64() + 3.575137130402).abs() < 1e-11);
        assert!((pair.alpha().to_f64() * 2.0 - 2.615027737739).abs() < 1e-11);
        assert!((pair.gamma().to_f64() - 6.115027737739).abs() < 1e-11);
    }

    #[test]
    fn zero_degree_wavefunctions() {
        let pairs = qes_enumerate(0, Parity::Even, &EnumerateOptions::default()).unwrap().pairs;
        let pair = &pairs[0];
        let sqrt13 = num(13).sqrt();
        for z in ["0", "0.5", "1", "2"] {
            let z = dec(z);
            let sech = z.sech();
            let expect = sech.powf(&((&sqrt13 + 1) / 2)) * (-((&sqrt13 + 4) * sech.square() / 2)).exp();
            assert!(qes_wavefunction(pair, &z).close_to(&expect, &BigReal::pow10(-80, p())));
        }
        let odd = &qes_enumerate(0, Parity::Odd, &EnumerateOptions::default()).unwrap().pairs[0];
        assert!(qes_wavefunction(odd, &num(0)).is_zero());
    }

    #[test]
    fn heun_engine_rebuilds_the_polynomial() {
        for parity in Parity::BOTH {
            let pairs = qes_enumerate(3, parity, &EnumerateOptions::default()).unwrap().pairs;
            for pair in &pairs {
                let c = build_heun_coeffs_m2(parity, &pair.v, &pair.epsilon).unwrap();
                let sol = build_solution(&c, 3).unwrap();
                for (a, b) in sol.coeffs.iter().zip(&pair.f_coeffs) {
                    assert!(a.close_to(b, &BigReal::pow10(-40, p())));
                }
                for i in 0..10 {
                    let eta = BigReal::from_ratio(i, 9, p());
                    assert!(ode_residual(&c, &sol, &eta).abs() < BigReal::pow10(-40, p()));
                }
            }
        }
    }

    #[test]
    fn enumerated_states_satisfy_the_equation() {
        for degree in 0..=2 {
            for parity in Parity::BOTH {
                for pair in qes_enumerate(degree, parity, &EnumerateOptions::default()).unwrap().pairs {
                    let spec = PotentialSpec::new(2, pair.v.clone()).unwrap();
                    let psi = |z: &BigReal| qes_wavefunction(&pair, z);
                    let check = spec.residual_check(&psi, &pair.epsilon, &num(-6), &num(6), 121);
                    assert!(check.relative < 1e-8, "N={degree} {parity}: {}", check.relative);
                }
            }
        }
    }
}
