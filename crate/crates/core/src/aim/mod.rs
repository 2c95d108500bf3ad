//! Asymptotic iteration for the bound states of `V_m`, `m ∈ {0, 1, 2}`.
//!
//! After `ψ = η^α (1-η)^β e^{-γη} y(η)` the reduced equation reads
//! `y'' = λ0 y' + s0 y`. Iterating
//!
//! ```text
//! λ_n = λ'_{n-1} + s_{n-1} + λ0 λ_{n-1}
//! s_n = s'_{n-1} + s0 λ_{n-1}
//! ```
//!
//! the energies are the roots of `δ_n = λ_n s_{n-1} - λ_{n-1} s_n` at a
//! fixed point `r0` as `n` grows. Every `λ_n, s_n` is carried as a
//! truncated Taylor series at `r0`; one iteration consumes one order.

mod scan;
mod series_m1;

pub use scan::{aim_find_eigenvalues, AimOptions};
pub use series_m1::{m1_series_coefficients, m1_wavefunction, m1_wavefunction_with_tolerance};

use crate::error::{Error, Result};
use crate::potential::PotentialSpec;
use crate::precision::{BigReal, Precision, TaylorSeries};
use crate::spectrum::Parity;

/// One `(m, β, v)` eigenproblem and where to expand it.
#[derive(Debug, Clone)]
pub struct AimProblem {
    pub m: u32,
    pub parity: Parity,
    pub v: BigReal,
    /// Expansion point in `(0, 1)`.
    pub r0: BigReal,
    /// Order of the initial series; bounds the number of iterations.
    pub taylor_order: usize,
    /// Override for the `e^{-γη}` exponent. `None` picks the natural
    /// choice: `0` for `m ≤ 1`, `√v/2` for `m = 2`.
    pub gamma: Option<BigReal>,
}

impl AimProblem {
    /// Problem at `r0 = 1/2` with room for `n_max` iterations.
    pub fn new(m: u32, parity: Parity, v: BigReal, n_max: usize) -> Result<Self> {
        let r0 = BigReal::half(v.precision());
        Self::with_r0(m, parity, v, r0, n_max)
    }

    pub fn with_r0(m: u32, parity: Parity, v: BigReal, r0: BigReal, n_max: usize) -> Result<Self> {
        if m > 2 {
            return Err(Error::Domain(format!("asymptotic iteration supports m ≤ 2, got {m}")));
        }
        if !v.is_sign_positive() || v.is_zero() {
            return Err(Error::Domain("v must be positive".into()));
        }
        if !(r0 > 0 && r0 < 1) {
            return Err(Error::Domain(format!("r0 must lie in (0, 1), got {}", r0.to_significant(10))));
        }
        let r0 = r0.with_precision(v.precision());
        Ok(AimProblem {
            m,
            parity,
            v,
            r0,
            taylor_order: n_max + 2,
            gamma: None,
        })
    }

    /// Sets the `γ` experiment flag (only meaningful for `m ≥ 1`).
    pub fn with_gamma(mut self, gamma: BigReal) -> Result<Self> {
        if self.m == 0 && !gamma.is_zero() {
            return Err(Error::Domain("γ must vanish for m = 0".into()));
        }
        if gamma.is_sign_negative() {
            return Err(Error::Domain("γ must be non-negative".into()));
        }
        self.gamma = Some(gamma.with_precision(self.precision()));
        Ok(self)
    }

    pub fn precision(&self) -> Precision {
        self.v.precision()
    }

    pub fn potential(&self) -> PotentialSpec {
        PotentialSpec::new(self.m, self.v.clone()).expect("v validated positive")
    }

    pub fn gamma_value(&self) -> BigReal {
        match (&self.gamma, self.m) {
            (Some(g), _) => g.clone(),
            (None, 2) => self.v.sqrt() / 2,
            (None, _) => BigReal::zero(self.precision()),
        }
    }

    /// `(V_min, 0)`, the open interval holding every bound energy.
    pub fn energy_window(&self) -> (BigReal, BigReal) {
        let (_, v_min) = self.potential().minimum();
        (v_min, BigReal::zero(self.precision()))
    }

    /// `λ0` and `s0` at energy `ε` as constants plus simple poles at `η = 0, 1`.
    pub(crate) fn coefficient_functions(&self, epsilon: &BigReal) -> (PoleSum, PoleSum) {
        let prec = self.precision();
        let alpha = (-epsilon).sqrt() / 2;
        let gamma = self.gamma_value();
        let four_beta = BigReal::from_i64(self.parity.four_beta(), prec);
        let two_alpha = &alpha * 2;
        // 2α + 4β + 8αβ, shared by both residues
        let core = &two_alpha + &four_beta + &two_alpha * &four_beta;

        let lambda0 = PoleSum {
            constant: &gamma * 2,
            at_zero: -(&two_alpha + 1),
            at_one: -(&four_beta + 1) / 2,
        };
        let s0 = match self.m {
            0 => {
                let c = (&core - epsilon - &self.v) / 4;
                PoleSum {
                    constant: BigReal::zero(prec),
                    at_one: -c.clone(),
                    at_zero: c,
                }
            }
            _ => {
                let g4 = &gamma * 4;
                let at_zero = (&core + &two_alpha * &g4 + &g4 - epsilon - &self.v) / 4;
                let at_one = (epsilon + &(&gamma * 2) + &(&four_beta * &gamma * 2) - &core) / 4;
                let constant = if self.m == 2 {
                    &self.v / 4 - gamma.square()
                } else {
                    -gamma.square()
                };
                PoleSum { constant, at_zero, at_one }
            }
        };
        (lambda0, s0)
    }
}

/// `constant + at_zero / η + at_one / (η - 1)`.
#[derive(Debug, Clone)]
pub(crate) struct PoleSum {
    pub constant: BigReal,
    pub at_zero: BigReal,
    pub at_one: BigReal,
}

impl PoleSum {
    #[cfg(test)]
    pub fn value(&self, eta: &BigReal) -> BigReal {
        &self.constant + &(&self.at_zero / eta) + &(&self.at_one / &(eta - 1))
    }

    pub fn to_series(&self, r0: &BigReal, order: usize) -> TaylorSeries {
        let prec = r0.precision();
        let zero = BigReal::zero(prec);
        let one = BigReal::one(prec);
        let constant = TaylorSeries::constant(r0.clone(), self.constant.clone(), order);
        let p0 = TaylorSeries::simple_pole(&self.at_zero, &zero, r0, order).expect("r0 ≠ 0");
        let p1 = TaylorSeries::simple_pole(&self.at_one, &one, r0, order).expect("r0 ≠ 1");
        constant.add(&p0).and_then(|s| s.add(&p1)).expect("same center")
    }

    /// `(self · f)` truncated at `order`, in linear time.
    ///
    /// For a unit pole `1 / (η - p)` expanded at `r0`, `d = r0 - p`, the
    /// product coefficients obey `h_k = (f_k - h_{k-1}) / d`.
    pub fn mul_series(&self, f: &TaylorSeries, r0: &BigReal, order: usize) -> TaylorSeries {
        let prec = f.precision();
        let coeffs = f.coeffs();
        let fk = |k: usize| coeffs.get(k).cloned().unwrap_or_else(|| BigReal::zero(prec));
        let d0 = r0.clone();
        let d1 = r0 - 1;
        let mut h0 = BigReal::zero(prec);
        let mut h1 = BigReal::zero(prec);
        let mut out = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let f_k = fk(k);
            h0 = (&f_k - &h0) / &d0;
            h1 = (&f_k - &h1) / &d1;
            let mut term = &self.constant * &f_k;
            term.add_product(&self.at_zero, &h0);
            term.add_product(&self.at_one, &h1);
            out.push(term);
        }
        TaylorSeries::new(r0.clone(), out)
    }
}

/// `λ_n, s_n` and their predecessors, all expanded at `r0`.
#[derive(Debug, Clone)]
pub struct AimState {
    pub n: usize,
    pub lambda_n: TaylorSeries,
    pub s_n: TaylorSeries,
    pub lambda_prev: TaylorSeries,
    pub s_prev: TaylorSeries,
    lambda0: PoleSum,
    s0: PoleSum,
}

impl AimState {
    pub fn lambda0_series(&self) -> TaylorSeries {
        self.lambda0.to_series(self.lambda_n.center(), self.lambda_n.order())
    }

    pub fn s0_series(&self) -> TaylorSeries {
        self.s0.to_series(self.lambda_n.center(), self.lambda_n.order())
    }

    /// Orders still available for differentiation.
    pub fn remaining_order(&self) -> usize {
        self.lambda_n.order()
    }
}

/// The `n = 0` state at energy `ε ∈ (V_min, 0)`.
pub fn aim_init(problem: &AimProblem, epsilon: &BigReal) -> Result<AimState> {
    let (lo, hi) = problem.energy_window();
    if !(epsilon > &lo && epsilon < &hi) {
        return Err(Error::Domain(format!(
            "ε = {} outside ({}, 0)",
            epsilon.to_significant(15),
            lo.to_significant(15)
        )));
    }
    Ok(init_unchecked(problem, &epsilon.with_precision(problem.precision())))
}

fn init_unchecked(problem: &AimProblem, epsilon: &BigReal) -> AimState {
    let (lambda0, s0) = problem.coefficient_functions(epsilon);
    let order = problem.taylor_order;
    let lambda_n = lambda0.to_series(&problem.r0, order);
    let s_n = s0.to_series(&problem.r0, order);
    // λ_{-1} = 1, s_{-1} = 0 reproduces the first step from the zeroth.
    let lambda_prev = TaylorSeries::constant(problem.r0.clone(), BigReal::one(problem.precision()), order + 1);
    let s_prev = TaylorSeries::zero(problem.r0.clone(), order + 1);
    AimState {
        n: 0,
        lambda_n,
        s_n,
        lambda_prev,
        s_prev,
        lambda0,
        s0,
    }
}

/// One iteration, dropping one Taylor order.
pub fn aim_iterate(state: AimState) -> Result<AimState> {
    let order = state.lambda_n.order();
    if order == 0 {
        return Err(Error::IterationBudget(state.n));
    }
    let next_order = order - 1;
    let r0 = state.lambda_n.center().clone();
    let mut lambda = state.lambda_n.derivative_plus(&state.s_n, next_order);
    lambda.add_in_place(&state.lambda0.mul_series(&state.lambda_n, &r0, next_order));
    let mut s = state.s_n.derivative_plus(&TaylorSeries::zero(r0.clone(), 0), next_order);
    s.add_in_place(&state.s0.mul_series(&state.lambda_n, &r0, next_order));
    Ok(AimState {
        n: state.n + 1,
        lambda_prev: state.lambda_n,
        s_prev: state.s_n,
        lambda_n: lambda,
        s_n: s,
        lambda0: state.lambda0,
        s0: state.s0,
    })
}

/// `δ_n = λ_n(r0) s_{n-1}(r0) - λ_{n-1}(r0) s_n(r0)`.
pub fn aim_delta(state: &AimState) -> BigReal {
    state.lambda_n.value_at_center() * state.s_prev.value_at_center()
        - state.lambda_prev.value_at_center() * state.s_n.value_at_center()
}

/// `δ_1 ..= δ_{n_max}` at one energy, without the range check.
pub(crate) fn delta_sequence(problem: &AimProblem, epsilon: &BigReal, n_max: usize) -> Vec<BigReal> {
    let mut problem = problem.clone();
    problem.taylor_order = problem.taylor_order.max(n_max + 2);
    let mut state = init_unchecked(&problem, epsilon);
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        state = aim_iterate(state).expect("order sized for n_max");
        out.push(aim_delta(&state));
    }
    out
}
