//! Truncated Taylor series about a fixed expansion point.
//!
//! Coefficients are normalized (`coeffs[k] = f^(k)(r0) / k!`), so
//! differentiation is an index shift and products are Cauchy convolutions.

use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    center: BigReal,
    coeffs: Vec<BigReal>,
}

impl TaylorSeries {
    /// Series with the given coefficients; an empty list is read as the zero constant.
    pub fn new(center: BigReal, mut coeffs: Vec<BigReal>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(BigReal::zero(center.precision()));
        }
        TaylorSeries { center, coeffs }
    }

    pub fn zero(center: BigReal, order: usize) -> Self {
        let prec = center.precision();
        TaylorSeries {
            coeffs: vec![BigReal::zero(prec); order + 1],
            center,
        }
    }

    pub fn constant(center: BigReal, value: BigReal, order: usize) -> Self {
        let mut s = Self::zero(center, order);
        s.coeffs[0] = value;
        s
    }

    /// Expansion of `c / (x - pole)` about `center`:
    /// `coeff[k] = c (-1)^k / (center - pole)^(k+1)`.
    pub fn simple_pole(
        c: &BigReal,
        pole: &BigReal,
        center: &BigReal,
        order: usize,
    ) -> Result<Self> {
        let offset = center - pole;
        if offset.is_zero() {
            return Err(Error::PoleAtCenter(center.to_significant(20)));
        }
        let ratio = -offset.recip();
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = c / &offset;
        for _ in 0..=order {
            let next = &term * &ratio;
            coeffs.push(term);
            term = next;
        }
        Ok(TaylorSeries {
            center: center.clone(),
            coeffs,
        })
    }

    pub fn center(&self) -> &BigReal {
        &self.center
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn precision(&self) -> Precision {
        self.center.precision()
    }

    /// Value at the expansion point.
    pub fn value_at_center(&self) -> &BigReal {
        &self.coeffs[0]
    }

    /// Horner evaluation at `center + offset`.
    pub fn eval(&self, offset: &BigReal) -> BigReal {
        let mut acc = self.coeffs[self.order()].clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &acc * offset + c;
        }
        acc
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(order + 1);
        s
    }

    /// Termwise derivative; a constant differentiates to the zero constant.
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(self.center.clone(), 0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as i64)
            .collect();
        TaylorSeries {
            center: self.center.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, factor: &BigReal) -> Self {
        TaylorSeries {
            center: self.center.clone(),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    fn check_center(&self, other: &TaylorSeries) -> Result<()> {
        if self.center != other.center {
            return Err(Error::CenterMismatch(
                self.center.to_significant(20),
                other.center.to_significant(20),
            ));
        }
        Ok(())
    }

    fn coeff_or_zero(&self, k: usize) -> BigReal {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| BigReal::zero(self.precision()))
    }

    /// Sum, difference or product truncated at the larger of the two orders,
    /// the shorter operand padded with zeros.
    pub fn arith(&self, other: &TaylorSeries, op: SeriesOp) -> Result<Self> {
        self.check_center(other)?;
        let order = self.order().max(other.order());
        let coeffs = match op {
            SeriesOp::Add => (0..=order)
                .map(|k| self.coeff_or_zero(k) + other.coeff_or_zero(k))
                .collect(),
            SeriesOp::Sub => (0..=order)
                .map(|k| self.coeff_or_zero(k) - other.coeff_or_zero(k))
                .collect(),
            SeriesOp::Mul => return Ok(self.mul_truncated(other, order)),
        };
        Ok(TaylorSeries {
            center: self.center.clone(),
            coeffs,
        })
    }

    pub fn add(&self, other: &TaylorSeries) -> Result<Self> {
        self.arith(other, SeriesOp::Add)
    }

    pub fn sub(&self, other: &TaylorSeries) -> Result<Self> {
        self.arith(other, SeriesOp::Sub)
    }

    pub fn mul(&self, other: &TaylorSeries) -> Result<Self> {
        self.arith(other, SeriesOp::Mul)
    }

    /// Cauchy product keeping coefficients `0..=order`. Missing coefficients
    /// of either factor are treated as zero. Centers are assumed equal.
    pub(crate) fn mul_truncated(&self, other: &TaylorSeries, order: usize) -> Self {
        let prec = self.precision().max(other.precision());
        let coeffs = (0..=order)
            .map(|k| {
                let mut acc = BigReal::zero(prec);
                let lo = k.saturating_sub(other.order());
                let hi = k.min(self.order());
                for i in lo..=hi {
                    acc.add_product(&self.coeffs[i], &other.coeffs[k - i]);
                }
                acc
            })
            .collect();
        TaylorSeries {
            center: self.center.clone(),
            coeffs,
        }
    }

    /// `self' + other` truncated at `order`, the pieces of one AIM step.
    pub(crate) fn derivative_plus(&self, other: &TaylorSeries, order: usize) -> Self {
        let coeffs = (0..=order)
            .map(|k| {
                let mut acc = match self.coeffs.get(k + 1) {
                    Some(c) => c * (k as i64 + 1),
                    None => BigReal::zero(self.precision()),
                };
                if let Some(c) = other.coeffs.get(k) {
                    acc += c;
                }
                acc
            })
            .collect();
        TaylorSeries {
            center: self.center.clone(),
            coeffs,
        }
    }

    pub(crate) fn add_in_place(&mut self, other: &TaylorSeries) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }
}
