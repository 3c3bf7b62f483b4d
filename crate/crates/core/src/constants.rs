//! Closed-form sharp constants.
//!
//! Every constant is assembled in log space: each factor contributes its own
//! logarithm and the sum is exponentiated once. Near `s = n/2` individual
//! factors blow up while the product stays well conditioned.

use std::f64::consts::PI;

use serde::Serialize;

use crate::special::{gamma, sinc_sigma};
use crate::{Error, Result};

/// The pair `(n, s)` with `n ≥ 1` and `s > n/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SobolevIndex {
    n: u32,
    s: f64,
}

impl SobolevIndex {
    pub fn new(n: u32, s: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("dimension n must be at least 1"));
        }
        if !s.is_finite() || s <= f64::from(n) / 2.0 {
            return Err(Error::domain(format!(
                "regularity must satisfy s > n/2 (n = {n}, so s > {}), got s = {s}",
                f64::from(n) / 2.0
            )));
        }
        Ok(Self { n, s })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub(crate) fn nf(&self) -> f64 {
        f64::from(self.n)
    }

    /// The interpolation exponent `n/(2s) ∈ (0, 1)`.
    pub fn theta(&self) -> f64 {
        self.nf() / (2.0 * self.s)
    }

    /// `2s - n > 0`.
    pub fn excess(&self) -> f64 {
        2.0 * self.s - self.nf()
    }
}

fn ln_embedding(idx: &SobolevIndex) -> f64 {
    let n = idx.nf();
    let half = n / 2.0;
    // theta < 1 by construction, so neither call can fail
    let sinc = sinc_sigma(idx.theta()).expect("theta in [0,1)");
    let g = gamma(half).expect("n/2 > 0");
    -(n / 4.0) * (4.0 * PI).ln() - 0.5 * (half * g).ln() - 0.5 * sinc.ln()
}

fn ln_young(idx: &SobolevIndex) -> f64 {
    let n = idx.nf();
    let s = idx.s;
    let excess = idx.excess();
    -(n / (4.0 * s)) * (n / excess).ln() + 0.5 * (2.0 * s / excess).ln()
}

/// Sharp Gagliardo–Nirenberg constant `K(n,s)` in
/// `‖u‖_∞ ≤ K ‖u‖_2^{1-n/2s} ‖u‖_{Ḣ^s}^{n/2s}`.
///
/// For integral `s = m` this is the constant of the classical inequality with
/// `‖D^m u‖_2` in place of the Ḣ^m seminorm.
pub fn gn_constant(idx: &SobolevIndex) -> f64 {
    (ln_embedding(idx) + ln_young(idx)).exp()
}

/// Sharp constant `C(n,s)` in `‖u‖_∞ ≤ C ‖u‖_{H^s}`.
pub fn embedding_constant(idx: &SobolevIndex) -> f64 {
    ln_embedding(idx).exp()
}

/// Factor `Y(n,s)` with `Y A^{1-n/2s} B^{n/2s} ≤ (A² + B²)^{1/2}`.
///
/// `gn_constant = embedding_constant × young_factor`.
pub fn young_factor(idx: &SobolevIndex) -> f64 {
    ln_young(idx).exp()
}

/// Minimiser of the dilation objective, see [`optimal_lambda`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalScaling {
    pub lambda: f64,
    /// Set when `a = 0`: the objective is monotone and `lambda` is reported as 0.
    pub degenerate: bool,
}

/// `f(λ) = λ^{-n} a² + λ^{2s-n} b²`, the squared `H^s` norm of `u(λ·)`
/// when `a = ‖u‖_2` and `b = ‖u‖_{Ḣ^s}`.
pub fn scaling_objective(idx: &SobolevIndex, a: f64, b: f64, lambda: f64) -> f64 {
    let n = idx.nf();
    lambda.powf(-n) * a * a + lambda.powf(idx.excess()) * b * b
}

/// `λ* = (n a² / ((2s-n) b²))^{1/(2s)}`, the unique minimiser of [`scaling_objective`].
pub fn optimal_lambda(idx: &SobolevIndex, a: f64, b: f64) -> Result<OptimalScaling> {
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::domain(format!(
            "optimal_lambda requires b > 0, got {b}"
        )));
    }
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::domain(format!(
            "optimal_lambda requires a >= 0, got {a}"
        )));
    }
    if a == 0.0 {
        return Ok(OptimalScaling {
            lambda: 0.0,
            degenerate: true,
        });
    }
    let ratio = a / b;
    let lambda = (idx.nf() / idx.excess() * ratio * ratio).powf(1.0 / (2.0 * idx.s));
    Ok(OptimalScaling {
        lambda,
        degenerate: false,
    })
}
