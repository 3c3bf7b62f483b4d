//! Numerical verification of the supnorm inequalities and their sharpness.
//!
//! Every check returns an [`InequalityReport`]. Grid checks evaluate both
//! sides on a [`GridFunction`]; the exact path uses grid-free extremizer
//! norms from [`extremizer_norms_exact`].

use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::constants::{
    embedding_constant, gn_constant, optimal_lambda, scaling_objective, young_factor, SobolevIndex,
};
use crate::extremizer::{
    extremizer_grid_function, extremizer_norms_exact, random_band_limited, ExtremizerSpec,
};
use crate::report::{Digits17, GridMeta, InequalityId, InequalityReport};
use crate::spectral::{
    l1_bound_check, norms, norms_with_spectrum, GridFunction, GridSpec, NormBundle,
};
use crate::{Error, Result};

/// Pass/fail slack for inequalities evaluated on a grid.
pub const GRID_INEQUALITY_TOL: f64 = 1e-9;
/// How far below 1 the gridded extremizer may fall.
pub const GRID_SHARPNESS_TOL: f64 = 1e-4;
/// Distance from 1 allowed for the grid-free sharpness ratio.
pub const EXACT_SHARPNESS_TOL: f64 = 1e-9;
/// Young's inequality is pure arithmetic.
pub const YOUNG_TOL: f64 = 1e-12;

fn check_dimension(u: &GridFunction, idx: &SobolevIndex) -> Result<()> {
    if u.spec().n() != idx.n() {
        return Err(Error::domain(format!(
            "grid dimension {} does not match n = {}",
            u.spec().n(),
            idx.n()
        )));
    }
    Ok(())
}

/// Interpolation check from precomputed norms.
pub fn interpolation_report(
    nb: &NormBundle,
    idx: &SobolevIndex,
    tolerance: f64,
    meta: GridMeta,
) -> InequalityReport {
    let k = gn_constant(idx);
    let th = idx.theta();
    let rhs = k * nb.l2.powf(1.0 - th) * nb.hs_semi.powf(th);
    InequalityReport::new(
        InequalityId::Interpolation,
        idx.n(),
        Some(idx.s()),
        nb.sup,
        rhs,
        k,
        tolerance,
        meta,
    )
}

/// Embedding check from precomputed norms.
pub fn embedding_report(
    nb: &NormBundle,
    idx: &SobolevIndex,
    tolerance: f64,
    meta: GridMeta,
) -> InequalityReport {
    let c = embedding_constant(idx);
    InequalityReport::new(
        InequalityId::Embedding,
        idx.n(),
        Some(idx.s()),
        nb.sup,
        c * nb.hs_full,
        c,
        tolerance,
        meta,
    )
}

/// `‖u‖_∞ ≤ K(n,s) ‖u‖_2^{1-n/2s} ‖u‖_{Ḣ^s}^{n/2s}` on the grid.
pub fn check_interpolation(
    u: &GridFunction,
    idx: &SobolevIndex,
    tolerance: f64,
) -> Result<InequalityReport> {
    check_dimension(u, idx)?;
    let nb = norms(u, idx.s())?;
    Ok(interpolation_report(
        &nb,
        idx,
        tolerance,
        GridMeta::Grid(*u.spec()),
    ))
}

/// `‖u‖_∞ ≤ C(n,s) ‖u‖_{H^s}` on the grid.
pub fn check_embedding(
    u: &GridFunction,
    idx: &SobolevIndex,
    tolerance: f64,
) -> Result<InequalityReport> {
    check_dimension(u, idx)?;
    let nb = norms(u, idx.s())?;
    Ok(embedding_report(
        &nb,
        idx,
        tolerance,
        GridMeta::Grid(*u.spec()),
    ))
}

/// `Y(n,s) a^{1-n/2s} b^{n/2s} ≤ (a² + b²)^{1/2}`; equality iff `n a² = (2s-n) b²`.
pub fn check_young(a: f64, b: f64, idx: &SobolevIndex, tolerance: f64) -> Result<InequalityReport> {
    if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
        return Err(Error::domain(format!(
            "young check needs a, b > 0, got ({a}, {b})"
        )));
    }
    let y = young_factor(idx);
    let th = idx.theta();
    let lhs = y * a.powf(1.0 - th) * b.powf(th);
    let rhs = a.hypot(b);
    Ok(InequalityReport::new(
        InequalityId::Young,
        idx.n(),
        Some(idx.s()),
        lhs,
        rhs,
        y,
        tolerance,
        GridMeta::Exact,
    ))
}

/// All three grid inequalities for one function, sharing a single transform.
pub fn check_all(
    u: &GridFunction,
    idx: &SobolevIndex,
    tolerance: f64,
) -> Result<[InequalityReport; 3]> {
    check_dimension(u, idx)?;
    let spectrum = u.forward();
    let nb = norms_with_spectrum(u, &spectrum, idx.s())?;
    let meta = GridMeta::Grid(*u.spec());
    Ok([
        l1_bound_check(u, tolerance),
        embedding_report(&nb, idx, tolerance, meta),
        interpolation_report(&nb, idx, tolerance, meta),
    ])
}

/// `u(λ* x)`, the dilation that minimises the `H^s` norm at fixed supnorm.
///
/// At `λ*` the embedding bound of the dilated function coincides with the
/// interpolation bound of `u`.
pub fn optimally_dilated(u: &GridFunction, idx: &SobolevIndex) -> Result<GridFunction> {
    check_dimension(u, idx)?;
    let nb = norms(u, idx.s())?;
    let star = optimal_lambda(idx, nb.l2, nb.hs_semi)?;
    if star.degenerate {
        return Err(Error::domain("cannot dilate the zero function optimally"));
    }
    u.dilate(star.lambda)
}

/// Samples of the dilation objective `f(λ) = λ^{-n} A² + λ^{2s-n} B²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingSweepResult {
    pub n: u32,
    pub s: f64,
    /// `A = ‖u‖_2`
    pub a: f64,
    /// `B = ‖u‖_{Ḣ^s}`
    pub b: f64,
    pub lambdas: Vec<f64>,
    pub objective: Vec<f64>,
    pub argmin_sampled: f64,
    pub min_value_sampled: f64,
    pub lambda_star: f64,
    /// `Y² A^{2(1-n/2s)} B^{n/s}`
    pub min_value_closed_form: f64,
    /// Spacing of the sample grid in `ln λ`.
    pub log_step: f64,
    pub degenerate: bool,
}

impl ScalingSweepResult {
    /// Sampled argmin within one log step of the closed-form `λ*`.
    pub fn brackets_optimum(&self) -> bool {
        self.degenerate
            || (self.argmin_sampled / self.lambda_star).ln().abs() <= self.log_step * (1.0 + 1e-9)
    }

    pub fn min_value_relative_error(&self) -> f64 {
        if self.degenerate {
            return 0.0;
        }
        (self.min_value_sampled - self.min_value_closed_form).abs() / self.min_value_closed_form
    }
}

impl Serialize for ScalingSweepResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let lambdas: Vec<_> = self.lambdas.iter().map(Digits17).collect();
        let objective: Vec<_> = self.objective.iter().map(Digits17).collect();
        let mut st = serializer.serialize_struct("ScalingSweepResult", 14)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("s", &Digits17(&self.s))?;
        st.serialize_field("a", &Digits17(&self.a))?;
        st.serialize_field("b", &Digits17(&self.b))?;
        st.serialize_field("lambda_star", &Digits17(&self.lambda_star))?;
        st.serialize_field("argmin_sampled", &Digits17(&self.argmin_sampled))?;
        st.serialize_field("min_value_sampled", &Digits17(&self.min_value_sampled))?;
        st.serialize_field(
            "min_value_closed_form",
            &Digits17(&self.min_value_closed_form),
        )?;
        st.serialize_field("log_step", &Digits17(&self.log_step))?;
        st.serialize_field("brackets_optimum", &self.brackets_optimum())?;
        st.serialize_field("degenerate", &self.degenerate)?;
        st.serialize_field("lambdas", &lambdas)?;
        st.serialize_field("objective", &objective)?;
        st.serialize_field("version", crate::VERSION)?;
        st.end()
    }
}

/// Sweep of `f` over `points` log-spaced values in `[λ*/10, 10λ*]`.
pub fn lambda_sweep_from_norms(
    a: f64,
    b: f64,
    idx: &SobolevIndex,
    points: usize,
) -> Result<ScalingSweepResult> {
    if points < 16 {
        return Err(Error::domain(format!(
            "lambda sweep needs at least 16 points, got {points}"
        )));
    }
    let degenerate_result = || ScalingSweepResult {
        n: idx.n(),
        s: idx.s(),
        a,
        b,
        lambdas: Vec::new(),
        objective: Vec::new(),
        argmin_sampled: 0.0,
        min_value_sampled: 0.0,
        lambda_star: 0.0,
        min_value_closed_form: 0.0,
        log_step: 0.0,
        degenerate: true,
    };
    if a == 0.0 && b == 0.0 {
        return Ok(degenerate_result());
    }
    let star = optimal_lambda(idx, a, b)?;
    if star.degenerate {
        return Ok(degenerate_result());
    }
    let lo = (star.lambda / 10.0).ln();
    let hi = (star.lambda * 10.0).ln();
    let log_step = (hi - lo) / (points - 1) as f64;
    let lambdas: Vec<f64> = (0..points)
        .map(|i| (lo + i as f64 * log_step).exp())
        .collect();
    let objective: Vec<f64> = lambdas
        .iter()
        .map(|&l| scaling_objective(idx, a, b, l))
        .collect();
    let (best, min_value_sampled) = objective
        .iter()
        .copied()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("points >= 16");
    let th = idx.theta();
    let y = young_factor(idx);
    let min_value_closed_form = y * y * a.powf(2.0 * (1.0 - th)) * b.powf(2.0 * th);
    Ok(ScalingSweepResult {
        n: idx.n(),
        s: idx.s(),
        a,
        b,
        argmin_sampled: lambdas[best],
        lambdas,
        objective,
        min_value_sampled,
        lambda_star: star.lambda,
        min_value_closed_form,
        log_step,
        degenerate: false,
    })
}

/// [`lambda_sweep_from_norms`] with `A`, `B` measured on `u`.
pub fn lambda_sweep(
    u: &GridFunction,
    idx: &SobolevIndex,
    points: usize,
) -> Result<ScalingSweepResult> {
    check_dimension(u, idx)?;
    let nb = norms(u, idx.s())?;
    lambda_sweep_from_norms(nb.l2, nb.hs_semi, idx, points)
}

/// How the extremizer's norms are obtained in [`sharpness_ratio`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SharpnessMethod {
    /// Radial quadrature; no grid.
    Exact,
    /// Inverse transform of the sampled spectrum on this grid.
    Grid(GridSpec),
}

/// Default grids for the gridded extremizer.
pub fn default_extremizer_grid(n: u32) -> Result<GridSpec> {
    match n {
        1 => GridSpec::new(1, 512, 80.0),
        2 => GridSpec::new(2, 256, 60.0),
        3 => GridSpec::new(3, 64, 60.0),
        _ => Err(Error::domain(format!(
            "grid computations support n = 1, 2, 3, got {n}"
        ))),
    }
}

/// Interpolation report for the unit extremizer.
pub fn sharpness_report(idx: &SobolevIndex, method: SharpnessMethod) -> Result<InequalityReport> {
    let spec = ExtremizerSpec::unit(*idx);
    match method {
        SharpnessMethod::Exact => {
            let exact = extremizer_norms_exact(&spec)?;
            Ok(interpolation_report(
                &exact.norms,
                idx,
                EXACT_SHARPNESS_TOL,
                GridMeta::Exact,
            ))
        }
        SharpnessMethod::Grid(grid) => {
            let w = extremizer_grid_function(&spec, &grid)?;
            check_interpolation(&w, idx, GRID_INEQUALITY_TOL)
        }
    }
}

/// `lhs / rhs` of the interpolation inequality on the extremizer; 1 means the constant is attained.
pub fn sharpness_ratio(idx: &SobolevIndex, method: SharpnessMethod) -> Result<f64> {
    Ok(sharpness_report(idx, method)?.ratio)
}

/// Reports for one seed of the random corpus.
#[derive(Debug, Clone, Serialize)]
pub struct CorpusEntry {
    pub seed: u64,
    pub reports: Vec<InequalityReport>,
}

/// Runs [`check_all`] on `random_band_limited(grid, seed, …)` for every seed,
/// in parallel, returning entries in seed order.
pub fn verify_random_corpus(
    grid: &GridSpec,
    idx: &SobolevIndex,
    seeds: std::ops::Range<u64>,
    cutoff: f64,
    decay: f64,
    tolerance: f64,
) -> Result<Vec<CorpusEntry>> {
    seeds
        .into_par_iter()
        .map(|seed| {
            let u = random_band_limited(grid, seed, cutoff, decay)?;
            Ok(CorpusEntry {
                seed,
                reports: check_all(&u, idx, tolerance)?.to_vec(),
            })
        })
        .collect()
}
