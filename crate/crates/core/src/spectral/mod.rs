//! Periodic-box discretisation of `R^n` (`n ≤ 3`) and the unitary Fourier transform.
//!
//! A [`GridSpec`] with `N` points per axis and side `L` samples the box
//! `[-L/2, L/2)^n` at `x_j = -L/2 + j·h`, `h = L/N`. Frequencies are
//! `ξ_k = (2π/L)·k` with integer `k ∈ {-N/2, …, N/2-1}` per axis.
//!
//! The forward transform folds `(2π)^{-n/2} h^n` into the coefficients, so a
//! [`SpectralField`] directly approximates
//!
//! ```text
//! û(ξ) = (2π)^{-n/2} ∫ e^{-i x·ξ} u(x) dx
//! ```
//!
//! and every ξ-integral becomes a Riemann sum with weight `Δξ^n`, `Δξ = 2π/L`.
//! With these weights the discrete transform is exactly unitary:
//! `h^n Σ|u_j|² = Δξ^n Σ|û_k|²`.
//!
//! Coefficients are stored in FFT order along each axis: slot `i` holds
//! `k = i` for `i < N/2` and `k = i - N` otherwise. The Nyquist slot holds
//! `k = -N/2`, i.e. `ξ = -πN/L`.

pub mod fft;
pub mod io;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::report::{Digits17, GridMeta, InequalityId, InequalityReport};
use crate::sum::compensated;
use crate::{Error, Result};

use fft::{transform_axes, Radix2};

/// Largest supported `N^n`.
pub const MAX_SAMPLES: usize = 1 << 24;

/// Discretisation parameters of the periodic box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: u32,
    points: usize,
    box_length: f64,
}

impl GridSpec {
    pub fn new(n: u32, points: usize, box_length: f64) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::domain(format!(
                "grid dimension must be 1, 2 or 3, got {n}"
            )));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::domain(format!(
                "points per axis must be a power of two >= 8, got {points}"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::domain(format!(
                "box length must be positive and finite, got {box_length}"
            )));
        }
        match points.checked_pow(n) {
            Some(total) if total <= MAX_SAMPLES => {}
            _ => {
                return Err(Error::domain(format!(
                    "grid {points}^{n} exceeds the {MAX_SAMPLES}-sample limit"
                )))
            }
        }
        Ok(Self {
            n,
            points,
            box_length,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Total number of samples `N^n`.
    pub fn len(&self) -> usize {
        self.points.pow(self.n)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `h = L/N`.
    pub fn spacing(&self) -> f64 {
        self.box_length / self.points as f64
    }

    /// Frequency spacing `Δξ = 2π/L`.
    pub fn frequency_spacing(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    /// Largest resolved frequency component `πN/L`.
    pub fn nyquist(&self) -> f64 {
        PI * self.points as f64 / self.box_length
    }

    /// Volume element `h^n` of the physical grid.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.n as i32)
    }

    /// Volume element `Δξ^n` of the frequency lattice.
    pub fn frequency_cell_volume(&self) -> f64 {
        self.frequency_spacing().powi(self.n as i32)
    }

    /// Physical coordinates along one axis.
    pub fn axis_coordinates(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points)
            .map(|j| -0.5 * self.box_length + j as f64 * h)
            .collect()
    }

    /// Signed wavenumber stored in FFT slot `i`.
    pub fn wavenumber(&self, slot: usize) -> i64 {
        let half = self.points / 2;
        if slot < half {
            slot as i64
        } else {
            slot as i64 - self.points as i64
        }
    }

    /// Frequencies `ξ` along one axis, in FFT slot order.
    pub fn axis_frequencies(&self) -> Vec<f64> {
        let dxi = self.frequency_spacing();
        (0..self.points)
            .map(|i| self.wavenumber(i) as f64 * dxi)
            .collect()
    }

    /// Splits a row-major flat index into per-axis indices (last axis fastest).
    pub fn unravel(&self, mut flat: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        for axis in (0..self.n as usize).rev() {
            out[axis] = flat % self.points;
            flat /= self.points;
        }
        out
    }

    fn map_points<T>(&self, axis_values: &[f64], f: impl Fn(&[f64]) -> T) -> Vec<T> {
        let mut coords = [0.0; 3];
        (0..self.len())
            .map(|flat| {
                let idx = self.unravel(flat);
                for d in 0..self.n as usize {
                    coords[d] = axis_values[idx[d]];
                }
                f(&coords[..self.n as usize])
            })
            .collect()
    }

    /// Evaluates `f(x)` at every physical grid point, row-major.
    pub fn map_physical<T>(&self, f: impl Fn(&[f64]) -> T) -> Vec<T> {
        self.map_points(&self.axis_coordinates(), f)
    }

    /// Evaluates `f(ξ)` at every lattice frequency, in storage order.
    pub fn map_frequencies<T>(&self, f: impl Fn(&[f64]) -> T) -> Vec<T> {
        self.map_points(&self.axis_frequencies(), f)
    }

    /// `|ξ_k|²` in storage order.
    pub fn squared_frequencies(&self) -> Vec<f64> {
        self.map_frequencies(|xi| xi.iter().map(|v| v * v).sum())
    }

    /// Flat index of the physical point `x = 0`.
    pub fn origin_index(&self) -> usize {
        let mut flat = 0;
        for _ in 0..self.n {
            flat = flat * self.points + self.points / 2;
        }
        flat
    }

    /// The same samples read as `u(λx)`: the box shrinks to `L/λ`.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::domain(format!(
                "dilation factor must be positive, got {lambda}"
            )));
        }
        Self::new(self.n, self.points, self.box_length / lambda)
    }

    // (-1)^{Σk}: the phase e^{-i x_0·ξ_k} contributed by the box offset -L/2.
    fn offset_sign(&self, flat: usize) -> f64 {
        let idx = self.unravel(flat);
        let parity: usize = idx[..self.n as usize].iter().sum();
        if parity.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

impl Serialize for GridSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("GridSpec", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("points_per_axis", &self.points)?;
        st.serialize_field("box_length", &Digits17(&self.box_length))?;
        st.end()
    }
}

fn check_samples(spec: &GridSpec, values: &[Complex64], what: &str) -> Result<()> {
    if values.len() != spec.len() {
        return Err(Error::domain(format!(
            "{what}: expected {} values for the grid, got {}",
            spec.len(),
            values.len()
        )));
    }
    if let Some(i) = values
        .iter()
        .position(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(Error::domain(format!("{what}: value {i} is not finite")));
    }
    Ok(())
}

/// Physical-space samples `u(x_j)`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(spec: GridSpec, samples: Vec<Complex64>) -> Result<Self> {
        check_samples(&spec, &samples, "grid function")?;
        Ok(Self { spec, samples })
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        Self::new(spec, spec.map_physical(f))
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self {
            spec,
            samples: vec![Complex64::new(0.0, 0.0); spec.len()],
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.spec, self.samples.iter().map(|v| v * c).collect())
    }

    /// `u_λ(x) = u(λx)`, represented exactly by the same samples on a box of side `L/λ`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        Ok(Self {
            spec: self.spec.dilated(lambda)?,
            samples: self.samples.clone(),
        })
    }

    pub fn forward(&self) -> SpectralField {
        forward_transform(self)
    }
}

/// Fourier coefficients `û(ξ_k)` in FFT slot order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    spec: GridSpec,
    coefficients: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(spec: GridSpec, coefficients: Vec<Complex64>) -> Result<Self> {
        check_samples(&spec, &coefficients, "spectral field")?;
        Ok(Self { spec, coefficients })
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        Self::new(spec, spec.map_frequencies(f))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn inverse(&self) -> GridFunction {
        inverse_transform(self)
    }

    /// `Δξ^n Σ |û_k|²`, the squared L² norm on the frequency side.
    pub fn l2_squared(&self) -> f64 {
        self.spec.frequency_cell_volume()
            * compensated(self.coefficients.iter().map(|c| c.norm_sqr()))
    }
}

/// `û(ξ_k) = (2π)^{-n/2} h^n Σ_j e^{-i x_j·ξ_k} u(x_j)`.
pub fn forward_transform(u: &GridFunction) -> SpectralField {
    let spec = u.spec;
    let mut data = u.samples.clone();
    transform_axes(&Radix2::new(spec.points), &mut data, spec.n, false);
    let scale = (2.0 * PI).powf(-f64::from(spec.n) / 2.0) * spec.cell_volume();
    for (flat, v) in data.iter_mut().enumerate() {
        *v *= scale * spec.offset_sign(flat);
    }
    SpectralField {
        spec,
        coefficients: data,
    }
}

/// `u(x_j) = (2π)^{-n/2} Δξ^n Σ_k e^{i x_j·ξ_k} û(ξ_k)`, the exact inverse of [`forward_transform`].
pub fn inverse_transform(f: &SpectralField) -> GridFunction {
    let spec = f.spec;
    let mut data: Vec<Complex64> = f
        .coefficients
        .iter()
        .enumerate()
        .map(|(flat, v)| v * spec.offset_sign(flat))
        .collect();
    transform_axes(&Radix2::new(spec.points), &mut data, spec.n, true);
    let scale = (2.0 * PI).powf(-f64::from(spec.n) / 2.0) * spec.frequency_cell_volume();
    for v in &mut data {
        *v *= scale;
    }
    GridFunction {
        spec,
        samples: data,
    }
}

/// The five norms of one function at regularity `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBundle {
    pub s: f64,
    /// `‖u‖_{L²}`
    pub l2: f64,
    /// `‖u‖_{Ḣ^s} = (∫ |ξ|^{2s} |û|² dξ)^{1/2}`
    pub hs_semi: f64,
    /// `‖u‖_{H^s} = (‖u‖_2² + ‖u‖_{Ḣ^s}²)^{1/2}`
    pub hs_full: f64,
    /// `‖u‖_{L^∞}`
    pub sup: f64,
    /// `‖û‖_{L¹}`
    pub l1_fourier: f64,
}

impl NormBundle {
    /// Assembles a bundle, deriving `hs_full` from `l2` and `hs_semi`.
    pub fn new(s: f64, l2: f64, hs_semi: f64, sup: f64, l1_fourier: f64) -> Self {
        Self {
            s,
            l2,
            hs_semi,
            hs_full: (l2 * l2 + hs_semi * hs_semi).sqrt(),
            sup,
            l1_fourier,
        }
    }
}

impl Serialize for NormBundle {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("NormBundle", 6)?;
        st.serialize_field("s", &Digits17(&self.s))?;
        st.serialize_field("l2", &Digits17(&self.l2))?;
        st.serialize_field("hs_semi", &Digits17(&self.hs_semi))?;
        st.serialize_field("hs_full", &Digits17(&self.hs_full))?;
        st.serialize_field("sup", &Digits17(&self.sup))?;
        st.serialize_field("l1_fourier", &Digits17(&self.l1_fourier))?;
        st.end()
    }
}

/// Norms of `u` at regularity `s > 0`.
pub fn norms(u: &GridFunction, s: f64) -> Result<NormBundle> {
    norms_with_spectrum(u, &u.forward(), s)
}

/// As [`norms`], reusing an already computed spectrum of `u`.
pub fn norms_with_spectrum(
    u: &GridFunction,
    spectrum: &SpectralField,
    s: f64,
) -> Result<NormBundle> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::domain(format!(
            "norm order s must be positive, got {s}"
        )));
    }
    if u.spec != spectrum.spec {
        return Err(Error::domain("spectrum was computed on a different grid"));
    }
    let spec = u.spec;
    let l2 = (spec.cell_volume() * compensated(u.samples.iter().map(|v| v.norm_sqr()))).sqrt();
    let radii = spec.squared_frequencies();
    let hs2 = compensated(
        radii
            .iter()
            .zip(&spectrum.coefficients)
            .map(|(r2, c)| r2.powf(s) * c.norm_sqr()),
    );
    let hs_semi = (spec.frequency_cell_volume() * hs2).sqrt();
    let sup = u.samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let l1_fourier =
        spec.frequency_cell_volume() * compensated(spectrum.coefficients.iter().map(|c| c.norm()));
    Ok(NormBundle::new(s, l2, hs_semi, sup, l1_fourier))
}

/// Checks `‖u‖_∞ ≤ (2π)^{-n/2} ‖û‖_1`. Equality holds when `û ≥ 0`.
pub fn l1_bound_check(u: &GridFunction, tolerance: f64) -> InequalityReport {
    let spec = u.spec;
    let spectrum = u.forward();
    let sup = u.samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let l1 =
        spec.frequency_cell_volume() * compensated(spectrum.coefficients.iter().map(|c| c.norm()));
    let constant = (2.0 * PI).powf(-f64::from(spec.n) / 2.0);
    InequalityReport::new(
        InequalityId::L1Bound,
        spec.n,
        None,
        sup,
        constant * l1,
        constant,
        tolerance,
        GridMeta::Grid(spec),
    )
}

/// `(Σ_{i_1..i_m} ‖D_{i_1}…D_{i_m} u‖_2²)^{1/2}`, each derivative taken spectrally
/// (multiplying `û` by `iξ_d` per factor) and its L² norm measured in physical space.
pub fn derivative_tensor_norm(u: &GridFunction, order: u32) -> f64 {
    let spec = u.spec;
    let spectrum = u.forward();
    let axis_xi = spec.axis_frequencies();
    let dims = spec.n as usize;
    let tuples = dims.pow(order);
    let mut total = Vec::with_capacity(tuples);
    for t in 0..tuples {
        let mut axes = Vec::with_capacity(order as usize);
        let mut rest = t;
        for _ in 0..order {
            axes.push(rest % dims);
            rest /= dims;
        }
        let coeffs: Vec<Complex64> = spectrum
            .coefficients
            .iter()
            .enumerate()
            .map(|(flat, c)| {
                let idx = spec.unravel(flat);
                axes.iter()
                    .fold(*c, |acc, &d| acc * Complex64::new(0.0, axis_xi[idx[d]]))
            })
            .collect();
        let field = SpectralField {
            spec,
            coefficients: coeffs,
        };
        let du = field.inverse();
        total.push(spec.cell_volume() * compensated(du.samples.iter().map(|v| v.norm_sqr())));
    }
    compensated(total).sqrt()
}
