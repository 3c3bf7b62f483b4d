//! The extremizing family `ŵ(ξ) = c / (1 + |ξ|^{2s})` and the test corpus.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::SobolevIndex;
use crate::quadrature::{lorentzian_mass, radial_integral, RadialIntegralSpec};
use crate::special::unit_sphere_area;
use crate::spectral::{GridFunction, GridSpec, NormBundle, SpectralField};
use crate::{Error, Result};

/// Amplitude and index of one member of the extremizing family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremizerSpec {
    pub idx: SobolevIndex,
    pub amplitude: f64,
}

impl ExtremizerSpec {
    pub fn new(idx: SobolevIndex, amplitude: f64) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(Error::domain(format!(
                "extremizer amplitude must be >= 0, got {amplitude}"
            )));
        }
        Ok(Self { idx, amplitude })
    }

    /// Unit amplitude.
    pub fn unit(idx: SobolevIndex) -> Self {
        Self {
            idx,
            amplitude: 1.0,
        }
    }
}

/// `c / (1 + |ξ_k|^{2s})` on the frequency lattice of `grid`.
pub fn bessel_potential_spectrum(spec: &ExtremizerSpec, grid: &GridSpec) -> Result<SpectralField> {
    if grid.n() != spec.idx.n() {
        return Err(Error::domain(format!(
            "grid dimension {} does not match n = {}",
            grid.n(),
            spec.idx.n()
        )));
    }
    let s = spec.idx.s();
    let c = spec.amplitude;
    SpectralField::from_fn(*grid, |xi| {
        let r2: f64 = xi.iter().map(|v| v * v).sum();
        Complex64::new(c / (1.0 + r2.powf(s)), 0.0)
    })
}

/// The gridded extremizer in physical space.
pub fn extremizer_grid_function(spec: &ExtremizerSpec, grid: &GridSpec) -> Result<GridFunction> {
    Ok(bessel_potential_spectrum(spec, grid)?.inverse())
}

/// Grid-free norms of the extremizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactNorms {
    pub norms: NormBundle,
    /// Set for `c = 0`, where every norm vanishes.
    pub degenerate: bool,
}

/// Norms of `w` from radial quadrature:
///
/// - `‖w‖_2² = c² ω_n ∫ r^{n-1} (1+r^{2s})^{-2} dr`
/// - `‖w‖_{Ḣ^s}² = c² ω_n ∫ r^{n-1+2s} (1+r^{2s})^{-2} dr`
/// - `‖ŵ‖_1 = c ∫ (1+|ξ|^{2s})^{-1} dξ`
/// - `‖w‖_∞ = w(0) = (2π)^{-n/2} ‖ŵ‖_1`, since `ŵ ≥ 0`.
pub fn extremizer_norms_exact(spec: &ExtremizerSpec) -> Result<ExactNorms> {
    let idx = spec.idx;
    let c = spec.amplitude;
    let area = unit_sphere_area(idx.n())?;
    let l2_sq = c * c * area * radial_integral(&RadialIntegralSpec::new(idx, 2, 0)?)?;
    let hs_sq = c * c * area * radial_integral(&RadialIntegralSpec::new(idx, 2, 1)?)?;
    let l1 = c * lorentzian_mass(&idx)?.quadrature;
    let sup = (2.0 * PI).powf(-idx.nf() / 2.0) * l1;
    Ok(ExactNorms {
        norms: NormBundle::new(idx.s(), l2_sq.sqrt(), hs_sq.sqrt(), sup, l1),
        degenerate: c == 0.0,
    })
}

/// Samples of `e^{-a|x|²}`.
pub fn gaussian(grid: &GridSpec, a: f64) -> Result<GridFunction> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain(format!(
            "gaussian width parameter must be positive, got {a}"
        )));
    }
    GridFunction::from_fn(*grid, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Complex64::new((-a * r2).exp(), 0.0)
    })
}

/// Defaults for [`random_band_limited`]: cutoff at half the Nyquist frequency,
/// spectral envelope `e^{-4}` at the cutoff.
pub fn default_band(grid: &GridSpec) -> (f64, f64) {
    let cutoff = 0.5 * grid.nyquist();
    (cutoff, 4.0 / (cutoff * cutoff))
}

/// A real function with random spectrum, deterministic in `seed`.
///
/// Each lattice frequency with `|ξ| ≤ cutoff` draws a magnitude
/// `U(0,1)·e^{-decay|ξ|²}` and a uniform phase; the field is then symmetrised,
/// `û(ξ) ← (û(ξ) + conj û(-ξ)) / 2`, so the inverse transform is real.
pub fn random_band_limited(
    grid: &GridSpec,
    seed: u64,
    cutoff: f64,
    decay: f64,
) -> Result<GridFunction> {
    Ok(random_band_limited_spectrum(grid, seed, cutoff, decay)?.inverse())
}

/// The spectrum behind [`random_band_limited`]; exactly zero beyond `cutoff`.
pub fn random_band_limited_spectrum(
    grid: &GridSpec,
    seed: u64,
    cutoff: f64,
    decay: f64,
) -> Result<SpectralField> {
    if !(cutoff.is_finite() && cutoff > 0.0 && cutoff < grid.nyquist()) {
        return Err(Error::domain(format!(
            "cutoff must lie in (0, {}) for this grid, got {cutoff}",
            grid.nyquist()
        )));
    }
    if !(decay.is_finite() && decay > 0.0) {
        return Err(Error::domain(format!(
            "decay must be positive, got {decay}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radii = grid.squared_frequencies();
    let cut2 = cutoff * cutoff;
    let raw: Vec<Complex64> = radii
        .iter()
        .map(|&r2| {
            if r2 > cut2 {
                Complex64::new(0.0, 0.0)
            } else {
                let mag = rng.gen::<f64>() * (-decay * r2).exp();
                let phase = rng.gen_range(0.0..2.0 * PI);
                Complex64::from_polar(mag, phase)
            }
        })
        .collect();
    let n = grid.points();
    // slot of -k: 0 ↦ 0, i ↦ N - i
    let mirror = |flat: usize| -> usize {
        let idx = grid.unravel(flat);
        idx[..grid.n() as usize]
            .iter()
            .fold(0, |acc, &i| acc * n + (n - i) % n)
    };
    let symmetric: Vec<Complex64> = (0..raw.len())
        .map(|flat| 0.5 * (raw[flat] + raw[mirror(flat)].conj()))
        .collect();
    SpectralField::new(*grid, symmetric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{l1_bound_check, norms};
    use approx::assert_relative_eq;

    fn idx(n: u32, s: f64) -> SobolevIndex {
        SobolevIndex::new(n, s).unwrap()
    }

    #[test]
    fn spectrum_basics() {
        let g = GridSpec::new(2, 16, 10.0).unwrap();
        let zero =
            bessel_potential_spectrum(&ExtremizerSpec::new(idx(2, 2.0), 0.0).unwrap(), &g).unwrap();
        assert!(zero.coefficients().iter().all(|c| c.norm() == 0.0));
        let f =
            bessel_potential_spectrum(&ExtremizerSpec::new(idx(2, 2.0), 3.7).unwrap(), &g).unwrap();
        assert_eq!(f.coefficients()[0], Complex64::new(3.7, 0.0));
        assert!(f.coefficients().iter().all(|c| c.re >= 0.0 && c.im == 0.0));
        let wrong = GridSpec::new(1, 16, 10.0).unwrap();
        assert!(bessel_potential_spectrum(&ExtremizerSpec::unit(idx(2, 2.0)), &wrong).is_err());
        assert!(ExtremizerSpec::new(idx(1, 1.0), -1.0).is_err());
    }

    #[test]
    fn one_dimensional_h1_extremizer_is_an_exponential() {
        // inverse of 1/(1+ξ²) is √(π/2) e^{-|x|}. At the origin the grid value is
        // the lattice sum of ŵ, short by the tail beyond the Nyquist frequency Ξ:
        // (2π)^{-1/2} ∫_{|ξ|>Ξ} dξ/(1+ξ²) = (2π)^{-1/2}·2·(π/2 - atan Ξ).
        let g = GridSpec::new(1, 4096, 80.0).unwrap();
        let w = extremizer_grid_function(&ExtremizerSpec::unit(idx(1, 1.0)), &g).unwrap();
        let at0 = w.samples()[g.origin_index()].re;
        let tail = 2.0 * (PI / 2.0 - g.nyquist().atan()) / (2.0 * PI).sqrt();
        assert_relative_eq!(
            (PI / 2.0).sqrt(),
            1.253_314_137_315_500_3,
            max_relative = 1e-15
        );
        assert!(
            ((PI / 2.0).sqrt() - tail - at0).abs() < 1e-3 * tail,
            "{at0}"
        );
        let x = g.axis_coordinates();
        for j in [g.origin_index() + 200, g.origin_index() - 500] {
            let exact = (PI / 2.0).sqrt() * (-x[j].abs()).exp();
            assert!((w.samples()[j].re - exact).abs() < 1e-5);
        }
    }

    #[test]
    fn exact_norms_for_h1_line() {
        let e = extremizer_norms_exact(&ExtremizerSpec::unit(idx(1, 1.0))).unwrap();
        assert!(!e.degenerate);
        // w = √(π/2) e^{-|x|}: ∫w² = π/2, ∫w'² = π/2
        assert_relative_eq!(e.norms.l2.powi(2), PI / 2.0, max_relative = 1e-12);
        assert_relative_eq!(e.norms.hs_semi.powi(2), PI / 2.0, max_relative = 1e-12);
        assert_relative_eq!(e.norms.sup, (PI / 2.0).sqrt(), max_relative = 1e-12);
        assert_relative_eq!(e.norms.l1_fourier, PI, max_relative = 1e-12);
        let zero = extremizer_norms_exact(&ExtremizerSpec::new(idx(1, 1.0), 0.0).unwrap()).unwrap();
        assert!(zero.degenerate);
    }

    #[test]
    fn exact_norms_match_beta_closed_forms() {
        for (n, s) in [(1, 0.8), (1, 2.0), (2, 1.5), (2, 2.0), (3, 1.75), (3, 4.0)] {
            let k = idx(n, s);
            let e = extremizer_norms_exact(&ExtremizerSpec::unit(k))
                .unwrap()
                .norms;
            let a = k.theta();
            let area = unit_sphere_area(n).unwrap();
            let l2_sq = area / (2.0 * s) * crate::special::beta(a, 2.0 - a).unwrap();
            let hs_sq = area / (2.0 * s) * crate::special::beta(a + 1.0, 1.0 - a).unwrap();
            assert_relative_eq!(e.l2.powi(2), l2_sq, max_relative = 1e-9);
            assert_relative_eq!(e.hs_semi.powi(2), hs_sq, max_relative = 1e-9);
        }
    }

    #[test]
    fn young_equality_condition_holds_for_extremizer() {
        for n in 1..=3u32 {
            for ds in [0.3, 0.5, 1.0, 2.5, 6.0] {
                let k = idx(n, f64::from(n) / 2.0 + ds);
                let e = extremizer_norms_exact(&ExtremizerSpec::unit(k))
                    .unwrap()
                    .norms;
                let lhs = k.nf() * e.l2.powi(2);
                let rhs = k.excess() * e.hs_semi.powi(2);
                assert_relative_eq!(lhs, rhs, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn exact_norms_scale_with_amplitude() {
        let k = idx(2, 2.0);
        let one = extremizer_norms_exact(&ExtremizerSpec::unit(k))
            .unwrap()
            .norms;
        let big = extremizer_norms_exact(&ExtremizerSpec::new(k, 3.7).unwrap())
            .unwrap()
            .norms;
        assert_relative_eq!(big.l2, 3.7 * one.l2, max_relative = 1e-14);
        assert_relative_eq!(big.sup, 3.7 * one.sup, max_relative = 1e-14);
    }

    #[test]
    fn grid_norms_match_exact() {
        for (n, s, points, l) in [(1, 2.0, 512, 80.0), (2, 2.0, 256, 60.0)] {
            let k = idx(n, s);
            let g = GridSpec::new(n, points, l).unwrap();
            let spec = ExtremizerSpec::unit(k);
            let w = extremizer_grid_function(&spec, &g).unwrap();
            let grid = norms(&w, s).unwrap();
            let exact = extremizer_norms_exact(&spec).unwrap().norms;
            // L² is insensitive to the truncated tail; the other norms carry it
            assert_relative_eq!(grid.l2, exact.l2, max_relative = 1e-6);
            let tail = if n == 1 { 1e-4 } else { 3e-3 };
            assert_relative_eq!(grid.hs_semi, exact.hs_semi, max_relative = tail);
            assert_relative_eq!(grid.sup, exact.sup, max_relative = tail);
            let r = l1_bound_check(&w, 1e-9);
            assert!(r.is_equality_within(1e-9), "{}", r.ratio);
            // maximum sits at the origin
            assert_eq!(grid.sup, w.samples()[g.origin_index()].norm());
        }
    }

    #[test]
    fn gaussian_corpus_member() {
        let g1 = GridSpec::new(1, 256, 40.0).unwrap();
        let u = gaussian(&g1, 0.5).unwrap();
        assert_relative_eq!(
            norms(&u, 1.0).unwrap().l2,
            PI.powf(0.25),
            max_relative = 1e-12
        );
        assert_eq!(u.samples()[g1.origin_index()].re, 1.0);
        let g2 = GridSpec::new(2, 128, 30.0).unwrap();
        let u = gaussian(&g2, 0.5).unwrap();
        assert_relative_eq!(norms(&u, 1.5).unwrap().l2.powi(2), PI, max_relative = 1e-12);
        assert!(gaussian(&g1, 0.0).is_err());
    }

    #[test]
    fn random_band_limited_properties() {
        for g in [
            GridSpec::new(1, 64, 20.0).unwrap(),
            GridSpec::new(2, 32, 10.0).unwrap(),
            GridSpec::new(3, 16, 8.0).unwrap(),
        ] {
            let (cutoff, decay) = default_band(&g);
            let a = random_band_limited(&g, 7, cutoff, decay).unwrap();
            let b = random_band_limited(&g, 7, cutoff, decay).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, random_band_limited(&g, 8, cutoff, decay).unwrap());
            assert!(a.samples().iter().all(|v| v.im.abs() <= 1e-13));
            let f = random_band_limited_spectrum(&g, 7, cutoff, decay).unwrap();
            for (c, r2) in f.coefficients().iter().zip(g.squared_frequencies()) {
                if r2 > cutoff * cutoff {
                    assert_eq!(c.norm(), 0.0);
                }
            }
            assert!(!a.is_zero());
        }
    }

    #[test]
    fn random_band_limited_rejects_bad_band() {
        let g = GridSpec::new(1, 64, 20.0).unwrap();
        assert!(random_band_limited(&g, 1, g.nyquist(), 1.0).is_err());
        assert!(random_band_limited(&g, 1, 0.0, 1.0).is_err());
        assert!(random_band_limited(&g, 1, 1.0, 0.0).is_err());
    }
}
