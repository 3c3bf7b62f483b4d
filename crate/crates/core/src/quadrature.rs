//! Adaptive Gauss–Legendre evaluation of the radial integrals
//!
//! ```text
//! R(n, s, p, q) = ∫_0^∞ r^{n-1+2sq} (1 + r^{2s})^{-p} dr
//! ```
//!
//! which carry every grid-free norm of the extremizer. The closed form is a
//! Beta value; the quadrature here never touches Gamma or Beta so the two
//! routes can be checked against each other.
//!
//! The integral is split at `r = 1`. With `μ = n + 2sq` and
//! `δ = 2sp - μ > 0` the substitutions `r = v^{1/μ}` on `[0,1]` and
//! `r = v^{-1/δ}` on `[1,∞)` turn both halves into
//!
//! ```text
//! (1/κ) ∫_0^1 (1 + v^{2s/κ})^{-p} dv,   κ ∈ {μ, δ},
//! ```
//!
//! and `v = e^{-τ}` makes each of them an analytic integrand on `[0, ∞)`:
//!
//! ```text
//! ∫_0^1 (1 + v^e)^{-p} dv = ∫_0^∞ e^{-τ} (1 + e^{-eτ})^{-p} dτ,   e = 2s/κ.
//! ```
//!
//! The integrand is bounded by `e^{-τ}`, so truncating at `τ = 40` costs
//! less than `5e-18`. For tiny `δ` (tails decaying like `r^{-1-δ}`) the
//! exponent `e` is huge and all the structure sits in `τ ≲ 1/e`; initial
//! breakpoints at `τ = 2^k / e` let the bisection see it.

use serde::Serialize;

use crate::constants::SobolevIndex;
use crate::special::{beta, sinc_sigma, unit_sphere_area};
use crate::sum::pairwise;
use crate::{Error, Result};

const GL_POINTS: usize = 20;

/// Smallest decay exponent `δ` accepted by [`RadialIntegralSpec`].
pub const MIN_DECAY: f64 = 1e-6;

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Bisection depth cap.
    pub max_levels: u32,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_levels: 30,
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_m`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    fn new() -> Self {
        let (nodes, weights) = gauss_legendre(GL_POINTS);
        Self { nodes, weights }
    }

    fn apply<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let acc: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum();
        acc * half
    }
}

struct Panel {
    a: f64,
    b: f64,
    level: u32,
    // rule on the whole panel vs. sum over its two halves
    coarse: f64,
    fine: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(rule: &Rule, f: &F, a: f64, b: f64, level: u32, coarse: f64) -> Self {
        let m = 0.5 * (a + b);
        let fine = rule.apply(f, a, m) + rule.apply(f, m, b);
        Self {
            a,
            b,
            level,
            coarse,
            fine,
        }
    }

    fn error(&self) -> f64 {
        (self.fine - self.coarse).abs()
    }
}

/// Globally adaptive Gauss–Legendre quadrature of `f` over `[a, b]`.
///
/// The panel with the largest `|fine - coarse|` is bisected until the summed
/// estimate drops below `max(abs_tol, rel_tol·|I|)`. A panel that would need
/// to go past `max_levels` aborts with [`Error::NumericFailure`].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadratureOptions) -> Result<f64> {
    integrate_with_breaks(f, &[a, b], opts)
}

/// As [`integrate`], starting from the panels delimited by the strictly
/// increasing `breaks`.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    opts: &QuadratureOptions,
) -> Result<f64> {
    if breaks.len() < 2
        || breaks.iter().any(|x| !x.is_finite())
        || breaks.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::domain(format!(
            "integration breakpoints must be finite and strictly increasing, got {breaks:?}"
        )));
    }
    let rule = Rule::new();
    let mut panels: Vec<Panel> = breaks
        .windows(2)
        .map(|w| {
            let whole = rule.apply(&f, w[0], w[1]);
            Panel::new(&rule, &f, w[0], w[1], 0, whole)
        })
        .collect();
    let mut previous = panels.iter().map(|p| p.coarse).sum::<f64>();
    loop {
        let total = pairwise(&panels.iter().map(|p| p.fine).collect::<Vec<_>>());
        let err: f64 = panels.iter().map(Panel::error).sum();
        if !total.is_finite() {
            return Err(Error::NumericFailure {
                levels: panels.iter().map(|p| p.level).max().unwrap_or(0),
                last: total,
                previous,
            });
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            panels.sort_by(|p, q| p.a.total_cmp(&q.a));
            return Ok(pairwise(&panels.iter().map(|p| p.fine).collect::<Vec<_>>()));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error().total_cmp(&y.1.error()))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        if p.level >= opts.max_levels {
            return Err(Error::NumericFailure {
                levels: p.level,
                last: total,
                previous,
            });
        }
        previous = total;
        let m = 0.5 * (p.a + p.b);
        let left = rule.apply(&f, p.a, m);
        let right = p.fine - left;
        panels.push(Panel::new(&rule, &f, p.a, m, p.level + 1, left));
        panels.push(Panel::new(&rule, &f, m, p.b, p.level + 1, right));
    }
}

/// Parameters of `∫_0^∞ r^{n-1+2sq} (1 + r^{2s})^{-p} dr`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialIntegralSpec {
    pub idx: SobolevIndex,
    pub power: u32,
    pub weight: u32,
}

impl RadialIntegralSpec {
    /// Rejects divergent integrands, including those whose tail exponent
    /// `δ = 2sp - n - 2sq` is below [`MIN_DECAY`].
    pub fn new(idx: SobolevIndex, power: u32, weight: u32) -> Result<Self> {
        if power == 0 {
            return Err(Error::domain("radial integral power p must be positive"));
        }
        let spec = Self { idx, power, weight };
        let decay = spec.decay();
        if decay.is_nan() || decay <= MIN_DECAY {
            return Err(Error::domain(format!(
                "radial integrand does not decay fast enough: δ = 2sp - n - 2sq = {decay:e} (need > {MIN_DECAY:e})"
            )));
        }
        Ok(spec)
    }

    /// `μ = n + 2sq`, the small-r exponent plus one.
    pub fn growth(&self) -> f64 {
        self.idx.nf() + 2.0 * self.idx.s() * f64::from(self.weight)
    }

    /// `δ = 2sp - μ`, the tail decay exponent minus one.
    pub fn decay(&self) -> f64 {
        2.0 * self.idx.s() * f64::from(self.power) - self.growth()
    }

    /// `(1/2s) B(μ/2s, p - μ/2s)`.
    pub fn closed_form(&self) -> f64 {
        let two_s = 2.0 * self.idx.s();
        let alpha = self.growth() / two_s;
        beta(alpha, f64::from(self.power) - alpha).expect("spec validated") / two_s
    }
}

const LOG_CUTOFF: f64 = 40.0;

// 0, 1/e, 2/e, 4/e, … up to the truncation point.
fn log_breaks(e: f64) -> Vec<f64> {
    let mut breaks = vec![0.0];
    let mut t = 1.0 / e;
    while t < LOG_CUTOFF {
        breaks.push(t);
        t *= 2.0;
    }
    breaks.push(LOG_CUTOFF);
    breaks
}

/// Evaluates the radial integral by quadrature with the default options.
pub fn radial_integral(spec: &RadialIntegralSpec) -> Result<f64> {
    radial_integral_with(spec, &QuadratureOptions::default())
}

pub fn radial_integral_with(spec: &RadialIntegralSpec, opts: &QuadratureOptions) -> Result<f64> {
    let two_s = 2.0 * spec.idx.s();
    let p = -f64::from(spec.power);
    let half = |kappa: f64| -> Result<f64> {
        let e = two_s / kappa;
        let breaks = log_breaks(e);
        let v = integrate_with_breaks(
            |t: f64| (-t).exp() * (1.0 + (-e * t).exp()).powf(p),
            &breaks,
            opts,
        )?;
        Ok(v / kappa)
    };
    let inner = half(spec.growth())?;
    let outer = half(spec.decay())?;
    Ok(inner + outer)
}

/// `∫_{R^n} (1 + |ξ|^{2s})^{-1} dξ` by quadrature, next to its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorentzianMass {
    pub quadrature: f64,
    pub closed_form: f64,
}

impl LorentzianMass {
    pub fn relative_difference(&self) -> f64 {
        (self.quadrature - self.closed_form).abs() / self.closed_form
    }
}

/// `ω_n · R(n, s, 1, 0)`, with the closed form `(ω_n / n) · σ / sin σ`, `σ = nπ/2s`.
pub fn lorentzian_mass(idx: &SobolevIndex) -> Result<LorentzianMass> {
    let area = unit_sphere_area(idx.n())?;
    let spec = RadialIntegralSpec::new(*idx, 1, 0)?;
    let quadrature = area * radial_integral(&spec)?;
    let closed_form = area / idx.nf() / sinc_sigma(idx.theta())?;
    Ok(LorentzianMass {
        quadrature,
        closed_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn idx(n: u32, s: f64) -> SobolevIndex {
        SobolevIndex::new(n, s).unwrap()
    }

    // Brute-force oracle: composite Simpson on the compactified variable
    // r = t/(1-t), t ∈ (0,1), dr = dt/(1-t)^2.
    fn brute_force(n: f64, s: f64, p: f64, q: f64, panels: u32) -> f64 {
        let g = |t: f64| {
            if t >= 1.0 {
                return 0.0;
            }
            let r = t / (1.0 - t);
            r.powf(n - 1.0 + 2.0 * s * q) * (1.0 + r.powf(2.0 * s)).powf(-p)
                / ((1.0 - t) * (1.0 - t))
        };
        let h = 1.0 / f64::from(panels);
        (0..panels)
            .map(|i| {
                let a = f64::from(i) * h;
                h / 6.0 * (g(a) + 4.0 * g(a + 0.5 * h) + g(a + h))
            })
            .sum()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(GL_POINTS);
        assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
        for k in 0..(2 * GL_POINTS) {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
            let exact = if k % 2 == 1 {
                0.0
            } else {
                2.0 / (k as f64 + 1.0)
            };
            assert!((got - exact).abs() < 1e-14, "k={k}: {got} vs {exact}");
        }
    }

    #[test]
    fn integrate_rejects_bad_bounds() {
        assert!(integrate(|x| x, 1.0, 0.0, &QuadratureOptions::default()).is_err());
        assert!(integrate(|x| x, 0.0, f64::INFINITY, &QuadratureOptions::default()).is_err());
    }

    #[test]
    fn integrate_reports_non_convergence() {
        let opts = QuadratureOptions {
            max_levels: 3,
            ..QuadratureOptions::default()
        };
        // 1/sqrt(x) near 0 needs far more than three bisections
        let err = integrate(
            |x: f64| if x > 0.0 { x.powf(-0.9) } else { 0.0 },
            0.0,
            1.0,
            &opts,
        )
        .unwrap_err();
        match err {
            Error::NumericFailure { last, previous, .. } => {
                assert!(last.is_finite() && previous.is_finite());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn radial_examples() {
        let r = radial_integral(&RadialIntegralSpec::new(idx(1, 1.0), 1, 0).unwrap()).unwrap();
        assert!((r - PI / 2.0).abs() <= 1e-10 * (1.0 + r));

        // (1/4) B(1/4, 3/4) = π / (4 sin(π/4)); twice this is the Lorentzian mass on the line
        let spec = RadialIntegralSpec::new(idx(1, 2.0), 1, 0).unwrap();
        let r = radial_integral(&spec).unwrap();
        let expected = PI / (4.0 * (PI / 4.0).sin());
        assert!((r - expected).abs() <= 1e-10 * (1.0 + r));
        assert_relative_eq!(
            brute_force(1.0, 2.0, 1.0, 0.0, 1_000_000),
            expected,
            max_relative = 1e-9
        );
        let mass = lorentzian_mass(&idx(1, 2.0)).unwrap();
        assert_relative_eq!(mass.quadrature, 2.221_441_469_079_183, max_relative = 1e-10);

        let spec = RadialIntegralSpec::new(idx(2, 2.0), 2, 1).unwrap();
        let r = radial_integral(&spec).unwrap();
        assert!((r - PI / 8.0).abs() <= 1e-10 * (1.0 + r));
        assert_relative_eq!(
            brute_force(2.0, 2.0, 2.0, 1.0, 1_000_000),
            PI / 8.0,
            max_relative = 1e-9
        );
    }

    #[test]
    fn divergent_specs_are_rejected() {
        // n + 2sq - 2sp >= 0
        assert!(RadialIntegralSpec::new(idx(1, 1.0), 1, 1).is_err());
        assert!(RadialIntegralSpec::new(idx(2, 1.5), 1, 1).is_err());
        assert!(RadialIntegralSpec::new(idx(1, 1.0), 0, 0).is_err());
        // δ = 2s - n = 2e-7 is below the floor
        assert!(RadialIntegralSpec::new(idx(1, 0.5 + 1e-7), 1, 0).is_err());
    }

    #[test]
    fn near_endpoint_tail_converges() {
        // δ = 2e-5: the r^{-1-δ} tail carries almost all of the mass
        let k = idx(1, 0.5 + 1e-5);
        let spec = RadialIntegralSpec::new(k, 1, 0).unwrap();
        let r = radial_integral(&spec).unwrap();
        assert_relative_eq!(r, spec.closed_form(), max_relative = 1e-9);
    }

    #[test]
    fn beta_consistency_sweep() {
        for n in 1..=3u32 {
            for s in [f64::from(n) / 2.0 + 0.1, 1.0, 1.7, 2.0, 3.0, 5.0, 10.0] {
                let Ok(k) = SobolevIndex::new(n, s) else {
                    continue;
                };
                for (p, q) in [(1, 0), (2, 0), (2, 1), (3, 1), (3, 2)] {
                    let Ok(spec) = RadialIntegralSpec::new(k, p, q) else {
                        continue;
                    };
                    let r = radial_integral(&spec).unwrap();
                    assert_relative_eq!(r, spec.closed_form(), max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn lorentzian_mass_examples() {
        let m = lorentzian_mass(&idx(1, 1.0)).unwrap();
        assert_relative_eq!(m.closed_form, PI, max_relative = 1e-15);
        assert_relative_eq!(m.quadrature, PI, max_relative = 1e-10);

        let m = lorentzian_mass(&idx(2, 2.0)).unwrap();
        assert_relative_eq!(m.closed_form, PI * PI / 2.0, max_relative = 1e-14);
        assert_relative_eq!(m.quadrature, PI * PI / 2.0, max_relative = 1e-10);
        // ω_2 × brute-force radial integral
        assert_relative_eq!(
            2.0 * PI * brute_force(2.0, 2.0, 1.0, 0.0, 1_000_000),
            PI * PI / 2.0,
            max_relative = 1e-9
        );

        let m = lorentzian_mass(&idx(3, 2.0)).unwrap();
        assert_relative_eq!(m.closed_form, 2f64.sqrt() * PI * PI, max_relative = 1e-14);
        assert_relative_eq!(m.quadrature, m.closed_form, max_relative = 1e-10);
    }

    #[test]
    fn lorentzian_mass_decreases_in_s() {
        for n in 1..=3u32 {
            let masses: Vec<f64> = (1..=30)
                .map(|i| {
                    lorentzian_mass(&idx(n, f64::from(n) / 2.0 + 0.2 * f64::from(i)))
                        .unwrap()
                        .quadrature
                })
                .collect();
            assert!(masses.windows(2).all(|w| w[1] < w[0]));
        }
    }
}
