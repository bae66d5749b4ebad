//! Displacement sensitivity of `n`-compass superpositions.
//!
//! The self-term overlap vanishes exactly where
//!
//! ```text
//! f(|δ|, argδ) = Σ_{m<n} cos(2a|δ|cos(argδ + mπ/2n)) + cos(2a|δ|sin(argδ + mπ/2n)) = 0.
//! ```
//!
//! Near `y = 6/5a` the quadratic Taylor truncation of `f` in `|δ|` has
//! coefficients that collapse, through the Jacobi-Anger expansions, to a few
//! Bessel terms: an isotropic part plus a `cos(4n·argδ)` oscillation whose
//! amplitude dies super-exponentially with `n`.  The pipeline solves the
//! quadratic for a seed root, polishes it with Newton iteration on `f`
//! itself, sweeps `arg δ` over one `π/2n` period, and reports the smallest
//! root (the sensitivity `|δ|min`) together with the oscillation width of
//! the root ring (the isotropy metric).

use crate::error::{Error, Result};
use crate::special::bessel_j_raw;
use crate::states::Displacement;
use std::f64::consts::PI;
use std::fmt::Write as _;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Expansion point `y = 6/5a` targeting the innermost root ring.
pub fn default_expansion_point(a: f64) -> f64 {
    6.0 / (5.0 * a)
}

/// Newton residual target for refined roots.
pub const NEWTON_RESIDUAL: f64 = 1e-13;

const NEWTON_MAX_ITER: usize = 50;

/// Default number of sweep samples per `π/2n` period.
pub const DEFAULT_SWEEP_STEPS: u32 = 720;

/// Smallest amplitude keeping adjacent coherent states at least six units
/// apart for an `n`-compass superposition: the lobes sit on a phase-space
/// circle of radius `2a` with angular spacing `π/2n`, so the chord is
/// `4a sin(π/4n)`.
pub fn separation_guard_amplitude(n: u32) -> f64 {
    1.5 / (PI / (4.0 * n as f64)).sin()
}

/// Left-hand side of the self-term zero condition at displacement `δ`.
/// Equals `2n` at `δ = 0`; its zeros are the zeros of the approximate
/// overlap.
pub fn root_condition(n: u32, a: f64, delta: Displacement) -> f64 {
    root_condition_polar(n, a, delta.magnitude(), delta.direction())
}

fn root_condition_polar(n: u32, a: f64, r: f64, phi: f64) -> f64 {
    let mut sum = 0.0;
    for m in 0..n {
        let (s, c) = (phi + m as f64 * PI / (2.0 * n as f64)).sin_cos();
        sum += (2.0 * a * r * c).cos() + (2.0 * a * r * s).cos();
    }
    sum
}

fn root_condition_derivative(n: u32, a: f64, r: f64, phi: f64) -> f64 {
    let mut sum = 0.0;
    for m in 0..n {
        let (s, c) = (phi + m as f64 * PI / (2.0 * n as f64)).sin_cos();
        sum += -2.0 * a * c * (2.0 * a * r * c).sin() - 2.0 * a * s * (2.0 * a * r * s).sin();
    }
    sum
}

/// Which algebraic route produced a set of quadratic coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientForm {
    /// Direct trigonometric sums from the quadratic Taylor truncation.
    RawTaylor,
    /// Closed Bessel form keeping the constant and the `cos(4n·argδ)`
    /// harmonic of the Jacobi-Anger resummation.
    Bessel,
}

/// Coefficients of `A|δ|² + B|δ| + C ≈ f(|δ|)` expanded about `y`.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticCoefficients {
    pub a_coef: f64,
    pub b_coef: f64,
    pub c_coef: f64,
    pub expansion_point: f64,
    pub n: u32,
    pub a: f64,
    pub arg_delta: f64,
    pub form: CoefficientForm,
}

/// Quadratic Taylor coefficients by direct trigonometric summation.
pub fn taylor_coeffs_raw(n: u32, a: f64, arg_delta: f64, y: f64) -> QuadraticCoefficients {
    debug_assert!(n >= 1 && y > 0.0);
    let u = 2.0 * a * y;
    let (mut qa, mut qb, mut qc) = (0.0, 0.0, 0.0);
    for m in 0..n {
        let (s, c) = (arg_delta + m as f64 * PI / (2.0 * n as f64)).sin_cos();
        let (cus, cuc) = ((u * s).cos(), (u * c).cos());
        let (sus, suc) = ((u * s).sin(), (u * c).sin());
        qa += -2.0 * a * a * s * s * cus - 2.0 * a * a * c * c * cuc;
        qb += 4.0 * a * a * y * s * s * cus - 2.0 * a * s * sus + 4.0 * a * a * y * c * c * cuc
            - 2.0 * a * c * suc;
        qc += 2.0 * a * y * s * sus - 2.0 * a * a * y * y * s * s * cus
            + cus
            + cuc
            + 2.0 * a * y * c * suc
            - 2.0 * a * a * y * y * c * c * cuc;
    }
    QuadraticCoefficients {
        a_coef: qa,
        b_coef: qb,
        c_coef: qc,
        expansion_point: y,
        n,
        a,
        arg_delta,
        form: CoefficientForm::RawTaylor,
    }
}

/// Quadratic Taylor coefficients in closed Bessel form.  Jacobi-Anger
/// harmonics at multiples `s = 2n, 3n, …` of the kept `cos(4n·argδ)` term
/// are dropped; their size is available from [`bessel_truncation_bound`].
pub fn taylor_coeffs_bessel(n: u32, a: f64, arg_delta: f64, y: f64) -> QuadraticCoefficients {
    debug_assert!(n >= 1 && y > 0.0);
    let u = 2.0 * a * y;
    let nf = n as f64;
    let j = |k: u32| bessel_j_raw(k, u);
    let cos4n = (4.0 * nf * arg_delta).cos();
    let qa = 2.0 * a * a * nf * (j(2) - j(0))
        + nf * a * a * cos4n * (2.0 * j(4 * n - 2) + 2.0 * j(4 * n + 2) - 4.0 * j(4 * n));
    let qb =
        -2.0 * qa * y - 4.0 * a * nf * j(1) + 4.0 * a * nf * cos4n * (j(4 * n - 1) - j(4 * n + 1));
    let qc = -qa * y * y - qb * y + 2.0 * nf * j(0) + 4.0 * nf * cos4n * j(4 * n);
    QuadraticCoefficients {
        a_coef: qa,
        b_coef: qb,
        c_coef: qc,
        expansion_point: y,
        n,
        a,
        arg_delta,
        form: CoefficientForm::Bessel,
    }
}

/// Magnitude of the first dropped (`s = 2n`) harmonic of the Bessel form,
/// per coefficient.  This bounds the raw-vs-Bessel disagreement up to the
/// even smaller `s ≥ 3n` tail.
pub fn bessel_truncation_bound(n: u32, a: f64, y: f64) -> (f64, f64, f64) {
    let u = 2.0 * a * y;
    let nf = n as f64;
    let j = |k: u32| bessel_j_raw(k, u).abs();
    let da = nf * a * a * (2.0 * j(8 * n - 2) + 2.0 * j(8 * n + 2) + 4.0 * j(8 * n));
    let db = 2.0 * da * y + 4.0 * a * nf * (j(8 * n - 1) + j(8 * n + 1));
    let dc = da * y * y + db * y + 4.0 * nf * j(8 * n);
    (da, db, dc)
}

/// Smallest positive root of the quadratic, preferring the root nearest the
/// expansion point when both are positive.
pub fn solve_quadratic_root(coeffs: &QuadraticCoefficients) -> Result<f64> {
    let (qa, qb, qc, y) = (
        coeffs.a_coef,
        coeffs.b_coef,
        coeffs.c_coef,
        coeffs.expansion_point,
    );
    if qa.abs() < 1e-12 * qb.abs().max(1.0) {
        let r = -qc / qb;
        if r > 0.0 {
            return Ok(r);
        }
        return Err(Error::NoRealRoot {
            discriminant: f64::NAN,
        });
    }
    let mut disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        if disc >= -1e-12 {
            disc = 0.0;
        } else {
            return Err(Error::NoRealRoot { discriminant: disc });
        }
    }
    let sq = disc.sqrt();
    // cancellation-free pair
    let q = -0.5 * (qb + qb.signum() * sq);
    let (r1, r2) = (q / qa, if q != 0.0 { qc / q } else { -qb / qa - q / qa });
    let mut best: Option<f64> = None;
    for r in [r1, r2] {
        if r > 0.0 && best.is_none_or(|b| (r - y).abs() < (b - y).abs()) {
            best = Some(r);
        }
    }
    best.ok_or(Error::NoRealRoot { discriminant: disc })
}

/// Newton refinement of a root of the zero condition at fixed direction,
/// iterated to residual `|f| < 1e-13`.
pub fn refine_root(n: u32, a: f64, arg_delta: f64, seed_root: f64) -> Result<f64> {
    if seed_root.is_nan() || seed_root <= 0.0 {
        return Err(Error::domain(format!(
            "seed root must be positive, got {seed_root}"
        )));
    }
    let mut r = seed_root;
    for _ in 0..NEWTON_MAX_ITER {
        let f = root_condition_polar(n, a, r, arg_delta);
        if f.abs() < NEWTON_RESIDUAL {
            return Ok(r);
        }
        let df = root_condition_derivative(n, a, r, arg_delta);
        if df == 0.0 || !df.is_finite() {
            return Err(Error::NoConvergence {
                last_iterate: r,
                residual: f,
            });
        }
        r -= f / df;
        if !r.is_finite() {
            return Err(Error::NoConvergence {
                last_iterate: r,
                residual: f,
            });
        }
    }
    let f = root_condition_polar(n, a, r, arg_delta);
    if f.abs() < NEWTON_RESIDUAL {
        Ok(r)
    } else {
        Err(Error::NoConvergence {
            last_iterate: r,
            residual: f,
        })
    }
}

/// One sweep sample: direction and refined root magnitude.
#[derive(Debug, Clone, Copy)]
pub struct SweepSample {
    pub arg_delta: f64,
    pub root: f64,
}

/// Result of sweeping the displacement direction over one period.
#[derive(Debug, Clone)]
pub struct SensitivityReport {
    pub n: u32,
    pub a: f64,
    /// Smallest refined root over all directions: the sensitivity `|δ|min`.
    pub delta_min: f64,
    /// Direction attaining `delta_min`.
    pub arg_min: f64,
    pub root_range_low: f64,
    pub root_range_high: f64,
    /// `π/2n`
    pub sweep_period: f64,
    /// Samples ordered by direction.
    pub samples: Vec<SweepSample>,
}

impl SensitivityReport {
    /// Dimensionless oscillation width `(high - low)·a` of the root ring.
    pub fn isotropy_metric(&self) -> f64 {
        (self.root_range_high - self.root_range_low) * self.a
    }

    /// Human-readable summary table.
    pub fn to_table_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n               = {}", self.n).unwrap();
        writeln!(out, "a               = {}", self.a).unwrap();
        writeln!(out, "delta_min       = {:.12e}", self.delta_min).unwrap();
        writeln!(out, "arg_min         = {:.12e}", self.arg_min).unwrap();
        writeln!(out, "a*delta_min     = {:.12}", self.delta_min * self.a).unwrap();
        writeln!(
            out,
            "root range      = [{:.12e}, {:.12e}]",
            self.root_range_low, self.root_range_high
        )
        .unwrap();
        writeln!(
            out,
            "a*root range    = [{:.12}, {:.12}]",
            self.root_range_low * self.a,
            self.root_range_high * self.a
        )
        .unwrap();
        writeln!(out, "sweep period    = {:.12e}", self.sweep_period).unwrap();
        writeln!(out, "isotropy metric = {:.6e}", self.isotropy_metric()).unwrap();
        writeln!(out, "samples         = {}", self.samples.len()).unwrap();
        out
    }

    /// Machine-readable rows, one `n a arg_delta root` line per sample.
    pub fn to_rows_string(&self) -> String {
        let mut out = String::new();
        for s in &self.samples {
            writeln!(
                out,
                "{} {} {:.16e} {:.16e}",
                self.n, self.a, s.arg_delta, s.root
            )
            .unwrap();
        }
        out
    }
}

/// Root at one direction: Bessel-form quadratic seed polished by Newton.
fn refined_root_at(n: u32, a: f64, phi: f64, y: f64) -> Result<f64> {
    let coeffs = taylor_coeffs_bessel(n, a, phi, y);
    let seed = solve_quadratic_root(&coeffs)?;
    refine_root(n, a, phi, seed)
}

/// Sweep `arg δ` uniformly over `[0, π/2n)` with refined roots near the
/// default expansion point `y = 6/5a`.
pub fn sensitivity_sweep(n: u32, a: f64, steps: u32) -> Result<SensitivityReport> {
    sensitivity_sweep_at(n, a, steps, default_expansion_point(a))
}

/// As [`sensitivity_sweep`] with an explicit expansion point (other root
/// rings can be explored by moving `y`).
pub fn sensitivity_sweep_at(n: u32, a: f64, steps: u32, y: f64) -> Result<SensitivityReport> {
    if n < 1 {
        return Err(Error::domain(
            "compass count n must be at least 1".to_string(),
        ));
    }
    if a.is_nan() || a <= 0.0 {
        return Err(Error::domain(format!(
            "amplitude a must be positive, got {a}"
        )));
    }
    if steps < 8 {
        return Err(Error::domain(format!(
            "sweep needs at least 8 steps, got {steps}"
        )));
    }
    if y.is_nan() || y <= 0.0 {
        return Err(Error::domain(format!(
            "expansion point must be positive, got {y}"
        )));
    }
    let period = PI / (2.0 * n as f64);
    let step = period / steps as f64;

    let indices: Vec<u32> = (0..steps).collect();
    #[cfg(feature = "parallel")]
    let iter = indices.par_iter();
    #[cfg(not(feature = "parallel"))]
    let iter = indices.iter();
    let samples: Result<Vec<SweepSample>> = iter
        .map(|&k| {
            let phi = k as f64 * step;
            refined_root_at(n, a, phi, y).map(|root| SweepSample {
                arg_delta: phi,
                root,
            })
        })
        .collect();
    let samples = samples?;

    let best = *samples
        .iter()
        .min_by(|s1, s2| s1.root.total_cmp(&s2.root))
        .expect("non-empty sweep");
    let high = samples
        .iter()
        .map(|s| s.root)
        .fold(f64::NEG_INFINITY, f64::max);

    // golden-section polish of the minimum around the best sample
    let (arg_min, polished) = golden_min(
        |phi| refined_root_at(n, a, phi, y),
        best.arg_delta - step,
        best.arg_delta + step,
    )?;
    let (delta_min, arg_min) = if polished < best.root {
        (polished, arg_min)
    } else {
        (best.root, best.arg_delta)
    };

    Ok(SensitivityReport {
        n,
        a,
        delta_min,
        arg_min,
        root_range_low: delta_min,
        root_range_high: high,
        sweep_period: period,
        samples,
    })
}

/// Golden-section minimisation on `[lo, hi]`; `f` must be unimodal there.
fn golden_min(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > 1e-12 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    if f1 <= f2 {
        Ok((x1, f1))
    } else {
        Ok((x2, f2))
    }
}

/// Free function mirror of [`SensitivityReport::isotropy_metric`].
pub fn isotropy_metric(report: &SensitivityReport) -> f64 {
    report.isotropy_metric()
}

/// Isotropy metric for each `n` up to `n_max` at fixed amplitude; the metric
/// decreases monotonically once the oscillatory Bessel terms die out.  Warns
/// when `a` leaves adjacent coherent states closer than six units.
pub fn asymptotic_isotropy_table(n_max: u32, a: f64) -> Result<Vec<(u32, f64)>> {
    if n_max < 2 {
        return Err(Error::domain(format!(
            "n_max must be at least 2, got {n_max}"
        )));
    }
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let guard = separation_guard_amplitude(n);
        if a < guard {
            log::warn!(
                "n={n}: amplitude a={a} leaves adjacent coherent states closer than 6 units \
                 (need a >= {guard:.2}); overlap corrections are not negligible"
            );
        }
        let report = sensitivity_sweep(n, a, DEFAULT_SWEEP_STEPS)?;
        rows.push((n, report.isotropy_metric()));
    }
    Ok(rows)
}
