//! Exact Wigner functions of coherent-state superpositions.
//!
//! With `x̂ = â + â†` (so a coherent state of amplitude `α` peaks at
//! `(2 Re α, 2 Im α)`), the Wigner transform of the dyad `|α₁⟩⟨α₂|` works out
//! to a Gaussian centred on the pair midpoint times a phase linear in the
//! phase-space point:
//!
//! ```text
//! K(α₁,α₂;x,p) = exp(-(x-u₁-u₂)²/2 - (p-v₁-v₂)²/2) · e^{iφ},
//! φ = (u₂v₂ - u₁v₁) + (u₁-u₂)(v₁+v₂) + (v₁-v₂)x - (u₁-u₂)p,
//! ```
//!
//! where `α_j = u_j + i v_j`.  Scaling is fixed so the diagonal term is the
//! unit-peak Gaussian `exp(-(p² + (x-2a)²)/2)`.  Summing `w₁ w₂* K` over all
//! ordered component pairs and taking the real part gives the unnormalised
//! Wigner function; [`wigner_exact`] divides by `2π⟨ψ|ψ⟩` so the field
//! integrates to one over the plane.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::states::{CoherentComponent, StateSpec};

/// Contributions whose Gaussian envelope falls below this are skipped during
/// summation.
const ENVELOPE_CUTOFF_LN: f64 = -36.84; // ln(1e-16)

/// A point of phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(x: f64, p: f64) -> Self {
        Self { x, p }
    }

    /// The point rotated by `theta` about the origin.
    pub fn rotated(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            x: self.x * c - self.p * s,
            p: self.x * s + self.p * c,
        }
    }
}

/// A Wigner value together with the imaginary residue left by the pairwise
/// sum, which must vanish up to rounding for any Hermitian input.
#[derive(Debug, Clone, Copy)]
pub struct WignerValue {
    pub value: f64,
    pub raw_complex_imag: f64,
}

/// Wigner kernel of `|α₁⟩⟨α₂|` at `pt`, unnormalised (diagonal peak = 1).
/// Component weights are not applied.
pub fn pair_kernel(c1: &CoherentComponent, c2: &CoherentComponent, pt: PhasePoint) -> Complex64 {
    let a1 = c1.amplitude();
    let a2 = c2.amplitude();
    let (u1, v1) = (a1.re, a1.im);
    let (u2, v2) = (a2.re, a2.im);
    let gx = pt.x - u1 - u2;
    let gp = pt.p - v1 - v2;
    let envelope = (-0.5 * (gx * gx + gp * gp)).exp();
    let phase = (u2 * v2 - u1 * v1) + (u1 - u2) * (v1 + v2) + (v1 - v2) * pt.x - (u1 - u2) * pt.p;
    Complex64::from_polar(envelope, phase)
}

/// One ordered component pair with everything precomputed for fast
/// evaluation along grid rows.
#[derive(Debug, Clone, Copy)]
struct PairTerm {
    center_x: f64,
    center_p: f64,
    phase0: f64,
    coef_x: f64,
    coef_p: f64,
    weight: Complex64,
    ln_weight: f64,
}

/// Prepared pairwise evaluator for one state.
///
/// Summation is pair-major in component-index order, so results are
/// bit-stable regardless of how callers distribute points over threads.
#[derive(Debug, Clone)]
pub struct WignerEvaluator {
    terms: Vec<PairTerm>,
    norm: f64,
}

impl WignerEvaluator {
    pub fn new(state: &StateSpec) -> Self {
        let comps = state.components();
        let mut terms = Vec::with_capacity(comps.len() * comps.len());
        for cj in comps {
            let aj = cj.amplitude();
            for ck in comps {
                let ak = ck.amplitude();
                let (u1, v1) = (aj.re, aj.im);
                let (u2, v2) = (ak.re, ak.im);
                let weight = cj.weight() * ck.weight().conj();
                terms.push(PairTerm {
                    center_x: u1 + u2,
                    center_p: v1 + v2,
                    phase0: (u2 * v2 - u1 * v1) + (u1 - u2) * (v1 + v2),
                    coef_x: v1 - v2,
                    coef_p: -(u1 - u2),
                    weight,
                    ln_weight: weight.norm().ln(),
                });
            }
        }
        Self {
            terms,
            norm: 2.0 * PI * state.gram_norm_squared(),
        }
    }

    /// Normalised Wigner value at one point.
    pub fn eval(&self, pt: PhasePoint) -> WignerValue {
        let (re, im) = self.raw_sum(pt);
        WignerValue {
            value: re / self.norm,
            raw_complex_imag: im / self.norm,
        }
    }

    /// Unnormalised pairwise sum (real and imaginary part).
    pub fn raw_sum(&self, pt: PhasePoint) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for t in &self.terms {
            let gx = pt.x - t.center_x;
            let gp = pt.p - t.center_p;
            let log_env = -0.5 * (gx * gx + gp * gp);
            if log_env + t.ln_weight < ENVELOPE_CUTOFF_LN {
                continue;
            }
            let env = log_env.exp();
            let phase = t.phase0 + t.coef_x * pt.x + t.coef_p * pt.p;
            let (s, c) = phase.sin_cos();
            re += env * (t.weight.re * c - t.weight.im * s);
            im += env * (t.weight.re * s + t.weight.im * c);
        }
        (re, im)
    }

    /// Fill one grid row (fixed `p`, varying `x`) with normalised values.
    /// Loops pairs outside and points inside; pairs whose envelope cannot
    /// reach the row are pruned once.
    pub fn fill_row(&self, xs: &[f64], p: f64, out: &mut [f64]) {
        debug_assert_eq!(xs.len(), out.len());
        out.fill(0.0);
        for t in &self.terms {
            let gp = p - t.center_p;
            // conservative whole-row prune: -gx²/2 only lowers the envelope
            if -0.5 * gp * gp + t.ln_weight < ENVELOPE_CUTOFF_LN {
                continue;
            }
            for (x, o) in xs.iter().zip(out.iter_mut()) {
                let gx = x - t.center_x;
                let log_env = -0.5 * (gx * gx + gp * gp);
                if log_env + t.ln_weight < ENVELOPE_CUTOFF_LN {
                    continue;
                }
                let env = log_env.exp();
                let phase = t.phase0 + t.coef_x * x + t.coef_p * p;
                let (s, c) = phase.sin_cos();
                *o += env * (t.weight.re * c - t.weight.im * s);
            }
        }
        for o in out.iter_mut() {
            *o /= self.norm;
        }
    }

    /// `2π ⟨ψ|ψ⟩`, the output normalisation divisor.
    pub fn normalisation(&self) -> f64 {
        self.norm
    }
}

/// Exact normalised Wigner function of `state` at `pt`.
///
/// Prefer [`WignerEvaluator`] when evaluating many points of one state.
pub fn wigner_exact(state: &StateSpec, pt: PhasePoint) -> WignerValue {
    WignerEvaluator::new(state).eval(pt)
}

/// Centre-interference pattern of the `n`-compass superposition: the
/// contribution of the `2n` diametrically opposite component pairs only,
/// in the unnormalised scaling of the pairwise kernel.
///
/// Reduces to `2e^{-(x²+p²)/2}[cos 2ax + cos 2ap]` for `n = 1`.
pub fn wigner_center_approx(n: u32, a: f64, pt: PhasePoint) -> f64 {
    debug_assert!(n >= 1, "compass count must be at least 1");
    let envelope = 2.0 * (-0.5 * (pt.x * pt.x + pt.p * pt.p)).exp();
    let mut sum = 0.0;
    for m in 0..n {
        let (s, c) = (m as f64 * PI / (2.0 * n as f64)).sin_cos();
        sum += (2.0 * a * (pt.x * s - pt.p * c)).cos();
        sum += (2.0 * a * (pt.x * c + pt.p * s)).cos();
    }
    envelope * sum
}

/// Area of one tile of the central chessboard pattern, `π²/2a²`.
pub fn tile_area(a: f64) -> Result<f64> {
    if a.is_nan() || a <= 0.0 {
        return Err(Error::domain(format!("tile area needs a > 0, got {a}")));
    }
    Ok(PI * PI / (2.0 * a * a))
}
