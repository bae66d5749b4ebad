//! Overlap `γ(δ) = |⟨ψ|D(δ)|ψ⟩|²` between a state and its displaced copy.
//!
//! The exact route sums the closed-form pairwise matrix element
//!
//! ```text
//! ⟨α|D(δ)|β⟩ = ⟨α|β⟩ · exp(α*δ - β δ* - |δ|²/2),
//! ```
//!
//! obtained from `D(δ)|β⟩ = e^{(δβ* - δ*β)/2} |β+δ⟩`, over every ordered
//! component pair, and normalises by the exact Gram norm so `γ(0) = 1` at any
//! amplitude.  The approximate route keeps self terms only; for an
//! `n`-compass superposition those collapse to a sum of `2n` cosines with a
//! Gaussian prefactor, normalised by its `δ = 0` value `4n²`.  The neglected
//! cross terms decay like `exp(-a²(1-cos(π/2n)))` and are quantified by
//! [`cross_term_bound`].

use num_complex::Complex64;

use crate::states::{coherent_inner, Displacement, StateSpec};

/// Which route produced an [`OverlapResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapMode {
    Exact,
    Approx,
}

/// The overlap value together with the normalised amplitude it squares.
#[derive(Debug, Clone, Copy)]
pub struct OverlapResult {
    /// `|amplitude|²`, in `[0, 1]` up to rounding.
    pub gamma: f64,
    /// `⟨ψ|D(δ)|ψ⟩ / ⟨ψ|ψ⟩` (exact) or its self-term surrogate (approx).
    pub amplitude: Complex64,
    pub mode: OverlapMode,
}

/// `⟨a₁e^{iθ₁}| D(δ) |a₂e^{iθ₂}⟩` for unit-normalised coherent states.
pub fn pair_overlap(a1: f64, theta1: f64, a2: f64, theta2: f64, delta: Displacement) -> Complex64 {
    let alpha = Complex64::from_polar(a1, theta1);
    let beta = Complex64::from_polar(a2, theta2);
    pair_overlap_c(alpha, beta, delta.as_complex())
}

pub(crate) fn pair_overlap_c(alpha: Complex64, beta: Complex64, delta: Complex64) -> Complex64 {
    coherent_inner(alpha, beta)
        * (alpha.conj() * delta - beta * delta.conj() - delta.norm_sqr() / 2.0).exp()
}

/// Prepared exact-overlap evaluator; summation is component-index-major.
#[derive(Debug, Clone)]
pub struct GammaEvaluator {
    /// Per ordered pair: `w_j* w_k ⟨α_j|α_k⟩`, `α_j*`, `α_k`.
    pairs: Vec<(Complex64, Complex64, Complex64)>,
    gram: f64,
}

impl GammaEvaluator {
    pub fn new(state: &StateSpec) -> Self {
        let comps = state.components();
        let mut pairs = Vec::with_capacity(comps.len() * comps.len());
        for cj in comps {
            for ck in comps {
                let base = cj.weight().conj()
                    * ck.weight()
                    * coherent_inner(cj.amplitude(), ck.amplitude());
                pairs.push((base, cj.amplitude().conj(), ck.amplitude()));
            }
        }
        Self {
            pairs,
            gram: state.gram_norm_squared(),
        }
    }

    /// Normalised amplitude `⟨ψ|D(δ)|ψ⟩ / ⟨ψ|ψ⟩`.
    pub fn amplitude(&self, delta: Complex64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        let dconj = delta.conj();
        for (base, aj_conj, ak) in &self.pairs {
            sum += base * (aj_conj * delta - ak * dconj).exp();
        }
        sum * (-delta.norm_sqr() / 2.0).exp() / self.gram
    }

    pub fn gamma(&self, delta: Complex64) -> f64 {
        self.amplitude(delta).norm_sqr()
    }
}

/// Exact overlap of `state` with its `δ`-displaced copy, all cross terms
/// included, normalised so `γ(0) = 1`.
pub fn gamma_exact(state: &StateSpec, delta: Displacement) -> OverlapResult {
    let amplitude = GammaEvaluator::new(state).amplitude(delta.as_complex());
    OverlapResult {
        gamma: amplitude.norm_sqr(),
        amplitude,
        mode: OverlapMode::Exact,
    }
}

/// Self-term (cross terms dropped) overlap of the `n`-compass superposition:
///
/// ```text
/// γ(δ) ≈ e^{-|δ|²} |Σ_m cos(2a|δ|cos(argδ + mπ/2n)) + cos(2a|δ|sin(argδ + mπ/2n))|² / 4n²
/// ```
///
/// with period `π/2n` over `arg δ`.
pub fn gamma_approx(n: u32, a: f64, delta: Displacement) -> OverlapResult {
    debug_assert!(n >= 1 && a > 0.0);
    let f = crate::sensitivity::root_condition(n, a, delta);
    let amp = (-delta.magnitude() * delta.magnitude() / 2.0).exp() * f / (2.0 * n as f64);
    OverlapResult {
        gamma: amp * amp,
        amplitude: Complex64::new(amp, 0.0),
        mode: OverlapMode::Approx,
    }
}

/// Sum of the magnitudes of all neglected (non-self) pair terms, divided by
/// the Gram norm: an upper bound on the cross-term error in the normalised
/// amplitude.
pub fn cross_term_bound(state: &StateSpec, delta: Displacement) -> f64 {
    let comps = state.components();
    let d = delta.as_complex();
    let mut sum = 0.0;
    for (j, cj) in comps.iter().enumerate() {
        for (k, ck) in comps.iter().enumerate() {
            if j == k {
                continue;
            }
            let dist = cj.amplitude() - ck.amplitude() - d;
            sum += cj.weight().norm() * ck.weight().norm() * (-dist.norm_sqr() / 2.0).exp();
        }
    }
    sum / state.gram_norm_squared()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn same_state_overlap_magnitude_is_universal() {
        // |<a|D(δ)|a>|² = e^{-|δ|²} for any coherent state.
        for (a, th) in [(0.0, 0.0), (3.0, 1.2), (8.0, 4.0)] {
            for (m, dir) in [(0.5, 0.3), (1.0, 2.0), (2.2, -1.0)] {
                let d = Displacement::new(m, dir).unwrap();
                let ov = pair_overlap(a, th, a, th, d);
                assert!(
                    (ov.norm_sqr() - (-m * m).exp()).abs() < 1e-14,
                    "a={a} θ={th} |δ|={m}"
                );
            }
        }
    }

    #[test]
    fn same_state_overlap_phase() {
        // <a,θ|D(δ)|a,θ> = exp(2i a(Im δ cos θ - Re δ sin θ) - |δ|²/2)
        let (a, th) = (5.0, 0.9);
        let d = Displacement::from_cartesian(0.21, -0.33);
        let ov = pair_overlap(a, th, a, th, d);
        let expect = Complex64::new(0.0, 2.0 * a * (d.im() * th.cos() - d.re() * th.sin())).exp()
            * (-d.magnitude() * d.magnitude() / 2.0).exp();
        assert!((ov - expect).norm() < 1e-14);
    }

    #[test]
    fn identity_displacement_is_unit_self_overlap() {
        let ov = pair_overlap(4.0, 0.7, 4.0, 0.7, Displacement::zero());
        assert!((ov - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn opposite_coherent_states_overlap() {
        let a = 5.0;
        let ov = pair_overlap(a, 0.0, a, PI, Displacement::zero());
        assert!((ov.norm() - (-2.0 * a * a).exp()).abs() < 1e-15 * (-2.0 * a * a).exp());
    }

    #[test]
    fn gamma_is_one_at_zero_displacement() {
        for state in [
            StateSpec::make_coherent(3.0).unwrap(),
            StateSpec::make_cat(5.0).unwrap(),
            StateSpec::make_n_compass(2, 8.0).unwrap(),
        ] {
            let r = gamma_exact(&state, Displacement::zero());
            assert!((r.gamma - 1.0).abs() < 1e-12);
            assert!((r.gamma - r.amplitude.norm_sqr()).abs() < 1e-14);
        }
    }

    #[test]
    fn coherent_gamma_at_unit_displacement() {
        let s = StateSpec::make_coherent(5.0).unwrap();
        let r = gamma_exact(&s, Displacement::new(1.0, 0.77).unwrap());
        assert!((r.gamma - (-1.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn first_zero_ring_of_single_compass() {
        let s = StateSpec::make_n_compass(1, 5.0).unwrap();
        let d = Displacement::new(PI / (2.0 * 2.0f64.sqrt() * 5.0), FRAC_PI_4).unwrap();
        assert!(gamma_exact(&s, d).gamma < 1e-3);
    }

    #[test]
    fn approx_matches_literal_single_compass_formula() {
        // 2a·Re δ = π/2, Im δ = 0: γ = e^{-|δ|²} |1 + cos(π/2)|² / 4
        let a = 5.0;
        let d = Displacement::new(PI / (4.0 * a), 0.0).unwrap();
        let expect =
            (-d.magnitude() * d.magnitude()).exp() * (1.0 + (PI / 2.0).cos()).powi(2) / 4.0;
        let r = gamma_approx(1, a, d);
        assert!((r.gamma - expect).abs() < 1e-14);
        assert_eq!(r.mode, OverlapMode::Approx);
    }

    #[test]
    fn approx_gamma_is_one_at_zero() {
        for n in 1..=4 {
            let r = gamma_approx(n, 8.0, Displacement::zero());
            assert!((r.gamma - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn approx_has_quarter_pi_period_for_two_compasses() {
        let (n, a) = (2, 8.0);
        for k in 0..12 {
            let mag = 0.05 + 0.02 * k as f64;
            let dir = 0.13 * k as f64;
            let g0 = gamma_approx(n, a, Displacement::new(mag, dir).unwrap()).gamma;
            let g1 = gamma_approx(n, a, Displacement::new(mag, dir + FRAC_PI_4).unwrap()).gamma;
            assert!((g0 - g1).abs() < 1e-12 * g0.max(1e-3));
        }
    }

    #[test]
    fn exact_matches_approx_up_to_cross_terms() {
        // Nearest-neighbour pairs bound the gap; for n=2 "e^{-a²}-class"
        // would be optimistic, the true scale is exp(-a²(1-cos(π/4))).
        let (n, a) = (2u32, 8.0);
        let s = StateSpec::make_n_compass(n, a).unwrap();
        let ev = GammaEvaluator::new(&s);
        let mut worst = 0.0f64;
        for i in 0..21 {
            for j in 0..21 {
                let re = -2.0 / a + 4.0 / a * i as f64 / 20.0;
                let im = -2.0 / a + 4.0 / a * j as f64 / 20.0;
                let d = Displacement::from_cartesian(re, im);
                let ge = ev.gamma(d.as_complex());
                let ga = gamma_approx(n, a, d).gamma;
                let b = cross_term_bound(&s, d);
                let gap = (ge - ga).abs();
                assert!(gap <= 2.0 * b + b * b, "({re},{im}): gap {gap} bound {b}");
                worst = worst.max(gap);
            }
        }
        assert!(worst < 2e-8, "worst gap {worst}");
    }

    #[test]
    fn cross_term_bound_examples() {
        let coh = StateSpec::make_coherent(6.0).unwrap();
        assert_eq!(cross_term_bound(&coh, Displacement::zero()), 0.0);

        let s1 = StateSpec::make_n_compass(1, 5.0).unwrap();
        assert!(cross_term_bound(&s1, Displacement::zero()) < 1e-6);

        // dominated by the 16 nearest-neighbour pairs at chord 2a sin(π/8)
        let s2 = StateSpec::make_n_compass(2, 8.0).unwrap();
        let b = cross_term_bound(&s2, Displacement::new(1.2 / 8.0, 0.0).unwrap());
        assert!(b < 1e-7, "bound {b}");
    }

    #[test]
    fn gamma_symmetric_under_delta_negation() {
        let s = StateSpec::make_n_compass(2, 6.0).unwrap();
        for (m, dir) in [(0.1, 0.4), (0.33, 1.9), (0.7, -0.6)] {
            let d = Displacement::new(m, dir).unwrap();
            let r1 = gamma_exact(&s, d);
            let r2 = gamma_exact(&s, d.negated());
            // amplitudes are conjugates; the squared moduli agree to the
            // rounding floor of the pairwise sums
            assert!((r1.amplitude.conj() - r2.amplitude).norm() < 1e-13);
            assert!((r1.gamma - r2.gamma).abs() <= 1e-14 + 1e-12 * r1.gamma);
        }
    }

    #[test]
    fn gamma_rotation_covariance() {
        let s = StateSpec::make_n_compass(1, 5.0).unwrap();
        for theta in [0.3, 1.1, -0.8] {
            let rs = s.rotate(theta);
            for (m, dir) in [(0.2, 0.1), (0.5, 2.0)] {
                let d = Displacement::new(m, dir).unwrap();
                let lhs = gamma_exact(&rs, d).gamma;
                let rhs = gamma_exact(&s, Displacement::new(m, dir - theta).unwrap()).gamma;
                assert!((lhs - rhs).abs() < 1e-12, "θ={theta} |δ|={m} arg={dir}");
            }
        }
    }
}
