//! Direct numerical quadrature of the Wigner integral
//! `W(x,p) ∝ ∫ dy e^{ipy/2} ψ*(x+y/2) ψ(x-y/2)` using the closed-form
//! Gaussian position wavefunctions of the coherent components.

use num_complex::Complex64;
use subplanck::states::StateSpec;
use subplanck::wigner::PhasePoint;

/// Position wavefunction of the superposition,
/// `ψ(x) = Σ w_j (2π)^{-1/4} e^{-i u_j v_j} e^{i v_j x} e^{-(x-2u_j)²/4}`.
fn wavefunction(state: &StateSpec, x: f64) -> Complex64 {
    let norm = (2.0 * std::f64::consts::PI).powf(-0.25);
    let mut psi = Complex64::new(0.0, 0.0);
    for c in state.components() {
        let alpha = c.amplitude();
        let (u, v) = (alpha.re, alpha.im);
        let gauss = (-(x - 2.0 * u) * (x - 2.0 * u) / 4.0).exp();
        psi += c.weight() * Complex64::from_polar(norm * gauss, v * x - u * v);
    }
    psi
}

fn simpson_estimate(fa: Complex64, fm: Complex64, fb: Complex64, h: f64) -> Complex64 {
    (fa + 4.0 * fm + fb) * (h / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    eps: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_estimate(fa, flm, fm, m - a);
    let right = simpson_estimate(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
        + adaptive_simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

/// Wigner value at `pt` by adaptive quadrature, scaled to the same
/// unit-integral normalisation as `subplanck::wigner::wigner_exact`.
pub fn wigner_quadrature(state: &StateSpec, pt: PhasePoint) -> f64 {
    let max_radius = state
        .components()
        .iter()
        .map(|c| c.radius())
        .fold(0.0f64, f64::max);
    let reach = 4.0 * max_radius + 24.0;
    let f = |y: f64| -> Complex64 {
        Complex64::from_polar(1.0, pt.p * y / 2.0)
            * wavefunction(state, pt.x + y / 2.0).conj()
            * wavefunction(state, pt.x - y / 2.0)
    };
    let (a, b) = (-reach, reach);
    let (fa, fb) = (f(a), f(b));
    let fm = f(0.5 * (a + b));
    let whole = simpson_estimate(fa, fm, fb, b - a);
    let integral = adaptive_simpson(&f, a, b, fa, fm, fb, whole, 1e-10, 40);
    // raw integral = 2 × pairwise kernel sum; normalise by 2·2π⟨ψ|ψ⟩
    integral.re / (4.0 * std::f64::consts::PI * state.gram_norm_squared())
}
