//! Heavier deterministic invariants: unit normalisation of the Wigner field,
//! marginals, centre-pattern validity, cross-term bound dominance and mask
//! symmetry on sampled grids.

use num_complex::Complex64;
use subplanck::grid::{sample_field, FieldKind, SampleMode, SampleSpec, Window};
use subplanck::overlap::{cross_term_bound, gamma_approx, GammaEvaluator};
use subplanck::sensitivity::sensitivity_sweep;
use subplanck::states::{Displacement, StateSpec};
use subplanck::wigner::{pair_kernel, wigner_center_approx, PhasePoint, WignerEvaluator};

/// Trapezoid integral of the normalised Wigner field over
/// `[-2a-6, 2a+6]²` with the given step.
fn wigner_trapezoid_integral(state: &StateSpec, a: f64, step: f64) -> f64 {
    let ev = WignerEvaluator::new(state);
    let half = 2.0 * a + 6.0;
    let count = (2.0 * half / step).round() as usize + 1;
    let xs: Vec<f64> = (0..count).map(|i| -half + i as f64 * step).collect();
    let mut row = vec![0.0; count];
    let mut total = 0.0;
    for (j, p) in xs.iter().enumerate() {
        ev.fill_row(&xs, *p, &mut row);
        let wj = if j == 0 || j == count - 1 { 0.5 } else { 1.0 };
        let mut row_sum = 0.5 * (row[0] + row[count - 1]);
        row_sum += row[1..count - 1].iter().sum::<f64>();
        total += wj * row_sum;
    }
    total * step * step
}

#[test]
fn wigner_integrates_to_one_n1() {
    let s = StateSpec::make_n_compass(1, 5.0).unwrap();
    let integral = wigner_trapezoid_integral(&s, 5.0, 0.05);
    assert!((integral - 1.0).abs() < 1e-4, "integral {integral}");
}

#[test]
fn wigner_integrates_to_one_n2() {
    let s = StateSpec::make_n_compass(2, 8.0).unwrap();
    let integral = wigner_trapezoid_integral(&s, 8.0, 0.05);
    assert!((integral - 1.0).abs() < 1e-4, "integral {integral}");
}

#[test]
fn wigner_integrates_to_one_n3() {
    let s = StateSpec::make_n_compass(3, 12.0).unwrap();
    let integral = wigner_trapezoid_integral(&s, 12.0, 0.05);
    assert!((integral - 1.0).abs() < 1e-4, "integral {integral}");
}

#[test]
fn wigner_marginal_matches_position_density() {
    // ∫ W dp at fixed x equals |ψ(x)|²/⟨ψ|ψ⟩ for the cat state, with the
    // Gaussian wavefunctions ψ_±(x) = (2π)^{-1/4} e^{-(x∓2a)²/4}.
    let a = 5.0;
    let s = StateSpec::make_cat(a).unwrap();
    let ev = WignerEvaluator::new(&s);
    let gram = s.gram_norm_squared();
    let psi = |x: f64| {
        (2.0 * std::f64::consts::PI).powf(-0.25)
            * ((-(x - 2.0 * a) * (x - 2.0 * a) / 4.0).exp()
                + (-(x + 2.0 * a) * (x + 2.0 * a) / 4.0).exp())
    };
    let half = 2.0 * a + 8.0;
    let step = 0.02;
    let count = (2.0 * half / step).round() as usize + 1;
    for x in [0.0, 1.0, 2.0 * a, 9.3, -4.7] {
        let mut marginal = 0.0;
        for j in 0..count {
            let p = -half + j as f64 * step;
            let w = if j == 0 || j == count - 1 { 0.5 } else { 1.0 };
            marginal += w * ev.eval(PhasePoint::new(x, p)).value;
        }
        marginal *= step;
        let expect = psi(x) * psi(x) / gram;
        assert!(
            (marginal - expect).abs() < 1e-6,
            "x={x}: marginal {marginal} vs {expect}"
        );
    }
}

#[test]
fn centre_pattern_valid_inside_unit_disk() {
    // Inside |(x,p)| <= 1 the centre formula agrees with the diametral
    // partial sum of the exact pairwise kernel to relative 1e-6.
    for (n, a) in [(1u32, 5.0), (2, 8.0), (3, 12.0)] {
        let s = StateSpec::make_n_compass(n, a).unwrap();
        let comps = s.components();
        for k in 0..40 {
            let t = k as f64 * 0.157;
            let r = 0.025 * k as f64;
            let pt = PhasePoint::new(r * t.cos(), r * t.sin());
            let mut partial = Complex64::new(0.0, 0.0);
            for cj in comps {
                for ck in comps {
                    if (cj.amplitude() + ck.amplitude()).norm() < 1e-9 {
                        partial += pair_kernel(cj, ck, pt);
                    }
                }
            }
            let centre = wigner_center_approx(n, a, pt);
            let scale = centre.abs().max(1e-12);
            assert!(
                (partial.re - centre).abs() / scale < 1e-6,
                "n={n} r={r}: {} vs {centre}",
                partial.re
            );
        }
    }
}

#[test]
fn cross_term_bound_dominates_pointwise() {
    // |γ_exact - γ_approx| <= 2B + B² over |δ| <= 3 for the three
    // figure configurations.
    for (n, a) in [(1u32, 5.0), (2, 8.0), (3, 12.0)] {
        let s = StateSpec::make_n_compass(n, a).unwrap();
        let ev = GammaEvaluator::new(&s);
        for im in 0..12 {
            for re in 0..12 {
                let d = Displacement::from_cartesian(
                    -3.0 + 6.0 * re as f64 / 11.0,
                    -3.0 + 6.0 * im as f64 / 11.0,
                );
                let ge = ev.gamma(d.as_complex());
                let ga = gamma_approx(n, a, d).gamma;
                let b = cross_term_bound(&s, d);
                assert!(
                    (ge - ga).abs() <= 2.0 * b + b * b + 1e-15,
                    "n={n} δ=({}, {}): gap {} bound {b}",
                    d.re(),
                    d.im(),
                    (ge - ga).abs()
                );
            }
        }
    }
}

#[test]
fn exact_gamma_periodicity_deviation_within_cross_bound() {
    // γ_exact deviates from the exact π/2n periodicity of γ_approx by no
    // more than the neglected cross terms allow.
    let (n, a) = (2u32, 8.0);
    let s = StateSpec::make_n_compass(n, a).unwrap();
    let ev = GammaEvaluator::new(&s);
    let period = std::f64::consts::PI / (2.0 * n as f64);
    for k in 0..10 {
        let mag = 0.05 + 0.03 * k as f64;
        let dir = 0.21 * k as f64;
        let d0 = Displacement::new(mag, dir).unwrap();
        let d1 = Displacement::new(mag, dir + period).unwrap();
        let g0 = ev.gamma(d0.as_complex());
        let g1 = ev.gamma(d1.as_complex());
        let b = cross_term_bound(&s, d0).max(cross_term_bound(&s, d1));
        assert!(
            (g0 - g1).abs() <= 2.0 * (2.0 * b + b * b),
            "|δ|={mag} φ={dir}: {g0} vs {g1}, bound {b}"
        );
    }
}

#[test]
fn scaled_sensitivity_is_amplitude_invariant() {
    // the zero condition depends on (a|δ|, argδ) only, so a·|δ|min is a
    // pure function of n
    for n in [1u32, 2, 3] {
        let reference = sensitivity_sweep(n, 5.0, 64).unwrap().delta_min * 5.0;
        for a in [8.0, 12.0, 16.0] {
            let scaled = sensitivity_sweep(n, a, 64).unwrap().delta_min * a;
            assert!(
                (scaled - reference).abs() < 1e-8,
                "n={n} a={a}: {scaled} vs {reference}"
            );
        }
    }
}

#[test]
fn refined_minimum_is_a_genuine_overlap_zero() {
    for (n, a) in [(1u32, 5.0), (2, 8.0), (3, 12.0)] {
        let report = sensitivity_sweep(n, a, 360).unwrap();
        let gamma = gamma_approx(
            n,
            a,
            Displacement::new(report.delta_min, report.arg_min).unwrap(),
        )
        .gamma;
        assert!(gamma < 1e-15, "n={n}: gamma at minimum {gamma:.3e}");
    }
}

#[test]
fn minimum_direction_is_odd_multiple_of_quarter_period() {
    for (n, a) in [(1u32, 5.0), (2, 8.0), (3, 12.0)] {
        let report = sensitivity_sweep(n, a, 720).unwrap();
        let quarter = std::f64::consts::PI / (4.0 * n as f64);
        let fold = (report.arg_min / quarter).round() as i64;
        assert!(
            fold % 2 == 1 && (report.arg_min - fold as f64 * quarter).abs() < 1e-4,
            "n={n}: arg_min {}",
            report.arg_min
        );
    }
}

#[test]
fn sensitivity_is_sub_planck() {
    for a in [2.5, 5.0, 12.0, 30.0] {
        for n in [1u32, 2, 3] {
            let report = sensitivity_sweep(n, a, 64).unwrap();
            assert!(
                report.delta_min < 1.0,
                "n={n} a={a}: |δ|min {}",
                report.delta_min
            );
        }
        let single = sensitivity_sweep(1, a, 64).unwrap();
        let bound = std::f64::consts::PI / (2.0 * std::f64::consts::SQRT_2);
        assert!(single.delta_min * a > bound - 1e-9);
    }
}

#[test]
fn gamma_mask_eightfold_symmetry_two_compasses() {
    // The approximate two-compass overlap repeats under π/4 rotation of δ;
    // on a grid the rotated cell centre is mapped to the nearest cell.
    // Cells whose γ sits within the aliasing margin of the cutoff are the
    // only ones allowed to disagree.
    let (n, a) = (2u32, 8.0);
    let res = 160; // multiple of 8
    let spec = SampleSpec::new(
        FieldKind::GammaZeroMask,
        n,
        a,
        Window::symmetric(0.375).unwrap(),
        res,
        SampleMode::Approx,
    );
    let f = sample_field(&spec).unwrap();
    let (s45, c45) = (
        std::f64::consts::FRAC_PI_4.sin(),
        std::f64::consts::FRAC_PI_4.cos(),
    );
    let cell = f.cell_dx();
    let cutoff = 1e-3;
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    for j in 0..f.np {
        for i in 0..f.nx {
            let (x, p) = (f.x_center(i), f.p_center(j));
            let (rx, rp) = (x * c45 - p * s45, x * s45 + p * c45);
            let ri = ((rx - f.window.x_min) / cell - 0.5).round() as i64;
            let rj = ((rp - f.window.p_min) / cell - 0.5).round() as i64;
            if ri < 0 || rj < 0 || ri >= f.nx as i64 || rj >= f.np as i64 {
                continue;
            }
            checked += 1;
            if f.value(i, j) != f.value(ri as usize, rj as usize) {
                // genuine aliasing only: the rotated centre's γ must sit
                // close enough to the cutoff to flip under half-cell motion
                let g_here = gamma_approx(n, a, Displacement::from_cartesian(x, p)).gamma;
                let g_near = gamma_approx(
                    n,
                    a,
                    Displacement::from_cartesian(f.x_center(ri as usize), f.p_center(rj as usize)),
                )
                .gamma;
                let margin = (g_here - cutoff).abs().min((g_near - cutoff).abs());
                assert!(
                    margin < 0.5 * cutoff,
                    "cell ({i},{j}) disagrees with γ margins {:.2e}/{:.2e}",
                    (g_here - cutoff).abs(),
                    (g_near - cutoff).abs()
                );
                mismatches += 1;
            }
        }
    }
    assert!(checked > (res * res) / 2);
    // ring-boundary cells are a few percent of the grid; every mismatch
    // above already proved itself to be contour-straddling
    assert!(
        (mismatches as f64) < 0.05 * checked as f64,
        "{mismatches} aliasing mismatches out of {checked}"
    );
}
