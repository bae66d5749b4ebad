//! Certification of the closed forms against the independent brute-force
//! references: truncated Fock algebra, Wigner quadrature and the
//! double-double Bessel series.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subplanck::overlap::{gamma_exact, pair_overlap};
use subplanck::special::{bessel_j, BESSEL_ACCURACY};
use subplanck::states::{Displacement, StateSpec};
use subplanck::wigner::{wigner_exact, PhasePoint};
use subplanck_oracle::{
    bessel_j_series_dd, fock_coherent, fock_displace, fock_state, recommended_dim,
    wigner_quadrature,
};

#[test]
fn bessel_matches_extended_precision_series() {
    // the production evaluator against the double-double series, including
    // the Miller-recurrence region
    let mut z = 0.0;
    while z <= 30.0 {
        for n in [0u32, 1, 2, 3, 5, 8, 13, 21, 34, 55] {
            let fast = bessel_j(n, z).unwrap();
            let slow = bessel_j_series_dd(n, z);
            assert!(
                (fast - slow).abs() <= BESSEL_ACCURACY * slow.abs().max(1.0),
                "n={n} z={z}: {fast} vs {slow}"
            );
        }
        z += 0.482;
    }
    // the operating point of the sensitivity pipeline
    let fast = bessel_j(2, 2.4).unwrap();
    let slow = bessel_j_series_dd(2, 2.4);
    assert!((fast - slow).abs() < 1e-13);
}

#[test]
fn pair_overlap_matches_fock_inner_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    // amplitudes up to 8 displaced by up to 2
    let dim = recommended_dim(10.5);
    for _ in 0..12 {
        let a1 = rng.gen_range(0.5..8.0);
        let a2 = rng.gen_range(0.5..8.0);
        let th1 = rng.gen_range(0.0..std::f64::consts::TAU);
        let th2 = rng.gen_range(0.0..std::f64::consts::TAU);
        let d = Displacement::new(
            rng.gen_range(0.0..2.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
        )
        .unwrap();
        let closed = pair_overlap(a1, th1, a2, th2, d);
        let va = fock_coherent(a1, th1, dim).unwrap();
        let vb = fock_coherent(a2, th2, dim).unwrap();
        let brute = va.inner(&fock_displace(&vb, d).unwrap());
        assert!(
            (closed - brute).norm() < 1e-10,
            "a1={a1:.3} a2={a2:.3}: {closed} vs {brute}"
        );
    }
}

#[test]
fn gamma_exact_matches_fock_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (n, a) in [(1u32, 5.0), (2, 8.0)] {
        let state = StateSpec::make_n_compass(n, a).unwrap();
        // headroom for |δ| up to 1: displaced components reach a+1
        let dim = recommended_dim(a + 1.5);
        let v = fock_state(&state, dim).unwrap();
        let norm2 = v.norm_squared();
        for _ in 0..8 {
            let d = Displacement::new(
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
            .unwrap();
            let closed = gamma_exact(&state, d);
            let brute_amp = v.inner(&fock_displace(&v, d).unwrap()) / norm2;
            assert!(
                (closed.amplitude - brute_amp).norm() < 1e-8,
                "n={n} |δ|={}: amplitude {} vs {brute_amp}",
                d.magnitude(),
                closed.amplitude
            );
            assert!((closed.gamma - brute_amp.norm_sqr()).abs() < 1e-8);
        }
    }
}

#[test]
fn gram_matches_fock_norm() {
    let state = StateSpec::make_n_compass(2, 8.0).unwrap();
    let v = fock_state(&state, recommended_dim(8.0)).unwrap();
    assert!((state.gram_norm_squared() - v.norm_squared()).abs() < 1e-10);
}

#[test]
fn wigner_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let state = StateSpec::make_n_compass(1, 5.0).unwrap();
    for _ in 0..8 {
        let pt = PhasePoint::new(rng.gen_range(-14.0..14.0), rng.gen_range(-14.0..14.0));
        let fast = wigner_exact(&state, pt).value;
        let slow = wigner_quadrature(&state, pt);
        assert!(
            (fast - slow).abs() < 1e-7,
            "({}, {}): {fast} vs {slow}",
            pt.x,
            pt.p
        );
    }
}

#[test]
fn quadrature_handles_weighted_superpositions() {
    // odd cat: representable even though no constructor builds it
    let text = "# odd cat\n4 0 1 0\n4 180 -1 0\n";
    let state = StateSpec::from_text(text).unwrap();
    let pt = PhasePoint::new(0.3, 0.4);
    let fast = wigner_exact(&state, pt).value;
    let slow = wigner_quadrature(&state, pt);
    assert!((fast - slow).abs() < 1e-8);
}
