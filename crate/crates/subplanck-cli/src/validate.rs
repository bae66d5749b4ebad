//! The `validate` subcommand: runs the brute-force oracle suite against the
//! closed forms and prints one PASS/FAIL line per check.

use std::process::ExitCode;

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subplanck::grid::{sample_field, FieldKind, SampleMode, SampleSpec, Window};
use subplanck::overlap::{cross_term_bound, gamma_approx, gamma_exact, pair_overlap};
use subplanck::special::{bessel_j, default_max_harmonic, jacobi_anger, JacobiAngerKind};
use subplanck::states::{Displacement, StateSpec};
use subplanck::wigner::{wigner_exact, PhasePoint};
use subplanck_oracle::{
    bessel_j_series_dd, fock_coherent, fock_displace, fock_state, recommended_dim,
    wigner_quadrature,
};

#[derive(Args)]
pub struct ValidateArgs {
    /// Restrict the state-dependent checks to this compass count
    #[arg(long)]
    n: Option<u32>,

    /// Restrict the state-dependent checks to this amplitude
    #[arg(long)]
    a: Option<f64>,

    /// Skip the quadrature checks (the slowest part of the suite)
    #[arg(long)]
    quick: bool,

    /// Seed for the randomised comparisons
    #[arg(long, default_value_t = 7)]
    seed: u64,

    /// Plain-text key=value file whose entries override the flags
    #[arg(long)]
    config: Option<std::path::PathBuf>,
}

struct Suite {
    failures: usize,
    total: usize,
}

impl Suite {
    fn new() -> Self {
        Self {
            failures: 0,
            total: 0,
        }
    }

    fn check(&mut self, name: &str, outcome: Result<String, String>) {
        self.total += 1;
        match outcome {
            Ok(detail) => println!("PASS  {name:<38} {detail}"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL  {name:<38} {detail}");
            }
        }
    }
}

fn bounded(name: &str, worst: f64, tol: f64) -> Result<String, String> {
    let detail = format!("worst {worst:.3e} (tolerance {tol:.1e})");
    if worst <= tol {
        Ok(detail)
    } else {
        Err(format!("{name}: {detail}"))
    }
}

pub fn cmd_validate(mut args: ValidateArgs) -> anyhow::Result<ExitCode> {
    if let Some(path) = args.config.clone() {
        let map = crate::config::load(&path)?;
        if let Some(n) = map.get("n") {
            args.n = Some(
                n.parse()
                    .map_err(|e| anyhow::anyhow!("config key n: {e}"))?,
            );
        }
        if let Some(a) = map.get("a") {
            args.a = Some(
                a.parse()
                    .map_err(|e| anyhow::anyhow!("config key a: {e}"))?,
            );
        }
        if let Some(q) = map.get("quick") {
            args.quick = q
                .parse()
                .map_err(|e| anyhow::anyhow!("config key quick: {e}"))?;
        }
        if let Some(s) = map.get("seed") {
            args.seed = s
                .parse()
                .map_err(|e| anyhow::anyhow!("config key seed: {e}"))?;
        }
    }

    let configs: Vec<(u32, f64)> = match (args.n, args.a) {
        (None, None) => vec![(1, 5.0), (2, 8.0)],
        (n, a) => {
            let n = n.unwrap_or(1);
            vec![(n, a.unwrap_or_else(|| crate::default_amplitude(n)))]
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut suite = Suite::new();

    // -- special functions ------------------------------------------------
    let mut worst = 0.0f64;
    let mut z = 0.1;
    while z <= 50.0 {
        for n in 1..=40u32 {
            let lhs = bessel_j(n - 1, z)? + bessel_j(n + 1, z)?;
            let rhs = 2.0 * n as f64 / z * bessel_j(n, z)?;
            worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-30));
        }
        z += 0.83;
    }
    suite.check("bessel_recurrence", bounded("recurrence", worst, 1e-11));

    let mut worst = 0.0f64;
    let mut z = 0.0;
    while z <= 30.0 {
        let mut s = bessel_j(0, z)?.powi(2);
        for n in 1..=64 {
            s += 2.0 * bessel_j(n, z)?.powi(2);
        }
        worst = worst.max((s - 1.0).abs());
        z += 0.67;
    }
    suite.check(
        "bessel_normalisation",
        bounded("normalisation", worst, 1e-10),
    );

    let mut worst = 0.0f64;
    let mut z = 0.0;
    while z <= 30.0 {
        for n in [0u32, 1, 2, 3, 5, 8, 13, 21, 34] {
            let fast = bessel_j(n, z)?;
            let slow = bessel_j_series_dd(n, z);
            worst = worst.max((fast - slow).abs() / slow.abs().max(1.0));
        }
        z += 0.482;
    }
    suite.check("bessel_vs_extended_series", bounded("series", worst, 1e-13));

    let mut worst = 0.0f64;
    for z in [0.5f64, 2.4, 11.0, 30.0] {
        let k = default_max_harmonic(z);
        for theta in [0.0f64, 0.37, 1.1, 2.2, 3.0] {
            let pairs = [
                (JacobiAngerKind::CosCos, (z * theta.cos()).cos()),
                (JacobiAngerKind::CosSin, (z * theta.sin()).cos()),
                (JacobiAngerKind::SinSin, (z * theta.sin()).sin()),
                (JacobiAngerKind::SinCos, (z * theta.cos()).sin()),
            ];
            for (kind, closed) in pairs {
                worst = worst.max((jacobi_anger(kind, z, theta, k)? - closed).abs());
            }
        }
    }
    suite.check(
        "jacobi_anger_closed_forms",
        bounded("jacobi-anger", worst, 1e-12),
    );

    // -- overlap against the Fock oracle ----------------------------------
    let mut worst = 0.0f64;
    let dim = recommended_dim(10.5);
    for _ in 0..10 {
        let a1 = rng.gen_range(0.5..8.0);
        let a2 = rng.gen_range(0.5..8.0);
        let th1 = rng.gen_range(0.0..std::f64::consts::TAU);
        let th2 = rng.gen_range(0.0..std::f64::consts::TAU);
        let d = Displacement::new(
            rng.gen_range(0.0..2.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
        )?;
        let closed = pair_overlap(a1, th1, a2, th2, d);
        let va = fock_coherent(a1, th1, dim)?;
        let vb = fock_coherent(a2, th2, dim)?;
        worst = worst.max((closed - va.inner(&fock_displace(&vb, d)?)).norm());
    }
    suite.check(
        "pair_overlap_vs_fock",
        bounded("pair overlap", worst, 1e-10),
    );

    for &(n, a) in &configs {
        let state = StateSpec::make_n_compass(n, a)?;
        let dim = recommended_dim(a + 1.5);
        let v = fock_state(&state, dim)?;
        let norm2 = v.norm_squared();
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let d = Displacement::new(
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
            )?;
            let closed = gamma_exact(&state, d).gamma;
            let brute = (v.inner(&fock_displace(&v, d)?) / norm2).norm_sqr();
            worst = worst.max((closed - brute).abs());
        }
        suite.check(
            &format!("gamma_exact_vs_fock_n{n}_a{a}"),
            bounded("gamma vs fock", worst, 1e-8),
        );

        let mut worst = 0.0f64;
        let half = 2.0 / a;
        for j in 0..21 {
            for i in 0..21 {
                let d = Displacement::from_cartesian(
                    -half + 2.0 * half * i as f64 / 20.0,
                    -half + 2.0 * half * j as f64 / 20.0,
                );
                let gap = (gamma_exact(&state, d).gamma - gamma_approx(n, a, d).gamma).abs();
                let b = cross_term_bound(&state, d);
                worst = worst.max(gap - (2.0 * b + b * b));
            }
        }
        suite.check(
            &format!("cross_term_bound_dominates_n{n}_a{a}"),
            bounded("bound slack", worst, 0.0),
        );

        let res = ((4.0 * a + 12.0) / 0.05).round() as usize;
        let spec = SampleSpec::new(
            FieldKind::Wigner,
            n,
            a,
            Window::symmetric(2.0 * a + 6.0)?,
            res,
            SampleMode::Exact,
        );
        let integral = sample_field(&spec)?.integral_estimate();
        suite.check(
            &format!("wigner_unit_integral_n{n}_a{a}"),
            bounded("integral deviation", (integral - 1.0).abs(), 1e-3),
        );

        if !args.quick {
            let mut worst = 0.0f64;
            for _ in 0..25 {
                let pt = PhasePoint::new(
                    rng.gen_range(-(2.0 * a + 4.0)..2.0 * a + 4.0),
                    rng.gen_range(-(2.0 * a + 4.0)..2.0 * a + 4.0),
                );
                worst = worst
                    .max((wigner_exact(&state, pt).value - wigner_quadrature(&state, pt)).abs());
            }
            suite.check(
                &format!("wigner_vs_quadrature_n{n}_a{a}"),
                bounded("quadrature", worst, 1e-7),
            );
        }
    }

    println!(
        "{}/{} checks passed{}",
        suite.total - suite.failures,
        suite.total,
        if args.quick {
            " (quick mode: quadrature checks skipped)"
        } else {
            ""
        }
    );
    Ok(if suite.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
