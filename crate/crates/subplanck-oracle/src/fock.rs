//! Truncated Fock-basis state algebra.

use num_complex::Complex64;
use subplanck::states::{Displacement, StateSpec};

use crate::{OracleError, Result};

/// Fraction of the norm the last retained amplitude may carry.
const TAIL_LIMIT: f64 = 1e-20;

/// Basis dimension with a comfortable Poisson-tail margin for amplitude `a`.
pub fn recommended_dim(a: f64) -> usize {
    (a * a + 10.0 * a + 20.0).ceil() as usize
}

/// A state vector over the number basis `|0⟩ … |dim-1⟩`.
#[derive(Debug, Clone)]
pub struct FockVector {
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn check_tail(&self) -> Result<()> {
        let norm2 = self.norm_squared();
        let tail = self.amplitudes.last().map_or(0.0, |c| c.norm_sqr());
        if tail >= TAIL_LIMIT * norm2 {
            return Err(OracleError::TailMass {
                tail: tail / norm2,
                limit: TAIL_LIMIT,
            });
        }
        Ok(())
    }
}

/// Lanczos approximation of `ln Γ(z)` for `z > 0`; ~1e-15 relative.
#[allow(clippy::excessive_precision)]
fn ln_gamma(z: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    debug_assert!(z > 0.0);
    let z = z - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Coherent state `|a e^{iθ}⟩` with amplitudes
/// `c_k = e^{-a²/2} (a e^{iθ})^k / √(k!)` computed in log space.
pub fn fock_coherent(a: f64, theta: f64, dim: usize) -> Result<FockVector> {
    let needed = a * a + 10.0 * a;
    if (dim as f64) <= needed {
        return Err(OracleError::DimensionTooSmall { dim, needed });
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    if a == 0.0 {
        amplitudes[0] = Complex64::new(1.0, 0.0);
        return Ok(FockVector { amplitudes });
    }
    let ln_a = a.ln();
    for (k, c) in amplitudes.iter_mut().enumerate() {
        let log_mag = -a * a / 2.0 + k as f64 * ln_a - 0.5 * ln_gamma(k as f64 + 1.0);
        *c = Complex64::from_polar(log_mag.exp(), k as f64 * theta);
    }
    let v = FockVector { amplitudes };
    v.check_tail()?;
    Ok(v)
}

/// Fock vector of a whole superposition (unnormalised).
pub fn fock_state(state: &StateSpec, dim: usize) -> Result<FockVector> {
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    for c in state.components() {
        let single = fock_coherent(c.radius(), c.angle(), dim)?;
        for (acc, s) in amplitudes.iter_mut().zip(single.amplitudes()) {
            *acc += c.weight() * s;
        }
    }
    let v = FockVector { amplitudes };
    v.check_tail()?;
    Ok(v)
}

/// Apply `D(δ) = exp(δ a† - δ* a)` built from the truncated ladder matrices.
///
/// The generator is tridiagonal, so the matrix exponential is applied by
/// scaling and squaring directly on the vector: `exp(K)v = (exp(K/2^s))^{2^s} v`
/// with each factor evaluated by a Taylor series at small norm.
pub fn fock_displace(v: &FockVector, delta: Displacement) -> Result<FockVector> {
    let dim = v.dim();
    let d = delta.as_complex();
    // sub[k]: K[k+1, k] = δ √(k+1) (creation part); super: K[k, k+1] = -δ* √(k+1)
    let root: Vec<f64> = (1..dim).map(|k| (k as f64).sqrt()).collect();

    let norm1 = 2.0 * delta.magnitude() * (dim as f64).sqrt();
    let scalings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let steps = 1u64 << scalings.min(40);
    let inv_steps = 1.0 / steps as f64;

    let apply_k = |src: &[Complex64], dst: &mut [Complex64]| {
        // dst = (K/steps) src
        for (k, out) in dst.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            if k > 0 {
                acc += d * root[k - 1] * src[k - 1];
            }
            if k + 1 < dim {
                acc -= d.conj() * root[k] * src[k + 1];
            }
            *out = acc * inv_steps;
        }
    };

    let mut state = v.amplitudes.clone();
    let mut term = vec![Complex64::new(0.0, 0.0); dim];
    let mut next = vec![Complex64::new(0.0, 0.0); dim];
    for _ in 0..steps {
        let mut sum = state.clone();
        term.copy_from_slice(&state);
        let mut j = 1.0f64;
        loop {
            apply_k(&term, &mut next);
            for t in next.iter_mut() {
                *t /= j;
            }
            std::mem::swap(&mut term, &mut next);
            let mut term_norm = 0.0;
            for (s, t) in sum.iter_mut().zip(&term) {
                *s += t;
                term_norm += t.norm_sqr();
            }
            if term_norm <= 1e-40 * v.norm_squared() || j > 60.0 {
                break;
            }
            j += 1.0;
        }
        state.copy_from_slice(&sum);
    }

    let out = FockVector { amplitudes: state };
    out.check_tail()?;
    Ok(out)
}
