//! Superpositions of coherent states on a circle.
//!
//! Every state handled by this crate is a finite weighted superposition of
//! coherent states `|a·e^{iθ}⟩`.  The constructors build the families of
//! interest (single coherent state, even cat, superposition of `n` compass
//! states); everything downstream works off the generic component list.
//! States are deliberately kept unnormalised: the Gram norm is computed where
//! output normalisation is required and nowhere else.

use num_complex::Complex64;
use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Components closer than this in the complex-amplitude plane are merged.
const MERGE_TOL: f64 = 1e-12;

/// One coherent state on the circle: radius `a`, angle `θ`, complex weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentComponent {
    radius: f64,
    angle: f64,
    weight: Complex64,
}

impl CoherentComponent {
    /// Construct a component; the angle is canonicalised into `[0, 2π)`.
    pub fn new(radius: f64, angle: f64, weight: Complex64) -> Result<Self> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::domain(format!(
                "component radius must be finite and non-negative, got {radius}"
            )));
        }
        if !angle.is_finite() {
            return Err(Error::domain(format!(
                "component angle must be finite, got {angle}"
            )));
        }
        if !weight.re.is_finite() || !weight.im.is_finite() {
            return Err(Error::domain("component weight must be finite".to_string()));
        }
        // At the origin the angle is meaningless; pin it so degenerate
        // components compare equal and merge.
        let angle = if radius <= MERGE_TOL {
            0.0
        } else {
            canonical_angle(angle)
        };
        Ok(Self {
            radius,
            angle,
            weight,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Angle in `[0, 2π)`.
    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn weight(&self) -> Complex64 {
        self.weight
    }

    /// Complex amplitude `a·e^{iθ}` of the underlying coherent state.
    pub fn amplitude(&self) -> Complex64 {
        Complex64::from_polar(self.radius, self.angle)
    }
}

fn canonical_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Overlap `⟨α|β⟩` of two unit-normalised coherent states.
pub(crate) fn coherent_inner(alpha: Complex64, beta: Complex64) -> Complex64 {
    (alpha.conj() * beta - (alpha.norm_sqr() + beta.norm_sqr()) / 2.0).exp()
}

/// A phase-space displacement `δ`, stored as magnitude and direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Displacement {
    magnitude: f64,
    direction: f64,
}

impl Displacement {
    pub fn new(magnitude: f64, direction: f64) -> Result<Self> {
        if !magnitude.is_finite() || magnitude < 0.0 {
            return Err(Error::domain(format!(
                "displacement magnitude must be finite and non-negative, got {magnitude}"
            )));
        }
        if !direction.is_finite() {
            return Err(Error::domain(format!(
                "displacement direction must be finite, got {direction}"
            )));
        }
        Ok(Self {
            magnitude,
            direction,
        })
    }

    pub fn from_cartesian(re: f64, im: f64) -> Self {
        Self {
            magnitude: re.hypot(im),
            direction: im.atan2(re),
        }
    }

    pub fn zero() -> Self {
        Self {
            magnitude: 0.0,
            direction: 0.0,
        }
    }

    /// `|δ|`
    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    /// `arg δ`
    pub fn direction(&self) -> f64 {
        self.direction
    }

    pub fn re(&self) -> f64 {
        self.magnitude * self.direction.cos()
    }

    pub fn im(&self) -> f64 {
        self.magnitude * self.direction.sin()
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.direction)
    }

    pub fn negated(&self) -> Self {
        Self {
            magnitude: self.magnitude,
            direction: self.direction + std::f64::consts::PI,
        }
    }
}

/// A finite superposition of coherent states on the circle.
///
/// Construction merges coincident components (same point of the complex
/// plane within `1e-12`) by summing their weights, so degenerate inputs such
/// as a zero-radius cat stay well defined.  The component list is never
/// empty.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    components: Vec<CoherentComponent>,
    label: String,
}

impl StateSpec {
    pub fn new(components: Vec<CoherentComponent>, label: impl Into<String>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::domain(
                "state must have at least one component".to_string(),
            ));
        }
        let mut merged: Vec<CoherentComponent> = Vec::with_capacity(components.len());
        for c in components {
            match merged
                .iter_mut()
                .find(|m| (m.amplitude() - c.amplitude()).norm() <= MERGE_TOL)
            {
                Some(m) => m.weight += c.weight,
                None => merged.push(c),
            }
        }
        Ok(Self {
            components: merged,
            label: label.into(),
        })
    }

    /// Single coherent state `|a⟩` on the positive real axis.
    pub fn make_coherent(a: f64) -> Result<Self> {
        let c = CoherentComponent::new(a, 0.0, Complex64::new(1.0, 0.0))?;
        Self::new(vec![c], format!("coherent a={a}"))
    }

    /// Even cat state `|a⟩ + |-a⟩`.
    pub fn make_cat(a: f64) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        let cs = vec![
            CoherentComponent::new(a, 0.0, one)?,
            CoherentComponent::new(a, std::f64::consts::PI, one)?,
        ];
        Self::new(cs, format!("cat a={a}"))
    }

    /// Superposition of `n` compass states, the m-th rotated by `mπ/2n`:
    /// `4n` unit-weight coherent states at angles `mπ/2n + kπ/2`.
    pub fn make_n_compass(n: u32, a: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain(
                "compass count n must be at least 1".to_string(),
            ));
        }
        let one = Complex64::new(1.0, 0.0);
        let mut cs = Vec::with_capacity(4 * n as usize);
        for m in 0..n {
            let base = m as f64 * std::f64::consts::PI / (2.0 * n as f64);
            for k in 0..4 {
                let angle = base + k as f64 * std::f64::consts::FRAC_PI_2;
                cs.push(CoherentComponent::new(a, angle, one)?);
            }
        }
        Self::new(cs, format!("n-compass n={n} a={a}"))
    }

    /// Rotate the whole superposition by `θ` about the phase-space origin.
    pub fn rotate(&self, theta: f64) -> StateSpec {
        let components = self
            .components
            .iter()
            .map(|c| CoherentComponent {
                radius: c.radius,
                angle: if c.radius <= MERGE_TOL {
                    0.0
                } else {
                    canonical_angle(c.angle + theta)
                },
                weight: c.weight,
            })
            .collect();
        StateSpec {
            components,
            label: self.label.clone(),
        }
    }

    pub fn components(&self) -> &[CoherentComponent] {
        &self.components
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `⟨ψ|ψ⟩` of the unnormalised superposition, via pairwise coherent-state
    /// overlaps.  Always real and positive.
    pub fn gram_norm_squared(&self) -> f64 {
        let mut sum = 0.0;
        for j in self.components.iter() {
            for k in self.components.iter() {
                let term =
                    j.weight.conj() * k.weight * coherent_inner(j.amplitude(), k.amplitude());
                sum += term.re;
            }
        }
        sum
    }

    /// Plain-text form: a `# <label>` header followed by one
    /// `radius angle_degrees weight_re weight_im` line per component.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# {}", self.label).unwrap();
        for c in &self.components {
            writeln!(
                out,
                "{} {} {} {}",
                c.radius,
                c.angle.to_degrees(),
                c.weight.re,
                c.weight.im
            )
            .unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut label = String::from("state");
        let mut saw_label = false;
        let mut components = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if !saw_label {
                    label = rest.trim().to_string();
                    saw_label = true;
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected 4 fields, found {}", fields.len()),
                });
            }
            let mut vals = [0.0f64; 4];
            for (v, f) in vals.iter_mut().zip(&fields) {
                *v = f.parse().map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: format!("bad number {f:?}: {e}"),
                })?;
            }
            components.push(CoherentComponent::new(
                vals[0],
                vals[1].to_radians(),
                Complex64::new(vals[2], vals[3]),
            )?);
        }
        Self::new(components, label)
    }
}
