//! Rectangular-grid sampling of phase-space fields and portable export.
//!
//! Fields are sampled at cell centres.  CSV is the interchange format
//! (17 significant digits, bit-exact round trip); PGM P5 with 16-bit
//! big-endian samples is the preview format.  Row sampling is data-parallel
//! under the `parallel` feature; [`sample_field_seq`] always runs the
//! sequential path and both produce identical bytes.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::overlap::GammaEvaluator;
use crate::states::{Displacement, StateSpec};
use crate::wigner::{wigner_center_approx, PhasePoint, WignerEvaluator};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// What a sampled field holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Wigner,
    WignerCenter,
    Gamma,
    GammaZeroMask,
}

impl FieldKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FieldKind::Wigner => "wigner",
            FieldKind::WignerCenter => "wigner_center",
            FieldKind::Gamma => "gamma",
            FieldKind::GammaZeroMask => "gamma_zero_mask",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "wigner" => Ok(FieldKind::Wigner),
            "wigner_center" => Ok(FieldKind::WignerCenter),
            "gamma" => Ok(FieldKind::Gamma),
            "gamma_zero_mask" => Ok(FieldKind::GammaZeroMask),
            other => Err(Error::domain(format!("unknown field kind {other:?}"))),
        }
    }
}

/// Evaluation route recorded in the field metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    Exact,
    Approx,
    Center,
}

impl SampleMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SampleMode::Exact => "exact",
            SampleMode::Approx => "approx",
            SampleMode::Center => "center",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SampleMode::Exact),
            "approx" => Ok(SampleMode::Approx),
            "center" => Ok(SampleMode::Center),
            other => Err(Error::domain(format!("unknown sample mode {other:?}"))),
        }
    }
}

/// Rectangular sampling window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, p_min: f64, p_max: f64) -> Result<Self> {
        let w = Self {
            x_min,
            x_max,
            p_min,
            p_max,
        };
        w.validate()?;
        Ok(w)
    }

    /// Square window `[-half, half]²`.
    pub fn symmetric(half: f64) -> Result<Self> {
        Self::new(-half, half, -half, half)
    }

    fn validate(&self) -> Result<()> {
        let vals = [self.x_min, self.x_max, self.p_min, self.p_max];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("window bounds must be finite".to_string()));
        }
        if self.x_min >= self.x_max || self.p_min >= self.p_max {
            return Err(Error::domain(format!(
                "window must be non-degenerate, got x [{}, {}], p [{}, {}]",
                self.x_min, self.x_max, self.p_min, self.p_max
            )));
        }
        Ok(())
    }
}

/// Provenance carried by a sampled field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMeta {
    pub n: u32,
    pub a: f64,
    pub mode: SampleMode,
}

/// A sampled real-valued field on a rectangular lattice, row-major with `x`
/// varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub window: Window,
    pub nx: usize,
    pub np: usize,
    pub values: Vec<f64>,
    pub kind: FieldKind,
    pub meta: GridMeta,
}

impl GridField {
    pub fn cell_dx(&self) -> f64 {
        (self.window.x_max - self.window.x_min) / self.nx as f64
    }

    pub fn cell_dp(&self) -> f64 {
        (self.window.p_max - self.window.p_min) / self.np as f64
    }

    /// Centre abscissa of column `i`.
    pub fn x_center(&self, i: usize) -> f64 {
        self.window.x_min + (i as f64 + 0.5) * self.cell_dx()
    }

    /// Centre ordinate of row `j`.
    pub fn p_center(&self, j: usize) -> f64 {
        self.window.p_min + (j as f64 + 0.5) * self.cell_dp()
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// Midpoint-rule integral of the field over the window.
    pub fn integral_estimate(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_dx() * self.cell_dp()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.np < 2 {
            return Err(Error::domain("grid needs nx, np >= 2".to_string()));
        }
        self.window.validate()?;
        if self.values.len() != self.nx * self.np {
            return Err(Error::domain(format!(
                "value count {} does not match {}x{} grid",
                self.values.len(),
                self.nx,
                self.np
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("grid values must be finite".to_string()));
        }
        match self.kind {
            FieldKind::Gamma
                if self
                    .values
                    .iter()
                    .any(|&v| !(-1e-12..=1.0 + 1e-9).contains(&v)) =>
            {
                return Err(Error::domain("gamma values must lie in [0, 1]".to_string()))
            }
            FieldKind::GammaZeroMask if self.values.iter().any(|&v| v != 0.0 && v != 1.0) => {
                return Err(Error::domain("mask values must be 0 or 1".to_string()))
            }
            _ => {}
        }
        Ok(())
    }
}

/// Everything needed to sample one field.
#[derive(Debug, Clone)]
pub struct SampleSpec<'a> {
    pub kind: FieldKind,
    pub n: u32,
    pub a: f64,
    pub window: Window,
    pub resolution: usize,
    pub mode: SampleMode,
    /// Zero-mask threshold on `γ`.
    pub cutoff: f64,
    /// Optional explicit state; defaults to the `n`-compass superposition.
    pub state: Option<&'a StateSpec>,
}

impl<'a> SampleSpec<'a> {
    pub fn new(
        kind: FieldKind,
        n: u32,
        a: f64,
        window: Window,
        resolution: usize,
        mode: SampleMode,
    ) -> Self {
        Self {
            kind,
            n,
            a,
            window,
            resolution,
            mode,
            cutoff: 1e-3,
            state: None,
        }
    }

    pub fn with_cutoff(mut self, cutoff: f64) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn with_state(mut self, state: &'a StateSpec) -> Self {
        self.state = Some(state);
        self
    }
}

enum Sampler {
    Wigner(WignerEvaluator),
    Center { n: u32, a: f64, norm: f64 },
    GammaExact(GammaEvaluator),
    GammaApprox { n: u32, a: f64 },
}

impl Sampler {
    fn fill_row(&self, xs: &[f64], p: f64, out: &mut [f64]) {
        match self {
            Sampler::Wigner(ev) => ev.fill_row(xs, p, out),
            Sampler::Center { n, a, norm } => {
                for (x, o) in xs.iter().zip(out.iter_mut()) {
                    *o = wigner_center_approx(*n, *a, PhasePoint::new(*x, p)) / norm;
                }
            }
            Sampler::GammaExact(ev) => {
                for (x, o) in xs.iter().zip(out.iter_mut()) {
                    *o = ev.gamma(crate::Complex::new(*x, p));
                }
            }
            Sampler::GammaApprox { n, a } => {
                for (x, o) in xs.iter().zip(out.iter_mut()) {
                    *o = crate::overlap::gamma_approx(*n, *a, Displacement::from_cartesian(*x, p))
                        .gamma;
                }
            }
        }
    }
}

/// Sample the requested field at cell centres (parallel over rows when the
/// `parallel` feature is on).
pub fn sample_field(spec: &SampleSpec) -> Result<GridField> {
    sample_impl(spec, cfg!(feature = "parallel"))
}

/// Sequential sampling; identical output to [`sample_field`].
pub fn sample_field_seq(spec: &SampleSpec) -> Result<GridField> {
    sample_impl(spec, false)
}

fn sample_impl(spec: &SampleSpec, parallel: bool) -> Result<GridField> {
    spec.window.validate()?;
    if spec.resolution < 2 {
        return Err(Error::domain(format!(
            "resolution must be >= 2, got {}",
            spec.resolution
        )));
    }
    if spec.n < 1 {
        return Err(Error::domain(
            "compass count n must be at least 1".to_string(),
        ));
    }
    if spec.state.is_none() && (spec.a.is_nan() || spec.a <= 0.0) {
        return Err(Error::domain(format!(
            "amplitude a must be positive, got {}",
            spec.a
        )));
    }
    if !(spec.cutoff > 0.0 && spec.cutoff < 1.0) {
        return Err(Error::domain(format!(
            "cutoff must be in (0, 1), got {}",
            spec.cutoff
        )));
    }

    let owned_state;
    let state: Option<&StateSpec> = match spec.state {
        Some(s) => Some(s),
        None => match (spec.kind, spec.mode) {
            (FieldKind::Wigner, _)
            | (FieldKind::Gamma | FieldKind::GammaZeroMask, SampleMode::Exact) => {
                owned_state = StateSpec::make_n_compass(spec.n, spec.a)?;
                Some(&owned_state)
            }
            _ => None,
        },
    };

    let sampler = match (spec.kind, spec.mode) {
        (FieldKind::Wigner, SampleMode::Exact) => {
            Sampler::Wigner(WignerEvaluator::new(state.expect("state prepared above")))
        }
        (FieldKind::Wigner, SampleMode::Center) | (FieldKind::WignerCenter, _) => Sampler::Center {
            n: spec.n,
            a: spec.a,
            norm: 2.0
                * std::f64::consts::PI
                * StateSpec::make_n_compass(spec.n, spec.a)?.gram_norm_squared(),
        },
        (FieldKind::Wigner, SampleMode::Approx) => {
            return Err(Error::domain(
                "wigner fields support exact or center mode only".to_string(),
            ))
        }
        (FieldKind::Gamma | FieldKind::GammaZeroMask, SampleMode::Exact) => {
            Sampler::GammaExact(GammaEvaluator::new(state.expect("state prepared above")))
        }
        (FieldKind::Gamma | FieldKind::GammaZeroMask, SampleMode::Approx) => Sampler::GammaApprox {
            n: spec.n,
            a: spec.a,
        },
        (FieldKind::Gamma | FieldKind::GammaZeroMask, SampleMode::Center) => {
            return Err(Error::domain(
                "gamma fields support exact or approx mode only".to_string(),
            ))
        }
    };

    let (nx, np) = (spec.resolution, spec.resolution);
    let dx = (spec.window.x_max - spec.window.x_min) / nx as f64;
    let dp = (spec.window.p_max - spec.window.p_min) / np as f64;
    let xs: Vec<f64> = (0..nx)
        .map(|i| spec.window.x_min + (i as f64 + 0.5) * dx)
        .collect();
    let ps: Vec<f64> = (0..np)
        .map(|j| spec.window.p_min + (j as f64 + 0.5) * dp)
        .collect();

    let mut values = vec![0.0f64; nx * np];
    let fill = |(j, row): (usize, &mut [f64])| sampler.fill_row(&xs, ps[j], row);

    if parallel {
        #[cfg(feature = "parallel")]
        values.par_chunks_mut(nx).enumerate().for_each(fill);
        #[cfg(not(feature = "parallel"))]
        values.chunks_mut(nx).enumerate().for_each(fill);
    } else {
        values.chunks_mut(nx).enumerate().for_each(fill);
    }

    if spec.kind == FieldKind::GammaZeroMask {
        for v in values.iter_mut() {
            *v = if *v < spec.cutoff { 1.0 } else { 0.0 };
        }
    }

    let field = GridField {
        window: spec.window,
        nx,
        np,
        values,
        kind: spec.kind,
        meta: GridMeta {
            n: spec.n,
            a: spec.a,
            mode: spec.mode,
        },
    };
    field.validate()?;
    Ok(field)
}

/// Write the field as plain-text CSV: a header line
/// `# kind n a x_min x_max p_min p_max nx np`, a `# mode <mode>` line, then
/// one `x p value` row per cell with 17 significant digits.
pub fn write_csv(field: &GridField, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(field.values.len() * 64);
    out.push_str(&format!(
        "# {} {} {} {} {} {} {} {} {}\n",
        field.kind.as_str(),
        field.meta.n,
        field.meta.a,
        field.window.x_min,
        field.window.x_max,
        field.window.p_min,
        field.window.p_max,
        field.nx,
        field.np
    ));
    out.push_str(&format!("# mode {}\n", field.meta.mode.as_str()));
    for j in 0..field.np {
        let p = field.p_center(j);
        for i in 0..field.nx {
            out.push_str(&format!(
                "{:.16e} {:.16e} {:.16e}\n",
                field.x_center(i),
                p,
                field.value(i, j)
            ));
        }
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Read a field written by [`write_csv`]; values round-trip bit-exactly.
pub fn read_csv(path: &Path) -> Result<GridField> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::Parse {
        line: 1,
        message: "empty file".to_string(),
    })?;
    let fields: Vec<&str> = header.trim_start_matches('#').split_whitespace().collect();
    if fields.len() != 9 {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected 9 header fields, found {}", fields.len()),
        });
    }
    let kind = FieldKind::parse(fields[0])?;
    let parse_f = |s: &str, line: usize| -> Result<f64> {
        s.parse().map_err(|e| Error::Parse {
            line,
            message: format!("bad number {s:?}: {e}"),
        })
    };
    let parse_u = |s: &str, line: usize| -> Result<usize> {
        s.parse().map_err(|e| Error::Parse {
            line,
            message: format!("bad integer {s:?}: {e}"),
        })
    };
    let n = fields[1].parse::<u32>().map_err(|e| Error::Parse {
        line: 1,
        message: format!("bad n {:?}: {e}", fields[1]),
    })?;
    let a = parse_f(fields[2], 1)?;
    let window = Window::new(
        parse_f(fields[3], 1)?,
        parse_f(fields[4], 1)?,
        parse_f(fields[5], 1)?,
        parse_f(fields[6], 1)?,
    )?;
    let nx = parse_u(fields[7], 1)?;
    let np = parse_u(fields[8], 1)?;

    let mut mode = SampleMode::Exact;
    let mut values = Vec::with_capacity(nx * np);
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(m) = rest.strip_prefix("mode ") {
                mode = SampleMode::parse(m.trim())?;
            }
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 3 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected 3 columns, found {}", cols.len()),
            });
        }
        values.push(parse_f(cols[2], idx + 1)?);
    }
    let field = GridField {
        window,
        nx,
        np,
        values,
        kind,
        meta: GridMeta { n, a, mode },
    };
    field.validate()?;
    Ok(field)
}

/// Grey mapping for PGM export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmScale {
    /// `[0, max v] → [0, 65535]`
    Linear,
    /// `[-max |v|, +max |v|] → [0, 65535]`; a zero field maps to mid-grey.
    Symmetric,
}

/// Write a 16-bit big-endian P5 PGM preview (rows from `p_max` down).
pub fn write_pgm(field: &GridField, path: &Path, scale: PgmScale) -> Result<()> {
    let mut bytes = Vec::with_capacity(32 + 2 * field.values.len());
    bytes.extend_from_slice(format!("P5\n{} {}\n65535\n", field.nx, field.np).as_bytes());
    let to_pixel: Box<dyn Fn(f64) -> u16> = match scale {
        PgmScale::Symmetric => {
            let m = field.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            Box::new(move |v: f64| {
                if m == 0.0 {
                    32767
                } else {
                    (((v + m) / (2.0 * m) * 65535.0).round()).clamp(0.0, 65535.0) as u16
                }
            })
        }
        PgmScale::Linear => {
            let m = field.max_value();
            Box::new(move |v: f64| {
                if m <= 0.0 {
                    0
                } else {
                    ((v.max(0.0) / m * 65535.0).round()).clamp(0.0, 65535.0) as u16
                }
            })
        }
    };
    for j in (0..field.np).rev() {
        for i in 0..field.nx {
            let px = to_pixel(field.value(i, j));
            bytes.extend_from_slice(&px.to_be_bytes());
        }
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&bytes).map_err(|e| Error::io(path, e))
}
