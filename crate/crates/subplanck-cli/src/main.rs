//! `subplanck`: heatmaps, sensitivity sweeps and validation for
//! superpositions of compass states.

mod config;
mod validate;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use subplanck::grid::{
    sample_field, write_csv, write_pgm, FieldKind, PgmScale, SampleMode, SampleSpec, Window,
};
use subplanck::overlap::gamma_approx;
use subplanck::sensitivity::{
    asymptotic_isotropy_table, default_expansion_point, sensitivity_sweep_at,
    separation_guard_amplitude, DEFAULT_SWEEP_STEPS,
};
use subplanck::states::{Displacement, StateSpec};

#[derive(Parser)]
#[command(
    name = "subplanck",
    version,
    about = "Wigner functions, displacement overlaps and sub-Planck sensitivity \
             of compass-state superpositions",
    after_help = "Exit codes: 0 success, 1 runtime or validation failure, 2 usage error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a Wigner field on a phase-space grid and write CSV or PGM
    Wigner(WignerArgs),
    /// Sample the overlap γ(δ) between a state and its displaced copy
    Overlap(OverlapArgs),
    /// Sweep the displacement direction and report |δ|min and the root ring
    Sensitivity(SensitivityArgs),
    /// Tabulate the isotropy metric against the number of compass states
    Isotropy(IsotropyArgs),
    /// Run the brute-force oracle suite and print a pass/fail matrix
    Validate(validate::ValidateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Approx,
    Center,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Pgm,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScaleArg {
    Linear,
    Symmetric,
}

#[derive(Args)]
struct CommonArgs {
    /// Number of superposed compass states (4n coherent states on a circle)
    #[arg(long, default_value_t = 1)]
    n: u32,

    /// Coherent amplitude a; defaults to 5, 8, 12 for n = 1, 2, 3 and to the
    /// six-unit separation guard beyond that
    #[arg(long)]
    a: Option<f64>,

    /// Plain-text key=value file whose entries override the flags
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// Grid window as X_MIN X_MAX P_MIN P_MAX; defaults depend on the command
    #[arg(long, num_args = 4, value_names = ["X_MIN", "X_MAX", "P_MIN", "P_MAX"], allow_negative_numbers = true)]
    window: Option<Vec<f64>>,

    /// Cells per axis
    #[arg(long, default_value_t = 400)]
    resolution: usize,

    /// Output file; a default name is derived from the parameters
    #[arg(long)]
    output: Option<PathBuf>,

    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,

    /// Grey mapping for PGM output; defaults to symmetric for Wigner fields
    /// and linear for overlap fields
    #[arg(long, value_enum)]
    scale: Option<ScaleArg>,

    /// Read the state from a component file instead of constructing the
    /// n-compass superposition (exact mode only)
    #[arg(long)]
    state_file: Option<PathBuf>,
}

#[derive(Args)]
struct WignerArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[command(flatten)]
    grid: GridArgs,

    /// exact: full pairwise sum; center: centre-interference pattern only
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
}

#[derive(Args)]
struct OverlapArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[command(flatten)]
    grid: GridArgs,

    /// approx: self terms only; exact: all cross terms included
    #[arg(long, value_enum, default_value_t = ModeArg::Approx)]
    mode: ModeArg,

    /// Also write the γ < cutoff zero mask next to the field
    #[arg(long)]
    mask: bool,

    /// Zero-mask cutoff on γ
    #[arg(long, default_value_t = 1e-3)]
    cutoff: f64,
}

#[derive(Args)]
struct SensitivityArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Sweep samples per π/2n period
    #[arg(long, default_value_t = DEFAULT_SWEEP_STEPS)]
    steps: u32,

    /// Expansion point override (defaults to 6/5a, the innermost ring)
    #[arg(long)]
    y: Option<f64>,

    /// Sensitivity threshold ε the minimum-root overlap is checked against
    #[arg(long, default_value_t = 1e-15)]
    epsilon: f64,

    /// table: human-readable summary; csv: one `n a arg_delta root` row per sample
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,

    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct IsotropyArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Largest number of compass states to include
    #[arg(long, default_value_t = 5)]
    n_max: u32,

    /// table or csv rows `n metric`
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,

    /// Write the table here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Wigner(args) => cmd_wigner(args),
        Command::Overlap(args) => cmd_overlap(args),
        Command::Sensitivity(args) => cmd_sensitivity(args),
        Command::Isotropy(args) => cmd_isotropy(args),
        Command::Validate(args) => validate::cmd_validate(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// Print a usage complaint and exit with the usage status.
fn usage_error(msg: &str) -> ! {
    eprintln!("usage error: {msg}");
    std::process::exit(2);
}

fn default_amplitude(n: u32) -> f64 {
    match n {
        1 => 5.0,
        2 => 8.0,
        3 => 12.0,
        _ => separation_guard_amplitude(n).ceil(),
    }
}

fn warn_if_crowded(n: u32, a: f64) {
    let guard = separation_guard_amplitude(n);
    if a < guard {
        log::warn!(
            "adjacent coherent states closer than 6 units at n={n}, a={a} \
             (need a >= {guard:.2}); interference approximations degrade"
        );
    }
}

fn resolve_window(flag: &Option<Vec<f64>>, default_half: f64) -> Window {
    let built = match flag {
        Some(v) => Window::new(v[0], v[1], v[2], v[3]),
        None => Window::symmetric(default_half),
    };
    match built {
        Ok(w) => w,
        Err(e) => usage_error(&format!("{e}")),
    }
}

fn load_state(path: &Path) -> anyhow::Result<StateSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read state file {}: {e}", path.display()))?;
    Ok(StateSpec::from_text(&text)?)
}

fn default_output(stem: String, format: FormatArg) -> PathBuf {
    let ext = match format {
        FormatArg::Pgm => "pgm",
        _ => "csv",
    };
    PathBuf::from(format!("{stem}.{ext}"))
}

fn mask_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("field");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}_mask.{ext}"))
}

fn write_field(
    field: &subplanck::grid::GridField,
    path: &Path,
    format: FormatArg,
    scale: PgmScale,
) -> anyhow::Result<()> {
    match format {
        FormatArg::Csv => write_csv(field, path)?,
        FormatArg::Pgm => write_pgm(field, path, scale)?,
        FormatArg::Table => usage_error("grid commands write csv or pgm, not table"),
    }
    Ok(())
}

fn cmd_wigner(mut args: WignerArgs) -> anyhow::Result<ExitCode> {
    if let Some(path) = args.common.config.clone() {
        config::apply_wigner(&mut args, &config::load(&path)?);
    }
    let n = args.common.n;
    if n < 1 {
        usage_error("--n must be at least 1");
    }
    let a = args.common.a.unwrap_or_else(|| default_amplitude(n));
    warn_if_crowded(n, a);
    let mode = match args.mode {
        ModeArg::Exact => SampleMode::Exact,
        ModeArg::Center => SampleMode::Center,
        ModeArg::Approx => usage_error("wigner supports --mode exact or center"),
    };
    let kind = match mode {
        SampleMode::Center => FieldKind::WignerCenter,
        _ => FieldKind::Wigner,
    };
    if args.grid.state_file.is_some() && mode != SampleMode::Exact {
        usage_error("--state-file applies to --mode exact only");
    }
    if args.grid.resolution < 2 {
        usage_error("--resolution must be at least 2");
    }
    let window = resolve_window(&args.grid.window, 2.0 * a + 6.0);
    let mut spec = SampleSpec::new(kind, n, a, window, args.grid.resolution, mode);
    let custom_state = match &args.grid.state_file {
        Some(p) => Some(load_state(p)?),
        None => None,
    };
    if let Some(state) = &custom_state {
        spec = spec.with_state(state);
    }
    let field = sample_field(&spec)?;
    let mode_name = mode.as_str();
    let path = args.grid.output.clone().unwrap_or_else(|| {
        default_output(format!("wigner_n{n}_a{a}_{mode_name}"), args.grid.format)
    });
    let scale = match args.grid.scale {
        Some(ScaleArg::Linear) => PgmScale::Linear,
        Some(ScaleArg::Symmetric) | None => PgmScale::Symmetric,
    };
    write_field(&field, &path, args.grid.format, scale)?;
    println!(
        "wigner n={n} a={a} mode={mode_name} grid={res}x{res} min={:.6e} max={:.6e} integral={:.6} -> {}",
        field.min_value(),
        field.max_value(),
        field.integral_estimate(),
        path.display(),
        res = args.grid.resolution,
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_overlap(mut args: OverlapArgs) -> anyhow::Result<ExitCode> {
    if let Some(path) = args.common.config.clone() {
        config::apply_overlap(&mut args, &config::load(&path)?);
    }
    let n = args.common.n;
    if n < 1 {
        usage_error("--n must be at least 1");
    }
    let a = args.common.a.unwrap_or_else(|| default_amplitude(n));
    warn_if_crowded(n, a);
    let mode = match args.mode {
        ModeArg::Exact => SampleMode::Exact,
        ModeArg::Approx => SampleMode::Approx,
        ModeArg::Center => usage_error("overlap supports --mode exact or approx"),
    };
    if args.grid.state_file.is_some() && mode != SampleMode::Exact {
        usage_error("--state-file applies to --mode exact only");
    }
    if !(args.cutoff > 0.0 && args.cutoff < 1.0) {
        usage_error("--cutoff must lie in (0, 1)");
    }
    if args.grid.resolution < 2 {
        usage_error("--resolution must be at least 2");
    }
    let window = resolve_window(&args.grid.window, 3.0 / a);
    let mut spec = SampleSpec::new(FieldKind::Gamma, n, a, window, args.grid.resolution, mode)
        .with_cutoff(args.cutoff);
    let custom_state = match &args.grid.state_file {
        Some(p) => Some(load_state(p)?),
        None => None,
    };
    if let Some(state) = &custom_state {
        spec = spec.with_state(state);
    }
    let field = sample_field(&spec)?;
    let mode_name = mode.as_str();
    let path = args.grid.output.clone().unwrap_or_else(|| {
        default_output(format!("overlap_n{n}_a{a}_{mode_name}"), args.grid.format)
    });
    let scale = match args.grid.scale {
        Some(ScaleArg::Symmetric) => PgmScale::Symmetric,
        Some(ScaleArg::Linear) | None => PgmScale::Linear,
    };
    write_field(&field, &path, args.grid.format, scale)?;
    println!(
        "overlap n={n} a={a} mode={mode_name} grid={res}x{res} min={:.6e} max={:.6e} -> {}",
        field.min_value(),
        field.max_value(),
        path.display(),
        res = args.grid.resolution,
    );

    // comparing against the self-term formula is cheap next to the exact
    // field, so report the gap whenever both routes are meaningful
    if mode == SampleMode::Exact && custom_state.is_none() {
        let mut max_gap = 0.0f64;
        for j in 0..field.np {
            for i in 0..field.nx {
                let d = Displacement::from_cartesian(field.x_center(i), field.p_center(j));
                max_gap = max_gap.max((field.value(i, j) - gamma_approx(n, a, d).gamma).abs());
            }
        }
        println!("max |gamma_exact - gamma_approx| over grid = {max_gap:.6e}");
    }

    if args.mask {
        let mask_spec = SampleSpec {
            kind: FieldKind::GammaZeroMask,
            ..spec
        };
        let mask = sample_field(&mask_spec)?;
        let mpath = mask_path(&path);
        write_field(&mask, &mpath, args.grid.format, PgmScale::Linear)?;
        let inside: usize = mask.values.iter().filter(|&&v| v == 1.0).count();
        println!(
            "mask  n={n} a={a} cutoff={} cells_below_cutoff={inside} -> {}",
            args.cutoff,
            mpath.display()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sensitivity(mut args: SensitivityArgs) -> anyhow::Result<ExitCode> {
    if let Some(path) = args.common.config.clone() {
        config::apply_sensitivity(&mut args, &config::load(&path)?);
    }
    let n = args.common.n;
    if n < 1 {
        usage_error("--n must be at least 1");
    }
    if !(args.epsilon > 0.0 && args.epsilon < 1.0) {
        usage_error("--epsilon must lie in (0, 1)");
    }
    if args.steps < 8 {
        usage_error("--steps must be at least 8");
    }
    let a = args.common.a.unwrap_or_else(|| default_amplitude(n));
    warn_if_crowded(n, a);
    let y = args.y.unwrap_or_else(|| default_expansion_point(a));
    let report = sensitivity_sweep_at(n, a, args.steps, y)?;

    let gamma_at_min =
        gamma_approx(n, a, Displacement::new(report.delta_min, report.arg_min)?).gamma;
    let mut text = match args.format {
        FormatArg::Csv => report.to_rows_string(),
        _ => {
            let mut t = report.to_table_string();
            t.push_str(&format!(
                "gamma(delta_min) = {gamma_at_min:.3e} (threshold epsilon = {:.3e}: {})\n",
                args.epsilon,
                if gamma_at_min < args.epsilon {
                    "below"
                } else {
                    "NOT below"
                }
            ));
            t
        }
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &args.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_isotropy(mut args: IsotropyArgs) -> anyhow::Result<ExitCode> {
    if let Some(path) = args.common.config.clone() {
        config::apply_isotropy(&mut args, &config::load(&path)?);
    }
    if args.n_max < 2 {
        usage_error("--n-max must be at least 2");
    }
    let a = args
        .common
        .a
        .unwrap_or_else(|| default_amplitude(args.n_max));
    let rows = asymptotic_isotropy_table(args.n_max, a)?;
    let mut text = String::new();
    match args.format {
        FormatArg::Csv => {
            for (n, metric) in &rows {
                text.push_str(&format!("{n} {metric:.16e}\n"));
            }
        }
        _ => {
            text.push_str(&format!("isotropy metric (a*root-ring width) at a = {a}\n"));
            for (n, metric) in &rows {
                text.push_str(&format!("n = {n:3}   metric = {metric:.6e}\n"));
            }
        }
    }
    match &args.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}
