//! Optional key=value configuration files.  Entries override the parsed
//! command-line flags; unknown keys are rejected so typos surface early.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use crate::{FormatArg, IsotropyArgs, ModeArg, OverlapArgs, ScaleArg, SensitivityArgs, WignerArgs};

pub fn load(path: &Path) -> anyhow::Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", path.display()))?;
    let mut map = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            anyhow::anyhow!(
                "{}:{}: expected key=value, got {line:?}",
                path.display(),
                idx + 1
            )
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(map: &HashMap<String, String>, key: &str) -> Option<T>
where
    T::Err: std::fmt::Display,
{
    map.get(key).map(|raw| match raw.parse() {
        Ok(v) => v,
        Err(e) => crate::usage_error(&format!("config key {key}={raw}: {e}")),
    })
}

fn parse_mode(map: &HashMap<String, String>, allowed: &[ModeArg]) -> Option<ModeArg> {
    map.get("mode").map(|raw| {
        let mode = match raw.as_str() {
            "exact" => ModeArg::Exact,
            "approx" => ModeArg::Approx,
            "center" => ModeArg::Center,
            other => crate::usage_error(&format!("config key mode={other} is not a mode")),
        };
        if !allowed.contains(&mode) {
            crate::usage_error(&format!("config key mode={raw} not valid for this command"));
        }
        mode
    })
}

fn parse_format(map: &HashMap<String, String>) -> Option<FormatArg> {
    map.get("format").map(|raw| match raw.as_str() {
        "csv" => FormatArg::Csv,
        "pgm" => FormatArg::Pgm,
        "table" => FormatArg::Table,
        other => crate::usage_error(&format!("config key format={other} is not a format")),
    })
}

fn parse_window(map: &HashMap<String, String>) -> Option<Vec<f64>> {
    map.get("window").map(|raw| {
        let vals: Vec<f64> = raw
            .split_whitespace()
            .map(|t| match t.parse() {
                Ok(v) => v,
                Err(e) => crate::usage_error(&format!("config key window: bad number {t:?}: {e}")),
            })
            .collect();
        if vals.len() != 4 {
            crate::usage_error("config key window needs four numbers");
        }
        vals
    })
}

fn apply_common(common: &mut crate::CommonArgs, map: &HashMap<String, String>) {
    if let Some(n) = parse(map, "n") {
        common.n = n;
    }
    if let Some(a) = parse(map, "a") {
        common.a = Some(a);
    }
}

fn apply_grid(grid: &mut crate::GridArgs, map: &HashMap<String, String>) {
    if let Some(w) = parse_window(map) {
        grid.window = Some(w);
    }
    if let Some(r) = parse(map, "resolution") {
        grid.resolution = r;
    }
    if let Some(o) = parse::<PathBuf>(map, "output") {
        grid.output = Some(o);
    }
    if let Some(f) = parse_format(map) {
        grid.format = f;
    }
    if let Some(s) = map.get("scale") {
        grid.scale = Some(match s.as_str() {
            "linear" => ScaleArg::Linear,
            "symmetric" => ScaleArg::Symmetric,
            other => crate::usage_error(&format!("config key scale={other} is not a scale")),
        });
    }
    if let Some(p) = parse::<PathBuf>(map, "state_file") {
        grid.state_file = Some(p);
    }
}

pub fn apply_wigner(args: &mut WignerArgs, map: &HashMap<String, String>) {
    apply_common(&mut args.common, map);
    apply_grid(&mut args.grid, map);
    if let Some(m) = parse_mode(map, &[ModeArg::Exact, ModeArg::Center]) {
        args.mode = m;
    }
}

pub fn apply_overlap(args: &mut OverlapArgs, map: &HashMap<String, String>) {
    apply_common(&mut args.common, map);
    apply_grid(&mut args.grid, map);
    if let Some(m) = parse_mode(map, &[ModeArg::Exact, ModeArg::Approx]) {
        args.mode = m;
    }
    if let Some(mask) = parse(map, "mask") {
        args.mask = mask;
    }
    if let Some(c) = parse(map, "cutoff") {
        args.cutoff = c;
    }
}

pub fn apply_sensitivity(args: &mut SensitivityArgs, map: &HashMap<String, String>) {
    apply_common(&mut args.common, map);
    if let Some(s) = parse(map, "steps") {
        args.steps = s;
    }
    if let Some(y) = parse(map, "y") {
        args.y = Some(y);
    }
    if let Some(e) = parse(map, "epsilon") {
        args.epsilon = e;
    }
    if let Some(f) = parse_format(map) {
        args.format = f;
    }
    if let Some(o) = parse::<PathBuf>(map, "output") {
        args.output = Some(o);
    }
}

pub fn apply_isotropy(args: &mut IsotropyArgs, map: &HashMap<String, String>) {
    apply_common(&mut args.common, map);
    if let Some(m) = parse(map, "n_max") {
        args.n_max = m;
    }
    if let Some(f) = parse_format(map) {
        args.format = f;
    }
    if let Some(o) = parse::<PathBuf>(map, "output") {
        args.output = Some(o);
    }
}
