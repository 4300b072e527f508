//! Named benchmark scenarios and the flat key/value scenario file format.

use crate::errors::AppError;
use schcn_core::fer::ModulationSpec;
use schcn_core::sim::{PowerMode, Scenario};
use std::path::Path;

/// Resolve `--scenario`: a named case (`case1`, `case2`, `case3`) or a path
/// to a scenario file. Named cases fix the channel variances; relay counts
/// and the rest come from the provided defaults.
pub fn resolve(
    name: &str,
    n: u32,
    n_c: u32,
    power_mode: PowerMode,
    spec: ModulationSpec,
) -> Result<Scenario, AppError> {
    let from_omegas = |omega_sr: f64| Scenario {
        n,
        n_c,
        omega_0: 1.0,
        omega_sr,
        omega_rd: 1.0,
        power_mode,
        spec,
    };
    match name {
        "case1" => Ok(from_omegas(1.0)),
        "case2" => Ok(from_omegas(16.0)),
        "case3" => Ok(from_omegas(1.0 / 16.0)),
        "case0" => Err(AppError::Invalid(
            "case0 is the MIMO benchmark; use the `mimo` subcommand".into(),
        )),
        path => parse_file(Path::new(path)),
    }
}

/// Parse a scenario file: one `key = value` pair per line, `#` comments.
///
/// Keys: `n`, `n_c`, `omega_0`, `omega_sr`, `omega_rd`,
/// `power_mode` (`total` | `individual`), `frame_len`, `c`.
pub fn parse_file(path: &Path) -> Result<Scenario, AppError> {
    let text = std::fs::read_to_string(path)?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<Scenario, AppError> {
    let mut n: Option<u32> = None;
    let mut n_c: Option<u32> = None;
    let mut omega_0 = 1.0;
    let mut omega_sr = 1.0;
    let mut omega_rd = 1.0;
    let mut power_mode = PowerMode::Total;
    let mut frame_len = 100u32;
    let mut c = 2.0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| AppError::Invalid(format!("line {}: expected key = value", lineno + 1)))?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| AppError::Invalid(format!("line {}: bad {what}: {value}", lineno + 1));
        match key {
            "n" => n = Some(value.parse().map_err(|_| bad("relay count"))?),
            "n_c" => n_c = Some(value.parse().map_err(|_| bad("selected count"))?),
            "omega_0" => omega_0 = value.parse().map_err(|_| bad("variance"))?,
            "omega_sr" => omega_sr = value.parse().map_err(|_| bad("variance"))?,
            "omega_rd" => omega_rd = value.parse().map_err(|_| bad("variance"))?,
            "power_mode" => {
                power_mode = match value {
                    "total" => PowerMode::Total,
                    "individual" => PowerMode::Individual,
                    _ => return Err(bad("power mode")),
                }
            }
            "frame_len" => frame_len = value.parse().map_err(|_| bad("frame length"))?,
            "c" => c = value.parse().map_err(|_| bad("modulation constant"))?,
            _ => return Err(AppError::Invalid(format!("line {}: unknown key {key}", lineno + 1))),
        }
    }
    let n = n.ok_or_else(|| AppError::Invalid("scenario file missing `n`".into()))?;
    let n_c = n_c.ok_or_else(|| AppError::Invalid("scenario file missing `n_c`".into()))?;
    let scenario = Scenario {
        n,
        n_c,
        omega_0,
        omega_sr,
        omega_rd,
        power_mode,
        spec: ModulationSpec::new(c, frame_len),
    };
    scenario.validate()?;
    Ok(scenario)
}
