//! `key = value` run configuration: fail-closed parsing, per-problem
//! defaults, and a serializer that round-trips bit-exactly.

use std::fmt;
use std::path::PathBuf;

use crate::mesh::Geometry;
use crate::problems::{ProblemKind, ProblemSpec};
use crate::schemes::{LambdaMode, MethodId};
use crate::weno::WenoParams;

/// Which total modes the ledgers report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TotalModeChoice {
    MethodAdapted,
    Gauss4,
    /// Report both rules side by side (default).
    Both,
}

impl TotalModeChoice {
    pub fn modes(self) -> Vec<crate::diagnostics::TotalMode> {
        use crate::diagnostics::TotalMode::*;
        match self {
            TotalModeChoice::MethodAdapted => vec![MethodAdapted],
            TotalModeChoice::Gauss4 => vec![Gauss4],
            TotalModeChoice::Both => vec![MethodAdapted, Gauss4],
        }
    }

    fn name(self) -> &'static str {
        match self {
            TotalModeChoice::MethodAdapted => "method_adapted",
            TotalModeChoice::Gauss4 => "gauss4",
            TotalModeChoice::Both => "both",
        }
    }
}

/// Fully validated run description.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub method: MethodId,
    pub geometry: Geometry,
    pub n_cells: usize,
    pub cfl: f64,
    pub gamma: f64,
    pub t_final: f64,
    pub weno: WenoParams,
    pub lambda_mode: LambdaMode,
    pub total_mode: TotalModeChoice,
    pub out_dir: PathBuf,
}

impl RunConfig {
    /// Emit every key; floats print in shortest round-trip form, so
    /// `parse_config(serialize())` reproduces the config exactly.
    pub fn serialize(&self) -> String {
        let problem = match self.problem.kind() {
            ProblemKind::Advection => "advection",
            ProblemKind::Acoustics => "acoustics",
            ProblemKind::Sod => "sod",
            ProblemKind::Sedov => "sedov",
        };
        let lambda = match self.lambda_mode {
            LambdaMode::WindowMax => "window_max",
            LambdaMode::Pointwise => "pointwise",
        };
        format!(
            "problem = {problem}\n\
             method = {}\n\
             alpha = {}\n\
             n_cells = {}\n\
             cfl = {}\n\
             gamma = {}\n\
             t_final = {}\n\
             weno_epsilon = {}\n\
             weno_beta_power = {}\n\
             lambda_mode = {lambda}\n\
             total_mode = {}\n\
             out_dir = {}\n",
            self.method.name(),
            self.geometry.alpha(),
            self.n_cells,
            self.cfl,
            self.gamma,
            self.t_final,
            self.weno.epsilon,
            self.weno.beta_power,
            self.total_mode.name(),
            self.out_dir.display(),
        )
    }
}

/// Parse failure with the offending line and key.
#[derive(Debug, Clone)]
pub struct ConfigError {
    pub line: usize,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "config line {} ({}): {}", self.line, self.key, self.message)
        } else {
            write!(f, "config ({}): {}", self.key, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        key: key.to_string(),
        message: message.into(),
    }
}

#[derive(Default)]
struct RawConfig {
    problem: Option<(usize, String)>,
    method: Option<(usize, String)>,
    alpha: Option<(usize, String)>,
    n_cells: Option<(usize, String)>,
    cfl: Option<(usize, String)>,
    gamma: Option<(usize, String)>,
    t_final: Option<(usize, String)>,
    weno_epsilon: Option<(usize, String)>,
    weno_beta_power: Option<(usize, String)>,
    lambda_mode: Option<(usize, String)>,
    total_mode: Option<(usize, String)>,
    out_dir: Option<(usize, String)>,
}

fn parse_num<T: std::str::FromStr>(
    slot: &Option<(usize, String)>,
    key: &str,
) -> Result<Option<T>, ConfigError> {
    match slot {
        None => Ok(None),
        Some((line, text)) => text
            .parse::<T>()
            .map(Some)
            .map_err(|_| err(*line, key, format!("cannot parse value `{text}`"))),
    }
}

/// Parse a `key = value` document (UTF-8, `#` comments). Unknown keys are
/// rejected; missing keys take documented defaults. Returns the config and
/// any warnings (currently: the Sedov Courant-number override).
pub fn parse_config(text: &str) -> Result<(RunConfig, Vec<String>), ConfigError> {
    let mut raw = RawConfig::default();

    for (idx, line_text) in text.lines().enumerate() {
        let line = idx + 1;
        let body = line_text.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| err(line, body, "expected `key = value`"))?;
        let key = key.trim();
        let value = value.trim().to_string();
        if value.is_empty() {
            return Err(err(line, key, "empty value"));
        }
        let slot = match key {
            "problem" => &mut raw.problem,
            "method" => &mut raw.method,
            "alpha" => &mut raw.alpha,
            "n_cells" => &mut raw.n_cells,
            "cfl" => &mut raw.cfl,
            "gamma" => &mut raw.gamma,
            "t_final" => &mut raw.t_final,
            "weno_epsilon" => &mut raw.weno_epsilon,
            "weno_beta_power" => &mut raw.weno_beta_power,
            "lambda_mode" => &mut raw.lambda_mode,
            "total_mode" => &mut raw.total_mode,
            "out_dir" => &mut raw.out_dir,
            other => return Err(err(line, other, "unknown key")),
        };
        if slot.is_some() {
            return Err(err(line, key, "duplicate key"));
        }
        *slot = Some((line, value));
    }

    let mut warnings = Vec::new();

    let (pline, pname) = raw
        .problem
        .as_ref()
        .ok_or_else(|| err(0, "problem", "missing required key"))?;
    let kind = match pname.as_str() {
        "advection" => ProblemKind::Advection,
        "acoustics" => ProblemKind::Acoustics,
        "sod" => ProblemKind::Sod,
        "sedov" => ProblemKind::Sedov,
        other => {
            return Err(err(
                *pline,
                "problem",
                format!("unknown problem `{other}` (advection|acoustics|sod|sedov)"),
            ))
        }
    };
    let problem = ProblemSpec::with_defaults(kind);

    let (mline, mname) = raw
        .method
        .as_ref()
        .ok_or_else(|| err(0, "method", "missing required key"))?;
    let method = match mname.as_str() {
        "one" => MethodId::One,
        "two" => MethodId::Two,
        "three" => MethodId::Three,
        other => {
            return Err(err(
                *mline,
                "method",
                format!("unknown method `{other}` (one|two|three)"),
            ))
        }
    };

    let geometry = match parse_num::<i64>(&raw.alpha, "alpha")? {
        None => problem.default_geometry(),
        Some(alpha) => Geometry::from_alpha(alpha).map_err(|e| {
            err(raw.alpha.as_ref().unwrap().0, "alpha", e.to_string())
        })?,
    };

    let n_cells = parse_num::<usize>(&raw.n_cells, "n_cells")?.unwrap_or(100);
    if n_cells == 0 {
        return Err(err(
            raw.n_cells.as_ref().unwrap().0,
            "n_cells",
            "must be positive",
        ));
    }

    let cfl = match parse_num::<f64>(&raw.cfl, "cfl")? {
        Some(v) => v,
        None => {
            let v = problem.default_cfl();
            if kind == ProblemKind::Sedov {
                warnings.push(format!(
                    "sedov: Courant number defaulted to {v} (stiff hot-spot source)"
                ));
            }
            v
        }
    };
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(err(
            raw.cfl.as_ref().map(|v| v.0).unwrap_or(0),
            "cfl",
            format!("must lie in (0, 1], got {cfl}"),
        ));
    }

    let gamma = parse_num::<f64>(&raw.gamma, "gamma")?.unwrap_or(1.4);
    if !(gamma > 1.0) {
        return Err(err(
            raw.gamma.as_ref().map(|v| v.0).unwrap_or(0),
            "gamma",
            format!("must exceed 1, got {gamma}"),
        ));
    }

    let t_final = parse_num::<f64>(&raw.t_final, "t_final")?.unwrap_or(problem.default_t_final());
    if !(t_final >= 0.0) {
        return Err(err(
            raw.t_final.as_ref().map(|v| v.0).unwrap_or(0),
            "t_final",
            format!("must be nonnegative, got {t_final}"),
        ));
    }

    let weno = WenoParams {
        epsilon: parse_num::<f64>(&raw.weno_epsilon, "weno_epsilon")?.unwrap_or(1e-6),
        beta_power: parse_num::<u32>(&raw.weno_beta_power, "weno_beta_power")?.unwrap_or(2),
        ..WenoParams::default()
    };
    weno.validate().map_err(|e| {
        let line = raw
            .weno_epsilon
            .as_ref()
            .or(raw.weno_beta_power.as_ref())
            .map(|v| v.0)
            .unwrap_or(0);
        err(line, "weno", e.to_string())
    })?;

    let lambda_mode = match raw.lambda_mode.as_ref() {
        None => LambdaMode::WindowMax,
        Some((line, v)) => match v.as_str() {
            "window_max" | "window" => LambdaMode::WindowMax,
            "pointwise" => LambdaMode::Pointwise,
            other => {
                return Err(err(
                    *line,
                    "lambda_mode",
                    format!("unknown mode `{other}` (window_max|pointwise)"),
                ))
            }
        },
    };

    let total_mode = match raw.total_mode.as_ref() {
        None => TotalModeChoice::Both,
        Some((line, v)) => match v.as_str() {
            "method_adapted" => TotalModeChoice::MethodAdapted,
            "gauss4" => TotalModeChoice::Gauss4,
            "both" => TotalModeChoice::Both,
            other => {
                return Err(err(
                    *line,
                    "total_mode",
                    format!("unknown mode `{other}` (method_adapted|gauss4|both)"),
                ))
            }
        },
    };

    let out_dir = PathBuf::from(
        raw.out_dir
            .as_ref()
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| "out".to_string()),
    );

    Ok((
        RunConfig {
            problem,
            method,
            geometry,
            n_cells,
            cfl,
            gamma,
            t_final,
            weno,
            lambda_mode,
            total_mode,
            out_dir,
        },
        warnings,
    ))
}
