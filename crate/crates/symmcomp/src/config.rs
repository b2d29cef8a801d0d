//! Line-oriented experiment configuration.
//!
//! Each non-blank line is `section.key = value`; `#` starts a comment. Every
//! key has a default, unknown or repeated keys are errors, and
//! [`ExperimentConfig::to_text`] writes the canonical form that parses back
//! to an identical value.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use radial::Kind;
use solver::Orientation;

/// A configuration problem, located at a line when it came from one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    pub(crate) fn global(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Compare,
    SweepM,
    SweepB,
    Properties,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Compare => "compare",
            Mode::SweepM => "sweep_m",
            Mode::SweepB => "sweep_B",
            Mode::Properties => "properties",
        }
    }
}

/// Strength of the singular field part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldStrength {
    /// `B` as a multiple of the threshold of the configured instance.
    Fraction(f64),
    Absolute(f64),
}

/// Decreasing rearrangement of the datum.
#[derive(Debug, Clone, PartialEq)]
pub enum DatumSpec {
    /// `s^{−1/m}` with the configured `m`.
    Marcinkiewicz,
    /// `coef · s^{−exponent}`.
    Power { coef: f64, exponent: f64 },
    Constant(f64),
    /// Unit-style point mass at the origin.
    Concentrated(f64),
    Zero,
    /// Two-column `s,value` CSV; a relative path is taken from the config
    /// file's directory.
    Table(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSection {
    pub kind: Kind,
    pub dim: u32,
    pub p: f64,
    pub m: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `|Ω|`; the ball radius follows from it.
    pub omega: f64,
    pub field: FieldStrength,
    pub f_bound: f64,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshSection {
    pub nodes: usize,
    pub grading: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSection {
    pub tol: f64,
    pub max_iter: usize,
    pub relaxation: f64,
    pub floor: f64,
    /// Truncation level `n`; `inf` solves the untruncated problem.
    pub truncation: f64,
}

/// Windows are fractions of `|Ω|`; tolerances are percentages.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisSection {
    pub fit_window: (f64, f64),
    pub compare_window: (f64, f64),
    pub u_tol: f64,
    pub grad_tol: f64,
    pub borderline_tol: f64,
    /// Compare runs also solve on `nodes/2` when this is 2.
    pub resolutions: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSection {
    pub b_fractions: Vec<f64>,
    pub m_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertiesSection {
    pub cases: usize,
    pub max_cells: usize,
    /// Negative control: feed the rearrangement suite an unsorted profile.
    pub corrupt: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub seed: u64,
    pub problem: ProblemSection,
    pub datum: DatumSpec,
    pub mesh: MeshSection,
    pub solver: SolverSection,
    pub analysis: AnalysisSection,
    pub sweep: SweepSection,
    pub properties: PropertiesSection,
    /// Directory that relative table paths are resolved against; not part
    /// of the serialized form.
    pub base_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Compare,
            seed: 42,
            problem: ProblemSection {
                kind: Kind::Convection,
                dim: 4,
                p: 2.0,
                m: 1.2,
                q: f64::INFINITY,
                alpha: 1.0,
                beta: 1.0,
                omega: 1.0,
                field: FieldStrength::Fraction(0.5),
                f_bound: 0.0,
                orientation: Orientation::Inward,
            },
            datum: DatumSpec::Marcinkiewicz,
            mesh: MeshSection {
                nodes: 100_000,
                grading: 1.0,
            },
            solver: SolverSection {
                tol: 1e-10,
                max_iter: 500,
                relaxation: 0.5,
                floor: 1e-10,
                truncation: f64::INFINITY,
            },
            analysis: AnalysisSection {
                fit_window: (1e-16, 1e-12),
                compare_window: (1e-4, 1e-1),
                u_tol: 5.0,
                grad_tol: 7.0,
                borderline_tol: 10.0,
                resolutions: 2,
            },
            sweep: SweepSection {
                b_fractions: vec![0.25, 0.5, 0.75],
                m_values: vec![1.1, 1.2, 1.4],
            },
            properties: PropertiesSection {
                cases: 1000,
                max_cells: 1000,
                corrupt: false,
            },
            base_dir: None,
        }
    }
}

fn parse_value<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T, ConfigError> {
    raw.parse()
        .map_err(|_| ConfigError::at(line, format!("`{key}`: cannot parse `{raw}`")))
}

fn parse_f64(line: usize, key: &str, raw: &str) -> Result<f64, ConfigError> {
    let x: f64 = parse_value(line, key, raw)?;
    if x.is_nan() {
        return Err(ConfigError::at(line, format!("`{key}`: NaN is not a value")));
    }
    Ok(x)
}

fn parse_list(line: usize, key: &str, raw: &str) -> Result<Vec<f64>, ConfigError> {
    raw.split(',')
        .map(|item| parse_f64(line, key, item.trim()))
        .collect()
}

fn parse_kind(line: usize, raw: &str) -> Result<Kind, ConfigError> {
    match raw {
        "convection" => Ok(Kind::Convection),
        "drift" => Ok(Kind::Drift),
        _ => Err(ConfigError::at(line, format!("`problem.kind`: unknown kind `{raw}`"))),
    }
}

fn orientation_name(o: Orientation) -> &'static str {
    match o {
        Orientation::Inward => "inward",
        Orientation::Outward => "outward",
    }
}

/// Keys that belong to one datum shape only.
const DATUM_KEYS: [(&str, &str); 5] = [
    ("datum.coef", "power"),
    ("datum.exponent", "power"),
    ("datum.value", "constant"),
    ("datum.mass", "concentrated"),
    ("datum.table", "table"),
];

impl ExperimentConfig {
    /// Parses `text`; keys that do not appear keep their defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut shape: Option<(usize, String)> = None;
        let mut datum_values: Vec<(usize, &'static str, String)> = Vec::new();
        let mut b_line: Option<(usize, &'static str)> = None;

        for (index, raw_line) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| ConfigError::at(line, format!("expected `section.key = value`, got `{content}`")))?;
            if !key.contains('.') {
                return Err(ConfigError::at(line, format!("key `{key}` has no section")));
            }
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::at(line, format!("`{key}` is set twice")));
            }
            let p = &mut cfg.problem;
            match key {
                "run.mode" => {
                    cfg.mode = match value {
                        "compare" => Mode::Compare,
                        "sweep_m" => Mode::SweepM,
                        "sweep_B" => Mode::SweepB,
                        "properties" => Mode::Properties,
                        _ => return Err(ConfigError::at(line, format!("unknown mode `{value}`"))),
                    }
                }
                "run.seed" => cfg.seed = parse_value(line, key, value)?,
                "problem.kind" => p.kind = parse_kind(line, value)?,
                "problem.dim" => p.dim = parse_value(line, key, value)?,
                "problem.p" => p.p = parse_f64(line, key, value)?,
                "problem.m" => p.m = parse_f64(line, key, value)?,
                "problem.q" => p.q = parse_f64(line, key, value)?,
                "problem.alpha" => p.alpha = parse_f64(line, key, value)?,
                "problem.beta" => p.beta = parse_f64(line, key, value)?,
                "problem.omega" => p.omega = parse_f64(line, key, value)?,
                "problem.b_fraction" | "problem.b" => {
                    if let Some((first, other)) = b_line {
                        return Err(ConfigError::at(
                            line,
                            format!("`{key}` conflicts with `{other}` on line {first}"),
                        ));
                    }
                    let x = parse_f64(line, key, value)?;
                    if key == "problem.b" {
                        p.field = FieldStrength::Absolute(x);
                        b_line = Some((line, "problem.b"));
                    } else {
                        p.field = FieldStrength::Fraction(x);
                        b_line = Some((line, "problem.b_fraction"));
                    }
                }
                "problem.f_bound" => p.f_bound = parse_f64(line, key, value)?,
                "problem.orientation" => {
                    p.orientation = match value {
                        "inward" => Orientation::Inward,
                        "outward" => Orientation::Outward,
                        _ => return Err(ConfigError::at(line, format!("unknown orientation `{value}`"))),
                    }
                }
                "datum.shape" => shape = Some((line, value.to_string())),
                "mesh.nodes" => cfg.mesh.nodes = parse_value(line, key, value)?,
                "mesh.grading" => cfg.mesh.grading = parse_f64(line, key, value)?,
                "solver.tol" => cfg.solver.tol = parse_f64(line, key, value)?,
                "solver.max_iter" => cfg.solver.max_iter = parse_value(line, key, value)?,
                "solver.relaxation" => cfg.solver.relaxation = parse_f64(line, key, value)?,
                "solver.floor" => cfg.solver.floor = parse_f64(line, key, value)?,
                "solver.truncation" => cfg.solver.truncation = parse_f64(line, key, value)?,
                "analysis.fit_lo" => cfg.analysis.fit_window.0 = parse_f64(line, key, value)?,
                "analysis.fit_hi" => cfg.analysis.fit_window.1 = parse_f64(line, key, value)?,
                "analysis.compare_lo" => cfg.analysis.compare_window.0 = parse_f64(line, key, value)?,
                "analysis.compare_hi" => cfg.analysis.compare_window.1 = parse_f64(line, key, value)?,
                "analysis.u_tol" => cfg.analysis.u_tol = parse_f64(line, key, value)?,
                "analysis.grad_tol" => cfg.analysis.grad_tol = parse_f64(line, key, value)?,
                "analysis.borderline_tol" => cfg.analysis.borderline_tol = parse_f64(line, key, value)?,
                "analysis.resolutions" => cfg.analysis.resolutions = parse_value(line, key, value)?,
                "sweep.b_fractions" => cfg.sweep.b_fractions = parse_list(line, key, value)?,
                "sweep.m_values" => cfg.sweep.m_values = parse_list(line, key, value)?,
                "properties.cases" => cfg.properties.cases = parse_value(line, key, value)?,
                "properties.max_cells" => cfg.properties.max_cells = parse_value(line, key, value)?,
                "properties.corrupt" => cfg.properties.corrupt = parse_value(line, key, value)?,
                _ => match DATUM_KEYS.iter().find(|(k, _)| *k == key) {
                    Some((k, _)) => datum_values.push((line, k, value.to_string())),
                    None => return Err(ConfigError::at(line, format!("unknown key `{key}`"))),
                },
            }
        }
        cfg.datum = build_datum(shape, &datum_values)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and parses a file; relative table paths resolve against its
    /// directory.
    pub fn from_file(path: &Path) -> Result<Self, crate::BenchError> {
        let text = std::fs::read_to_string(path).map_err(|source| crate::BenchError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::parse(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    /// Checks invariants that do not depend on a single line.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let a = &self.analysis;
        for (name, (lo, hi)) in [("fit", a.fit_window), ("compare", a.compare_window)] {
            if !(lo > 0.0 && lo < hi && hi < 1.0) {
                return Err(ConfigError::global(format!(
                    "{name} window ({lo}, {hi}) must satisfy 0 < lo < hi < 1 (fractions of |Ω|)"
                )));
            }
        }
        for (name, tol) in [
            ("analysis.u_tol", a.u_tol),
            ("analysis.grad_tol", a.grad_tol),
            ("analysis.borderline_tol", a.borderline_tol),
        ] {
            if !(tol > 0.0 && tol <= 50.0) {
                return Err(ConfigError::global(format!("`{name}` = {tol} must lie in (0, 50] percent")));
            }
        }
        if !(1..=2).contains(&a.resolutions) {
            return Err(ConfigError::global("`analysis.resolutions` must be 1 or 2"));
        }
        let fractions = &self.sweep.b_fractions;
        if fractions.is_empty() || fractions.iter().any(|&b| !(b >= 0.0 && b.is_finite())) {
            return Err(ConfigError::global("`sweep.b_fractions` needs finite nonnegative values"));
        }
        if self.sweep.m_values.is_empty() || self.sweep.m_values.iter().any(|&m| !(m >= 1.0)) {
            return Err(ConfigError::global("`sweep.m_values` needs values of at least 1"));
        }
        if self.properties.cases == 0 || self.properties.max_cells == 0 {
            return Err(ConfigError::global("property counts must be positive"));
        }
        if !(self.solver.relaxation > 0.0 && self.solver.relaxation <= 1.0) {
            return Err(ConfigError::global("`solver.relaxation` must lie in (0, 1]"));
        }
        Ok(())
    }

    /// Canonical text: every key in a fixed order, floats in shortest
    /// round-trip form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut put = |key: &str, value: String| {
            let _ = writeln!(out, "{key} = {value}");
        };
        let list = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let p = &self.problem;
        put("run.mode", self.mode.as_str().into());
        put("run.seed", self.seed.to_string());
        put("problem.kind", p.kind.as_str().into());
        put("problem.dim", p.dim.to_string());
        put("problem.p", p.p.to_string());
        put("problem.m", p.m.to_string());
        put("problem.q", p.q.to_string());
        put("problem.alpha", p.alpha.to_string());
        put("problem.beta", p.beta.to_string());
        put("problem.omega", p.omega.to_string());
        match p.field {
            FieldStrength::Fraction(x) => put("problem.b_fraction", x.to_string()),
            FieldStrength::Absolute(x) => put("problem.b", x.to_string()),
        }
        put("problem.f_bound", p.f_bound.to_string());
        put("problem.orientation", orientation_name(p.orientation).into());
        match &self.datum {
            DatumSpec::Marcinkiewicz => put("datum.shape", "marcinkiewicz".into()),
            DatumSpec::Power { coef, exponent } => {
                put("datum.shape", "power".into());
                put("datum.coef", coef.to_string());
                put("datum.exponent", exponent.to_string());
            }
            DatumSpec::Constant(v) => {
                put("datum.shape", "constant".into());
                put("datum.value", v.to_string());
            }
            DatumSpec::Concentrated(mass) => {
                put("datum.shape", "concentrated".into());
                put("datum.mass", mass.to_string());
            }
            DatumSpec::Zero => put("datum.shape", "zero".into()),
            DatumSpec::Table(path) => {
                put("datum.shape", "table".into());
                put("datum.table", path.display().to_string());
            }
        }
        put("mesh.nodes", self.mesh.nodes.to_string());
        put("mesh.grading", self.mesh.grading.to_string());
        put("solver.tol", self.solver.tol.to_string());
        put("solver.max_iter", self.solver.max_iter.to_string());
        put("solver.relaxation", self.solver.relaxation.to_string());
        put("solver.floor", self.solver.floor.to_string());
        put("solver.truncation", self.solver.truncation.to_string());
        let a = &self.analysis;
        put("analysis.fit_lo", a.fit_window.0.to_string());
        put("analysis.fit_hi", a.fit_window.1.to_string());
        put("analysis.compare_lo", a.compare_window.0.to_string());
        put("analysis.compare_hi", a.compare_window.1.to_string());
        put("analysis.u_tol", a.u_tol.to_string());
        put("analysis.grad_tol", a.grad_tol.to_string());
        put("analysis.borderline_tol", a.borderline_tol.to_string());
        put("analysis.resolutions", a.resolutions.to_string());
        put("sweep.b_fractions", list(&self.sweep.b_fractions));
        put("sweep.m_values", list(&self.sweep.m_values));
        put("properties.cases", self.properties.cases.to_string());
        put("properties.max_cells", self.properties.max_cells.to_string());
        put("properties.corrupt", self.properties.corrupt.to_string());
        out
    }

    /// Table path resolved against the config file's directory.
    pub fn resolve(&self, path: &Path) -> PathBuf {
        match &self.base_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }
}

fn build_datum(
    shape: Option<(usize, String)>,
    values: &[(usize, &'static str, String)],
) -> Result<DatumSpec, ConfigError> {
    let (shape_line, shape) = shape.unwrap_or((0, "marcinkiewicz".to_string()));
    for (line, key, _) in values {
        let owner = DATUM_KEYS.iter().find(|(k, _)| k == key).map(|(_, s)| *s).unwrap_or("");
        if owner != shape {
            return Err(ConfigError::at(
                *line,
                format!("`{key}` only applies to `datum.shape = {owner}`"),
            ));
        }
    }
    let get = |key: &str| values.iter().find(|(_, k, _)| *k == key);
    let number = |key: &str, default: f64| -> Result<f64, ConfigError> {
        match get(key) {
            Some((line, k, raw)) => parse_f64(*line, k, raw),
            None => Ok(default),
        }
    };
    match shape.as_str() {
        "marcinkiewicz" => Ok(DatumSpec::Marcinkiewicz),
        "power" => Ok(DatumSpec::Power {
            coef: number("datum.coef", 1.0)?,
            exponent: number("datum.exponent", 0.5)?,
        }),
        "constant" => Ok(DatumSpec::Constant(number("datum.value", 1.0)?)),
        "concentrated" => Ok(DatumSpec::Concentrated(number("datum.mass", 1.0)?)),
        "zero" => Ok(DatumSpec::Zero),
        "table" => match get("datum.table") {
            Some((_, _, raw)) => Ok(DatumSpec::Table(PathBuf::from(raw))),
            None => Err(ConfigError::at(shape_line, "`datum.shape = table` needs `datum.table`")),
        },
        other => Err(ConfigError::at(shape_line, format!("unknown datum shape `{other}`"))),
    }
}
