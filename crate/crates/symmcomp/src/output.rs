//! Writes `report.csv`, `profiles.csv` and a gnuplot script into the output
//! directory. Every float goes through `fmt17`, so identical reports give
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rearrange::csv::fmt17;

use crate::report::Report;
use crate::BenchError;

pub const REPORT_FILE: &str = "report.csv";
pub const PROFILES_FILE: &str = "profiles.csv";
pub const PLOT_FILE: &str = "plot.gp";

pub const REPORT_HEADER: &str = "run,check,measured,expected,tolerance,asserted,passed,detail";
pub const PROFILES_HEADER: &str = "run,quantity,t,discrete,bound,ratio";

/// Quotes a field when it holds a comma, quote or line break.
fn field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn report_csv(report: &Report) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for c in &report.checks {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            field(&c.run),
            field(&c.name),
            fmt17(c.measured),
            fmt17(c.expected),
            fmt17(c.tolerance),
            c.asserted,
            c.passed,
            field(&c.detail)
        );
    }
    out
}

pub fn profiles_csv(report: &Report) -> String {
    let mut out = String::from(PROFILES_HEADER);
    out.push('\n');
    for s in &report.profiles {
        for r in &s.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                field(&s.run),
                field(&s.quantity),
                fmt17(r.t),
                fmt17(r.discrete),
                fmt17(r.bound),
                fmt17(r.ratio)
            );
        }
    }
    out
}

/// Log-log plot of every series against its bound, read from
/// `profiles.csv` next to the script.
pub fn plot_script(report: &Report) -> String {
    let mut out = String::from(
        "set datafile separator ','\nset logscale xy\nset key outside\nset xlabel 't'\nset format y '%g'\n",
    );
    if report.profiles.is_empty() {
        out.push_str("# no profile series in this run\n");
        return out;
    }
    let mut plots = Vec::new();
    for s in &report.profiles {
        let select = format!("(strcol(1) eq '{}' && strcol(2) eq '{}')", s.run, s.quantity);
        plots.push(format!(
            "'{PROFILES_FILE}' skip 1 using 3:({select} ? $4 : 1/0) with lines title '{} {} discrete'",
            s.run, s.quantity
        ));
        if s.rows.iter().any(|r| !r.bound.is_nan()) {
            plots.push(format!(
                "'{PROFILES_FILE}' skip 1 using 3:({select} ? $5 : 1/0) with lines dashtype 2 title '{} {} bound'",
                s.run, s.quantity
            ));
        }
    }
    let _ = writeln!(out, "plot {}", plots.join(", \\\n     "));
    out
}

/// Creates `dir` if needed and writes the three output files.
pub fn emit_outputs(report: &Report, dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| BenchError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let files = [
        (REPORT_FILE, report_csv(report)),
        (PROFILES_FILE, profiles_csv(report)),
        (PLOT_FILE, plot_script(report)),
    ];
    let mut written = Vec::with_capacity(files.len());
    for (name, text) in files {
        let path = dir.join(name);
        fs::write(&path, text).map_err(io(&path))?;
        written.push(path);
    }
    Ok(written)
}
