use crate::Mode;

/// One row-level assertion (or, with `asserted = false`, a reported value).
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub run: String,
    pub name: String,
    pub measured: f64,
    pub expected: f64,
    /// Relative tolerance as a fraction; NaN when the check is an
    /// inequality.
    pub tolerance: f64,
    pub asserted: bool,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    /// `|measured − expected| ≤ tolerance·|expected|`.
    pub fn slope(run: &str, name: &str, measured: f64, expected: f64, tolerance: f64) -> Self {
        let passed = (measured - expected).abs() <= tolerance * expected.abs();
        Self {
            run: run.into(),
            name: name.into(),
            measured,
            expected,
            tolerance,
            asserted: true,
            passed,
            detail: String::new(),
        }
    }

    /// `measured ≤ expected`.
    pub fn at_most(run: &str, name: &str, measured: f64, expected: f64) -> Self {
        Self {
            run: run.into(),
            name: name.into(),
            measured,
            expected,
            tolerance: f64::NAN,
            asserted: true,
            passed: measured <= expected,
            detail: String::new(),
        }
    }

    /// Reported but never part of the verdict.
    pub fn info(run: &str, name: &str, measured: f64, detail: impl Into<String>) -> Self {
        Self {
            run: run.into(),
            name: name.into(),
            measured,
            expected: f64::NAN,
            tolerance: f64::NAN,
            asserted: false,
            passed: true,
            detail: detail.into(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn unasserted(mut self) -> Self {
        self.asserted = false;
        self
    }

    /// Whether this row can fail the verdict.
    pub fn failed(&self) -> bool {
        self.asserted && !self.passed
    }
}

/// One sampled point of a discrete profile against its bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub t: f64,
    pub discrete: f64,
    /// NaN where no bound is available.
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSeries {
    pub run: String,
    /// `u` for the solution, `grad` for the gradient running average.
    pub quantity: String,
    pub rows: Vec<ProfileRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub mode: Mode,
    pub checks: Vec<Check>,
    pub profiles: Vec<ProfileSeries>,
}

impl Report {
    pub fn empty(mode: Mode) -> Self {
        Self {
            mode,
            checks: Vec::new(),
            profiles: Vec::new(),
        }
    }

    /// Pass iff no asserted row failed.
    pub fn verdict(&self) -> Verdict {
        if self.checks.iter().any(Check::failed) {
            Verdict::Fail
        } else {
            Verdict::Pass
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.failed())
    }

    pub fn check(&self, run: &str, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.run == run && c.name == name)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.profiles.extend(other.profiles);
    }
}
