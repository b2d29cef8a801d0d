//! Two-column CSV serialization of profiles.

use std::fmt::Write as _;
use std::io;

use crate::DecreasingProfile;

/// Formats a float with 17 significant digits; non-finite values are written
/// as `inf`, `-inf` or `nan`.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Renders `header` followed by one `x,y` row per pair.
pub fn two_column(header: &str, rows: impl IntoIterator<Item = (f64, f64)>) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for (x, y) in rows {
        let _ = writeln!(out, "{},{}", fmt17(x), fmt17(y));
    }
    out
}

/// `s,value` rows at the breakpoints of the profile.
pub fn profile_csv(profile: &DecreasingProfile) -> String {
    two_column(
        "s,value",
        profile
            .breakpoints()
            .iter()
            .copied()
            .zip(profile.values().iter().copied()),
    )
}

pub fn write_profile<W: io::Write>(profile: &DecreasingProfile, mut w: W) -> io::Result<()> {
    w.write_all(profile_csv(profile).as_bytes())
}
