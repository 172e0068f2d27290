//! Flat-file exports: CSV with fixed 17-significant-digit floats and LF line
//! endings, JSON via serde, and atomic (write-then-rename) file writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::potentials::PotentialCurve;
use crate::raman_nath::MomentumDistribution;

/// Schema version carried by every JSON report.
pub const SCHEMA_VERSION: u32 = 1;

/// 17 significant digits in scientific notation, e.g. `7.3223304703363119e0`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<f64>>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

/// `p_bar,W` rows in grid order.
pub fn density_csv(dist: &MomentumDistribution) -> String {
    csv(
        &["p_bar", "W"],
        dist.grid
            .points()
            .zip(&dist.density)
            .map(|(p, w)| vec![p, *w]),
    )
}

/// `x,U_plus,U_minus` rows.
pub fn potential_csv(curve: &PotentialCurve) -> String {
    csv(
        &["x", "U_plus", "U_minus"],
        curve.samples.iter().map(|&(x, p, m)| vec![x, p, m]),
    )
}

/// One abscissa column named `first` followed by one column per labelled series.
pub fn columns_csv(first: &str, x: &[f64], series: &[(String, Vec<f64>)]) -> String {
    let mut header = vec![first];
    header.extend(series.iter().map(|(l, _)| l.as_str()));
    csv(
        &header,
        x.iter().enumerate().map(|(i, &xi)| {
            let mut row = vec![xi];
            row.extend(series.iter().map(|(_, s)| s[i]));
            row
        }),
    )
}

/// Pretty-printed JSON with a trailing newline.
pub fn json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `contents` to a temporary sibling and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let file_name = path.file_name().ok_or_else(|| {
        std::io::Error::new(std::io::ErrorKind::InvalidInput, "path has no file name")
    })?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(".tmp");
    let tmp = match dir {
        Some(d) => d.join(&tmp_name),
        None => tmp_name.into(),
    };
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}
