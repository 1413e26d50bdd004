use std::io::Write;
use std::path::Path;

use crate::error::Result;
use crate::harness::ExperimentRow;

pub const CSV_HEADER: &str = "m,p1,alpha,budget_mode,mean_c_d,std_c_d,n_instances,seed";

/// Decimal rendering with `digits` significant digits and trailing zeros trimmed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - exp).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.m,
            format_significant(r.p1, 12),
            format_significant(r.alpha, 12),
            r.budget_mode.as_str(),
            format_significant(r.mean_c_d, 12),
            format_significant(r.std_c_d, 12),
            r.n_instances,
            r.seed
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Writes the rows to `path` in grid order.
pub fn emit_csv(rows: &[ExperimentRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(rows, std::io::BufWriter::new(file))
}
