use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::{CliError, CliResult};
use crate::sweep::{Cell, SweepResult};

/// Significant digits of every float in the CSV body.
pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
    }
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Num(x) => format_float(*x),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

/// `#` manifest lines, header and rows, LF-terminated.
pub fn write_csv<W: Write>(result: &SweepResult, mut out: W) -> io::Result<()> {
    let m = &result.manifest;
    writeln!(out, "# slhnet {}", m.version)?;
    writeln!(out, "# task: {}", m.task)?;
    writeln!(out, "# device: {}", m.device)?;
    writeln!(out, "# config_sha256: {}", m.config_hash)?;
    writeln!(out, "# created: {}", m.created)?;
    writeln!(out, "# rel_tol: {:e}", m.rel_tol)?;
    writeln!(out, "# abs_tol: {:e}", m.abs_tol)?;
    writeln!(out, "# points: {}, failed: {}", m.points, m.failed)?;
    writeln!(
        out,
        "# solver: accepted_steps={}, rejected_steps={}, rhs_evals={}",
        m.accepted_steps, m.rejected_steps, m.rhs_evals
    )?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(&result.columns)?;
    for row in &result.rows {
        w.write_record(row.iter().map(cell_text))?;
    }
    w.flush()
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> CliResult<()> {
    let io_err = |source| CliError::Io { path: path.to_path_buf(), source };
    let file = File::create(path).map_err(io_err)?;
    write_csv(result, BufWriter::new(file)).map_err(io_err)
}

/// Everything after the manifest preamble.
pub fn csv_body(text: &str) -> &str {
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if !line.starts_with('#') {
            break;
        }
        offset += line.len();
    }
    &text[offset..]
}
