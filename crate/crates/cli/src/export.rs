use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use quasiid::LogTrace;

use crate::CliError;

/// `printf("%.17g", x)`: 17 significant digits, trailing zeros removed,
/// exponent form outside `[1e−4, 1e17)`.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        trim_fraction(&format!("{x:.*}", (16 - exp) as usize)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes `t,re_lnf,im_lnf` rows, one per grid node, with LF line endings.
pub fn export_trace(trace: &LogTrace, path: &Path) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        action: "write trace",
        path: path.to_path_buf(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    out.write_all(b"t,re_lnf,im_lnf\n").map_err(io_err)?;
    for (t, v) in trace.iter() {
        writeln!(out, "{},{},{}", format_g17(t), format_g17(v.re), format_g17(v.im)).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}
