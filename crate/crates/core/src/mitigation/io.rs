//! CSV formats for histograms, response matrices and spectra.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::brem::{ResponseMatrix, Spectrum};
use crate::densesim::{format_bits, ShotHistogram};
use crate::error::{Error, Result};

/// Formats like C's `%.12g`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (11 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Reads `bitstring,count` rows (header optional, `#` comments allowed).
pub fn read_histogram(path: &Path) -> Result<ShotHistogram> {
    let text = fs::read_to_string(path)?;
    parse_histogram(&text, path)
}

pub fn parse_histogram(text: &str, origin: &Path) -> Result<ShotHistogram> {
    let mut entries: Vec<(String, u64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.eq_ignore_ascii_case("bitstring,count")
        {
            continue;
        }
        let (key, count) = line
            .split_once(',')
            .ok_or_else(|| parse_error(origin, idx + 1, "expected `bitstring,count`"))?;
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| parse_error(origin, idx + 1, format!("bad count `{}`", count.trim())))?;
        entries.push((key.trim().to_string(), count));
    }
    if entries.is_empty() {
        return Err(Error::EmptyTable(origin.to_path_buf()));
    }
    let h = ShotHistogram::from_map(entries.iter().map(|(k, c)| (k.as_str(), *c)))?;
    if h.shots() == 0 {
        return Err(Error::EmptyTable(origin.to_path_buf()));
    }
    Ok(h)
}

pub fn write_histogram(path: &Path, h: &ShotHistogram) -> Result<()> {
    let mut out = String::from("bitstring,count\n");
    for (k, c) in h.to_map() {
        out.push_str(&format!("{k},{c}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a response matrix: a `n_qubits=<n>` header then `2^n` rows of
/// `2^n` comma-separated entries, row `j` holding `Pr(measure j | truth i)`.
pub fn read_response(path: &Path) -> Result<ResponseMatrix> {
    let text = fs::read_to_string(path)?;
    parse_response(&text, path)
}

pub fn parse_response(text: &str, origin: &Path) -> Result<ResponseMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::EmptyTable(origin.to_path_buf()))?;
    let n: usize = header
        .strip_prefix("n_qubits=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| parse_error(origin, hline, "expected header `n_qubits=<n>`"))?;
    if !(1..=crate::densesim::MAX_QUBITS).contains(&n) {
        return Err(Error::Capacity(n));
    }
    let dim = 1 << n;
    let mut data = Vec::with_capacity(dim * dim);
    let mut rows = 0;
    for (line, l) in lines {
        let row: Vec<f64> = l
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_error(origin, line, e.to_string()))?;
        if row.len() != dim {
            return Err(parse_error(
                origin,
                line,
                format!("expected {dim} columns, found {}", row.len()),
            ));
        }
        data.extend(row);
        rows += 1;
    }
    if rows != dim {
        return Err(Error::Arity {
            expected: dim,
            got: rows,
        });
    }
    ResponseMatrix::new(n, data)
}

pub fn write_response(path: &Path, r: &ResponseMatrix) -> Result<()> {
    let mut f = fs::File::create(path)?;
    writeln!(f, "n_qubits={}", r.n_qubits())?;
    for row in r.as_slice().chunks(r.dim()) {
        let cells: Vec<String> = row.iter().map(|x| format_float(*x)).collect();
        writeln!(f, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_spectrum(path: &Path, s: &Spectrum) -> Result<()> {
    let mut out = String::from("bitstring,probability\n");
    for (k, p) in s.probs().iter().enumerate() {
        out.push_str(&format!(
            "{},{}\n",
            format_bits(k, s.n_bits()),
            format_float(*p)
        ));
    }
    fs::write(path, out)?;
    Ok(())
}
