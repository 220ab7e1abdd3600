//! Reduced two-qubit H2 Hamiltonian: coefficient tables, the six-term
//! operator, its exact ground energy, and energy assembly from measured
//! expectation values.

use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
pub use crate::pauli::{Pauli, PauliString};

pub const COEFFICIENT_HEADER: [&str; 7] = ["r_angstrom", "g0", "g1", "g2", "g3", "g4", "g5"];

/// Bundled STO-3G table, 78 bond lengths from 0.10 to 3.95 Å.
pub const BUNDLED_COEFFICIENTS: &str = include_str!("../data/h2_sto3g.csv");

const R_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientRow {
    /// Bond length in Å.
    pub r: f64,
    /// `g0..g5` in Hartree.
    pub g: [f64; 6],
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    rows: Vec<CoefficientRow>,
}

impl CoefficientTable {
    pub fn new(rows: Vec<CoefficientRow>) -> Result<Self> {
        for w in rows.windows(2) {
            if w[1].r <= w[0].r {
                return Err(Error::Parameter(format!(
                    "bond lengths not strictly increasing at r = {}",
                    w[1].r
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn bundled() -> Self {
        parse_coefficients(BUNDLED_COEFFICIENTS, Path::new("<bundled>"))
            .expect("bundled coefficient table parses")
    }

    pub fn rows(&self) -> &[CoefficientRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn index_of(&self, r: f64) -> Result<usize> {
        if let Some(i) = self
            .rows
            .iter()
            .position(|row| (row.r - r).abs() <= R_MATCH_TOL)
        {
            return Ok(i);
        }
        let mut by_distance: Vec<f64> = self.rows.iter().map(|row| row.r).collect();
        by_distance.sort_by(|a, b| (a - r).abs().total_cmp(&(b - r).abs()));
        by_distance.truncate(2);
        Err(Error::Lookup {
            r,
            nearest: by_distance,
        })
    }

    pub fn row(&self, r: f64) -> Result<&CoefficientRow> {
        Ok(&self.rows[self.index_of(r)?])
    }
}

pub fn load_coefficients(path: &Path) -> Result<CoefficientTable> {
    let text = std::fs::read_to_string(path)?;
    parse_coefficients(&text, path)
}

/// Parses `r_angstrom,g0,…,g5` CSV text; `#` lines are comments.
pub fn parse_coefficients(text: &str, origin: &Path) -> Result<CoefficientTable> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| parse_err(0, e.to_string()))?
        .clone();
    let header_line = header.position().map_or(1, |p| p.line() as usize);
    if header.iter().collect::<Vec<_>>() != COEFFICIENT_HEADER {
        return Err(parse_err(
            header_line,
            format!("expected header {}", COEFFICIENT_HEADER.join(",")),
        ));
    }
    let mut rows: Vec<CoefficientRow> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 7 {
            return Err(parse_err(
                line,
                format!("expected 7 columns, found {}", record.len()),
            ));
        }
        let mut vals = [0.0; 7];
        for (k, field) in record.iter().enumerate() {
            vals[k] = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    parse_err(
                        line,
                        format!("column {}: bad number {field:?}", COEFFICIENT_HEADER[k]),
                    )
                })?;
        }
        if let Some(prev) = rows.last() {
            if vals[0] <= prev.r {
                return Err(parse_err(
                    line,
                    format!("r = {} does not increase past {}", vals[0], prev.r),
                ));
            }
        }
        rows.push(CoefficientRow {
            r: vals[0],
            g: [vals[1], vals[2], vals[3], vals[4], vals[5], vals[6]],
        });
    }
    if rows.is_empty() {
        return Err(Error::EmptyTable(PathBuf::from(origin)));
    }
    Ok(CoefficientTable { rows })
}

/// Weighted sum of Pauli words.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSum {
    terms: Vec<(f64, PauliString)>,
}

/// Fixed term order of the reduced Hamiltonian: I, Z₁, Z₂, Z₁Z₂, Y₁Y₂, X₁X₂.
pub fn hamiltonian_words() -> [PauliString; 6] {
    ["II", "IZ", "ZI", "ZZ", "YY", "XX"].map(|w| w.parse().expect("valid word"))
}

impl ObservableSum {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let n = terms.first().map(|(_, p)| p.len()).unwrap_or(0);
        if terms.iter().any(|(_, p)| p.len() != n) {
            return Err(Error::Parameter(
                "terms act on different register sizes".into(),
            ));
        }
        Ok(Self { terms })
    }

    pub fn from_coefficients(g: &[f64; 6]) -> Self {
        let terms = g.iter().copied().zip(hamiltonian_words()).collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn n_qubits(&self) -> usize {
        self.terms.first().map(|(_, p)| p.len()).unwrap_or(0)
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let dim = 1 << self.n_qubits();
        let mut m = DMatrix::zeros(dim, dim);
        for (c, p) in &self.terms {
            let pm = p.to_matrix();
            for i in 0..dim {
                for j in 0..dim {
                    m[(i, j)] += pm[i * dim + j] * *c;
                }
            }
        }
        m
    }
}

/// Six-term operator for the table row at bond length `r`.
pub fn hamiltonian(table: &CoefficientTable, r: f64) -> Result<ObservableSum> {
    Ok(ObservableSum::from_coefficients(&table.row(r)?.g))
}

/// Lowest eigenvalue of the operator.
pub fn exact_ground_energy(h: &ObservableSum) -> f64 {
    if h.terms.is_empty() {
        return 0.0;
    }
    h.to_matrix()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Measured term expectations. A missing `y1y2` is replaced by `−x1x2`,
/// which holds exactly on the ansatz family.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TermExpectations {
    pub z1: f64,
    pub z2: f64,
    pub z1z2: f64,
    pub x1x2: f64,
    pub y1y2: Option<f64>,
}

const RANGE_SLACK: f64 = 1e-6;

pub fn assemble_energy(g: &[f64; 6], e: &TermExpectations) -> Result<f64> {
    let mut checked = vec![
        ("Z1", e.z1),
        ("Z2", e.z2),
        ("Z1Z2", e.z1z2),
        ("X1X2", e.x1x2),
    ];
    if let Some(y) = e.y1y2 {
        checked.push(("Y1Y2", y));
    }
    for (term, value) in checked {
        if !value.is_finite() || value.abs() > 1.0 + RANGE_SLACK {
            return Err(Error::Range { term, value });
        }
    }
    let yy = e.y1y2.unwrap_or(-e.x1x2);
    Ok(g[0] + g[1] * e.z1 + g[2] * e.z2 + g[3] * e.z1z2 + g[4] * yy + g[5] * e.x1x2)
}
