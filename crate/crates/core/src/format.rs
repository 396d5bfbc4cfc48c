//! JSON structure files.
//!
//! ```json
//! {
//!   "dim": 3,
//!   "brackets": [ { "i": 0, "j": 1, "v": [0, -1, -2] } ],
//!   "gram": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
//!   "phi": [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
//!   "xi": [1, 0, 0]
//! }
//! ```
//!
//! Only pairs with `i < j` are listed; mirrors are implied and unlisted pairs
//! are zero. Floats are written with 17 significant digits so that reading a
//! written file reproduces every value bit for bit.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kenmotsu::AlmostContactData;
use crate::liealg::MetricLieAlgebra;
use crate::numkit::RealMatrix;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed structure file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid structure file: {0}")]
    Invalid(String),
    #[error(transparent)]
    Structure(#[from] crate::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub dim: usize,
    pub brackets: Vec<BracketEntry>,
    pub gram: Vec<Vec<f64>>,
    pub phi: Vec<Vec<f64>>,
    pub xi: Vec<f64>,
}

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Invalid(msg.into())
}

impl StructureFile {
    /// Parses and validates the file shape (not the geometry).
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let file: StructureFile = serde_json::from_str(text)?;
        file.validate()?;
        Ok(file)
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        let d = self.dim;
        if d == 0 {
            return Err(invalid("dim must be positive"));
        }
        let mut seen = std::collections::HashSet::new();
        for b in &self.brackets {
            if b.i >= d || b.j >= d {
                return Err(invalid(format!(
                    "bracket index ({}, {}) out of range",
                    b.i, b.j
                )));
            }
            if b.i >= b.j {
                return Err(invalid(format!(
                    "bracket ({}, {}) must have i < j",
                    b.i, b.j
                )));
            }
            if !seen.insert((b.i, b.j)) {
                return Err(invalid(format!("duplicate bracket ({}, {})", b.i, b.j)));
            }
            check_vec("bracket value", &b.v, d)?;
        }
        check_square("gram", &self.gram, d)?;
        check_square("phi", &self.phi, d)?;
        check_vec("xi", &self.xi, d)?;
        let scale = self
            .gram
            .iter()
            .flatten()
            .fold(1.0f64, |m, x| m.max(x.abs()));
        for i in 0..d {
            for j in (i + 1)..d {
                if (self.gram[i][j] - self.gram[j][i]).abs() > 1e-12 * scale {
                    return Err(invalid(format!("gram not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    pub fn from_structure(alg: &MetricLieAlgebra, data: &AlmostContactData) -> Self {
        let d = alg.dim();
        let mut brackets = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                let v = alg.basis_bracket(i, j);
                if v.iter().any(|&x| x != 0.0) {
                    brackets.push(BracketEntry {
                        i,
                        j,
                        v: v.to_vec(),
                    });
                }
            }
        }
        Self {
            dim: d,
            brackets,
            gram: alg.gram().to_rows(),
            phi: data.phi().to_rows(),
            xi: data.xi().to_vec(),
        }
    }

    pub fn to_structure(&self) -> Result<(MetricLieAlgebra, AlmostContactData), FormatError> {
        self.validate()?;
        let brackets: Vec<(usize, usize, Vec<f64>)> = self
            .brackets
            .iter()
            .map(|b| (b.i, b.j, b.v.clone()))
            .collect();
        let alg = MetricLieAlgebra::from_brackets(
            self.dim,
            &brackets,
            RealMatrix::from_rows(&self.gram)?,
        )?;
        let data = AlmostContactData::new(RealMatrix::from_rows(&self.phi)?, self.xi.clone())?;
        Ok((alg, data))
    }

    /// Serializes with every float written as 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        let _ = writeln!(s, "  \"dim\": {},", self.dim);
        s.push_str("  \"brackets\": [");
        for (k, b) in self.brackets.iter().enumerate() {
            s.push_str(if k == 0 { "\n" } else { ",\n" });
            let _ = write!(
                s,
                "    {{\"i\": {}, \"j\": {}, \"v\": {}}}",
                b.i,
                b.j,
                float_list(&b.v)
            );
        }
        s.push_str(if self.brackets.is_empty() {
            "],\n"
        } else {
            "\n  ],\n"
        });
        let _ = writeln!(s, "  \"gram\": {},", matrix(&self.gram));
        let _ = writeln!(s, "  \"phi\": {},", matrix(&self.phi));
        let _ = writeln!(s, "  \"xi\": {}", float_list(&self.xi));
        s.push_str("}\n");
        s
    }

    /// Bitwise equality of every field.
    pub fn bit_eq(&self, other: &StructureFile) -> bool {
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        self.dim == other.dim
            && self.brackets.len() == other.brackets.len()
            && self
                .brackets
                .iter()
                .zip(&other.brackets)
                .all(|(a, b)| a.i == b.i && a.j == b.j && bits(&a.v) == bits(&b.v))
            && self.gram.len() == other.gram.len()
            && self
                .gram
                .iter()
                .zip(&other.gram)
                .all(|(a, b)| bits(a) == bits(b))
            && self.phi.len() == other.phi.len()
            && self
                .phi
                .iter()
                .zip(&other.phi)
                .all(|(a, b)| bits(a) == bits(b))
            && bits(&self.xi) == bits(&other.xi)
    }
}

fn check_vec(what: &str, v: &[f64], d: usize) -> Result<(), FormatError> {
    if v.len() != d {
        return Err(invalid(format!(
            "{what} has length {}, expected {d}",
            v.len()
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(invalid(format!("{what} has a non-finite entry")));
    }
    Ok(())
}

fn check_square(what: &str, rows: &[Vec<f64>], d: usize) -> Result<(), FormatError> {
    if rows.len() != d {
        return Err(invalid(format!(
            "{what} has {} rows, expected {d}",
            rows.len()
        )));
    }
    for row in rows {
        check_vec(what, row, d)?;
    }
    Ok(())
}

/// 17 significant digits in scientific notation.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn float_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|&x| format_f64(x)).collect();
    format!("[{}]", items.join(", "))
}

fn matrix(rows: &[Vec<f64>]) -> String {
    let items: Vec<String> = rows.iter().map(|r| float_list(r)).collect();
    format!("[\n    {}\n  ]", items.join(",\n    "))
}
