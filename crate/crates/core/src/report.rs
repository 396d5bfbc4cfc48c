//! Residual-carrying check results.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A single named check: the measured residual and the tolerance it was held to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationCheck {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl VerificationCheck {
    pub fn new(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        // NaN residuals never pass.
        let pass = residual < tol;
        Self {
            name: name.into(),
            residual,
            tol,
            pass,
        }
    }
}

impl fmt::Display for VerificationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<24} {} residual {:.3e} (tol {:.1e})",
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.residual,
            self.tol
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<VerificationCheck>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: VerificationCheck) {
        self.checks.push(check);
    }

    pub fn add(&mut self, name: impl Into<String>, residual: f64, tol: f64) {
        self.push(VerificationCheck::new(name, residual, tol));
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&VerificationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            writeln!(f, "{check}")?;
        }
        write!(f, "overall: {}", if self.pass() { "PASS" } else { "FAIL" })
    }
}
