use serde::{Deserialize, Serialize};

use super::scenario::{Kind, Scenario};
use crate::error::{Error, Result};

/// Fixed CSV column order.
pub const CSV_COLUMNS: [&str; 13] = [
    "kind",
    "n",
    "c_or_kappa",
    "p",
    "R",
    "m",
    "lower_bound",
    "lambda_hat",
    "margin",
    "pass",
    "iterations",
    "converged",
    "error",
];

/// Margin below which a certificate fails; absorbs rounding in the bound.
pub const PASS_SLACK: f64 = 1e-9;

/// One row of a report: a lower bound, an upper bound, or both, for a single
/// `(p, R)` (or `(p, λ)` for `invert`) case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub kind: Kind,
    pub n: Option<usize>,
    pub c_or_kappa: Option<f64>,
    pub p: f64,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    pub m: Option<usize>,
    pub lower_bound: Option<f64>,
    pub lambda_hat: Option<f64>,
    pub margin: Option<f64>,
    pub pass: Option<bool>,
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
    pub error: Option<String>,
    // JSON-only diagnostics
    pub epsilon_final: Option<f64>,
    pub lambda_target: Option<f64>,
}

impl BoundCertificate {
    pub(crate) fn empty(kind: Kind, p: f64) -> Self {
        Self {
            kind,
            n: None,
            c_or_kappa: None,
            p,
            radius: None,
            m: None,
            lower_bound: None,
            lambda_hat: None,
            margin: None,
            pass: None,
            iterations: None,
            converged: None,
            error: None,
            epsilon_final: None,
            lambda_target: None,
        }
    }

    /// Fills `margin` and `pass` from the two bounds.
    pub(crate) fn certify(&mut self) {
        if let (Some(lo), Some(hi)) = (self.lower_bound, self.lambda_hat) {
            let margin = hi - lo;
            self.margin = Some(margin);
            self.pass = Some(margin >= -PASS_SLACK);
        }
    }

    pub fn is_complete(&self) -> bool {
        self.error.is_none()
    }
}

/// Result of running a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: Scenario,
    pub rows: Vec<BoundCertificate>,
}

/// 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl Report {
    /// Whether every row finished and, for `verify`, passed.
    pub fn success(&self) -> bool {
        match self.scenario.kind {
            Kind::Verify => self.rows.iter().all(|r| r.pass == Some(true)),
            _ => self.rows.iter().all(BoundCertificate::is_complete),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(CSV_COLUMNS).map_err(csv_err)?;
        let f = |x: Option<f64>| x.map(format_float).unwrap_or_default();
        let i = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        let b = |x: Option<bool>| x.map(|v| v.to_string()).unwrap_or_default();
        for row in &self.rows {
            w.write_record([
                row.kind.to_string(),
                i(row.n),
                f(row.c_or_kappa),
                format_float(row.p),
                f(row.radius),
                i(row.m),
                f(row.lower_bound),
                f(row.lambda_hat),
                f(row.margin),
                b(row.pass),
                i(row.iterations),
                b(row.converged),
                row.error.clone().unwrap_or_default(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_17_significant_digits() {
        let s = format_float(std::f64::consts::PI);
        assert_eq!(s, "3.1415926535897931e0");
        for x in [0.1, 1.0 / 3.0, 9.869604401089358, 1e-300, 123456.789] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn certify_uses_slack() {
        let mut row = BoundCertificate::empty(Kind::Verify, 2.0);
        row.lower_bound = Some(1.0);
        row.lambda_hat = Some(1.0 - 1e-10);
        row.certify();
        assert_eq!(row.pass, Some(true));
        row.lambda_hat = Some(0.99);
        row.certify();
        assert_eq!(row.pass, Some(false));
    }
}
