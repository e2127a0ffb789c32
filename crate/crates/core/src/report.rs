//! Report documents shared by the command line and the acceptance run.
//! JSON output is deterministic: every map in the payload is ordered.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::beltrami::VectorForm;
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::presentation::LiePresentation;
use crate::series::{monomial_name, Coefficient, Series};

pub const NOT_NILPOTENT: &str = "lie-algebra-cohomology-only";
pub const STRUCTURE_FAILED: &str = "structure-check-failed";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationMeta {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub n: usize,
    pub coframe: Vec<String>,
    pub nilpotent: bool,
    /// None when d² = 0 and integrability hold, else the first failure.
    pub structure_error: Option<String>,
}

impl PresentationMeta {
    pub fn of(pr: &LiePresentation) -> Self {
        PresentationMeta {
            name: pr.name.clone(),
            source: pr.source.clone(),
            n: pr.n(),
            coframe: pr.names().to_vec(),
            nilpotent: pr.is_nilpotent(),
            structure_error: pr.validate().err().map(|e| e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub kind: String,
    pub presentation: PresentationMeta,
    /// Set when a result depends on the Hermitian metric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    pub disclaimers: Vec<String>,
    pub payload: Value,
}

impl Report {
    pub fn new(kind: &str, pr: &LiePresentation, payload: Value) -> Self {
        let presentation = PresentationMeta::of(pr);
        let mut disclaimers = Vec::new();
        if !presentation.nilpotent {
            disclaimers.push(NOT_NILPOTENT.to_string());
        }
        if presentation.structure_error.is_some() {
            disclaimers.push(STRUCTURE_FAILED.to_string());
        }
        Report { kind: kind.to_string(), presentation, metric: None, disclaimers, payload }
    }

    pub fn with_metric(mut self, note: &str) -> Self {
        self.metric = Some(note.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("report: {e}")))
    }

    /// Header lines for the text format.
    pub fn header(&self) -> String {
        let p = &self.presentation;
        let mut out = format!("{}: {} (n = {})\n", self.kind, p.name, p.n);
        if let Some(s) = &p.source {
            out.push_str(&format!("source: {s}\n"));
        }
        if let Some(m) = &self.metric {
            out.push_str(&format!("metric: {m}\n"));
        }
        for d in &self.disclaimers {
            out.push_str(&format!("note: {d}\n"));
        }
        if let Some(e) = &p.structure_error {
            out.push_str(&format!("structure: {e}\n"));
        }
        out
    }
}

/// Aligned (n+1)×(n+1) grid with p down and q across.
pub fn grid(title: &str, n: usize, cell: impl Fn(usize, usize) -> String) -> String {
    let cells: Vec<Vec<String>> = (0..=n).map(|p| (0..=n).map(|q| cell(p, q)).collect()).collect();
    let w = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1).max(3);
    let mut out = format!("{title}\n{:>5}", "p\\q");
    for q in 0..=n {
        out.push_str(&format!(" {:>w$}", q));
    }
    out.push('\n');
    for (p, row) in cells.iter().enumerate() {
        out.push_str(&format!("{:>5}", p));
        for c in row {
            out.push_str(&format!(" {:>w$}", c));
        }
        out.push('\n');
    }
    out
}

/// Rows of label/value pairs with the labels padded to one width.
pub fn key_values(rows: &[(String, String)]) -> String {
    let w = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
}

pub trait Displayable {
    fn show(&self, names: &[String]) -> String;
}

impl Displayable for Form {
    fn show(&self, names: &[String]) -> String {
        self.display_with(names)
    }
}

impl Displayable for VectorForm {
    fn show(&self, names: &[String]) -> String {
        self.display_with(names)
    }
}

/// Coefficients keyed by parameter monomial, in the series' index order.
pub fn series_map<T: Coefficient + Displayable>(s: &Series<T>, names: &[String]) -> BTreeMap<String, String> {
    s.coeffs.iter().map(|(k, c)| (monomial_name(k, &s.params), c.show(names))).collect()
}

/// One line per coefficient, lowest degree first.
pub fn series_lines<T: Coefficient + Displayable>(s: &Series<T>, names: &[String]) -> Vec<String> {
    let mut keys: Vec<_> = s.coeffs.keys().collect();
    keys.sort_by_key(|k| (crate::series::degree(k), std::cmp::Reverse((*k).clone())));
    keys.into_iter().map(|k| format!("[{}] {}", monomial_name(k, &s.params), s.coeffs[k].show(names))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{cfp, iwasawa};
    use serde_json::json;

    #[test]
    fn json_round_trip_is_exact() {
        let r = Report::new("cohomology", &iwasawa(), json!({"b": {"2,0": 3, "1,1": 6}, "a": [1, 2]}));
        let s = r.to_json();
        assert_eq!(Report::from_json(&s).unwrap(), r);
        assert_eq!(Report::from_json(&s).unwrap().to_json(), s);
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(r.disclaimers.is_empty());
    }

    #[test]
    fn broken_structure_is_flagged() {
        let r = Report::new("validate", &cfp(), Value::Null);
        assert!(r.disclaimers.iter().any(|d| d == STRUCTURE_FAILED));
        assert!(r.header().contains("structure:"));
    }

    #[test]
    fn grid_is_aligned() {
        let g = grid("h", 1, |p, q| (p + 10 * q).to_string());
        let widths: Vec<usize> = g.lines().skip(1).map(|l| l.len()).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]), "{g}");
    }
}
