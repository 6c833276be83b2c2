use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Nothing to measure, e.g. an all-zero input; counts as a pass.
    Degenerate,
}

/// A datum backing a verdict: the failing point, the largest ratio seen,
/// a per-point tail estimate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub label: String,
    pub value: f64,
    pub detail: String,
}

impl Witness {
    pub fn new(label: impl Into<String>, value: f64, detail: impl Into<String>) -> Self {
        Witness {
            label: label.into(),
            value,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub criterion: String,
    /// The inequality being certified, in words.
    pub claim: String,
    pub verdict: Verdict,
    /// Fitted growth exponent, when the criterion fits one.
    pub exponent: Option<f64>,
    pub constants: BTreeMap<String, f64>,
    pub witnesses: Vec<Witness>,
    pub tolerances: BTreeMap<String, f64>,
    /// Column names of `series`.
    pub series_columns: [String; 2],
    pub series: Vec<(f64, f64)>,
}

impl ConvergenceReport {
    pub fn new(criterion: &str, claim: &str, columns: [&str; 2]) -> Self {
        ConvergenceReport {
            criterion: criterion.into(),
            claim: claim.into(),
            verdict: Verdict::Pass,
            exponent: None,
            constants: BTreeMap::new(),
            witnesses: Vec::new(),
            tolerances: BTreeMap::new(),
            series_columns: columns.map(String::from),
            series: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    /// Records a failure together with its witness.
    pub fn fail(&mut self, witness: Witness) {
        self.verdict = Verdict::Fail;
        self.witnesses.push(witness);
    }

    pub fn constant(&mut self, name: &str, value: f64) {
        self.constants.insert(name.into(), value);
    }

    pub fn tolerance(&mut self, name: &str, value: f64) {
        self.tolerances.insert(name.into(), value);
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// The series as two-column CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{}\n", self.series_columns[0], self.series_columns[1]);
        for (x, y) in &self.series {
            writeln!(out, "{x},{y:e}").expect("writing to a string");
        }
        out
    }
}
