//! Verification reports shared by the command-line front end.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultLine {
    pub claim: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

/// `{command, inputs, results, seed, elapsed_ms}`. Values are rendered as
/// exact strings so a report parses back to the same bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Vec<ResultLine>,
    pub seed: u64,
    pub elapsed_ms: u64,
    /// Extra lines for the table view; not part of the JSON schema.
    #[serde(skip)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: Vec::new(),
            seed,
            elapsed_ms: 0,
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    /// Passes iff the two renderings are identical.
    pub fn expect_eq(&mut self, claim: impl Into<String>, expected: impl fmt::Display, computed: impl fmt::Display) {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let pass = expected == computed;
        self.results.push(ResultLine { claim: claim.into(), expected, computed, pass });
    }

    /// For claims whose pass condition is not string equality, such as bounds.
    pub fn expect_that(
        &mut self,
        claim: impl Into<String>,
        expected: impl fmt::Display,
        computed: impl fmt::Display,
        pass: bool,
    ) {
        self.results.push(ResultLine {
            claim: claim.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            pass,
        });
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.command)?;
        for (k, v) in &self.inputs {
            writeln!(f, "  {k} = {v}")?;
        }
        let w_claim = self.results.iter().map(|r| r.claim.chars().count()).max().unwrap_or(5).max(5);
        let w_exp = self.results.iter().map(|r| r.expected.chars().count()).max().unwrap_or(8).max(8);
        let w_comp = self.results.iter().map(|r| r.computed.chars().count()).max().unwrap_or(8).max(8);
        writeln!(f, "  {:<w_claim$}  {:<w_exp$}  {:<w_comp$}  result", "claim", "expected", "computed")?;
        for r in &self.results {
            writeln!(
                f,
                "  {:<w_claim$}  {:<w_exp$}  {:<w_comp$}  {}",
                r.claim,
                r.expected,
                r.computed,
                if r.pass { "PASS" } else { "FAIL" }
            )?;
        }
        for n in &self.notes {
            writeln!(f, "  {n}")?;
        }
        let passed = self.results.iter().filter(|r| r.pass).count();
        write!(f, "  {passed}/{} passed, seed {}, {} ms", self.results.len(), self.seed, self.elapsed_ms)
    }
}
