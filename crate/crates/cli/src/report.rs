use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// The single document a run writes to stdout.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Value,
    pub outputs: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &'static str, inputs: Value) -> Self {
        Report { command, inputs, outputs: Value::Null, checks: vec![], passed: true }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) -> &mut Self {
        self.checks.push(Check { name: name.into(), passed, detail: None });
        self.passed &= passed;
        self
    }

    pub fn check_with(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> &mut Self {
        self.checks.push(Check { name: name.into(), passed, detail: Some(detail.into()) });
        self.passed &= passed;
        self
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            match &c.detail {
                Some(d) => out.push_str(&format!("{tag} {}: {d}\n", c.name)),
                None => out.push_str(&format!("{tag} {}\n", c.name)),
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!("{}: {} checks, {failed} failed\n", self.command, self.checks.len()));
        out
    }
}
