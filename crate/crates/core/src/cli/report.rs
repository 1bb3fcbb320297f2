use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::config::JobSpec;
use crate::abgroup::GroupShape;
use crate::lcft::Verdict;

/// Where the expected value of a check comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// A theorem about the objects being computed.
    Theorem,
    /// An independent computation or closed formula.
    Oracle,
    /// A consistency condition between two computations.
    Consistency,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedGroup {
    pub name: String,
    pub invariants: GroupShape,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub suite: String,
    /// The statement being exercised.
    pub anchor: String,
    pub inputs: Vec<(String, String)>,
    pub groups: Vec<NamedGroup>,
    pub expected: String,
    pub provenance: Provenance,
    pub verdict: Verdict,
    pub detail: String,
    pub elapsed_us: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub job: JobSpec,
    pub e: usize,
    pub f: usize,
    pub galois_order: usize,
    pub checks: Vec<CheckReport>,
    /// Checks not applicable to this extension, with the reason.
    pub skipped: Vec<(String, String)>,
    pub summary: Summary,
}

impl Summary {
    pub fn of(checks: &[CheckReport]) -> Summary {
        let count = |v: Verdict| checks.iter().filter(|c| c.verdict == v).count();
        let (pass, fail, inconclusive) = (count(Verdict::Pass), count(Verdict::Fail), count(Verdict::Inconclusive));
        let verdict = if fail > 0 {
            Verdict::Fail
        } else if inconclusive > 0 {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
        Summary {
            pass,
            fail,
            inconclusive,
            verdict,
        }
    }
}

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

pub fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Inconclusive => "INCONCLUSIVE",
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let ext = if self.job.extension_text.is_empty() {
            "trivial"
        } else {
            &self.job.extension_text
        };
        let _ = writeln!(s, "field      {}", self.job.field_text);
        let _ = writeln!(s, "extension  {ext}");
        let _ = writeln!(
            s,
            "e = {}, f = {}, |G| = {}, precision {}, r_max {}, n_max {}, suite {}",
            self.e, self.f, self.galois_order, self.job.precision, self.job.r_max, self.job.n_max, self.job.suite
        );
        for c in &self.checks {
            let _ = writeln!(
                s,
                "[{}] {} ({} ms)",
                verdict_word(c.verdict),
                c.name,
                c.elapsed_us / 1000
            );
            let _ = writeln!(s, "    {}", c.anchor);
            if !c.inputs.is_empty() {
                let ins: Vec<String> = c.inputs.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                let _ = writeln!(s, "    inputs: {}", ins.join(", "));
            }
            for g in &c.groups {
                let _ = writeln!(s, "    {} ≅ {}", g.name, g.invariants);
            }
            let prov = match c.provenance {
                Provenance::Theorem => "theorem",
                Provenance::Oracle => "oracle",
                Provenance::Consistency => "consistency",
            };
            let _ = writeln!(s, "    expected ({prov}): {}", c.expected);
            if !c.detail.is_empty() {
                let _ = writeln!(s, "    {}", c.detail);
            }
        }
        for (name, why) in &self.skipped {
            let _ = writeln!(s, "[SKIP] {name}: {why}");
        }
        let _ = writeln!(
            s,
            "summary: {} pass, {} fail, {} inconclusive => {}",
            self.summary.pass,
            self.summary.fail,
            self.summary.inconclusive,
            verdict_word(self.summary.verdict)
        );
        s
    }
}
