//! Parameter, verification and recovery reports.
//!
//! Every number carries a label stating how it was obtained: `formula`,
//! `rank-verified`, `oracle-verified`, or `flagged-inconsistency` when a
//! commonly quoted value disagrees with the computed one.

use std::fmt::Write as _;

use serde::Serialize;

use hlrc::recovery::RecoveryReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Labeled {
    pub value: i64,
    pub label: String,
    /// `true` when the value is a lower bound rather than exact.
    pub lower_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelRow {
    pub level: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub n: u64,
    pub s: u64,
    pub delta: u64,
    pub t: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_printed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamsReport {
    pub code: String,
    pub field: String,
    pub n: Labeled,
    pub k_formula: u64,
    pub k_rank: usize,
    pub d: Labeled,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub localities: Vec<(String, u32, u32)>,
    pub levels: Vec<LevelRow>,
    pub flags: Vec<String>,
    pub warnings: Vec<String>,
}

impl ParamsReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let d_str = if self.d.lower_bound { format!(">={}", self.d.value) } else { self.d.value.to_string() };
        writeln!(s, "code {}", self.code).unwrap();
        writeln!(s, "field {}", self.field).unwrap();
        writeln!(s, "parameters [{}, {}, {}]", self.n.value, self.k_rank, d_str).unwrap();
        writeln!(s, "n {} [{}]", self.n.value, self.n.label).unwrap();
        writeln!(s, "k {} [formula] {} [rank-verified]", self.k_formula, self.k_rank).unwrap();
        writeln!(s, "d {} [{}]", d_str, self.d.label).unwrap();
        for (label, r, rho) in &self.localities {
            writeln!(s, "locality {label} r={r} rho={rho} [formula d-rho+1]").unwrap();
        }
        let ladder: Vec<String> = self.levels.iter().map(|l| format!("({}, {}, {})", l.n, l.s, l.delta)).collect();
        writeln!(s, "hierarchy [{}]", ladder.join(", ")).unwrap();
        for l in &self.levels {
            let dim = l.dim.map(|d| format!(" dim={d}")).unwrap_or_default();
            writeln!(s, "level {}{} n={} s={} delta={} t={} [formula]", l.level, dim, l.n, l.s, l.delta, l.t).unwrap();
            if let Some(tp) = l.t_printed {
                writeln!(
                    s,
                    "level {} t={} [flagged-inconsistency: quoted (q^(m+1-j)-1)/(q-1) counts lines in a flat one dimension larger; within-flat line count is {}]",
                    l.level, tp, l.t
                )
                .unwrap();
            }
        }
        for f in &self.flags {
            writeln!(s, "flag [flagged-inconsistency] {f}").unwrap();
        }
        for w in &self.warnings {
            writeln!(s, "warning {w}").unwrap();
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    NotApplicable,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub label: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub code: String,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    /// 0 if every check passed, 1 if any failed, 3 if some were skipped.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            1
        } else if self.checks.iter().any(|c| c.status == Status::Skipped) {
            3
        } else {
            0
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("hlrc-verify 1\ncode {}\n", self.code);
        for c in &self.checks {
            writeln!(s, "check {} {} [{}] {}", c.name, c.status.as_str(), c.label, c.detail).unwrap();
        }
        let overall = match self.exit_code() {
            0 => "pass",
            1 => "fail",
            _ => "incomplete",
        };
        writeln!(s, "overall {overall}").unwrap();
        s
    }
}

fn list(v: &[usize]) -> String {
    if v.is_empty() {
        "-".to_string()
    } else {
        v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }
}

/// Line-oriented recovery report.
pub fn recovery_text(report: &RecoveryReport) -> String {
    let mut s = String::from("hlrc-recovery 1\n");
    writeln!(s, "success {}", report.success).unwrap();
    writeln!(s, "symbols-accessed {}", report.symbols_accessed).unwrap();
    writeln!(s, "peeling-rounds {}", report.peeling_rounds).unwrap();
    for e in &report.events {
        let dir = e.direction.map_or("-".to_string(), |d| d.to_string());
        writeln!(
            s,
            "repair level={} direction={} group={} recovered={} read={}",
            e.level,
            dir,
            list(&e.group),
            list(&e.recovered),
            list(&e.read)
        )
        .unwrap();
    }
    writeln!(s, "residual {}", list(&report.residual)).unwrap();
    s
}
