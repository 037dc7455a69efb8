use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::IdentityKind;
use crate::qseries::{Lift, ParamPoint, QSeries};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One row of a coefficient comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpRow {
    pub power: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

pub(crate) fn dump_rows(lhs: &QSeries, rhs: &QSeries) -> Vec<DumpRow> {
    lhs.coeffs()
        .iter()
        .zip(rhs.coeffs())
        .enumerate()
        .map(|(power, (l, r))| DumpRow { power, lhs: l.clone(), rhs: r.clone() })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: String,
    pub kind: IdentityKind,
    pub point: ParamPoint,
    /// Parameters multiplied by `q` for the exact checks of this entry.
    pub lift: Lift,
    pub order: usize,
    pub depth: usize,
    pub status: Status,
    pub first_mismatch_power: Option<usize>,
    /// First power where the depth-`depth` approximant differs from the target (CF kinds).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contact: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Set on every report of an entry whose results disagreed across sample points.
    #[serde(default)]
    pub suspected_cancellation: bool,
    /// True for the extra points run after a disagreement.
    #[serde(default)]
    pub escalation: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dump: Vec<DumpRow>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub(crate) fn set_elapsed(&mut self, d: Duration) {
        self.elapsed_ms = Some(d.as_secs_f64() * 1000.0);
    }

    /// `PASS RR_CF a=1,b=...,l=... order=40 depth=8 (title)`.
    pub fn line(&self, title: &str) -> String {
        let mut s = format!(
            "{} {} {} order={} depth={}",
            match self.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            },
            self.id,
            self.point,
            self.order,
            self.depth
        );
        if let Some(c) = self.contact {
            let _ = write!(s, " contact={c}");
        }
        if let Some(m) = self.first_mismatch_power {
            let _ = write!(s, " first_mismatch=q^{m}");
        }
        if let Some(d) = &self.detail {
            let _ = write!(s, " [{d}]");
        }
        if self.escalation {
            s.push_str(" (escalation)");
        }
        if self.suspected_cancellation {
            s.push_str(" (suspected cancellation)");
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = write!(s, " {ms:.1}ms");
        }
        let _ = write!(s, "  {title}");
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub from: String,
    pub to: String,
    pub substitution: String,
    pub point: ParamPoint,
    pub order: usize,
    pub status: Status,
    pub first_mismatch_power: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ReductionReport {
    pub fn line(&self) -> String {
        let mut s = format!(
            "{} {} -> {} at {} ({}) order={}",
            if self.status == Status::Pass { "PASS" } else { "FAIL" },
            self.from,
            self.to,
            self.substitution,
            self.point,
            self.order
        );
        if let Some(m) = self.first_mismatch_power {
            let _ = write!(s, " first_mismatch=q^{m}");
        }
        if let Some(d) = &self.detail {
            let _ = write!(s, " [{d}]");
        }
        s
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunInfo {
    pub seed: u64,
    pub points: usize,
    pub order: usize,
    pub depth: usize,
}

/// Everything a verification run produces. Serializes to the report file schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub run: RunInfo,
    pub reports: Vec<IdentityReport>,
    #[serde(default)]
    pub reductions: Vec<ReductionReport>,
    pub summary: Summary,
}

impl RunReport {
    pub fn new(run: RunInfo, reports: Vec<IdentityReport>, reductions: Vec<ReductionReport>) -> Self {
        let mut summary = Summary::default();
        for st in reports.iter().map(|r| r.status).chain(reductions.iter().map(|r| r.status)) {
            match st {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped => summary.skip += 1,
            }
        }
        RunReport { run, reports, reductions, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Tab-separated: one line per report, then a coefficient dump per failure.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("id\tpoint\torder\tdepth\tstatus\tfirst_mismatch_power\tcontact\n");
        for r in &self.reports {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{:?}\t{}\t{}",
                r.id,
                r.point,
                r.order,
                r.depth,
                r.status,
                r.first_mismatch_power.map_or(String::new(), |m| m.to_string()),
                r.contact.map_or(String::new(), |m| m.to_string())
            );
        }
        for r in self.reports.iter().filter(|r| !r.dump.is_empty()) {
            let _ = writeln!(out, "\n# {} {} {}", r.id, r.point, r.detail.as_deref().unwrap_or(""));
            out.push_str(&dump_tsv(&r.dump));
        }
        out
    }
}

/// `power\tlhs\trhs` rows.
pub fn dump_tsv(rows: &[DumpRow]) -> String {
    let mut out = String::from("power\tlhs\trhs\n");
    for row in rows {
        let _ = writeln!(out, "{}\t{}\t{}", row.power, row.lhs, row.rhs);
    }
    out
}
