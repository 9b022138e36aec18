use std::fmt::Write as _;

use fclosure_core::graded::{BranchReport, ClosureMembership, Reducedness, SliceProbe};
use fclosure_core::oracle::Crosscheck;
use fclosure_core::semigroup::{Certificate, EventualMembership, FNilpotencyReport, FVerdict};
use serde::{Deserialize, Serialize};

use crate::request::AnalysisRequest;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub degree: u32,
    pub e_max: u32,
    pub agree: bool,
    pub skipped: bool,
    pub probes: Vec<SliceProbe>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AnalysisResult {
    Branches {
        report: BranchReport,
        closure_probe: ProbeSummary,
    },
    Hypersurface {
        form: String,
        oracle_branches: usize,
        report: BranchReport,
        crosscheck: Crosscheck,
    },
    Fnilpotency {
        semigroup: String,
        report: FNilpotencyReport,
    },
    Fte {
        semigroup: String,
        ideal: Vec<i64>,
        fte: u32,
        e0: Option<u32>,
        frobenius_number: i64,
    },
    TightMembership {
        semigroup: String,
        ideal: Vec<Vec<i64>>,
        element: Vec<i64>,
        member: bool,
        e0: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// False when the branch formula disagrees with the multiplicity, the
    /// oracle, or the direct Frobenius-closure probe.
    pub consistent: bool,
    pub reducedness: Option<Reducedness>,
    pub caps_hit: Vec<String>,
    pub notes: Vec<String>,
}

impl Diagnostics {
    pub fn new() -> Self {
        Diagnostics { consistent: true, reducedness: None, caps_hit: Vec::new(), notes: Vec::new() }
    }
}

impl Default for Diagnostics {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: String,
    pub request: AnalysisRequest,
    pub result: AnalysisResult,
    pub diagnostics: Diagnostics,
}

impl AnalysisReport {
    pub fn new(request: AnalysisRequest, result: AnalysisResult, diagnostics: Diagnostics) -> Self {
        AnalysisReport { schema_version: SCHEMA_VERSION.to_string(), request, result, diagnostics }
    }

    pub fn exit_code(&self) -> i32 {
        if self.diagnostics.consistent {
            0
        } else {
            2
        }
    }

    /// Pretty JSON with keys sorted at every level.
    pub fn to_json(&self) -> String {
        // serde_json::Value keeps objects in a BTreeMap, which sorts keys
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn render(&self) -> String {
        match self.request.format {
            crate::Format::Json => self.to_json(),
            crate::Format::Text => self.to_text(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut t = Table::default();
        t.row("mode", self.request.mode);
        match &self.result {
            AnalysisResult::Branches { report, closure_probe } => {
                branch_rows(&mut t, report);
                if closure_probe.skipped {
                    t.row("closure probe", "skipped");
                } else {
                    t.row(
                        "closure probe",
                        format!(
                            "degree {}, e <= {}: {}",
                            closure_probe.degree,
                            closure_probe.e_max,
                            if closure_probe.agree { "agrees with slice" } else { "DISAGREES with slice" }
                        ),
                    );
                    for p in &closure_probe.probes {
                        let c = match p.closure {
                            ClosureMembership::In(e) => format!("in (x^n)^F at e = {e}"),
                            ClosureMembership::NotInUpTo(e) => format!("not in (x^n)^F up to e = {e}"),
                        };
                        let s = if p.in_slice { "in (x^n)+m^(n+1)" } else { "outside (x^n)+m^(n+1)" };
                        t.row(&format!("  {}", p.monomial), format!("{s}; {c}"));
                    }
                }
            }
            AnalysisResult::Hypersurface { form, oracle_branches, report, crosscheck } => {
                t.row("form", form);
                branch_rows(&mut t, report);
                t.row("root-count oracle", oracle_branches);
                t.row(
                    "crosscheck",
                    match crosscheck {
                        Crosscheck::Match { .. } => "match".to_string(),
                        Crosscheck::Mismatch { formula, oracle } => format!("MISMATCH formula {formula} vs oracle {oracle}"),
                        Crosscheck::NoOracle => "no oracle".to_string(),
                    },
                );
            }
            AnalysisResult::Fnilpotency { semigroup, report } => {
                t.row("semigroup", semigroup);
                t.row("p", report.p);
                t.row("hilbert basis", vectors(&report.hilbert_basis));
                t.row("verdict", verdict(&report.verdict));
                for ev in &report.per_element {
                    t.row(&format!("  {}", vector(&ev.element)), eventual(&ev.result));
                }
            }
            AnalysisResult::Fte { semigroup, ideal, fte, e0, frobenius_number } => {
                t.row("semigroup", semigroup);
                t.row("frobenius number", frobenius_number);
                t.row("ideal", vector(ideal));
                t.row("fte", fte);
                t.row("e0", e0.map_or("undetermined".to_string(), |e| e.to_string()));
            }
            AnalysisResult::TightMembership { semigroup, ideal, element, member, e0 } => {
                t.row("semigroup", semigroup);
                t.row("ideal", vectors(ideal));
                t.row("element", vector(element));
                t.row("e0", e0);
                t.row("in tight closure", member);
            }
        }
        if let Some(r) = self.diagnostics.reducedness {
            let r = match r {
                Reducedness::Verified => "verified",
                Reducedness::Unverified => "unverified",
                Reducedness::NotReduced => "not reduced",
            };
            t.row("reducedness", r);
        }
        for c in &self.diagnostics.caps_hit {
            t.row("cap", c);
        }
        for n in &self.diagnostics.notes {
            t.row("note", n);
        }
        t.row("consistent", self.diagnostics.consistent);
        t.finish()
    }
}

fn branch_rows(t: &mut Table, r: &BranchReport) {
    t.row("ring", &r.ring);
    t.row("field", &r.field);
    t.row("reduction", format!("{} (index {}, over degree-{} extension)", r.reduction, r.reduction_index, r.extension_degree));
    t.row("n", r.n_used);
    t.row("dim m^n/((x^n)+m^(n+1))", r.dim_quotient);
    t.row("branches (formula)", r.branches_formula);
    t.row("branches (multiplicity)", r.branches_multiplicity);
    t.row("stabilization index", r.stabilization_index);
    t.row("branches (oracle)", r.oracle_branches.map_or("n/a".to_string(), |b| b.to_string()));
}

fn vector(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn vectors(vs: &[Vec<i64>]) -> String {
    vs.iter().map(|v| vector(v)).collect::<Vec<_>>().join(" ")
}

fn certificate(c: &Certificate) -> String {
    match c {
        Certificate::OutsideSaturation => "outside the saturation".to_string(),
        Certificate::Torsion { order, .. } => match order {
            Some(m) => format!("order {m} modulo the face group"),
            None => "not in the face group rationally".to_string(),
        },
    }
}

fn verdict(v: &FVerdict) -> String {
    match v {
        FVerdict::FNilpotent { e0 } => format!("F-nilpotent, e0 = {e0}"),
        FVerdict::NotFNilpotent { witness, certificate: c } => {
            format!("not F-nilpotent, witness {} ({})", vector(witness), certificate(c))
        }
        FVerdict::Undetermined { e_max } => format!("undetermined up to e = {e_max}"),
    }
}

fn eventual(m: &EventualMembership) -> String {
    match m {
        EventualMembership::Yes { e } => format!("p^{e}·a in A"),
        EventualMembership::No { certificate: c } => format!("never ({})", certificate(c)),
        EventualMembership::Undetermined { e_max } => format!("undetermined up to e = {e_max}"),
    }
}

#[derive(Default)]
struct Table(Vec<(String, String)>);

impl Table {
    fn row(&mut self, key: &str, value: impl std::fmt::Display) {
        self.0.push((key.to_string(), value.to_string()));
    }

    fn finish(self) -> String {
        let width = self.0.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in self.0 {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> AnalysisReport {
        let req = crate::parse_request(["fclosure", "fte", "--p", "2", "--gens", "2,3", "--ideal", "3"]).unwrap();
        crate::run(&req).unwrap()
    }

    #[test]
    fn inconsistency_maps_to_exit_two() {
        let mut r = report();
        assert_eq!(r.exit_code(), 0);
        r.diagnostics.consistent = false;
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn json_keys_are_sorted() {
        let json = report().to_json();
        let top: Vec<&str> = json.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim()).collect();
        let mut sorted = top.clone();
        sorted.sort();
        assert_eq!(top, sorted);
        assert!(json.contains("\"schema_version\": \"1\""));
    }
}
