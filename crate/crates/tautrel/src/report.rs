//! JSON verification reports and the pairing request/result wire format.

use serde::{Deserialize, Serialize};
use tautrel_core::assembly::PairingResult;
use tautrel_core::verify::VerdictEntry;

/// A single pairing request: `{"class":"B|A|Xi|third","g":..,"n":..,"m":..,"b":[..]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PairingRequest {
    pub class: String,
    pub g: u32,
    pub n: u32,
    pub m: u32,
    pub b: Vec<u32>,
}

/// The corresponding result: `{"degree":..,"u_exp":..,"poly":".."}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PairingResponse {
    pub degree: Option<u32>,
    pub u_exp: Option<i64>,
    pub poly: String,
}

impl PairingResponse {
    pub fn from_result(r: &PairingResult) -> Self {
        PairingResponse { degree: r.degree, u_exp: r.u_exp, poly: r.poly.render() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub suite: String,
    pub engine_version: String,
    pub calibration: CalibrationInfo,
    pub instances: Vec<InstanceReport>,
    pub summary: Summary,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CalibrationInfo {
    pub max_g: u32,
    pub max_k: u32,
    pub sources: Vec<String>,
    /// Instances consumed by base-table fitting, excluded from acceptance.
    /// Empty for the shipped calibration, which uses no instance fitting.
    pub excluded_instances: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InstanceReport {
    pub check: String,
    pub g: u32,
    pub n: u32,
    pub m: u32,
    pub b: Vec<u32>,
    pub bound: i64,
    pub computed_degree: Option<i64>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly_if_fail: Option<String>,
    pub time_us: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub elapsed_ms: u64,
}

impl InstanceReport {
    pub fn from_entry(e: &VerdictEntry, time_us: u64) -> Self {
        InstanceReport {
            check: e.check.to_string(),
            g: e.g,
            n: e.n,
            m: e.m,
            b: e.b.clone(),
            bound: e.bound,
            computed_degree: e.computed_degree,
            verdict: if e.pass { "PASS".to_string() } else { "FAIL".to_string() },
            poly_if_fail: e.poly_if_fail.clone(),
            time_us,
        }
    }

    pub fn key(&self) -> String {
        let bs: Vec<String> = self.b.iter().map(|x| x.to_string()).collect();
        format!("{}|g={}|n={}|m={}|b={}", self.check, self.g, self.n, self.m, bs.join(","))
    }
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    /// Canonical JSON with every timing field removed; bit-identical across
    /// thread counts and cache states.
    pub fn canonical_without_timings(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.get_mut("summary").and_then(|s| s.as_object_mut()) {
            obj.remove("elapsed_ms");
        }
        if let Some(arr) = v.get_mut("instances").and_then(|s| s.as_array_mut()) {
            for inst in arr {
                if let Some(obj) = inst.as_object_mut() {
                    obj.remove("time_us");
                }
            }
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary_line(&self) -> String {
        if self.all_pass() {
            format!("PASS 100% ({} instances)", self.summary.total)
        } else {
            format!(
                "FAIL {}/{} instances (suite {})",
                self.summary.failed, self.summary.total, self.suite
            )
        }
    }
}
