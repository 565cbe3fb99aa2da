use serde::{Deserialize, Serialize};
use verba::family::FamilyReport;
use verba::verdict::{Certificate, ChiralityVerdict, Method, Status};

pub const TOOL_VERSION: &str = concat!("verba ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckStats {
    pub elapsed_ms: u64,
    pub map_cap: u64,
    pub tuple_budget: u64,
    /// Stages run, in order.
    pub stages: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictReport {
    pub group_label: String,
    pub order: usize,
    pub verdict: Status,
    pub method: Method,
    pub certificate: Certificate,
    pub stats: CheckStats,
    pub tool_version: String,
}

impl VerdictReport {
    pub fn new(group_label: String, order: usize, v: ChiralityVerdict, stats: CheckStats) -> Self {
        VerdictReport {
            group_label,
            order,
            verdict: v.status,
            method: v.method,
            certificate: v.certificate,
            stats,
            tool_version: TOOL_VERSION.into(),
        }
    }

    pub fn verdict(&self) -> ChiralityVerdict {
        ChiralityVerdict {
            status: self.verdict,
            method: self.method,
            certificate: self.certificate.clone(),
        }
    }
}
