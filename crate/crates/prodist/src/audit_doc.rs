//! JSON rendering of schedule audits.

use prodist_core::scenario::{CapacityBreach, Entity, ScheduleAudit};
use serde::Serialize;

#[derive(Debug, Serialize)]
struct BreachDoc<'a> {
    kind: &'static str,
    /// 1-based position in the table.
    index: usize,
    label: &'a str,
    total: u64,
    capacity: f64,
    max_utilization: Option<f64>,
}

#[derive(Debug, Serialize)]
struct AuditDoc<'a> {
    scenario: &'static str,
    strict_per_dc: bool,
    grand_total_by_rows: u64,
    grand_total_by_columns: u64,
    totals_agree: bool,
    plant_totals: &'a [u64],
    dc_totals: &'a [u64],
    network_storage: f64,
    breaches: Vec<BreachDoc<'a>>,
}

fn breach_doc(b: &CapacityBreach) -> BreachDoc<'_> {
    let (kind, index) = match b.entity {
        Entity::Plant(k) => ("plant", k + 1),
        Entity::Dc(j) => ("dc", j + 1),
    };
    BreachDoc {
        kind,
        index,
        label: &b.label,
        total: b.total,
        capacity: b.capacity,
        max_utilization: b.max_utilization,
    }
}

/// Pretty JSON with a trailing newline.
pub fn audit_to_json(audit: &ScheduleAudit) -> String {
    let doc = AuditDoc {
        scenario: audit.scenario.as_str(),
        strict_per_dc: audit.strict_per_dc,
        grand_total_by_rows: audit.grand_total_by_rows,
        grand_total_by_columns: audit.grand_total_by_columns,
        totals_agree: audit.totals_agree(),
        plant_totals: &audit.plant_totals,
        dc_totals: &audit.dc_totals,
        network_storage: audit.network_storage,
        breaches: audit.breaches.iter().map(breach_doc).collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("audit documents serialize");
    text.push('\n');
    text
}
