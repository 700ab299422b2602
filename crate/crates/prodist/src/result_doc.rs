//! Solver output: the result document (JSON) and the per-generation trace
//! (CSV).
//!
//! Every float is rounded to 12 significant digits before it is written, so
//! a document that is loaded and written again comes out byte for byte the
//! same.

use prodist_core::nsga2::GenerationRecord;
use prodist_core::{CostBreakdown, FlowPlan, SolveResult};
use serde::{Deserialize, Serialize};

/// Rounds to 12 significant digits. Negative zero becomes zero.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostDoc {
    pub raw_cost: f64,
    pub plant_to_dc_cost: f64,
    pub holding_cost: f64,
    pub dc_to_retailer_cost: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanDoc {
    pub cost: CostDoc,
    /// suppliers x plants
    pub raw_flow: Vec<Vec<f64>>,
    /// plants x DCs
    pub plant_dc_flow: Vec<Vec<f64>>,
    /// DCs x retailers
    pub dc_retailer_flow: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontPoint {
    pub cost: f64,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDoc {
    pub terminated_by: String,
    pub generations_run: usize,
    pub best_feasible: Option<PlanDoc>,
    /// Final non-dominated objectives, by cost then violation.
    pub front: Vec<FrontPoint>,
}

impl From<&CostBreakdown> for CostDoc {
    fn from(c: &CostBreakdown) -> Self {
        Self {
            raw_cost: c.raw_cost,
            plant_to_dc_cost: c.plant_to_dc_cost,
            holding_cost: c.holding_cost,
            dc_to_retailer_cost: c.dc_to_retailer_cost,
            total: c.total,
        }
    }
}

fn plan_doc(plan: &FlowPlan, cost: &CostBreakdown) -> PlanDoc {
    PlanDoc {
        cost: cost.into(),
        raw_flow: plan.raw_flow.to_rows(),
        plant_dc_flow: plan.plant_dc_flow.to_rows(),
        dc_retailer_flow: plan.dc_retailer_flow.to_rows(),
    }
}

impl From<&SolveResult> for ResultDoc {
    fn from(result: &SolveResult) -> Self {
        let mut front: Vec<FrontPoint> = result
            .final_front
            .iter()
            .map(|ind| FrontPoint {
                cost: ind.objectives[0],
                violation: ind.objectives[1],
            })
            .collect();
        front.sort_by(|a, b| {
            a.cost
                .total_cmp(&b.cost)
                .then(a.violation.total_cmp(&b.violation))
        });
        Self {
            terminated_by: result.terminated_by.as_str().to_string(),
            generations_run: result.generations_run,
            best_feasible: result
                .best_feasible
                .as_ref()
                .map(|b| plan_doc(&b.plan, &b.cost)),
            front,
        }
    }
}

fn round_rows(rows: &mut [Vec<f64>]) {
    rows.iter_mut().flatten().for_each(|x| *x = round12(*x));
}

impl ResultDoc {
    /// Copy with every float rounded by [`round12`].
    pub fn canonical(&self) -> Self {
        let mut doc = self.clone();
        if let Some(plan) = &mut doc.best_feasible {
            let c = &mut plan.cost;
            for x in [
                &mut c.raw_cost,
                &mut c.plant_to_dc_cost,
                &mut c.holding_cost,
                &mut c.dc_to_retailer_cost,
                &mut c.total,
            ] {
                *x = round12(*x);
            }
            round_rows(&mut plan.raw_flow);
            round_rows(&mut plan.plant_dc_flow);
            round_rows(&mut plan.dc_retailer_flow);
        }
        for p in &mut doc.front {
            p.cost = round12(p.cost);
            p.violation = round12(p.violation);
        }
        doc
    }

    /// Canonical pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(&self.canonical()).expect("result documents serialize");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

pub const TRACE_HEADER: [&str; 5] = [
    "generation",
    "best_feasible_cost",
    "mean_cost",
    "min_violation",
    "feasible_count",
];

/// One row per generation. The cost cell is empty until a feasible plan
/// has been seen.
pub fn trace_to_csv(trace: &[GenerationRecord]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(TRACE_HEADER).expect("writing to memory");
    for rec in trace {
        writer
            .write_record([
                rec.generation.to_string(),
                rec.best_feasible_cost
                    .map_or(String::new(), |c| round12(c).to_string()),
                round12(rec.mean_cost).to_string(),
                round12(rec.min_violation).to_string(),
                rec.feasible_count.to_string(),
            ])
            .expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
}
