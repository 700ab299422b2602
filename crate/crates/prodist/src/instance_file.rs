//! JSON instance files.

use std::fmt;

use prodist_core::{validate_instance, Matrix, NetworkInstance};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counts {
    pub suppliers: usize,
    pub plants: usize,
    pub dcs: usize,
    pub retailers: usize,
}

/// On-disk shape of a [`NetworkInstance`]. Matrices are nested rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub counts: Counts,
    pub supplier_capacity: Vec<f64>,
    pub plant_capacity: Vec<f64>,
    pub dc_capacity: Vec<f64>,
    pub demand: Vec<f64>,
    pub raw_unit_cost: Vec<f64>,
    pub holding_unit_cost: Vec<f64>,
    /// plants x DCs
    pub plant_dc_unit_cost: Vec<Vec<f64>>,
    /// DCs x retailers
    pub dc_retailer_unit_cost: Vec<Vec<f64>>,
    pub utilization: f64,
    #[serde(default)]
    pub strict_per_dc: bool,
}

impl From<&NetworkInstance> for InstanceDoc {
    fn from(inst: &NetworkInstance) -> Self {
        Self {
            counts: Counts {
                suppliers: inst.num_suppliers,
                plants: inst.num_plants,
                dcs: inst.num_dcs,
                retailers: inst.num_retailers,
            },
            supplier_capacity: inst.supplier_capacity.clone(),
            plant_capacity: inst.plant_capacity.clone(),
            dc_capacity: inst.dc_capacity.clone(),
            demand: inst.demand.clone(),
            raw_unit_cost: inst.raw_unit_cost.clone(),
            holding_unit_cost: inst.holding_unit_cost.clone(),
            plant_dc_unit_cost: inst.plant_dc_unit_cost.to_rows(),
            dc_retailer_unit_cost: inst.dc_retailer_unit_cost.to_rows(),
            utilization: inst.utilization,
            strict_per_dc: inst.strict_per_dc,
        }
    }
}

/// One problem found in an instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    /// 1-based line of the offending key, when it could be located.
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}", join_issues(.0))]
    Invalid(Vec<Issue>),
}

impl InstanceError {
    /// True when some issue concerns the named top-level key.
    pub fn mentions(&self, field: &str) -> bool {
        match self {
            InstanceError::Syntax { message, .. } => message.contains(field),
            InstanceError::Invalid(issues) => issues.iter().any(|i| i.field == field),
        }
    }
}

fn join_issues(issues: &[Issue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

/// Line of the first `"key":` in `text`.
fn locate_key(text: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    text.lines().enumerate().find_map(|(n, line)| {
        let at = line.find(&quoted)?;
        line[at + quoted.len()..]
            .trim_start()
            .starts_with(':')
            .then_some(n + 1)
    })
}

/// Parses and validates an instance.
pub fn load_instance(text: &str) -> Result<NetworkInstance, InstanceError> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| InstanceError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let mut issues = Vec::new();
    let mut matrix = |field: &str, rows: &[Vec<f64>]| {
        Matrix::from_rows(rows).unwrap_or_else(|| {
            issues.push(Issue {
                line: locate_key(text, field),
                field: field.to_string(),
                message: format!("{field}: rows have different lengths"),
            });
            Matrix::zeros(0, 0)
        })
    };
    let plant_dc_unit_cost = matrix("plant_dc_unit_cost", &doc.plant_dc_unit_cost);
    let dc_retailer_unit_cost = matrix("dc_retailer_unit_cost", &doc.dc_retailer_unit_cost);

    let instance = NetworkInstance {
        num_suppliers: doc.counts.suppliers,
        num_plants: doc.counts.plants,
        num_dcs: doc.counts.dcs,
        num_retailers: doc.counts.retailers,
        supplier_capacity: doc.supplier_capacity,
        plant_capacity: doc.plant_capacity,
        dc_capacity: doc.dc_capacity,
        demand: doc.demand,
        raw_unit_cost: doc.raw_unit_cost,
        holding_unit_cost: doc.holding_unit_cost,
        plant_dc_unit_cost,
        dc_retailer_unit_cost,
        utilization: doc.utilization,
        strict_per_dc: doc.strict_per_dc,
    };

    let ragged: Vec<String> = issues.iter().map(|i| i.field.clone()).collect();
    for breach in validate_instance(&instance).breaches {
        let field = breach.field.name();
        // A ragged matrix also fails the shape check; report it once.
        if ragged.iter().any(|f| f == field) {
            continue;
        }
        issues.push(Issue {
            line: locate_key(text, field),
            field: field.to_string(),
            message: breach.to_string(),
        });
    }
    if issues.is_empty() {
        Ok(instance)
    } else {
        Err(InstanceError::Invalid(issues))
    }
}

/// Pretty JSON with a trailing newline. Numbers use the shortest form that
/// parses back to the same `f64`, so loading the text returns an equal
/// instance.
pub fn instance_to_json(instance: &NetworkInstance) -> String {
    let mut text = serde_json::to_string_pretty(&InstanceDoc::from(instance))
        .expect("instance documents always serialize");
    text.push('\n');
    text
}
