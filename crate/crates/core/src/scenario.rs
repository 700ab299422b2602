//! The three capacity scenarios, audits of production schedules against
//! them, and the throughput comparison between schedules.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::model::NetworkInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioName {
    /// Current network: four plants, four DCs.
    Baseline,
    /// Baseline plants with every DC enlarged to 15,000 cases.
    DcExpansion,
    /// Seven plants and eight DCs, no demand limit.
    NetworkExpansion,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 3] = [
        ScenarioName::Baseline,
        ScenarioName::DcExpansion,
        ScenarioName::NetworkExpansion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::Baseline => "baseline",
            ScenarioName::DcExpansion => "dc_expansion",
            ScenarioName::NetworkExpansion => "network_expansion",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown scenario `{0}` (expected baseline, dc_expansion or network_expansion)")]
pub struct UnknownScenario(pub String);

impl FromStr for ScenarioName {
    type Err = UnknownScenario;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScenarioName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| UnknownScenario(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: ScenarioName,
    pub plant_capacities: Vec<f64>,
    pub dc_capacities: Vec<f64>,
    pub notes: &'static str,
    /// Published weekly cost in TZS, kept as reference metadata only.
    pub reported_weekly_cost: f64,
}

/// A scenario's network shape with demands and unit costs still to be chosen.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceTemplate {
    pub spec: ScenarioSpec,
    /// Demand is not limited; fill it with the most the network can move.
    pub unconstrained_demand: bool,
}

/// Suppliers, retailers and unit costs that the scenarios do not fix.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketData {
    pub supplier_capacity: Vec<f64>,
    pub raw_unit_cost: Vec<f64>,
    pub holding_unit_cost: Vec<f64>,
    pub plant_dc_unit_cost: Matrix,
    pub dc_retailer_unit_cost: Matrix,
    /// Ignored for unconstrained-demand templates except for its length.
    pub demand: Vec<f64>,
    pub utilization: f64,
}

impl InstanceTemplate {
    /// Completes the template. For unconstrained-demand templates every
    /// retailer gets an equal share of `min(sum D_k / u, sum H_j)`, the most
    /// the plants can make and the DCs can hold.
    pub fn instantiate(&self, market: MarketData) -> NetworkInstance {
        let spec = &self.spec;
        let retailers = market.demand.len();
        let demand = if self.unconstrained_demand {
            let producible: f64 = spec.plant_capacities.iter().sum::<f64>() / market.utilization;
            let storable: f64 = spec.dc_capacities.iter().sum();
            let total = producible.min(storable);
            vec![total / retailers as f64; retailers]
        } else {
            market.demand
        };
        NetworkInstance {
            num_suppliers: market.supplier_capacity.len(),
            num_plants: spec.plant_capacities.len(),
            num_dcs: spec.dc_capacities.len(),
            num_retailers: retailers,
            supplier_capacity: market.supplier_capacity,
            plant_capacity: spec.plant_capacities.clone(),
            dc_capacity: spec.dc_capacities.clone(),
            demand,
            raw_unit_cost: market.raw_unit_cost,
            holding_unit_cost: market.holding_unit_cost,
            plant_dc_unit_cost: market.plant_dc_unit_cost,
            dc_retailer_unit_cost: market.dc_retailer_unit_cost,
            utilization: market.utilization,
            strict_per_dc: false,
        }
    }

    /// Runnable instance with the bundled synthetic market.
    pub fn synthetic_instance(&self) -> NetworkInstance {
        self.instantiate(synthetic_market(&self.spec))
    }
}

const BASELINE_PLANTS: [f64; 4] = [12800.0, 12000.0, 25600.0, 12800.0];

pub fn build_scenario(name: ScenarioName) -> InstanceTemplate {
    let spec = match name {
        ScenarioName::Baseline => ScenarioSpec {
            name,
            plant_capacities: BASELINE_PLANTS.to_vec(),
            dc_capacities: vec![12000.0; 4],
            notes: "current network: four plants, four DCs of 12,000 cases",
            reported_weekly_cost: 43_834_900.0,
        },
        ScenarioName::DcExpansion => ScenarioSpec {
            name,
            plant_capacities: BASELINE_PLANTS.to_vec(),
            dc_capacities: vec![15000.0; 4],
            notes: "baseline plants, every DC raised to 15,000 cases; same customers",
            reported_weekly_cost: 43_100_800.0,
        },
        ScenarioName::NetworkExpansion => ScenarioSpec {
            name,
            plant_capacities: vec![
                15000.0, 15000.0, 15000.0, 30000.0, 15000.0, 15000.0, 15000.0,
            ],
            dc_capacities: vec![15000.0; 8],
            notes: "seven plants (one of 30,000 cases), eight DCs of 15,000; no demand limit",
            reported_weekly_cost: 114_660_000.0,
        },
    };
    InstanceTemplate {
        unconstrained_demand: name == ScenarioName::NetworkExpansion,
        spec,
    }
}

/// Utilization used by the bundled runnable scenarios.
pub const SYNTHETIC_UTILIZATION: f64 = 0.95;

/// Ten retailers, 47,000 cases in total.
const SYNTHETIC_DEMAND: [f64; 10] = [
    5200.0, 4300.0, 5100.0, 4400.0, 4700.0, 5300.0, 3900.0, 4800.0, 4600.0, 4700.0,
];

/// Synthetic suppliers, retailers and unit costs (TZS per case or per raw
/// unit). Transport costs grow with the index distance between sites, laid
/// out along a line.
pub fn synthetic_market(spec: &ScenarioSpec) -> MarketData {
    let plants = spec.plant_capacities.len();
    let dcs = spec.dc_capacities.len();
    let retailers = if spec.name == ScenarioName::NetworkExpansion {
        16
    } else {
        SYNTHETIC_DEMAND.len()
    };
    let suppliers = 3;
    // Each plant can draw 36,000 raw units, enough for any plant capacity here.
    let supplier_each = 12000.0 * plants as f64;

    let position = |idx: usize, count: usize| -> f64 {
        if count == 1 {
            0.5
        } else {
            idx as f64 / (count - 1) as f64
        }
    };
    let mut plant_dc = Matrix::zeros(plants, dcs);
    for k in 0..plants {
        for j in 0..dcs {
            let gap = libm::fabs(position(k, plants) - position(j, dcs));
            plant_dc.set(k, j, libm::round(50.0 + 160.0 * gap));
        }
    }
    let mut dc_retailer = Matrix::zeros(dcs, retailers);
    for j in 0..dcs {
        for i in 0..retailers {
            let gap = libm::fabs(position(j, dcs) - position(i, retailers));
            let jitter = ((3 * j + 7 * i) % 5) as f64;
            dc_retailer.set(j, i, libm::round(30.0 + 120.0 * gap) + jitter);
        }
    }

    MarketData {
        supplier_capacity: vec![supplier_each; suppliers],
        raw_unit_cost: vec![310.0, 295.0, 330.0],
        holding_unit_cost: (0..dcs).map(|j| 35.0 + (j % 3) as f64 * 5.0).collect(),
        plant_dc_unit_cost: plant_dc,
        dc_retailer_unit_cost: dc_retailer,
        demand: if retailers == SYNTHETIC_DEMAND.len() {
            SYNTHETIC_DEMAND.to_vec()
        } else {
            vec![0.0; retailers]
        },
        utilization: SYNTHETIC_UTILIZATION,
    }
}

/// A production schedule: cases shipped, rows are DCs and columns plants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleTable {
    pub dc_labels: Vec<String>,
    pub plant_labels: Vec<String>,
    /// `cases[dc][plant]`
    pub cases: Vec<Vec<u64>>,
}

impl ScheduleTable {
    pub fn num_dcs(&self) -> usize {
        self.dc_labels.len()
    }

    pub fn num_plants(&self) -> usize {
        self.plant_labels.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entity {
    Plant(usize),
    Dc(usize),
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entity::Plant(k) => write!(f, "plant {}", k + 1),
            Entity::Dc(j) => write!(f, "DC {}", j + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityBreach {
    pub entity: Entity,
    pub label: String,
    pub total: u64,
    pub capacity: f64,
    /// For plants: the largest utilization factor `u` at which
    /// `u * total <= capacity` still holds.
    pub max_utilization: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleAudit {
    pub scenario: ScenarioName,
    pub strict_per_dc: bool,
    pub plant_totals: Vec<u64>,
    pub dc_totals: Vec<u64>,
    pub grand_total_by_rows: u64,
    pub grand_total_by_columns: u64,
    /// Sum of DC capacities.
    pub network_storage: f64,
    pub breaches: Vec<CapacityBreach>,
}

impl ScheduleAudit {
    pub fn totals_agree(&self) -> bool {
        self.grand_total_by_rows == self.grand_total_by_columns
    }

    pub fn plant_breaches(&self) -> impl Iterator<Item = &CapacityBreach> {
        self.breaches
            .iter()
            .filter(|b| matches!(b.entity, Entity::Plant(_)))
    }

    pub fn dc_breaches(&self) -> impl Iterator<Item = &CapacityBreach> {
        self.breaches
            .iter()
            .filter(|b| matches!(b.entity, Entity::Dc(_)))
    }

    /// Plain-text summary, one fact per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("scenario: {}", self.scenario));
        line(format!(
            "grand total: {} (rows) / {} (columns)",
            self.grand_total_by_rows, self.grand_total_by_columns
        ));
        line(format!("plant totals: {:?}", self.plant_totals));
        line(format!("dc totals: {:?}", self.dc_totals));
        line(format!("network storage: {}", self.network_storage));
        if self.breaches.is_empty() {
            line(String::from("capacity breaches: none"));
        }
        for b in &self.breaches {
            let mut s = format!(
                "breach: {} ({}) ships {} > capacity {}",
                b.entity, b.label, b.total, b.capacity
            );
            if let Some(u) = b.max_utilization {
                s.push_str(&format!(", holds for u <= {u:.4}"));
            }
            line(s);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("table has {found} {what} but the scenario has {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("table row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
}

/// Totals a schedule and lists every capacity breach. Plants are always
/// checked; individual DCs only when `strict_per_dc` is set.
pub fn check_schedule(
    table: &ScheduleTable,
    spec: &ScenarioSpec,
    strict_per_dc: bool,
) -> Result<ScheduleAudit, AuditError> {
    let (rows, cols) = (table.num_dcs(), table.num_plants());
    if rows != spec.dc_capacities.len() || table.cases.len() != rows {
        return Err(AuditError::DimensionMismatch {
            what: "DC rows",
            expected: spec.dc_capacities.len(),
            found: table.cases.len(),
        });
    }
    if cols != spec.plant_capacities.len() {
        return Err(AuditError::DimensionMismatch {
            what: "plant columns",
            expected: spec.plant_capacities.len(),
            found: cols,
        });
    }
    if let Some((row, r)) = table.cases.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(AuditError::RaggedRow {
            row,
            expected: cols,
            found: r.len(),
        });
    }

    let dc_totals: Vec<u64> = table.cases.iter().map(|r| r.iter().sum()).collect();
    let plant_totals: Vec<u64> = (0..cols)
        .map(|k| table.cases.iter().map(|r| r[k]).sum())
        .collect();

    let mut breaches = Vec::new();
    for (k, &total) in plant_totals.iter().enumerate() {
        let capacity = spec.plant_capacities[k];
        if total as f64 > capacity {
            breaches.push(CapacityBreach {
                entity: Entity::Plant(k),
                label: table.plant_labels[k].clone(),
                total,
                capacity,
                max_utilization: Some(capacity / total as f64),
            });
        }
    }
    if strict_per_dc {
        for (j, &total) in dc_totals.iter().enumerate() {
            let capacity = spec.dc_capacities[j];
            if total as f64 > capacity {
                breaches.push(CapacityBreach {
                    entity: Entity::Dc(j),
                    label: table.dc_labels[j].clone(),
                    total,
                    capacity,
                    max_utilization: None,
                });
            }
        }
    }

    Ok(ScheduleAudit {
        scenario: spec.name,
        strict_per_dc,
        grand_total_by_rows: dc_totals.iter().sum(),
        grand_total_by_columns: plant_totals.iter().sum(),
        plant_totals,
        dc_totals,
        network_storage: spec.dc_capacities.iter().sum(),
        breaches,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub old_total: u64,
    pub new_total: u64,
    /// `100 * (new - old) / new`; `None` when `new` is zero.
    pub percent_of_new: Option<f64>,
    /// `100 * (new - old) / old`; `None` when `old` is zero.
    pub percent_of_old: Option<f64>,
}

impl ComparisonReport {
    pub fn render(&self) -> String {
        let pct = |v: Option<f64>| v.map_or(String::from("undefined"), |p| format!("{p:.2}%"));
        format!(
            "old total: {}\nnew total: {}\nchange (relative to new): {}\nchange (relative to old): {}\n",
            self.old_total,
            self.new_total,
            pct(self.percent_of_new),
            pct(self.percent_of_old)
        )
    }
}

/// Percent change in total cases between two audited schedules.
pub fn compare_scenarios(old: &ScheduleAudit, new: &ScheduleAudit) -> ComparisonReport {
    let (o, n) = (
        old.grand_total_by_rows as f64,
        new.grand_total_by_rows as f64,
    );
    let diff = n - o;
    ComparisonReport {
        old_total: old.grand_total_by_rows,
        new_total: new.grand_total_by_rows,
        percent_of_new: (n != 0.0).then(|| 100.0 * diff / n),
        percent_of_old: (o != 0.0).then(|| 100.0 * diff / o),
    }
}
