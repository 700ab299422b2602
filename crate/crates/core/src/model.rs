//! Problem data, flow plans, and pure evaluation of total cost and of the
//! network constraints.
//!
//! Index conventions: `s` suppliers, `k` plants, `j` distribution centers,
//! `i` retailers. Flow matrices are stored row-major with the upstream echelon
//! as the row index (`raw_flow[s][k]`, `plant_dc_flow[k][j]`,
//! `dc_retailer_flow[j][i]`).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::matrix::Matrix;

/// Relative tolerance used for every residual check unless a caller picks
/// another one. A residual `r` against right-hand side `b` is a breach when
/// `r < -tol * max(1, |b|)`.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// All sets, capacities, demands and unit costs of one planning period.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkInstance {
    pub num_suppliers: usize,
    pub num_plants: usize,
    pub num_dcs: usize,
    pub num_retailers: usize,
    pub supplier_capacity: Vec<f64>,
    pub plant_capacity: Vec<f64>,
    pub dc_capacity: Vec<f64>,
    pub demand: Vec<f64>,
    /// Cost of buying and moving one raw-material unit from each supplier.
    pub raw_unit_cost: Vec<f64>,
    pub holding_unit_cost: Vec<f64>,
    /// `K x J`
    pub plant_dc_unit_cost: Matrix,
    /// `J x I`
    pub dc_retailer_unit_cost: Matrix,
    /// Raw-material units consumed per case produced.
    pub utilization: f64,
    /// Check DC storage and DC throughput per center instead of only in
    /// aggregate over the network.
    pub strict_per_dc: bool,
}

impl NetworkInstance {
    /// Number of plants in the network (the aggregate plant count).
    pub fn total_plants(&self) -> usize {
        self.num_plants
    }

    /// Number of distribution centers in the network.
    pub fn total_dcs(&self) -> usize {
        self.num_dcs
    }

    pub fn total_demand(&self) -> f64 {
        self.demand.iter().sum()
    }

    /// An all-zero plan shaped for this instance.
    pub fn zero_plan(&self) -> FlowPlan {
        FlowPlan {
            raw_flow: Matrix::zeros(self.num_suppliers, self.num_plants),
            plant_dc_flow: Matrix::zeros(self.num_plants, self.num_dcs),
            dc_retailer_flow: Matrix::zeros(self.num_dcs, self.num_retailers),
        }
    }

    pub fn check_plan_shape(&self, plan: &FlowPlan) -> Result<(), ModelError> {
        let checks = [
            (
                FlowMatrix::RawFlow,
                (self.num_suppliers, self.num_plants),
                plan.raw_flow.shape(),
            ),
            (
                FlowMatrix::PlantDcFlow,
                (self.num_plants, self.num_dcs),
                plan.plant_dc_flow.shape(),
            ),
            (
                FlowMatrix::DcRetailerFlow,
                (self.num_dcs, self.num_retailers),
                plan.dc_retailer_flow.shape(),
            ),
        ];
        for (matrix, expected, found) in checks {
            if expected != found {
                return Err(ModelError::DimensionMismatch {
                    matrix,
                    expected,
                    found,
                });
            }
        }
        Ok(())
    }
}

/// The decision variables: one flow matrix per echelon link.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowPlan {
    /// `S x K`, raw material from supplier to plant.
    pub raw_flow: Matrix,
    /// `K x J`, cases from plant to DC.
    pub plant_dc_flow: Matrix,
    /// `J x I`, cases from DC to retailer.
    pub dc_retailer_flow: Matrix,
}

impl FlowPlan {
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            raw_flow: self.raw_flow.scaled(factor),
            plant_dc_flow: self.plant_dc_flow.scaled(factor),
            dc_retailer_flow: self.dc_retailer_flow.scaled(factor),
        }
    }

    /// Entry-wise sum of two equally shaped plans.
    pub fn added(&self, other: &Self) -> Self {
        Self {
            raw_flow: self.raw_flow.added(&other.raw_flow),
            plant_dc_flow: self.plant_dc_flow.added(&other.plant_dc_flow),
            dc_retailer_flow: self.dc_retailer_flow.added(&other.dc_retailer_flow),
        }
    }

    /// Cases produced at plant `k`, i.e. everything it ships to DCs.
    pub fn production(&self, plant: usize) -> f64 {
        self.plant_dc_flow.row_sum(plant)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowMatrix {
    RawFlow,
    PlantDcFlow,
    DcRetailerFlow,
}

impl fmt::Display for FlowMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlowMatrix::RawFlow => "raw_flow",
            FlowMatrix::PlantDcFlow => "plant_dc_flow",
            FlowMatrix::DcRetailerFlow => "dc_retailer_flow",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{matrix} is {}x{} but the instance needs {}x{}", found.0, found.1, expected.0, expected.1)]
    DimensionMismatch {
        matrix: FlowMatrix,
        expected: (usize, usize),
        found: (usize, usize),
    },
}

/// Total cost split by echelon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    pub raw_cost: f64,
    pub plant_to_dc_cost: f64,
    pub holding_cost: f64,
    pub dc_to_retailer_cost: f64,
    pub total: f64,
}

/// Instance fields named in validation breaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceField {
    Counts,
    SupplierCapacity,
    PlantCapacity,
    DcCapacity,
    Demand,
    RawUnitCost,
    HoldingUnitCost,
    PlantDcUnitCost,
    DcRetailerUnitCost,
    Utilization,
}

impl InstanceField {
    pub fn name(self) -> &'static str {
        match self {
            InstanceField::Counts => "counts",
            InstanceField::SupplierCapacity => "supplier_capacity",
            InstanceField::PlantCapacity => "plant_capacity",
            InstanceField::DcCapacity => "dc_capacity",
            InstanceField::Demand => "demand",
            InstanceField::RawUnitCost => "raw_unit_cost",
            InstanceField::HoldingUnitCost => "holding_unit_cost",
            InstanceField::PlantDcUnitCost => "plant_dc_unit_cost",
            InstanceField::DcRetailerUnitCost => "dc_retailer_unit_cost",
            InstanceField::Utilization => "utilization",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BreachKind {
    ZeroCount {
        which: &'static str,
    },
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    Negative {
        index: usize,
        value: f64,
    },
    NonFinite {
        index: usize,
    },
    NotPositive {
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Breach {
    pub field: InstanceField,
    pub kind: BreachKind,
}

impl fmt::Display for Breach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.field.name();
        match &self.kind {
            BreachKind::ZeroCount { which } => write!(f, "{name}: {which} must be at least 1"),
            BreachKind::DimensionMismatch { expected, found } => {
                if expected.0 == 1 && found.0 == 1 {
                    write!(f, "{name}: expected {} entries, found {}", expected.1, found.1)
                } else {
                    write!(
                        f,
                        "{name}: expected {}x{}, found {}x{}",
                        expected.0, expected.1, found.0, found.1
                    )
                }
            }
            BreachKind::Negative { index, value } => {
                write!(f, "{name}[{index}] = {value} is negative")
            }
            BreachKind::NonFinite { index } => write!(f, "{name}[{index}] is not finite"),
            BreachKind::NotPositive { value } => {
                write!(f, "{name} = {value} must be strictly positive")
            }
        }
    }
}

/// Every invariant breach found in an instance. Empty means usable.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub breaches: Vec<Breach>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.breaches.is_empty()
    }

    pub fn mentions(&self, field: InstanceField) -> bool {
        self.breaches.iter().any(|b| b.field == field)
    }

    pub fn messages(&self) -> Vec<String> {
        self.breaches.iter().map(|b| format!("{b}")).collect()
    }
}

/// Lists every invariant breach of `instance`. Never fails.
pub fn validate_instance(instance: &NetworkInstance) -> ValidationReport {
    let mut breaches = Vec::new();
    let mut push = |field, kind| breaches.push(Breach { field, kind });

    for (which, count) in [
        ("suppliers", instance.num_suppliers),
        ("plants", instance.num_plants),
        ("dcs", instance.num_dcs),
        ("retailers", instance.num_retailers),
    ] {
        if count == 0 {
            push(InstanceField::Counts, BreachKind::ZeroCount { which });
        }
    }

    let vectors: [(InstanceField, &[f64], usize); 6] = [
        (
            InstanceField::SupplierCapacity,
            &instance.supplier_capacity,
            instance.num_suppliers,
        ),
        (
            InstanceField::PlantCapacity,
            &instance.plant_capacity,
            instance.num_plants,
        ),
        (
            InstanceField::DcCapacity,
            &instance.dc_capacity,
            instance.num_dcs,
        ),
        (
            InstanceField::Demand,
            &instance.demand,
            instance.num_retailers,
        ),
        (
            InstanceField::RawUnitCost,
            &instance.raw_unit_cost,
            instance.num_suppliers,
        ),
        (
            InstanceField::HoldingUnitCost,
            &instance.holding_unit_cost,
            instance.num_dcs,
        ),
    ];
    for (field, values, expected) in vectors {
        if values.len() != expected {
            push(
                field,
                BreachKind::DimensionMismatch {
                    expected: (1, expected),
                    found: (1, values.len()),
                },
            );
        }
        check_entries(field, values, &mut push);
    }

    let matrices = [
        (
            InstanceField::PlantDcUnitCost,
            &instance.plant_dc_unit_cost,
            (instance.num_plants, instance.num_dcs),
        ),
        (
            InstanceField::DcRetailerUnitCost,
            &instance.dc_retailer_unit_cost,
            (instance.num_dcs, instance.num_retailers),
        ),
    ];
    for (field, matrix, expected) in matrices {
        if matrix.shape() != expected {
            push(
                field,
                BreachKind::DimensionMismatch {
                    expected,
                    found: matrix.shape(),
                },
            );
        }
        check_entries(field, matrix.as_slice(), &mut push);
    }

    let u = instance.utilization;
    if !u.is_finite() {
        push(InstanceField::Utilization, BreachKind::NonFinite { index: 0 });
    } else if u <= 0.0 {
        push(InstanceField::Utilization, BreachKind::NotPositive { value: u });
    }

    ValidationReport { breaches }
}

fn check_entries(
    field: InstanceField,
    values: &[f64],
    push: &mut impl FnMut(InstanceField, BreachKind),
) {
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            push(field, BreachKind::NonFinite { index });
        } else if value < 0.0 {
            push(field, BreachKind::Negative { index, value });
        }
    }
}

/// Total cost of `plan`, split by echelon.
///
/// Holding cost is charged once on every case arriving at a DC.
pub fn evaluate_cost(
    instance: &NetworkInstance,
    plan: &FlowPlan,
) -> Result<CostBreakdown, ModelError> {
    instance.check_plan_shape(plan)?;

    let mut raw_cost = 0.0;
    for s in 0..instance.num_suppliers {
        let unit = instance.raw_unit_cost[s];
        for &flow in plan.raw_flow.row(s) {
            raw_cost += unit * flow;
        }
    }

    let mut plant_to_dc_cost = 0.0;
    for k in 0..instance.num_plants {
        for (j, &flow) in plan.plant_dc_flow.row(k).iter().enumerate() {
            plant_to_dc_cost += instance.plant_dc_unit_cost.get(k, j) * flow;
        }
    }

    let mut holding_cost = 0.0;
    for j in 0..instance.num_dcs {
        holding_cost += instance.holding_unit_cost[j] * plan.plant_dc_flow.col_sum(j);
    }

    let mut dc_to_retailer_cost = 0.0;
    for j in 0..instance.num_dcs {
        for (i, &flow) in plan.dc_retailer_flow.row(j).iter().enumerate() {
            dc_to_retailer_cost += instance.dc_retailer_unit_cost.get(j, i) * flow;
        }
    }

    Ok(CostBreakdown {
        raw_cost,
        plant_to_dc_cost,
        holding_cost,
        dc_to_retailer_cost,
        total: raw_cost + plant_to_dc_cost + holding_cost + dc_to_retailer_cost,
    })
}

/// Residuals of every network constraint. A non-negative residual is slack;
/// a negative one is a shortfall. `demand_mismatch` must be zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    /// `sum(H_j) - sum(d_i)`
    pub residual_dc_storage: f64,
    /// `sum(p_kj) - sum(t_ji)`
    pub residual_production_vs_shipment: f64,
    /// `sum_j t_ji - d_i` per retailer.
    pub demand_mismatch: Vec<f64>,
    /// `sum_s r_sk - u * sum_j p_kj` per plant.
    pub residual_raw_per_plant: Vec<f64>,
    /// `D_k - u * sum_j p_kj` per plant.
    pub residual_plant_capacity: Vec<f64>,
    /// `C_s - sum_k r_sk` per supplier.
    pub residual_supplier_capacity: Vec<f64>,
    /// `H_j - sum_k p_kj` per DC, strict mode only (empty otherwise).
    pub residual_dc_storage_per_dc: Vec<f64>,
    /// `sum_k p_kj - sum_i t_ji` per DC, strict mode only (empty otherwise).
    pub residual_dc_throughput_per_dc: Vec<f64>,
    /// Breach magnitudes from every inequality.
    pub capacity_violation: f64,
    /// Breach magnitudes from demand equality.
    pub demand_violation: f64,
    pub total_violation: f64,
    pub tolerance: f64,
}

/// Slack below which a residual counts as a breach.
#[inline]
pub fn breach_threshold(tolerance: f64, rhs: f64) -> f64 {
    let scale = if rhs.abs() > 1.0 { rhs.abs() } else { 1.0 };
    tolerance * scale
}

/// Computes every constraint residual of `plan` and the aggregate violation.
///
/// `tolerance` is relative: each check is scaled by `max(1, |rhs|)`.
pub fn evaluate_constraints(
    instance: &NetworkInstance,
    plan: &FlowPlan,
    tolerance: f64,
) -> Result<ConstraintReport, ModelError> {
    instance.check_plan_shape(plan)?;
    let u = instance.utilization;

    let mut capacity_violation = 0.0;
    let mut charge = |residual: f64, rhs: f64| {
        if residual < -breach_threshold(tolerance, rhs) {
            capacity_violation += -residual;
        }
    };

    let storage_total: f64 = instance.dc_capacity.iter().sum();
    let demand_total = instance.total_demand();
    let residual_dc_storage = storage_total - demand_total;
    charge(residual_dc_storage, storage_total);

    let produced_total = plan.plant_dc_flow.sum();
    let shipped_total = plan.dc_retailer_flow.sum();
    let residual_production_vs_shipment = produced_total - shipped_total;
    charge(residual_production_vs_shipment, shipped_total);

    let mut residual_raw_per_plant = Vec::with_capacity(instance.num_plants);
    let mut residual_plant_capacity = Vec::with_capacity(instance.num_plants);
    for k in 0..instance.num_plants {
        let consumed = u * plan.production(k);
        let supplied = plan.raw_flow.col_sum(k);
        let raw = supplied - consumed;
        charge(raw, supplied);
        residual_raw_per_plant.push(raw);

        let cap = instance.plant_capacity[k] - consumed;
        charge(cap, instance.plant_capacity[k]);
        residual_plant_capacity.push(cap);
    }

    let residual_supplier_capacity: Vec<f64> = (0..instance.num_suppliers)
        .map(|s| {
            let r = instance.supplier_capacity[s] - plan.raw_flow.row_sum(s);
            charge(r, instance.supplier_capacity[s]);
            r
        })
        .collect();

    let mut residual_dc_storage_per_dc = Vec::new();
    let mut residual_dc_throughput_per_dc = Vec::new();
    if instance.strict_per_dc {
        for j in 0..instance.num_dcs {
            let inbound = plan.plant_dc_flow.col_sum(j);
            let outbound = plan.dc_retailer_flow.row_sum(j);
            let storage = instance.dc_capacity[j] - inbound;
            charge(storage, instance.dc_capacity[j]);
            residual_dc_storage_per_dc.push(storage);
            let throughput = inbound - outbound;
            charge(throughput, outbound);
            residual_dc_throughput_per_dc.push(throughput);
        }
    }

    let mut demand_violation = 0.0;
    let demand_mismatch: Vec<f64> = (0..instance.num_retailers)
        .map(|i| {
            let d = instance.demand[i];
            let mismatch = plan.dc_retailer_flow.col_sum(i) - d;
            if mismatch.abs() > breach_threshold(tolerance, d) {
                demand_violation += mismatch.abs();
            }
            mismatch
        })
        .collect();

    Ok(ConstraintReport {
        residual_dc_storage,
        residual_production_vs_shipment,
        demand_mismatch,
        residual_raw_per_plant,
        residual_plant_capacity,
        residual_supplier_capacity,
        residual_dc_storage_per_dc,
        residual_dc_throughput_per_dc,
        capacity_violation,
        demand_violation,
        total_violation: capacity_violation + demand_violation,
        tolerance,
    })
}

/// True iff the report carries no breach beyond its tolerance.
pub fn is_feasible(report: &ConstraintReport) -> bool {
    report.total_violation == 0.0
}
