//! Ground truth for tiny instances: exhaustive lattice search, the closed
//! form of the single-chain network, and a capacity-free lower bound.
//!
//! The lattice search checks constraints with its own arithmetic rather than
//! through [`crate::model::evaluate_constraints`], so the two can be checked
//! against each other.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::matrix::Matrix;
use crate::model::{breach_threshold, FlowPlan, NetworkInstance, DEFAULT_TOLERANCE};
use crate::nsga2::encoding::{plant_dc_flow_upper, raw_flow_upper};

/// Largest lattice the brute-force search agrees to walk.
pub const MAX_LATTICE_POINTS: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("lattice has {size:.3e} points, limit is {limit:.0e}")]
    SearchSpaceTooLarge { size: f64, limit: f64 },
    #[error("no lattice point is feasible; smallest violation found is {min_violation}")]
    NoFeasibleLatticePoint { min_violation: f64 },
    #[error("grid step {0} must be finite and positive")]
    InvalidGridStep(f64),
    #[error("instance is not a single supplier-plant-DC-retailer chain")]
    NotSingleChain,
    #[error("capacities cannot carry the demand")]
    InfeasibleCapacities,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeOptimum {
    pub plan: FlowPlan,
    pub cost: f64,
    /// Lattice points visited.
    pub points: u64,
}

fn level_count(upper: f64, step: f64) -> f64 {
    if upper <= 0.0 {
        1.0
    } else {
        1.0 + libm::ceil(upper / step)
    }
}

/// Grid values of one flow variable: `0, step, 2*step, ...` capped at `upper`.
fn levels(upper: f64, step: f64) -> Vec<f64> {
    let count = level_count(upper, step) as usize;
    (0..count)
        .map(|n| {
            let v = n as f64 * step;
            if v > upper {
                upper
            } else {
                v
            }
        })
        .collect()
}

/// Per-variable upper bounds in plan order `[raw | plant-dc | dc-retailer]`:
/// the decode bounds for `r` and `p`, and `d_i` for `t`.
fn variable_uppers(instance: &NetworkInstance) -> Vec<f64> {
    let (s_n, k_n, j_n, i_n) = (
        instance.num_suppliers,
        instance.num_plants,
        instance.num_dcs,
        instance.num_retailers,
    );
    let mut uppers = Vec::with_capacity(s_n * k_n + k_n * j_n + j_n * i_n);
    for s in 0..s_n {
        for _ in 0..k_n {
            uppers.push(raw_flow_upper(instance, s));
        }
    }
    for k in 0..k_n {
        for _ in 0..j_n {
            uppers.push(plant_dc_flow_upper(instance, k));
        }
    }
    for _ in 0..j_n {
        for i in 0..i_n {
            uppers.push(instance.demand[i]);
        }
    }
    uppers
}

/// Number of lattice points for `instance` at `grid_step`.
pub fn lattice_size(instance: &NetworkInstance, grid_step: f64) -> f64 {
    variable_uppers(instance)
        .iter()
        .map(|&upper| level_count(upper, grid_step))
        .product()
}

/// Cost and violation of a flat plan vector. Demand equality is checked with
/// an absolute tolerance of `demand_tol`; every inequality uses
/// [`DEFAULT_TOLERANCE`] scaled like the model does.
struct LatticeChecker<'a> {
    inst: &'a NetworkInstance,
    demand_tol: f64,
    raw_len: usize,
    plant_len: usize,
}

impl LatticeChecker<'_> {
    fn cost(&self, x: &[f64]) -> f64 {
        let inst = self.inst;
        let (k_n, j_n, i_n) = (inst.num_plants, inst.num_dcs, inst.num_retailers);
        let (raw, rest) = x.split_at(self.raw_len);
        let (pd, dr) = rest.split_at(self.plant_len);
        let mut total = 0.0;
        for (idx, &r) in raw.iter().enumerate() {
            total += inst.raw_unit_cost[idx / k_n] * r;
        }
        for (idx, &p) in pd.iter().enumerate() {
            let (k, j) = (idx / j_n, idx % j_n);
            total += (inst.plant_dc_unit_cost.get(k, j) + inst.holding_unit_cost[j]) * p;
        }
        for (idx, &t) in dr.iter().enumerate() {
            let (j, i) = (idx / i_n, idx % i_n);
            total += inst.dc_retailer_unit_cost.get(j, i) * t;
        }
        total
    }

    fn violation(&self, x: &[f64]) -> f64 {
        let inst = self.inst;
        let (s_n, k_n, j_n, i_n) = (
            inst.num_suppliers,
            inst.num_plants,
            inst.num_dcs,
            inst.num_retailers,
        );
        let (raw, rest) = x.split_at(self.raw_len);
        let (pd, dr) = rest.split_at(self.plant_len);
        let tol = DEFAULT_TOLERANCE;
        let mut v = 0.0;
        let mut le = |lhs: f64, rhs: f64| {
            if lhs - rhs > breach_threshold(tol, rhs) {
                v += lhs - rhs;
            }
        };

        let storage: f64 = inst.dc_capacity.iter().sum();
        le(inst.total_demand(), storage);

        let produced: f64 = pd.iter().sum();
        let shipped: f64 = dr.iter().sum();
        le(shipped, produced);

        for k in 0..k_n {
            let made: f64 = inst.utilization * pd[k * j_n..(k + 1) * j_n].iter().sum::<f64>();
            let supplied: f64 = (0..s_n).map(|s| raw[s * k_n + k]).sum();
            le(made, supplied);
            le(made, inst.plant_capacity[k]);
        }
        for s in 0..s_n {
            let sent: f64 = raw[s * k_n..(s + 1) * k_n].iter().sum();
            le(sent, inst.supplier_capacity[s]);
        }
        if inst.strict_per_dc {
            for j in 0..j_n {
                let inbound: f64 = (0..k_n).map(|k| pd[k * j_n + j]).sum();
                let outbound: f64 = dr[j * i_n..(j + 1) * i_n].iter().sum();
                le(inbound, inst.dc_capacity[j]);
                le(outbound, inbound);
            }
        }
        for i in 0..i_n {
            let delivered: f64 = (0..j_n).map(|j| dr[j * i_n + i]).sum();
            let gap = (delivered - inst.demand[i]).abs();
            if gap > self.demand_tol {
                v += gap;
            }
        }
        v
    }
}

/// Cheapest feasible point of the flow lattice, by exhaustive enumeration.
///
/// Every flow takes values `0, step, 2*step, ...` up to its decode bound
/// (`C_s/K` for raw flow, `D_k/(u*J)` for plant shipments, `d_i` for
/// deliveries). Demand equality is accepted within `grid_step / 2`. Ties go
/// to the lexicographically smallest plan vector.
pub fn brute_force_optimum(
    instance: &NetworkInstance,
    grid_step: f64,
) -> Result<LatticeOptimum, OracleError> {
    if !(grid_step.is_finite() && grid_step > 0.0) {
        return Err(OracleError::InvalidGridStep(grid_step));
    }
    let size = lattice_size(instance, grid_step);
    if size > MAX_LATTICE_POINTS {
        return Err(OracleError::SearchSpaceTooLarge {
            size,
            limit: MAX_LATTICE_POINTS,
        });
    }

    let grids: Vec<Vec<f64>> = variable_uppers(instance)
        .into_iter()
        .map(|upper| levels(upper, grid_step))
        .collect();
    let checker = LatticeChecker {
        inst: instance,
        demand_tol: grid_step / 2.0,
        raw_len: instance.num_suppliers * instance.num_plants,
        plant_len: instance.num_plants * instance.num_dcs,
    };

    let n = grids.len();
    let mut digits = vec![0usize; n];
    let mut x: Vec<f64> = grids.iter().map(|g| g[0]).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut min_violation = f64::INFINITY;
    let mut points = 0u64;

    loop {
        points += 1;
        let violation = checker.violation(&x);
        if violation == 0.0 {
            let cost = checker.cost(&x);
            // Odometer order is lexicographic, so the first minimum wins ties.
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, x.clone()));
            }
        } else if violation < min_violation {
            min_violation = violation;
        }

        // Advance the odometer; the last variable turns fastest.
        let mut pos = n;
        loop {
            if pos == 0 {
                let (cost, flat) = best.ok_or(OracleError::NoFeasibleLatticePoint { min_violation })?;
                return Ok(LatticeOptimum {
                    plan: unflatten(instance, &flat),
                    cost,
                    points,
                });
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < grids[pos].len() {
                x[pos] = grids[pos][digits[pos]];
                break;
            }
            digits[pos] = 0;
            x[pos] = grids[pos][0];
        }
    }
}

fn unflatten(instance: &NetworkInstance, flat: &[f64]) -> FlowPlan {
    let (s_n, k_n, j_n, i_n) = (
        instance.num_suppliers,
        instance.num_plants,
        instance.num_dcs,
        instance.num_retailers,
    );
    let (raw, rest) = flat.split_at(s_n * k_n);
    let (pd, dr) = rest.split_at(k_n * j_n);
    FlowPlan {
        raw_flow: Matrix::from_vec(s_n, k_n, raw.to_vec()).expect("sized"),
        plant_dc_flow: Matrix::from_vec(k_n, j_n, pd.to_vec()).expect("sized"),
        dc_retailer_flow: Matrix::from_vec(j_n, i_n, dr.to_vec()).expect("sized"),
    }
}

/// Optimal cost of a single supplier-plant-DC-retailer chain:
/// `d * (u*c_s + c_kj + h_j + r_ji)`.
pub fn single_chain_optimum(instance: &NetworkInstance) -> Result<f64, OracleError> {
    if (
        instance.num_suppliers,
        instance.num_plants,
        instance.num_dcs,
        instance.num_retailers,
    ) != (1, 1, 1, 1)
    {
        return Err(OracleError::NotSingleChain);
    }
    let d = instance.demand[0];
    let u = instance.utilization;
    if d > instance.dc_capacity[0]
        || u * d > instance.plant_capacity[0]
        || u * d > instance.supplier_capacity[0]
    {
        return Err(OracleError::InfeasibleCapacities);
    }
    let unit = u * instance.raw_unit_cost[0]
        + instance.plant_dc_unit_cost.get(0, 0)
        + instance.holding_unit_cost[0]
        + instance.dc_retailer_unit_cost.get(0, 0);
    Ok(d * unit)
}

/// Cost of serving all demand with capacities ignored.
///
/// With per-DC checks on, every case follows one path `s -> k -> j -> i`,
/// so the bound is `sum_i d_i * min_{s,k,j} (u*c_s + c_kj + h_j + r_ji)`.
/// Without them, production only has to cover shipments in aggregate, so
/// the plant leg and the delivery leg are minimised separately:
/// `D * (u * min_s c_s + min_{k,j} (c_kj + h_j)) + sum_i d_i * min_j r_ji`.
pub fn lower_bound(instance: &NetworkInstance) -> f64 {
    let u = instance.utilization;
    let cheapest_raw = instance
        .raw_unit_cost
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let into_dc = |j: usize| {
        (0..instance.num_plants)
            .map(|k| instance.plant_dc_unit_cost.get(k, j) + instance.holding_unit_cost[j])
            .fold(f64::INFINITY, f64::min)
    };

    if instance.strict_per_dc {
        (0..instance.num_retailers)
            .map(|i| {
                let path = (0..instance.num_dcs)
                    .map(|j| u * cheapest_raw + into_dc(j) + instance.dc_retailer_unit_cost.get(j, i))
                    .fold(f64::INFINITY, f64::min);
                instance.demand[i] * path
            })
            .sum()
    } else {
        let produce = u * cheapest_raw + (0..instance.num_dcs).map(into_dc).fold(f64::INFINITY, f64::min);
        let deliver: f64 = (0..instance.num_retailers)
            .map(|i| {
                let leg = (0..instance.num_dcs)
                    .map(|j| instance.dc_retailer_unit_cost.get(j, i))
                    .fold(f64::INFINITY, f64::min);
                instance.demand[i] * leg
            })
            .sum();
        instance.total_demand() * produce + deliver
    }
}

/// Draws a network of at most one supplier, two plants, two DCs and two
/// retailers with integer data and `u = 1`.
///
/// Demands are 1 or 2 per retailer. Supplier and plant capacities leave
/// twice the slack decoding needs, so feasible plans are not confined to the
/// edge of the gene box, and the grid-1 lattice stays well under
/// [`MAX_LATTICE_POINTS`].
pub fn random_tiny_instance<R: Rng + ?Sized>(rng: &mut R) -> NetworkInstance {
    let plants = rng.gen_range(1..=2);
    let dcs = rng.gen_range(1..=2);
    let retailers = rng.gen_range(1..=2);
    let demand: Vec<f64> = (0..retailers).map(|_| rng.gen_range(1..=2) as f64).collect();
    let total: f64 = demand.iter().sum();
    let costs = |rows: usize, cols: usize, rng: &mut R| {
        let data = (0..rows * cols).map(|_| rng.gen_range(1..=9) as f64).collect();
        Matrix::from_vec(rows, cols, data).expect("length matches shape")
    };
    let plant_dc_unit_cost = costs(plants, dcs, rng);
    let dc_retailer_unit_cost = costs(dcs, retailers, rng);
    NetworkInstance {
        num_suppliers: 1,
        num_plants: plants,
        num_dcs: dcs,
        num_retailers: retailers,
        supplier_capacity: vec![2.0 * total * plants as f64],
        plant_capacity: vec![total * dcs as f64; plants],
        dc_capacity: vec![total; dcs],
        demand,
        raw_unit_cost: vec![rng.gen_range(1..=5) as f64],
        holding_unit_cost: (0..dcs).map(|_| rng.gen_range(1..=3) as f64).collect(),
        plant_dc_unit_cost,
        dc_retailer_unit_cost,
        utilization: 1.0,
        strict_per_dc: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::single_chain;
    use crate::model::{evaluate_constraints, evaluate_cost, is_feasible};

    fn worked() -> NetworkInstance {
        single_chain(20.0, 10.0, 1.0, [2.0, 3.0, 1.0, 4.0])
    }

    #[test]
    fn single_chain_lattice_optimum() {
        let inst = worked();
        let opt = brute_force_optimum(&inst, 1.0).unwrap();
        assert_eq!(opt.cost, 100.0);
        assert_eq!(opt.plan.raw_flow.get(0, 0), 10.0);
        assert_eq!(opt.plan.plant_dc_flow.get(0, 0), 10.0);
        assert_eq!(opt.plan.dc_retailer_flow.get(0, 0), 10.0);
        assert_eq!(opt.points, 21 * 21 * 11);
        let report = evaluate_constraints(&inst, &opt.plan, DEFAULT_TOLERANCE).unwrap();
        assert!(is_feasible(&report));
        assert_eq!(evaluate_cost(&inst, &opt.plan).unwrap().total, opt.cost);
    }

    #[test]
    fn zero_demand_optimum_is_zero_plan() {
        let inst = single_chain(20.0, 0.0, 1.0, [2.0, 3.0, 1.0, 4.0]);
        let opt = brute_force_optimum(&inst, 1.0).unwrap();
        assert_eq!(opt.cost, 0.0);
        assert_eq!(opt.plan, inst.zero_plan());
        assert_eq!(single_chain_optimum(&inst).unwrap(), 0.0);
        assert_eq!(lower_bound(&inst), 0.0);
    }

    #[test]
    fn cheaper_plant_carries_everything() {
        let mut inst = single_chain(20.0, 4.0, 1.0, [1.0; 4]);
        inst.num_plants = 2;
        inst.plant_capacity = vec![20.0, 20.0];
        inst.plant_dc_unit_cost = Matrix::from_rows(&[vec![1.0], vec![5.0]]).unwrap();
        let opt = brute_force_optimum(&inst, 1.0).unwrap();
        assert_eq!(opt.plan.plant_dc_flow.get(0, 0), 4.0);
        assert_eq!(opt.plan.plant_dc_flow.get(1, 0), 0.0);
        assert_eq!(opt.plan.raw_flow.as_slice(), &[4.0, 0.0]);
        assert_eq!(opt.cost, 4.0 * (1.0 + 1.0 + 1.0 + 1.0));
    }

    #[test]
    fn closed_form_chain() {
        assert_eq!(single_chain_optimum(&worked()).unwrap(), 100.0);
        let doubled = single_chain(40.0, 10.0, 2.0, [2.0, 3.0, 1.0, 4.0]);
        assert_eq!(single_chain_optimum(&doubled).unwrap(), 120.0);
        assert_eq!(brute_force_optimum(&doubled, 1.0).unwrap().cost, 120.0);
    }

    #[test]
    fn closed_form_errors() {
        let mut inst = worked();
        inst.plant_capacity = vec![5.0];
        assert_eq!(
            single_chain_optimum(&inst),
            Err(OracleError::InfeasibleCapacities)
        );
        inst.num_retailers = 2;
        assert_eq!(single_chain_optimum(&inst), Err(OracleError::NotSingleChain));
    }

    #[test]
    fn lower_bound_tight_on_chain() {
        assert_eq!(lower_bound(&worked()), 100.0);
        let mut strict = worked();
        strict.strict_per_dc = true;
        assert_eq!(lower_bound(&strict), 100.0);
    }

    #[test]
    fn oversized_lattice_refused() {
        let inst = single_chain(1e9, 1e9, 1.0, [1.0; 4]);
        match brute_force_optimum(&inst, 1.0) {
            Err(OracleError::SearchSpaceTooLarge { size, .. }) => assert!(size > 1e8),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            brute_force_optimum(&inst, 0.0),
            Err(OracleError::InvalidGridStep(_))
        ));
    }

    #[test]
    fn infeasible_lattice_reports_min_violation() {
        let mut inst = worked();
        inst.dc_capacity = vec![8.0];
        match brute_force_optimum(&inst, 1.0) {
            Err(OracleError::NoFeasibleLatticePoint { min_violation }) => {
                assert_eq!(min_violation, 2.0)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_grid_demand_uses_half_step_tolerance() {
        let inst = single_chain(20.0, 3.2, 1.0, [1.0; 4]);
        let opt = brute_force_optimum(&inst, 1.0).unwrap();
        // t can be 3 or 3.2 (the capped top level); both are within 0.5.
        assert_eq!(opt.plan.dc_retailer_flow.get(0, 0), 3.0);
        assert_eq!(opt.plan.plant_dc_flow.get(0, 0), 3.0);
    }
}
