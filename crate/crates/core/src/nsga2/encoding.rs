//! Real-coded genotype and its mapping onto a [`FlowPlan`].

use alloc::vec::Vec;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::model::{FlowPlan, NetworkInstance};

/// Genes in `[0, 1]`, laid out as
/// `[raw-flow block (S*K) | plant-dc block (K*J) | dc-retailer allocation block (J*I)]`.
///
/// The allocation block is stored retailer-major: the `J` weights of
/// retailer `i` are contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    pub genes: Vec<f64>,
}

impl Chromosome {
    pub fn new(genes: Vec<f64>) -> Self {
        Self { genes }
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }
}

/// Block boundaries of a chromosome for one instance shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneLayout {
    pub suppliers: usize,
    pub plants: usize,
    pub dcs: usize,
    pub retailers: usize,
}

impl GeneLayout {
    pub fn of(instance: &NetworkInstance) -> Self {
        Self {
            suppliers: instance.num_suppliers,
            plants: instance.num_plants,
            dcs: instance.num_dcs,
            retailers: instance.num_retailers,
        }
    }

    pub fn raw_len(&self) -> usize {
        self.suppliers * self.plants
    }

    pub fn plant_dc_len(&self) -> usize {
        self.plants * self.dcs
    }

    pub fn allocation_len(&self) -> usize {
        self.dcs * self.retailers
    }

    pub fn len(&self) -> usize {
        self.raw_len() + self.plant_dc_len() + self.allocation_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("chromosome has {found} genes, instance needs {expected}")]
pub struct GeneLengthMismatch {
    pub expected: usize,
    pub found: usize,
}

/// Upper bound of the raw flow `r_sk` reachable by decoding: `C_s / K`.
pub fn raw_flow_upper(instance: &NetworkInstance, supplier: usize) -> f64 {
    instance.supplier_capacity[supplier] / instance.num_plants as f64
}

/// Upper bound of the shipment `p_kj` reachable by decoding: `D_k / (u * J)`,
/// so a plant's total production spans `[0, D_k / u]`.
pub fn plant_dc_flow_upper(instance: &NetworkInstance, plant: usize) -> f64 {
    instance.plant_capacity[plant] / (instance.utilization * instance.num_dcs as f64)
}

/// Maps genes to flows.
///
/// Each retailer's allocation weights are normalised so that its deliveries
/// sum to its demand. All-zero weights split the demand evenly.
pub fn decode(
    chromosome: &Chromosome,
    instance: &NetworkInstance,
) -> Result<FlowPlan, GeneLengthMismatch> {
    let layout = GeneLayout::of(instance);
    if chromosome.len() != layout.len() {
        return Err(GeneLengthMismatch {
            expected: layout.len(),
            found: chromosome.len(),
        });
    }
    let (raw_genes, rest) = chromosome.genes.split_at(layout.raw_len());
    let (plant_genes, alloc_genes) = rest.split_at(layout.plant_dc_len());

    let (s_n, k_n, j_n, i_n) = (
        layout.suppliers,
        layout.plants,
        layout.dcs,
        layout.retailers,
    );

    let mut raw_flow = Matrix::zeros(s_n, k_n);
    for s in 0..s_n {
        let upper = raw_flow_upper(instance, s);
        for k in 0..k_n {
            raw_flow.set(s, k, raw_genes[s * k_n + k] * upper);
        }
    }

    let mut plant_dc_flow = Matrix::zeros(k_n, j_n);
    for k in 0..k_n {
        let upper = plant_dc_flow_upper(instance, k);
        for j in 0..j_n {
            plant_dc_flow.set(k, j, plant_genes[k * j_n + j] * upper);
        }
    }

    let mut dc_retailer_flow = Matrix::zeros(j_n, i_n);
    for i in 0..i_n {
        let weights = &alloc_genes[i * j_n..(i + 1) * j_n];
        let demand = instance.demand[i];
        let total: f64 = weights.iter().sum();
        for (j, &w) in weights.iter().enumerate() {
            let t = if total > 0.0 {
                demand * w / total
            } else {
                demand / j_n as f64
            };
            dc_retailer_flow.set(j, i, t);
        }
    }

    Ok(FlowPlan {
        raw_flow,
        plant_dc_flow,
        dc_retailer_flow,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::single_chain;
    use alloc::vec;

    fn two_dc_instance(demand: f64, plant_capacity: f64) -> NetworkInstance {
        let mut inst = single_chain(100.0, demand, 1.0, [1.0; 4]);
        inst.num_dcs = 2;
        inst.plant_capacity = vec![plant_capacity];
        inst.dc_capacity = vec![100.0, 100.0];
        inst.holding_unit_cost = vec![1.0, 1.0];
        inst.plant_dc_unit_cost = Matrix::filled(1, 2, 1.0);
        inst.dc_retailer_unit_cost = Matrix::filled(2, 1, 1.0);
        inst
    }

    #[test]
    fn allocation_weights_split_demand() {
        let inst = two_dc_instance(12.0, 100.0);
        let chrom = Chromosome::new(vec![0.0, 0.0, 0.0, 0.2, 0.6]);
        let plan = decode(&chrom, &inst).unwrap();
        let t0 = plan.dc_retailer_flow.get(0, 0);
        let t1 = plan.dc_retailer_flow.get(1, 0);
        assert!((t0 - 3.0).abs() < 1e-12 && (t1 - 9.0).abs() < 1e-12, "{t0} {t1}");
    }

    #[test]
    fn zero_weights_fall_back_to_even_split() {
        let inst = two_dc_instance(12.0, 100.0);
        let plan = decode(&Chromosome::new(vec![0.0; 5]), &inst).unwrap();
        assert_eq!(plan.dc_retailer_flow.as_slice(), &[6.0, 6.0]);
    }

    #[test]
    fn full_plant_gene_spans_capacity_share() {
        let mut inst = single_chain(100.0, 1.0, 1.0, [1.0; 4]);
        inst.num_dcs = 4;
        inst.plant_capacity = vec![12800.0];
        inst.dc_capacity = vec![100.0; 4];
        inst.holding_unit_cost = vec![1.0; 4];
        inst.plant_dc_unit_cost = Matrix::filled(1, 4, 1.0);
        inst.dc_retailer_unit_cost = Matrix::filled(4, 1, 1.0);
        let mut genes = vec![0.5; GeneLayout::of(&inst).len()];
        genes[1] = 1.0;
        let plan = decode(&Chromosome::new(genes), &inst).unwrap();
        assert_eq!(plan.plant_dc_flow.get(0, 0), 3200.0);
        assert_eq!(plan.raw_flow.get(0, 0), 50.0);
    }

    #[test]
    fn length_mismatch_rejected() {
        let inst = two_dc_instance(1.0, 1.0);
        assert_eq!(
            decode(&Chromosome::new(vec![0.5; 3]), &inst).unwrap_err(),
            GeneLengthMismatch {
                expected: 5,
                found: 3
            }
        );
    }
}
