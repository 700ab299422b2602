//! Simulated binary crossover and polynomial mutation on the unit box.

use rand::Rng;

use super::encoding::Chromosome;

/// Genes closer than this are treated as equal and copied through SBX.
const SBX_EPSILON: f64 = 1e-14;

#[inline]
fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// SBX spread factor for a uniform draw `u` in `[0, 1)`.
fn sbx_beta(u: f64, eta: f64) -> f64 {
    let exponent = 1.0 / (eta + 1.0);
    if u <= 0.5 {
        libm::pow(2.0 * u, exponent)
    } else {
        libm::pow(1.0 / (2.0 * (1.0 - u)), exponent)
    }
}

/// Recombines two parents.
///
/// With probability `crossover_prob` every gene pair whose values differ is
/// recombined by SBX with distribution index `eta`; children are clamped to
/// `[0, 1]`. Otherwise the children are copies of the parents.
pub fn crossover<R: Rng + ?Sized>(
    parent_a: &Chromosome,
    parent_b: &Chromosome,
    crossover_prob: f64,
    eta: f64,
    rng: &mut R,
) -> (Chromosome, Chromosome) {
    assert_eq!(
        parent_a.len(),
        parent_b.len(),
        "parents must have equal gene counts"
    );
    let mut child_a = parent_a.clone();
    let mut child_b = parent_b.clone();
    if rng.gen::<f64>() >= crossover_prob {
        return (child_a, child_b);
    }
    for (idx, (&x1, &x2)) in parent_a.genes.iter().zip(&parent_b.genes).enumerate() {
        if (x1 - x2).abs() < SBX_EPSILON {
            continue;
        }
        let beta = sbx_beta(rng.gen::<f64>(), eta);
        let mid = 0.5 * (x1 + x2);
        let half = 0.5 * beta * (x2 - x1);
        child_a.genes[idx] = clamp_unit(mid - half);
        child_b.genes[idx] = clamp_unit(mid + half);
    }
    (child_a, child_b)
}

/// Bounded polynomial perturbation of one gene in `[0, 1]`.
fn polynomial_step(y: f64, u: f64, eta: f64) -> f64 {
    let power = 1.0 / (eta + 1.0);
    let delta_q = if u < 0.5 {
        let xy = 1.0 - y;
        let val = 2.0 * u + (1.0 - 2.0 * u) * libm::pow(xy, eta + 1.0);
        libm::pow(val, power) - 1.0
    } else {
        let xy = y;
        let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * libm::pow(xy, eta + 1.0);
        1.0 - libm::pow(val, power)
    };
    clamp_unit(y + delta_q)
}

/// Mutates each gene independently with probability `mutation_prob`.
/// Returns how many genes were selected for perturbation.
pub fn mutate<R: Rng + ?Sized>(
    chromosome: &mut Chromosome,
    mutation_prob: f64,
    eta: f64,
    rng: &mut R,
) -> usize {
    let mut count = 0;
    for gene in chromosome.genes.iter_mut() {
        if rng.gen::<f64>() < mutation_prob {
            *gene = polynomial_step(*gene, rng.gen::<f64>(), eta);
            count += 1;
        }
    }
    count
}
