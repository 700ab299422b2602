//! Elitist survivor selection and crowded binary tournament.

use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;

use super::sorting::{crowding_distance, fast_non_dominated_sort, Dominance, ObjectivePair};
use super::Individual;

/// Crowded comparison: lower rank wins, then larger crowding distance.
fn crowded_order(a: &Individual, b: &Individual) -> Ordering {
    a.rank.cmp(&b.rank).then_with(|| {
        b.crowding
            .partial_cmp(&a.crowding)
            .unwrap_or(Ordering::Equal)
    })
}

/// Sorts `population` into fronts and writes each member's rank and crowding
/// distance.
pub fn assign_rank_and_crowding(population: &mut [Individual], dominance: Dominance) {
    let points: Vec<ObjectivePair> = population.iter().map(|ind| ind.objectives).collect();
    let fronts = fast_non_dominated_sort(&points, dominance)
        .expect("objectives of evaluated individuals are finite");
    for (rank, front) in fronts.iter().enumerate() {
        let front_points: Vec<ObjectivePair> = front.iter().map(|&i| points[i]).collect();
        let distances = crowding_distance(&front_points);
        for (&idx, d) in front.iter().zip(distances) {
            population[idx].rank = rank;
            population[idx].crowding = d;
        }
    }
}

/// Keeps the best `population_size` of `parents ++ offspring`.
///
/// Whole fronts are taken in rank order; the front that does not fit is cut
/// by descending crowding distance. Ties keep the lower combined index. The
/// survivors carry the rank and crowding computed over the combined set and
/// are returned in `(rank, crowding desc, index)` order.
pub fn select_next_generation(
    parents: Vec<Individual>,
    offspring: Vec<Individual>,
    population_size: usize,
    dominance: Dominance,
) -> Vec<Individual> {
    let mut combined = parents;
    combined.extend(offspring);
    assign_rank_and_crowding(&mut combined, dominance);

    let mut order: Vec<usize> = (0..combined.len()).collect();
    order.sort_by(|&a, &b| crowded_order(&combined[a], &combined[b]).then(a.cmp(&b)));
    order.truncate(population_size);

    let mut slots: Vec<Option<Individual>> = combined.into_iter().map(Some).collect();
    order
        .into_iter()
        .map(|i| slots[i].take().expect("each index selected once"))
        .collect()
}

/// Binary tournament on `(rank, crowding)`; ties go to the lower index.
pub fn binary_tournament<R: Rng + ?Sized>(population: &[Individual], rng: &mut R) -> usize {
    let a = rng.gen_range(0..population.len());
    let b = rng.gen_range(0..population.len());
    match crowded_order(&population[a], &population[b]) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => a.min(b),
    }
}
