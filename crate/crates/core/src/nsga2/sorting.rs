//! Non-dominated sorting and crowding distance for two objectives.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

/// Two minimised objective values.
pub type ObjectivePair = [f64; 2];

/// Which domination relation ranks the points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dominance {
    /// No worse in both objectives and strictly better in at least one.
    Pareto,
    /// Objectives read as `(cost, violation)`. A zero-violation point beats any
    /// positive-violation point, two infeasible points compare by violation
    /// alone, and two feasible points compare by Pareto order.
    #[default]
    Constrained,
}

impl Dominance {
    pub fn dominates(self, a: &ObjectivePair, b: &ObjectivePair) -> bool {
        match self {
            Dominance::Pareto => pareto_dominates(a, b),
            Dominance::Constrained => {
                let (va, vb) = (a[1], b[1]);
                match (va == 0.0, vb == 0.0) {
                    (true, false) => true,
                    (false, true) => false,
                    (false, false) => va < vb,
                    (true, true) => pareto_dominates(a, b),
                }
            }
        }
    }
}

fn pareto_dominates(a: &ObjectivePair, b: &ObjectivePair) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("objective pair {index} is not finite")]
pub struct NonFiniteObjective {
    pub index: usize,
}

/// Partitions `points` into fronts. Front 0 holds the non-dominated points;
/// front `n` holds the points dominated only by members of earlier fronts.
/// Indices inside a front are ascending.
pub fn fast_non_dominated_sort(
    points: &[ObjectivePair],
    dominance: Dominance,
) -> Result<Vec<Vec<usize>>, NonFiniteObjective> {
    if let Some(index) = points
        .iter()
        .position(|p| !(p[0].is_finite() && p[1].is_finite()))
    {
        return Err(NonFiniteObjective { index });
    }

    let n = points.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in 0..n {
        for q in (p + 1)..n {
            if dominance.dominates(&points[p], &points[q]) {
                dominates[p].push(q);
                dominated_by_count[q] += 1;
            } else if dominance.dominates(&points[q], &points[p]) {
                dominates[q].push(p);
                dominated_by_count[p] += 1;
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&p| dominated_by_count[p] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominates[p] {
                dominated_by_count[q] -= 1;
                if dominated_by_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    Ok(fronts)
}

/// Crowding distance of every point in one front.
///
/// Per objective the points are sorted (ties by position); the first and last
/// get `+inf`, interior points accumulate `(next - prev) / range`. A zero range
/// adds nothing.
pub fn crowding_distance(front: &[ObjectivePair]) -> Vec<f64> {
    let n = front.len();
    let mut distance = vec![0.0; n];
    if n <= 2 {
        distance.iter_mut().for_each(|d| *d = f64::INFINITY);
        return distance;
    }
    let mut order: Vec<usize> = (0..n).collect();
    for m in 0..2 {
        order.sort_by(|&a, &b| {
            front[a][m]
                .partial_cmp(&front[b][m])
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let lo = front[order[0]][m];
        let hi = front[order[n - 1]][m];
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let gap = front[order[w + 1]][m] - front[order[w - 1]][m];
            distance[order[w]] += gap / range;
        }
    }
    distance
}
