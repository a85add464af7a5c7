use rand::seq::SliceRandom;

use super::Gene;
use crate::error::Result;
use crate::seed;

/// Genes stepping from one endpoint to the other one entry at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct Transect<V> {
    pub points: Vec<Gene<V>>,
    /// Positions in the order they were switched to the far endpoint's values.
    pub order: Vec<usize>,
}

impl<V: Copy + PartialEq> Transect<V> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points strictly between the endpoints. A transect of one or two points
    /// has no interior and yields all of its points instead.
    pub fn interior(&self) -> &[Gene<V>] {
        if self.points.len() >= 3 {
            &self.points[1..self.points.len() - 1]
        } else {
            &self.points
        }
    }
}

/// Walks from `a` to `b`, copying the differing unlocked entries of `b` into
/// `a` in a uniformly random order.
pub fn random_transect<V: Copy + PartialEq>(a: &Gene<V>, b: &Gene<V>, rng_seed: u64) -> Result<Transect<V>> {
    a.compatible(b)?;
    let mut order: Vec<usize> = (0..a.len())
        .filter(|&p| !a.is_locked(p) && a.values[p] != b.values[p])
        .collect();
    order.shuffle(&mut seed::rng(rng_seed));
    let mut points = Vec::with_capacity(order.len() + 1);
    let mut cur = a.clone();
    points.push(cur.clone());
    for &p in &order {
        cur.values[p] = b.values[p];
        points.push(cur.clone());
    }
    Ok(Transect { points, order })
}
