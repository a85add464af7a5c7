//! Evolutionary search over fixed-length genes.
//!
//! The engine runs disjoint tournaments: each generation shuffles the
//! population and cuts it into groups of `tournament_size`. In every group the
//! two fittest members breed and their children replace the least fit members,
//! so the group winner always survives. Breeding is either two-point crossover
//! of the winners or, with probability `single_parent_rate`, single-parent
//! crossover of each winner against an immortal ancestor gene.
//!
//! All random choices for a generation are drawn serially first; the children
//! are then scored in parallel and committed in group order, so a seed fixes
//! the whole run.

pub mod apoptotic;
mod transect;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;
use crate::seed;

pub use transect::{random_transect, Transect};

/// Values plus the positions that no operator may change.
#[derive(Debug, Clone, PartialEq)]
pub struct Gene<V> {
    values: Vec<V>,
    locked: Vec<usize>,
}

impl<V: Copy + PartialEq> Gene<V> {
    pub fn new(values: Vec<V>, mut locked: Vec<usize>) -> Result<Self> {
        locked.sort_unstable();
        locked.dedup();
        if let Some(&p) = locked.iter().find(|&&p| p >= values.len()) {
            return Err(Error::PositionOutOfRange(p));
        }
        Ok(Self { values, locked })
    }

    pub fn unlocked(values: Vec<V>) -> Self {
        Self {
            values,
            locked: Vec::new(),
        }
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn locked(&self) -> &[usize] {
        &self.locked
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_locked(&self, pos: usize) -> bool {
        self.locked.binary_search(&pos).is_ok()
    }

    pub fn hamming(&self, other: &Self) -> usize {
        self.values.iter().zip(&other.values).filter(|(a, b)| a != b).count()
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        if self.locked != other.locked {
            return Err(Error::LockMismatch);
        }
        Ok(())
    }
}

fn check_cuts(len: usize, cut1: usize, cut2: usize) -> Result<()> {
    if cut1 > cut2 || cut2 > len {
        return Err(invalid(format!("cuts ({cut1}, {cut2}) invalid for length {len}")));
    }
    Ok(())
}

/// Swaps the segment `[cut1, cut2)` between the parents. Locked positions keep
/// each child's own parent's value.
pub fn two_point_crossover<V: Copy + PartialEq>(
    a: &Gene<V>,
    b: &Gene<V>,
    cut1: usize,
    cut2: usize,
) -> Result<(Gene<V>, Gene<V>)> {
    a.compatible(b)?;
    check_cuts(a.len(), cut1, cut2)?;
    let mut x = a.clone();
    let mut y = b.clone();
    x.values[cut1..cut2].copy_from_slice(&b.values[cut1..cut2]);
    y.values[cut1..cut2].copy_from_slice(&a.values[cut1..cut2]);
    for &p in &a.locked {
        x.values[p] = a.values[p];
        y.values[p] = b.values[p];
    }
    Ok((x, y))
}

/// The parent-side child of a two-point crossover with an ancestor: the
/// parent's values outside `[cut1, cut2)`, the ancestor's inside. The
/// ancestor is only read.
pub fn single_parent_crossover<V: Copy + PartialEq>(
    parent: &Gene<V>,
    ancestor: &Gene<V>,
    cut1: usize,
    cut2: usize,
) -> Result<Gene<V>> {
    Ok(two_point_crossover(parent, ancestor, cut1, cut2)?.0)
}

pub fn point_mutate<V: Copy + PartialEq>(g: &Gene<V>, position: usize, new_value: V) -> Result<Gene<V>> {
    if position >= g.len() {
        return Err(Error::PositionOutOfRange(position));
    }
    if g.is_locked(position) {
        return Err(Error::LockedPosition(position));
    }
    let mut out = g.clone();
    out.values[position] = new_value;
    Ok(out)
}

/// The space genes live in: length, locked values, how to draw and perturb values.
pub trait GeneSpace<V: Copy + PartialEq>: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(position, value)` pairs fixed for every gene in the space.
    fn locked(&self) -> &[(usize, V)];

    fn contains(&self, position: usize, value: V) -> bool;

    fn random_value<R: Rng + ?Sized>(&self, position: usize, rng: &mut R) -> V;

    fn mutate_value<R: Rng + ?Sized>(&self, position: usize, current: V, rng: &mut R) -> V;

    fn random_gene<R: Rng + ?Sized>(&self, rng: &mut R) -> Gene<V> {
        let mut values: Vec<V> = (0..self.len()).map(|p| self.random_value(p, rng)).collect();
        for &(p, v) in self.locked() {
            values[p] = v;
        }
        Gene {
            values,
            locked: self.locked().iter().map(|&(p, _)| p).collect(),
        }
    }

    /// Length, lock set, locked values and value ranges all match the space.
    fn admits(&self, g: &Gene<V>) -> bool {
        g.len() == self.len()
            && g.locked.len() == self.locked().len()
            && self.locked().iter().all(|&(p, v)| g.is_locked(p) && g.values[p] == v)
            && g.values.iter().enumerate().all(|(p, &v)| self.contains(p, v))
    }
}

/// Integer alleles in `0..arity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteSpace {
    len: usize,
    arity: u16,
    locked: Vec<(usize, u8)>,
}

impl DiscreteSpace {
    pub fn new(len: usize, arity: u16, mut locked: Vec<(usize, u8)>) -> Result<Self> {
        if !(1..=256).contains(&arity) {
            return Err(invalid("arity must lie in 1..=256"));
        }
        locked.sort_unstable();
        locked.dedup_by_key(|e| e.0);
        if locked.iter().any(|&(p, v)| p >= len || u16::from(v) >= arity) {
            return Err(invalid("locked entry outside the space"));
        }
        Ok(Self { len, arity, locked })
    }

    pub fn binary(len: usize) -> Self {
        Self {
            len,
            arity: 2,
            locked: Vec::new(),
        }
    }

    pub fn arity(&self) -> u16 {
        self.arity
    }
}

impl GeneSpace<u8> for DiscreteSpace {
    fn len(&self) -> usize {
        self.len
    }

    fn locked(&self) -> &[(usize, u8)] {
        &self.locked
    }

    fn contains(&self, _position: usize, value: u8) -> bool {
        u16::from(value) < self.arity
    }

    fn random_value<R: Rng + ?Sized>(&self, _position: usize, rng: &mut R) -> u8 {
        rng.random_range(0..self.arity) as u8
    }

    /// A uniformly chosen value different from `current` (when one exists).
    fn mutate_value<R: Rng + ?Sized>(&self, _position: usize, current: u8, rng: &mut R) -> u8 {
        if self.arity < 2 {
            return current;
        }
        let v = rng.random_range(0..self.arity - 1) as u8;
        if v >= current {
            v + 1
        } else {
            v
        }
    }
}

/// Real alleles initialised uniformly in `[low, high)` and mutated by adding
/// Gaussian noise with standard deviation `sigma`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSpace<T> {
    len: usize,
    low: T,
    high: T,
    sigma: T,
}

impl<T: Real> RealSpace<T> {
    pub fn new(len: usize, low: T, high: T, sigma: T) -> Result<Self> {
        if !low.is_finite() || !high.is_finite() || low >= high || sigma.is_nan() || sigma <= T::zero() {
            return Err(invalid("real space needs low < high and sigma > 0"));
        }
        Ok(Self { len, low, high, sigma })
    }
}

impl<T: Real> GeneSpace<T> for RealSpace<T> {
    fn len(&self) -> usize {
        self.len
    }

    fn locked(&self) -> &[(usize, T)] {
        &[]
    }

    fn contains(&self, _position: usize, value: T) -> bool {
        value.is_finite()
    }

    fn random_value<R: Rng + ?Sized>(&self, _position: usize, rng: &mut R) -> T {
        let u: f64 = rng.random();
        self.low + (self.high - self.low) * T::of(u)
    }

    fn mutate_value<R: Rng + ?Sized>(&self, _position: usize, current: T, rng: &mut R) -> T {
        let z: f64 = StandardNormal.sample(rng);
        current + self.sigma * T::of(z)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub generations: usize,
    pub tournament_size: usize,
    /// Point mutations applied to each child.
    pub mutation_count: usize,
    pub single_parent_rate: f64,
    pub rng_seed: u64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            generations: 200,
            tournament_size: 7,
            mutation_count: 1,
            single_parent_rate: 0.0,
            rng_seed: 0,
        }
    }
}

impl EvolutionConfig {
    /// Default single-parent rate when ancestors are supplied.
    pub const DEFAULT_SINGLE_PARENT_RATE: f64 = 0.5;

    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 || self.generations == 0 {
            return Err(invalid("population size and generations must be positive"));
        }
        if self.tournament_size < 2 || self.tournament_size > self.population_size {
            return Err(invalid("tournament size must lie in 2..=population size"));
        }
        if !(0.0..=1.0).contains(&self.single_parent_rate) {
            return Err(invalid("single-parent rate must lie in [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
}

#[derive(Debug, Clone)]
pub struct EvolutionResult<V> {
    /// Best gene seen at any point of the run.
    pub best: Gene<V>,
    pub best_fitness: f64,
    pub trace: Vec<TraceRow>,
    /// Final population with fitness values.
    pub population: Vec<(Gene<V>, f64)>,
    pub evaluations: usize,
}

/// `generation,best,mean` rows with a header line.
pub fn trace_csv(trace: &[TraceRow]) -> String {
    let mut s = String::from("generation,best,mean\n");
    for r in trace {
        s.push_str(&format!("{},{},{}\n", r.generation, r.best, r.mean));
    }
    s
}

/// One breeding event as seen by an observer.
#[derive(Debug)]
pub struct BreedingEvent<'a, V> {
    pub generation: usize,
    pub parents: [&'a Gene<V>; 2],
    /// Present for single-parent events; each parent was crossed with it.
    pub ancestor: Option<&'a Gene<V>>,
    /// Cut pairs, one per produced child.
    pub cuts: &'a [(usize, usize)],
    /// Children straight out of crossover.
    pub crossed: &'a [Gene<V>],
    /// `(child, position, value)` point mutations applied after crossover.
    pub mutations: &'a [(usize, usize, V)],
    /// Children as inserted into the population.
    pub children: &'a [Gene<V>],
    pub fitness: &'a [f64],
}

struct Plan<V> {
    parents: [usize; 2],
    replaced: Vec<usize>,
    ancestor: Option<usize>,
    cuts: Vec<(usize, usize)>,
    crossed: Vec<Gene<V>>,
    mutations: Vec<(usize, usize, V)>,
    children: Vec<Gene<V>>,
}

pub fn evolve<V, S, F>(
    config: &EvolutionConfig,
    space: &S,
    fitness: F,
    ancestors: &[Gene<V>],
) -> Result<EvolutionResult<V>>
where
    V: Copy + PartialEq + Send + Sync,
    S: GeneSpace<V>,
    F: Fn(&Gene<V>) -> f64 + Sync,
{
    evolve_observed(config, space, fitness, ancestors, |_| {})
}

/// [`evolve`] with a callback invoked for every breeding event after the
/// children have been scored.
pub fn evolve_observed<V, S, F, O>(
    config: &EvolutionConfig,
    space: &S,
    fitness: F,
    ancestors: &[Gene<V>],
    mut observer: O,
) -> Result<EvolutionResult<V>>
where
    V: Copy + PartialEq + Send + Sync,
    S: GeneSpace<V>,
    F: Fn(&Gene<V>) -> f64 + Sync,
    O: FnMut(&BreedingEvent<'_, V>),
{
    config.validate()?;
    if config.single_parent_rate > 0.0 && ancestors.is_empty() {
        return Err(Error::MissingAncestors);
    }
    if let Some(a) = ancestors.iter().find(|a| !space.admits(a)) {
        return Err(if a.len() != space.len() {
            Error::LengthMismatch(a.len(), space.len())
        } else {
            invalid("ancestor does not belong to the gene space")
        });
    }

    let mut rng = seed::rng(config.rng_seed);
    let mut population: Vec<Gene<V>> = (0..config.population_size)
        .map(|_| space.random_gene(&mut rng))
        .collect();
    let mut scores: Vec<f64> = population.par_iter().map(&fitness).collect();
    let mut evaluations = population.len();

    let mut best_idx = argmax(&scores);
    let mut best = population[best_idx].clone();
    let mut best_fitness = scores[best_idx];
    let mut trace = Vec::with_capacity(config.generations);
    let unlocked: Vec<usize> = (0..space.len())
        .filter(|p| !space.locked().iter().any(|&(q, _)| q == *p))
        .collect();
    let replace_count = 2.min(config.tournament_size - 1);

    let mut order: Vec<usize> = (0..config.population_size).collect();
    for generation in 1..=config.generations {
        order.shuffle(&mut rng);
        let mut plans = Vec::new();
        for group in order.chunks_exact(config.tournament_size) {
            let mut ranked = group.to_vec();
            // stable: equal scores keep shuffled order
            ranked.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
            let parents = [ranked[0], ranked[1]];
            let replaced = ranked[ranked.len() - replace_count..].to_vec();

            let use_ancestor = config.single_parent_rate > 0.0 && rng.random_bool(config.single_parent_rate);
            let ancestor = use_ancestor.then(|| rng.random_range(0..ancestors.len()));
            let len = space.len();
            let cut = |rng: &mut seed::Rng| {
                let a = rng.random_range(0..=len);
                let b = rng.random_range(0..=len);
                (a.min(b), a.max(b))
            };
            let (p0, p1) = (&population[parents[0]], &population[parents[1]]);
            let (cuts, crossed) = match ancestor {
                Some(ai) => {
                    let c0 = cut(&mut rng);
                    let c1 = cut(&mut rng);
                    let k0 = single_parent_crossover(p0, &ancestors[ai], c0.0, c0.1)?;
                    let k1 = single_parent_crossover(p1, &ancestors[ai], c1.0, c1.1)?;
                    (vec![c0, c1], vec![k0, k1])
                }
                None => {
                    let c = cut(&mut rng);
                    let (k0, k1) = two_point_crossover(p0, p1, c.0, c.1)?;
                    (vec![c, c], vec![k0, k1])
                }
            };
            let mut children: Vec<Gene<V>> = crossed[..replace_count].to_vec();
            let mut mutations = Vec::new();
            for (ci, child) in children.iter_mut().enumerate() {
                if unlocked.is_empty() {
                    break;
                }
                for _ in 0..config.mutation_count {
                    let pos = unlocked[rng.random_range(0..unlocked.len())];
                    let value = space.mutate_value(pos, child.values[pos], &mut rng);
                    child.values[pos] = value;
                    mutations.push((ci, pos, value));
                }
            }
            plans.push(Plan {
                parents,
                replaced,
                ancestor,
                cuts: cuts[..replace_count].to_vec(),
                crossed: crossed[..replace_count].to_vec(),
                mutations,
                children,
            });
        }

        let child_scores: Vec<Vec<f64>> = plans
            .par_iter()
            .map(|p| p.children.iter().map(&fitness).collect())
            .collect();
        evaluations += child_scores.iter().map(Vec::len).sum::<usize>();

        for (plan, fit) in plans.iter().zip(&child_scores) {
            observer(&BreedingEvent {
                generation,
                parents: [&population[plan.parents[0]], &population[plan.parents[1]]],
                ancestor: plan.ancestor.map(|i| &ancestors[i]),
                cuts: &plan.cuts,
                crossed: &plan.crossed,
                mutations: &plan.mutations,
                children: &plan.children,
                fitness: fit,
            });
        }
        for (plan, fit) in plans.into_iter().zip(child_scores) {
            for ((slot, child), f) in plan.replaced.into_iter().zip(plan.children).zip(fit) {
                population[slot] = child;
                scores[slot] = f;
            }
        }

        best_idx = argmax(&scores);
        if scores[best_idx] > best_fitness {
            best_fitness = scores[best_idx];
            best = population[best_idx].clone();
        }
        trace.push(TraceRow {
            generation,
            best: scores[best_idx],
            mean: scores.iter().sum::<f64>() / scores.len() as f64,
        });
    }

    Ok(EvolutionResult {
        best,
        best_fitness,
        trace,
        population: population.into_iter().zip(scores).collect(),
        evaluations,
    })
}

fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    best
}
