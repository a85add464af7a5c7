//! Evolution, transects and single-parent runs specialised to apoptotic rules.

use rayon::prelude::*;

use super::{evolve_observed, random_transect, BreedingEvent, DiscreteSpace, EvolutionConfig, EvolutionResult, Gene};
use crate::ca1d::{evaluate_fitness, ApoptoticRule, Arena, RULE_LEN, STATES};
use crate::error::Result;
use crate::seed;

/// 36 entries over `0..8` with entry 0 locked at 0.
pub fn rule_space() -> DiscreteSpace {
    DiscreteSpace::new(RULE_LEN, u16::from(STATES), vec![(0, 0)]).expect("valid rule space")
}

pub fn rule_gene(rule: &ApoptoticRule) -> Gene<u8> {
    Gene::new(rule.entries().to_vec(), vec![0]).expect("position 0 exists")
}

pub fn gene_rule(gene: &Gene<u8>) -> Result<ApoptoticRule> {
    ApoptoticRule::from_slice(gene.values())
}

/// Fitness of a rule gene from a single centered seed in state 1. Genes that
/// do not decode to a valid rule score 0.
pub fn gene_fitness(gene: &Gene<u8>, arena: Arena) -> f64 {
    gene_rule(gene)
        .and_then(|r| evaluate_fitness(&r, arena, 1))
        .map_or(0.0, |f| f as f64)
}

/// Engine settings for rule evolution. Most random rules either die on the
/// first step (fitness 1) or never die (fitness 0), so small tournaments and
/// several mutations per child are needed to leave that plateau.
pub fn rule_config(population_size: usize, generations: usize, rng_seed: u64) -> EvolutionConfig {
    EvolutionConfig {
        population_size,
        generations,
        tournament_size: 3,
        mutation_count: 5,
        single_parent_rate: 0.0,
        rng_seed,
    }
}

pub fn evolve_rules(
    config: &EvolutionConfig,
    arena: Arena,
    ancestors: &[ApoptoticRule],
) -> Result<EvolutionResult<u8>> {
    evolve_rules_observed(config, arena, ancestors, |_| {})
}

pub fn evolve_rules_observed<O>(
    config: &EvolutionConfig,
    arena: Arena,
    ancestors: &[ApoptoticRule],
    observer: O,
) -> Result<EvolutionResult<u8>>
where
    O: FnMut(&BreedingEvent<'_, u8>),
{
    let genes: Vec<Gene<u8>> = ancestors.iter().map(rule_gene).collect();
    evolve_observed(config, &rule_space(), |g| gene_fitness(g, arena), &genes, observer)
}

/// Default arena for single-parent re-rendering.
pub const LARGE_ARENA: usize = 401;

/// Evolves rules on a (typically enlarged) arena with single-parent crossover
/// against `ancestor`. `config.single_parent_rate` must be positive.
pub fn single_parent_run<O>(
    config: &EvolutionConfig,
    arena: Arena,
    ancestor: &ApoptoticRule,
    observer: O,
) -> Result<EvolutionResult<u8>>
where
    O: FnMut(&BreedingEvent<'_, u8>),
{
    evolve_rules_observed(config, arena, std::slice::from_ref(ancestor), observer)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnrichmentReport {
    /// Mean fitness over transect interior points.
    pub transect_mean: f64,
    /// Mean fitness of uniformly random rules.
    pub random_mean: f64,
    /// `transect_mean / random_mean`; infinite when only the random mean is 0,
    /// 0 when both are.
    pub ratio: f64,
    pub transect_points: usize,
    pub random_samples: usize,
}

impl EnrichmentReport {
    pub fn to_text(&self) -> String {
        format!(
            "{}transect_mean {}\nrandom_mean {}\nratio {}\ntransect_points {}\nrandom_samples {}\n",
            crate::format::header("enrichment"),
            self.transect_mean,
            self.random_mean,
            self.ratio,
            self.transect_points,
            self.random_samples
        )
    }
}

/// Compares fitness along random transects between two rules with the
/// fitness of uniformly random rules.
pub fn transect_enrichment(
    rule_a: &ApoptoticRule,
    rule_b: &ApoptoticRule,
    n_transects: usize,
    n_random: usize,
    arena: Arena,
    rng_seed: u64,
) -> Result<EnrichmentReport> {
    let a = rule_gene(rule_a);
    let b = rule_gene(rule_b);
    let transect_seed = seed::derive(rng_seed, "transects");
    let mut points: Vec<Gene<u8>> = Vec::new();
    for i in 0..n_transects {
        let t = random_transect(&a, &b, seed::derive(transect_seed, &i.to_string()))?;
        points.extend_from_slice(t.interior());
    }
    let mut rng = seed::rng(seed::derive(rng_seed, "random-rules"));
    let randoms: Vec<ApoptoticRule> = (0..n_random).map(|_| ApoptoticRule::random(&mut rng)).collect();

    let transect_total: f64 = points.par_iter().map(|g| gene_fitness(g, arena)).sum();
    let random_total: f64 = randoms
        .par_iter()
        .map(|r| evaluate_fitness(r, arena, 1).map_or(0.0, |f| f as f64))
        .sum();
    let mean = |total: f64, n: usize| if n == 0 { 0.0 } else { total / n as f64 };
    let transect_mean = mean(transect_total, points.len());
    let random_mean = mean(random_total, randoms.len());
    let ratio = if random_mean > 0.0 {
        transect_mean / random_mean
    } else if transect_mean > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    Ok(EnrichmentReport {
        transect_mean,
        random_mean,
        ratio,
        transect_points: points.len(),
        random_samples: randoms.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_endpoints_give_their_fitness() {
        let arena = Arena::square(41).unwrap();
        let r = ApoptoticRule::random(&mut seed::rng(8));
        let rep = transect_enrichment(&r, &r, 5, 10, arena, 1).unwrap();
        assert_eq!(rep.transect_mean, evaluate_fitness(&r, arena, 1).unwrap() as f64);
        assert_eq!(rep.transect_points, 5);
        assert!(rep.ratio >= 0.0);
    }

    #[test]
    fn random_baseline_contains_zero_fitness_rules() {
        let arena = Arena::square(41).unwrap();
        let mut rng = seed::rng(2);
        let zeros = (0..200)
            .map(|_| ApoptoticRule::random(&mut rng))
            .filter(|r| evaluate_fitness(r, arena, 1).unwrap() == 0)
            .count();
        assert!(zeros > 0);
    }

    #[test]
    fn evolution_improves_on_random_rules() {
        let cfg = rule_config(40, 60, 3);
        let arena = Arena::square(41).unwrap();
        let r = evolve_rules(&cfg, arena, &[]).unwrap();
        assert_eq!(r.best_fitness, gene_fitness(&r.best, arena));
        assert!(r.best_fitness > 1.0);
        assert!(r.trace.windows(2).all(|w| w[1].best >= w[0].best));
        assert!(r.best.values()[0] == 0);
    }

    #[test]
    fn gene_round_trip() {
        let r = ApoptoticRule::random(&mut seed::rng(4));
        assert_eq!(gene_rule(&rule_gene(&r)).unwrap(), r);
    }
}
