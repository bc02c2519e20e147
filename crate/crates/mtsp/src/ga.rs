//! Genetic-algorithm baseline over assignment vectors, sharing the
//! distance matrix, 2-opt route evaluation, and lexicographic objective
//! with the migration solver so the two are directly comparable.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::allocator::{initial_assignment, lex_less, repair_empty_clusters, Solution, TraceEntry};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::metric::DistanceMatrix;
use crate::routing::{solve_cluster_tsp, Route, TwoOptConfig};

#[derive(Debug, Clone)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    /// Per-gene probability of resampling a uniform agent index.
    pub mutation_rate: f64,
    pub tournament_size: usize,
    /// Lexicographic-best individuals copied unchanged each generation.
    pub elitism: usize,
    pub seed: u64,
    pub two_opt: TwoOptConfig,
    /// Wall-clock budget, checked at generation boundaries.
    pub budget: Option<Duration>,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population: 80,
            generations: 100,
            mutation_rate: 0.05,
            tournament_size: 3,
            elitism: 2,
            seed: 0,
            two_opt: TwoOptConfig::default(),
            budget: None,
        }
    }
}

impl GaConfig {
    fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::InvalidInput("population must be at least 2".to_string()));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::InvalidInput(format!(
                "mutation_rate must be in [0,1], got {}",
                self.mutation_rate
            )));
        }
        if self.elitism >= self.population {
            return Err(Error::InvalidInput(
                "elitism must be smaller than population".to_string(),
            ));
        }
        if self.tournament_size < 1 {
            return Err(Error::InvalidInput("tournament_size must be at least 1".to_string()));
        }
        if self.generations < 1 {
            return Err(Error::InvalidInput("generations must be at least 1".to_string()));
        }
        Ok(())
    }
}

#[derive(Clone)]
struct Individual {
    genes: Vec<usize>,
    fitness: (f64, f64),
}

fn lex_cmp(a: (f64, f64), b: (f64, f64)) -> Ordering {
    a.0.partial_cmp(&b.0)
        .expect("costs are finite")
        .then(a.1.partial_cmp(&b.1).expect("costs are finite"))
}

fn decode_clusters(d: &DistanceMatrix, genes: &[usize]) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); d.depot_count()];
    for (i, &g) in genes.iter().enumerate() {
        clusters[g].push(d.task(i));
    }
    clusters
}

fn fitness(
    d: &DistanceMatrix,
    genes: &[usize],
    two_opt: &TwoOptConfig,
    evaluation_calls: &mut u64,
) -> (f64, f64) {
    let mut max = 0.0f64;
    let mut total = 0.0;
    for (g, cluster) in decode_clusters(d, genes).iter().enumerate() {
        let cost = solve_cluster_tsp(d, g, cluster, two_opt).cost;
        *evaluation_calls += 1;
        if cost > max {
            max = cost;
        }
        total += cost;
    }
    (max, total)
}

fn tournament<'a>(pop: &'a [Individual], size: usize, rng: &mut ChaCha8Rng) -> &'a Individual {
    let mut best = &pop[rng.random_range(0..pop.len())];
    for _ in 1..size {
        let challenger = &pop[rng.random_range(0..pop.len())];
        if lex_less(challenger.fitness, best.fitness) {
            best = challenger;
        }
    }
    best
}

/// Evolve assignment vectors under the lexicographic objective.
///
/// The initial population holds one nearest-depot-seeded individual; the
/// rest assign one random task to every agent and the remainder
/// uniformly. Each generation applies tournament selection, uniform
/// crossover, per-gene mutation, and empty-cluster repair, with the
/// lexicographic-best individuals preserved by elitism.
pub fn ga_solve(inst: &Instance, cfg: &GaConfig) -> Result<Solution> {
    let start = Instant::now();
    cfg.validate()?;
    inst.validate()?;
    if inst.n < inst.k {
        return Err(Error::Infeasible(
            "cannot guarantee one task per agent: n < k".to_string(),
        ));
    }
    let d = DistanceMatrix::build(inst)?;
    let (k, n) = (inst.k, inst.n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut evaluation_calls: u64 = 0;

    let mut population: Vec<Individual> = Vec::with_capacity(cfg.population);
    let seeded = initial_assignment(inst, &d)?;
    let seeded_fitness = fitness(&d, &seeded, &cfg.two_opt, &mut evaluation_calls);
    population.push(Individual {
        genes: seeded,
        fitness: seeded_fitness,
    });
    let mut task_ids: Vec<usize> = (0..n).collect();
    while population.len() < cfg.population {
        let mut genes = vec![0usize; n];
        task_ids.shuffle(&mut rng);
        for (g, &i) in task_ids[..k].iter().enumerate() {
            genes[i] = g;
        }
        for &i in &task_ids[k..] {
            genes[i] = rng.random_range(0..k);
        }
        let fit = fitness(&d, &genes, &cfg.two_opt, &mut evaluation_calls);
        population.push(Individual { genes, fitness: fit });
    }

    let mut incumbent = population
        .iter()
        .min_by(|a, b| lex_cmp(a.fitness, b.fitness))
        .expect("population is non-empty")
        .clone();
    let mut trace = vec![TraceEntry {
        iter: 0,
        max: incumbent.fitness.0,
        total: incumbent.fitness.1,
        moves: 0,
    }];

    let mut generations_run = 0;
    for generation in 1..=cfg.generations {
        if let Some(budget) = cfg.budget {
            if start.elapsed() > budget {
                return Err(Error::Timeout {
                    elapsed_s: start.elapsed().as_secs_f64(),
                    iterations: generations_run,
                    evaluation_calls,
                });
            }
        }

        let mut ranked: Vec<usize> = (0..population.len()).collect();
        ranked.sort_by(|&a, &b| {
            lex_cmp(population[a].fitness, population[b].fitness).then(a.cmp(&b))
        });
        let mut next: Vec<Individual> = ranked[..cfg.elitism]
            .iter()
            .map(|&i| population[i].clone())
            .collect();

        while next.len() < cfg.population {
            let pa = tournament(&population, cfg.tournament_size, &mut rng);
            let pb = tournament(&population, cfg.tournament_size, &mut rng);
            let mut genes: Vec<usize> = pa
                .genes
                .iter()
                .zip(&pb.genes)
                .map(|(&a, &b)| if rng.random::<bool>() { a } else { b })
                .collect();
            for gene in genes.iter_mut() {
                if rng.random::<f64>() < cfg.mutation_rate {
                    *gene = rng.random_range(0..k);
                }
            }
            repair_empty_clusters(&d, &mut genes);
            let fit = fitness(&d, &genes, &cfg.two_opt, &mut evaluation_calls);
            next.push(Individual { genes, fitness: fit });
        }
        population = next;

        let best = population
            .iter()
            .min_by(|a, b| lex_cmp(a.fitness, b.fitness))
            .expect("population is non-empty");
        let improved = lex_less(best.fitness, incumbent.fitness);
        if improved {
            incumbent = best.clone();
        }
        generations_run = generation;
        trace.push(TraceEntry {
            iter: generation,
            max: incumbent.fitness.0,
            total: incumbent.fitness.1,
            moves: usize::from(improved),
        });
    }

    let routes: Vec<Route> = decode_clusters(&d, &incumbent.genes)
        .iter()
        .enumerate()
        .map(|(g, cluster)| solve_cluster_tsp(&d, g, cluster, &cfg.two_opt))
        .collect();
    let max_cost = routes.iter().map(|r| r.cost).fold(0.0, f64::max);
    let total_cost = routes.iter().map(|r| r.cost).sum();

    Ok(Solution {
        max_cost,
        total_cost,
        iterations: generations_run,
        elapsed_s: start.elapsed().as_secs_f64(),
        evaluation_calls,
        assignment: incumbent.genes,
        routes,
        trace,
        method: Some("ga".to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocator::{solve, SolverConfig};
    use crate::instance::{generate, Region};

    fn tiny_cfg() -> GaConfig {
        GaConfig {
            population: 20,
            generations: 30,
            ..GaConfig::default()
        }
    }

    #[test]
    fn single_agent_matches_migration_solver() {
        let inst = generate(1, 8, Region::default(), 21).unwrap();
        let ga = ga_solve(&inst, &tiny_cfg()).unwrap();
        let prop = solve(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(ga.max_cost, prop.max_cost);
        assert_eq!(ga.method.as_deref(), Some("ga"));
    }

    #[test]
    fn same_seed_is_deterministic() {
        let inst = generate(3, 14, Region::default(), 5).unwrap();
        let a = ga_solve(&inst, &tiny_cfg()).unwrap();
        let b = ga_solve(&inst, &tiny_cfg()).unwrap();
        assert_eq!(a.max_cost, b.max_cost);
        assert_eq!(a.total_cost, b.total_cost);
        assert_eq!(a.assignment, b.assignment);
        assert_eq!(a.trace, b.trace);

        let other = ga_solve(&inst, &GaConfig { seed: 9, ..tiny_cfg() }).unwrap();
        assert_eq!(other.assignment.len(), 14);
    }

    #[test]
    fn incumbent_trace_is_lexicographically_non_increasing() {
        let inst = generate(4, 18, Region::default(), 33).unwrap();
        let sol = ga_solve(&inst, &tiny_cfg()).unwrap();
        for w in sol.trace.windows(2) {
            assert!(!lex_less((w[0].max, w[0].total), (w[1].max, w[1].total)));
        }
    }

    #[test]
    fn every_generation_keeps_clusters_non_empty() {
        let inst = generate(5, 11, Region::default(), 2).unwrap();
        let sol = ga_solve(&inst, &tiny_cfg()).unwrap();
        for g in 0..5 {
            assert!(sol.assignment.contains(&g), "agent {g} idle");
        }
    }

    #[test]
    fn config_validation() {
        let inst = generate(2, 6, Region::default(), 0).unwrap();
        for bad in [
            GaConfig { population: 1, ..GaConfig::default() },
            GaConfig { mutation_rate: 1.5, ..GaConfig::default() },
            GaConfig { elitism: 80, ..GaConfig::default() },
            GaConfig { generations: 0, ..GaConfig::default() },
        ] {
            assert!(matches!(ga_solve(&inst, &bad), Err(Error::InvalidInput(_))));
        }
    }

    #[test]
    fn infeasible_when_fewer_tasks_than_agents() {
        let inst = generate(4, 3, Region::default(), 0).unwrap();
        assert!(matches!(
            ga_solve(&inst, &GaConfig::default()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn zero_budget_times_out() {
        let inst = generate(2, 8, Region::default(), 1).unwrap();
        let cfg = GaConfig {
            budget: Some(Duration::ZERO),
            ..GaConfig::default()
        };
        assert!(matches!(ga_solve(&inst, &cfg), Err(Error::Timeout { .. })));
    }
}
