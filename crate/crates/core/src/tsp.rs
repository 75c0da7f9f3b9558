//! Depot-anchored closed tours over a [`TimeMatrix`].
//!
//! Every solver returns a permutation of `1..=m`; the depot 0 is implicitly
//! first and last. `a_inf` legs stay in the objective at their sentinel
//! value, which repels solvers from them without making any tour illegal.
//! A tour that still uses one is flagged `tainted`.
//!
//! All randomized solvers draw from a ChaCha generator seeded by the caller,
//! start from (or include) the nearest-neighbour tour, and return the best
//! tour ever seen, so they never do worse than nearest neighbour.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timing::{tour_time, TimeMatrix};

/// Largest instance [`brute_force`] accepts.
pub const BRUTE_FORCE_MAX: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    Sa,
    Ga,
    Aco,
    Nn,
    BruteForce,
}

impl Solver {
    pub fn name(&self) -> &'static str {
        match self {
            Solver::Sa => "SA",
            Solver::Ga => "GA",
            Solver::Aco => "ACO",
            Solver::Nn => "NN",
            Solver::BruteForce => "BruteForce",
        }
    }
}

impl std::str::FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sa" => Ok(Solver::Sa),
            "ga" => Ok(Solver::Ga),
            "aco" => Ok(Solver::Aco),
            "nn" => Ok(Solver::Nn),
            "brute" | "brute_force" | "bruteforce" => Ok(Solver::BruteForce),
            other => Err(Error::InvalidConfig(format!("unknown solver `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    /// Visiting order over matrix indices `1..=m`.
    pub order: Vec<usize>,
    pub total_time: f64,
    pub tainted: bool,
    pub solver: Solver,
    pub seed: u64,
    /// Candidate evaluations performed.
    pub iterations: u64,
    /// Best cost after each outer iteration (temperature, generation, colony
    /// cycle). Empty for deterministic solvers.
    #[serde(skip)]
    pub history: Vec<f64>,
}

impl Tour {
    fn evaluated(order: Vec<usize>, t: &TimeMatrix, solver: Solver, seed: u64, iterations: u64) -> Self {
        let cost = tour_time(&order, t);
        Self { order, total_time: cost.total, tainted: cost.tainted, solver, seed, iterations, history: Vec::new() }
    }

    /// Maps reduced-matrix indices back through `kept` (as produced by
    /// [`preprocess_inaccessible`]).
    pub fn remapped(mut self, kept: &[usize]) -> Self {
        for i in &mut self.order {
            *i = kept[*i];
        }
        self
    }
}

/// True when `order` visits each of `1..=m` exactly once.
pub fn is_valid_permutation(order: &[usize], m: usize) -> bool {
    let mut seen = vec![false; m + 1];
    order.len() == m
        && order.iter().all(|&i| {
            let ok = (1..=m).contains(&i) && !seen[i];
            if ok {
                seen[i] = true;
            }
            ok
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SaParams {
    /// Defaults to the mean finite off-diagonal entry times m.
    pub initial_temperature: Option<f64>,
    pub cooling_rate: f64,
    /// Defaults to 100·m.
    pub iterations_per_temperature: Option<usize>,
    /// Defaults to the initial temperature times 1e-6.
    pub final_temperature: Option<f64>,
}

impl Default for SaParams {
    fn default() -> Self {
        Self { initial_temperature: None, cooling_rate: 0.995, iterations_per_temperature: None, final_temperature: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaParams {
    pub population: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub tournament: usize,
}

impl Default for GaParams {
    fn default() -> Self {
        Self { population: 100, generations: 500, crossover_rate: 0.9, mutation_rate: 0.2, tournament: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AcoParams {
    pub ants: usize,
    pub iterations: usize,
    /// Pheromone evaporation ρ.
    pub evaporation: f64,
    /// Pheromone exponent α.
    pub alpha: f64,
    /// Desirability exponent β.
    pub beta: f64,
}

impl Default for AcoParams {
    fn default() -> Self {
        Self { ants: 20, iterations: 200, evaporation: 0.1, alpha: 1.0, beta: 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverParams {
    pub sa: SaParams,
    pub ga: GaParams,
    pub aco: AcoParams,
    pub seed: u64,
}

fn rate(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("{name} must lie in (0, 1), got {v}")))
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        rate("sa.cooling_rate", self.sa.cooling_rate)?;
        rate("ga.crossover_rate", self.ga.crossover_rate)?;
        rate("ga.mutation_rate", self.ga.mutation_rate)?;
        rate("aco.evaporation", self.aco.evaporation)?;
        for (name, v) in [("sa.initial_temperature", self.sa.initial_temperature), ("sa.final_temperature", self.sa.final_temperature)] {
            if v.is_some_and(|v| !(v > 0.0 && v.is_finite())) {
                return Err(Error::InvalidConfig(format!("{name} must be positive")));
            }
        }
        if self.ga.population == 0 || self.ga.tournament == 0 || self.aco.ants == 0 {
            return Err(Error::InvalidConfig("population, tournament and ants must be positive".into()));
        }
        if !(self.aco.alpha >= 0.0 && self.aco.beta >= 0.0) {
            return Err(Error::InvalidConfig("aco exponents must be non-negative".into()));
        }
        Ok(())
    }
}

/// Runs the chosen solver with `params` (seed taken from `params.seed`).
pub fn solve(t: &TimeMatrix, solver: Solver, params: &SolverParams) -> Result<Tour> {
    Ok(match solver {
        Solver::Sa => solve_sa(t, &params.sa, params.seed),
        Solver::Ga => solve_ga(t, &params.ga, params.seed),
        Solver::Aco => solve_aco(t, &params.aco, params.seed),
        Solver::Nn => nearest_neighbor(t),
        Solver::BruteForce => brute_force(t)?,
    })
}

/// Result of removing MPs no untainted tour can visit.
#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub matrix: TimeMatrix,
    /// Original index of each reduced index; `kept[0] == 0`.
    pub kept: Vec<usize>,
    /// Original indices of removed MPs, ascending.
    pub excluded: Vec<usize>,
}

/// Repeatedly drops MPs whose legs to every other remaining index are
/// `a_inf`, then any MP not connected to the depot through finite legs.
pub fn preprocess_inaccessible(t: &TimeMatrix) -> Preprocessed {
    let n = t.order();
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for i in 1..n {
            if alive[i] && (0..n).all(|q| q == i || !alive[q] || t.is_inf(i, q)) {
                alive[i] = false;
                changed = true;
            }
        }
        let mut reached = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        reached[0] = true;
        while let Some(i) = queue.pop_front() {
            for q in 0..n {
                if alive[q] && !reached[q] && !t.is_inf(i, q) {
                    reached[q] = true;
                    queue.push_back(q);
                }
            }
        }
        for i in 1..n {
            if alive[i] && !reached[i] {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    let excluded = (1..n).filter(|&i| !alive[i]).collect();
    Preprocessed { matrix: t.submatrix(&kept), kept, excluded }
}

/// Exact optimum by enumerating all m! orders in lexicographic order; the
/// first minimum found wins ties.
pub fn brute_force(t: &TimeMatrix) -> Result<Tour> {
    let m = t.m();
    if m > BRUTE_FORCE_MAX {
        return Err(Error::TooLarge { max: BRUTE_FORCE_MAX, got: m });
    }
    let mut perm: Vec<usize> = (1..=m).collect();
    let mut best = perm.clone();
    let mut best_cost = tour_time(&perm, t).total;
    let mut count = 1u64;
    while next_permutation(&mut perm) {
        count += 1;
        let c = tour_time(&perm, t).total;
        if c < best_cost {
            best_cost = c;
            best.copy_from_slice(&perm);
        }
    }
    Ok(Tour::evaluated(best, t, Solver::BruteForce, 0, count))
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Greedy tour from the depot; ties go to the lowest index.
pub fn nearest_neighbor(t: &TimeMatrix) -> Tour {
    let m = t.m();
    let mut visited = vec![false; m + 1];
    let mut order = Vec::with_capacity(m);
    let mut cur = 0;
    for _ in 0..m {
        let next = (1..=m)
            .filter(|&q| !visited[q])
            .fold(None, |best: Option<usize>, q| match best {
                Some(b) if t.get(cur, b) <= t.get(cur, q) => Some(b),
                _ => Some(q),
            })
            .expect("an unvisited MP remains");
        visited[next] = true;
        order.push(next);
        cur = next;
    }
    Tour::evaluated(order, t, Solver::Nn, 0, m as u64)
}

/// Neighbour of position `p` in the depot-closed sequence.
#[inline]
fn at(order: &[usize], p: isize) -> usize {
    if p < 0 || p as usize >= order.len() {
        0
    } else {
        order[p as usize]
    }
}

/// Cost change from reversing `order[i..=j]`.
fn reverse_delta(t: &TimeMatrix, order: &[usize], i: usize, j: usize, symmetric: bool) -> f64 {
    let (ii, jj) = (i as isize, j as isize);
    let prev = at(order, ii - 1);
    let next = at(order, jj + 1);
    let (a, b) = (order[i], order[j]);
    let mut delta = t.get(prev, b) + t.get(a, next) - t.get(prev, a) - t.get(b, next);
    if !symmetric {
        for k in i..j {
            delta += t.get(order[k + 1], order[k]) - t.get(order[k], order[k + 1]);
        }
    }
    delta
}

/// Cost change from swapping positions `i < j`.
fn swap_delta(t: &TimeMatrix, order: &[usize], i: usize, j: usize) -> f64 {
    let (ii, jj) = (i as isize, j as isize);
    let (a, b) = (order[i], order[j]);
    let pi = at(order, ii - 1);
    let nj = at(order, jj + 1);
    if j == i + 1 {
        return t.get(pi, b) + t.get(b, a) + t.get(a, nj) - t.get(pi, a) - t.get(a, b) - t.get(b, nj);
    }
    let ni = at(order, ii + 1);
    let pj = at(order, jj - 1);
    t.get(pi, b) + t.get(b, ni) + t.get(pj, a) + t.get(a, nj) - t.get(pi, a) - t.get(a, ni) - t.get(pj, b) - t.get(b, nj)
}

fn mean_finite_entry(t: &TimeMatrix) -> f64 {
    let n = t.order();
    let (sum, count) = (0..n)
        .flat_map(|i| (0..n).map(move |q| (i, q)))
        .filter(|&(i, q)| i != q && !t.is_inf(i, q))
        .fold((0.0, 0usize), |(s, c), (i, q)| (s + t.get(i, q), c + 1));
    if count == 0 {
        t.a_inf()
    } else {
        sum / count as f64
    }
}

/// Simulated annealing over permutations, started from nearest neighbour.
///
/// Each proposal is a 2-opt segment reversal or a pair swap with equal
/// probability, accepted by the Metropolis rule. The temperature decays
/// geometrically from `T₀` to `T_f`, holding for a fixed number of proposals
/// at each level.
pub fn solve_sa(t: &TimeMatrix, p: &SaParams, seed: u64) -> Tour {
    let m = t.m();
    let init = nearest_neighbor(t);
    let mut order = init.order.clone();
    let mut best = order.clone();
    let mut best_cost = init.total_time;
    let mut history = Vec::new();
    let mut iterations = 0u64;
    let per_temp = p.iterations_per_temperature.unwrap_or(100 * m);

    if m >= 2 && per_temp > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let symmetric = t.is_symmetric();
        let t0 = p.initial_temperature.unwrap_or_else(|| mean_finite_entry(t) * m as f64);
        let t0 = if t0 > 0.0 { t0 } else { 1.0 };
        let t_final = p.final_temperature.unwrap_or(t0 * 1e-6);
        let mut temp = t0;
        let mut cost = best_cost;
        while temp > t_final {
            for _ in 0..per_temp {
                iterations += 1;
                let i = rng.gen_range(0..m);
                let mut j = rng.gen_range(0..m - 1);
                if j >= i {
                    j += 1;
                }
                let (i, j) = (i.min(j), i.max(j));
                let reverse = rng.gen_bool(0.5);
                let delta = if reverse { reverse_delta(t, &order, i, j, symmetric) } else { swap_delta(t, &order, i, j) };
                if delta <= 0.0 || rng.gen::<f64>() < (-delta / temp).exp() {
                    if reverse {
                        order[i..=j].reverse();
                    } else {
                        order.swap(i, j);
                    }
                    cost += delta;
                    if cost < best_cost {
                        let exact = tour_time(&order, t).total;
                        if exact < best_cost {
                            best_cost = exact;
                            best.copy_from_slice(&order);
                        }
                    }
                }
            }
            // resync the running cost to stop drift
            cost = tour_time(&order, t).total;
            history.push(best_cost);
            temp *= p.cooling_rate;
        }
    }
    let mut tour = Tour::evaluated(best, t, Solver::Sa, seed, iterations);
    tour.history = history;
    tour
}

/// Genetic algorithm: tournament selection, order crossover, swap mutation,
/// one elite carried over per generation. The initial population holds the
/// nearest-neighbour tour plus random permutations.
pub fn solve_ga(t: &TimeMatrix, p: &GaParams, seed: u64) -> Tour {
    let m = t.m();
    let nn = nearest_neighbor(t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pop_size = p.population.max(1);
    let mut pop: Vec<Vec<usize>> = Vec::with_capacity(pop_size);
    pop.push(nn.order.clone());
    while pop.len() < pop_size {
        let mut ind: Vec<usize> = (1..=m).collect();
        ind.shuffle(&mut rng);
        pop.push(ind);
    }
    let mut costs: Vec<f64> = pop.iter().map(|ind| tour_time(ind, t).total).collect();
    let mut iterations = pop_size as u64;
    let argmin = |costs: &[f64]| {
        costs.iter().enumerate().fold(0, |b, (i, &c)| if c < costs[b] { i } else { b })
    };
    let b = argmin(&costs);
    let mut best = pop[b].clone();
    let mut best_cost = costs[b];
    let mut history = Vec::with_capacity(p.generations);

    if m >= 2 {
        for _ in 0..p.generations {
            let tournament = |rng: &mut ChaCha8Rng, costs: &[f64]| {
                let mut w = rng.gen_range(0..pop_size);
                for _ in 1..p.tournament {
                    let c = rng.gen_range(0..pop_size);
                    if costs[c] < costs[w] || (costs[c] == costs[w] && c < w) {
                        w = c;
                    }
                }
                w
            };
            let mut next = Vec::with_capacity(pop_size);
            next.push(best.clone());
            while next.len() < pop_size {
                let a = tournament(&mut rng, &costs);
                let b = tournament(&mut rng, &costs);
                let mut child = if rng.gen::<f64>() < p.crossover_rate {
                    order_crossover(&pop[a], &pop[b], &mut rng)
                } else {
                    pop[a].clone()
                };
                if rng.gen::<f64>() < p.mutation_rate {
                    let i = rng.gen_range(0..m);
                    let j = rng.gen_range(0..m);
                    child.swap(i, j);
                }
                next.push(child);
            }
            pop = next;
            costs = pop.iter().map(|ind| tour_time(ind, t).total).collect();
            iterations += pop_size as u64;
            let b = argmin(&costs);
            if costs[b] < best_cost {
                best_cost = costs[b];
                best = pop[b].clone();
            }
            history.push(best_cost);
        }
    }
    let mut tour = Tour::evaluated(best, t, Solver::Ga, seed, iterations);
    tour.history = history;
    tour
}

/// OX1: copy a random slice of `a`, fill the rest in `b`'s order starting
/// after the slice.
fn order_crossover(a: &[usize], b: &[usize], rng: &mut impl Rng) -> Vec<usize> {
    let m = a.len();
    let i = rng.gen_range(0..m);
    let j = rng.gen_range(0..m);
    let (lo, hi) = (i.min(j), i.max(j));
    let mut child = vec![0; m];
    let mut used = vec![false; m + 1];
    for k in lo..=hi {
        child[k] = a[k];
        used[a[k]] = true;
    }
    let mut pos = (hi + 1) % m;
    for k in 0..m {
        let gene = b[(hi + 1 + k) % m];
        if !used[gene] {
            child[pos] = gene;
            used[gene] = true;
            pos = (pos + 1) % m;
        }
    }
    child
}

/// Ant colony with pheromone on directed edges.
///
/// Ants leave the depot and pick each next MP with probability proportional
/// to `τ^α · η^β`, `η = 1/T`. After every cycle all trails evaporate by ρ and
/// both the cycle's best ant and the best-ever tour deposit `1/cost`.
pub fn solve_aco(t: &TimeMatrix, p: &AcoParams, seed: u64) -> Tour {
    let m = t.m();
    let n = t.order();
    let nn = nearest_neighbor(t);
    let mut best = nn.order.clone();
    let mut best_cost = nn.total_time;
    let mut history = Vec::with_capacity(p.iterations);
    let mut iterations = 0u64;

    if m >= 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tau0 = 1.0 / (n as f64 * best_cost.max(f64::MIN_POSITIVE));
        let tau_min = tau0 * 1e-6;
        let mut tau = vec![tau0; n * n];
        let eta_beta: Vec<f64> = (0..n * n)
            .map(|k| (1.0 / t.get(k / n, k % n).max(1e-9)).powf(p.beta))
            .collect();
        let mut weights = vec![0.0; n];
        for _ in 0..p.iterations {
            let mut cycle_best: Option<(Vec<usize>, f64)> = None;
            for _ in 0..p.ants {
                iterations += 1;
                let mut visited = vec![false; n];
                let mut order = Vec::with_capacity(m);
                let mut cur = 0;
                for _ in 0..m {
                    let mut sum = 0.0;
                    for q in 1..n {
                        weights[q] = if visited[q] { 0.0 } else { tau[cur * n + q].powf(p.alpha) * eta_beta[cur * n + q] };
                        sum += weights[q];
                    }
                    let next = if sum > 0.0 && sum.is_finite() {
                        let mut r = rng.gen::<f64>() * sum;
                        let mut pick = None;
                        for q in 1..n {
                            if weights[q] > 0.0 {
                                pick = Some(q);
                                if r < weights[q] {
                                    break;
                                }
                                r -= weights[q];
                            }
                        }
                        pick
                    } else {
                        None
                    }
                    .unwrap_or_else(|| (1..n).find(|&q| !visited[q]).expect("unvisited MP"));
                    visited[next] = true;
                    order.push(next);
                    cur = next;
                }
                let cost = tour_time(&order, t).total;
                if cycle_best.as_ref().is_none_or(|(_, c)| cost < *c) {
                    cycle_best = Some((order, cost));
                }
            }
            let (cb, cb_cost) = cycle_best.expect("at least one ant");
            if cb_cost < best_cost {
                best_cost = cb_cost;
                best = cb.clone();
            }
            for v in &mut tau {
                *v = (*v * (1.0 - p.evaporation)).max(tau_min);
            }
            for (tour, cost) in [(&cb, cb_cost), (&best, best_cost)] {
                let dep = 1.0 / cost.max(f64::MIN_POSITIVE);
                let mut prev = 0;
                for &q in tour.iter().chain(std::iter::once(&0)) {
                    tau[prev * n + q] += dep;
                    prev = q;
                }
            }
            history.push(best_cost);
        }
    }
    let mut tour = Tour::evaluated(best, t, Solver::Aco, seed, iterations);
    tour.history = history;
    tour
}

/// Solves, and while the tour is tainted, drops one MP touching an `a_inf`
/// leg (fewest finite legs first, then lowest index) and solves again.
///
/// Returns the untainted tour over original indices and every excluded MP
/// (including those removed by [`preprocess_inaccessible`]).
pub fn solve_untainted(t: &TimeMatrix, solver: Solver, params: &SolverParams) -> Result<(Tour, Vec<usize>)> {
    let mut pre = preprocess_inaccessible(t);
    let mut excluded = pre.excluded.clone();
    loop {
        let tour = solve(&pre.matrix, solver, params)?;
        if !tour.tainted {
            excluded.sort_unstable();
            return Ok((tour.remapped(&pre.kept), excluded));
        }
        let r = &pre.matrix;
        let mut prev = 0;
        let mut suspects = Vec::new();
        for &q in tour.order.iter().chain(std::iter::once(&0)) {
            if r.is_inf(prev, q) {
                suspects.extend([prev, q].into_iter().filter(|&k| k != 0));
            }
            prev = q;
        }
        let degree = |k: usize| (0..r.order()).filter(|&q| q != k && !r.is_inf(k, q)).count();
        let drop = suspects
            .into_iter()
            .min_by_key(|&k| (degree(k), k))
            .ok_or_else(|| Error::Invariant("tainted tour without an a_inf leg".into()))?;
        let keep: Vec<usize> = (0..r.order()).filter(|&k| k != drop).collect();
        let reduced = r.submatrix(&keep);
        let kept_orig: Vec<usize> = keep.iter().map(|&k| pre.kept[k]).collect();
        excluded.push(pre.kept[drop]);
        let again = preprocess_inaccessible(&reduced);
        excluded.extend(again.excluded.iter().map(|&k| kept_orig[k]));
        pre = Preprocessed {
            kept: again.kept.iter().map(|&k| kept_orig[k]).collect(),
            excluded: Vec::new(),
            matrix: again.matrix,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: f64 = 1e6;

    fn matrix(rows: &[&[f64]]) -> TimeMatrix {
        TimeMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), INF).unwrap()
    }

    /// Depot and MPs on a line at x = 0, 1, …, m.
    fn line(m: usize) -> TimeMatrix {
        let rows: Vec<Vec<f64>> = (0..=m).map(|i| (0..=m).map(|q| (i as f64 - q as f64).abs()).collect()).collect();
        TimeMatrix::from_rows(&rows, INF).unwrap()
    }

    fn random_symmetric(m: usize, seed: u64) -> TimeMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<(f64, f64)> = (0..=m).map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0))).collect();
        let rows: Vec<Vec<f64>> = pts
            .iter()
            .map(|a| pts.iter().map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()).collect())
            .collect();
        TimeMatrix::from_rows(&rows, INF).unwrap()
    }

    #[test]
    fn brute_force_small_cases() {
        let t = matrix(&[&[0., 1., 2.], &[1., 0., 1.5], &[2., 1.5, 0.]]);
        let tour = brute_force(&t).unwrap();
        assert_eq!(tour.order, vec![1, 2]);
        assert_eq!(tour.total_time, 4.5);

        let tour = brute_force(&line(4)).unwrap();
        assert_eq!(tour.order, vec![1, 2, 3, 4]);
        assert_eq!(tour.total_time, 8.0);
        assert_eq!(tour.iterations, 24);
    }

    #[test]
    fn brute_force_avoids_inf_edge() {
        let rows: Vec<Vec<f64>> = (0..=4)
            .map(|i| (0..=4).map(|q| if (i, q) == (2, 3) || (i, q) == (3, 2) { INF } else { (i as f64 - q as f64).abs() }).collect())
            .collect();
        let t = TimeMatrix::from_rows(&rows, INF).unwrap();
        let tour = brute_force(&t).unwrap();
        assert!(!tour.tainted);
        assert!(tour.order.windows(2).all(|w| !t.is_inf(w[0], w[1])));
        // enumerate independently
        let mut best = f64::INFINITY;
        let mut perm = vec![1, 2, 3, 4];
        loop {
            best = best.min(tour_time(&perm, &t).total);
            if !next_permutation(&mut perm) {
                break;
            }
        }
        assert_eq!(tour.total_time, best);
    }

    #[test]
    fn brute_force_rejects_large() {
        assert!(matches!(brute_force(&line(11)), Err(Error::TooLarge { got: 11, .. })));
    }

    #[test]
    fn nearest_neighbor_examples() {
        let t = matrix(&[&[0., 1., 1., 1.], &[1., 0., 1., 1.], &[1., 1., 0., 1.], &[1., 1., 1., 0.]]);
        assert_eq!(nearest_neighbor(&t).order, vec![1, 2, 3]);
        assert_eq!(nearest_neighbor(&line(5)).order, vec![1, 2, 3, 4, 5]);
        let t = matrix(&[&[0., INF, 5., INF], &[INF, 0., 1., 2.], &[5., 1., 0., 3.], &[INF, 2., 3., 0.]]);
        let tour = nearest_neighbor(&t);
        assert_eq!(tour.order[0], 2);
        assert!(tour.tainted);
    }

    #[test]
    fn preprocess_examples() {
        let mut rows: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|q| if i == q { 0.0 } else { 1.0 }).collect()).collect();
        let p = preprocess_inaccessible(&TimeMatrix::from_rows(&rows, INF).unwrap());
        assert!(p.excluded.is_empty());

        for q in 0..5 {
            if q != 3 {
                rows[3][q] = INF;
                rows[q][3] = INF;
            }
        }
        let p = preprocess_inaccessible(&TimeMatrix::from_rows(&rows, INF).unwrap());
        assert_eq!(p.excluded, vec![3]);
        assert_eq!(p.kept, vec![0, 1, 2, 4]);
        assert_eq!(p.matrix.m(), 3);
    }

    #[test]
    fn preprocess_isolated_pair() {
        // MPs 3 and 4 reach only each other
        let f = |i: usize, q: usize| {
            if i == q {
                0.0
            } else if (i >= 3) != (q >= 3) {
                INF
            } else {
                2.0
            }
        };
        let rows: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|q| f(i, q)).collect()).collect();
        let t = TimeMatrix::from_rows(&rows, INF).unwrap();
        // brute force: every full tour is tainted
        let mut perm = vec![1, 2, 3, 4];
        loop {
            assert!(tour_time(&perm, &t).tainted);
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let p = preprocess_inaccessible(&t);
        assert_eq!(p.excluded, vec![3, 4]);
        let (tour, excluded) = solve_untainted(&t, Solver::BruteForce, &SolverParams::default()).unwrap();
        assert_eq!(excluded, vec![3, 4]);
        assert!(!tour.tainted);
        assert_eq!(tour.order, vec![1, 2]);
    }

    #[test]
    fn solve_untainted_drops_leaf() {
        // MP 3 connects only to MP 1: no Hamiltonian cycle of finite legs
        let mut rows: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|q| (i as f64 - q as f64).abs()).collect()).collect();
        for (a, b) in [(3, 0), (3, 2)] {
            rows[a][b] = INF;
            rows[b][a] = INF;
        }
        let t = TimeMatrix::from_rows(&rows, INF).unwrap();
        assert!(preprocess_inaccessible(&t).excluded.is_empty());
        let (tour, excluded) = solve_untainted(&t, Solver::Sa, &SolverParams::default()).unwrap();
        assert_eq!(excluded, vec![3]);
        assert!(!tour.tainted);
        assert!(is_valid_permutation(&tour.order, 2));
    }

    #[test]
    fn sa_zero_iterations_returns_nn() {
        let t = random_symmetric(8, 1);
        let p = SaParams { iterations_per_temperature: Some(0), ..Default::default() };
        let tour = solve_sa(&t, &p, 5);
        assert_eq!(tour.order, nearest_neighbor(&t).order);
        assert_eq!(tour.iterations, 0);
    }

    #[test]
    fn sa_matches_brute_force_on_eight() {
        let t = random_symmetric(8, 11);
        let opt = brute_force(&t).unwrap();
        let tour = solve_sa(&t, &SaParams::default(), 3);
        assert!((tour.total_time - opt.total_time).abs() < 1e-9, "{} vs {}", tour.total_time, opt.total_time);
    }

    #[test]
    fn solvers_are_deterministic_and_valid() {
        let t = random_symmetric(9, 4);
        let params = SolverParams { seed: 17, ..Default::default() };
        for s in [Solver::Sa, Solver::Ga, Solver::Aco] {
            let a = solve(&t, s, &params).unwrap();
            let b = solve(&t, s, &params).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.history, b.history);
            assert!(is_valid_permutation(&a.order, 9));
            assert_eq!(a.total_time, tour_time(&a.order, &t).total);
            assert!(a.history.windows(2).all(|w| w[1] <= w[0]), "{s:?} history increased");
            assert!(a.total_time <= nearest_neighbor(&t).total_time);
        }
    }

    #[test]
    fn ga_single_individual_no_generations_is_nn() {
        let t = random_symmetric(7, 2);
        let p = GaParams { population: 1, generations: 0, ..Default::default() };
        assert_eq!(solve_ga(&t, &p, 0).order, nearest_neighbor(&t).order);
    }

    #[test]
    fn aco_one_ant_reproducible() {
        let t = random_symmetric(7, 3);
        let p = AcoParams { ants: 1, iterations: 1, ..Default::default() };
        assert_eq!(solve_aco(&t, &p, 9), solve_aco(&t, &p, 9));
    }

    #[test]
    fn aco_avoids_inf_edge() {
        // NN walks 0→1→2→3 and is forced onto the a_inf leg 3→4; a finite
        // tour exists.
        let mut rows: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|q| (i as f64 - q as f64).abs()).collect()).collect();
        rows[3][4] = INF;
        rows[4][3] = INF;
        let t = TimeMatrix::from_rows(&rows, INF).unwrap();
        let opt = brute_force(&t).unwrap();
        assert!(!opt.tainted);
        let tour = solve_aco(&t, &AcoParams::default(), 1);
        assert!(!tour.tainted);
        assert_eq!(tour.total_time, opt.total_time);
    }

    #[test]
    fn asymmetric_delta_matches_recompute() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = 7;
        let rows: Vec<Vec<f64>> =
            (0..=m).map(|i| (0..=m).map(|q| if i == q { 0.0 } else { rng.gen_range(1.0..50.0) }).collect()).collect();
        let t = TimeMatrix::from_rows(&rows, INF).unwrap();
        let mut order: Vec<usize> = (1..=m).collect();
        order.shuffle(&mut rng);
        let base = tour_time(&order, &t).total;
        for i in 0..m {
            for j in i + 1..m {
                let mut r = order.clone();
                r[i..=j].reverse();
                let d = reverse_delta(&t, &order, i, j, false);
                assert!((base + d - tour_time(&r, &t).total).abs() < 1e-9);
                let mut s = order.clone();
                s.swap(i, j);
                let d = swap_delta(&t, &order, i, j);
                assert!((base + d - tour_time(&s, &t).total).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn order_crossover_yields_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let a: Vec<usize> = (1..=9).collect();
        let mut b = a.clone();
        for _ in 0..200 {
            b.shuffle(&mut rng);
            let c = order_crossover(&a, &b, &mut rng);
            assert!(is_valid_permutation(&c, 9));
        }
    }

    #[test]
    fn trivial_sizes() {
        let t = matrix(&[&[0.]]);
        for s in [Solver::Sa, Solver::Ga, Solver::Aco, Solver::Nn, Solver::BruteForce] {
            let tour = solve(&t, s, &SolverParams::default()).unwrap();
            assert!(tour.order.is_empty());
            assert_eq!(tour.total_time, 0.0);
        }
        let t = matrix(&[&[0., 2.], &[3., 0.]]);
        assert_eq!(solve_sa(&t, &SaParams::default(), 0).total_time, 5.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// Random asymmetric matrices with some `a_inf` legs.
        fn instance() -> impl Strategy<Value = TimeMatrix> {
            (2usize..8).prop_flat_map(|m| {
                let n = m + 1;
                prop::collection::vec(prop_oneof![9 => 0.5f64..100.0, 1 => Just(INF)], n * n).prop_map(move |v| {
                    let rows: Vec<Vec<f64>> =
                        (0..n).map(|i| (0..n).map(|q| if i == q { 0.0 } else { v[i * n + q] }).collect()).collect();
                    TimeMatrix::from_rows(&rows, INF).unwrap()
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn heuristics_valid_and_no_worse_than_nn(t in instance(), seed in 0u64..1000) {
                let nn = nearest_neighbor(&t);
                let params = SolverParams {
                    seed,
                    ga: GaParams { generations: 40, ..Default::default() },
                    aco: AcoParams { iterations: 20, ..Default::default() },
                    ..Default::default()
                };
                let opt = brute_force(&t).unwrap().total_time;
                for s in [Solver::Sa, Solver::Ga, Solver::Aco] {
                    let tour = solve(&t, s, &params).unwrap();
                    prop_assert!(is_valid_permutation(&tour.order, t.m()));
                    prop_assert_eq!(tour.total_time, tour_time(&tour.order, &t).total);
                    prop_assert!(tour.total_time <= nn.total_time);
                    prop_assert!(tour.total_time >= opt);
                    prop_assert!(tour.history.windows(2).all(|w| w[1] <= w[0]));
                }
            }
        }
    }

    #[test]
    fn params_validation() {
        let mut p = SolverParams::default();
        p.validate().unwrap();
        p.sa.cooling_rate = 1.0;
        assert!(p.validate().is_err());
        let p = SolverParams { ga: GaParams { population: 0, ..Default::default() }, ..Default::default() };
        assert!(p.validate().is_err());
    }
}
