//! Evolutionary dynamics: payoff accumulation and synchronous stochastic
//! imitation on a fixed network.
//!
//! One generation has two phases. First every node plays the pair game
//! with each neighbour as the row player and accumulates the payoffs.
//! Then every node independently picks one neighbour uniformly at random
//! and, if that neighbour scored higher, adopts its strategy with
//! probability (F_j - F_i) / (alpha * max(k_i, k_j)); the payoff spread
//! `alpha` caps the probability at 1. Updates are synchronous: all nodes
//! decide against the same snapshot.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::games::{for_game, GameKind};
use crate::net::{build_network, top_k_degree_nodes, Network, NetworkSpec};
use crate::quantum::{build_pair_table, PairPayoffTable, Strategy};
use crate::rng::{hash_combine, NodeRng, STREAM_DYN, STREAM_INIT, STREAM_NET};
use crate::scalar::Real;

/// Selects the strategy set competing in a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseKind {
    /// Three strategies (C, D, H): the superposition strategy invades a
    /// classical population.
    Case1,
    /// Four strategies (C, D, H, Q): the phase strategy joins the contest.
    Case2,
}

impl CaseKind {
    /// Strategy set in index order.
    pub fn strategies<T: Real>(self) -> Vec<Strategy<T>> {
        match self {
            CaseKind::Case1 => vec![
                Strategy::Cooperate,
                Strategy::Defect,
                Strategy::Hadamard,
            ],
            CaseKind::Case2 => vec![
                Strategy::Cooperate,
                Strategy::Defect,
                Strategy::Hadamard,
                Strategy::Quantum,
            ],
        }
    }

    /// Default initial mixture: a defector-heavy classical population with
    /// a one-percent quantum seed.
    pub fn default_fractions<T: Real>(self) -> Vec<T> {
        match self {
            CaseKind::Case1 => vec![T::of(0.49), T::of(0.50), T::of(0.01)],
            CaseKind::Case2 => vec![T::of(0.49), T::of(0.49), T::of(0.01), T::of(0.01)],
        }
    }

    /// Index of the invading quantum strategy (H in case 1, Q in case 2).
    pub fn invader_index(self) -> usize {
        match self {
            CaseKind::Case1 => 2,
            CaseKind::Case2 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseKind::Case1 => "case1",
            CaseKind::Case2 => "case2",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            CaseKind::Case1 => 3,
            CaseKind::Case2 => 4,
        }
    }
}

/// Forces the node of a given degree rank to a fixed strategy after random
/// placement. Rank 1 is the highest-degree node; ties break by node id.
#[derive(Clone, Copy, Debug)]
pub struct HubOverride<T> {
    pub rank: usize,
    pub strategy: Strategy<T>,
}

/// Initial strategy mixture and optional hub forcing.
#[derive(Clone, Debug)]
pub struct CaseSpec<T> {
    pub kind: CaseKind,
    /// Initial fraction per strategy, in index order; must sum to 1.
    pub fractions: Vec<T>,
    pub hub_override: Option<HubOverride<T>>,
}

impl<T: Real> CaseSpec<T> {
    /// Case with its default mixture and no hub forcing.
    pub fn new(kind: CaseKind) -> Self {
        CaseSpec {
            kind,
            fractions: kind.default_fractions(),
            hub_override: None,
        }
    }

    pub fn with_fractions(kind: CaseKind, fractions: Vec<T>) -> Self {
        CaseSpec {
            kind,
            fractions,
            hub_override: None,
        }
    }

    pub fn strategies(&self) -> Vec<Strategy<T>> {
        self.kind.strategies()
    }

    pub fn validate(&self) -> Result<()> {
        if self.fractions.len() != self.kind.arity() {
            return Err(Error::Config {
                field: "fractions".into(),
                reason: format!(
                    "{} needs {} entries, got {}",
                    self.kind.name(),
                    self.kind.arity(),
                    self.fractions.len()
                ),
            });
        }
        for (i, &f) in self.fractions.iter().enumerate() {
            if !(f >= T::zero() && f <= T::one()) {
                return Err(Error::Config {
                    field: "fractions".into(),
                    reason: format!("entry {i} must lie in [0, 1]"),
                });
            }
        }
        let total: T = self.fractions.iter().copied().sum();
        let tol = T::of(1e-9).max(T::epsilon() * T::of(16.0));
        if (total - T::one()).abs() > tol {
            return Err(Error::Config {
                field: "fractions".into(),
                reason: format!("entries sum to {total}, expected 1"),
            });
        }
        if let Some(hub) = &self.hub_override {
            if !(1..=3).contains(&hub.rank) {
                return Err(Error::Config {
                    field: "hub_override.rank".into(),
                    reason: format!("rank {} outside 1..=3", hub.rank),
                });
            }
            if !self.strategies().contains(&hub.strategy) {
                return Err(Error::Config {
                    field: "hub_override.strategy".into(),
                    reason: format!(
                        "{} is not in the {} strategy set",
                        hub.strategy,
                        self.kind.name()
                    ),
                });
            }
        }
        Ok(())
    }
}

/// Strategy assignment of every node, double-buffered for synchronous
/// updates. Entries index into the case's strategy set.
#[derive(Clone, Debug)]
pub struct Population {
    current: Vec<u8>,
    next: Vec<u8>,
    arity: usize,
    generation: u64,
}

impl Population {
    pub fn node_count(&self) -> usize {
        self.current.len()
    }

    pub fn strategy_count(&self) -> usize {
        self.arity
    }

    /// Completed update steps.
    pub fn generation(&self) -> u64 {
        self.generation
    }

    /// Current strategy index of every node.
    pub fn strategies(&self) -> &[u8] {
        &self.current
    }

    /// Node count per strategy index.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.arity];
        for &s in &self.current {
            counts[s as usize] += 1;
        }
        counts
    }

    /// Fraction of nodes per strategy index.
    pub fn fractions<T: Real>(&self) -> Vec<T> {
        let n = T::of(self.current.len() as f64);
        self.counts()
            .into_iter()
            .map(|c| T::of(c as f64) / n)
            .collect()
    }
}

/// Exact strategy counts for a fraction vector: floor(f * n) per strategy,
/// with the remaining nodes going to the largest fractional remainders
/// (ties to the lower index).
pub(crate) fn largest_remainder_counts(fractions: &[f64], n: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = Vec::with_capacity(fractions.len());
    let mut remainders: Vec<(usize, f64)> = Vec::with_capacity(fractions.len());
    let mut assigned = 0usize;
    for (i, &f) in fractions.iter().enumerate() {
        let exact = f * n as f64;
        let floor = exact.floor() as usize;
        counts.push(floor);
        remainders.push((i, exact - floor as f64));
        assigned += floor;
    }
    let mut leftover = n - assigned;
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    for (i, _) in remainders {
        if leftover == 0 {
            break;
        }
        counts[i] += 1;
        leftover -= 1;
    }
    counts
}

/// Places strategies on the network: exact largest-remainder counts,
/// assigned through one seeded shuffle of the node ids, then the optional
/// hub override.
pub fn init_population<T: Real>(
    net: &Network,
    case: &CaseSpec<T>,
    seed: u64,
) -> Result<Population> {
    case.validate()?;
    let n = net.node_count();
    let fractions: Vec<f64> = case
        .fractions
        .iter()
        .map(|f| f.to_f64().expect("fraction fits f64"))
        .collect();
    let counts = largest_remainder_counts(&fractions, n);

    let mut ids: Vec<u32> = (0..n as u32).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);

    let mut current = vec![0u8; n];
    let mut cursor = 0usize;
    for (strategy, &count) in counts.iter().enumerate() {
        for &node in &ids[cursor..cursor + count] {
            current[node as usize] = strategy as u8;
        }
        cursor += count;
    }

    if let Some(hub) = &case.hub_override {
        let top = top_k_degree_nodes(net, hub.rank)?;
        let node = *top.last().expect("rank validated against node count");
        let strategies = case.strategies();
        let index = strategies
            .iter()
            .position(|s| s == &hub.strategy)
            .expect("hub strategy validated against the set");
        current[node as usize] = index as u8;
    }

    Ok(Population {
        next: current.clone(),
        current,
        arity: case.kind.arity(),
        generation: 0,
    })
}

/// Accumulated payoff of every node against its neighbourhood, node as row
/// player.
pub fn accumulate_payoffs<T: Real>(
    pop: &Population,
    net: &Network,
    table: &PairPayoffTable<T>,
) -> Result<Vec<T>> {
    if table.len() != pop.strategy_count() {
        return Err(Error::Config {
            field: "table".into(),
            reason: format!(
                "table covers {} strategies, population uses {}",
                table.len(),
                pop.strategy_count()
            ),
        });
    }
    if pop.node_count() != net.node_count() {
        return Err(Error::Config {
            field: "population".into(),
            reason: format!(
                "population has {} nodes, network has {}",
                pop.node_count(),
                net.node_count()
            ),
        });
    }
    let k = table.len();
    let row = table.row_flat();
    let mut fitness = vec![T::zero(); pop.node_count()];
    for (v, slot) in fitness.iter_mut().enumerate() {
        let si = pop.current[v] as usize * k;
        let mut sum = T::zero();
        for &w in net.neighbors(v as u32) {
            sum += row[si + pop.current[w as usize] as usize];
        }
        *slot = sum;
    }
    Ok(fitness)
}

/// One synchronous imitation step; returns how many nodes changed
/// strategy.
///
/// Each node draws from its own counter-based stream keyed by
/// (dyn_seed, generation, node): first the neighbour index, then, only if
/// the neighbour is fitter, one acceptance uniform. The probability is
/// asserted to lie in [0, 1] before a defensive clamp.
pub fn update_step<T: Real>(
    pop: &mut Population,
    fitness: &[T],
    net: &Network,
    alpha: T,
    dyn_seed: u64,
) -> Result<usize> {
    if alpha <= T::zero() || alpha.is_nan() {
        return Err(Error::Config {
            field: "alpha".into(),
            reason: format!("normalisation must be positive, got {alpha}"),
        });
    }
    if fitness.len() != pop.node_count() {
        return Err(Error::Config {
            field: "fitness".into(),
            reason: format!(
                "fitness has {} entries, population has {} nodes",
                fitness.len(),
                pop.node_count()
            ),
        });
    }
    let mut changed = 0usize;
    for v in 0..pop.node_count() {
        let mut rng = NodeRng::new(dyn_seed, pop.generation, v as u64);
        let nbrs = net.neighbors(v as u32);
        let mut adopted = pop.current[v];
        if !nbrs.is_empty() {
            let w = nbrs[rng.next_index(nbrs.len())] as usize;
            if fitness[w] > fitness[v] {
                let deg = T::of(nbrs.len().max(net.degree(w as u32)) as f64);
                let p = (fitness[w] - fitness[v]) / (alpha * deg);
                debug_assert!(
                    p >= T::zero() && p <= T::one() + T::algebraic_tol(),
                    "imitation probability {p} outside [0, 1]"
                );
                let p = p.min(T::one());
                let u = T::of(rng.next_f64());
                if u < p {
                    adopted = pop.current[w];
                }
            }
        }
        pop.next[v] = adopted;
        changed += usize::from(adopted != pop.current[v]);
    }
    std::mem::swap(&mut pop.current, &mut pop.next);
    pop.generation += 1;
    Ok(changed)
}

/// Full configuration of one simulation run.
#[derive(Clone, Debug)]
pub struct RunConfig<T> {
    pub network: NetworkSpec,
    pub game: GameKind,
    pub game_param: T,
    pub case: CaseSpec<T>,
    /// Entanglement level, in [0, pi/2].
    pub omega: T,
    /// Hard cap on update steps.
    pub max_generations: u64,
    /// Trailing window for time-averaged fractions.
    pub measure_window: u64,
    /// Stop once no node changes strategy for this many consecutive steps.
    pub freeze_window: u64,
    /// Record per-generation strategy counts (memory-heavy; off for
    /// sweeps).
    pub record_history: bool,
    /// Master seed; network, placement, and dynamics streams derive from
    /// it.
    pub seed: u64,
}

impl<T: Real> RunConfig<T> {
    pub fn validate(&self) -> Result<()> {
        self.network.validate()?;
        for_game(self.game, self.game_param)?;
        crate::quantum::entangler(self.omega)?;
        self.case.validate()?;
        if self.max_generations < 1 {
            return Err(Error::Config {
                field: "max_generations".into(),
                reason: "must be at least 1".into(),
            });
        }
        if self.measure_window < 1 || self.measure_window > self.max_generations {
            return Err(Error::Config {
                field: "measure_window".into(),
                reason: format!(
                    "must lie in 1..={}, got {}",
                    self.max_generations, self.measure_window
                ),
            });
        }
        if self.freeze_window < 1 {
            return Err(Error::Config {
                field: "freeze_window".into(),
                reason: "must be at least 1".into(),
            });
        }
        if let Some(hub) = &self.case.hub_override {
            if hub.rank > self.network.node_count() {
                return Err(Error::Config {
                    field: "hub_override.rank".into(),
                    reason: format!(
                        "rank {} exceeds node count {}",
                        hub.rank,
                        self.network.node_count()
                    ),
                });
            }
        }
        Ok(())
    }
}

/// Outcome of one simulation run.
#[derive(Clone, Debug)]
pub struct RunResult<T> {
    /// Strategy labels in index order.
    pub strategy_labels: Vec<String>,
    /// Time-averaged fraction per strategy over the trailing measure
    /// window (the frozen census if the run converged).
    pub mean_fractions: Vec<T>,
    /// Fraction per strategy at the final generation.
    pub final_fractions: Vec<T>,
    /// True when the census froze for the configured window before the
    /// generation cap.
    pub converged: bool,
    /// Update steps executed.
    pub generations: u64,
    /// Strategy counts per generation (index 0 is the initial placement);
    /// present only when requested.
    pub history: Option<Vec<Vec<usize>>>,
}

/// Runs the full pipeline: build network, place strategies, iterate
/// generations until the census freezes or the cap is reached, then
/// time-average the trailing window.
pub fn run<T: Real>(config: &RunConfig<T>) -> Result<RunResult<T>> {
    config.validate()?;
    let payoffs = for_game(config.game, config.game_param)?;
    let strategies = config.case.strategies();
    let table = build_pair_table(&strategies, &payoffs, config.omega)?;

    let net = build_network(&config.network, hash_combine(config.seed, STREAM_NET))?;
    let mut pop = init_population(&net, &config.case, hash_combine(config.seed, STREAM_INIT))?;
    let dyn_seed = hash_combine(config.seed, STREAM_DYN);

    let n = net.node_count();
    let window = config.measure_window as usize;
    let mut recent: std::collections::VecDeque<Vec<usize>> =
        std::collections::VecDeque::with_capacity(window);
    let mut history = config.record_history.then(|| vec![pop.counts()]);

    let mut fitness = accumulate_payoffs(&pop, &net, &table)?;
    let mut quiet_streak = 0u64;
    let mut converged = false;
    while pop.generation() < config.max_generations {
        let changed = update_step(&mut pop, &fitness, &net, payoffs.alpha, dyn_seed)?;
        let counts = pop.counts();
        if let Some(h) = history.as_mut() {
            h.push(counts.clone());
        }
        if recent.len() == window {
            recent.pop_front();
        }
        recent.push_back(counts);

        if changed == 0 {
            quiet_streak += 1;
            if quiet_streak >= config.freeze_window {
                converged = true;
                break;
            }
        } else {
            quiet_streak = 0;
            // The census moved, so payoffs must be refreshed; a quiet
            // generation leaves fitness bit-identical and skips this.
            fitness = accumulate_payoffs(&pop, &net, &table)?;
        }
    }

    let mean_fractions = if converged {
        pop.fractions()
    } else {
        let span = T::of((recent.len() * n) as f64);
        let mut sums = vec![T::zero(); pop.strategy_count()];
        for counts in &recent {
            for (s, &c) in counts.iter().enumerate() {
                sums[s] += T::of(c as f64);
            }
        }
        sums.into_iter().map(|s| s / span).collect()
    };

    Ok(RunResult {
        strategy_labels: table.labels().to_vec(),
        mean_fractions,
        final_fractions: pop.fractions(),
        converged,
        generations: pop.generation(),
        history,
    })
}
