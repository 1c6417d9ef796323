//! Monte Carlo ensembles: parameter sweeps, the scenario catalog, and
//! aggregation into fraction-versus-parameter curves.
//!
//! A sweep runs `runs` independent realisations per grid point. Every
//! realisation's seed derives from (base seed, grid index, run index) via
//! the crate's mix function, so any single run can be reproduced in
//! isolation and results are identical for any worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evo::{run, CaseKind, CaseSpec, HubOverride, RunConfig, RunResult};
use crate::games::GameKind;
use crate::net::NetworkSpec;
use crate::quantum::Strategy;
use crate::rng::hash_combine;
use crate::scalar::{full_precision, Real};

/// Base seed of the shipped scenario catalog.
pub const DEFAULT_BASE_SEED: u64 = 42;

/// Full-size populations and ensemble counts.
const FULL_SIDE: usize = 50;
const FULL_SF_N: usize = 2500;
const FULL_RUNS: usize = 100;
/// Generation cap of the shipped scenarios, and the default for configs
/// that leave it out.
pub const FULL_MAX_GENERATIONS: u64 = 10_000;
/// Desk preset: minutes instead of hours, same semantics.
const DESK_SIDE: usize = 20;
const DESK_SF_N: usize = 400;
const DESK_RUNS: usize = 20;
const DESK_MAX_GENERATIONS: u64 = 2_000;

const SF_M0: usize = 3;
const SF_M: usize = 2;
const NW_P: f64 = 0.5;
/// Trailing-average window of the shipped scenarios (also the config
/// default).
pub const MEASURE_WINDOW: u64 = 1_000;
/// Freeze window of the shipped scenarios (also the config default).
pub const FREEZE_WINDOW: u64 = 500;

/// One named sweep: a run template, a parameter grid, and an ensemble
/// size.
#[derive(Clone, Debug)]
pub struct ScenarioConfig<T> {
    pub name: String,
    /// Per-run template; its `game_param` and `seed` are overwritten for
    /// every (grid point, run) task.
    pub template: RunConfig<T>,
    /// Game parameter grid, in sweep order.
    pub grid: Vec<T>,
    /// Realisations per grid point.
    pub runs: usize,
    pub base_seed: u64,
}

/// Aggregated statistics at one grid point.
#[derive(Clone, Debug)]
pub struct PointStats<T> {
    pub param: T,
    /// Ensemble mean of the per-run time-averaged fractions, per strategy.
    pub mean_fractions: Vec<T>,
    /// Population standard deviation across runs, per strategy.
    pub stddev_fractions: Vec<T>,
    /// Share of runs that froze before the generation cap.
    pub converged_share: T,
}

/// Result of one sweep.
#[derive(Clone, Debug)]
pub struct SweepResult<T> {
    pub scenario: String,
    pub network: NetworkSpec,
    pub game: GameKind,
    pub case: CaseKind,
    pub strategy_labels: Vec<String>,
    pub runs: usize,
    pub points: Vec<PointStats<T>>,
}

/// Runs every (grid point, run) task of a scenario, optionally on a
/// dedicated thread pool of `workers` threads, and aggregates per point.
///
/// Task seeds are `hash_combine(hash_combine(base_seed, g), k)` for grid
/// index g and run index k; an assertion guards against seed collisions.
pub fn run_ensemble<T: Real>(
    scenario: &ScenarioConfig<T>,
    workers: Option<usize>,
) -> Result<SweepResult<T>> {
    if scenario.grid.is_empty() {
        return Err(Error::Config {
            field: "grid".into(),
            reason: "parameter grid must not be empty".into(),
        });
    }
    if scenario.runs < 1 {
        return Err(Error::Config {
            field: "runs".into(),
            reason: "ensemble needs at least one run".into(),
        });
    }

    let mut tasks: Vec<RunConfig<T>> = Vec::with_capacity(scenario.grid.len() * scenario.runs);
    let mut seeds: Vec<u64> = Vec::with_capacity(tasks.capacity());
    for (g, &param) in scenario.grid.iter().enumerate() {
        let point_seed = hash_combine(scenario.base_seed, g as u64);
        for k in 0..scenario.runs {
            let mut config = scenario.template.clone();
            config.game_param = param;
            config.seed = hash_combine(point_seed, k as u64);
            config.record_history = false;
            config.validate().map_err(|e| Error::Ensemble {
                point: g,
                run: k,
                source: Box::new(e),
            })?;
            seeds.push(config.seed);
            tasks.push(config);
        }
    }
    {
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), seeds.len(), "derived run seeds collided");
    }

    let execute = || -> Vec<Result<RunResult<T>>> { tasks.par_iter().map(run).collect() };
    let outcomes = match workers {
        None => execute(),
        Some(w) => {
            if w < 1 {
                return Err(Error::Config {
                    field: "workers".into(),
                    reason: "worker count must be at least 1".into(),
                });
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Config {
                    field: "workers".into(),
                    reason: e.to_string(),
                })?;
            pool.install(execute)
        }
    };

    let mut results: Vec<RunResult<T>> = Vec::with_capacity(outcomes.len());
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(r) => results.push(r),
            Err(e) => {
                return Err(Error::Ensemble {
                    point: index / scenario.runs,
                    run: index % scenario.runs,
                    source: Box::new(e),
                })
            }
        }
    }

    let labels = results[0].strategy_labels.clone();
    let arity = labels.len();
    let runs_t = T::of(scenario.runs as f64);
    let mut points = Vec::with_capacity(scenario.grid.len());
    for (g, &param) in scenario.grid.iter().enumerate() {
        let slice = &results[g * scenario.runs..(g + 1) * scenario.runs];
        let mut means = vec![T::zero(); arity];
        for r in slice {
            for (s, &x) in r.mean_fractions.iter().enumerate() {
                means[s] += x;
            }
        }
        for m in means.iter_mut() {
            *m /= runs_t;
        }
        let mut stddevs = vec![T::zero(); arity];
        for r in slice {
            for (s, &x) in r.mean_fractions.iter().enumerate() {
                let d = x - means[s];
                stddevs[s] += d * d;
            }
        }
        for v in stddevs.iter_mut() {
            *v = (*v / runs_t).sqrt();
        }
        let converged = slice.iter().filter(|r| r.converged).count();
        points.push(PointStats {
            param,
            mean_fractions: means,
            stddev_fractions: stddevs,
            converged_share: T::of(converged as f64) / runs_t,
        });
    }

    Ok(SweepResult {
        scenario: scenario.name.clone(),
        network: scenario.template.network,
        game: scenario.template.game,
        case: scenario.template.case.kind,
        strategy_labels: labels,
        runs: scenario.runs,
        points,
    })
}

fn network_for(code: &str, full: bool) -> NetworkSpec {
    let side = if full { FULL_SIDE } else { DESK_SIDE };
    let n = if full { FULL_SF_N } else { DESK_SF_N };
    match code {
        "rl" => NetworkSpec::Lattice { side },
        "nw" => NetworkSpec::SmallWorld { side, p: NW_P },
        "sf" => NetworkSpec::ScaleFree { n, m0: SF_M0, m: SF_M },
        other => unreachable!("network code {other}"),
    }
}

fn grid_for<T: Real>(game: GameKind) -> Vec<T> {
    match game {
        // b = 1 + k/20 for k = 1..=20.
        GameKind::PrisonersDilemma => (1..=20)
            .map(|k| T::one() + T::of(k as f64) / T::of(20.0))
            .collect(),
        // r = k/20 for k = 1..=20; r = 1 is inside the snowdrift domain.
        GameKind::Snowdrift => (1..=20).map(|k| T::of(k as f64) / T::of(20.0)).collect(),
        // r = k/20 for k = 1..=19; r = 1 is outside the stag hunt domain.
        GameKind::StagHunt => (1..=19).map(|k| T::of(k as f64) / T::of(20.0)).collect(),
    }
}

fn template_for<T: Real>(network: NetworkSpec, game: GameKind, case: CaseSpec<T>) -> RunConfig<T> {
    RunConfig {
        network,
        game,
        // Placeholder; run_ensemble overwrites it per grid point.
        game_param: grid_for::<T>(game)[0],
        case,
        omega: T::FRAC_PI_2(),
        max_generations: FULL_MAX_GENERATIONS,
        measure_window: MEASURE_WINDOW,
        freeze_window: FREEZE_WINDOW,
        record_history: false,
        seed: 0,
    }
}

fn scenario<T: Real>(name: String, network: NetworkSpec, game: GameKind, case: CaseSpec<T>) -> ScenarioConfig<T> {
    ScenarioConfig {
        name,
        template: template_for(network, game, case),
        grid: grid_for(game),
        runs: FULL_RUNS,
        base_seed: DEFAULT_BASE_SEED,
    }
}

/// The shipped scenario catalog at full size.
///
/// Families, for each case (1, 2) and game (pd, sd, sh):
/// - `{case}-{game}-{net}`: default mixture on rl, nw, sf;
/// - `{case}-sf-hub{rank}-{game}`: scale-free with the rank-th hub forced
///   to the invading strategy;
/// - `{case}-frac{10,20,25}-{game}-{net}`: larger invader share (the
///   defector share stays at its default), with the top hub forced to the
///   invader on sf.
pub fn scenario_catalog<T: Real>() -> Vec<ScenarioConfig<T>> {
    let mut catalog = Vec::with_capacity(90);
    let cases = [CaseKind::Case1, CaseKind::Case2];
    let nets = ["rl", "nw", "sf"];

    for &case in &cases {
        for game in GameKind::all() {
            for net in nets {
                catalog.push(scenario(
                    format!("{}-{}-{}", case.name(), game.code(), net),
                    network_for(net, true),
                    game,
                    CaseSpec::new(case),
                ));
            }
        }
    }

    for &case in &cases {
        for rank in 1..=3usize {
            for game in GameKind::all() {
                let mut spec = CaseSpec::new(case);
                spec.hub_override = Some(HubOverride {
                    rank,
                    strategy: invader::<T>(case),
                });
                catalog.push(scenario(
                    format!("{}-sf-hub{}-{}", case.name(), rank, game.code()),
                    network_for("sf", true),
                    game,
                    spec,
                ));
            }
        }
    }

    for &case in &cases {
        for percent in [10usize, 20, 25] {
            for game in GameKind::all() {
                for net in nets {
                    let mut spec = CaseSpec::with_fractions(
                        case,
                        boosted_fractions::<T>(case, percent),
                    );
                    if net == "sf" {
                        spec.hub_override = Some(HubOverride {
                            rank: 1,
                            strategy: invader::<T>(case),
                        });
                    }
                    catalog.push(scenario(
                        format!(
                            "{}-frac{}-{}-{}",
                            case.name(),
                            percent,
                            game.code(),
                            net
                        ),
                        network_for(net, true),
                        game,
                        spec,
                    ));
                }
            }
        }
    }

    catalog
}

fn invader<T: Real>(case: CaseKind) -> Strategy<T> {
    case.strategies()[case.invader_index()]
}

/// Mixture with the invader share raised to `percent`/100: the cooperator
/// share shrinks to compensate, every other strategy keeps its default.
fn boosted_fractions<T: Real>(case: CaseKind, percent: usize) -> Vec<T> {
    let invader_share = percent as f64 / 100.0;
    let mut fractions: Vec<f64> = match case {
        CaseKind::Case1 => vec![0.0, 0.50, invader_share],
        CaseKind::Case2 => vec![0.0, 0.49, 0.01, invader_share],
    };
    fractions[0] = 1.0 - fractions.iter().skip(1).sum::<f64>();
    fractions.into_iter().map(T::of).collect()
}

/// Looks up a catalog scenario by name; the error lists every valid name.
pub fn find_scenario<T: Real>(name: &str) -> Result<ScenarioConfig<T>> {
    let catalog = scenario_catalog::<T>();
    if let Some(s) = catalog.iter().find(|s| s.name == name) {
        return Ok(s.clone());
    }
    let names: Vec<&str> = catalog.iter().map(|s| s.name.as_str()).collect();
    Err(Error::Config {
        field: "scenario".into(),
        reason: format!(
            "unknown scenario {name:?}; valid names: {}",
            names.join(", ")
        ),
    })
}

/// Shrinks a scenario to the desk preset: 400-node populations, a 2000
/// generation cap, and 20 runs per point. Measurement windows and the
/// grid are unchanged.
pub fn desk_scale<T: Real>(scenario: &ScenarioConfig<T>) -> ScenarioConfig<T> {
    let mut out = scenario.clone();
    out.template.network = match out.template.network {
        NetworkSpec::Lattice { .. } => NetworkSpec::Lattice { side: DESK_SIDE },
        NetworkSpec::SmallWorld { p, .. } => NetworkSpec::SmallWorld { side: DESK_SIDE, p },
        NetworkSpec::ScaleFree { m0, m, .. } => NetworkSpec::ScaleFree { n: DESK_SF_N, m0, m },
    };
    out.template.max_generations = DESK_MAX_GENERATIONS;
    out.runs = DESK_RUNS;
    out
}

/// Renders a sweep as CSV: one row per (grid point, strategy), numeric
/// columns in full precision.
pub fn sweep_result_to_csv<T: Real>(result: &SweepResult<T>) -> String {
    let mut out = String::from(
        "scenario,network,game,param,strategy,mean_fraction,stddev,runs,converged_share\n",
    );
    for point in &result.points {
        for (s, label) in result.strategy_labels.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                result.scenario,
                result.network.code(),
                result.game.code(),
                full_precision(point.param),
                label,
                full_precision(point.mean_fractions[s]),
                full_precision(point.stddev_fractions[s]),
                result.runs,
                full_precision(point.converged_share),
            ));
        }
    }
    out
}

/// Invader-strategy variance at one grid point, compared between two
/// sweeps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VarianceRatio<T> {
    /// var_a / var_b; infinite when only the second variance vanishes.
    Ratio(T),
    /// Both variances are exactly zero.
    BothDegenerate,
}

/// Pointwise invader variance ratios between two sweeps of the same case
/// and grid.
#[derive(Clone, Debug)]
pub struct VarianceComparison<T> {
    pub invader_label: String,
    /// (param, ratio) per grid point, in grid order.
    pub per_point: Vec<(T, VarianceRatio<T>)>,
    /// Median over the non-degenerate ratios; `None` when every point is
    /// degenerate.
    pub median_ratio: Option<T>,
}

/// Compares invader-strategy variances of sweep `a` against sweep `b`
/// (ratio var_a / var_b per grid point).
pub fn variance_comparison<T: Real>(
    a: &SweepResult<T>,
    b: &SweepResult<T>,
) -> Result<VarianceComparison<T>> {
    if a.case != b.case {
        return Err(Error::Config {
            field: "case".into(),
            reason: format!("cannot compare {} against {}", a.case.name(), b.case.name()),
        });
    }
    if a.points.len() != b.points.len() {
        return Err(Error::Config {
            field: "grid".into(),
            reason: format!(
                "grids have {} and {} points",
                a.points.len(),
                b.points.len()
            ),
        });
    }
    let tol = T::algebraic_tol();
    let invader = a.case.invader_index();
    let mut per_point = Vec::with_capacity(a.points.len());
    let mut ratios: Vec<T> = Vec::new();
    for (pa, pb) in a.points.iter().zip(&b.points) {
        if (pa.param - pb.param).abs() > tol {
            return Err(Error::Config {
                field: "grid".into(),
                reason: format!("grid points differ: {} vs {}", pa.param, pb.param),
            });
        }
        let va = pa.stddev_fractions[invader] * pa.stddev_fractions[invader];
        let vb = pb.stddev_fractions[invader] * pb.stddev_fractions[invader];
        let entry = if va == T::zero() && vb == T::zero() {
            VarianceRatio::BothDegenerate
        } else if vb == T::zero() {
            VarianceRatio::Ratio(T::infinity())
        } else {
            VarianceRatio::Ratio(va / vb)
        };
        if let VarianceRatio::Ratio(r) = entry {
            ratios.push(r);
        }
        per_point.push((pa.param, entry));
    }
    ratios.sort_by(|x, y| x.partial_cmp(y).expect("ratios are never NaN"));
    let median_ratio = if ratios.is_empty() {
        None
    } else {
        let mid = ratios.len() / 2;
        Some(if ratios.len() % 2 == 1 {
            ratios[mid]
        } else {
            (ratios[mid - 1] + ratios[mid]) / T::of(2.0)
        })
    };
    Ok(VarianceComparison {
        invader_label: a.strategy_labels[invader].clone(),
        per_point,
        median_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn tiny_scenario() -> ScenarioConfig<f64> {
        let case = CaseSpec::new(CaseKind::Case1);
        let mut template = template_for(
            NetworkSpec::Lattice { side: 5 },
            GameKind::PrisonersDilemma,
            case,
        );
        template.max_generations = 60;
        template.measure_window = 20;
        template.freeze_window = 15;
        ScenarioConfig {
            name: "tiny".into(),
            template,
            grid: vec![1.2, 1.8],
            runs: 3,
            base_seed: 7,
        }
    }

    #[test]
    fn singleton_ensemble_equals_a_direct_run() {
        let mut scenario = tiny_scenario();
        scenario.grid = vec![1.8];
        scenario.runs = 1;
        let sweep = run_ensemble(&scenario, None).unwrap();

        let mut config = scenario.template.clone();
        config.game_param = 1.8;
        config.seed = hash_combine(hash_combine(scenario.base_seed, 0), 0);
        let single = run(&config).unwrap();

        let point = &sweep.points[0];
        assert_eq!(point.mean_fractions, single.mean_fractions);
        assert!(point.stddev_fractions.iter().all(|&s| s == 0.0));
        let expect_share = if single.converged { 1.0 } else { 0.0 };
        assert_eq!(point.converged_share, expect_share);
    }

    #[test]
    fn task_seeds_are_distinct_across_grid_and_runs() {
        let mut seeds = HashSet::new();
        for g in 0..40u64 {
            let point_seed = hash_combine(DEFAULT_BASE_SEED, g);
            for k in 0..200u64 {
                assert!(seeds.insert(hash_combine(point_seed, k)));
            }
        }
    }

    #[test]
    fn aggregation_matches_a_two_pass_reference() {
        let scenario = tiny_scenario();
        let sweep = run_ensemble(&scenario, None).unwrap();

        for (g, &param) in scenario.grid.iter().enumerate() {
            let mut per_run: Vec<Vec<f64>> = Vec::new();
            let mut converged = 0usize;
            for k in 0..scenario.runs {
                let mut config = scenario.template.clone();
                config.game_param = param;
                config.seed =
                    hash_combine(hash_combine(scenario.base_seed, g as u64), k as u64);
                let r = run(&config).unwrap();
                converged += usize::from(r.converged);
                per_run.push(r.mean_fractions);
            }
            let point = &sweep.points[g];
            for s in 0..3 {
                let mean: f64 =
                    per_run.iter().map(|f| f[s]).sum::<f64>() / scenario.runs as f64;
                let var: f64 = per_run
                    .iter()
                    .map(|f| (f[s] - mean) * (f[s] - mean))
                    .sum::<f64>()
                    / scenario.runs as f64;
                assert!((point.mean_fractions[s] - mean).abs() <= 1e-12);
                assert!((point.stddev_fractions[s] - var.sqrt()).abs() <= 1e-12);
            }
            let share = converged as f64 / scenario.runs as f64;
            assert!((point.converged_share - share).abs() <= 1e-12);
        }
    }

    #[test]
    fn results_are_identical_for_any_worker_count() {
        let scenario = tiny_scenario();
        let a = sweep_result_to_csv(&run_ensemble(&scenario, Some(1)).unwrap());
        let b = sweep_result_to_csv(&run_ensemble(&scenario, Some(4)).unwrap());
        let c = sweep_result_to_csv(&run_ensemble(&scenario, None).unwrap());
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn catalog_has_ninety_unique_valid_scenarios() {
        let catalog = scenario_catalog::<f64>();
        assert_eq!(catalog.len(), 90);
        let names: HashSet<&str> = catalog.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names.len(), 90);
        for expect in [
            "case1-pd-rl",
            "case2-pd-nw",
            "case1-sd-sf",
            "case2-sf-hub1-sd",
            "case1-sf-hub3-pd",
            "case1-frac25-sh-sf",
            "case2-frac10-pd-rl",
        ] {
            assert!(names.contains(expect), "missing {expect}");
        }
        for s in &catalog {
            s.template.validate().expect(&s.name);
            assert!(!s.grid.is_empty());
            for &p in &s.grid {
                crate::games::for_game(s.template.game, p).expect(&s.name);
            }
            assert_eq!(s.runs, FULL_RUNS);
            assert_eq!(s.template.max_generations, FULL_MAX_GENERATIONS);
        }
    }

    #[test]
    fn catalog_grids_match_the_published_design() {
        let catalog = scenario_catalog::<f64>();
        let pd = catalog.iter().find(|s| s.name == "case1-pd-rl").unwrap();
        assert_eq!(pd.grid.len(), 20);
        assert!((pd.grid[0] - 1.05).abs() <= 1e-15);
        assert!((pd.grid[19] - 2.0).abs() <= 1e-15);
        let sd = catalog.iter().find(|s| s.name == "case1-sd-rl").unwrap();
        assert_eq!(sd.grid.len(), 20);
        assert!((sd.grid[0] - 0.05).abs() <= 1e-15);
        assert!((sd.grid[19] - 1.0).abs() <= 1e-15);
        let sh = catalog.iter().find(|s| s.name == "case1-sh-rl").unwrap();
        assert_eq!(sh.grid.len(), 19);
        assert!((sh.grid[18] - 0.95).abs() <= 1e-15);
    }

    #[test]
    fn catalog_hub_and_fraction_scenarios_are_wired_correctly() {
        let catalog = scenario_catalog::<f64>();
        let hub = catalog
            .iter()
            .find(|s| s.name == "case2-sf-hub2-pd")
            .unwrap();
        let over = hub.template.case.hub_override.as_ref().unwrap();
        assert_eq!(over.rank, 2);
        assert_eq!(over.strategy, Strategy::Quantum);
        assert!(matches!(
            hub.template.network,
            NetworkSpec::ScaleFree { n: 2500, m0: 3, m: 2 }
        ));

        let frac = catalog
            .iter()
            .find(|s| s.name == "case2-frac25-pd-sf")
            .unwrap();
        let f = &frac.template.case.fractions;
        assert!((f[0] - 0.25).abs() <= 1e-12);
        assert!((f[1] - 0.49).abs() <= 1e-12);
        assert!((f[2] - 0.01).abs() <= 1e-12);
        assert!((f[3] - 0.25).abs() <= 1e-12);
        assert!(frac.template.case.hub_override.is_some());

        let frac_rl = catalog
            .iter()
            .find(|s| s.name == "case1-frac20-pd-rl")
            .unwrap();
        let f = &frac_rl.template.case.fractions;
        assert!((f[0] - 0.30).abs() <= 1e-12);
        assert!((f[1] - 0.50).abs() <= 1e-12);
        assert!((f[2] - 0.20).abs() <= 1e-12);
        assert!(frac_rl.template.case.hub_override.is_none());
    }

    #[test]
    fn unknown_scenario_error_lists_valid_names() {
        let err = find_scenario::<f64>("case1-xx-rl").unwrap_err();
        let message = err.to_string();
        assert!(message.contains("case1-pd-rl"));
        assert!(message.contains("case2-frac25-sh-sf"));
    }

    #[test]
    fn desk_scale_shrinks_every_knob() {
        let full = find_scenario::<f64>("case2-pd-sf").unwrap();
        let desk = desk_scale(&full);
        assert_eq!(desk.runs, DESK_RUNS);
        assert_eq!(desk.template.max_generations, DESK_MAX_GENERATIONS);
        assert!(matches!(
            desk.template.network,
            NetworkSpec::ScaleFree { n: 400, m0: 3, m: 2 }
        ));
        assert_eq!(desk.template.measure_window, MEASURE_WINDOW);
        assert_eq!(desk.name, full.name);

        let lattice = desk_scale(&find_scenario::<f64>("case1-pd-rl").unwrap());
        assert!(matches!(
            lattice.template.network,
            NetworkSpec::Lattice { side: 20 }
        ));
    }

    #[test]
    fn csv_layout_is_stable() {
        let mut scenario = tiny_scenario();
        scenario.grid = vec![1.5];
        scenario.runs = 2;
        let sweep = run_ensemble(&scenario, None).unwrap();
        let csv = sweep_result_to_csv(&sweep);
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(
            lines[0],
            "scenario,network,game,param,strategy,mean_fraction,stddev,runs,converged_share"
        );
        assert_eq!(lines.len(), 1 + 3);
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields.len(), 9);
        assert_eq!(fields[0], "tiny");
        assert_eq!(fields[1], "rl");
        assert_eq!(fields[2], "pd");
        assert_eq!(fields[3].parse::<f64>().unwrap(), 1.5);
        assert_eq!(fields[4], "C");
        assert_eq!(fields[7], "2");
        let share: f64 = fields[8].parse().unwrap();
        assert!((0.0..=1.0).contains(&share));
    }

    fn synthetic_sweep(stddevs: &[f64]) -> SweepResult<f64> {
        SweepResult {
            scenario: "synthetic".into(),
            network: NetworkSpec::Lattice { side: 5 },
            game: GameKind::PrisonersDilemma,
            case: CaseKind::Case1,
            strategy_labels: vec!["C".into(), "D".into(), "H".into()],
            runs: 4,
            points: stddevs
                .iter()
                .enumerate()
                .map(|(i, &sd)| PointStats {
                    param: 1.0 + i as f64 / 10.0,
                    mean_fractions: vec![0.2, 0.3, 0.5],
                    stddev_fractions: vec![0.0, 0.0, sd],
                    converged_share: 1.0,
                })
                .collect(),
        }
    }

    #[test]
    fn variance_comparison_of_a_sweep_with_itself_is_unity() {
        let sweep = synthetic_sweep(&[0.1, 0.2, 0.3]);
        let cmp = variance_comparison(&sweep, &sweep).unwrap();
        assert_eq!(cmp.invader_label, "H");
        for (_, ratio) in &cmp.per_point {
            assert_eq!(*ratio, VarianceRatio::Ratio(1.0));
        }
        assert_eq!(cmp.median_ratio, Some(1.0));
    }

    #[test]
    fn variance_comparison_flags_degenerate_points() {
        let a = synthetic_sweep(&[0.0, 0.1, 0.2]);
        let b = synthetic_sweep(&[0.0, 0.2, 0.1]);
        let cmp = variance_comparison(&a, &b).unwrap();
        assert_eq!(cmp.per_point[0].1, VarianceRatio::BothDegenerate);
        assert_eq!(cmp.per_point[1].1, VarianceRatio::Ratio(0.25));
        assert_eq!(cmp.per_point[2].1, VarianceRatio::Ratio(4.0));
        // Median of [0.25, 4.0] is their midpoint.
        assert_eq!(cmp.median_ratio, Some(2.125));

        let c = synthetic_sweep(&[0.0, 0.0, 0.0]);
        let cmp = variance_comparison(&c, &c).unwrap();
        assert_eq!(cmp.median_ratio, None);

        let d = synthetic_sweep(&[0.1, 0.0, 0.1]);
        let cmp = variance_comparison(&d, &c).unwrap();
        assert!(matches!(cmp.per_point[0].1, VarianceRatio::Ratio(r) if r.is_infinite()));
    }

    #[test]
    fn variance_comparison_rejects_mismatched_grids() {
        let a = synthetic_sweep(&[0.1, 0.2]);
        let mut b = synthetic_sweep(&[0.1, 0.2]);
        b.points[1].param += 0.05;
        assert!(variance_comparison(&a, &b).is_err());
        let c = synthetic_sweep(&[0.1]);
        assert!(variance_comparison(&a, &c).is_err());
    }

    #[test]
    fn run_ensemble_rejects_empty_inputs() {
        let mut scenario = tiny_scenario();
        scenario.grid.clear();
        assert!(run_ensemble(&scenario, None).is_err());
        let mut scenario = tiny_scenario();
        scenario.runs = 0;
        assert!(run_ensemble(&scenario, None).is_err());
        let scenario = tiny_scenario();
        assert!(run_ensemble(&scenario, Some(0)).is_err());
    }
}
