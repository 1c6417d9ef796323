//! TOML configuration files for `run` and `sweep`.
//!
//! One document shape serves both commands. A single run reads the game
//! parameter from `[game] param`; a sweep replaces it with a `[sweep]`
//! section carrying the grid and ensemble size. Unknown keys are rejected
//! wherever they appear.

use qevo_core::ensemble::{
    ScenarioConfig, DEFAULT_BASE_SEED, FREEZE_WINDOW, FULL_MAX_GENERATIONS, MEASURE_WINDOW,
};
use qevo_core::evo::{CaseKind, CaseSpec, HubOverride, RunConfig};
use qevo_core::games::GameKind;
use qevo_core::net::NetworkSpec;
use qevo_core::{Error, Result};
use serde::Deserialize;
use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// Master seed; scenario tasks derive from it.
    pub seed: Option<u64>,
    /// Default CSV destination; the --output flag wins over it.
    pub output: Option<PathBuf>,
    network: NetworkSection,
    game: GameSection,
    case: CaseSection,
    #[serde(default)]
    dynamics: DynamicsSection,
    sweep: Option<SweepSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkSection {
    /// rl, nw, or sf.
    kind: String,
    side: Option<usize>,
    p: Option<f64>,
    n: Option<usize>,
    m0: Option<usize>,
    m: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameSection {
    /// pd, sd, or sh.
    kind: String,
    /// Game parameter for a single run; a sweep takes its grid instead.
    param: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseSection {
    /// case1 or case2.
    kind: String,
    /// Initial mixture in strategy-index order; defaults per case.
    fractions: Option<Vec<f64>>,
    /// Degree rank (1 = highest) whose node gets a forced strategy.
    hub_rank: Option<usize>,
    hub_strategy: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DynamicsSection {
    /// Entanglement, radians in [0, pi/2]; defaults to pi/2.
    omega: Option<f64>,
    max_generations: Option<u64>,
    measure_window: Option<u64>,
    freeze_window: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    /// Label used in the CSV scenario column; defaults to "custom".
    name: Option<String>,
    grid: Vec<f64>,
    runs: usize,
}

fn config_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        reason: reason.into(),
    }
}

/// Rejects a field that does not belong to the chosen network kind.
fn forbid<T>(value: &Option<T>, field: &str, kind: &str) -> Result<()> {
    if value.is_some() {
        return Err(config_err(field, format!("not a {kind} network field")));
    }
    Ok(())
}

fn require<T: Copy>(value: &Option<T>, field: &str, kind: &str) -> Result<T> {
    value.ok_or_else(|| config_err(field, format!("required for {kind} networks")))
}

pub fn parse(text: &str) -> Result<ConfigFile> {
    toml::from_str(text).map_err(|e| config_err("config", e.to_string().trim().to_string()))
}

impl ConfigFile {
    fn network_spec(&self) -> Result<NetworkSpec> {
        let n = &self.network;
        match n.kind.as_str() {
            "rl" => {
                forbid(&n.p, "network.p", "rl")?;
                forbid(&n.n, "network.n", "rl")?;
                forbid(&n.m0, "network.m0", "rl")?;
                forbid(&n.m, "network.m", "rl")?;
                Ok(NetworkSpec::Lattice {
                    side: require(&n.side, "network.side", "rl")?,
                })
            }
            "nw" => {
                forbid(&n.n, "network.n", "nw")?;
                forbid(&n.m0, "network.m0", "nw")?;
                forbid(&n.m, "network.m", "nw")?;
                Ok(NetworkSpec::SmallWorld {
                    side: require(&n.side, "network.side", "nw")?,
                    p: require(&n.p, "network.p", "nw")?,
                })
            }
            "sf" => {
                forbid(&n.side, "network.side", "sf")?;
                forbid(&n.p, "network.p", "sf")?;
                Ok(NetworkSpec::ScaleFree {
                    n: require(&n.n, "network.n", "sf")?,
                    m0: n.m0.unwrap_or(3),
                    m: n.m.unwrap_or(2),
                })
            }
            other => Err(config_err(
                "network.kind",
                format!("expected rl, nw, or sf, got {other:?}"),
            )),
        }
    }

    fn game_kind(&self) -> Result<GameKind> {
        self.game.kind.parse()
    }

    fn case_spec(&self) -> Result<CaseSpec<f64>> {
        let kind = match self.case.kind.as_str() {
            "case1" => CaseKind::Case1,
            "case2" => CaseKind::Case2,
            other => {
                return Err(config_err(
                    "case.kind",
                    format!("expected case1 or case2, got {other:?}"),
                ))
            }
        };
        let mut spec = match &self.case.fractions {
            Some(f) => CaseSpec::with_fractions(kind, f.clone()),
            None => CaseSpec::new(kind),
        };
        spec.hub_override = match (self.case.hub_rank, &self.case.hub_strategy) {
            (Some(rank), Some(label)) => Some(HubOverride {
                rank,
                strategy: label.parse()?,
            }),
            (None, None) => None,
            _ => {
                return Err(config_err(
                    "case.hub_rank",
                    "hub_rank and hub_strategy must be given together",
                ))
            }
        };
        Ok(spec)
    }

    /// Run template shared by both commands; the game parameter is filled
    /// in by the caller.
    fn template(&self, game_param: f64) -> Result<RunConfig<f64>> {
        let d = &self.dynamics;
        Ok(RunConfig {
            network: self.network_spec()?,
            game: self.game_kind()?,
            game_param,
            case: self.case_spec()?,
            omega: d.omega.unwrap_or(FRAC_PI_2),
            max_generations: d.max_generations.unwrap_or(FULL_MAX_GENERATIONS),
            measure_window: d.measure_window.unwrap_or(MEASURE_WINDOW),
            freeze_window: d.freeze_window.unwrap_or(FREEZE_WINDOW),
            record_history: false,
            seed: self.seed.unwrap_or(DEFAULT_BASE_SEED),
        })
    }

    /// Single-run view: requires `game.param`, rejects a `[sweep]` section.
    pub fn to_run_config(&self) -> Result<RunConfig<f64>> {
        if self.sweep.is_some() {
            return Err(config_err(
                "sweep",
                "a run config must not carry a sweep section",
            ));
        }
        let param = self
            .game
            .param
            .ok_or_else(|| config_err("game.param", "required for a single run"))?;
        let config = self.template(param)?;
        config.validate()?;
        Ok(config)
    }

    /// Sweep view: requires the `[sweep]` section, rejects `game.param`.
    pub fn to_scenario(&self) -> Result<ScenarioConfig<f64>> {
        let sweep = self
            .sweep
            .as_ref()
            .ok_or_else(|| config_err("sweep", "required for a sweep config"))?;
        if self.game.param.is_some() {
            return Err(config_err(
                "game.param",
                "a sweep takes its grid from sweep.grid",
            ));
        }
        if sweep.grid.is_empty() {
            return Err(config_err("sweep.grid", "must not be empty"));
        }
        // Template validity is checked per grid point by run_ensemble; probe
        // the first point now so obvious mistakes fail before any work.
        let template = self.template(sweep.grid[0])?;
        template.validate()?;
        Ok(ScenarioConfig {
            name: sweep.name.clone().unwrap_or_else(|| "custom".into()),
            template,
            grid: sweep.grid.clone(),
            runs: sweep.runs,
            base_seed: self.seed.unwrap_or(DEFAULT_BASE_SEED),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        [network]
        kind = "rl"
        side = 10

        [game]
        kind = "pd"
        param = 1.5

        [case]
        kind = "case1"
    "#;

    #[test]
    fn minimal_run_config_fills_defaults() {
        let config = parse(MINIMAL).unwrap().to_run_config().unwrap();
        assert_eq!(config.network, NetworkSpec::Lattice { side: 10 });
        assert_eq!(config.game, GameKind::PrisonersDilemma);
        assert_eq!(config.max_generations, FULL_MAX_GENERATIONS);
        assert_eq!(config.measure_window, MEASURE_WINDOW);
        assert_eq!(config.freeze_window, FREEZE_WINDOW);
        assert_eq!(config.seed, DEFAULT_BASE_SEED);
        assert!((config.omega - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = MINIMAL.replace("side = 10", "side = 10\n        sides = 4");
        let err = parse(&text).unwrap_err();
        assert!(err.to_string().contains("sides"), "{err}");
    }

    #[test]
    fn foreign_network_fields_are_rejected() {
        let text = MINIMAL.replace("side = 10", "side = 10\n        p = 0.5");
        let err = parse(&text).unwrap().to_run_config().unwrap_err();
        assert!(err.to_string().contains("network.p"), "{err}");
    }

    #[test]
    fn sweep_config_round_trips() {
        let text = r#"
            seed = 7

            [network]
            kind = "sf"
            n = 400

            [game]
            kind = "pd"

            [case]
            kind = "case2"
            hub_rank = 1
            hub_strategy = "Q"

            [dynamics]
            max_generations = 100
            measure_window = 50

            [sweep]
            name = "demo"
            grid = [1.2, 1.6, 2.0]
            runs = 4
        "#;
        let scenario = parse(text).unwrap().to_scenario().unwrap();
        assert_eq!(scenario.name, "demo");
        assert_eq!(scenario.grid, vec![1.2, 1.6, 2.0]);
        assert_eq!(scenario.runs, 4);
        assert_eq!(scenario.base_seed, 7);
        assert_eq!(
            scenario.template.network,
            NetworkSpec::ScaleFree { n: 400, m0: 3, m: 2 }
        );
        assert!(scenario.template.case.hub_override.is_some());
    }

    #[test]
    fn run_and_sweep_views_exclude_each_other() {
        let with_sweep = format!("{MINIMAL}\n[sweep]\ngrid = [1.5]\nruns = 2\n");
        let parsed = parse(&with_sweep).unwrap();
        let err = parsed.to_run_config().unwrap_err();
        assert!(err.to_string().contains("sweep"), "{err}");
        let err = parsed.to_scenario().unwrap_err();
        assert!(err.to_string().contains("game.param"), "{err}");

        let err = parse(MINIMAL).unwrap().to_scenario().unwrap_err();
        assert!(err.to_string().contains("sweep"), "{err}");
    }

    #[test]
    fn half_a_hub_override_is_rejected() {
        let text = MINIMAL.replace("kind = \"case1\"", "kind = \"case1\"\n        hub_rank = 1");
        let err = parse(&text).unwrap().to_run_config().unwrap_err();
        assert!(err.to_string().contains("hub_rank"), "{err}");
    }

    #[test]
    fn bad_fractions_are_named() {
        let text =
            MINIMAL.replace("kind = \"case1\"", "kind = \"case1\"\n        fractions = [0.4, 0.4, 0.1]");
        let err = parse(&text).unwrap().to_run_config().unwrap_err();
        assert!(err.to_string().contains("fractions"), "{err}");
    }
}
