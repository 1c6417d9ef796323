//! qevo: payoff tables, single runs, and ensemble sweeps of entangled
//! two-qubit games on networks.
//!
//! Exit codes: 0 success; 2 when arguments or configuration fail
//! validation (nothing was executed); 3 when a failure occurs after work
//! starts, such as an unwritable output file.

mod config;
mod output;
mod plot;

use clap::{Parser, Subcommand};
use qevo_core::ensemble::{
    desk_scale, find_scenario, run_ensemble, scenario_catalog, sweep_result_to_csv,
    ScenarioConfig, DEFAULT_BASE_SEED,
};
use qevo_core::evo::run;
use qevo_core::games::{for_game, GameKind};
use qevo_core::net::{build_network, top_k_degree_nodes, NetworkSpec};
use qevo_core::quantum::{build_pair_table, Strategy};
use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qevo",
    version,
    about = "Entangled two-qubit games on evolving networks"
)]
struct Cli {
    /// Master seed override (networks, placement, and dynamics derive
    /// from it).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the primary CSV here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Worker threads for sweeps; defaults to one per core.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    /// Shrink preset scenarios to desk size (smaller populations, fewer
    /// runs and generations).
    #[arg(long, global = true)]
    desk_scale: bool,

    /// For sweeps, also write an SVG curve plot next to the CSV.
    #[arg(long, global = true)]
    plot: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the pairwise payoff table for a strategy set.
    PayoffTable {
        /// Game family: pd, sd, or sh.
        #[arg(long)]
        game: String,
        /// Game parameter (b for pd, r for sd/sh).
        #[arg(long)]
        param: f64,
        /// Entanglement, radians in [0, pi/2].
        #[arg(long, default_value_t = FRAC_PI_2)]
        omega: f64,
        /// Comma-separated strategy labels.
        #[arg(long, value_delimiter = ',', default_value = "C,D,H,Q")]
        strategies: Vec<String>,
    },
    /// Execute one simulation run described by a config file.
    Run {
        /// TOML run config.
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        /// Also write a per-generation census CSV here.
        #[arg(long, value_name = "PATH")]
        time_series: Option<PathBuf>,
    },
    /// Run a parameter sweep from a preset scenario or a config file.
    Sweep {
        /// Preset scenario name; see list-scenarios.
        scenario: Option<String>,
        /// TOML sweep config, instead of a preset name.
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
    },
    /// Generate one network and print its degree statistics.
    NetStats {
        /// Network kind: rl, nw, or sf.
        #[arg(long)]
        kind: String,
        /// Lattice side (rl, nw).
        #[arg(long)]
        side: Option<usize>,
        /// Shortcut probability (nw).
        #[arg(long)]
        p: Option<f64>,
        /// Node count (sf).
        #[arg(long)]
        n: Option<usize>,
        /// Complete-core size (sf); defaults to 3.
        #[arg(long)]
        m0: Option<usize>,
        /// Links per added node (sf); defaults to 2.
        #[arg(long)]
        m: Option<usize>,
    },
    /// List the preset sweep scenarios.
    ListScenarios,
}

enum CliError {
    /// Bad arguments or configuration; nothing was executed.
    Validation(String),
    /// Failure after work started.
    Runtime(String),
}

impl From<qevo_core::Error> for CliError {
    fn from(e: qevo_core::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

fn read_config(path: &Path) -> Result<config::ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?;
    config::parse(&text).map_err(CliError::from)
}

fn write_output(target: Option<&Path>, text: &str) -> Result<(), CliError> {
    output::write_text(target, text).map_err(|e| {
        let name = target.map_or_else(|| "stdout".into(), |p| p.display().to_string());
        CliError::Runtime(format!("writing {name}: {e}"))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let out = cli.output.as_deref();
    match cli.command {
        Command::PayoffTable {
            game,
            param,
            omega,
            strategies,
        } => cmd_payoff_table(&game, param, omega, &strategies, out),
        Command::Run {
            config,
            time_series,
        } => cmd_run(&config, cli.seed, time_series.as_deref(), out),
        Command::Sweep { scenario, config } => cmd_sweep(
            scenario.as_deref(),
            config.as_deref(),
            cli.seed,
            cli.workers,
            cli.desk_scale,
            cli.plot,
            out,
        ),
        Command::NetStats {
            kind,
            side,
            p,
            n,
            m0,
            m,
        } => cmd_net_stats(&kind, side, p, n, m0, m, cli.seed, out),
        Command::ListScenarios => cmd_list_scenarios(cli.desk_scale, out),
    }
}

fn cmd_payoff_table(
    game: &str,
    param: f64,
    omega: f64,
    labels: &[String],
    out: Option<&Path>,
) -> Result<(), CliError> {
    let kind: GameKind = game.parse().map_err(CliError::from)?;
    let payoffs = for_game(kind, param)?;
    let strategies = labels
        .iter()
        .map(|l| l.parse::<Strategy<f64>>())
        .collect::<Result<Vec<_>, _>>()?;
    let table = build_pair_table(&strategies, &payoffs, omega)?;
    write_output(out, &output::payoff_table_csv(&table))
}

fn cmd_run(
    config_path: &Path,
    seed: Option<u64>,
    time_series: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let file = read_config(config_path)?;
    let mut config = file.to_run_config()?;
    if let Some(s) = seed {
        config.seed = s;
    }
    config.record_history = time_series.is_some();
    let result = run(&config)?;
    write_output(out.or(file.output.as_deref()), &output::run_result_csv(&result))?;
    if let Some(path) = time_series {
        write_output(Some(path), &output::time_series_csv(&result))?;
    }
    Ok(())
}

fn cmd_sweep(
    name: Option<&str>,
    config_path: Option<&Path>,
    seed: Option<u64>,
    workers: Option<usize>,
    desk: bool,
    want_plot: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let (mut scenario, config_output): (ScenarioConfig<f64>, Option<PathBuf>) =
        match (name, config_path) {
            (Some(name), None) => (find_scenario(name)?, None),
            (None, Some(path)) => {
                let file = read_config(path)?;
                (file.to_scenario()?, file.output)
            }
            (None, None) => {
                return Err(CliError::Validation(
                    "sweep needs a scenario name or --config".into(),
                ))
            }
            (Some(_), Some(_)) => {
                return Err(CliError::Validation(
                    "a scenario name and --config are mutually exclusive".into(),
                ))
            }
        };
    if desk {
        scenario = desk_scale(&scenario);
    }
    if let Some(s) = seed {
        scenario.base_seed = s;
    }
    let result = run_ensemble(&scenario, workers)?;
    let target = out
        .map(Path::to_path_buf)
        .or(config_output);
    write_output(target.as_deref(), &sweep_result_to_csv(&result))?;
    if want_plot {
        let svg_path = target
            .as_deref()
            .map(|p| p.with_extension("svg"))
            .unwrap_or_else(|| PathBuf::from(format!("{}.svg", result.scenario)));
        write_output(Some(&svg_path), &plot::sweep_svg(&result))?;
        eprintln!("plot written to {}", svg_path.display());
    }
    eprintln!(
        "{}: {} grid points x {} runs done",
        result.scenario,
        result.points.len(),
        result.runs
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_net_stats(
    kind: &str,
    side: Option<usize>,
    p: Option<f64>,
    n: Option<usize>,
    m0: Option<usize>,
    m: Option<usize>,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let flag = |name: &str, set: bool| -> Result<(), CliError> {
        if set {
            Err(CliError::Validation(format!(
                "--{name} does not apply to {kind} networks"
            )))
        } else {
            Ok(())
        }
    };
    let need = |name: &str| CliError::Validation(format!("--{name} is required for {kind} networks"));
    let spec = match kind {
        "rl" => {
            flag("p", p.is_some())?;
            flag("n", n.is_some())?;
            flag("m0", m0.is_some())?;
            flag("m", m.is_some())?;
            NetworkSpec::Lattice {
                side: side.ok_or_else(|| need("side"))?,
            }
        }
        "nw" => {
            flag("n", n.is_some())?;
            flag("m0", m0.is_some())?;
            flag("m", m.is_some())?;
            NetworkSpec::SmallWorld {
                side: side.ok_or_else(|| need("side"))?,
                p: p.ok_or_else(|| need("p"))?,
            }
        }
        "sf" => {
            flag("side", side.is_some())?;
            flag("p", p.is_some())?;
            NetworkSpec::ScaleFree {
                n: n.ok_or_else(|| need("n"))?,
                m0: m0.unwrap_or(3),
                m: m.unwrap_or(2),
            }
        }
        other => {
            return Err(CliError::Validation(format!(
                "--kind must be rl, nw, or sf, got {other:?}"
            )))
        }
    };
    let net = build_network(&spec, seed.unwrap_or(DEFAULT_BASE_SEED))?;
    let top = top_k_degree_nodes(&net, net.node_count().min(10))?;
    write_output(out, &output::net_stats_csv(&net, &top))
}

fn cmd_list_scenarios(desk: bool, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = String::from("scenario,network,game,case,points,runs\n");
    for scenario in scenario_catalog::<f64>() {
        let scenario = if desk { desk_scale(&scenario) } else { scenario };
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            scenario.name,
            scenario.template.network.code(),
            scenario.template.game.code(),
            scenario.template.case.kind.name(),
            scenario.grid.len(),
            scenario.runs,
        ));
    }
    write_output(out, &text)
}
