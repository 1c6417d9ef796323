//! CSV emission. Every table carries a header row, and floats print at
//! full precision so repeated invocations can be compared byte for byte.

use qevo_core::evo::RunResult;
use qevo_core::net::Network;
use qevo_core::quantum::PairPayoffTable;
use qevo_core::scalar::full_precision;
use std::io::Write;
use std::path::Path;

/// Writes to the given path, or stdout when none is set.
pub fn write_text(target: Option<&Path>, text: &str) -> std::io::Result<()> {
    match target {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

/// One row per ordered strategy pair.
pub fn payoff_table_csv(table: &PairPayoffTable<f64>) -> String {
    let mut out = String::from("game,param,omega,row_strategy,col_strategy,row_payoff,col_payoff\n");
    let game = table.game();
    for i in 0..table.len() {
        for j in 0..table.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                game.kind.code(),
                full_precision(game.param),
                full_precision(table.omega()),
                table.labels()[i],
                table.labels()[j],
                full_precision(table.row_payoff(i, j)),
                full_precision(table.col_payoff(i, j)),
            ));
        }
    }
    out
}

/// Per-strategy summary of a single run; the run-level scalars repeat on
/// every row to keep the table flat.
pub fn run_result_csv(result: &RunResult<f64>) -> String {
    let mut out = String::from("strategy,mean_fraction,final_fraction,converged,generations\n");
    for (i, label) in result.strategy_labels.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            label,
            full_precision(result.mean_fractions[i]),
            full_precision(result.final_fractions[i]),
            result.converged,
            result.generations,
        ));
    }
    out
}

/// Strategy census per generation; requires a run recorded with history.
pub fn time_series_csv(result: &RunResult<f64>) -> String {
    let history = result
        .history
        .as_ref()
        .expect("time series requested without recorded history");
    let mut out = String::from("generation,strategy,count,fraction\n");
    for (generation, counts) in history.iter().enumerate() {
        let total: usize = counts.iter().sum();
        for (i, label) in result.strategy_labels.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                generation,
                label,
                counts[i],
                full_precision(counts[i] as f64 / total as f64),
            ));
        }
    }
    out
}

/// Long-format stats table: counts, degree histogram, top-10 degrees.
pub fn net_stats_csv(net: &Network, top: &[u32]) -> String {
    let mut out = String::from("statistic,key,value\n");
    out.push_str(&format!("nodes,,{}\n", net.node_count()));
    out.push_str(&format!("edges,,{}\n", net.edge_count()));
    for (degree, count) in net.degree_histogram() {
        out.push_str(&format!("degree_count,{degree},{count}\n"));
    }
    for (rank, node) in top.iter().enumerate() {
        out.push_str(&format!(
            "top_degree,{},{}\n",
            rank + 1,
            net.degree(*node)
        ));
    }
    out
}
