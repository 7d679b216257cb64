//! Command-line front end for `mceprune`: graph conversion, solving,
//! training, pruning, the significance heuristic, corpus generation, and a
//! benchmark harness.

pub mod args;
pub mod bench;
pub mod commands;
pub mod config;

use anyhow::Result;

use args::{Cli, Command};
use config::Config;

pub fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    match &cli.command {
        Command::Convert(a) => commands::convert(a),
        Command::Solve(a) => commands::solve(a, &cfg),
        Command::Features(a) => commands::features(a, &cfg),
        Command::Train(a) => commands::train_models(a, &cfg),
        Command::Prune(a) => commands::prune(a, &cfg),
        Command::Althea(a) => commands::althea(a, &cfg),
        Command::Gen(a) => commands::generate(a, &cfg),
        Command::Bench(a) => bench::bench(a, &cfg),
        Command::Strategies => commands::list_strategies(),
    }
}
