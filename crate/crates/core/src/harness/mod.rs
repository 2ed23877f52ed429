//! Front end: configuration, sweep tables, commands and the command line.

pub mod cli;
pub mod commands;
pub mod config;
pub mod table;

pub use cli::{run, Cli, Command, CommonArgs, EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_RUNTIME};
pub use commands::{
    cmd_estimate, cmd_figure2, cmd_figure3, cmd_simulate, estimate, figure2, figure3, simulate,
    EstimateReport, Figure3, SimulationReport,
};
pub use config::{RunConfig, SweepScale, TauSweep};
pub use table::{Column, SweepTable, SCHEMA_VERSION};
