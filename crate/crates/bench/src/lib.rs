//! Graph generators, edge-list files, the experiment runner and the scaling
//! study behind the `mmest` command.
pub mod experiment;
pub mod generators;
pub mod io;
pub mod parallel;
pub mod scaling;

pub use experiment::{run_experiment, run_once, ExperimentConfig, ExperimentRow, RunMode, RunParams};
pub use generators::{generate, GenError, GeneratorSpec};
pub use io::{load_graph, parse_edge_list, save_graph, write_edge_list, LoadError};
pub use parallel::run_parallel_instances;
pub use scaling::{scaling_study, ScalingFamily, ScalingReport, ScalingTarget};
