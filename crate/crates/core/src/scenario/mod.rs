//! Scenario configuration, seeded placement, sweeps and result files.

pub mod config;
pub mod output;
pub mod placement;
pub mod rng;
pub mod sweep;

pub use config::{CsiMode, OptimizerMethod, ScenarioConfig, SweepKind, SweepSpec};
pub use output::{emit_results, MetricRow, OutputFormat, RunMetadata};
pub use placement::{sample_annulus_point, sample_scenario, statistical_scenes, PlacedScenario};
pub use rng::RngStream;
pub use sweep::{optimize_scenario, run_azimuth_sweep, run_power_sweep, SweepOutput};
