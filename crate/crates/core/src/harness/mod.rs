//! History generation, table reproduction, worked-example fixtures and a
//! pool simulator.

pub mod fixtures;
pub mod generator;
pub mod simulate;
pub mod tables;

pub use fixtures::{render_tap, run_fixture_examples, FixtureResult};
pub use generator::{generate_histories, shapes, GeneratorMode, HistoryGenerator};
pub use simulate::{simulate_pool, MinerStats, SimConfig, SimError, SimReport};
pub use tables::{reproduce_table1, reproduce_table2, Cell, MismatchedCell, TableReport};
