//! Count-based final-size engine: the embedded jump chain of the
//! time-transformed joint graph/epidemic construction. Only half-edge counts
//! are tracked, so a replicate costs O(total half-edges).

mod ensemble;
mod setup;
mod state;

pub use ensemble::{run_ensemble, EnsembleResult, EnsembleSummary, ReplicateRecord};
pub use setup::{
    classify_major, classify_major_with_base, fraction_counts, initialize, run_final_size,
    EpidemicSetup, EpidemicSimulator, Initial, Mode, SimulationOutcome,
};
pub use state::{Event, Fenwick, SimState};
