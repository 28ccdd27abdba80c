//! Stabilizer-based entanglement witnesses for GHZ, cluster, graph and W
//! states, together with variance and entropy based criteria and the
//! numerical oracles that check their bounds on small registers.
//!
//! Qubit 1 is always the most significant tensor factor: basis index `j`
//! of an `N`-qubit register stores qubit 1 in bit `N - 1`.

pub mod entropic;
pub mod error;
pub mod io;
pub mod linalg;
pub mod nonlinear;
pub mod oracle;
pub mod pauli;
pub mod report;
pub mod sampling;
pub mod stabilizer;
pub mod states;
pub mod witnesses;

pub use error::{Error, Result};
pub use pauli::{HermitianOperator, Letter, PauliKey, PauliString, Phase};
pub use stabilizer::{MeasurementSetting, SettingPartition, StabilizerGroup};
pub use states::{DensityMatrix, Graph, PureState};
pub use witnesses::{DetectionClass, Witness};
