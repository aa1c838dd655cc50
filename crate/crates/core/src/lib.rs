//! State-vector simulation of a hyper-parallel controlled-controlled-phase-flip
//! gate acting on the polarization and spatial qubits of three photons, with
//! photon-spin interactions mediated by NV centres in single-sided cavities.
//!
//! ```
//! use hyperc2pf::{ideal_transfer_matrix, reference_truth_table};
//!
//! let realized = ideal_transfer_matrix().unwrap();
//! assert!(realized.distance_up_to_phase(&reference_truth_table()) < 1e-10);
//! ```

pub mod cavity;
pub mod gate;
pub mod hilbert;
pub mod metrics;
pub mod netlist;

pub use cavity::{
    reflection_coefficient, resonant_pair, spin_photon_map, CavityError, CavityParams,
    ReflectionPair, SpinPhotonMap,
};
pub use gate::{
    canonical_script, evolve, feed_forward, ideal_transfer_matrix, reference_truth_table, run,
    BranchPolicy, CavitySet, CircuitScript, Element, GateError, GateOutcome, MeasurementRecord,
    PhotonicOperator,
};
pub use hilbert::{
    AngleTuple, HyperState, InputSpec, Layout, ModeId, Modes, NvId, Outcome, PhotonId,
    Polarization, Routing, Spin, SpinInit, StateError,
};
pub use metrics::{
    average_efficiency_numeric, average_fidelity, efficiency_closed_form, efficiency_single,
    fidelity_single, sweep, EfficiencyDefinition, Estimate, FidelityMode, GateResponse,
    MetricsError, Sampler, SweepTable,
};
pub use netlist::{parse_netlist, print_netlist, NetlistError};
