//! State space of three dual-DOF photons and a register of NV spins.
//!
//! Each photon contributes a polarization axis (`R`, `L`) and a spatial axis
//! with as many modes as its declaration lists; each NV spin contributes a
//! two-level axis (`|+>`, `|->`). Amplitudes are stored row-major in the order
//! `pol_0, spatial_0, pol_1, spatial_1, ..., spin_0, spin_1, ...`, which is
//! also the index order of state snapshots.

mod input;
mod layout;
mod snapshot;
mod state;

pub use input::{AngleTuple, InputSpec, SpinInit, CANONICAL_SPIN_INIT};
pub use layout::{Layout, ModeId, Modes, NvId, PhotonDecl, PhotonId};
pub use snapshot::{SnapshotEntry, SnapshotError, SNAPSHOT_THRESHOLD};
pub use state::{HyperState, Measurement};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarization {
    R,
    L,
}

impl Polarization {
    pub fn index(self) -> usize {
        match self {
            Polarization::R => 0,
            Polarization::L => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Polarization::R
        } else {
            Polarization::L
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Polarization::R => Polarization::L,
            Polarization::L => Polarization::R,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Plus,
    Minus,
}

impl Spin {
    pub fn index(self) -> usize {
        match self {
            Spin::Plus => 0,
            Spin::Minus => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Spin::Plus
        } else {
            Spin::Minus
        }
    }
}

/// NV readout outcome in the `|+'>, |-'>` basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    PlusPrime,
    MinusPrime,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::PlusPrime, Outcome::MinusPrime];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::PlusPrime => 1.0,
            Outcome::MinusPrime => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Outcome::PlusPrime => '+',
            Outcome::MinusPrime => '-',
        }
    }
}

/// What happens to one polarization component at a cavity block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Port {
    /// Routed around the cavity; picks up nothing.
    Bypass,
    /// Reflects off the cavity with its own polarization.
    Enter,
    /// Flipped by a half-wave plate before the cavity and flipped back after.
    EnterFlipped,
}

/// Polarization wiring of a cavity block: one [`Port`] per circular component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Routing {
    pub right: Port,
    pub left: Port,
}

impl Routing {
    /// R enters the cavity, L bypasses.
    pub const DIRECT: Routing = Routing::new(Port::Enter, Port::Bypass);
    /// L enters through a pair of bit-flip plates, R bypasses.
    pub const X_CONJUGATED: Routing = Routing::new(Port::Bypass, Port::EnterFlipped);
    /// Both components reflect with their own polarization.
    pub const BOTH: Routing = Routing::new(Port::Enter, Port::Enter);
    /// R enters directly and L through the bit-flip pair, so both couple as R
    /// and the phase depends on the spin only.
    pub const UNIFORM: Routing = Routing::new(Port::Enter, Port::EnterFlipped);
    /// L enters with its own polarization, R bypasses.
    pub const L_PATH: Routing = Routing::new(Port::Bypass, Port::Enter);

    pub const fn new(right: Port, left: Port) -> Self {
        Routing { right, left }
    }

    pub fn port(&self, pol: Polarization) -> Port {
        match pol {
            Polarization::R => self.right,
            Polarization::L => self.left,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("photon index {0} out of range")]
    InvalidPhoton(usize),
    #[error("spatial mode index {mode} out of range for photon {photon}")]
    InvalidMode { photon: usize, mode: usize },
    #[error("empty spatial-mode filter")]
    EmptyModes,
    #[error("beam splitter needs two distinct modes, got {0} twice")]
    IdenticalModes(usize),
    #[error("NV index {0} out of range")]
    InvalidNv(usize),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("coefficient pair {0} is not normalized")]
    NotNormalized(&'static str),
    #[error("states live on different layouts")]
    LayoutMismatch,
    #[error("{0}")]
    Layout(String),
}
