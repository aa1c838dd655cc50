//! The scripted hyper-parallel C²PF circuit: eight interaction steps on three
//! photons and four NV spins, spin readout, and classical feed-forward.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cavity::ReflectionPair;
use crate::hilbert::{
    HyperState, InputSpec, Layout, ModeId, Modes, NvId, Outcome, PhotonId, Routing, SpinInit,
    StateError, CANONICAL_SPIN_INIT,
};

/// Tolerance for branch agreement and leakage checks on ideal runs.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GateError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error("invalid script: {0}")]
    InvalidScript(String),
    #[error("state layout does not match the script's declarations")]
    LayoutMismatch,
    #[error("total photon loss: zero-norm state before measurement")]
    TotalLoss,
    #[error("measurement record has {got} outcomes, script measures {expected} spins")]
    IncompleteRecord { got: usize, expected: usize },
    #[error("cavity set holds {got} pairs for {expected} NV spins")]
    CavityCount { got: usize, expected: usize },
    #[error("measurement branches disagree by {0:e}")]
    BranchDisagreement(f64),
    #[error("amplitude {0:e} left outside the output ports")]
    Leakage(f64),
}

/// One primitive optical or microwave element.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    /// Half-wave plate at 22.5 degrees (polarization Hadamard).
    HalfWaveH {
        photon: PhotonId,
        modes: Modes,
    },
    /// Half-wave plate at 45 degrees (polarization bit flip).
    HalfWaveX {
        photon: PhotonId,
        modes: Modes,
    },
    BeamSplitter {
        photon: PhotonId,
        m1: ModeId,
        m2: ModeId,
    },
    /// Exchanges the L component between a main arm and its side arm.
    PolarizingSplitter {
        photon: PhotonId,
        m1: ModeId,
        m2: ModeId,
    },
    Cavity {
        photon: PhotonId,
        nv: NvId,
        modes: Modes,
        routing: Routing,
    },
    NvHadamard {
        nv: NvId,
    },
    PhaseShift {
        photon: PhotonId,
        mode: ModeId,
        phase: f64,
    },
    /// `sign * sigma_z` on a photon's polarization.
    PolSigmaZ {
        photon: PhotonId,
        sign: f64,
    },
}

impl Element {
    pub fn photon(&self) -> Option<PhotonId> {
        match self {
            Element::HalfWaveH { photon, .. }
            | Element::HalfWaveX { photon, .. }
            | Element::BeamSplitter { photon, .. }
            | Element::PolarizingSplitter { photon, .. }
            | Element::Cavity { photon, .. }
            | Element::PhaseShift { photon, .. }
            | Element::PolSigmaZ { photon, .. } => Some(*photon),
            Element::NvHadamard { .. } => None,
        }
    }

    pub fn nv(&self) -> Option<NvId> {
        match self {
            Element::Cavity { nv, .. } | Element::NvHadamard { nv } => Some(*nv),
            _ => None,
        }
    }

    fn check(&self, layout: &Layout) -> Result<(), StateError> {
        if let Some(p) = self.photon() {
            layout.check_photon(p)?;
        }
        if let Some(nv) = self.nv() {
            layout.check_nv(nv)?;
        }
        match self {
            Element::HalfWaveH { photon, modes }
            | Element::HalfWaveX { photon, modes }
            | Element::Cavity { photon, modes, .. } => {
                modes.mask(photon.0, layout.mode_count(*photon))?;
            }
            Element::BeamSplitter { photon, m1, m2 }
            | Element::PolarizingSplitter { photon, m1, m2 } => {
                layout.check_mode(*photon, *m1)?;
                layout.check_mode(*photon, *m2)?;
                if m1 == m2 {
                    return Err(StateError::IdenticalModes(m1.0));
                }
            }
            Element::PhaseShift { photon, mode, .. } => layout.check_mode(*photon, *mode)?,
            Element::NvHadamard { .. } | Element::PolSigmaZ { .. } => {}
        }
        Ok(())
    }

    pub fn apply(&self, state: &mut HyperState, cavities: &CavitySet) -> Result<(), GateError> {
        match self {
            Element::HalfWaveH { photon, modes } => state.apply_hwp_h(*photon, modes)?,
            Element::HalfWaveX { photon, modes } => state.apply_hwp_x(*photon, modes)?,
            Element::BeamSplitter { photon, m1, m2 } => state.apply_bs(*photon, *m1, *m2)?,
            Element::PolarizingSplitter { photon, m1, m2 } => state.apply_pbs(*photon, *m1, *m2)?,
            Element::Cavity {
                photon,
                nv,
                modes,
                routing,
            } => {
                let pair = cavities.pair(*nv)?;
                state.apply_cavity_encounter(*photon, *nv, modes, *routing, &pair)?
            }
            Element::NvHadamard { nv } => state.apply_nv_hadamard(*nv)?,
            Element::PhaseShift {
                photon,
                mode,
                phase,
            } => state.apply_spatial_phase(*photon, *mode, *phase)?,
            Element::PolSigmaZ { photon, sign } => state.apply_pol_sigma_z(*photon, *sign)?,
        }
        Ok(())
    }
}

/// Elements acting on one photon's path and at most one NV spin.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub elements: Vec<Element>,
}

impl Block {
    pub fn new(elements: Vec<Element>) -> Self {
        Block { elements }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub label: String,
    pub blocks: Vec<Block>,
}

impl Step {
    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.blocks.iter().flat_map(|b| &b.elements)
    }
}

/// Classical correction applied when `nv` reads out `|->'`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedForwardRule {
    pub nv: NvId,
    pub correction: Element,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitScript {
    pub layout: Arc<Layout>,
    pub spin_init: Vec<SpinInit>,
    pub steps: Vec<Step>,
    /// Readout order.
    pub measurements: Vec<NvId>,
    pub feed_forward: Vec<FeedForwardRule>,
}

impl CircuitScript {
    pub fn validate(&self) -> Result<(), GateError> {
        let bad = |m: String| Err(GateError::InvalidScript(m));
        let l = &self.layout;
        if self.spin_init.len() != l.spin_count() {
            return bad(format!(
                "{} spin initializers for {} spins",
                self.spin_init.len(),
                l.spin_count()
            ));
        }
        for step in &self.steps {
            for block in &step.blocks {
                let photons: Vec<_> = block.elements.iter().filter_map(Element::photon).collect();
                let nvs: Vec<_> = block.elements.iter().filter_map(Element::nv).collect();
                if photons.windows(2).any(|w| w[0] != w[1]) {
                    return bad(format!(
                        "block in step {} touches several photons",
                        step.label
                    ));
                }
                if nvs.windows(2).any(|w| w[0] != w[1]) {
                    return bad(format!(
                        "block in step {} touches several NV spins",
                        step.label
                    ));
                }
                for e in &block.elements {
                    e.check(l)?;
                }
            }
        }
        let mut seen = vec![false; l.spin_count()];
        for nv in &self.measurements {
            l.check_nv(*nv)?;
            if std::mem::replace(&mut seen[nv.0], true) {
                return bad(format!("{nv} measured twice"));
            }
        }
        if !self.measurements.is_empty() && seen.contains(&false) {
            return bad("measurements must read out every NV spin or none".into());
        }
        for rule in &self.feed_forward {
            if !self.measurements.contains(&rule.nv) {
                return bad(format!("feed-forward conditions on unmeasured {}", rule.nv));
            }
            if rule.correction.nv().is_some() {
                return bad("feed-forward corrections act on photons only".into());
            }
            rule.correction.check(l)?;
        }
        Ok(())
    }

    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.steps.iter().flat_map(Step::elements)
    }

    /// Product input on this script's layout and spin preparation.
    pub fn input_state(&self, spec: &InputSpec) -> Result<HyperState, GateError> {
        Ok(HyperState::product_input_on(
            Arc::clone(&self.layout),
            spec,
            &self.spin_init,
        )?)
    }

    fn check_state(&self, state: &HyperState) -> Result<(), GateError> {
        let l = state.layout();
        let n = self.layout.photon_count();
        if l.spins() != self.layout.spins()
            || l.photon_count() < n
            || l.photons()[..n] != self.layout.photons()[..]
        {
            return Err(GateError::LayoutMismatch);
        }
        Ok(())
    }
}

/// Reflection amplitudes of the NV cavities.
#[derive(Debug, Clone, PartialEq)]
pub enum CavitySet {
    Shared(ReflectionPair),
    PerNv(Vec<ReflectionPair>),
}

impl CavitySet {
    pub fn pair(&self, nv: NvId) -> Result<ReflectionPair, GateError> {
        match self {
            CavitySet::Shared(p) => Ok(*p),
            CavitySet::PerNv(v) => v.get(nv.0).copied().ok_or(GateError::CavityCount {
                got: v.len(),
                expected: nv.0 + 1,
            }),
        }
    }
}

impl From<ReflectionPair> for CavitySet {
    fn from(p: ReflectionPair) -> Self {
        CavitySet::Shared(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BranchPolicy {
    Sample(u64),
    Enumerate,
    /// Outcomes in NV index order.
    Fixed(Vec<Outcome>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    /// Outcomes in NV index order.
    pub outcomes: Vec<Outcome>,
    /// Squared norm of the branch; the 16 records sum to the pre-measurement
    /// squared norm.
    pub probability: f64,
}

#[derive(Debug, Clone)]
pub struct Branch {
    pub record: MeasurementRecord,
    /// Photonic factor after readout and feed-forward, not renormalized.
    pub photonic: HyperState,
}

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub label: String,
    pub state: HyperState,
}

#[derive(Debug, Clone)]
pub struct GateOutcome {
    pub checkpoints: Vec<Checkpoint>,
    pub pre_measurement: HyperState,
    pub branches: Vec<Branch>,
}

/// Runs every step on `state` in place.
pub fn evolve(
    state: &mut HyperState,
    script: &CircuitScript,
    cavities: &CavitySet,
) -> Result<(), GateError> {
    script.check_state(state)?;
    for e in script.elements() {
        e.apply(state, cavities)?;
    }
    Ok(())
}

pub fn run(
    input: &HyperState,
    script: &CircuitScript,
    cavities: &CavitySet,
    policy: &BranchPolicy,
) -> Result<GateOutcome, GateError> {
    script.validate()?;
    script.check_state(input)?;
    let mut state = input.clone();
    let mut checkpoints = Vec::with_capacity(script.steps.len());
    for step in &script.steps {
        for e in step.elements() {
            e.apply(&mut state, cavities)?;
        }
        checkpoints.push(Checkpoint {
            label: step.label.clone(),
            state: state.clone(),
        });
    }
    if script.measurements.is_empty() {
        return Ok(GateOutcome {
            checkpoints,
            pre_measurement: state,
            branches: Vec::new(),
        });
    }
    if state.norm_sqr() == 0.0 {
        return Err(GateError::TotalLoss);
    }
    let records: Vec<Vec<Outcome>> = match policy {
        BranchPolicy::Enumerate => {
            enumerate_outcomes(&script.measurements, script.layout.spin_count())
        }
        BranchPolicy::Fixed(o) => {
            if o.len() != script.layout.spin_count() {
                return Err(GateError::IncompleteRecord {
                    got: o.len(),
                    expected: script.layout.spin_count(),
                });
            }
            vec![o.clone()]
        }
        BranchPolicy::Sample(seed) => vec![sample_outcomes(&state, script, *seed)?],
    };
    let branches = records
        .into_iter()
        .map(|outcomes| branch(&state, script, outcomes))
        .collect::<Result<_, _>>()?;
    Ok(GateOutcome {
        checkpoints,
        pre_measurement: state,
        branches,
    })
}

/// All outcome combinations, recorded in NV index order; the first spin of
/// `order` varies slowest.
fn enumerate_outcomes(order: &[NvId], n: usize) -> Vec<Vec<Outcome>> {
    let m = order.len();
    (0..1usize << m)
        .map(|k| {
            let mut o = vec![Outcome::PlusPrime; n];
            for (i, nv) in order.iter().enumerate() {
                o[nv.0] = Outcome::BOTH[(k >> (m - 1 - i)) & 1];
            }
            o
        })
        .collect()
}

/// Every readout record of `script`, in enumeration order.
pub fn branch_outcomes(script: &CircuitScript) -> Vec<Vec<Outcome>> {
    enumerate_outcomes(&script.measurements, script.layout.spin_count())
}

fn sample_outcomes(
    state: &HyperState,
    script: &CircuitScript,
    seed: u64,
) -> Result<Vec<Outcome>, GateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes = vec![Outcome::PlusPrime; script.layout.spin_count()];
    let mut s = state.clone();
    for nv in &script.measurements {
        let total = s.norm_sqr();
        let plus = s.project_nv(*nv, Outcome::PlusPrime)?;
        let p = plus.norm_sqr() / total;
        let o = if rng.random::<f64>() < p {
            Outcome::PlusPrime
        } else {
            Outcome::MinusPrime
        };
        outcomes[nv.0] = o;
        s = if o == Outcome::PlusPrime {
            plus
        } else {
            s.project_nv(*nv, o)?
        };
    }
    Ok(outcomes)
}

fn branch(
    state: &HyperState,
    script: &CircuitScript,
    outcomes: Vec<Outcome>,
) -> Result<Branch, GateError> {
    let photonic = state.contract_spins(&outcomes)?;
    let record = MeasurementRecord {
        outcomes,
        probability: 0.0,
    };
    let photonic = feed_forward(&photonic, script, &record)?;
    Ok(Branch {
        record: MeasurementRecord {
            probability: photonic.norm_sqr(),
            ..record
        },
        photonic,
    })
}

/// Applies the corrections whose NV read `|->'`. Works on any state that
/// carries the script's photons, with or without spins.
pub fn feed_forward(
    state: &HyperState,
    script: &CircuitScript,
    record: &MeasurementRecord,
) -> Result<HyperState, GateError> {
    let expected = script.layout.spin_count();
    if record.outcomes.len() != expected {
        return Err(GateError::IncompleteRecord {
            got: record.outcomes.len(),
            expected,
        });
    }
    let mut out = state.clone();
    let none = CavitySet::Shared(ReflectionPair::IDEAL);
    for rule in &script.feed_forward {
        if record.outcomes[rule.nv.0] == Outcome::MinusPrime {
            rule.correction.apply(&mut out, &none)?;
        }
    }
    Ok(out)
}

/// Visits every quantum-trajectory branch of photon loss. A photon lost at a
/// cavity encounter is dropped from the remaining optics; its last indices
/// stay in the state as a which-path record. The visitor receives the
/// per-photon loss mask and the final (pre-measurement) branch state.
pub fn trace_losses<F>(
    input: &HyperState,
    script: &CircuitScript,
    cavities: &CavitySet,
    mut visit: F,
) -> Result<(), GateError>
where
    F: FnMut(&[bool], &HyperState),
{
    script.check_state(input)?;
    let elements: Vec<&Element> = script.elements().collect();
    let mut stack = vec![(
        0usize,
        vec![false; input.layout().photon_count()],
        input.clone(),
    )];
    while let Some((start, lost, mut state)) = stack.pop() {
        for (k, e) in elements.iter().enumerate().skip(start) {
            if e.photon().is_some_and(|p| lost[p.0]) {
                continue;
            }
            if let Element::Cavity {
                photon,
                nv,
                modes,
                routing,
            } = e
            {
                let pair = cavities.pair(*nv)?;
                let (kept, leaked) =
                    state.split_cavity_encounter(*photon, *nv, modes, *routing, &pair)?;
                if leaked.norm_sqr() > 0.0 {
                    let mut mask = lost.clone();
                    mask[photon.0] = true;
                    stack.push((k + 1, mask, leaked));
                }
                state = kept;
            } else {
                e.apply(&mut state, cavities)?;
            }
        }
        visit(&lost, &state);
    }
    Ok(())
}

/// Photonic basis index `k` in `0..64` as digits
/// `(pol_a, spat_a, pol_b, spat_b, pol_c, spat_c)`.
pub fn photonic_bits(k: usize) -> [usize; 6] {
    std::array::from_fn(|i| (k >> (5 - i)) & 1)
}

/// Dense 64x64 operator on the photonic qubits, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonicOperator {
    entries: Vec<Complex64>,
}

impl PhotonicOperator {
    pub const DIM: usize = 64;

    pub fn zeros() -> Self {
        PhotonicOperator {
            entries: vec![Complex64::new(0.0, 0.0); Self::DIM * Self::DIM],
        }
    }

    pub fn from_diagonal(d: &[Complex64]) -> Self {
        let mut m = Self::zeros();
        for (i, z) in d.iter().enumerate() {
            m.set(i, i, *z);
        }
        m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * Self::DIM + col]
    }

    pub fn set(&mut self, row: usize, col: usize, z: Complex64) {
        self.entries[row * Self::DIM + col] = z;
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..Self::DIM).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal().iter().sum()
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..Self::DIM {
            for j in 0..Self::DIM {
                if i != j {
                    m = m.max(self.get(i, j).norm());
                }
            }
        }
        m
    }

    /// Largest entrywise difference after removing one global phase,
    /// aligned on the largest-magnitude entry of `self`.
    pub fn distance_up_to_phase(&self, other: &PhotonicOperator) -> f64 {
        let (k, _) = self
            .entries
            .iter()
            .enumerate()
            .fold((0, 0.0), |(bk, bn), (k, z)| {
                if z.norm() > bn {
                    (k, z.norm())
                } else {
                    (bk, bn)
                }
            });
        let (a, b) = (self.entries[k], other.entries[k]);
        let phase = if a.norm() > 0.0 && b.norm() > 0.0 {
            (b / a) / (b / a).norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| (x * phase - y).norm())
            .fold(0.0, f64::max)
    }
}

/// Photonic amplitudes of a state on the canonical photon layout, restricted
/// to the first two spatial modes of every photon. Returns the 64 amplitudes
/// and the squared norm left over in the other modes.
pub fn photonic_columns(state: &HyperState) -> Result<([Complex64; 64], f64), GateError> {
    let l = state.layout();
    if l.spin_count() != 0 || l.photon_count() != 3 {
        return Err(GateError::LayoutMismatch);
    }
    let mut out = [Complex64::new(0.0, 0.0); 64];
    let mut total = 0.0;
    for (k, slot) in out.iter_mut().enumerate() {
        let d = photonic_bits(k);
        *slot = state.amplitude(&d).ok_or(GateError::LayoutMismatch)?;
        total += slot.norm_sqr();
    }
    Ok((out, (state.norm_sqr() - total).max(0.0)))
}

/// Computational basis input `k` on the script's layout.
pub fn basis_input(script: &CircuitScript, k: usize) -> Result<HyperState, GateError> {
    script.input_state(&InputSpec::basis(photonic_bits(k)))
}

/// Photonic operator realized by `script` with the ideal pair, checked to be
/// identical (up to a global phase) in every measurement branch.
pub fn transfer_matrix(script: &CircuitScript) -> Result<PhotonicOperator, GateError> {
    script.validate()?;
    let n_out = 1usize << script.layout.spin_count();
    let scale = (n_out as f64).sqrt();
    let mut per_branch = vec![PhotonicOperator::zeros(); n_out];
    let ideal = CavitySet::Shared(ReflectionPair::IDEAL);
    for col in 0..PhotonicOperator::DIM {
        let input = basis_input(script, col)?;
        let outcome = run(&input, script, &ideal, &BranchPolicy::Enumerate)?;
        if outcome.branches.len() != n_out {
            return Err(GateError::InvalidScript(
                "script does not measure its spins".into(),
            ));
        }
        for (b, br) in outcome.branches.iter().enumerate() {
            let (column, leak) = photonic_columns(&br.photonic)?;
            if leak > CONSISTENCY_TOLERANCE {
                return Err(GateError::Leakage(leak));
            }
            for (row, z) in column.iter().enumerate() {
                per_branch[b].set(row, col, z * scale);
            }
        }
    }
    let first = per_branch[0].clone();
    for other in &per_branch[1..] {
        let d = first.distance_up_to_phase(other);
        if d > CONSISTENCY_TOLERANCE {
            return Err(GateError::BranchDisagreement(d));
        }
    }
    Ok(first)
}

/// [`transfer_matrix`] of the canonical script.
pub fn ideal_transfer_matrix() -> Result<PhotonicOperator, GateError> {
    transfer_matrix(&canonical_script())
}

/// Two independent controlled-controlled-Z gates, built directly: one with
/// controls `pol_a`, `pol_b` and target `spat_c`, one with controls `spat_a`,
/// `spat_b` and target `pol_c`. `L`, `a2`, `b2`, `c2` are the `1` states.
pub fn reference_truth_table() -> PhotonicOperator {
    let d: Vec<Complex64> = (0..PhotonicOperator::DIM)
        .map(|k| {
            let [pa, sa, pb, sb, pc, sc] = photonic_bits(k);
            let first = pa & pb & sc;
            let second = sa & sb & pc;
            Complex64::new(if first ^ second == 1 { -1.0 } else { 1.0 }, 0.0)
        })
        .collect();
    PhotonicOperator::from_diagonal(&d)
}

/// The hyper-parallel C²PF circuit on the canonical layout.
pub fn canonical_script() -> CircuitScript {
    let layout = Arc::new(Layout::canonical());
    let (a, b, c) = (PhotonId(0), PhotonId(1), PhotonId(2));
    let nv = NvId;
    let m = ModeId;
    let [c1, c2, c3, c4, c5] = [m(0), m(1), m(2), m(3), m(4)];
    let side = || Modes::Only(vec![c4, c5]);
    let cav = |photon, n, modes, routing| Element::Cavity {
        photon,
        nv: nv(n),
        modes,
        routing,
    };
    let hnv = |n| Block::new(vec![Element::NvHadamard { nv: nv(n) }]);
    let bs = |m1, m2| Element::BeamSplitter { photon: c, m1, m2 };
    let pbs = |m1, m2| Element::PolarizingSplitter { photon: c, m1, m2 };
    let h_side = || Element::HalfWaveH {
        photon: c,
        modes: side(),
    };
    let split_block = |n| {
        Block::new(vec![
            bs(c2, c3),
            cav(c, n, Modes::one(c2), Routing::UNIFORM),
            bs(c2, c3),
        ])
    };
    let step = |label: &str, blocks: Vec<Block>| Step {
        label: label.to_string(),
        blocks,
    };
    let steps = vec![
        step(
            "1",
            vec![
                Block::new(vec![cav(b, 0, Modes::All, Routing::DIRECT)]),
                hnv(0),
            ],
        ),
        step("2", vec![split_block(0)]),
        step(
            "3",
            vec![
                Block::new(vec![cav(a, 1, Modes::All, Routing::DIRECT)]),
                hnv(1),
            ],
        ),
        step(
            "4",
            vec![
                Block::new(vec![cav(c, 1, Modes::one(c2), Routing::UNIFORM)]),
                split_block(0),
            ],
        ),
        step(
            "5",
            vec![
                Block::new(vec![cav(b, 2, Modes::one(m(1)), Routing::UNIFORM)]),
                hnv(2),
            ],
        ),
        step(
            "6",
            vec![Block::new(vec![
                pbs(c1, c4),
                pbs(c2, c5),
                h_side(),
                cav(c, 2, side(), Routing::L_PATH),
                h_side(),
            ])],
        ),
        step(
            "7",
            vec![
                Block::new(vec![cav(a, 3, Modes::one(m(1)), Routing::UNIFORM)]),
                hnv(3),
            ],
        ),
        step(
            "8",
            vec![
                Block::new(vec![cav(c, 3, side(), Routing::L_PATH), h_side()]),
                Block::new(vec![
                    cav(c, 2, side(), Routing::L_PATH),
                    h_side(),
                    pbs(c1, c4),
                    pbs(c2, c5),
                ]),
            ],
        ),
    ];
    let pi = std::f64::consts::PI;
    let feed_forward = vec![
        FeedForwardRule {
            nv: nv(3),
            correction: Element::PhaseShift {
                photon: a,
                mode: m(0),
                phase: pi,
            },
        },
        FeedForwardRule {
            nv: nv(2),
            correction: Element::PhaseShift {
                photon: b,
                mode: m(1),
                phase: pi,
            },
        },
        FeedForwardRule {
            nv: nv(1),
            correction: Element::PolSigmaZ {
                photon: a,
                sign: 1.0,
            },
        },
        FeedForwardRule {
            nv: nv(0),
            correction: Element::PolSigmaZ {
                photon: b,
                sign: -1.0,
            },
        },
    ];
    CircuitScript {
        layout,
        spin_init: CANONICAL_SPIN_INIT.to_vec(),
        steps,
        measurements: vec![nv(3), nv(2), nv(1), nv(0)],
        feed_forward,
    }
}
