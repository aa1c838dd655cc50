use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use super::input::product_on;
use super::{
    InputSpec, Layout, ModeId, Modes, NvId, Outcome, PhotonId, Polarization, Port, Routing, Spin,
    SpinInit, StateError, CANONICAL_SPIN_INIT,
};
use crate::cavity::{spin_photon_map, ReflectionPair};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Amplitude tensor over a [`Layout`]. Not necessarily normalized: lossy
/// reflections shrink the norm.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperState {
    layout: Arc<Layout>,
    amps: Vec<Complex64>,
}

/// One branch of an NV readout.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub outcome: Outcome,
    /// Branch probability relative to the pre-measurement squared norm.
    pub probability: f64,
    /// Renormalized post-measurement state.
    pub state: HyperState,
}

impl HyperState {
    pub fn zero(layout: Arc<Layout>) -> Self {
        let amps = vec![ZERO; layout.len()];
        HyperState { layout, amps }
    }

    pub fn from_amplitudes(layout: Arc<Layout>, amps: Vec<Complex64>) -> Result<Self, StateError> {
        if amps.len() != layout.len() {
            return Err(StateError::LayoutMismatch);
        }
        Ok(HyperState { layout, amps })
    }

    pub fn basis(layout: Arc<Layout>, digits: &[usize]) -> Result<Self, StateError> {
        let i = layout
            .flat(digits)
            .ok_or_else(|| StateError::Layout(format!("bad basis index {digits:?}")))?;
        let mut s = Self::zero(layout);
        s.amps[i] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Tensor product of one factor per axis.
    pub fn product(layout: Arc<Layout>, factors: &[Vec<Complex64>]) -> Result<Self, StateError> {
        if factors.len() != layout.dims().len()
            || factors
                .iter()
                .zip(layout.dims())
                .any(|(f, d)| f.len() != *d)
        {
            return Err(StateError::LayoutMismatch);
        }
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for f in factors {
            let mut next = Vec::with_capacity(amps.len() * f.len());
            for a in &amps {
                next.extend(f.iter().map(|x| a * x));
            }
            amps = next;
        }
        Ok(HyperState { layout, amps })
    }

    /// Product input on the canonical layout with the canonical NV preparation.
    pub fn product_input(spec: &InputSpec) -> Result<Self, StateError> {
        product_on(Arc::new(Layout::canonical()), spec, &CANONICAL_SPIN_INIT)
    }

    pub fn product_input_on(
        layout: Arc<Layout>,
        spec: &InputSpec,
        spins: &[SpinInit],
    ) -> Result<Self, StateError> {
        product_on(layout, spec, spins)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn shared_layout(&self) -> Arc<Layout> {
        Arc::clone(&self.layout)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn amplitude(&self, digits: &[usize]) -> Option<Complex64> {
        self.layout.flat(digits).map(|i| self.amps[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &HyperState) -> Result<Complex64, StateError> {
        if self.layout != other.layout {
            return Err(StateError::LayoutMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn normalized(&self) -> Result<HyperState, StateError> {
        let n = self.norm();
        if n == 0.0 {
            return Err(StateError::ZeroNorm);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, z: Complex64) -> HyperState {
        HyperState {
            layout: Arc::clone(&self.layout),
            amps: self.amps.iter().map(|a| a * z).collect(),
        }
    }

    /// `self + z * other`.
    pub fn add_scaled(&mut self, z: Complex64, other: &HyperState) -> Result<(), StateError> {
        if self.layout != other.layout {
            return Err(StateError::LayoutMismatch);
        }
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += z * b;
        }
        Ok(())
    }

    fn mode_mask(&self, photon: PhotonId, modes: &Modes) -> Result<Vec<bool>, StateError> {
        self.layout.check_photon(photon)?;
        modes.mask(photon.0, self.layout.mode_count(photon))
    }

    /// 2x2 polarization unitary on the filtered arms of one photon.
    fn apply_polarization_matrix(
        &mut self,
        photon: PhotonId,
        modes: &Modes,
        m: [[Complex64; 2]; 2],
    ) -> Result<(), StateError> {
        let mask = self.mode_mask(photon, modes)?;
        let l = &self.layout;
        let pol = l.pol_axis(photon);
        let spat = l.spatial_axis(photon);
        let stride = l.strides()[pol];
        let block = stride * 2;
        for base in (0..self.amps.len()).step_by(block) {
            for i0 in base..base + stride {
                if !mask[l.digit(i0, spat)] {
                    continue;
                }
                let i1 = i0 + stride;
                let (a, b) = (self.amps[i0], self.amps[i1]);
                self.amps[i0] = m[0][0] * a + m[0][1] * b;
                self.amps[i1] = m[1][0] * a + m[1][1] * b;
            }
        }
        Ok(())
    }

    /// Half-wave plate at 22.5 degrees: `R -> (R+L)/sqrt2`, `L -> (R-L)/sqrt2`.
    pub fn apply_hwp_h(&mut self, photon: PhotonId, modes: &Modes) -> Result<(), StateError> {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        self.apply_polarization_matrix(photon, modes, [[h, h], [h, -h]])
    }

    /// Half-wave plate at 45 degrees: `R <-> L`.
    pub fn apply_hwp_x(&mut self, photon: PhotonId, modes: &Modes) -> Result<(), StateError> {
        let one = Complex64::new(1.0, 0.0);
        self.apply_polarization_matrix(photon, modes, [[ZERO, one], [one, ZERO]])
    }

    fn check_mode_pair(&self, photon: PhotonId, m1: ModeId, m2: ModeId) -> Result<(), StateError> {
        self.layout.check_mode(photon, m1)?;
        self.layout.check_mode(photon, m2)?;
        if m1 == m2 {
            return Err(StateError::IdenticalModes(m1.0));
        }
        Ok(())
    }

    /// Balanced beam splitter: `|m1> -> (|m1>+|m2>)/sqrt2`, `|m2> -> (|m1>-|m2>)/sqrt2`.
    pub fn apply_bs(&mut self, photon: PhotonId, m1: ModeId, m2: ModeId) -> Result<(), StateError> {
        self.check_mode_pair(photon, m1, m2)?;
        let l = &self.layout;
        let spat = l.spatial_axis(photon);
        let stride = l.strides()[spat];
        let h = FRAC_1_SQRT_2;
        for i1 in 0..self.amps.len() {
            if l.digit(i1, spat) != m1.0 {
                continue;
            }
            let i2 = i1 + m2.0 * stride - m1.0 * stride;
            let (a, b) = (self.amps[i1], self.amps[i2]);
            self.amps[i1] = (a + b) * h;
            self.amps[i2] = (a - b) * h;
        }
        Ok(())
    }

    /// Polarizing beam splitter between two arms: the L amplitude is exchanged
    /// between `m1` and `m2`, R stays in place. Used both to split a photon's L
    /// component onto a side arm and to merge it back.
    pub fn apply_pbs(
        &mut self,
        photon: PhotonId,
        m1: ModeId,
        m2: ModeId,
    ) -> Result<(), StateError> {
        self.check_mode_pair(photon, m1, m2)?;
        let l = &self.layout;
        let spat = l.spatial_axis(photon);
        let pol = l.pol_axis(photon);
        let stride = l.strides()[spat];
        for i1 in 0..self.amps.len() {
            if l.digit(i1, spat) != m1.0 || l.digit(i1, pol) != Polarization::L.index() {
                continue;
            }
            let i2 = i1 + m2.0 * stride - m1.0 * stride;
            self.amps.swap(i1, i2);
        }
        Ok(())
    }

    /// Reflection factor for each (polarization, spin) combination under a
    /// routing: `factors[pol][spin]`.
    fn encounter_factors(routing: Routing, pair: &ReflectionPair) -> [[Complex64; 2]; 2] {
        let map = spin_photon_map(pair);
        let mut f = [[Complex64::new(1.0, 0.0); 2]; 2];
        for pol in [Polarization::R, Polarization::L] {
            let effective = match routing.port(pol) {
                Port::Bypass => continue,
                Port::Enter => pol,
                Port::EnterFlipped => pol.flipped(),
            };
            for spin in [Spin::Plus, Spin::Minus] {
                f[pol.index()][spin.index()] = map.entry(effective, spin);
            }
        }
        f
    }

    fn check_encounter(
        &self,
        photon: PhotonId,
        nv: NvId,
        modes: &Modes,
    ) -> Result<Vec<bool>, StateError> {
        self.layout.check_nv(nv)?;
        self.mode_mask(photon, modes)
    }

    /// Photon (filtered arms) reflects off the cavity of `nv` per `routing`.
    pub fn apply_cavity_encounter(
        &mut self,
        photon: PhotonId,
        nv: NvId,
        modes: &Modes,
        routing: Routing,
        pair: &ReflectionPair,
    ) -> Result<(), StateError> {
        let mask = self.check_encounter(photon, nv, modes)?;
        let f = Self::encounter_factors(routing, pair);
        let l = &self.layout;
        let (pol, spat, spin) = (l.pol_axis(photon), l.spatial_axis(photon), l.spin_axis(nv));
        for (i, a) in self.amps.iter_mut().enumerate() {
            if mask[l.digit(i, spat)] {
                *a *= f[l.digit(i, pol)][l.digit(i, spin)];
            }
        }
        Ok(())
    }

    /// Like [`apply_cavity_encounter`](Self::apply_cavity_encounter), but also
    /// returns the amplitude scattered out of the optical path, weighted by
    /// `sqrt(1 - |factor|^2)` for each cavity-entering component.
    pub fn split_cavity_encounter(
        &self,
        photon: PhotonId,
        nv: NvId,
        modes: &Modes,
        routing: Routing,
        pair: &ReflectionPair,
    ) -> Result<(HyperState, HyperState), StateError> {
        let mask = self.check_encounter(photon, nv, modes)?;
        let f = Self::encounter_factors(routing, pair);
        let l = &self.layout;
        let (pol, spat, spin) = (l.pol_axis(photon), l.spatial_axis(photon), l.spin_axis(nv));
        let mut kept = self.clone();
        let mut lost = HyperState::zero(Arc::clone(&self.layout));
        for (i, a) in self.amps.iter().enumerate() {
            if !mask[l.digit(i, spat)] {
                continue;
            }
            let z = f[l.digit(i, pol)][l.digit(i, spin)];
            kept.amps[i] = a * z;
            let leak = (1.0 - z.norm_sqr()).max(0.0).sqrt();
            lost.amps[i] = a * leak;
        }
        Ok((kept, lost))
    }

    /// Microwave Hadamard: `|+> -> (|+>+|->)/sqrt2`, `|-> -> (|+>-|->)/sqrt2`.
    pub fn apply_nv_hadamard(&mut self, nv: NvId) -> Result<(), StateError> {
        self.layout.check_nv(nv)?;
        let stride = self.layout.strides()[self.layout.spin_axis(nv)];
        let h = FRAC_1_SQRT_2;
        for base in (0..self.amps.len()).step_by(2 * stride) {
            for i0 in base..base + stride {
                let i1 = i0 + stride;
                let (a, b) = (self.amps[i0], self.amps[i1]);
                self.amps[i0] = (a + b) * h;
                self.amps[i1] = (a - b) * h;
            }
        }
        Ok(())
    }

    /// Phase shifter on one spatial arm: `|m> -> e^{i phase} |m>`.
    pub fn apply_spatial_phase(
        &mut self,
        photon: PhotonId,
        mode: ModeId,
        phase: f64,
    ) -> Result<(), StateError> {
        self.layout.check_mode(photon, mode)?;
        let z = Complex64::from_polar(1.0, phase);
        let spat = self.layout.spatial_axis(photon);
        let l = &self.layout;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if l.digit(i, spat) == mode.0 {
                *a *= z;
            }
        }
        Ok(())
    }

    /// `sign * (|R><R| - |L><L|)` on a photon's polarization; `sign` is +1 or -1.
    pub fn apply_pol_sigma_z(&mut self, photon: PhotonId, sign: f64) -> Result<(), StateError> {
        self.layout.check_photon(photon)?;
        let pol = self.layout.pol_axis(photon);
        let l = &self.layout;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if l.digit(i, pol) == 0 { sign } else { -sign };
        }
        Ok(())
    }

    fn readout_vector(outcome: Outcome) -> [f64; 2] {
        [FRAC_1_SQRT_2, outcome.sign() * FRAC_1_SQRT_2]
    }

    /// `|o'><o'|` on one spin, without renormalization.
    pub fn project_nv(&self, nv: NvId, outcome: Outcome) -> Result<HyperState, StateError> {
        self.layout.check_nv(nv)?;
        let v = Self::readout_vector(outcome);
        let stride = self.layout.strides()[self.layout.spin_axis(nv)];
        let mut out = self.clone();
        for base in (0..self.amps.len()).step_by(2 * stride) {
            for i0 in base..base + stride {
                let i1 = i0 + stride;
                let overlap = self.amps[i0] * v[0] + self.amps[i1] * v[1];
                out.amps[i0] = overlap * v[0];
                out.amps[i1] = overlap * v[1];
            }
        }
        Ok(out)
    }

    /// Measure one spin in the `|+'>, |->'` basis, keeping a chosen branch.
    pub fn measure_nv(&self, nv: NvId, outcome: Outcome) -> Result<Measurement, StateError> {
        let before = self.norm_sqr();
        if before == 0.0 {
            return Err(StateError::ZeroNorm);
        }
        let projected = self.project_nv(nv, outcome)?;
        let probability = projected.norm_sqr() / before;
        let state = projected.normalized()?;
        Ok(Measurement {
            outcome,
            probability,
            state,
        })
    }

    /// Measure one spin, drawing the outcome from `rng`.
    pub fn measure_nv_random<R: Rng + ?Sized>(
        &self,
        nv: NvId,
        rng: &mut R,
    ) -> Result<Measurement, StateError> {
        let before = self.norm_sqr();
        if before == 0.0 {
            return Err(StateError::ZeroNorm);
        }
        let plus = self.project_nv(nv, Outcome::PlusPrime)?.norm_sqr() / before;
        let u: f64 = rng.random();
        let outcome = if u < plus {
            Outcome::PlusPrime
        } else {
            Outcome::MinusPrime
        };
        self.measure_nv(nv, outcome)
    }

    /// Contract every spin with the bra `<o_k'|`, leaving amplitudes on the
    /// photon-only layout.
    pub fn contract_spins(&self, outcomes: &[Outcome]) -> Result<HyperState, StateError> {
        let ns = self.layout.spin_count();
        if outcomes.len() != ns {
            return Err(StateError::Layout(format!(
                "{} outcomes for {} spins",
                outcomes.len(),
                ns
            )));
        }
        let photonic = Arc::new(self.layout.photonic());
        let block = 1usize << ns;
        let weights: Vec<f64> = (0..block)
            .map(|s| {
                outcomes
                    .iter()
                    .enumerate()
                    .map(|(k, o)| Self::readout_vector(*o)[(s >> (ns - 1 - k)) & 1])
                    .product()
            })
            .collect();
        let amps = self
            .amps
            .chunks(block)
            .map(|chunk| chunk.iter().zip(&weights).map(|(a, w)| a * w).sum())
            .collect();
        HyperState::from_amplitudes(photonic, amps)
    }

    /// Squared norm carried by one spatial mode of a photon.
    pub fn mode_weight(&self, photon: PhotonId, mode: ModeId) -> Result<f64, StateError> {
        self.layout.check_mode(photon, mode)?;
        let spat = self.layout.spatial_axis(photon);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| self.layout.digit(*i, spat) == mode.0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Zero every amplitude whose photon `photon` sits outside `keep`.
    pub fn project_modes(&self, photon: PhotonId, keep: &Modes) -> Result<HyperState, StateError> {
        let mask = self.mode_mask(photon, keep)?;
        let spat = self.layout.spatial_axis(photon);
        let mut out = self.clone();
        for (i, a) in out.amps.iter_mut().enumerate() {
            if !mask[self.layout.digit(i, spat)] {
                *a = ZERO;
            }
        }
        Ok(out)
    }
}
