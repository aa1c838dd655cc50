//! Average fidelity and efficiency of the canonical circuit under realistic
//! cavity reflection.
//!
//! Both figures of merit are quadratic in the photonic input. [`GateResponse`]
//! evolves all 64 photonic basis inputs at once (entangled with a reference
//! register) and condenses the result into 64x64 matrices, so each sampled
//! input costs a few small quadratic forms instead of a circuit run.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cavity::{resonant_pair, CavityError, ReflectionPair};
use crate::gate::{
    branch_outcomes, canonical_script, evolve, feed_forward, photonic_bits, run, trace_losses,
    BranchPolicy, CavitySet, CircuitScript, GateError, MeasurementRecord,
};
use crate::hilbert::{
    AngleTuple, HyperState, InputSpec, Layout, ModeId, Modes, PhotonDecl, PhotonId,
};

/// Spatial modes `0..OUTPUT_MODES` of every photon are output ports.
pub const OUTPUT_MODES: usize = 2;

const DIM: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Cavity(#[from] CavityError),
    #[error("gate failure: no amplitude reaches the output ports")]
    GateFailure,
    #[error("Monte Carlo needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("quadrature needs at least 1 point per angle")]
    NoQuadraturePoints,
    #[error("empty coupling grid")]
    EmptyGrid,
    #[error("invalid coupling grid: {0}")]
    InvalidGrid(String),
    #[error("|r| = {0} outside [0, 1]")]
    OutOfRange(f64),
}

/// Reference state for the fidelity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FidelityMode {
    /// Photons and spins just before readout.
    #[default]
    PreMeasurement,
    /// Photonic output after readout and feed-forward, weighted over branches.
    PostFeedForward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EfficiencyDefinition {
    /// Probability that all three photons leave through output ports.
    #[default]
    AllPhotonsOut,
    /// Expected fraction of the three photons that leave through output ports.
    PhotonFraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sampler {
    MonteCarlo {
        samples: usize,
        seed: u64,
    },
    /// Uniform grid of `points` angles per axis (trapezoidal rule on the torus).
    Quadrature {
        points: usize,
    },
}

impl Sampler {
    pub const DEFAULT_MC_SAMPLES: usize = 100_000;
    pub const DEFAULT_QUADRATURE_POINTS: usize = 8;
}

/// Sample mean with its uncertainty: the standard error for Monte Carlo, the
/// difference to the grid with one point fewer per angle for quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Which closed-form efficiency bracketing to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ClosedFormReading {
    /// `(121 + f) (91 + h) / 2^17`; equals 1 at `|r| = 1`.
    #[default]
    Corrected,
    /// `(121 + f (91 + h)) / 2^17`, the bracketing read literally.
    Literal,
}

fn f_poly<T>(r: &T) -> T
where
    T: Clone + From<i32> + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
{
    let c = |k: i32| T::from(k);
    let r2 = r.clone() * r.clone();
    let r3 = r2.clone() * r.clone();
    let r4 = r3.clone() * r.clone();
    let r5 = r4.clone() * r.clone();
    let two_r = c(2) + r.clone();
    c(128) * r.clone()
        + c(164) * r2
        + c(40) * r3
        + c(14) * r4
        + r5 * two_r.clone() * two_r * (c(4) + r.clone())
}

fn h_poly<T>(r: &T) -> T
where
    T: Clone + From<i32> + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
{
    let c = |k: i32| T::from(k);
    let mut powers = vec![c(1)];
    for k in 1..=7 {
        let next = powers[k - 1].clone() * r.clone();
        powers.push(next);
    }
    let coeffs = [58, 42, 18, 12, 14, 14];
    let mut acc = c(0);
    for (k, a) in coeffs.iter().enumerate() {
        acc = acc + c(*a) * powers[k + 1].clone();
    }
    acc + powers[7].clone() * (c(6) + r.clone())
}

fn combine<T>(f: T, h: T, reading: ClosedFormReading) -> T
where
    T: From<i32> + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
{
    match reading {
        ClosedFormReading::Corrected => (T::from(121) + f) * (T::from(91) + h),
        ClosedFormReading::Literal => T::from(121) + f * (T::from(91) + h),
    }
}

/// Closed-form average efficiency, corrected reading.
pub fn efficiency_closed_form(r_mag: f64) -> Result<f64, MetricsError> {
    efficiency_closed_form_with(r_mag, ClosedFormReading::Corrected)
}

pub fn efficiency_closed_form_with(
    r_mag: f64,
    reading: ClosedFormReading,
) -> Result<f64, MetricsError> {
    if !(0.0..=1.0).contains(&r_mag) {
        return Err(MetricsError::OutOfRange(r_mag));
    }
    Ok(combine(f_poly(&r_mag), h_poly(&r_mag), reading) / 131072.0)
}

/// Exact rational evaluation of the closed form.
pub fn efficiency_closed_form_exact(
    r_mag: &BigRational,
    reading: ClosedFormReading,
) -> Result<BigRational, MetricsError> {
    if *r_mag < BigRational::zero() || *r_mag > BigRational::one() {
        return Err(MetricsError::OutOfRange(f64::NAN));
    }
    #[derive(Clone)]
    struct Q(BigRational);
    impl From<i32> for Q {
        fn from(k: i32) -> Self {
            Q(BigRational::from_integer(BigInt::from(k)))
        }
    }
    impl std::ops::Add for Q {
        type Output = Q;
        fn add(self, o: Q) -> Q {
            Q(self.0 + o.0)
        }
    }
    impl std::ops::Mul for Q {
        type Output = Q;
        fn mul(self, o: Q) -> Q {
            Q(self.0 * o.0)
        }
    }
    let r = Q(r_mag.clone());
    let num = combine(f_poly(&r), h_poly(&r), reading).0;
    Ok(num / BigRational::from_integer(BigInt::from(131072)))
}

/// Zero every amplitude with some photon outside its output ports.
pub fn project_outputs(state: &HyperState, photons: usize) -> Result<HyperState, GateError> {
    let keep = Modes::Only((0..OUTPUT_MODES).map(ModeId).collect());
    let mut s = state.clone();
    for p in 0..photons {
        if s.layout().mode_count(PhotonId(p)) > OUTPUT_MODES {
            s = s.project_modes(PhotonId(p), &keep)?;
        }
    }
    Ok(s)
}

/// Fidelity of one product input, computed by running the circuit directly.
pub fn fidelity_single(
    angles: &AngleTuple,
    pair: &ReflectionPair,
    mode: FidelityMode,
) -> Result<f64, MetricsError> {
    let script = canonical_script();
    let input = script.input_state(&InputSpec::from_angles(angles))?;
    let ideal = run(
        &input,
        &script,
        &ReflectionPair::IDEAL.into(),
        &BranchPolicy::Enumerate,
    )?;
    let mut real = input;
    evolve(&mut real, &script, &(*pair).into())?;
    let real = project_outputs(&real, 3)?;
    let norm = real.norm_sqr();
    if norm == 0.0 {
        return Err(MetricsError::GateFailure);
    }
    match mode {
        FidelityMode::PreMeasurement => Ok(ideal
            .pre_measurement
            .inner(&real)
            .map_err(GateError::from)?
            .norm_sqr()
            / norm),
        FidelityMode::PostFeedForward => {
            let target = ideal.branches[0]
                .photonic
                .normalized()
                .map_err(GateError::from)?;
            let mut overlap = 0.0;
            for outcomes in branch_outcomes(&script) {
                let record = MeasurementRecord {
                    outcomes,
                    probability: 0.0,
                };
                let contracted = real
                    .contract_spins(&record.outcomes)
                    .map_err(GateError::from)?;
                let out = feed_forward(&contracted, &script, &record)?;
                overlap += target.inner(&out).map_err(GateError::from)?.norm_sqr();
            }
            Ok(overlap / norm)
        }
    }
}

/// Efficiency of one product input, computed by running the circuit directly.
pub fn efficiency_single(
    angles: &AngleTuple,
    pair: &ReflectionPair,
    definition: EfficiencyDefinition,
) -> Result<f64, MetricsError> {
    let script = canonical_script();
    let input = script.input_state(&InputSpec::from_angles(angles))?;
    let cavities: CavitySet = (*pair).into();
    match definition {
        EfficiencyDefinition::AllPhotonsOut => {
            let mut s = input;
            evolve(&mut s, &script, &cavities)?;
            Ok(project_outputs(&s, 3)?.norm_sqr())
        }
        EfficiencyDefinition::PhotonFraction => {
            let mut total = 0.0;
            trace_losses(&input, &script, &cavities, |lost, st| {
                total += surviving_weight(st, lost, 3);
            })?;
            Ok(total / 3.0)
        }
    }
}

/// Expected number of photons among the first `photons` that are not lost and
/// sit in output ports.
fn surviving_weight(state: &HyperState, lost: &[bool], photons: usize) -> f64 {
    let l = state.layout();
    state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let out = (0..photons)
                .filter(|&p| !lost[p] && l.digit(i, l.spatial_axis(PhotonId(p))) < OUTPUT_MODES)
                .count();
            out as f64 * a.norm_sqr()
        })
        .sum()
}

/// Row-major 64x64 complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Gram(Vec<Complex64>);

impl Gram {
    fn zeros() -> Self {
        Gram(vec![Complex64::new(0.0, 0.0); DIM * DIM])
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[i * DIM + j]
    }

    /// `v^dagger M v`.
    pub fn quadratic_form(&self, v: &[Complex64; DIM]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, vi) in v.iter().enumerate() {
            let row = &self.0[i * DIM..(i + 1) * DIM];
            let mv: Complex64 = row.iter().zip(v).map(|(m, x)| m * x).sum();
            acc += vi.conj() * mv;
        }
        acc
    }

    pub fn trace(&self) -> Complex64 {
        (0..DIM).map(|i| self.get(i, i)).sum()
    }

    /// `sum_x w_x conj(a_i[x]) b_j[x]` over column sets `a`, `b`.
    fn overlap(a: &[Vec<Complex64>], b: &[Vec<Complex64>], w: Option<&[f64]>) -> Self {
        let mut g = Gram::zeros();
        g.0.par_chunks_mut(DIM).enumerate().for_each(|(i, row)| {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = match w {
                    None => a[i].iter().zip(&b[j]).map(|(x, y)| x.conj() * y).sum(),
                    Some(w) => a[i]
                        .iter()
                        .zip(&b[j])
                        .zip(w)
                        .map(|((x, y), w)| x.conj() * y * w)
                        .sum(),
                };
            }
        });
        g
    }

    fn add_assign(&mut self, o: &Gram) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a += b;
        }
    }
}

/// Canonical layout extended by a 64-mode reference register that labels
/// which photonic basis state entered.
fn reference_layout(script: &CircuitScript) -> Arc<Layout> {
    let mut photons = script.layout.photons().to_vec();
    photons.push(PhotonDecl {
        name: "ref".into(),
        modes: (0..DIM).map(|k| format!("ref{k}")).collect(),
    });
    Arc::new(Layout::new(photons, script.layout.spins().to_vec()).expect("valid layout"))
}

/// `sum_k |k> (x) |ref = k>` with the script's spin preparation.
fn reference_state(script: &CircuitScript) -> Result<HyperState, GateError> {
    let layout = reference_layout(script);
    let mut s = HyperState::zero(Arc::clone(&layout));
    let spins: Vec<[Complex64; 2]> = script.spin_init.iter().map(|s| s.amplitudes()).collect();
    let ns = spins.len();
    for k in 0..DIM {
        let bits = photonic_bits(k);
        for sv in 0..1usize << ns {
            let mut digits = bits.to_vec();
            digits.extend([0, k]);
            let mut amp = Complex64::new(1.0, 0.0);
            for (j, spin) in spins.iter().enumerate() {
                let d = (sv >> (ns - 1 - j)) & 1;
                digits.push(d);
                amp *= spin[d];
            }
            let i = layout.flat(&digits).expect("digits in range");
            s.amplitudes_mut()[i] = amp;
        }
    }
    Ok(s)
}

/// Splits a reference-register state into 64 columns, one per input.
fn columns(state: &HyperState) -> Vec<Vec<Complex64>> {
    let l = state.layout();
    let axis = l.spatial_axis(PhotonId(l.photon_count() - 1));
    let pol = l.pol_axis(PhotonId(l.photon_count() - 1));
    let per_column = state.amplitudes().len() / (2 * DIM);
    let mut cols: Vec<Vec<Complex64>> = (0..DIM).map(|_| Vec::with_capacity(per_column)).collect();
    for (i, a) in state.amplitudes().iter().enumerate() {
        if l.digit(i, pol) == 0 {
            cols[l.digit(i, axis)].push(*a);
        }
    }
    cols
}

/// Row weights of a column: number of photons (of the first three) that are
/// not lost and sit in output ports.
fn column_weights(state: &HyperState, lost: &[bool]) -> Vec<f64> {
    let l = state.layout();
    let refp = PhotonId(l.photon_count() - 1);
    let (pol, axis) = (l.pol_axis(refp), l.spatial_axis(refp));
    (0..state.amplitudes().len())
        .filter(|&i| l.digit(i, pol) == 0 && l.digit(i, axis) == 0)
        .map(|i| {
            (0..3)
                .filter(|&p| !lost[p] && l.digit(i, l.spatial_axis(PhotonId(p))) < OUTPUT_MODES)
                .count() as f64
        })
        .collect()
}

/// Quadratic-form description of the canonical circuit at one reflection pair.
#[derive(Debug, Clone)]
pub struct GateResponse {
    pub pair: ReflectionPair,
    /// `<ideal(e_i) | P real(e_j)>` on photons and spins before readout.
    overlap_pre: Gram,
    /// `<P real(e_i) | P real(e_j)>`.
    heralded: Gram,
    /// One overlap matrix per readout branch, against the ideal photonic output.
    overlap_post: Vec<Gram>,
    /// Expected surviving photon count (divided by three).
    fraction: Gram,
}

impl GateResponse {
    pub fn new(pair: &ReflectionPair) -> Result<Self, MetricsError> {
        let script = canonical_script();
        let reference = reference_state(&script)?;
        let photons = script.layout.photon_count();

        let mut ideal = reference.clone();
        evolve(&mut ideal, &script, &ReflectionPair::IDEAL.into())?;
        let mut real = reference.clone();
        evolve(&mut real, &script, &(*pair).into())?;
        let real = project_outputs(&real, photons)?;

        let ideal_cols = columns(&ideal);
        let real_cols = columns(&real);
        let overlap_pre = Gram::overlap(&ideal_cols, &real_cols, None);
        let heralded = Gram::overlap(&real_cols, &real_cols, None);

        let records = branch_outcomes(&script);
        let scale = Complex64::new((records.len() as f64).sqrt(), 0.0);
        let post_state = |s: &HyperState, outcomes: Vec<_>| -> Result<HyperState, GateError> {
            let record = MeasurementRecord {
                outcomes,
                probability: 0.0,
            };
            let c = s.contract_spins(&record.outcomes)?;
            feed_forward(&c, &script, &record)
        };
        let target = columns(&post_state(&ideal, records[0].clone())?.scaled(scale));
        let overlap_post = records
            .iter()
            .map(|o| {
                let out = post_state(&real, o.clone())?;
                Ok(Gram::overlap(&target, &columns(&out), None))
            })
            .collect::<Result<Vec<_>, GateError>>()?;

        let mut fraction = Gram::zeros();
        trace_losses(&reference, &script, &(*pair).into(), |lost, st| {
            let w: Vec<f64> = column_weights(st, lost).iter().map(|x| x / 3.0).collect();
            let cols = columns(st);
            fraction.add_assign(&Gram::overlap(&cols, &cols, Some(&w)));
        })?;

        Ok(GateResponse {
            pair: *pair,
            overlap_pre,
            heralded,
            overlap_post,
            fraction,
        })
    }

    pub fn at_coupling(x: f64) -> Result<Self, MetricsError> {
        Self::new(&resonant_pair(x)?)
    }

    pub fn fidelity(&self, v: &[Complex64; DIM], mode: FidelityMode) -> Result<f64, MetricsError> {
        let norm = self.heralded.quadratic_form(v).re;
        if norm <= 0.0 {
            return Err(MetricsError::GateFailure);
        }
        let num = match mode {
            FidelityMode::PreMeasurement => self.overlap_pre.quadratic_form(v).norm_sqr(),
            FidelityMode::PostFeedForward => self
                .overlap_post
                .iter()
                .map(|g| g.quadratic_form(v).norm_sqr())
                .sum(),
        };
        Ok(num / norm)
    }

    pub fn efficiency(&self, v: &[Complex64; DIM], definition: EfficiencyDefinition) -> f64 {
        match definition {
            EfficiencyDefinition::AllPhotonsOut => self.heralded.quadratic_form(v).re,
            EfficiencyDefinition::PhotonFraction => self.fraction.quadratic_form(v).re,
        }
    }

    /// Exact average of the efficiency over all real product inputs: the
    /// angle average of `v v^T` is `I / 64`.
    pub fn efficiency_trace_average(&self, definition: EfficiencyDefinition) -> f64 {
        let g = match definition {
            EfficiencyDefinition::AllPhotonsOut => &self.heralded,
            EfficiencyDefinition::PhotonFraction => &self.fraction,
        };
        g.trace().re / DIM as f64
    }

    pub fn average_fidelity(
        &self,
        sampler: &Sampler,
        mode: FidelityMode,
    ) -> Result<Estimate, MetricsError> {
        average(sampler, |a| {
            self.fidelity(&InputSpec::from_angles(a).photonic_amplitudes(), mode)
        })
    }

    pub fn average_efficiency(
        &self,
        sampler: &Sampler,
        definition: EfficiencyDefinition,
    ) -> Result<Estimate, MetricsError> {
        average(sampler, |a| {
            Ok(self.efficiency(&InputSpec::from_angles(a).photonic_amplitudes(), definition))
        })
    }
}

pub fn average_fidelity(
    pair: &ReflectionPair,
    sampler: &Sampler,
    mode: FidelityMode,
) -> Result<Estimate, MetricsError> {
    GateResponse::new(pair)?.average_fidelity(sampler, mode)
}

pub fn average_efficiency_numeric(
    pair: &ReflectionPair,
    sampler: &Sampler,
    definition: EfficiencyDefinition,
) -> Result<Estimate, MetricsError> {
    GateResponse::new(pair)?.average_efficiency(sampler, definition)
}

/// Sum with O(log n) error growth; the split points depend only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

fn grid_angles(points: usize, q: usize) -> AngleTuple {
    let mut a = [0.0; 6];
    let mut rest = q;
    for slot in a.iter_mut().rev() {
        *slot = TAU * (rest % points) as f64 / points as f64;
        rest /= points;
    }
    AngleTuple::from_array(a)
}

fn grid_mean<F>(points: usize, f: &F) -> Result<f64, MetricsError>
where
    F: Fn(&AngleTuple) -> Result<f64, MetricsError> + Sync,
{
    let n = points.pow(6);
    let values = (0..n)
        .into_par_iter()
        .map(|q| f(&grid_angles(points, q)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(pairwise_sum(&values) / n as f64)
}

/// Mean of `f` over the sampler. Monte Carlo angles are drawn in order from a
/// seeded stream before any evaluation, so the result does not depend on the
/// number of worker threads.
pub fn average<F>(sampler: &Sampler, f: F) -> Result<Estimate, MetricsError>
where
    F: Fn(&AngleTuple) -> Result<f64, MetricsError> + Sync,
{
    match *sampler {
        Sampler::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(MetricsError::TooFewSamples(samples));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let angles: Vec<AngleTuple> = (0..samples)
                .map(|_| AngleTuple::from_array(std::array::from_fn(|_| rng.random::<f64>() * TAU)))
                .collect();
            let values = angles.par_iter().map(&f).collect::<Result<Vec<_>, _>>()?;
            let n = samples as f64;
            let mean = pairwise_sum(&values) / n;
            let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
            let var = pairwise_sum(&dev) / (n - 1.0);
            Ok(Estimate {
                mean,
                std_error: (var / n).sqrt(),
            })
        }
        Sampler::Quadrature { points } => {
            if points == 0 {
                return Err(MetricsError::NoQuadraturePoints);
            }
            let mean = grid_mean(points, &f)?;
            let coarse = grid_mean(points.saturating_sub(1).max(1), &f)?;
            Ok(Estimate {
                mean,
                std_error: (mean - coarse).abs(),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub r: f64,
    pub fidelity: Estimate,
    pub efficiency: Estimate,
    pub efficiency_closed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub sampler: Sampler,
    pub fidelity_mode: FidelityMode,
    pub efficiency_definition: EfficiencyDefinition,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Whether `F` is nondecreasing along the grid within `k` combined
    /// standard errors.
    pub fn fidelity_monotone(&self, k: f64) -> bool {
        monotone(self.rows.iter().map(|r| r.fidelity), k)
    }

    pub fn efficiency_monotone(&self, k: f64) -> bool {
        monotone(self.rows.iter().map(|r| r.efficiency), k)
    }
}

fn monotone(mut it: impl Iterator<Item = Estimate>, k: f64) -> bool {
    let Some(mut prev) = it.next() else {
        return true;
    };
    for e in it {
        let tol = k * (prev.std_error.powi(2) + e.std_error.powi(2)).sqrt();
        if e.mean < prev.mean - tol {
            return false;
        }
        prev = e;
    }
    true
}

/// Evenly spaced grid including both ends.
pub fn linear_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>, MetricsError> {
    if points == 0 {
        return Err(MetricsError::EmptyGrid);
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    Ok((0..points)
        .map(|k| min + (max - min) * k as f64 / (points - 1) as f64)
        .collect())
}

pub fn sweep(
    x_grid: &[f64],
    sampler: &Sampler,
    fidelity_mode: FidelityMode,
    efficiency_definition: EfficiencyDefinition,
) -> Result<SweepTable, MetricsError> {
    if x_grid.is_empty() {
        return Err(MetricsError::EmptyGrid);
    }
    if let Some(x) = x_grid.iter().find(|x| !(x.is_finite() && **x >= 0.5)) {
        return Err(MetricsError::InvalidGrid(format!(
            "coupling ratio {x} below 0.5"
        )));
    }
    if x_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(MetricsError::InvalidGrid(
            "grid must be strictly increasing".into(),
        ));
    }
    let mut rows = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let pair = resonant_pair(x)?;
        let response = GateResponse::new(&pair)?;
        rows.push(SweepRow {
            x,
            r: pair.r.re,
            fidelity: response.average_fidelity(sampler, fidelity_mode)?,
            efficiency: response.average_efficiency(sampler, efficiency_definition)?,
            efficiency_closed: efficiency_closed_form(pair.r.norm().min(1.0))?,
        });
    }
    Ok(SweepTable {
        sampler: *sampler,
        fidelity_mode,
        efficiency_definition,
        rows,
    })
}
