//! Input-output reflection of a single-sided cavity holding one NV centre.
//!
//! Everything here is evaluated in the weak-excitation, steady-state limit:
//! a photon of angular frequency `omega_p` reflects off the cavity with a
//! complex amplitude that depends on whether its circular polarization drives
//! the NV transition ("hot" cavity, coupling `g`) or not ("cold" cavity,
//! `g = 0`).

use num_complex::Complex64;
use thiserror::Error;

use crate::hilbert::{Polarization, Spin};

/// Slack allowed on `|r| <= 1` before a pair is rejected as active.
pub const PASSIVITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CavityError {
    #[error("cavity damping rate kappa must be positive, got {0}")]
    NonPositiveKappa(f64),
    #[error("NV decay rate gamma must be positive, got {0}")]
    NonPositiveGamma(f64),
    #[error("coupling rate g must be non-negative, got {0}")]
    NegativeCoupling(f64),
    #[error("coupling ratio g/sqrt(kappa*gamma) must be non-negative and finite, got {0}")]
    InvalidCouplingRatio(f64),
    #[error("non-finite cavity parameter {0}")]
    NonFinite(&'static str),
    #[error("reflection amplitude {name} has modulus {modulus} > 1")]
    Active { name: &'static str, modulus: f64 },
}

/// Physical parameters of one NV-cavity unit. All frequencies share one unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    pub g: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub omega_p: f64,
    pub omega_c: f64,
    pub omega_0: f64,
}

impl CavityParams {
    pub fn new(
        g: f64,
        kappa: f64,
        gamma: f64,
        omega_p: f64,
        omega_c: f64,
        omega_0: f64,
    ) -> Result<Self, CavityError> {
        let p = CavityParams {
            g,
            kappa,
            gamma,
            omega_p,
            omega_c,
            omega_0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Probe, cavity and transition all on resonance at frequency zero.
    pub fn resonant(g: f64, kappa: f64, gamma: f64) -> Result<Self, CavityError> {
        Self::new(g, kappa, gamma, 0.0, 0.0, 0.0)
    }

    /// Resonant unit with `kappa = gamma = 1`, so that `g` equals the
    /// dimensionless coupling `g / sqrt(kappa * gamma)`.
    pub fn from_coupling_ratio(ratio: f64) -> Result<Self, CavityError> {
        if !(ratio.is_finite() && ratio >= 0.0) {
            return Err(CavityError::InvalidCouplingRatio(ratio));
        }
        Self::resonant(ratio, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<(), CavityError> {
        for (name, v) in [
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("omega_p", self.omega_p),
            ("omega_c", self.omega_c),
            ("omega_0", self.omega_0),
        ] {
            if !v.is_finite() {
                return Err(CavityError::NonFinite(name));
            }
        }
        if self.kappa <= 0.0 {
            return Err(CavityError::NonPositiveKappa(self.kappa));
        }
        if self.gamma <= 0.0 {
            return Err(CavityError::NonPositiveGamma(self.gamma));
        }
        if self.g < 0.0 {
            return Err(CavityError::NegativeCoupling(self.g));
        }
        Ok(())
    }

    pub fn is_resonant(&self) -> bool {
        self.omega_p == self.omega_c && self.omega_c == self.omega_0
    }

    pub fn coupling_ratio(&self) -> f64 {
        self.g / (self.kappa * self.gamma).sqrt()
    }

    /// Same unit with the emitter decoupled.
    pub fn cold(&self) -> Self {
        CavityParams { g: 0.0, ..*self }
    }
}

/// Steady-state reflection coefficient `a_out / a_in` of the unit.
pub fn reflection_coefficient(p: &CavityParams) -> Result<Complex64, CavityError> {
    p.validate()?;
    let i = Complex64::i();
    let cavity = i * (p.omega_c - p.omega_p);
    let emitter = i * (p.omega_0 - p.omega_p) + p.gamma / 2.0;
    let g2 = p.g * p.g;
    let num = (cavity - p.kappa / 2.0) * emitter + g2;
    let den = (cavity + p.kappa / 2.0) * emitter + g2;
    Ok(num / den)
}

/// Reflection amplitudes for the coupled (`r`) and uncoupled (`r0`) case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub r: Complex64,
    pub r0: Complex64,
}

impl ReflectionPair {
    pub const IDEAL: ReflectionPair = ReflectionPair {
        r: Complex64::new(1.0, 0.0),
        r0: Complex64::new(-1.0, 0.0),
    };

    pub fn new(r: Complex64, r0: Complex64) -> Result<Self, CavityError> {
        for (name, z) in [("r", r), ("r0", r0)] {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(CavityError::NonFinite(name));
            }
            if z.norm() > 1.0 + PASSIVITY_TOLERANCE {
                return Err(CavityError::Active {
                    name,
                    modulus: z.norm(),
                });
            }
        }
        Ok(ReflectionPair { r, r0 })
    }

    pub fn real(r: f64, r0: f64) -> Result<Self, CavityError> {
        Self::new(Complex64::new(r, 0.0), Complex64::new(r0, 0.0))
    }

    /// Hot and cold reflection of the same unit.
    pub fn from_params(p: &CavityParams) -> Result<Self, CavityError> {
        let r = reflection_coefficient(p)?;
        let r0 = reflection_coefficient(&p.cold())?;
        Self::new(r, r0)
    }

    pub fn is_ideal(&self) -> bool {
        *self == Self::IDEAL
    }

    /// Both reflections are lossless.
    pub fn is_lossless(&self, tol: f64) -> bool {
        (self.r.norm() - 1.0).abs() <= tol && (self.r0.norm() - 1.0).abs() <= tol
    }

    pub fn phases(&self) -> (f64, f64) {
        (self.r.arg(), self.r0.arg())
    }
}

/// Resonant pair as a function of `x = g / sqrt(kappa * gamma)`.
pub fn resonant_pair(coupling_ratio: f64) -> Result<ReflectionPair, CavityError> {
    if !(coupling_ratio.is_finite() && coupling_ratio >= 0.0) {
        return Err(CavityError::InvalidCouplingRatio(coupling_ratio));
    }
    let x2 = 4.0 * coupling_ratio * coupling_ratio;
    ReflectionPair::real((x2 - 1.0) / (x2 + 1.0), -1.0)
}

/// Spin-conditioned reflection, diagonal on `R+, R-, L+, L-`.
///
/// An R photon drives the `|+>` transition and an L photon the `|->`
/// transition; those two entries get `r`, the other two `r0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinPhotonMap {
    pub diagonal: [Complex64; 4],
}

impl SpinPhotonMap {
    pub fn entry(&self, pol: Polarization, spin: Spin) -> Complex64 {
        self.diagonal[2 * pol.index() + spin.index()]
    }

    pub fn operator_norm(&self) -> f64 {
        self.diagonal.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.diagonal.iter().all(|z| (z.norm() - 1.0).abs() <= tol)
    }
}

pub fn spin_photon_map(pair: &ReflectionPair) -> SpinPhotonMap {
    SpinPhotonMap {
        diagonal: [pair.r, pair.r0, pair.r0, pair.r],
    }
}
