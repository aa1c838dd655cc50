use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{HyperState, Layout, StateError};

const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Initial state tag of one NV spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinInit {
    Plus,
    Minus,
    /// `(|+> + |->)/sqrt2`
    PlusMinus,
    /// `(|+> - |->)/sqrt2`
    MinusPlus,
}

impl SpinInit {
    pub fn amplitudes(self) -> [Complex64; 2] {
        let h = FRAC_1_SQRT_2;
        let c = |a: f64, b: f64| [Complex64::new(a, 0.0), Complex64::new(b, 0.0)];
        match self {
            SpinInit::Plus => c(1.0, 0.0),
            SpinInit::Minus => c(0.0, 1.0),
            SpinInit::PlusMinus => c(h, h),
            SpinInit::MinusPlus => c(h, -h),
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            SpinInit::Plus => "plus",
            SpinInit::Minus => "minus",
            SpinInit::PlusMinus => "plusminus",
            SpinInit::MinusPlus => "minusplus",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Some(match s {
            "plus" => SpinInit::Plus,
            "minus" => SpinInit::Minus,
            "plusminus" => SpinInit::PlusMinus,
            "minusplus" => SpinInit::MinusPlus,
            _ => return None,
        })
    }
}

/// NV1 and NV3 start in `|+'>`, NV2 and NV4 in `|-'>`.
pub const CANONICAL_SPIN_INIT: [SpinInit; 4] = [
    SpinInit::PlusMinus,
    SpinInit::MinusPlus,
    SpinInit::PlusMinus,
    SpinInit::MinusPlus,
];

/// Six real angles parametrizing a product input through `(cos, sin)` pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleTuple {
    /// polarization of photon a
    pub alpha: f64,
    /// polarization of photon b
    pub beta: f64,
    /// polarization of photon c
    pub delta: f64,
    /// spatial mode of photon a
    pub sigma: f64,
    /// spatial mode of photon b
    pub zeta: f64,
    /// spatial mode of photon c
    pub xi: f64,
}

impl AngleTuple {
    pub fn uniform(theta: f64) -> Self {
        AngleTuple {
            alpha: theta,
            beta: theta,
            delta: theta,
            sigma: theta,
            zeta: theta,
            xi: theta,
        }
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        AngleTuple {
            alpha: a[0],
            beta: a[1],
            delta: a[2],
            sigma: a[3],
            zeta: a[4],
            xi: a[5],
        }
    }

    pub fn to_array(self) -> [f64; 6] {
        [
            self.alpha, self.beta, self.delta, self.sigma, self.zeta, self.xi,
        ]
    }
}

/// Coefficients of the six photonic qubits of a product input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputSpec {
    pub alpha: [Complex64; 2],
    pub beta: [Complex64; 2],
    pub delta: [Complex64; 2],
    pub sigma: [Complex64; 2],
    pub zeta: [Complex64; 2],
    pub xi: [Complex64; 2],
}

fn trig(theta: f64) -> [Complex64; 2] {
    [
        Complex64::new(theta.cos(), 0.0),
        Complex64::new(theta.sin(), 0.0),
    ]
}

impl InputSpec {
    pub fn new(
        alpha: [Complex64; 2],
        beta: [Complex64; 2],
        delta: [Complex64; 2],
        sigma: [Complex64; 2],
        zeta: [Complex64; 2],
        xi: [Complex64; 2],
    ) -> Result<Self, StateError> {
        let spec = InputSpec {
            alpha,
            beta,
            delta,
            sigma,
            zeta,
            xi,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_angles(a: &AngleTuple) -> Self {
        InputSpec {
            alpha: trig(a.alpha),
            beta: trig(a.beta),
            delta: trig(a.delta),
            sigma: trig(a.sigma),
            zeta: trig(a.zeta),
            xi: trig(a.xi),
        }
    }

    /// Computational basis input; each argument selects the first (0) or
    /// second (1) basis state of pol_a, spat_a, pol_b, spat_b, pol_c, spat_c.
    pub fn basis(bits: [usize; 6]) -> Self {
        let e = |b: usize| {
            if b == 0 {
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
            } else {
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
            }
        };
        InputSpec {
            alpha: e(bits[0]),
            sigma: e(bits[1]),
            beta: e(bits[2]),
            zeta: e(bits[3]),
            delta: e(bits[4]),
            xi: e(bits[5]),
        }
    }

    pub fn validate(&self) -> Result<(), StateError> {
        for (name, pair) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("delta", self.delta),
            ("sigma", self.sigma),
            ("zeta", self.zeta),
            ("xi", self.xi),
        ] {
            let n = pair[0].norm_sqr() + pair[1].norm_sqr();
            if (n - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(StateError::NotNormalized(name));
            }
        }
        Ok(())
    }

    /// Same state times a global phase (carried on the alpha pair).
    pub fn with_global_phase(mut self, phase: f64) -> Self {
        let z = Complex64::from_polar(1.0, phase);
        self.alpha = [self.alpha[0] * z, self.alpha[1] * z];
        self
    }

    /// 64 photonic amplitudes in (pol_a, spat_a, pol_b, spat_b, pol_c, spat_c)
    /// bit order, most significant first.
    pub fn photonic_amplitudes(&self) -> [Complex64; 64] {
        let factors = [
            self.alpha, self.sigma, self.beta, self.zeta, self.delta, self.xi,
        ];
        let mut out = [Complex64::new(0.0, 0.0); 64];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut z = Complex64::new(1.0, 0.0);
            for (k, f) in factors.iter().enumerate() {
                z *= f[(i >> (5 - k)) & 1];
            }
            *slot = z;
        }
        out
    }
}

/// Product state of three photons (first two spatial modes used) and the
/// spin register, on any layout with three photons.
pub(crate) fn product_on(
    layout: std::sync::Arc<Layout>,
    spec: &InputSpec,
    spins: &[SpinInit],
) -> Result<HyperState, StateError> {
    spec.validate()?;
    if layout.photon_count() != 3 {
        return Err(StateError::Layout(format!(
            "product input needs three photons, layout has {}",
            layout.photon_count()
        )));
    }
    if spins.len() != layout.spin_count() {
        return Err(StateError::Layout(format!(
            "{} spin initializers for {} spins",
            spins.len(),
            layout.spin_count()
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    let spatial = |pair: [Complex64; 2], count: usize| -> Result<Vec<Complex64>, StateError> {
        if count < 2 {
            return Err(StateError::Layout(
                "each photon needs at least two spatial modes".into(),
            ));
        }
        let mut v = vec![zero; count];
        v[0] = pair[0];
        v[1] = pair[1];
        Ok(v)
    };
    let mut factors: Vec<Vec<Complex64>> = vec![
        spec.alpha.to_vec(),
        spatial(spec.sigma, layout.photons()[0].modes.len())?,
        spec.beta.to_vec(),
        spatial(spec.zeta, layout.photons()[1].modes.len())?,
        spec.delta.to_vec(),
        spatial(spec.xi, layout.photons()[2].modes.len())?,
    ];
    factors.extend(spins.iter().map(|s| s.amplitudes().to_vec()));
    HyperState::product(layout, &factors)
}
