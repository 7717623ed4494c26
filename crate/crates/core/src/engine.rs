//! Two-photon amplitudes before and after a symmetric 50:50 beam splitter.
//!
//! Before the splitter the pair amplitude is the pump field at the detection
//! plane evaluated at the sum coordinate, `Φ(ρ₁, ρ₂) = W((ρ₁ + ρ₂)/2, Z)`,
//! times the polarization state. The splitter transmits with `t = 1/√2` and
//! reflects with `r = i/√2`; reflection mirrors the transverse coordinate,
//! `σ(x, y) = (x, −y)`.
//!
//! For a pair of detectors the amplitude has two contributions: the
//! *direct* one, where photon 1 of the source reaches detector 1, and the
//! *exchange* one, where the photons trade places (and the polarization
//! indices are swapped accordingly).

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::optics::FieldGrid;
use crate::polarization::{Jones, PolVector, TwoPhotonPolState};

pub const DEFAULT_DOWNCONVERTED_WAVELENGTH: f64 = 702e-9;
/// Interference filter FWHM.
pub const DEFAULT_FILTER_BANDWIDTH: f64 = 1e-9;

/// Transmission amplitude of the symmetric splitter.
pub const BS_T: Complex64 = Complex64::new(FRAC_1_SQRT_2, 0.0);
/// Reflection amplitude of the symmetric splitter.
pub const BS_R: Complex64 = Complex64::new(0.0, FRAC_1_SQRT_2);

/// A transverse position on the detection plane (m).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Image under beam-splitter reflection, `(x, −y)`.
    #[inline]
    pub fn mirrored(self) -> Self {
        Point {
            x: self.x,
            y: -self.y,
        }
    }

    #[inline]
    fn mirrored_if(self, flag: bool) -> Self {
        if flag {
            self.mirrored()
        } else {
            self
        }
    }
}

/// Gaussian delay envelope whose FWHM equals the filter coherence length
/// `ℓ_c = λ²/Δλ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayEnvelope {
    coherence_length: f64,
}

impl DelayEnvelope {
    pub fn from_filter(wavelength: f64, bandwidth: f64) -> Result<Self> {
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::param("downconverted_wavelength", "must be positive"));
        }
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::param("filter_bandwidth", "must be positive"));
        }
        Ok(DelayEnvelope {
            coherence_length: wavelength * wavelength / bandwidth,
        })
    }

    pub fn coherence_length(&self) -> f64 {
        self.coherence_length
    }

    /// `g(δ) = exp(−4 ln2 · δ²/ℓ_c²)`.
    pub fn eval(&self, delay: f64) -> f64 {
        let u = delay / self.coherence_length;
        (-4.0 * std::f64::consts::LN_2 * u * u).exp()
    }
}

/// Photon pair prepared by the source, described at the detection plane.
#[derive(Debug, Clone)]
pub struct BiphotonState {
    pol: TwoPhotonPolState,
    pump: Arc<FieldGrid>,
    delay: f64,
    overlap: f64,
    downconverted_wavelength: f64,
    envelope: DelayEnvelope,
}

/// Builds the pair state with the default 702 nm wavelength and 1 nm filter.
pub fn make_biphoton(
    pump: Arc<FieldGrid>,
    pol: TwoPhotonPolState,
    delay: f64,
    overlap: f64,
) -> Result<BiphotonState> {
    BiphotonState::new(
        pump,
        pol,
        delay,
        overlap,
        DEFAULT_DOWNCONVERTED_WAVELENGTH,
        DEFAULT_FILTER_BANDWIDTH,
    )
}

fn check_overlap(overlap: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::param(
            "overlap",
            format!("must lie in [0, 1], got {overlap}"),
        ));
    }
    Ok(())
}

impl BiphotonState {
    pub fn new(
        pump: Arc<FieldGrid>,
        pol: TwoPhotonPolState,
        delay: f64,
        overlap: f64,
        downconverted_wavelength: f64,
        filter_bandwidth: f64,
    ) -> Result<Self> {
        check_overlap(overlap)?;
        if !delay.is_finite() {
            return Err(Error::param("delay", "must be finite"));
        }
        let envelope = DelayEnvelope::from_filter(downconverted_wavelength, filter_bandwidth)?;
        Ok(BiphotonState {
            pol,
            pump,
            delay,
            overlap,
            downconverted_wavelength,
            envelope,
        })
    }

    pub fn pol(&self) -> &TwoPhotonPolState {
        &self.pol
    }

    pub fn pump(&self) -> &FieldGrid {
        &self.pump
    }

    pub fn pump_arc(&self) -> &Arc<FieldGrid> {
        &self.pump
    }

    pub fn delay(&self) -> f64 {
        self.delay
    }

    pub fn overlap(&self) -> f64 {
        self.overlap
    }

    pub fn downconverted_wavelength(&self) -> f64 {
        self.downconverted_wavelength
    }

    pub fn envelope(&self) -> &DelayEnvelope {
        &self.envelope
    }

    pub fn with_delay(mut self, delay: f64) -> Self {
        self.delay = delay;
        self
    }

    pub fn with_overlap(mut self, overlap: f64) -> Result<Self> {
        check_overlap(overlap)?;
        self.overlap = overlap;
        Ok(self)
    }

    pub fn with_pol(mut self, pol: TwoPhotonPolState) -> Self {
        self.pol = pol;
        self
    }

    /// `Φ(ρ₁, ρ₂) = W((x₁+x₂)/2, (y₁+y₂)/2, Z)`; zero when the sum
    /// coordinate leaves the sampled window.
    #[inline]
    pub fn spatial_amplitude(&self, r1: Point, r2: Point) -> Complex64 {
        self.pump
            .interpolate(0.5 * (r1.x + r2.x), 0.5 * (r1.y + r2.y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PortPair {
    /// Both detectors behind output port 1.
    Same1,
    /// Both detectors behind output port 2.
    Same2,
    /// Detector 1 behind port 1, detector 2 behind port 2.
    Opposite,
}

impl PortPair {
    pub const ALL: [PortPair; 3] = [PortPair::Same1, PortPair::Same2, PortPair::Opposite];

    pub fn is_same_port(self) -> bool {
        self != PortPair::Opposite
    }
}

/// One path-product contribution: `coefficient · Φ(σ?ρ₁, σ?ρ₂) ⊗ pol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coefficient: Complex64,
    pub mirror_first: bool,
    pub mirror_second: bool,
    pub pol: PolVector,
}

impl Term {
    /// The scalar spatial factor, without the polarization vector.
    #[inline]
    pub fn kernel(&self, state: &BiphotonState, r1: Point, r2: Point) -> Complex64 {
        self.coefficient
            * state.spatial_amplitude(
                r1.mirrored_if(self.mirror_first),
                r2.mirrored_if(self.mirror_second),
            )
    }

    #[inline]
    pub fn eval(&self, state: &BiphotonState, r1: Point, r2: Point) -> PolVector {
        self.pol * self.kernel(state, r1, r2)
    }
}

/// Direct and exchange amplitudes for one output-port combination.
#[derive(Debug, Clone, Copy)]
pub struct PortPairAmplitude<'a> {
    pub pair: PortPair,
    pub direct: Term,
    pub exchange: Term,
    state: &'a BiphotonState,
}

impl<'a> PortPairAmplitude<'a> {
    pub fn state(&self) -> &'a BiphotonState {
        self.state
    }

    pub fn direct_at(&self, r1: Point, r2: Point) -> PolVector {
        self.direct.eval(self.state, r1, r2)
    }

    pub fn exchange_at(&self, r1: Point, r2: Point) -> PolVector {
        self.exchange.eval(self.state, r1, r2)
    }

    /// Fully indistinguishable amplitude, direct + exchange.
    pub fn total_at(&self, r1: Point, r2: Point) -> PolVector {
        self.direct_at(r1, r2) + self.exchange_at(r1, r2)
    }
}

/// Amplitudes for a detector pair on the given ports.
pub fn port_pair_amplitude(state: &BiphotonState, pair: PortPair) -> PortPairAmplitude<'_> {
    let pol = *state.pol.vector();
    let swapped = pol.swapped();
    let term = |coefficient, mirror_first, mirror_second, pol| Term {
        coefficient,
        mirror_first,
        mirror_second,
        pol,
    };
    let (direct, exchange) = match pair {
        // Port 1 receives the transmitted photon 1 and the reflected photon 2.
        PortPair::Same1 => (
            term(BS_T * BS_R, false, true, pol),
            term(BS_R * BS_T, true, false, swapped),
        ),
        PortPair::Same2 => (
            term(BS_R * BS_T, true, false, pol),
            term(BS_T * BS_R, false, true, swapped),
        ),
        PortPair::Opposite => (
            term(BS_T * BS_T, false, false, pol),
            term(BS_R * BS_R, true, true, swapped),
        ),
    };
    PortPairAmplitude {
        pair,
        direct,
        exchange,
        state,
    }
}

/// All three output-port combinations, in [`PortPair::ALL`] order.
pub fn beam_splitter_transform(state: &BiphotonState) -> Vec<PortPairAmplitude<'_>> {
    PortPair::ALL
        .iter()
        .map(|&pair| port_pair_amplitude(state, pair))
        .collect()
}

/// `(|D|², |E|², ⟨D|E⟩)` after optional analyzers on each detector.
/// A missing analyzer sums that photon over both polarization outcomes.
pub fn analyzed_products(
    d: &PolVector,
    e: &PolVector,
    a1: Option<&Jones>,
    a2: Option<&Jones>,
) -> (f64, f64, Complex64) {
    fn pair_products(d: &[Complex64], e: &[Complex64]) -> (f64, f64, Complex64) {
        let dd = d.iter().map(|v| v.norm_sqr()).sum();
        let ee = e.iter().map(|v| v.norm_sqr()).sum();
        let de = d.iter().zip(e).map(|(a, b)| a.conj() * b).sum();
        (dd, ee, de)
    }
    match (a1, a2) {
        (Some(a), Some(b)) => pair_products(&[d.project(a, b)], &[e.project(a, b)]),
        (Some(a), None) => pair_products(&d.project_first(a), &e.project_first(a)),
        (None, Some(b)) => pair_products(&d.project_second(b), &e.project_second(b)),
        (None, None) => pair_products(&d.0, &e.0),
    }
}

/// Coincidence rate density at `(r₁, r₂)`:
/// `|D|² + |E|² + 2·μ·g(δ)·Re⟨D|E⟩`.
///
/// `μ·g ≤ 1` keeps the result non-negative (Cauchy-Schwarz); it is clamped
/// at zero against rounding.
pub fn coincidence_density(
    amp: &PortPairAmplitude<'_>,
    r1: Point,
    r2: Point,
    analyzers: (Option<&Jones>, Option<&Jones>),
    delay: f64,
    overlap: f64,
) -> f64 {
    let d = amp.direct_at(r1, r2);
    let e = amp.exchange_at(r1, r2);
    let (dd, ee, de) = analyzed_products(&d, &e, analyzers.0, analyzers.1);
    let g = amp.state.envelope.eval(delay);
    (dd + ee + 2.0 * overlap * g * de.re).max(0.0)
}
