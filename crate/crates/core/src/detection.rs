//! Finite detectors, analyzers and scan drivers.
//!
//! Coincidence rates are integrals of [`coincidence_density`] over both
//! apertures. The spatial kernels do not depend on the delay, so a delay
//! scan integrates once and re-weights the interference term per step.
//!
//! Rates reported in a [`ScanResult`] are expected counts: model rate times
//! the exposure scale. Their Poisson spread is `√counts`.
//!
//! [`coincidence_density`]: crate::engine::coincidence_density

use std::io::Write;

use log::warn;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::engine::{analyzed_products, port_pair_amplitude, BiphotonState, Point, PortPair};
use crate::error::{Error, Result};
use crate::polarization::{linear, Jones, TwoPhotonPolState};

/// Circular aperture of the HOM detectors.
pub const DEFAULT_CIRCLE_DIAMETER: f64 = 3e-3;
/// Narrow slit dimension, along the scan direction `y`.
pub const DEFAULT_SLIT_WIDTH: f64 = 0.3e-3;
/// Long slit dimension, along `x`.
pub const DEFAULT_SLIT_HEIGHT: f64 = 3e-3;
pub const DEFAULT_QUADRATURE_STEP: f64 = 0.1e-3;
pub const DEFAULT_EXPOSURE: f64 = 1e9;

/// Significance threshold, in standard deviations, for dip/peak/null calls.
pub const SIGNIFICANCE: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Port {
    Port1,
    Port2,
    /// Arm A of the source with the beam splitter removed.
    SourceArmA,
    SourceArmB,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Aperture {
    Circle {
        diameter: f64,
    },
    /// `width` runs along `y`, `height` along `x`.
    Slit {
        width: f64,
        height: f64,
    },
}

impl Aperture {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Aperture::Circle { diameter } => diameter > 0.0 && diameter.is_finite(),
            Aperture::Slit { width, height } => {
                width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::param(
                "aperture",
                format!("dimensions must be positive: {self:?}"),
            ))
        }
    }

    /// Half extents `(x, y)` of the bounding box.
    fn half_extents(&self) -> (f64, f64) {
        match *self {
            Aperture::Circle { diameter } => (0.5 * diameter, 0.5 * diameter),
            Aperture::Slit { width, height } => (0.5 * height, 0.5 * width),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PbsArm {
    Transmitted,
    Reflected,
}

/// Half-wave plate followed by a polarizing beam splitter.
///
/// With the plate at `θ` the transmitted arm detects linear polarization at
/// `2θ` and the reflected arm the orthogonal one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Analyzer {
    pub hwp_angle: f64,
    pub arm: PbsArm,
}

impl Analyzer {
    pub fn new(hwp_angle: f64, arm: PbsArm) -> Result<Self> {
        if !(0.0..std::f64::consts::PI).contains(&hwp_angle) {
            return Err(Error::param(
                "hwp_angle",
                format!("must lie in [0, π), got {hwp_angle}"),
            ));
        }
        Ok(Analyzer { hwp_angle, arm })
    }

    /// H/V analysis: plate at 0.
    pub fn hv(arm: PbsArm) -> Self {
        Analyzer {
            hwp_angle: 0.0,
            arm,
        }
    }

    /// +/− analysis: plate at 22.5°.
    pub fn diagonal(arm: PbsArm) -> Self {
        Analyzer {
            hwp_angle: std::f64::consts::FRAC_PI_8,
            arm,
        }
    }

    pub fn jones(&self) -> Jones {
        let angle = 2.0 * self.hwp_angle;
        match self.arm {
            PbsArm::Transmitted => linear(angle),
            PbsArm::Reflected => linear(angle + std::f64::consts::FRAC_PI_2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSpec {
    pub port: Port,
    pub center: Point,
    pub aperture: Aperture,
    pub analyzer: Option<Analyzer>,
}

impl DetectorSpec {
    pub fn new(port: Port, center: Point, aperture: Aperture) -> Self {
        DetectorSpec {
            port,
            center,
            aperture,
            analyzer: None,
        }
    }

    pub fn with_analyzer(mut self, analyzer: Analyzer) -> Self {
        self.analyzer = Some(analyzer);
        self
    }

    pub fn with_center(mut self, center: Point) -> Self {
        self.center = center;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.aperture.validate()?;
        if let Some(a) = self.analyzer {
            Analyzer::new(a.hwp_angle, a.arm)?;
        }
        Ok(())
    }

    fn overlaps(&self, other: &DetectorSpec) -> bool {
        let (ax, ay) = self.aperture.half_extents();
        let (bx, by) = other.aperture.half_extents();
        (self.center.x - other.center.x).abs() < ax + bx
            && (self.center.y - other.center.y).abs() < ay + by
    }
}

/// Midpoint quadrature over apertures.
///
/// Circles use a polar midpoint rule (exact area), slits a Cartesian one.
/// Each axis gets `max(min_samples, ⌈extent/step⌉)` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub step: f64,
    pub min_samples: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            step: DEFAULT_QUADRATURE_STEP,
            min_samples: 4,
        }
    }
}

impl Quadrature {
    pub fn with_step(step: f64) -> Self {
        Quadrature {
            step,
            ..Default::default()
        }
    }

    pub fn halved(&self) -> Self {
        Quadrature {
            step: 0.5 * self.step,
            min_samples: 2 * self.min_samples,
        }
    }

    fn cells(&self, extent: f64) -> usize {
        ((extent / self.step).ceil() as usize).max(self.min_samples)
    }

    /// Nodes and weights covering `aperture` centered at `center`.
    pub fn nodes(&self, aperture: &Aperture, center: Point) -> Vec<(Point, f64)> {
        match *aperture {
            Aperture::Circle { diameter } => {
                let radius = 0.5 * diameter;
                let nr = self.cells(radius);
                let nt = self
                    .cells(std::f64::consts::TAU * radius)
                    .max(4 * self.min_samples);
                let dr = radius / nr as f64;
                let dt = std::f64::consts::TAU / nt as f64;
                let mut out = Vec::with_capacity(nr * nt);
                for k in 0..nr {
                    let r = (k as f64 + 0.5) * dr;
                    for l in 0..nt {
                        let (s, c) = ((l as f64 + 0.5) * dt).sin_cos();
                        out.push((Point::new(center.x + r * c, center.y + r * s), r * dr * dt));
                    }
                }
                out
            }
            Aperture::Slit { width, height } => {
                let nx = self.cells(height);
                let ny = self.cells(width);
                let (hx, hy) = (height / nx as f64, width / ny as f64);
                let mut out = Vec::with_capacity(nx * ny);
                for i in 0..nx {
                    let x = center.x - 0.5 * height + (i as f64 + 0.5) * hx;
                    for j in 0..ny {
                        let y = center.y - 0.5 * width + (j as f64 + 0.5) * hy;
                        out.push((Point::new(x, y), hx * hy));
                    }
                }
                out
            }
        }
    }
}

/// Aperture-integrated pieces of the coincidence rate.
///
/// The rate at overlap `μ` and envelope value `g` is
/// `direct + exchange + 2·μ·g·Re(cross)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateIntegrals {
    pub direct: f64,
    pub exchange: f64,
    pub cross: Complex64,
}

impl RateIntegrals {
    pub fn rate(&self, overlap: f64, envelope: f64) -> f64 {
        (self.direct + self.exchange + 2.0 * overlap * envelope * self.cross.re).max(0.0)
    }

    /// Rate with all interference suppressed.
    pub fn baseline(&self) -> f64 {
        self.direct + self.exchange
    }
}

fn port_pair_for(d1: &DetectorSpec, d2: &DetectorSpec) -> Result<(PortPair, bool)> {
    match (d1.port, d2.port) {
        (Port::Port1, Port::Port1) => Ok((PortPair::Same1, false)),
        (Port::Port2, Port::Port2) => Ok((PortPair::Same2, false)),
        (Port::Port1, Port::Port2) => Ok((PortPair::Opposite, false)),
        (Port::Port2, Port::Port1) => Ok((PortPair::Opposite, true)),
        _ => Err(Error::param(
            "port",
            "source-arm detectors see no beam splitter; use polarization_correlation_scan",
        )),
    }
}

/// Integrates direct, exchange and cross contributions over both apertures.
///
/// The polarization factors are constant across the apertures, so only the
/// scalar kernels are integrated. Outer nodes are processed in parallel and
/// the partial sums are reduced in node order, which keeps the result
/// bit-for-bit reproducible.
pub fn rate_integrals(
    state: &BiphotonState,
    d1: &DetectorSpec,
    d2: &DetectorSpec,
    quadrature: &Quadrature,
) -> Result<RateIntegrals> {
    d1.validate()?;
    d2.validate()?;
    let (pair, swap) = port_pair_for(d1, d2)?;
    let (d1, d2) = if swap { (d2, d1) } else { (d1, d2) };

    if pair.is_same_port() && d1.analyzer.is_none() && d2.analyzer.is_none() && d1.overlaps(d2) {
        warn!(
            "detectors on the same port overlap without analyzers; \
             double clicks in one detector are not resolved"
        );
    }

    let amp = port_pair_amplitude(state, pair);
    let a1 = d1.analyzer.map(|a| a.jones());
    let a2 = d2.analyzer.map(|a| a.jones());
    let (pd, pe, pde) =
        analyzed_products(&amp.direct.pol, &amp.exchange.pol, a1.as_ref(), a2.as_ref());

    let nodes1 = quadrature.nodes(&d1.aperture, d1.center);
    let nodes2 = quadrature.nodes(&d2.aperture, d2.center);
    let partials: Vec<(f64, f64, Complex64)> = nodes1
        .par_iter()
        .map(|&(r1, w1)| {
            let mut sd = 0.0;
            let mut se = 0.0;
            let mut sde = Complex64::new(0.0, 0.0);
            for &(r2, w2) in &nodes2 {
                let kd = amp.direct.kernel(state, r1, r2);
                let ke = amp.exchange.kernel(state, r1, r2);
                sd += w2 * kd.norm_sqr();
                se += w2 * ke.norm_sqr();
                sde += kd.conj() * ke * w2;
            }
            (w1 * sd, w1 * se, sde * w1)
        })
        .collect();
    let (mut sd, mut se, mut sde) = (0.0, 0.0, Complex64::new(0.0, 0.0));
    for (a, b, c) in partials {
        sd += a;
        se += b;
        sde += c;
    }
    Ok(RateIntegrals {
        direct: pd * sd,
        exchange: pe * se,
        cross: pde * sde,
    })
}

/// Coincidence rate for the state's own delay and overlap.
pub fn coincidence_rate(
    state: &BiphotonState,
    d1: &DetectorSpec,
    d2: &DetectorSpec,
    quadrature: &Quadrature,
) -> Result<f64> {
    let integrals = rate_integrals(state, d1, d2, quadrature)?;
    Ok(integrals.rate(state.overlap(), state.envelope().eval(state.delay())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Dip,
    Peak,
    /// No significant coincidences anywhere on the curve.
    Null,
    /// Significant counts but no significant interference at zero delay.
    Flat,
    /// A shape-only curve (transverse or angular scan).
    Profile,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Dip => "dip",
            Classification::Peak => "peak",
            Classification::Null => "null",
            Classification::Flat => "flat",
            Classification::Profile => "profile",
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKind {
    /// Path-length scan; abscissa in mm.
    Delay,
    /// Detector position along `y`; abscissa in mm.
    Transverse,
    /// Analyzer angle; abscissa in degrees.
    Angle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub kind: ScanKind,
    pub abscissa: Vec<f64>,
    /// Expected coincidence counts.
    pub rates: Vec<f64>,
    /// Poisson standard deviation of each count, `√rate`.
    pub errors: Vec<f64>,
    pub visibility: f64,
}

impl ScanResult {
    fn from_rates(kind: ScanKind, abscissa: Vec<f64>, rates: Vec<f64>) -> Self {
        let errors = rates.iter().map(|r| r.sqrt()).collect();
        let visibility = match kind {
            ScanKind::Delay => hom_visibility(&rates, baseline_of(&rates)),
            ScanKind::Transverse | ScanKind::Angle => visibility(&rates),
        };
        ScanResult {
            kind,
            abscissa,
            rates,
            errors,
            visibility,
        }
    }

    /// Non-interfering level: mean of the two scan ends.
    pub fn baseline(&self) -> f64 {
        baseline_of(&self.rates)
    }

    /// Index of the sample closest to abscissa zero.
    pub fn center_index(&self) -> usize {
        self.abscissa
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    pub fn classify(&self) -> Classification {
        let max = self.rates.iter().copied().fold(0.0, f64::max);
        // A zero-count measurement still carries a one-count uncertainty.
        if max < SIGNIFICANCE {
            return Classification::Null;
        }
        match self.kind {
            ScanKind::Delay => {
                let base = self.baseline();
                let center = self.rates[self.center_index()];
                if (center - base).abs() > SIGNIFICANCE * base.sqrt().max(1.0) {
                    if center < base {
                        Classification::Dip
                    } else {
                        Classification::Peak
                    }
                } else {
                    Classification::Flat
                }
            }
            ScanKind::Transverse | ScanKind::Angle => Classification::Profile,
        }
    }

    /// Draws one Poisson realization of the counts.
    pub fn sample_counts<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        self.rates
            .iter()
            .map(|&r| {
                if r > 0.0 {
                    Poisson::new(r).map(|p| p.sample(rng) as u64).unwrap_or(0)
                } else {
                    0
                }
            })
            .collect()
    }

    /// `abscissa,rate,sigma` rows followed by `# visibility=<v>`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "abscissa,rate,sigma")?;
        for ((x, r), s) in self.abscissa.iter().zip(&self.rates).zip(&self.errors) {
            writeln!(out, "{x},{r},{s}")?;
        }
        writeln!(out, "# visibility={}", self.visibility)
    }

    /// Same layout as [`write_csv`](Self::write_csv) for sampled counts.
    pub fn write_sampled_csv<W: Write>(&self, counts: &[u64], mut out: W) -> std::io::Result<()> {
        writeln!(out, "abscissa,rate,sigma")?;
        for (x, &n) in self.abscissa.iter().zip(counts) {
            writeln!(out, "{x},{n},{}", (n as f64).sqrt())?;
        }
        let as_f64: Vec<f64> = counts.iter().map(|&n| n as f64).collect();
        let v = match self.kind {
            ScanKind::Delay => hom_visibility(&as_f64, baseline_of(&as_f64)),
            _ => visibility(&as_f64),
        };
        writeln!(out, "# visibility={v}")
    }
}

fn baseline_of(rates: &[f64]) -> f64 {
    match (rates.first(), rates.last()) {
        (Some(a), Some(b)) => 0.5 * (a + b),
        _ => 0.0,
    }
}

/// Fringe visibility `(max − min)/(max + min)`; zero for an empty or
/// all-zero curve.
pub fn visibility(rates: &[f64]) -> f64 {
    let max = rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = rates.iter().copied().fold(f64::INFINITY, f64::min);
    if rates.is_empty() || max + min <= 0.0 {
        return 0.0;
    }
    ((max - min) / (max + min)).clamp(0.0, 1.0)
}

/// Depth of a dip or height of a peak relative to the non-interfering
/// baseline: `max |rate − baseline| / baseline`, clamped to `[0, 1]`.
///
/// For a dip this is `(max − min)/max`, for a peak `(max − min)/min`.
pub fn hom_visibility(rates: &[f64], baseline: f64) -> f64 {
    if !(baseline > 0.0) {
        return 0.0;
    }
    let dev = rates
        .iter()
        .map(|r| (r - baseline).abs())
        .fold(0.0, f64::max);
    (dev / baseline).clamp(0.0, 1.0)
}

/// `steps` evenly spaced values from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![start];
    }
    let h = (end - start) / (steps - 1) as f64;
    (0..steps)
        .map(|k| {
            let v = start + k as f64 * h;
            // snap the exact midpoint of a symmetric range onto zero
            if (v / h).abs() < 1e-9 {
                0.0
            } else {
                v
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRange {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl ScanRange {
    pub fn symmetric(half_span: f64, steps: usize) -> Self {
        ScanRange {
            start: -half_span,
            end: half_span,
            steps,
        }
    }

    fn check(&self) -> Result<()> {
        if self.steps < 3 {
            return Err(Error::DegenerateScan(format!(
                "need at least 3 steps, got {}",
                self.steps
            )));
        }
        if !(self.end > self.start) || !self.start.is_finite() || !self.end.is_finite() {
            return Err(Error::DegenerateScan(format!(
                "range [{}, {}] is empty",
                self.start, self.end
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.end, self.steps)
    }
}

/// Coincidences versus path-length difference (meters in, mm out).
///
/// The range must reach at least three envelope widths (FWHM) on both sides
/// of zero so that the ends sit on the non-interfering baseline.
pub fn hom_scan(
    state: &BiphotonState,
    d1: &DetectorSpec,
    d2: &DetectorSpec,
    range: ScanRange,
    quadrature: &Quadrature,
    exposure: f64,
) -> Result<ScanResult> {
    range.check()?;
    let width = state.envelope().coherence_length();
    if range.start > -3.0 * width || range.end < 3.0 * width {
        return Err(Error::DegenerateScan(format!(
            "delay range [{:e}, {:e}] m must span ±3 envelope widths (±{:e} m)",
            range.start,
            range.end,
            3.0 * width
        )));
    }
    let integrals = rate_integrals(state, d1, d2, quadrature)?;
    let delays = range.points();
    let rates = delays
        .iter()
        .map(|&d| exposure * integrals.rate(state.overlap(), state.envelope().eval(d)))
        .collect();
    Ok(ScanResult::from_rates(
        ScanKind::Delay,
        delays.iter().map(|d| d * 1e3).collect(),
        rates,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransverseMode {
    /// Detector 1 stays put, detector 2 moves along `y`.
    FixD1ScanD2,
    /// Both detectors move along `y` together.
    ScanTogether,
}

/// Coincidences versus detector `y` position (meters in, mm out), at the
/// state's delay.
pub fn transverse_scan(
    state: &BiphotonState,
    d1: &DetectorSpec,
    d2: &DetectorSpec,
    mode: TransverseMode,
    range: ScanRange,
    quadrature: &Quadrature,
    exposure: f64,
) -> Result<ScanResult> {
    range.check()?;
    let both_slits = matches!(d1.aperture, Aperture::Slit { .. })
        && matches!(d2.aperture, Aperture::Slit { .. });
    if !both_slits {
        return Err(Error::param(
            "aperture",
            "transverse scans need slit apertures",
        ));
    }
    if d1.port != d2.port || !matches!(d1.port, Port::Port1 | Port::Port2) {
        return Err(Error::param(
            "port",
            "transverse scans need both detectors on the same output port",
        ));
    }
    let positions = range.points();
    let g = state.envelope().eval(state.delay());
    let rates = positions
        .par_iter()
        .map(|&y| {
            let moved2 = d2.with_center(Point::new(d2.center.x, y));
            let moved1 = match mode {
                TransverseMode::FixD1ScanD2 => *d1,
                TransverseMode::ScanTogether => d1.with_center(Point::new(d1.center.x, y)),
            };
            rate_integrals(state, &moved1, &moved2, quadrature)
                .map(|i| exposure * i.rate(state.overlap(), g))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ScanResult::from_rates(
        ScanKind::Transverse,
        positions.iter().map(|y| y * 1e3).collect(),
        rates,
    ))
}

/// Polarizer-correlation curve with the beam splitter removed.
///
/// Photon 1 meets a linear polarizer fixed at `fixed_angle` degrees while
/// photon 2's polarizer sweeps `rotating` (degrees). Imperfect preparation
/// mixes the ideal state with unpolarized pairs:
/// `rate(θ) ∝ μ·|⟨θ_fixed, θ|s⟩|² + (1 − μ)/4`.
pub fn polarization_correlation_scan(
    pol: &TwoPhotonPolState,
    fixed_angle: f64,
    rotating: ScanRange,
    overlap: f64,
    exposure: f64,
) -> Result<ScanResult> {
    rotating.check()?;
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::param(
            "overlap",
            format!("must lie in [0, 1], got {overlap}"),
        ));
    }
    let fixed = linear(fixed_angle.to_radians());
    let angles = rotating.points();
    let rates = angles
        .iter()
        .map(|&theta| {
            let p = pol
                .vector()
                .project(&fixed, &linear(theta.to_radians()))
                .norm_sqr();
            exposure * (overlap * p + 0.25 * (1.0 - overlap))
        })
        .collect();
    Ok(ScanResult::from_rates(ScanKind::Angle, angles, rates))
}
