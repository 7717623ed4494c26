//! Plain-text bench description.
//!
//! ```text
//! # comment
//! [pump]
//! kind = phase_step
//! waist = 1 mm
//! step_phase = 3.141592653589793
//! ```
//!
//! Section headers sit in square brackets and every other non-blank line is
//! `key = value`. Lengths accept `m`, `mm`, `um`, `µm` and `nm` suffixes (a
//! bare number means meters); angles accept `deg` or `rad` (bare means the
//! key's documented unit). Unknown sections and keys are errors, omitted
//! keys fall back to the defaults listed in [`BenchConfig::default`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::bench::Scenario;
use crate::detection::{
    DEFAULT_CIRCLE_DIAMETER, DEFAULT_EXPOSURE, DEFAULT_QUADRATURE_STEP, DEFAULT_SLIT_HEIGHT,
    DEFAULT_SLIT_WIDTH,
};
use crate::engine::{DEFAULT_DOWNCONVERTED_WAVELENGTH, DEFAULT_FILTER_BANDWIDTH};
use crate::error::{Error, Result};
use crate::optics::{
    DEFAULT_PROPAGATION_DISTANCE, DEFAULT_PUMP_WAVELENGTH, DEFAULT_SAMPLES, DEFAULT_WINDOW,
};
use crate::polarization::BellKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PumpShape {
    Gaussian,
    HermiteGauss,
    PhaseStep,
}

impl PumpShape {
    fn name(self) -> &'static str {
        match self {
            PumpShape::Gaussian => "gaussian",
            PumpShape::HermiteGauss => "hermite_gauss",
            PumpShape::PhaseStep => "phase_step",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [
            PumpShape::Gaussian,
            PumpShape::HermiteGauss,
            PumpShape::PhaseStep,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

/// Pump preparation. The laminate scenarios use `kind`; the reference HOM
/// dip always uses a plain Gaussian of the same waist.
#[derive(Debug, Clone, PartialEq)]
pub struct PumpConfig {
    pub kind: PumpShape,
    pub waist: f64,
    /// Radians.
    pub step_phase: f64,
    pub transmission: f64,
    pub hg_m: u32,
    pub hg_n: u32,
    pub wavelength: f64,
    /// Laminate to detection plane.
    pub distance: f64,
}

impl Default for PumpConfig {
    fn default() -> Self {
        PumpConfig {
            kind: PumpShape::PhaseStep,
            waist: 1e-3,
            step_phase: std::f64::consts::PI,
            transmission: 1.0,
            hg_m: 0,
            hg_n: 1,
            wavelength: DEFAULT_PUMP_WAVELENGTH,
            distance: DEFAULT_PROPAGATION_DISTANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateConfig {
    /// State used with the shaped pump.
    pub bell: BellKind,
    /// State used for the plain-Gaussian reference dip.
    pub reference_bell: BellKind,
    pub downconverted_wavelength: f64,
    pub filter_bandwidth: f64,
    /// Overlap used where no scenario-specific value is given.
    pub mu: f64,
    /// Scenario-specific overlaps keyed by `scenario` or `scenario.state`.
    pub mu_overrides: BTreeMap<String, f64>,
}

impl Default for StateConfig {
    fn default() -> Self {
        StateConfig {
            bell: BellKind::PsiMinus,
            reference_bell: BellKind::PsiPlus,
            downconverted_wavelength: DEFAULT_DOWNCONVERTED_WAVELENGTH,
            filter_bandwidth: DEFAULT_FILTER_BANDWIDTH,
            mu: 1.0,
            mu_overrides: BTreeMap::new(),
        }
    }
}

impl StateConfig {
    /// Overlap for `scenario`, optionally for one of its states. Falls back
    /// from `scenario.state` to `scenario` to the global `mu`.
    pub fn mu_for(&self, scenario: Scenario, state: Option<BellKind>) -> f64 {
        let base = scenario.name();
        state
            .and_then(|s| self.mu_overrides.get(&format!("{base}.{}", s.name())))
            .or_else(|| self.mu_overrides.get(base))
            .copied()
            .unwrap_or(self.mu)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub samples: usize,
    pub window: f64,
    pub quadrature_step: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            samples: DEFAULT_SAMPLES,
            window: DEFAULT_WINDOW,
            quadrature_step: DEFAULT_QUADRATURE_STEP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    pub circle_diameter: f64,
    /// Along `y`.
    pub slit_width: f64,
    /// Along `x`.
    pub slit_height: f64,
    /// Position of the fixed detector in the fixed/scanned antibunching scan.
    pub fixed_y: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            circle_diameter: DEFAULT_CIRCLE_DIAMETER,
            slit_width: DEFAULT_SLIT_WIDTH,
            slit_height: DEFAULT_SLIT_HEIGHT,
            fixed_y: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    /// Half-span of the delay scan.
    pub delay_span: f64,
    pub delay_steps: usize,
    /// Half-span of the transverse scans.
    pub transverse_span: f64,
    pub transverse_steps: usize,
    /// Degrees.
    pub angle_start: f64,
    /// Degrees.
    pub angle_end: f64,
    pub angle_steps: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            delay_span: 2e-3,
            delay_steps: 81,
            transverse_span: 2e-3,
            transverse_steps: 41,
            angle_start: 0.0,
            angle_end: 180.0,
            angle_steps: 37,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub directory: String,
    /// Counts per unit model rate.
    pub exposure: f64,
    pub seed: u64,
    pub noise: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: "out".to_string(),
            exposure: DEFAULT_EXPOSURE,
            seed: 0,
            noise: false,
        }
    }
}

/// Parsed bench description. A section is `Some` when its header appears
/// in the file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchConfig {
    pub pump: Option<PumpConfig>,
    pub state: Option<StateConfig>,
    pub grid: Option<GridConfig>,
    pub detectors: Option<DetectorConfig>,
    pub scan: Option<ScanConfig>,
    pub output: OutputConfig,
}

impl BenchConfig {
    /// Every section present, all keys at their defaults.
    pub fn full_default() -> Self {
        BenchConfig {
            pump: Some(PumpConfig::default()),
            state: Some(StateConfig::default()),
            grid: Some(GridConfig::default()),
            detectors: Some(DetectorConfig::default()),
            scan: Some(ScanConfig::default()),
            output: OutputConfig::default(),
        }
    }
}

const SECTIONS: [&str; 6] = ["pump", "state", "grid", "detectors", "scan", "output"];

fn mu_key_known(key: &str) -> bool {
    let mut parts = key.splitn(2, '.');
    let scenario = parts.next().unwrap_or("");
    let Ok(s) = scenario.parse::<Scenario>() else {
        return false;
    };
    match parts.next() {
        None => true,
        Some(state) => s
            .states()
            .is_some_and(|states| states.iter().any(|k| k.name() == state)),
    }
}

struct Line<'a> {
    number: usize,
    key: &'a str,
    value: &'a str,
}

impl Line<'_> {
    fn dim(&self, reason: impl Into<String>) -> Error {
        Error::Dimension {
            line: self.number,
            key: self.key.to_string(),
            reason: reason.into(),
        }
    }

    fn number_with_unit(&self) -> Result<(f64, &str)> {
        let v = self.value.trim();
        let split = v
            .find(|c: char| c.is_alphabetic() || c == 'µ')
            .filter(|&i| {
                // keep exponents like 1e-3 inside the number
                !(v[i..].starts_with(['e', 'E'])
                    && v[i + 1..].starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+'))
            });
        let (num, unit) = match split {
            Some(i) => (&v[..i], v[i..].trim()),
            None => (v, ""),
        };
        let x: f64 = num.trim().parse().map_err(|_| Error::Syntax {
            line: self.number,
            message: format!("`{}`: cannot parse number from `{}`", self.key, self.value),
        })?;
        if !x.is_finite() {
            return Err(self.dim("must be finite"));
        }
        Ok((x, unit))
    }

    fn length(&self) -> Result<f64> {
        let (x, unit) = self.number_with_unit()?;
        let scale = match unit {
            "" | "m" => 1.0,
            "mm" => 1e-3,
            "um" | "µm" => 1e-6,
            "nm" => 1e-9,
            other => return Err(self.dim(format!("has unknown length unit `{other}`"))),
        };
        Ok(x * scale)
    }

    fn positive_length(&self) -> Result<f64> {
        let x = self.length()?;
        if x > 0.0 {
            Ok(x)
        } else {
            Err(self.dim(format!("must be a positive length, got {x} m")))
        }
    }

    /// Angle in radians; `deg` suffix converts.
    fn radians(&self) -> Result<f64> {
        let (x, unit) = self.number_with_unit()?;
        match unit {
            "" | "rad" => Ok(x),
            "deg" => Ok(x.to_radians()),
            other => Err(self.dim(format!("has unknown angle unit `{other}`"))),
        }
    }

    /// Angle in degrees; `rad` suffix converts.
    fn degrees(&self) -> Result<f64> {
        let (x, unit) = self.number_with_unit()?;
        match unit {
            "" | "deg" => Ok(x),
            "rad" => Ok(x.to_degrees()),
            other => Err(self.dim(format!("has unknown angle unit `{other}`"))),
        }
    }

    fn plain(&self) -> Result<f64> {
        let (x, unit) = self.number_with_unit()?;
        if !unit.is_empty() {
            return Err(self.dim(format!("is dimensionless, got unit `{unit}`")));
        }
        Ok(x)
    }

    fn fraction(&self, allow_zero: bool) -> Result<f64> {
        let x = self.plain()?;
        let ok = if allow_zero {
            (0.0..=1.0).contains(&x)
        } else {
            x > 0.0 && x <= 1.0
        };
        if ok {
            Ok(x)
        } else {
            let range = if allow_zero { "[0, 1]" } else { "(0, 1]" };
            Err(self.dim(format!("must lie in {range}, got {x}")))
        }
    }

    fn count(&self, min: u64) -> Result<u64> {
        let n: u64 = self.value.trim().parse().map_err(|_| Error::Syntax {
            line: self.number,
            message: format!(
                "`{}`: expected a non-negative integer, got `{}`",
                self.key, self.value
            ),
        })?;
        if n < min {
            return Err(self.dim(format!("must be at least {min}, got {n}")));
        }
        Ok(n)
    }

    fn boolean(&self) -> Result<bool> {
        match self.value.trim() {
            "true" | "yes" | "on" => Ok(true),
            "false" | "no" | "off" => Ok(false),
            other => Err(Error::Syntax {
                line: self.number,
                message: format!("`{}`: expected true or false, got `{other}`", self.key),
            }),
        }
    }

    fn bell(&self) -> Result<BellKind> {
        self.value.trim().parse().map_err(|e: String| self.dim(e))
    }
}

pub fn parse_config(text: &str) -> Result<BenchConfig> {
    let mut config = BenchConfig::default();
    let mut section: Option<&str> = None;
    let mut seen_sections: Vec<&str> = Vec::new();
    let mut seen_keys: Vec<(String, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| Error::Syntax {
                line: number,
                message: format!("unterminated section header `{content}`"),
            })?;
            let name = name.trim();
            let Some(&known) = SECTIONS.iter().find(|&&s| s == name) else {
                return Err(Error::Syntax {
                    line: number,
                    message: format!("unknown section [{name}]"),
                });
            };
            if seen_sections.contains(&known) {
                return Err(Error::Syntax {
                    line: number,
                    message: format!("section [{known}] appears twice"),
                });
            }
            seen_sections.push(known);
            match known {
                "pump" => config.pump = Some(PumpConfig::default()),
                "state" => config.state = Some(StateConfig::default()),
                "grid" => config.grid = Some(GridConfig::default()),
                "detectors" => config.detectors = Some(DetectorConfig::default()),
                "scan" => config.scan = Some(ScanConfig::default()),
                _ => {}
            }
            section = Some(known);
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Syntax {
                line: number,
                message: format!("expected `key = value`, got `{content}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(Error::Syntax {
                line: number,
                message: format!("expected `key = value`, got `{content}`"),
            });
        }
        let Some(sec) = section else {
            return Err(Error::Syntax {
                line: number,
                message: format!("`{key}` appears before any section header"),
            });
        };
        if seen_keys.iter().any(|(s, k)| s == sec && k == key) {
            return Err(Error::Syntax {
                line: number,
                message: format!("`{key}` set twice in [{sec}]"),
            });
        }
        seen_keys.push((sec.to_string(), key.to_string()));

        let line = Line { number, key, value };
        let unknown = || Error::UnknownKey {
            line: number,
            section: sec.to_string(),
            key: key.to_string(),
        };
        match sec {
            "pump" => {
                let p = config.pump.as_mut().expect("section initialized");
                match key {
                    "kind" => {
                        p.kind = PumpShape::parse(value).ok_or_else(|| {
                            line.dim("must be gaussian, hermite_gauss or phase_step")
                        })?
                    }
                    "waist" => p.waist = line.positive_length()?,
                    "step_phase" => p.step_phase = line.radians()?,
                    "transmission" => p.transmission = line.fraction(false)?,
                    "hg_m" => p.hg_m = line.count(0)? as u32,
                    "hg_n" => p.hg_n = line.count(0)? as u32,
                    "wavelength" => p.wavelength = line.positive_length()?,
                    "distance" => {
                        let d = line.length()?;
                        if d < 0.0 {
                            return Err(line.dim(format!("must not be negative, got {d} m")));
                        }
                        p.distance = d;
                    }
                    _ => return Err(unknown()),
                }
            }
            "state" => {
                let s = config.state.as_mut().expect("section initialized");
                match key {
                    "bell" => s.bell = line.bell()?,
                    "reference_bell" => s.reference_bell = line.bell()?,
                    "downconverted_wavelength" => {
                        s.downconverted_wavelength = line.positive_length()?
                    }
                    "filter_bandwidth" => s.filter_bandwidth = line.positive_length()?,
                    "mu" => s.mu = line.fraction(true)?,
                    _ => match key.strip_prefix("mu.") {
                        Some(rest) if mu_key_known(rest) => {
                            s.mu_overrides
                                .insert(rest.to_string(), line.fraction(true)?);
                        }
                        _ => return Err(unknown()),
                    },
                }
            }
            "grid" => {
                let g = config.grid.as_mut().expect("section initialized");
                match key {
                    "samples" => g.samples = line.count(2)? as usize,
                    "window" => g.window = line.positive_length()?,
                    "quadrature_step" => g.quadrature_step = line.positive_length()?,
                    _ => return Err(unknown()),
                }
            }
            "detectors" => {
                let d = config.detectors.as_mut().expect("section initialized");
                match key {
                    "circle_diameter" => d.circle_diameter = line.positive_length()?,
                    "slit_width" => d.slit_width = line.positive_length()?,
                    "slit_height" => d.slit_height = line.positive_length()?,
                    "fixed_y" => d.fixed_y = line.length()?,
                    _ => return Err(unknown()),
                }
            }
            "scan" => {
                let s = config.scan.as_mut().expect("section initialized");
                match key {
                    "delay_span" => s.delay_span = line.positive_length()?,
                    "delay_steps" => s.delay_steps = line.count(3)? as usize,
                    "transverse_span" => s.transverse_span = line.positive_length()?,
                    "transverse_steps" => s.transverse_steps = line.count(3)? as usize,
                    "angle_start" => s.angle_start = line.degrees()?,
                    "angle_end" => s.angle_end = line.degrees()?,
                    "angle_steps" => s.angle_steps = line.count(3)? as usize,
                    _ => return Err(unknown()),
                }
            }
            "output" => {
                let o = &mut config.output;
                match key {
                    "directory" => o.directory = value.to_string(),
                    "exposure" => {
                        let x = line.plain()?;
                        if !(x > 0.0) {
                            return Err(line.dim(format!("must be positive, got {x}")));
                        }
                        o.exposure = x;
                    }
                    "seed" => o.seed = line.count(0)?,
                    "noise" => o.noise = line.boolean()?,
                    _ => return Err(unknown()),
                }
            }
            _ => unreachable!("section names are checked on entry"),
        }
    }

    if let Some(scan) = &config.scan {
        if !(scan.angle_end > scan.angle_start) {
            return Err(Error::InvalidConfig {
                key: "scan.angle_end".into(),
                reason: format!(
                    "must exceed angle_start ({} <= {})",
                    scan.angle_end, scan.angle_start
                ),
            });
        }
    }
    Ok(config)
}

/// Canonical text form. Every present section is written with all keys
/// resolved, lengths in meters, so `parse_config(render(c)) == c`.
pub fn render(config: &BenchConfig) -> String {
    let mut out = String::new();
    let w = &mut out;
    if let Some(p) = &config.pump {
        let _ = writeln!(w, "[pump]");
        let _ = writeln!(w, "kind = {}", p.kind.name());
        let _ = writeln!(w, "waist = {} m", p.waist);
        let _ = writeln!(w, "step_phase = {}", p.step_phase);
        let _ = writeln!(w, "transmission = {}", p.transmission);
        let _ = writeln!(w, "hg_m = {}", p.hg_m);
        let _ = writeln!(w, "hg_n = {}", p.hg_n);
        let _ = writeln!(w, "wavelength = {} m", p.wavelength);
        let _ = writeln!(w, "distance = {} m", p.distance);
        let _ = writeln!(w);
    }
    if let Some(s) = &config.state {
        let _ = writeln!(w, "[state]");
        let _ = writeln!(w, "bell = {}", s.bell);
        let _ = writeln!(w, "reference_bell = {}", s.reference_bell);
        let _ = writeln!(
            w,
            "downconverted_wavelength = {} m",
            s.downconverted_wavelength
        );
        let _ = writeln!(w, "filter_bandwidth = {} m", s.filter_bandwidth);
        let _ = writeln!(w, "mu = {}", s.mu);
        for (k, v) in &s.mu_overrides {
            let _ = writeln!(w, "mu.{k} = {v}");
        }
        let _ = writeln!(w);
    }
    if let Some(g) = &config.grid {
        let _ = writeln!(w, "[grid]");
        let _ = writeln!(w, "samples = {}", g.samples);
        let _ = writeln!(w, "window = {} m", g.window);
        let _ = writeln!(w, "quadrature_step = {} m", g.quadrature_step);
        let _ = writeln!(w);
    }
    if let Some(d) = &config.detectors {
        let _ = writeln!(w, "[detectors]");
        let _ = writeln!(w, "circle_diameter = {} m", d.circle_diameter);
        let _ = writeln!(w, "slit_width = {} m", d.slit_width);
        let _ = writeln!(w, "slit_height = {} m", d.slit_height);
        let _ = writeln!(w, "fixed_y = {} m", d.fixed_y);
        let _ = writeln!(w);
    }
    if let Some(s) = &config.scan {
        let _ = writeln!(w, "[scan]");
        let _ = writeln!(w, "delay_span = {} m", s.delay_span);
        let _ = writeln!(w, "delay_steps = {}", s.delay_steps);
        let _ = writeln!(w, "transverse_span = {} m", s.transverse_span);
        let _ = writeln!(w, "transverse_steps = {}", s.transverse_steps);
        let _ = writeln!(w, "angle_start = {} deg", s.angle_start);
        let _ = writeln!(w, "angle_end = {} deg", s.angle_end);
        let _ = writeln!(w, "angle_steps = {}", s.angle_steps);
        let _ = writeln!(w);
    }
    let o = &config.output;
    let _ = writeln!(w, "[output]");
    let _ = writeln!(w, "directory = {}", o.directory);
    let _ = writeln!(w, "exposure = {}", o.exposure);
    let _ = writeln!(w, "seed = {}", o.seed);
    let _ = writeln!(w, "noise = {}", o.noise);
    out
}

/// SHA-256 of the canonical rendering, hex encoded.
pub fn digest(config: &BenchConfig) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(render(config).as_bytes()))
}
