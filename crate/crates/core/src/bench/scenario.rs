use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{BenchConfig, PumpConfig, PumpShape, StateConfig};
use super::{digest, Scenario};
use crate::detection::{
    hom_scan, polarization_correlation_scan, transverse_scan, Analyzer, Aperture, Classification,
    DetectorSpec, PbsArm, Port, Quadrature, ScanRange, ScanResult, TransverseMode,
};
use crate::engine::{BiphotonState, Point};
use crate::error::{Error, Result};
use crate::optics::{
    fresnel_propagate, synthesize_pump, FieldGrid, GridGeometry, PumpKind, PumpSpec,
};
use crate::polarization::{bell_state, BellKind};

/// One curve of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledScan {
    /// Empty for single-curve scenarios, otherwise the state or fixed angle.
    pub label: String,
    pub scan: ScanResult,
    pub classification: Classification,
    /// Poisson draw of the expected counts, present when noise is enabled.
    pub sampled: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub scenario: Scenario,
    pub scans: Vec<LabeledScan>,
    /// SHA-256 of the resolved configuration.
    pub digest: String,
}

fn require<'a, T>(section: &'a Option<T>, name: &str, scenario: Scenario) -> Result<&'a T> {
    section.as_ref().ok_or_else(|| Error::MissingSection {
        scenario: scenario.name().to_string(),
        requirement: format!("a [{name}] section"),
    })
}

struct Setup<'a> {
    pump: &'a PumpConfig,
    state: &'a StateConfig,
    geometry: GridGeometry,
}

impl Setup<'_> {
    fn propagated(&self, kind: PumpKind) -> Result<Arc<FieldGrid>> {
        let spec = PumpSpec {
            kind,
            wavelength: self.pump.wavelength,
        };
        let at_source = synthesize_pump(&spec, self.geometry)?;
        let field = if self.pump.distance > 0.0 {
            fresnel_propagate(&at_source, self.pump.distance)?
        } else {
            at_source
        };
        Ok(Arc::new(field))
    }

    fn shaped_pump(&self) -> Result<Arc<FieldGrid>> {
        let p = self.pump;
        let kind = match p.kind {
            PumpShape::Gaussian => PumpKind::Gaussian { waist: p.waist },
            PumpShape::HermiteGauss => PumpKind::HermiteGauss {
                m: p.hg_m,
                n: p.hg_n,
                waist: p.waist,
            },
            PumpShape::PhaseStep => PumpKind::PhaseStep {
                waist: p.waist,
                step_phase: p.step_phase,
                transmission: p.transmission,
            },
        };
        self.propagated(kind)
    }

    fn gaussian_pump(&self) -> Result<Arc<FieldGrid>> {
        self.propagated(PumpKind::Gaussian {
            waist: self.pump.waist,
        })
    }

    fn biphoton(
        &self,
        pump: Arc<FieldGrid>,
        bell: BellKind,
        overlap: f64,
    ) -> Result<BiphotonState> {
        BiphotonState::new(
            pump,
            bell_state(bell),
            0.0,
            overlap,
            self.state.downconverted_wavelength,
            self.state.filter_bandwidth,
        )
    }
}

/// Runs one scenario with expected (noise-free) counts, plus a seeded
/// Poisson draw per curve when `config.output.noise` is set.
pub fn run_scenario(config: &BenchConfig, scenario: Scenario) -> Result<ScenarioReport> {
    let state_cfg = require(&config.state, "state", scenario)?;
    let scan_cfg = require(&config.scan, "scan", scenario)?;
    let exposure = config.output.exposure;

    let mut curves: Vec<(String, ScanResult)> = Vec::new();
    if scenario == Scenario::PolarizationTest {
        let pol = bell_state(state_cfg.bell);
        let mu = state_cfg.mu_for(scenario, None);
        let range = ScanRange {
            start: scan_cfg.angle_start,
            end: scan_cfg.angle_end,
            steps: scan_cfg.angle_steps,
        };
        for fixed in [0.0, 45.0] {
            let scan = polarization_correlation_scan(&pol, fixed, range, mu, exposure)?;
            curves.push((format!("fixed{fixed}"), scan));
        }
    } else {
        let pump = require(&config.pump, "pump", scenario)?;
        let grid = require(&config.grid, "grid", scenario)?;
        let det = require(&config.detectors, "detectors", scenario)?;
        let setup = Setup {
            pump,
            state: state_cfg,
            geometry: GridGeometry::square(grid.samples, grid.window)?,
        };
        let quad = Quadrature::with_step(grid.quadrature_step);
        let circle = Aperture::Circle {
            diameter: det.circle_diameter,
        };
        let slit = Aperture::Slit {
            width: det.slit_width,
            height: det.slit_height,
        };
        let delays = ScanRange::symmetric(scan_cfg.delay_span, scan_cfg.delay_steps);
        let opposite = (
            DetectorSpec::new(Port::Port1, Point::ORIGIN, circle),
            DetectorSpec::new(Port::Port2, Point::ORIGIN, circle),
        );

        match scenario {
            Scenario::HomEvenDip => {
                let mu = state_cfg.mu_for(scenario, None);
                let s = setup.biphoton(setup.gaussian_pump()?, state_cfg.reference_bell, mu)?;
                let scan = hom_scan(&s, &opposite.0, &opposite.1, delays, &quad, exposure)?;
                curves.push((String::new(), scan));
            }
            Scenario::HomOddSinglet => {
                let mu = state_cfg.mu_for(scenario, None);
                let s = setup.biphoton(setup.shaped_pump()?, state_cfg.bell, mu)?;
                let scan = hom_scan(&s, &opposite.0, &opposite.1, delays, &quad, exposure)?;
                curves.push((String::new(), scan));
            }
            Scenario::SameportHv | Scenario::SameportPm => {
                let analyzer: fn(PbsArm) -> Analyzer = if scenario == Scenario::SameportHv {
                    Analyzer::hv
                } else {
                    Analyzer::diagonal
                };
                let d1 = DetectorSpec::new(Port::Port1, Point::ORIGIN, circle)
                    .with_analyzer(analyzer(PbsArm::Transmitted));
                let d2 = DetectorSpec::new(Port::Port1, Point::ORIGIN, circle)
                    .with_analyzer(analyzer(PbsArm::Reflected));
                let field = setup.shaped_pump()?;
                for &bell in scenario.states().unwrap_or(&[]) {
                    let mu = state_cfg.mu_for(scenario, Some(bell));
                    let s = setup.biphoton(field.clone(), bell, mu)?;
                    let scan = hom_scan(&s, &d1, &d2, delays, &quad, exposure)?;
                    curves.push((bell.name().to_string(), scan));
                }
            }
            Scenario::AntibunchFixed | Scenario::AntibunchTogether => {
                let mu = state_cfg.mu_for(scenario, None);
                let s = setup.biphoton(setup.shaped_pump()?, state_cfg.bell, mu)?;
                let d1 = DetectorSpec::new(Port::Port1, Point::new(0.0, det.fixed_y), slit)
                    .with_analyzer(Analyzer::hv(PbsArm::Transmitted));
                let d2 = DetectorSpec::new(Port::Port1, Point::ORIGIN, slit)
                    .with_analyzer(Analyzer::hv(PbsArm::Reflected));
                let mode = if scenario == Scenario::AntibunchFixed {
                    TransverseMode::FixD1ScanD2
                } else {
                    TransverseMode::ScanTogether
                };
                let range =
                    ScanRange::symmetric(scan_cfg.transverse_span, scan_cfg.transverse_steps);
                let scan = transverse_scan(&s, &d1, &d2, mode, range, &quad, exposure)?;
                curves.push((String::new(), scan));
            }
            Scenario::PolarizationTest => unreachable!("handled above"),
        }
    }

    let scenario_index = Scenario::ALL
        .iter()
        .position(|&s| s == scenario)
        .unwrap_or(0) as u64;
    let scans = curves
        .into_iter()
        .enumerate()
        .map(|(i, (label, scan))| {
            let sampled = config.output.noise.then(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(config.output.seed);
                rng.set_stream(scenario_index * 16 + i as u64);
                scan.sample_counts(&mut rng)
            });
            LabeledScan {
                label,
                classification: scan.classify(),
                scan,
                sampled,
            }
        })
        .collect();

    Ok(ScenarioReport {
        scenario,
        scans,
        digest: digest(config),
    })
}
