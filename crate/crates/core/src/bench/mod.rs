//! Named experiment scenarios driven by a text configuration.

mod config;
mod output;
mod scenario;

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::polarization::BellKind;

pub use config::{
    digest, parse_config, render, BenchConfig, DetectorConfig, GridConfig, OutputConfig,
    PumpConfig, PumpShape, ScanConfig, StateConfig,
};
pub use output::{scan_file_name, write_outputs, write_summary};
pub use scenario::{run_scenario, LabeledScan, ScenarioReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    /// Plain Gaussian pump, opposite-port delay scan.
    HomEvenDip,
    /// Shaped pump with the singlet, opposite-port delay scan.
    HomOddSinglet,
    /// Same-port delay scans behind an H/V analyzer.
    SameportHv,
    /// Same-port delay scans behind a ±45° analyzer.
    SameportPm,
    /// One slit fixed, the other scanned along `y`.
    AntibunchFixed,
    /// Both slits scanned along `y` together.
    AntibunchTogether,
    /// Polarizer correlations without the beam splitter.
    PolarizationTest,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::HomEvenDip,
        Scenario::HomOddSinglet,
        Scenario::SameportHv,
        Scenario::SameportPm,
        Scenario::AntibunchFixed,
        Scenario::AntibunchTogether,
        Scenario::PolarizationTest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::HomEvenDip => "hom_even_dip",
            Scenario::HomOddSinglet => "hom_odd_singlet",
            Scenario::SameportHv => "sameport_hv",
            Scenario::SameportPm => "sameport_pm",
            Scenario::AntibunchFixed => "antibunch_fixed",
            Scenario::AntibunchTogether => "antibunch_together",
            Scenario::PolarizationTest => "polarization_test",
        }
    }

    /// Scenarios that record one curve per Bell state.
    pub fn states(self) -> Option<&'static [BellKind]> {
        match self {
            Scenario::SameportHv | Scenario::SameportPm => {
                Some(&[BellKind::PsiMinus, BellKind::PsiPlus])
            }
            _ => None,
        }
    }

    /// Sections the scenario reads.
    pub fn required_sections(self) -> &'static [&'static str] {
        match self {
            Scenario::PolarizationTest => &["state", "scan"],
            _ => &["pump", "state", "grid", "detectors", "scan"],
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Scenario::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}
