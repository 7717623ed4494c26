//! Numerical simulator for two-photon polarization and transverse-mode
//! interference at a beam splitter.
//!
//! The crate models a down-converted photon pair whose two-photon amplitude
//! carries the transverse profile of the pump beam at the sum coordinate.
//! Shaping the pump parity in `y` (for example with a half-inserted glass
//! laminate that imprints a π phase step) decides which polarization
//! symmetry leaves a symmetric beam splitter through the same port. The
//! antisymmetric singlet then travels as a single beam and shows spatial
//! antibunching across the beam.
//!
//! Modules, bottom up:
//!
//! * [`polarization`]: two-photon polarization states, wave plates and analyzers.
//! * [`optics`]: transverse field grids, pump synthesis and Fresnel propagation.
//! * [`engine`]: pump transfer, beam splitter transformation and coincidence densities.
//! * [`detection`]: finite apertures, scans and visibility extraction.
//! * [`bench`]: configuration grammar, named scenarios and output files.

pub mod bench;
pub mod detection;
pub mod engine;
pub mod error;
pub mod optics;
pub mod polarization;

pub use error::{Error, Result};
