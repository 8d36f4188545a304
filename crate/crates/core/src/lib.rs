//! Miller-Good semiclassical quantization for single wells and the
//! symmetric quartic double well, with an exact eigensolver to check it.
//!
//! Units are natural (`hbar = m = omega = 1`) unless a routine takes an
//! explicit [`Potential1D`] carrying its own constants.

pub mod diagnostics;
pub mod double_well;
pub mod error;
pub mod exact;
pub mod miller_good;
pub mod potential;
pub mod quadrature;
pub mod reference;
pub mod roots;

pub use diagnostics::{correction_terms, validity_report, xi_mapping, CorrectionReport, Validity, ValidityReport, XiMapping};
pub use double_well::{eta_integral, ground_energy, lambda_max, solve_z, sweep, ZSolution};
pub use error::{Error, Result};
pub use exact::{cross_validate, ground_state, spectrum, Backend, EigenResult, Parity};
pub use miller_good::{
    mapping_s0, mg_quantize, mg_quantize_transformed, wavefunction, wkb_quantize, AuxiliaryProblem,
    CoordinateTransform, MappingTable, QuantizedLevel, WellSelect,
};
pub use potential::{CustomPotential, HarmonicParams, OscillatorParams, Potential1D, TurningPoint};
