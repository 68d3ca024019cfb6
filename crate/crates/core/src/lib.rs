//! Continuum-dielectric spectral densities for a chromophore in a protein,
//! and the decoherence they cause in the independent-boson model.
//!
//! Units throughout: energies in cm⁻¹, times in ps, angular frequencies and
//! spectral densities in rad/ps, lengths in Å, dipoles in Debye,
//! temperatures in K. See [`units`].

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dielectric;
pub mod dynamics;
pub mod error;
pub mod fitting;
pub mod quadrature;
pub mod reaction_field;
pub mod spectral;
pub mod units;

pub use dielectric::{permittivity, DebyeDielectric, Dielectric, StaticDielectric};
pub use error::{Error, Result};
pub use fitting::{fit_multiexponential, CorrelationSamples, ExponentialFit};
pub use reaction_field::{
    chi_closed_form, chi_linear_solve, spectral_density_from_chi, DipoleSource,
    ReactionFieldDensity, Susceptibility, ThreeRegionGeometry,
};
pub use spectral::{
    reorganization_energy, Component, EnvironmentModel, LorentzianSum, LorentzianTerm, ModelKind,
    SpectralDensity, ThreeComponentEnvironment,
};
pub use units::{convert, thermal_energy, Quantity, Unit};
