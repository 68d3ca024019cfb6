//! Physical constants and unit conversions.
//!
//! Every quantity inside the crate uses one canonical unit per dimension:
//!
//! | dimension          | canonical unit |
//! |--------------------|----------------|
//! | energy             | cm⁻¹           |
//! | time               | ps             |
//! | angular frequency  | rad/ps         |
//! | length             | Å              |
//! | dipole moment      | Debye          |
//! | temperature        | K              |
//!
//! Spectral densities are angular frequencies (rad/ps), so an energy `E` in
//! cm⁻¹ corresponds to the rate `E / ħ` with ħ in cm⁻¹·ps.

use std::fmt;

use crate::error::{Error, Result};

/// Pinned constants. Tests and derived values reference these exact numbers.
pub mod constants {
    /// Version tag written into CLI provenance headers.
    pub const TABLE_VERSION: &str = "constants-v1";

    /// Reduced Planck constant in cm⁻¹·ps.
    pub const HBAR_CM1_PS: f64 = 5.3088;
    /// Boltzmann constant in cm⁻¹/K.
    pub const KB_CM1_PER_K: f64 = 0.69504;
    /// One Debye in C·m.
    pub const DEBYE_C_M: f64 = 3.33564e-30;
    /// Vacuum permittivity in F/m.
    pub const EPS0_F_PER_M: f64 = 8.8542e-12;
    /// 1/(hc): wavenumbers per joule.
    pub const CM1_PER_JOULE: f64 = 5.034117e22;
    /// Wavenumbers per meV.
    pub const CM1_PER_MEV: f64 = 8.0655439;
    /// One Ångström in metres.
    pub const ANGSTROM_M: f64 = 1e-10;
    /// CODATA ħ in J·s, only used to cross-check the pinned cm⁻¹·ps value.
    pub const HBAR_J_S: f64 = 1.054571817e-34;
}

use constants::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Energy,
    Time,
    AngularFrequency,
    Length,
    Dipole,
    Temperature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    Wavenumber,
    MilliElectronVolt,
    Joule,
    Picosecond,
    Femtosecond,
    Nanosecond,
    RadPerPicosecond,
    Angstrom,
    Debye,
    Kelvin,
}

impl Unit {
    pub fn dimension(self) -> Dimension {
        match self {
            Unit::Wavenumber | Unit::MilliElectronVolt | Unit::Joule => Dimension::Energy,
            Unit::Picosecond | Unit::Femtosecond | Unit::Nanosecond => Dimension::Time,
            Unit::RadPerPicosecond => Dimension::AngularFrequency,
            Unit::Angstrom => Dimension::Length,
            Unit::Debye => Dimension::Dipole,
            Unit::Kelvin => Dimension::Temperature,
        }
    }

    /// Multiplier taking a value in this unit to the canonical unit.
    fn to_canonical(self) -> f64 {
        match self {
            Unit::Wavenumber => 1.0,
            Unit::MilliElectronVolt => CM1_PER_MEV,
            Unit::Joule => CM1_PER_JOULE,
            Unit::Picosecond => 1.0,
            Unit::Femtosecond => 1e-3,
            Unit::Nanosecond => 1e3,
            Unit::RadPerPicosecond | Unit::Angstrom | Unit::Debye | Unit::Kelvin => 1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Unit::Wavenumber => "cm^-1",
            Unit::MilliElectronVolt => "meV",
            Unit::Joule => "J",
            Unit::Picosecond => "ps",
            Unit::Femtosecond => "fs",
            Unit::Nanosecond => "ns",
            Unit::RadPerPicosecond => "rad/ps",
            Unit::Angstrom => "angstrom",
            Unit::Debye => "D",
            Unit::Kelvin => "K",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub const fn new(value: f64, unit: Unit) -> Self {
        Quantity { value, unit }
    }

    pub fn convert(self, target: Unit) -> Result<Quantity> {
        convert(self, target)
    }

    /// Value expressed in the canonical unit of its dimension.
    pub fn canonical(self) -> f64 {
        self.value * self.unit.to_canonical()
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit)
    }
}

pub fn convert(q: Quantity, target: Unit) -> Result<Quantity> {
    if q.unit.dimension() != target.dimension() {
        return Err(Error::IncompatibleUnits {
            from: q.unit.symbol(),
            to: target.symbol(),
        });
    }
    if q.unit == target {
        return Ok(q);
    }
    Ok(Quantity::new(
        q.value * q.unit.to_canonical() / target.to_canonical(),
        target,
    ))
}

/// k_B·T in cm⁻¹. Zero temperature gives zero; callers treat coth as 1 there.
pub fn thermal_energy(temperature_k: f64) -> Result<Quantity> {
    check_temperature(temperature_k)?;
    Ok(Quantity::new(
        KB_CM1_PER_K * temperature_k,
        Unit::Wavenumber,
    ))
}

pub(crate) fn check_temperature(temperature_k: f64) -> Result<()> {
    if !(temperature_k >= 0.0) || !temperature_k.is_finite() {
        return Err(Error::invalid(
            "temperature",
            format!("must be finite and >= 0 K, got {temperature_k}"),
        ));
    }
    Ok(())
}

/// Energy in cm⁻¹ → angular frequency in rad/ps.
#[inline]
pub fn energy_to_rate(energy_cm1: f64) -> f64 {
    energy_cm1 / HBAR_CM1_PS
}

/// Angular frequency in rad/ps → energy in cm⁻¹.
#[inline]
pub fn rate_to_energy(omega: f64) -> f64 {
    omega * HBAR_CM1_PS
}

/// (Δμ)²/(2πε₀r³) expressed as an angular frequency, Δμ in Debye and r in Å.
pub fn dipole_coupling_rate(delta_mu_debye: f64, radius_angstrom: f64) -> f64 {
    let mu = delta_mu_debye * DEBYE_C_M;
    let r = radius_angstrom * ANGSTROM_M;
    let joules = mu * mu / (2.0 * std::f64::consts::PI * EPS0_F_PER_M * r * r * r);
    energy_to_rate(joules * CM1_PER_JOULE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn mev_to_wavenumber() {
        let q = convert(
            Quantity::new(1.0, Unit::MilliElectronVolt),
            Unit::Wavenumber,
        )
        .unwrap();
        assert!((q.value - 8.0655).abs() < 1e-4);
        let z = convert(
            Quantity::new(0.0, Unit::Wavenumber),
            Unit::MilliElectronVolt,
        )
        .unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn picoseconds_to_femtoseconds() {
        let q = convert(Quantity::new(1.0, Unit::Picosecond), Unit::Femtosecond).unwrap();
        assert_relative_eq!(q.value, 1000.0, max_relative = 1e-15);
    }

    #[test]
    fn incompatible_dimensions_name_both_units() {
        let err = convert(Quantity::new(1.0, Unit::Picosecond), Unit::Wavenumber).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("ps") && msg.contains("cm^-1"), "{msg}");
    }

    #[test]
    fn thermal_energy_values() {
        let e300 = thermal_energy(300.0).unwrap().value;
        assert!((e300 - 208.5).abs() < 0.1);
        assert_eq!(thermal_energy(0.0).unwrap().value, 0.0);
        assert_relative_eq!(thermal_energy(600.0).unwrap().value, 2.0 * e300);
        assert!(thermal_energy(-1.0).is_err());
        assert!(thermal_energy(f64::NAN).is_err());
    }

    #[test]
    fn hbar_matches_codata_to_four_figures() {
        let hbar = HBAR_J_S * CM1_PER_JOULE * 1e12;
        assert!((hbar - 5.309).abs() < 5e-4, "{hbar}");
        assert!((HBAR_CM1_PS - 5.309).abs() < 5e-4);
    }

    #[test]
    fn dipole_rate_scale() {
        // 1 D² over 2πε₀ (1 Å)³ is 2.0e-19 J ≈ 10068 cm⁻¹
        let w = dipole_coupling_rate(1.0, 1.0);
        assert_relative_eq!(rate_to_energy(w), 10068.2, max_relative = 1e-4);
        assert_relative_eq!(
            dipole_coupling_rate(1.0, 3.0),
            w / 27.0,
            max_relative = 1e-14
        );
    }

    const UNITS: [Unit; 10] = [
        Unit::Wavenumber,
        Unit::MilliElectronVolt,
        Unit::Joule,
        Unit::Picosecond,
        Unit::Femtosecond,
        Unit::Nanosecond,
        Unit::RadPerPicosecond,
        Unit::Angstrom,
        Unit::Debye,
        Unit::Kelvin,
    ];

    proptest! {
        #[test]
        fn round_trip(v in -1e6f64..1e6, i in 0usize..10, j in 0usize..10) {
            let (a, b) = (UNITS[i], UNITS[j]);
            let q = Quantity::new(v, a);
            match convert(q, b) {
                Ok(there) => {
                    let back = convert(there, a).unwrap();
                    prop_assert!((back.value - v).abs() <= 1e-12 * v.abs().max(1e-300));
                }
                Err(_) => prop_assert_ne!(a.dimension(), b.dimension()),
            }
        }

        #[test]
        fn linear(x in -1e3f64..1e3, y in -1e3f64..1e3, i in 0usize..3, j in 0usize..3) {
            let (a, b) = (UNITS[i], UNITS[j]);
            let cx = convert(Quantity::new(x, a), b).unwrap().value;
            let cy = convert(Quantity::new(y, a), b).unwrap().value;
            let sum = convert(Quantity::new(x + y, a), b).unwrap().value;
            prop_assert!((sum - (cx + cy)).abs() <= 1e-12 * (cx.abs() + cy.abs()).max(f64::MIN_POSITIVE));
        }
    }
}
