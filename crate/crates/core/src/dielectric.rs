//! Frequency-dependent permittivities in the Debye approximation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single-relaxation-time dielectric: ε(ω) = ε_∞ + (ε_s − ε_∞)/(1 − iωτ_D).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DebyeDielectric {
    eps_static: f64,
    eps_inf: f64,
    tau_d: f64,
}

impl DebyeDielectric {
    /// Bulk water at room temperature.
    pub const WATER: DebyeDielectric = DebyeDielectric {
        eps_static: 78.3,
        eps_inf: 4.21,
        tau_d: 8.2,
    };

    /// Tetrahydrofuran.
    pub const THF: DebyeDielectric = DebyeDielectric {
        eps_static: 8.08,
        eps_inf: 2.18,
        tau_d: 3.0,
    };

    /// Default for water bound at a protein surface when a dataset gives none.
    ///
    /// These are not measured values: the static constant is a midpoint
    /// between bulk water and a protein interior, the relaxation time sits in
    /// the 5-50 ps bound-water solvation window.
    pub const BOUND_WATER_DEFAULT: DebyeDielectric = DebyeDielectric {
        eps_static: 40.0,
        eps_inf: 4.21,
        tau_d: 40.0,
    };

    /// Small peptide: static constant 15, optical constant 2, 10 ns relaxation.
    pub const PROTEIN_DEFAULT: DebyeDielectric = DebyeDielectric {
        eps_static: 15.0,
        eps_inf: 2.0,
        tau_d: 10_000.0,
    };

    pub fn new(eps_static: f64, eps_inf: f64, tau_d_ps: f64) -> Result<Self> {
        if !(eps_inf >= 1.0) || !eps_inf.is_finite() {
            return Err(Error::invalid(
                "eps_inf",
                format!("must be >= 1, got {eps_inf}"),
            ));
        }
        if !(eps_static >= eps_inf) || !eps_static.is_finite() {
            return Err(Error::invalid(
                "eps_static",
                format!("must be >= eps_inf ({eps_inf}), got {eps_static}"),
            ));
        }
        if !(tau_d_ps > 0.0) || !tau_d_ps.is_finite() {
            return Err(Error::invalid(
                "tau_d",
                format!("must be > 0 ps, got {tau_d_ps}"),
            ));
        }
        Ok(DebyeDielectric {
            eps_static,
            eps_inf,
            tau_d: tau_d_ps,
        })
    }

    pub fn eps_static(&self) -> f64 {
        self.eps_static
    }

    pub fn eps_inf(&self) -> f64 {
        self.eps_inf
    }

    /// Debye relaxation time in ps.
    pub fn tau_d(&self) -> f64 {
        self.tau_d
    }

    pub fn strength(&self) -> f64 {
        self.eps_static - self.eps_inf
    }

    /// Same as [`permittivity`] but without the sign check, for internal
    /// callers that have already validated ω.
    pub(crate) fn eval(&self, omega: f64) -> Complex64 {
        let wt = omega * self.tau_d;
        let d = 1.0 + wt * wt;
        let s = self.strength();
        Complex64::new(self.eps_inf + s / d, s * wt / d)
    }

    /// Im ε(ω), written out so small values keep full relative precision.
    pub fn loss(&self, omega: f64) -> f64 {
        let wt = omega * self.tau_d;
        self.strength() * wt / (1.0 + wt * wt)
    }

    pub fn as_static(&self) -> StaticDielectric {
        StaticDielectric {
            eps: self.eps_static,
        }
    }

    pub fn optical(&self) -> StaticDielectric {
        StaticDielectric { eps: self.eps_inf }
    }
}

/// Frequency-independent dielectric constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StaticDielectric {
    eps: f64,
}

impl StaticDielectric {
    pub const VACUUM: StaticDielectric = StaticDielectric { eps: 1.0 };

    pub fn new(eps: f64) -> Result<Self> {
        if !(eps >= 1.0) || !eps.is_finite() {
            return Err(Error::invalid("eps", format!("must be >= 1, got {eps}")));
        }
        Ok(StaticDielectric { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

/// Either kind of medium, as used for the regions of a dielectric model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Dielectric {
    Debye(DebyeDielectric),
    Static(StaticDielectric),
}

impl Dielectric {
    pub(crate) fn eval(&self, omega: f64) -> Complex64 {
        match self {
            Dielectric::Debye(d) => d.eval(omega),
            Dielectric::Static(s) => Complex64::new(s.eps, 0.0),
        }
    }

    /// High-frequency (optical) constant; equal to ε for a static medium.
    pub fn eps_inf(&self) -> f64 {
        match self {
            Dielectric::Debye(d) => d.eps_inf,
            Dielectric::Static(s) => s.eps,
        }
    }

    pub fn eps_static(&self) -> f64 {
        match self {
            Dielectric::Debye(d) => d.eps_static,
            Dielectric::Static(s) => s.eps,
        }
    }

    /// Relaxation rate 1/τ_D, if the medium relaxes at all.
    pub fn relaxation_rate(&self) -> Option<f64> {
        match self {
            Dielectric::Debye(d) => Some(1.0 / d.tau_d),
            Dielectric::Static(_) => None,
        }
    }
}

impl From<DebyeDielectric> for Dielectric {
    fn from(d: DebyeDielectric) -> Self {
        Dielectric::Debye(d)
    }
}

impl From<StaticDielectric> for Dielectric {
    fn from(s: StaticDielectric) -> Self {
        Dielectric::Static(s)
    }
}

pub(crate) fn check_omega(omega: f64) -> Result<()> {
    if omega >= 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeFrequency(omega))
    }
}

/// Complex relative permittivity at angular frequency `omega` (rad/ps).
pub fn permittivity(d: &Dielectric, omega: f64) -> Result<Complex64> {
    check_omega(omega)?;
    Ok(d.eval(omega))
}
