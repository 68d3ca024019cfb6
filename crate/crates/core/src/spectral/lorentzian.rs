use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dielectric::check_omega;
use crate::error::{Error, Result};
use crate::units::constants::HBAR_CM1_PS;

/// Which part of the environment a Lorentzian term stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    Protein,
    BoundWater,
    Solvent,
}

impl Component {
    pub fn as_str(self) -> &'static str {
        match self {
            Component::Protein => "protein",
            Component::BoundWater => "bound",
            Component::Solvent => "solvent",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Component {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "protein" => Ok(Component::Protein),
            "bound" | "bound_water" => Ok(Component::BoundWater),
            "solvent" => Ok(Component::Solvent),
            _ => Err(Error::invalid("component", format!("unknown label `{s}`"))),
        }
    }
}

/// `α ω / (1 + ω²τ²)` with α dimensionless and τ in ps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzianTerm {
    pub alpha: f64,
    pub tau: f64,
    pub label: Option<Component>,
}

impl LorentzianTerm {
    pub fn new(alpha: f64, tau: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::invalid(
                "alpha",
                format!("must be finite and >= 0, got {alpha}"),
            ));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::invalid(
                "tau",
                format!("must be finite and > 0 ps, got {tau}"),
            ));
        }
        Ok(LorentzianTerm {
            alpha,
            tau,
            label: None,
        })
    }

    pub fn labeled(alpha: f64, tau: f64, label: Component) -> Result<Self> {
        Ok(LorentzianTerm {
            label: Some(label),
            ..Self::new(alpha, tau)?
        })
    }

    #[inline]
    pub fn eval(&self, omega: f64) -> f64 {
        let wt = omega * self.tau;
        self.alpha * omega / (1.0 + wt * wt)
    }

    /// πα ħ/(2τ) in cm⁻¹.
    pub fn reorganization_energy(&self) -> f64 {
        std::f64::consts::PI * self.alpha * HBAR_CM1_PS / (2.0 * self.tau)
    }

    /// Frequency of the maximum of J, 1/τ.
    pub fn peak_frequency(&self) -> f64 {
        1.0 / self.tau
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LorentzianSum {
    terms: Vec<LorentzianTerm>,
}

impl LorentzianSum {
    pub fn new(terms: Vec<LorentzianTerm>) -> Result<Self> {
        for t in &terms {
            LorentzianTerm::new(t.alpha, t.tau)?;
        }
        Ok(LorentzianSum { terms })
    }

    pub fn single(alpha: f64, tau: f64) -> Result<Self> {
        Ok(LorentzianSum {
            terms: vec![LorentzianTerm::new(alpha, tau)?],
        })
    }

    pub fn terms(&self) -> &[LorentzianTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, label: Component) -> Option<&LorentzianTerm> {
        self.terms.iter().find(|t| t.label == Some(label))
    }

    pub fn eval(&self, omega: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(omega)).sum()
    }

    /// Σ π α_j ħ/(2τ_j) in cm⁻¹.
    pub fn reorganization_energy(&self) -> f64 {
        self.terms
            .iter()
            .map(LorentzianTerm::reorganization_energy)
            .sum()
    }

    /// Low-frequency slope Σα_j.
    pub fn total_alpha(&self) -> f64 {
        self.terms.iter().map(|t| t.alpha).sum()
    }

    pub fn rates(&self) -> Vec<f64> {
        let mut r: Vec<f64> = self
            .terms
            .iter()
            .filter(|t| t.alpha > 0.0)
            .map(|t| 1.0 / t.tau)
            .collect();
        r.sort_by(f64::total_cmp);
        r
    }
}

pub fn eval_lorentzian(sum: &LorentzianSum, omega: f64) -> Result<f64> {
    check_omega(omega)?;
    Ok(sum.eval(omega))
}

/// Adjacent relaxation times closer than this factor may merge into one peak.
pub const SCALE_SEPARATION: f64 = 1e2;

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleWarning {
    pub slower: Option<Component>,
    pub faster: Option<Component>,
    pub ratio: f64,
}

impl fmt::Display for ScaleWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |c: Option<Component>| c.map_or("unlabelled", Component::as_str);
        write!(
            f,
            "relaxation times of {} and {} differ by only {:.3}x (< {}); their peaks may merge",
            name(self.slower),
            name(self.faster),
            self.ratio,
            SCALE_SEPARATION
        )
    }
}

/// Pairs of adjacent relaxation times (sorted) whose ratio is below
/// [`SCALE_SEPARATION`].
pub fn scale_separation_warnings(sum: &LorentzianSum) -> Vec<ScaleWarning> {
    let mut terms: Vec<&LorentzianTerm> = sum.terms.iter().collect();
    terms.sort_by(|a, b| b.tau.total_cmp(&a.tau));
    terms
        .windows(2)
        .filter_map(|w| {
            let ratio = w[0].tau / w[1].tau;
            (ratio < SCALE_SEPARATION).then(|| ScaleWarning {
                slower: w[0].label,
                faster: w[1].label,
                ratio,
            })
        })
        .collect()
}
