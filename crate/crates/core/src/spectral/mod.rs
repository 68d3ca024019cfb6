//! Spectral densities J(ω) in rad/ps.

mod crossover;
mod environment;
mod lorentzian;
mod models;

pub use crossover::{
    classify_regime, crossover_bound_bulk, crossover_protein_solvent, Crossover, Regime,
};
pub use environment::{
    bound_to_solvent_dielectric_factor, bound_to_solvent_ratio, lorentzian_params, ComponentValues,
    ThreeComponentEnvironment,
};
pub use lorentzian::{
    eval_lorentzian, scale_separation_warnings, Component, LorentzianSum, LorentzianTerm,
    ScaleWarning, SCALE_SEPARATION,
};
pub use models::{bound_water_term, j_model, solvent_term, EnvironmentModel, ModelKind};

use crate::dielectric::check_omega;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_to_infinity, Tolerance};
use crate::reaction_field::ReactionFieldDensity;
use crate::units::constants::HBAR_CM1_PS;

/// J sampled on a grid. Linear between nodes, ∝ ω below the first node and
/// ∝ 1/ω above the last one.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity {
    omega: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedDensity {
    pub fn new(omega: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if omega.len() != values.len() {
            return Err(Error::InvalidData(format!(
                "{} frequencies but {} values",
                omega.len(),
                values.len()
            )));
        }
        if omega.len() < 2 {
            return Err(Error::InvalidData("need at least two nodes".into()));
        }
        if !(omega[0] > 0.0)
            || omega.windows(2).any(|w| !(w[1] > w[0]))
            || omega.iter().any(|w| !w.is_finite())
        {
            return Err(Error::InvalidData(
                "frequencies must be positive, finite and strictly increasing".into(),
            ));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidData(format!(
                "J values must be finite and >= 0, got {v}"
            )));
        }
        Ok(TabulatedDensity { omega, values })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.omega
    }

    pub fn evaluate(&self, w: f64) -> f64 {
        let n = self.omega.len();
        if w <= self.omega[0] {
            return self.values[0] * w / self.omega[0];
        }
        if w >= self.omega[n - 1] {
            return self.values[n - 1] * self.omega[n - 1] / w;
        }
        let i = self.omega.partition_point(|&x| x <= w) - 1;
        let (x0, x1) = (self.omega[i], self.omega[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        y0 + (y1 - y0) * (w - x0) / (x1 - x0)
    }
}

/// An evaluatable J(ω).
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralDensity {
    Model(EnvironmentModel),
    Lorentzian(LorentzianSum),
    Tabulated(TabulatedDensity),
    ReactionField(ReactionFieldDensity),
    ThreeComponent(ThreeComponentEnvironment),
}

impl SpectralDensity {
    pub fn evaluate(&self, omega: f64) -> Result<f64> {
        check_omega(omega)?;
        match self {
            SpectralDensity::Model(m) => j_model(m, omega),
            SpectralDensity::Lorentzian(s) => Ok(s.eval(omega)),
            SpectralDensity::Tabulated(t) => Ok(t.evaluate(omega)),
            SpectralDensity::ReactionField(r) => r.evaluate(omega),
            SpectralDensity::ThreeComponent(e) => e.evaluate(omega),
        }
    }

    pub fn as_lorentzian(&self) -> Option<&LorentzianSum> {
        match self {
            SpectralDensity::Lorentzian(s) => Some(s),
            _ => None,
        }
    }

    /// Characteristic frequencies (rad/ps), ascending. Empty when J has no
    /// internal scale (for example J ≡ 0).
    pub fn rates(&self) -> Vec<f64> {
        let mut r = match self {
            SpectralDensity::Model(m) => m.rates(),
            SpectralDensity::Lorentzian(s) => s.rates(),
            SpectralDensity::Tabulated(t) => vec![t.omega[0], *t.omega.last().unwrap()],
            SpectralDensity::ReactionField(rf) => rf.rates(),
            SpectralDensity::ThreeComponent(e) => e.rates(),
        };
        r.sort_by(f64::total_cmp);
        r.dedup();
        r
    }

    /// Points where the quadrature should place panel edges.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = match self {
            SpectralDensity::Tabulated(t) => t.omega.clone(),
            _ => self
                .rates()
                .iter()
                .flat_map(|&r| [0.1 * r, r, 10.0 * r])
                .collect(),
        };
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Upper frequency beyond which J is in its asymptotic tail.
    pub fn tail_start(&self) -> f64 {
        self.rates().last().map_or(1.0, |r| 100.0 * r)
    }

    /// `Err(Divergent)` when J does not decay beyond [`Self::tail_start`].
    pub(crate) fn check_decay(&self) -> Result<()> {
        let w = self.tail_start();
        let j1 = self.evaluate(w)?;
        let j2 = self.evaluate(10.0 * w)?;
        if j1 > 0.0 && j2 >= 0.9 * j1 {
            return Err(Error::Divergent(format!(
                "J does not decay: J({w:e}) = {j1:e}, J({:e}) = {j2:e}",
                10.0 * w
            )));
        }
        Ok(())
    }
}

impl From<EnvironmentModel> for SpectralDensity {
    fn from(m: EnvironmentModel) -> Self {
        SpectralDensity::Model(m)
    }
}

impl From<LorentzianSum> for SpectralDensity {
    fn from(s: LorentzianSum) -> Self {
        SpectralDensity::Lorentzian(s)
    }
}

impl From<ThreeComponentEnvironment> for SpectralDensity {
    fn from(e: ThreeComponentEnvironment) -> Self {
        SpectralDensity::ThreeComponent(e)
    }
}

impl From<TabulatedDensity> for SpectralDensity {
    fn from(t: TabulatedDensity) -> Self {
        SpectralDensity::Tabulated(t)
    }
}

/// E_R = ħ ∫₀^∞ J(ω)/ω dω in cm⁻¹. Closed form for Lorentzian sums.
pub fn reorganization_energy(j: &SpectralDensity) -> Result<f64> {
    match j {
        SpectralDensity::Lorentzian(s) => Ok(s.reorganization_energy()),
        _ => reorganization_energy_quadrature(j, Tolerance::new(1e-8, 0.0)),
    }
}

/// Quadrature route for any backing, including Lorentzian sums.
pub fn reorganization_energy_quadrature(j: &SpectralDensity, tol: Tolerance) -> Result<f64> {
    j.check_decay()?;
    let mut err = None;
    let est = integrate_to_infinity(
        |w| match j.evaluate(w) {
            Ok(v) => v / w,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        0.0,
        &j.breakpoints(),
        tol,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(HBAR_CM1_PS * est?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quadrature_matches_closed_form() {
        let s = LorentzianSum::single(1.0, 1.0).unwrap();
        let j = SpectralDensity::from(s.clone());
        let q = reorganization_energy_quadrature(&j, Tolerance::new(1e-10, 0.0)).unwrap();
        assert_relative_eq!(q, s.reorganization_energy(), max_relative = 1e-8);
        assert!((reorganization_energy(&j).unwrap() - 8.338).abs() < 1.5e-3);
    }

    #[test]
    fn zero_density_has_zero_energy() {
        let j = SpectralDensity::from(LorentzianSum::single(0.0, 1.0).unwrap());
        assert_eq!(reorganization_energy(&j).unwrap(), 0.0);
        assert_eq!(
            reorganization_energy_quadrature(&j, Tolerance::default()).unwrap(),
            0.0
        );
    }

    #[test]
    fn tabulated_tail_integrates() {
        let t = TabulatedDensity::new(vec![1.0, 2.0], vec![1.0, 1.0]).unwrap();
        // ∫ J/ω = ∫₀¹ 1 + ∫₁² 1/ω + ∫₂^∞ 2/ω² = 1 + ln 2 + 1
        let e = reorganization_energy(&SpectralDensity::from(t)).unwrap();
        assert_relative_eq!(e / HBAR_CM1_PS, 2.0 + 2f64.ln(), max_relative = 1e-8);
    }

    #[test]
    fn tabulated_interpolation() {
        let t = TabulatedDensity::new(vec![1.0, 3.0], vec![2.0, 4.0]).unwrap();
        assert_eq!(t.evaluate(0.5), 1.0);
        assert_eq!(t.evaluate(2.0), 3.0);
        assert_eq!(t.evaluate(6.0), 2.0);
        assert_eq!(t.evaluate(0.0), 0.0);
        assert!(TabulatedDensity::new(vec![2.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(TabulatedDensity::new(vec![1.0, 2.0], vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn model_quadrature_matches_lorentzian_identity() {
        // Model 2 with a Debye protein is exactly one Lorentzian.
        use crate::dielectric::{DebyeDielectric, StaticDielectric};
        let d = DebyeDielectric::new(15.0, 2.0, 10.0).unwrap();
        let m = EnvironmentModel::new(
            ModelKind::InfiniteProtein {
                a: 3.0,
                cavity: StaticDielectric::VACUUM,
                protein: d.into(),
            },
            1.0,
        )
        .unwrap();
        let tau = 10.0 * 5.0 / 31.0;
        let alpha = crate::units::dipole_coupling_rate(1.0, 3.0) * 3.0 * 13.0 / (31.0 * 5.0) * tau;
        let exact = LorentzianSum::single(alpha, tau)
            .unwrap()
            .reorganization_energy();
        assert_relative_eq!(
            reorganization_energy(&m.into()).unwrap(),
            exact,
            max_relative = 1e-8
        );
    }
}
