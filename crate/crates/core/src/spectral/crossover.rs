//! Crossover frequencies between environment components and the
//! coherence-regime classifier.

use std::fmt;

use crate::error::{Error, Result};
use crate::units::constants::HBAR_CM1_PS;

use super::lorentzian::{Component, LorentzianSum, LorentzianTerm};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossover {
    /// Separated-timescale estimate, rad/ps.
    pub analytic: f64,
    /// Root of J_slow(ω) = J_fast(ω), if the two terms cross.
    pub numeric: Option<f64>,
}

impl Crossover {
    /// |numeric − analytic|/analytic, when a numeric root exists.
    pub fn relative_gap(&self) -> Option<f64> {
        self.numeric
            .map(|n| (n - self.analytic).abs() / self.analytic)
    }
}

fn labelled(sum: &LorentzianSum, c: Component) -> Result<&LorentzianTerm> {
    sum.term(c)
        .ok_or_else(|| Error::invalid("lorentzian", format!("no term labelled `{c}`")))
}

fn nonzero(t: &LorentzianTerm, c: Component) -> Result<()> {
    if t.alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::NoCrossover(format!("the {c} coupling is zero")))
    }
}

/// `(1/τ_p)·√(α_p/α_s)`: where the protein tail meets the ohmic solvent.
pub fn crossover_protein_solvent(sum: &LorentzianSum) -> Result<Crossover> {
    let p = labelled(sum, Component::Protein)?;
    let s = labelled(sum, Component::Solvent)?;
    nonzero(p, Component::Protein)?;
    nonzero(s, Component::Solvent)?;
    Ok(Crossover {
        analytic: (p.alpha / s.alpha).sqrt() / p.tau,
        numeric: bisect_crossover(p, s),
    })
}

/// `(1/τ_b)·√(α_b/α_s)`: where the bound-water tail meets the ohmic bulk
/// solvent.
pub fn crossover_bound_bulk(sum: &LorentzianSum) -> Result<Crossover> {
    let b = labelled(sum, Component::BoundWater)?;
    let s = labelled(sum, Component::Solvent)?;
    nonzero(b, Component::BoundWater)?;
    nonzero(s, Component::Solvent)?;
    Ok(Crossover {
        analytic: (b.alpha / s.alpha).sqrt() / b.tau,
        numeric: bisect_crossover(b, s),
    })
}

/// Lowest root of `J_x(ω) − J_y(ω)` by bisection on ln ω. The search starts
/// on `[1/τ_slow, 1/τ_fast]` and widens by three decades each side.
fn bisect_crossover(x: &LorentzianTerm, y: &LorentzianTerm) -> Option<f64> {
    let (slow, fast) = if x.tau >= y.tau { (x, y) } else { (y, x) };
    let f = |lw: f64| {
        let w = lw.exp();
        x.eval(w) - y.eval(w)
    };
    let lo = (1e-3 / slow.tau).ln();
    let hi = (1e3 / fast.tau).ln();
    let n = 600;
    let step = (hi - lo) / n as f64;
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=n {
        let b = lo + step * i as f64;
        let fb = f(b);
        if fa == 0.0 {
            return Some(a.exp());
        }
        if fa * fb < 0.0 {
            let (mut l, mut r, mut fl) = (a, b, fa);
            for _ in 0..200 {
                let m = 0.5 * (l + r);
                let fm = f(m);
                if fm == 0.0 {
                    return Some(m.exp());
                }
                if fl * fm < 0.0 {
                    r = m;
                } else {
                    l = m;
                    fl = fm;
                }
                if r - l < 1e-14 {
                    break;
                }
            }
            return Some((0.5 * (l + r)).exp());
        }
        a = b;
        fa = fb;
    }
    None
}

#[derive(Debug, Clone, PartialEq)]
pub enum Regime {
    /// Damped oscillations between the two states.
    Coherent,
    /// Incoherent relaxation.
    Incoherent,
    /// The system stays in its initial state.
    Localized,
    /// α sits exactly on a transition value.
    Boundary(f64),
    /// No closed rule applies to these parameters.
    Indeterminate(String),
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Coherent => f.write_str("coherent"),
            Regime::Incoherent => f.write_str("incoherent"),
            Regime::Localized => f.write_str("localized"),
            Regime::Boundary(a) => write!(f, "boundary (alpha = {a})"),
            Regime::Indeterminate(note) => write!(f, "indeterminate: {note}"),
        }
    }
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Coherent => "coherent",
            Regime::Incoherent => "incoherent",
            Regime::Localized => "localized",
            Regime::Boundary(_) => "boundary",
            Regime::Indeterminate(_) => "indeterminate",
        }
    }
}

/// Spin-boson phase from the ohmic coupling α, temperature, tunnelling
/// splitting Δ (cm⁻¹) and cutoff ω_c (rad/ps). Only the scaling regime
/// Δ ≪ ħω_c at T = 0 has a closed classification.
pub fn classify_regime(alpha: f64, temperature: f64, delta: f64, omega_c: f64) -> Result<Regime> {
    for (name, v) in [
        ("alpha", alpha),
        ("temperature", temperature),
        ("delta", delta),
        ("omega_c", omega_c),
    ] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::invalid(
                name,
                format!("must be finite and >= 0, got {v}"),
            ));
        }
    }
    let scale = delta / (HBAR_CM1_PS * omega_c);
    if !(scale < 0.1) {
        return Ok(Regime::Indeterminate(format!(
            "delta/(hbar omega_c) = {scale:.3} is not small; only numerical results exist here"
        )));
    }
    if temperature > 0.0 {
        return Ok(Regime::Indeterminate(format!(
            "T = {temperature} K > 0; the closed rules hold at zero temperature only"
        )));
    }
    Ok(if alpha < 0.5 {
        Regime::Coherent
    } else if alpha == 0.5 || alpha == 1.0 {
        Regime::Boundary(alpha)
    } else if alpha < 1.0 {
        Regime::Incoherent
    } else {
        Regime::Localized
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pair(ap: f64, tp: f64, as_: f64, ts: f64) -> LorentzianSum {
        LorentzianSum::new(vec![
            LorentzianTerm::labeled(ap, tp, Component::Protein).unwrap(),
            LorentzianTerm::labeled(as_, ts, Component::Solvent).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn equal_couplings_cross_at_protein_rate() {
        let c = crossover_protein_solvent(&pair(2.0, 1000.0, 2.0, 0.5)).unwrap();
        assert_relative_eq!(c.analytic, 1e-3, max_relative = 1e-15);
    }

    #[test]
    fn protein_solvent_value_and_root() {
        let c = crossover_protein_solvent(&pair(100.0, 1000.0, 1.0, 0.5)).unwrap();
        assert_relative_eq!(c.analytic, 0.01, max_relative = 1e-14);
        // exact root of the two-term difference
        let exact = ((100.0f64 - 1.0) / (1.0 * 1e6 - 100.0 * 0.25)).sqrt();
        assert_relative_eq!(c.numeric.unwrap(), exact, max_relative = 1e-10);
        assert!(c.relative_gap().unwrap() < 0.25);
    }

    #[test]
    fn bound_bulk_value() {
        let s = LorentzianSum::new(vec![
            LorentzianTerm::labeled(10.0, 40.0, Component::BoundWater).unwrap(),
            LorentzianTerm::labeled(1.0, 0.3, Component::Solvent).unwrap(),
        ])
        .unwrap();
        let c = crossover_bound_bulk(&s).unwrap();
        assert_relative_eq!(c.analytic, 10f64.sqrt() / 40.0, max_relative = 1e-14);
        assert!(c.relative_gap().unwrap() < 0.25);
        let eq = LorentzianSum::new(vec![
            LorentzianTerm::labeled(1.0, 40.0, Component::BoundWater).unwrap(),
            LorentzianTerm::labeled(1.0, 0.3, Component::Solvent).unwrap(),
        ])
        .unwrap();
        assert_relative_eq!(crossover_bound_bulk(&eq).unwrap().analytic, 1.0 / 40.0);
    }

    #[test]
    fn missing_or_zero_terms() {
        let only = LorentzianSum::new(vec![
            LorentzianTerm::labeled(1.0, 1.0, Component::Protein).unwrap()
        ])
        .unwrap();
        assert!(crossover_protein_solvent(&only).is_err());
        assert!(matches!(
            crossover_protein_solvent(&pair(0.0, 1000.0, 1.0, 0.5)),
            Err(Error::NoCrossover(_))
        ));
        // the slower term never rises above the faster one
        assert_eq!(
            crossover_protein_solvent(&pair(1.0, 1000.0, 5.0, 0.5))
                .unwrap()
                .numeric,
            None
        );
    }

    #[test]
    fn regimes() {
        let wc = 100.0;
        let d = 0.01 * HBAR_CM1_PS * wc;
        assert_eq!(classify_regime(0.3, 0.0, d, wc).unwrap(), Regime::Coherent);
        assert_eq!(
            classify_regime(0.7, 0.0, d, wc).unwrap(),
            Regime::Incoherent
        );
        assert_eq!(classify_regime(1.2, 0.0, d, wc).unwrap(), Regime::Localized);
        assert_eq!(
            classify_regime(0.5, 0.0, d, wc).unwrap(),
            Regime::Boundary(0.5)
        );
        assert_eq!(
            classify_regime(1.0, 0.0, d, wc).unwrap(),
            Regime::Boundary(1.0)
        );
        let big = 6.0 * HBAR_CM1_PS * wc;
        assert!(matches!(
            classify_regime(2.0, 0.0, big, wc).unwrap(),
            Regime::Indeterminate(_)
        ));
        assert!(matches!(
            classify_regime(0.3, 300.0, d, wc).unwrap(),
            Regime::Indeterminate(_)
        ));
        assert!(classify_regime(-0.1, 0.0, d, wc).is_err());
    }
}
