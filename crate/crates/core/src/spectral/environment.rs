//! Protein, bound water and bulk solvent around one chromophore.
//!
//! The full density is the hollow-protein model plus the bound-water shell
//! contribution seen through the protein's cavity screening:
//!
//! `J = J₄(a, b; ε_p(ω), ε_s(ω)) + S·[J₅(b, c; ε_p,∞, ε_b(ω), ε_s(ω)) − J₃(b; ε_p,∞, ε_s(ω))]`
//!
//! with `S = 9ε_p,∞/(2ε_p,∞ + 1)²`. In the separated-timescale limit each
//! piece is a single Lorentzian; the parameters returned by
//! [`lorentzian_params`] are the exact first-order coefficients of that
//! expansion.

use crate::dielectric::{check_omega, DebyeDielectric, Dielectric, StaticDielectric};
use crate::error::{Error, Result};
use crate::units::dipole_coupling_rate;

use super::lorentzian::{Component, LorentzianSum, LorentzianTerm};
use super::models::{j_model, media_rates, EnvironmentModel, ModelKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeComponentEnvironment {
    pub protein: DebyeDielectric,
    pub bound: DebyeDielectric,
    pub solvent: DebyeDielectric,
    a: f64,
    b: f64,
    c: f64,
    delta_mu: f64,
}

/// J split by origin, all in rad/ps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentValues {
    pub protein: f64,
    pub bound: f64,
    pub solvent: f64,
}

impl ComponentValues {
    pub fn total(&self) -> f64 {
        self.protein + self.bound + self.solvent
    }
}

impl ThreeComponentEnvironment {
    /// `c == b` is allowed and means no bound-water shell.
    pub fn new(
        protein: DebyeDielectric,
        bound: DebyeDielectric,
        solvent: DebyeDielectric,
        a: f64,
        b: f64,
        c: f64,
        delta_mu: f64,
    ) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::invalid(
                "a",
                format!("must be > 0 angstrom, got {a}"),
            ));
        }
        if !(b > a) || !b.is_finite() {
            return Err(Error::invalid("b", format!("must exceed a = {a}, got {b}")));
        }
        if !(c >= b) || !c.is_finite() {
            return Err(Error::invalid("c", format!("must be >= b = {b}, got {c}")));
        }
        if !(delta_mu >= 0.0) || !delta_mu.is_finite() {
            return Err(Error::invalid(
                "delta_mu",
                format!("must be >= 0 D, got {delta_mu}"),
            ));
        }
        Ok(ThreeComponentEnvironment {
            protein,
            bound,
            solvent,
            a,
            b,
            c,
            delta_mu,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn delta_mu(&self) -> f64 {
        self.delta_mu
    }

    /// Relative shell thickness (c − b)/b.
    pub fn shell_fraction(&self) -> f64 {
        (self.c - self.b) / self.b
    }

    /// Cavity screening 9ε_p,∞/(2ε_p,∞ + 1)² of everything outside the protein.
    pub fn screening(&self) -> f64 {
        let e = self.protein.eps_inf();
        9.0 * e / ((2.0 * e + 1.0) * (2.0 * e + 1.0))
    }

    fn optical_protein(&self) -> StaticDielectric {
        self.protein.optical()
    }

    pub fn hollow_protein(&self) -> EnvironmentModel {
        EnvironmentModel::new(
            ModelKind::HollowProtein {
                a: self.a,
                b: self.b,
                protein: self.protein.into(),
                solvent: self.solvent.into(),
            },
            self.delta_mu,
        )
        .expect("validated geometry")
    }

    pub fn infinite_protein(&self) -> EnvironmentModel {
        EnvironmentModel::new(
            ModelKind::InfiniteProtein {
                a: self.a,
                cavity: StaticDielectric::VACUUM,
                protein: self.protein.into(),
            },
            self.delta_mu,
        )
        .expect("validated geometry")
    }

    pub fn static_protein_sphere(&self) -> EnvironmentModel {
        EnvironmentModel::new(
            ModelKind::StaticProteinSphere {
                b: self.b,
                protein: self.optical_protein(),
                solvent: self.solvent.into(),
            },
            self.delta_mu,
        )
        .expect("validated geometry")
    }

    /// `None` when there is no shell.
    pub fn bound_water_shell(&self) -> Option<EnvironmentModel> {
        (self.c > self.b).then(|| {
            EnvironmentModel::new(
                ModelKind::BoundWaterShell {
                    b: self.b,
                    c: self.c,
                    protein: self.optical_protein(),
                    bound: self.bound.into(),
                    solvent: self.solvent.into(),
                },
                self.delta_mu,
            )
            .expect("validated geometry")
        })
    }

    pub fn components(&self, omega: f64) -> Result<ComponentValues> {
        check_omega(omega)?;
        let j4 = j_model(&self.hollow_protein(), omega)?;
        let j2 = j_model(&self.infinite_protein(), omega)?;
        let bound = match self.bound_water_shell() {
            Some(m5) => {
                let j5 = j_model(&m5, omega)?;
                let j3 = j_model(&self.static_protein_sphere(), omega)?;
                self.screening() * (j5 - j3)
            }
            None => 0.0,
        };
        Ok(ComponentValues {
            protein: j2,
            bound,
            solvent: j4 - j2,
        })
    }

    pub fn evaluate(&self, omega: f64) -> Result<f64> {
        Ok(self.components(omega)?.total().max(0.0))
    }

    pub fn rates(&self) -> Vec<f64> {
        let media: [Dielectric; 3] = [self.protein.into(), self.bound.into(), self.solvent.into()];
        media_rates(&media)
    }
}

/// Three labelled Lorentzians (protein, bound water, solvent).
pub fn lorentzian_params(env: &ThreeComponentEnvironment) -> LorentzianSum {
    let p = &env.protein;
    let s = &env.solvent;
    let bw = &env.bound;
    let epi = p.eps_inf();
    let (eps_ps, eps_ss, eps_si, eps_bs) =
        (p.eps_static(), s.eps_static(), s.eps_inf(), bw.eps_static());
    let pa = dipole_coupling_rate(env.delta_mu, env.a);
    let pb = dipole_coupling_rate(env.delta_mu, env.b);
    let screen = env.screening();

    let tau_p = p.tau_d() * (2.0 * epi + 1.0) / (2.0 * eps_ps + 1.0);
    let alpha_p = pa * 3.0 * p.strength() / ((2.0 * eps_ps + 1.0) * (2.0 * epi + 1.0)) * tau_p;

    let tau_s = s.tau_d() * (2.0 * eps_si + epi) / (2.0 * eps_ss + epi);
    let alpha_s = pb * screen * 3.0 * epi * s.strength()
        / ((2.0 * eps_ss + epi) * (2.0 * eps_si + epi))
        * tau_s;

    let tau_b = bw.tau_d();
    let d = 2.0 * eps_ss + epi;
    let alpha_b = pb
        * screen
        * 3.0
        * epi
        * env.shell_fraction()
        * (eps_bs * eps_bs + 2.0 * eps_ss * eps_ss)
        * bw.strength()
        / (eps_bs * eps_bs * d * d)
        * tau_b;

    LorentzianSum::new(vec![
        LorentzianTerm::labeled(alpha_p, tau_p, Component::Protein).expect("finite"),
        LorentzianTerm::labeled(alpha_b, tau_b, Component::BoundWater).expect("finite"),
        LorentzianTerm::labeled(alpha_s, tau_s, Component::Solvent).expect("finite"),
    ])
    .expect("valid terms")
}

/// α_b/α_s from the shell thickness, the two relaxation times and the
/// static and optical constants.
pub fn bound_to_solvent_ratio(env: &ThreeComponentEnvironment) -> f64 {
    let s = &env.solvent;
    let bw = &env.bound;
    let epi = env.protein.eps_inf();
    let tau_s = s.tau_d() * (2.0 * s.eps_inf() + epi) / (2.0 * s.eps_static() + epi);
    let ebs2 = bw.eps_static() * bw.eps_static();
    let ess = s.eps_static();
    env.shell_fraction()
        * (bw.tau_d() / tau_s)
        * (bw.strength() / s.strength())
        * (ebs2 + 2.0 * ess * ess)
        * (2.0 * s.eps_inf() + epi)
        / (ebs2 * (2.0 * ess + epi))
}

/// The dielectric factor of [`bound_to_solvent_ratio`], i.e. the ratio with
/// the thickness and relaxation-time factors removed.
pub fn bound_to_solvent_dielectric_factor(env: &ThreeComponentEnvironment) -> f64 {
    let s = &env.solvent;
    let bw = &env.bound;
    let epi = env.protein.eps_inf();
    let ebs2 = bw.eps_static() * bw.eps_static();
    let ess = s.eps_static();
    (bw.strength() / s.strength()) * (ebs2 + 2.0 * ess * ess) * (2.0 * s.eps_inf() + epi)
        / (ebs2 * (2.0 * ess + epi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference(c: f64) -> ThreeComponentEnvironment {
        ThreeComponentEnvironment::new(
            DebyeDielectric::PROTEIN_DEFAULT,
            DebyeDielectric::BOUND_WATER_DEFAULT,
            DebyeDielectric::WATER,
            3.0,
            10.0,
            c,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn relaxation_times() {
        let env = ThreeComponentEnvironment::new(
            DebyeDielectric::PROTEIN_DEFAULT,
            DebyeDielectric::BOUND_WATER_DEFAULT,
            DebyeDielectric::WATER,
            3.0,
            10.0,
            14.5,
            1.0,
        )
        .unwrap();
        let l = lorentzian_params(&env);
        let tp = l.term(Component::Protein).unwrap().tau;
        assert_relative_eq!(tp, 10_000.0 * 5.0 / 31.0, max_relative = 1e-12);
        assert_eq!(l.term(Component::BoundWater).unwrap().tau, 40.0);

        let p5 = DebyeDielectric::new(15.0, 5.0, 10_000.0).unwrap();
        let env5 = ThreeComponentEnvironment::new(
            p5,
            DebyeDielectric::BOUND_WATER_DEFAULT,
            DebyeDielectric::WATER,
            3.0,
            10.0,
            14.5,
            1.0,
        )
        .unwrap();
        let ts = lorentzian_params(&env5)
            .term(Component::Solvent)
            .unwrap()
            .tau;
        assert!((ts - 0.681).abs() < 5e-4, "{ts}");
    }

    #[test]
    fn ratio_matches_parameters() {
        let env = reference(14.5);
        let l = lorentzian_params(&env);
        let r = l.term(Component::BoundWater).unwrap().alpha
            / l.term(Component::Solvent).unwrap().alpha;
        assert_relative_eq!(bound_to_solvent_ratio(&env), r, max_relative = 1e-12);
        assert_eq!(bound_to_solvent_ratio(&reference(10.0)), 0.0);
    }

    #[test]
    fn dielectric_factor_order_one() {
        // ε_s,s ≫ ε_b,s ≫ ε_b,i
        let bound = DebyeDielectric::new(20.0, 2.0, 40.0).unwrap();
        let solvent = DebyeDielectric::new(2000.0, 2.0, 8.0).unwrap();
        let protein = DebyeDielectric::new(15.0, 1.0, 10_000.0).unwrap();
        let env =
            ThreeComponentEnvironment::new(protein, bound, solvent, 3.0, 10.0, 14.5, 1.0).unwrap();
        let f = bound_to_solvent_dielectric_factor(&env);
        let guide = 2.0 / 20.0;
        assert!(f / guide < 3.0 && guide / f < 3.0, "{f}");
    }

    #[test]
    fn lorentzian_slope_matches_composite() {
        // scale separation: protein 1.6 ns, bound 40 ps, solvent 0.4 ps
        let env = reference(14.5);
        let l = lorentzian_params(&env);
        let w = 1e-7;
        let slope = env.evaluate(w).unwrap() / w;
        assert!((l.total_alpha() - slope).abs() < 0.3 * slope);
    }

    #[test]
    fn components_sum_to_total() {
        let env = reference(14.5);
        for w in [1e-5, 0.02, 1.0] {
            let c = env.components(w).unwrap();
            assert!(c.protein >= 0.0);
            assert_relative_eq!(c.total(), env.evaluate(w).unwrap(), max_relative = 1e-14);
        }
    }

    #[test]
    fn rejects_bad_radii() {
        let p = DebyeDielectric::PROTEIN_DEFAULT;
        let bw = DebyeDielectric::BOUND_WATER_DEFAULT;
        let w = DebyeDielectric::WATER;
        assert!(ThreeComponentEnvironment::new(p, bw, w, 10.0, 3.0, 14.0, 1.0).is_err());
        assert!(ThreeComponentEnvironment::new(p, bw, w, 3.0, 10.0, 9.0, 1.0).is_err());
    }
}
