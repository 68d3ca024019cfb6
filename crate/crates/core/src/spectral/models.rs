//! Closed-form spectral densities of the five continuum environments.

use num_complex::Complex64;

use crate::dielectric::{check_omega, Dielectric, StaticDielectric};
use crate::error::{Error, Result};
use crate::reaction_field::chi_ratio;
use crate::units::dipole_coupling_rate;

/// Geometry and media of one continuum environment.
///
/// Radii are in Å. The cavity of the hollow protein is vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    /// Chromophore in a cavity of radius `a` directly inside the solvent.
    FreeChromophore {
        a: f64,
        cavity: StaticDielectric,
        solvent: Dielectric,
    },
    /// Chromophore cavity inside an unbounded protein.
    InfiniteProtein {
        a: f64,
        cavity: StaticDielectric,
        protein: Dielectric,
    },
    /// Chromophore at the centre of a rigid protein sphere of radius `b`.
    StaticProteinSphere {
        b: f64,
        protein: StaticDielectric,
        solvent: Dielectric,
    },
    /// Vacuum cavity of radius `a` in a relaxing protein of radius `b`.
    HollowProtein {
        a: f64,
        b: f64,
        protein: Dielectric,
        solvent: Dielectric,
    },
    /// Rigid protein of radius `b` wrapped in bound water out to `c`.
    BoundWaterShell {
        b: f64,
        c: f64,
        protein: StaticDielectric,
        bound: Dielectric,
        solvent: Dielectric,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentModel {
    kind: ModelKind,
    delta_mu: f64,
}

fn check_radius(name: &'static str, r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be > 0 angstrom, got {r}"),
        ))
    }
}

impl EnvironmentModel {
    pub fn new(kind: ModelKind, delta_mu_debye: f64) -> Result<Self> {
        if !(delta_mu_debye >= 0.0) || !delta_mu_debye.is_finite() {
            return Err(Error::invalid(
                "delta_mu",
                format!("must be >= 0 D, got {delta_mu_debye}"),
            ));
        }
        match kind {
            ModelKind::FreeChromophore { a, .. } | ModelKind::InfiniteProtein { a, .. } => {
                check_radius("a", a)?
            }
            ModelKind::StaticProteinSphere { b, .. } => check_radius("b", b)?,
            ModelKind::HollowProtein { a, b, .. } => {
                check_radius("a", a)?;
                check_radius("b", b)?;
                if a >= b {
                    return Err(Error::invalid("b", format!("must exceed a = {a}, got {b}")));
                }
            }
            ModelKind::BoundWaterShell { b, c, .. } => {
                check_radius("b", b)?;
                check_radius("c", c)?;
                if b >= c {
                    return Err(Error::invalid("c", format!("must exceed b = {b}, got {c}")));
                }
            }
        }
        Ok(EnvironmentModel {
            kind,
            delta_mu: delta_mu_debye,
        })
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn delta_mu(&self) -> f64 {
        self.delta_mu
    }

    /// Conventional model number, 1 to 5.
    pub fn number(&self) -> u8 {
        match self.kind {
            ModelKind::FreeChromophore { .. } => 1,
            ModelKind::InfiniteProtein { .. } => 2,
            ModelKind::StaticProteinSphere { .. } => 3,
            ModelKind::HollowProtein { .. } => 4,
            ModelKind::BoundWaterShell { .. } => 5,
        }
    }

    /// Radius entering the (Δμ)²/(2πε₀r³ħ) prefactor.
    pub fn prefactor_radius(&self) -> f64 {
        match self.kind {
            ModelKind::FreeChromophore { a, .. }
            | ModelKind::InfiniteProtein { a, .. }
            | ModelKind::HollowProtein { a, .. } => a,
            ModelKind::StaticProteinSphere { b, .. } | ModelKind::BoundWaterShell { b, .. } => b,
        }
    }

    fn media(&self) -> Vec<Dielectric> {
        match self.kind {
            ModelKind::FreeChromophore {
                cavity, solvent, ..
            } => vec![cavity.into(), solvent],
            ModelKind::InfiniteProtein {
                cavity, protein, ..
            } => vec![cavity.into(), protein],
            ModelKind::StaticProteinSphere {
                protein, solvent, ..
            } => vec![protein.into(), solvent],
            ModelKind::HollowProtein {
                protein, solvent, ..
            } => vec![protein, solvent],
            ModelKind::BoundWaterShell {
                protein,
                bound,
                solvent,
                ..
            } => vec![protein.into(), bound, solvent],
        }
    }

    /// Frequencies (rad/ps) around which J changes shape.
    pub fn rates(&self) -> Vec<f64> {
        media_rates(&self.media())
    }

    pub fn evaluate(&self, omega: f64) -> Result<f64> {
        j_model(self, omega)
    }
}

/// 1/τ_D and ε_s/(ε_∞ τ_D) for every relaxing medium. The effective
/// relaxation rate of any screened combination lies between the two.
pub(crate) fn media_rates(media: &[Dielectric]) -> Vec<f64> {
    let mut rates = Vec::new();
    for d in media {
        if let Dielectric::Debye(db) = d {
            if db.strength() > 0.0 {
                let r = 1.0 / db.tau_d();
                rates.push(r);
                rates.push(r * db.eps_static() / db.eps_inf());
            }
        }
    }
    rates.sort_by(f64::total_cmp);
    rates
}

/// (ε_out − ε_in)/(2ε_out + ε_in) with the singular-denominator check.
pub(crate) fn single_interface(
    eps_in: Complex64,
    eps_out: Complex64,
    omega: f64,
) -> Result<Complex64> {
    let den = 2.0 * eps_out + eps_in;
    let scale = 2.0 * eps_out.norm() + eps_in.norm();
    if !(den.norm() > 1e-14 * scale) {
        return Err(Error::SingularConfiguration {
            omega,
            magnitude: den.norm(),
        });
    }
    Ok((eps_out - eps_in) / den)
}

/// Im of a ratio of passive responses; clamps the roundoff-sized negatives
/// that appear when the true value is zero.
fn loss_part(z: Complex64) -> f64 {
    z.im.max(0.0)
}

pub fn j_model(m: &EnvironmentModel, omega: f64) -> Result<f64> {
    check_omega(omega)?;
    if omega == 0.0 || m.delta_mu == 0.0 {
        return Ok(0.0);
    }
    let p = dipole_coupling_rate(m.delta_mu, m.prefactor_radius());
    let ratio = match m.kind {
        ModelKind::FreeChromophore {
            cavity, solvent, ..
        } => single_interface(Complex64::from(cavity.eps()), solvent.eval(omega), omega)?,
        ModelKind::InfiniteProtein {
            cavity, protein, ..
        } => single_interface(Complex64::from(cavity.eps()), protein.eval(omega), omega)?,
        ModelKind::StaticProteinSphere {
            protein, solvent, ..
        } => single_interface(Complex64::from(protein.eps()), solvent.eval(omega), omega)?,
        ModelKind::HollowProtein {
            a,
            b,
            protein,
            solvent,
        } => chi_ratio(
            Complex64::from(1.0),
            protein.eval(omega),
            solvent.eval(omega),
            a,
            b,
            omega,
        )?,
        ModelKind::BoundWaterShell {
            b,
            c,
            protein,
            bound,
            solvent,
        } => chi_ratio(
            Complex64::from(protein.eps()),
            bound.eval(omega),
            solvent.eval(omega),
            b,
            c,
            omega,
        )?,
    };
    Ok(p * loss_part(ratio))
}

/// First-order solvent contribution of the hollow-protein density for a
/// small cavity: `P(b)·Im[9ε_p/(2ε_p+1)² · (ε_s−ε_p)/(2ε_s+ε_p)]`.
///
/// Passing the optical protein constant as a static medium gives the ohmic
/// solvent density of a rigid protein scaled by the cavity screening factor.
pub fn solvent_term(
    b: f64,
    protein: &Dielectric,
    solvent: &Dielectric,
    delta_mu: f64,
    omega: f64,
) -> Result<f64> {
    check_omega(omega)?;
    check_radius("b", b)?;
    let ep = protein.eval(omega);
    let screen = 9.0 * ep / ((2.0 * ep + 1.0) * (2.0 * ep + 1.0));
    let k = single_interface(ep, solvent.eval(omega), omega)?;
    Ok(dipole_coupling_rate(delta_mu, b) * (screen * k).im)
}

/// First-order bound-water contribution of the shell density in the shell
/// thickness δ = (c − b)/b:
/// `P(b)·δ·Im[3ε_p(ε_b − ε_s)(2ε_s + ε_b)/(ε_b (2ε_s + ε_p)²)]`.
pub fn bound_water_term(
    b: f64,
    c: f64,
    protein: StaticDielectric,
    bound: &Dielectric,
    solvent: &Dielectric,
    delta_mu: f64,
    omega: f64,
) -> Result<f64> {
    check_omega(omega)?;
    check_radius("b", b)?;
    if !(c >= b) {
        return Err(Error::invalid("c", format!("must be >= b = {b}, got {c}")));
    }
    let ep = protein.eps();
    let eb = bound.eval(omega);
    let es = solvent.eval(omega);
    let d = 2.0 * es + ep;
    let bracket = 3.0 * ep * (eb - es) * (2.0 * es + eb) / (eb * d * d);
    Ok(dipole_coupling_rate(delta_mu, b) * (c - b) / b * bracket.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dielectric::DebyeDielectric;
    use proptest::prelude::*;

    fn water() -> Dielectric {
        DebyeDielectric::WATER.into()
    }
    fn protein() -> Dielectric {
        DebyeDielectric::PROTEIN_DEFAULT.into()
    }
    fn vacuum() -> StaticDielectric {
        StaticDielectric::VACUUM
    }

    fn model(kind: ModelKind) -> EnvironmentModel {
        EnvironmentModel::new(kind, 1.0).unwrap()
    }

    #[test]
    fn zero_contrast_sphere_is_silent() {
        let st = StaticDielectric::new(6.0).unwrap();
        let m = model(ModelKind::StaticProteinSphere {
            b: 10.0,
            protein: st,
            solvent: st.into(),
        });
        for w in [1e-3, 0.1, 10.0] {
            assert_eq!(j_model(&m, w).unwrap(), 0.0);
        }
    }

    #[test]
    fn free_chromophore_value() {
        // (Δμ)²/(2πε₀a³ħ) · Im[(ε−1)/(2ε+1)] at ω = 1/τ_D for water
        let m = model(ModelKind::FreeChromophore {
            a: 3.0,
            cavity: vacuum(),
            solvent: water(),
        });
        let w = 1.0 / 8.2;
        let e = Complex64::new(4.21 + 74.09 / 2.0, 74.09 / 2.0);
        let expected = dipole_coupling_rate(1.0, 3.0) * ((e - 1.0) / (2.0 * e + 1.0)).im;
        assert!((j_model(&m, w).unwrap() - expected).abs() < 1e-13 * expected);
    }

    #[test]
    fn hollow_protein_limits() {
        // small cavity: infinite protein
        let m4 = model(ModelKind::HollowProtein {
            a: 3.0,
            b: 3000.0,
            protein: protein(),
            solvent: water(),
        });
        let m2 = model(ModelKind::InfiniteProtein {
            a: 3.0,
            cavity: vacuum(),
            protein: protein(),
        });
        let tp = 10_000.0;
        for k in 0..=20 {
            let w = 10f64.powf(-1.0 + 0.1 * k as f64) / tp;
            let (j4, j2) = (j_model(&m4, w).unwrap(), j_model(&m2, w).unwrap());
            assert!((j4 - j2).abs() < 1e-5 * j2, "w={w}");
        }
        // protein identical to solvent: free chromophore
        let m4 = model(ModelKind::HollowProtein {
            a: 3.0,
            b: 10.0,
            protein: water(),
            solvent: water(),
        });
        let m1 = model(ModelKind::FreeChromophore {
            a: 3.0,
            cavity: vacuum(),
            solvent: water(),
        });
        for w in [1e-3, 0.1, 1.0, 30.0] {
            let (j4, j1) = (j_model(&m4, w).unwrap(), j_model(&m1, w).unwrap());
            assert!((j4 - j1).abs() < 1e-12 * j1);
        }
    }

    #[test]
    fn thin_shell_recovers_static_sphere() {
        let ep = StaticDielectric::new(2.0).unwrap();
        let m5 = model(ModelKind::BoundWaterShell {
            b: 10.0,
            c: 10.0 * (1.0 + 1e-6),
            protein: ep,
            bound: DebyeDielectric::BOUND_WATER_DEFAULT.into(),
            solvent: water(),
        });
        let m3 = model(ModelKind::StaticProteinSphere {
            b: 10.0,
            protein: ep,
            solvent: water(),
        });
        for w in [1e-4, 1e-2, 0.1, 1.0, 100.0] {
            let (j5, j3) = (j_model(&m5, w).unwrap(), j_model(&m3, w).unwrap());
            assert!((j5 - j3).abs() < 1e-4 * j3, "w={w}");
        }
    }

    #[test]
    fn bound_water_term_is_first_order() {
        let ep = StaticDielectric::new(2.0).unwrap();
        let bw: Dielectric = DebyeDielectric::BOUND_WATER_DEFAULT.into();
        let w = 0.02;
        let j3 = j_model(
            &model(ModelKind::StaticProteinSphere {
                b: 10.0,
                protein: ep,
                solvent: water(),
            }),
            w,
        )
        .unwrap();
        let residual = |delta: f64| {
            let c = 10.0 * (1.0 + delta);
            let m5 = model(ModelKind::BoundWaterShell {
                b: 10.0,
                c,
                protein: ep,
                bound: bw,
                solvent: water(),
            });
            let j5 = j_model(&m5, w).unwrap();
            (j5 - j3 - bound_water_term(10.0, c, ep, &bw, &water(), 1.0, w).unwrap()).abs()
        };
        let ratio = residual(1e-3) / residual(5e-4);
        assert!(ratio > 3.5 && ratio < 4.5, "{ratio}");
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(EnvironmentModel::new(
            ModelKind::HollowProtein {
                a: 5.0,
                b: 5.0,
                protein: protein(),
                solvent: water()
            },
            1.0
        )
        .is_err());
        assert!(EnvironmentModel::new(
            ModelKind::FreeChromophore {
                a: -1.0,
                cavity: vacuum(),
                solvent: water()
            },
            1.0
        )
        .is_err());
        let m = model(ModelKind::FreeChromophore {
            a: 3.0,
            cavity: vacuum(),
            solvent: water(),
        });
        assert!(j_model(&m, -1.0).is_err());
        assert_eq!(m.number(), 1);
    }

    fn debye() -> impl Strategy<Value = Dielectric> {
        (1.0f64..90.0, 0.0f64..1.0, -2.0f64..4.0).prop_map(|(es, f, lt)| {
            DebyeDielectric::new(es, 1.0 + f * (es - 1.0), 10f64.powf(lt))
                .unwrap()
                .into()
        })
    }

    fn any_model() -> impl Strategy<Value = EnvironmentModel> {
        (
            0usize..5,
            debye(),
            debye(),
            debye(),
            1.0f64..20.0,
            1.01f64..5.0,
            1.0f64..10.0,
            0.0f64..5.0,
        )
            .prop_map(|(i, d1, d2, d3, r, k, eps, mu)| {
                let st = StaticDielectric::new(eps).unwrap();
                let kind = match i {
                    0 => ModelKind::FreeChromophore {
                        a: r,
                        cavity: st,
                        solvent: d1,
                    },
                    1 => ModelKind::InfiniteProtein {
                        a: r,
                        cavity: st,
                        protein: d1,
                    },
                    2 => ModelKind::StaticProteinSphere {
                        b: r,
                        protein: st,
                        solvent: d1,
                    },
                    3 => ModelKind::HollowProtein {
                        a: r,
                        b: r * k,
                        protein: d1,
                        solvent: d2,
                    },
                    _ => ModelKind::BoundWaterShell {
                        b: r,
                        c: r * k,
                        protein: st,
                        bound: d2,
                        solvent: d3,
                    },
                };
                EnvironmentModel::new(kind, mu).unwrap()
            })
    }

    proptest! {
        #[test]
        fn nonnegative_and_zero_at_origin(m in any_model(), lw in -6.0f64..4.0) {
            prop_assert_eq!(j_model(&m, 0.0).unwrap(), 0.0);
            prop_assert!(j_model(&m, 10f64.powf(lw)).unwrap() >= 0.0);
        }

        #[test]
        fn ohmic_at_low_frequency(m in any_model()) {
            let slowest = m.rates().first().copied();
            if let Some(r) = slowest {
                let w1 = 1e-6 * r;
                let w2 = 1e-8 * r;
                let s1 = j_model(&m, w1).unwrap() / w1;
                let s2 = j_model(&m, w2).unwrap() / w2;
                prop_assert!((s1 - s2).abs() <= 1e-6 * s1.abs().max(1e-300) + 1e-300);
            }
        }
    }
}
