//! Reaction field of a point dipole at the centre of a cavity wrapped in one
//! dielectric shell and embedded in a bulk medium.
//!
//! Only the l = 1 multipole channel is excited by a centred dipole. In each
//! region the potential is `(A r + B / r²) cos θ`; with `B_c = μ` and
//! `A_e = 0`, continuity of φ and of ε ∂φ/∂r at `r = a` and `r = b` fixes the
//! remaining four coefficients. The uniform field left inside the cavity is
//! the reaction field `R = χ μ` with `χ = −A_c / μ`.
//!
//! χ is carried as a dimensionless ratio together with the cavity radius:
//! `χ = 2 · ratio / a³` (Å⁻³), which keeps the dielectric algebra well
//! scaled independently of the geometry.

use num_complex::Complex64;

use crate::dielectric::{check_omega, Dielectric};
use crate::error::{Error, Result};
use crate::units::constants::HBAR_CM1_PS;
use crate::units::dipole_coupling_rate;

/// Relative size below which a denominator counts as zero.
const SINGULAR_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeRegionGeometry {
    cavity_radius: f64,
    shell_radius: f64,
    pub eps_cavity: Dielectric,
    pub eps_shell: Dielectric,
    pub eps_bulk: Dielectric,
}

impl ThreeRegionGeometry {
    pub fn new(
        cavity_radius: f64,
        shell_radius: f64,
        eps_cavity: Dielectric,
        eps_shell: Dielectric,
        eps_bulk: Dielectric,
    ) -> Result<Self> {
        if !(cavity_radius > 0.0) || !cavity_radius.is_finite() {
            return Err(Error::invalid(
                "cavity_radius",
                format!("must be > 0 angstrom, got {cavity_radius}"),
            ));
        }
        if !(shell_radius > cavity_radius) || !shell_radius.is_finite() {
            return Err(Error::invalid(
                "shell_radius",
                format!("must exceed the cavity radius {cavity_radius}, got {shell_radius}"),
            ));
        }
        Ok(ThreeRegionGeometry {
            cavity_radius,
            shell_radius,
            eps_cavity,
            eps_shell,
            eps_bulk,
        })
    }

    pub fn cavity_radius(&self) -> f64 {
        self.cavity_radius
    }

    pub fn shell_radius(&self) -> f64 {
        self.shell_radius
    }

    /// Same dielectrics, both radii multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(
            self.cavity_radius * s,
            self.shell_radius * s,
            self.eps_cavity,
            self.eps_shell,
            self.eps_bulk,
        )
    }

    fn permittivities(&self, omega: f64) -> (Complex64, Complex64, Complex64) {
        (
            self.eps_cavity.eval(omega),
            self.eps_shell.eval(omega),
            self.eps_bulk.eval(omega),
        )
    }
}

/// Change in the chromophore dipole on excitation, in Debye.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleSource {
    delta_mu: f64,
}

impl DipoleSource {
    pub fn new(delta_mu_debye: f64) -> Result<Self> {
        if !(delta_mu_debye >= 0.0) || !delta_mu_debye.is_finite() {
            return Err(Error::invalid(
                "delta_mu",
                format!("must be >= 0 D, got {delta_mu_debye}"),
            ));
        }
        Ok(DipoleSource {
            delta_mu: delta_mu_debye,
        })
    }

    pub fn delta_mu(&self) -> f64 {
        self.delta_mu
    }
}

/// Reaction-field susceptibility `χ = 2·ratio/a³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibility {
    pub ratio: Complex64,
    pub cavity_radius: f64,
}

impl Susceptibility {
    /// χ in Å⁻³.
    pub fn value(&self) -> Complex64 {
        self.ratio * (2.0 / self.cavity_radius.powi(3))
    }
}

/// Dimensionless bracket of the closed-form susceptibility for raw
/// permittivity values. `a` and `b` need not be ordered here, which lets the
/// singular path be exercised directly.
pub(crate) fn chi_ratio(
    eps_c: Complex64,
    eps_p: Complex64,
    eps_e: Complex64,
    a: f64,
    b: f64,
    omega: f64,
) -> Result<Complex64> {
    let a3 = a * a * a;
    let b3 = b * b * b;
    let num =
        (eps_p + 2.0 * eps_c) * (eps_e - eps_p) * a3 + (eps_p - eps_c) * (2.0 * eps_e + eps_p) * b3;
    let lead = (2.0 * eps_p + eps_c) * (2.0 * eps_e + eps_p) * b3;
    let den = 2.0 * (eps_p - eps_c) * (eps_e - eps_p) * a3 + lead;
    let scale = lead
        .norm()
        .max((2.0 * (eps_p - eps_c) * (eps_e - eps_p) * a3).norm());
    if !(den.norm() > SINGULAR_THRESHOLD * scale) {
        return Err(Error::SingularConfiguration {
            omega,
            magnitude: den.norm(),
        });
    }
    Ok(num / den)
}

/// Closed-form susceptibility of the cavity/shell/bulk stack at `omega`.
pub fn chi_closed_form(g: &ThreeRegionGeometry, omega: f64) -> Result<Susceptibility> {
    check_omega(omega)?;
    let (ec, ep, ee) = g.permittivities(omega);
    let ratio = chi_ratio(ec, ep, ee, g.cavity_radius, g.shell_radius, omega)?;
    Ok(Susceptibility {
        ratio,
        cavity_radius: g.cavity_radius,
    })
}

/// Susceptibility from the boundary-value problem, solved by Gaussian
/// elimination with partial pivoting. Independent of [`chi_closed_form`].
pub fn chi_linear_solve(g: &ThreeRegionGeometry, omega: f64) -> Result<Susceptibility> {
    check_omega(omega)?;
    let (ec, ep, ee) = g.permittivities(omega);
    // Lengths in units of the cavity radius keep the matrix entries O(1).
    let beta = g.shell_radius / g.cavity_radius;
    let beta3 = beta * beta * beta;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mu = one;
    // Unknowns x = (A_c, A_p, B_p, B_e), radius a = 1.
    // Unknowns x = (A_c, A_p, B_p, B_e/β³), radius a = 1. Scaling B_e by β³
    // keeps the system well conditioned for a distant outer boundary.
    let mut m = [
        // φ continuous at r = a:  A_c + μ = A_p + B_p
        [one, -one, -one, zero],
        // ε ∂φ/∂r continuous at r = a:  ε_c (A_c − 2μ) = ε_p (A_p − 2 B_p)
        [ec, -ep, 2.0 * ep, zero],
        // φ continuous at r = b, divided by β:  A_p + B_p/β³ = B_e/β³
        [zero, one, Complex64::from(1.0 / beta3), -one],
        // ε ∂φ/∂r continuous at r = b:  ε_p (A_p − 2B_p/β³) = −2 ε_e B_e/β³
        [zero, ep, -2.0 * ep / beta3, 2.0 * ee],
    ];
    let mut rhs = [-mu, 2.0 * ec * mu, zero, zero];
    let x = solve_pivoted(&mut m, &mut rhs)?;
    // In reduced units A_c carries a factor a³ relative to μ, so χ a³ = −A_c/μ.
    let ratio = -x[0] / mu / 2.0;
    Ok(Susceptibility {
        ratio,
        cavity_radius: g.cavity_radius,
    })
}

fn solve_pivoted(m: &mut [[Complex64; 4]; 4], rhs: &mut [Complex64; 4]) -> Result<[Complex64; 4]> {
    const N: usize = 4;
    let row_scale: f64 = m
        .iter()
        .map(|r| r.iter().map(|z| z.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    let mut max_pivot = 0.0f64;
    let mut min_pivot = f64::INFINITY;
    for col in 0..N {
        let p = (col..N)
            .max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))
            .unwrap();
        m.swap(col, p);
        rhs.swap(col, p);
        let pivot = m[col][col];
        let mag = pivot.norm();
        max_pivot = max_pivot.max(mag);
        min_pivot = min_pivot.min(mag);
        if !(mag > SINGULAR_THRESHOLD * row_scale) {
            return Err(Error::SingularSystem {
                condition: if mag > 0.0 {
                    row_scale / mag
                } else {
                    f64::INFINITY
                },
            });
        }
        for r in col + 1..N {
            let f = m[r][col] / pivot;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            let pivot_row = m[col];
            for (dst, v) in m[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= f * v;
            }
            let v = rhs[col];
            rhs[r] -= f * v;
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); N];
    for r in (0..N).rev() {
        let mut s = rhs[r];
        for c in r + 1..N {
            s -= m[r][c] * x[c];
        }
        x[r] = s / m[r][r];
    }
    Ok(x)
}

/// J(ω) built from a reaction-field geometry and a dipole change.
///
/// `J = 2 (Δμ)² Im χ / (8πε₀ ħ)`, which with `χ = 2·ratio/a³` is
/// `(Δμ)²/(2πε₀ a³ ħ) · Im ratio`, the same prefactor as the closed-form
/// environment models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactionFieldDensity {
    pub geometry: ThreeRegionGeometry,
    pub source: DipoleSource,
}

impl ReactionFieldDensity {
    pub fn evaluate(&self, omega: f64) -> Result<f64> {
        check_omega(omega)?;
        if omega == 0.0 || self.source.delta_mu == 0.0 {
            return Ok(0.0);
        }
        let chi = chi_closed_form(&self.geometry, omega)?;
        let prefactor = dipole_coupling_rate(self.source.delta_mu, self.geometry.cavity_radius);
        Ok(prefactor * chi.ratio.im)
    }

    pub(crate) fn rates(&self) -> Vec<f64> {
        [
            self.geometry.eps_cavity,
            self.geometry.eps_shell,
            self.geometry.eps_bulk,
        ]
        .iter()
        .filter_map(|d| d.relaxation_rate())
        .collect()
    }
}

pub fn spectral_density_from_chi(
    src: DipoleSource,
    geometry: ThreeRegionGeometry,
) -> crate::spectral::SpectralDensity {
    crate::spectral::SpectralDensity::ReactionField(ReactionFieldDensity {
        geometry,
        source: src,
    })
}

/// Energy scale (Δμ)²/(8πε₀) per Å⁻³ of χ, in cm⁻¹·Å³, for callers that want
/// the reaction-field interaction energy rather than J.
pub fn energy_per_chi(src: DipoleSource) -> f64 {
    dipole_coupling_rate(src.delta_mu, 1.0) * HBAR_CM1_PS / 4.0
}
