//! Independent-boson dephasing of a two-level chromophore.
//!
//! All frequency integrals run over `[0, ∞)`. The range up to
//! `W = max(50 half-periods, 10 × fastest rate)` is split at the kernel's
//! half-periods and at the density's characteristic frequencies; beyond `W`
//! the smooth part is integrated after the map `ω = W/u` and the oscillating
//! part by extrapolated half-period sums (see [`crate::quadrature`]).

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{
    edges_to_segments, fourier_tail, integrate_segments, integrate_to_infinity, oscillatory_edges,
    oscillatory_integral, Kernel, Segment, Tolerance,
};
use crate::spectral::{reorganization_energy, SpectralDensity};
use crate::units::check_temperature;
use crate::units::constants::{HBAR_CM1_PS, KB_CM1_PER_K};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsOptions {
    pub tol: Tolerance,
    /// Use quadrature even when a closed form exists.
    pub force_quadrature: bool,
}

impl Default for DynamicsOptions {
    fn default() -> Self {
        DynamicsOptions {
            tol: Tolerance::new(1e-7, 0.0),
            force_quadrature: false,
        }
    }
}

/// coth(ħω/2k_BT), equal to 1 at T = 0.
pub fn coth_factor(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    let x = HBAR_CM1_PS * omega / (2.0 * KB_CM1_PER_K * temperature);
    if x > 20.0 {
        1.0
    } else if x < 5e-4 {
        1.0 / x + x / 3.0
    } else {
        1.0 / x.tanh()
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "t",
            format!("must be finite and >= 0 ps, got {t}"),
        ))
    }
}

/// Evaluates J inside quadrature closures, keeping the first error.
struct Guarded<'a> {
    j: &'a SpectralDensity,
    err: RefCell<Option<Error>>,
}

impl<'a> Guarded<'a> {
    fn new(j: &'a SpectralDensity) -> Self {
        Guarded {
            j,
            err: RefCell::new(None),
        }
    }

    fn at(&self, w: f64) -> f64 {
        match self.j.evaluate(w) {
            Ok(v) => v,
            Err(e) => {
                self.err.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    }

    fn finish<T>(self, r: Result<T>) -> Result<T> {
        match self.err.into_inner() {
            Some(e) => Err(e),
            None => r,
        }
    }
}

/// Returns `(h, w)`: half-period panels cover `[0, h]`, Filon panels
/// `[h, w]` and the Fourier tail starts at `w`.
fn split_points(j: &SpectralDensity, t: f64) -> (f64, f64) {
    let r_max = j.rates().last().copied().unwrap_or(1.0);
    let h = 50.0 * PI / t;
    (h.min(10.0 * r_max), h.max(10.0 * r_max))
}

fn middle_segments(j: &SpectralDensity, h: f64, w: f64) -> Vec<Segment> {
    let mut edges = vec![h, w];
    edges.extend(j.breakpoints().into_iter().filter(|&x| x > h && x < w));
    edges.sort_by(f64::total_cmp);
    edges_to_segments(&edges)
}

fn head_segments(j: &SpectralDensity, t: f64, w: f64, kernel: Kernel) -> Vec<Segment> {
    let offset = match kernel {
        Kernel::Cos => 0.5,
        Kernel::Sin => 0.0,
    };
    edges_to_segments(&oscillatory_edges(0.0, w, t, offset, &j.breakpoints()))
}

fn relaxed(tol: Tolerance, scale: f64) -> Tolerance {
    Tolerance::new(tol.rel, tol.abs.max(tol.rel * scale.abs()))
}

fn quad_err(what: &str, t: f64, e: Error) -> Error {
    match e {
        Error::QuadratureFailed {
            error, tolerance, ..
        } => Error::QuadratureFailed {
            what: format!("{what} at t = {t} ps"),
            error,
            tolerance,
        },
        other => other,
    }
}

/// `∫₀^∞ J(ω)/ω · cos ωt dω` in rad/ps.
fn cosine_integral(j: &SpectralDensity, t: f64, tol: Tolerance) -> Result<f64> {
    let g = Guarded::new(j);
    let r = (|| {
        if t == 0.0 {
            return Ok(integrate_to_infinity(|w| g.at(w) / w, 0.0, &j.breakpoints(), tol)?.value);
        }
        let (h, w) = split_points(j, t);
        let head = integrate_segments(
            |x| g.at(x) / x * (x * t).cos(),
            &head_segments(j, t, h, Kernel::Cos),
            tol,
        )?;
        let tt = relaxed(tol, head.value);
        let middle =
            oscillatory_integral(|x| g.at(x) / x, h, w, t, Kernel::Cos, &j.breakpoints(), tt)?;
        let tail = fourier_tail(|x| g.at(x) / x, w, t, Kernel::Cos, tt)?;
        Ok(head.value + middle.value + tail.value)
    })();
    g.finish(r).map_err(|e| quad_err("cosine transform", t, e))
}

/// (x − sin x)/x² with a series near zero.
fn phase_kernel(x: f64) -> f64 {
    if x < 0.1 {
        let x2 = x * x;
        x * (1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0 - x2 * x2 * x2 / 362_880.0)
    } else {
        (x - x.sin()) / (x * x)
    }
}

/// θ(t) = ∫₀^∞ J(ω)(ωt − sin ωt)/ω² dω.
pub fn phase_shift(j: &SpectralDensity, t: f64, opts: &DynamicsOptions) -> Result<f64> {
    check_time(t)?;
    if t == 0.0 || j.rates().is_empty() {
        return Ok(0.0);
    }
    if let (Some(sum), false) = (j.as_lorentzian(), opts.force_quadrature) {
        return Ok(sum
            .terms()
            .iter()
            .map(|term| {
                // t/τ − 1 + e^{−t/τ}
                let x = t / term.tau;
                term.alpha * PI / 2.0 * (x + (-x).exp_m1())
            })
            .sum());
    }
    j.check_decay()?;
    let g = Guarded::new(j);
    let tol = opts.tol;
    let r = (|| {
        let (h, w) = split_points(j, t);
        let head = integrate_segments(
            |x| g.at(x) * t * t * phase_kernel(x * t),
            &head_segments(j, t, h, Kernel::Sin),
            tol,
        )?;
        let tt = relaxed(tol, head.value);
        let mut linear = integrate_to_infinity(|x| g.at(x) / x, w, &[], tt)?.value;
        let mut osc = fourier_tail(|x| g.at(x) / (x * x), w, t, Kernel::Sin, tt)?.value;
        if w > h {
            linear += integrate_segments(|x| g.at(x) / x, &middle_segments(j, h, w), tt)?.value;
            osc += oscillatory_integral(
                |x| g.at(x) / (x * x),
                h,
                w,
                t,
                Kernel::Sin,
                &j.breakpoints(),
                tt,
            )?
            .value;
        }
        Ok(head.value + t * linear - osc)
    })();
    g.finish(r).map_err(|e| quad_err("phase shift", t, e))
}

/// Γ(t, T) = ∫₀^∞ J(ω) coth(ħω/2k_BT)(1 − cos ωt)/ω² dω.
pub fn decoherence_gamma(
    j: &SpectralDensity,
    t: f64,
    temperature: f64,
    opts: &DynamicsOptions,
) -> Result<f64> {
    check_time(t)?;
    check_temperature(temperature)?;
    if t == 0.0 || j.rates().is_empty() {
        return Ok(0.0);
    }
    j.check_decay()?;
    let g = Guarded::new(j);
    let tol = opts.tol;
    let h = |x: f64| g.at(x) * coth_factor(x, temperature) / (x * x);
    let r = (|| {
        let (m, w) = split_points(j, t);
        let head = integrate_segments(
            |x| {
                let s = (0.5 * x * t).sin();
                2.0 * s * s * h(x)
            },
            &head_segments(j, t, m, Kernel::Cos),
            tol,
        )?;
        let tt = relaxed(tol, head.value);
        let mut smooth = integrate_to_infinity(h, w, &[], tt)?.value;
        let mut osc = fourier_tail(h, w, t, Kernel::Cos, tt)?.value;
        if w > m {
            smooth += integrate_segments(h, &middle_segments(j, m, w), tt)?.value;
            osc += oscillatory_integral(h, m, w, t, Kernel::Cos, &j.breakpoints(), tt)?.value;
        }
        Ok(head.value + smooth - osc)
    })();
    g.finish(r)
        .map_err(|e| quad_err("decoherence exponent", t, e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianTime {
    /// From 1/τ_g² = ∫₀^{ω_max} J coth dω, in ps.
    pub quadrature: f64,
    /// ħ/√(2E_R k_BT), reported when k_BT > 5ħω_peak.
    pub high_temperature: Option<f64>,
    /// Upper integration limit ω_max in rad/ps.
    pub cutoff: f64,
}

impl GaussianTime {
    /// The high-temperature closed form when it applies, else the quadrature
    /// value.
    pub fn preferred(&self) -> f64 {
        self.high_temperature.unwrap_or(self.quadrature)
    }
}

/// ħ/√(2E_R k_BT) in ps.
pub fn gaussian_time_high_temperature(reorganization_energy: f64, temperature: f64) -> Result<f64> {
    check_temperature(temperature)?;
    if !(reorganization_energy > 0.0) || temperature == 0.0 {
        return Err(Error::invalid(
            "gaussian time",
            "needs E_R > 0 and T > 0 for the high-temperature form",
        ));
    }
    Ok(HBAR_CM1_PS / (2.0 * reorganization_energy * KB_CM1_PER_K * temperature).sqrt())
}

/// Short-time Gaussian decay time τ_g.
///
/// A density with a 1/ω tail makes the integral grow logarithmically with
/// its upper limit, so the result depends on the cutoff
/// ω_max = 10³ × fastest rate.
pub fn gaussian_time(
    j: &SpectralDensity,
    temperature: f64,
    opts: &DynamicsOptions,
) -> Result<GaussianTime> {
    check_temperature(temperature)?;
    let rates = j.rates();
    let Some(&r_max) = rates.last() else {
        return Err(Error::invalid("spectral density", "J is identically zero"));
    };
    j.check_decay()?;
    let cutoff = 1e3 * r_max;
    let g = Guarded::new(j);
    let mut edges = vec![0.0];
    edges.extend(j.breakpoints().into_iter().filter(|&x| x < cutoff));
    edges.push(cutoff);
    let est = integrate_segments(
        |x| g.at(x) * coth_factor(x, temperature),
        &edges_to_segments(&edges),
        opts.tol,
    );
    let inv_sq = g.finish(est)?.value;
    if !(inv_sq > 0.0) {
        return Err(Error::invalid("spectral density", "J integrates to zero"));
    }
    let kt = KB_CM1_PER_K * temperature;
    let high_temperature = if temperature > 0.0 && kt > 5.0 * HBAR_CM1_PS * r_max {
        Some(gaussian_time_high_temperature(
            reorganization_energy(j)?,
            temperature,
        )?)
    } else {
        None
    };
    Ok(GaussianTime {
        quadrature: 1.0 / inv_sq.sqrt(),
        high_temperature,
        cutoff,
    })
}

/// τ_d = ħ/(2αk_BT) in ps.
pub fn exponential_time(alpha: f64, temperature: f64) -> Result<f64> {
    check_temperature(temperature)?;
    if temperature == 0.0 {
        return Err(Error::invalid(
            "temperature",
            "exponential decay time needs T > 0",
        ));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid("alpha", format!("must be > 0, got {alpha}")));
    }
    Ok(HBAR_CM1_PS / (2.0 * alpha * KB_CM1_PER_K * temperature))
}

/// `a|1⟩ + b|2⟩` with level splitting ε (cm⁻¹).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelState {
    amp_ground: Complex64,
    amp_excited: Complex64,
    epsilon: f64,
}

impl TwoLevelState {
    pub fn new(amp_ground: Complex64, amp_excited: Complex64, epsilon: f64) -> Result<Self> {
        let norm = amp_ground.norm_sqr() + amp_excited.norm_sqr();
        if !((norm - 1.0).abs() <= 1e-12) {
            return Err(Error::invalid(
                "state",
                format!("|a|² + |b|² = {norm}, expected 1"),
            ));
        }
        if !epsilon.is_finite() {
            return Err(Error::invalid("epsilon", "must be finite"));
        }
        Ok(TwoLevelState {
            amp_ground,
            amp_excited,
            epsilon,
        })
    }

    /// Equal superposition (|1⟩ + |2⟩)/√2.
    pub fn equal_superposition(epsilon: f64) -> Self {
        let h = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
        TwoLevelState {
            amp_ground: h,
            amp_excited: h,
            epsilon,
        }
    }

    pub fn amp_ground(&self) -> Complex64 {
        self.amp_ground
    }
    pub fn amp_excited(&self) -> Complex64 {
        self.amp_excited
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrixPoint {
    pub t: f64,
    pub rho11: f64,
    pub rho22: f64,
    pub rho12: Complex64,
}

/// ρ(t): populations fixed, coherence `a*b·exp(−iεt/ħ + iθ(t) − Γ(t,T))`.
pub fn density_matrix(
    state: &TwoLevelState,
    j: &SpectralDensity,
    temperature: f64,
    t: f64,
    opts: &DynamicsOptions,
) -> Result<DensityMatrixPoint> {
    check_time(t)?;
    let theta = phase_shift(j, t, opts)?;
    let gamma = decoherence_gamma(j, t, temperature, opts)?;
    let phase = -state.epsilon * t / HBAR_CM1_PS + theta;
    let c0 = state.amp_ground.conj() * state.amp_excited;
    Ok(DensityMatrixPoint {
        t,
        rho11: state.amp_ground.norm_sqr(),
        rho22: state.amp_excited.norm_sqr(),
        rho12: c0 * Complex64::from_polar((-gamma).exp(), phase),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingRate {
    /// 1/T₂ in ps⁻¹.
    pub rate: f64,
    /// J(Δ/ħ) < 0.1 Δ/ħ, the regime where the golden rule holds.
    pub weak_coupling: bool,
}

/// Golden-rule rate 1/T₂ = J(Δ/ħ) coth(Δ/2k_BT).
pub fn dephasing_rate(j: &SpectralDensity, delta: f64, temperature: f64) -> Result<DephasingRate> {
    check_temperature(temperature)?;
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::invalid(
            "delta",
            format!("must be > 0 cm^-1, got {delta}"),
        ));
    }
    let w = delta / HBAR_CM1_PS;
    let jw = j.evaluate(w)?;
    Ok(DephasingRate {
        rate: jw * coth_factor(w, temperature),
        weak_coupling: jw < 0.1 * w,
    })
}

/// Sign of the relaxing term in ν(t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StokesConvention {
    /// ν = ε − E_R − ħ∫(J/ω)cos ωt, so ν(0) = ε − 2E_R.
    #[default]
    Printed,
    /// ν = ε − ħ dθ/dt = ε − E_R + ħ∫(J/ω)cos ωt, so ν(0) = ε.
    Derivative,
}

/// ħ∫₀^∞ (J/ω) cos ωt dω in cm⁻¹, closed form for Lorentzian sums.
fn relaxing_energy(j: &SpectralDensity, t: f64, opts: &DynamicsOptions) -> Result<f64> {
    if let (Some(sum), false) = (j.as_lorentzian(), opts.force_quadrature) {
        return Ok(sum
            .terms()
            .iter()
            .map(|term| term.reorganization_energy() * (-t / term.tau).exp())
            .sum());
    }
    if j.rates().is_empty() {
        return Ok(0.0);
    }
    j.check_decay()?;
    let e_r = reorganization_energy(j)?;
    let tol = relaxed(opts.tol, 1e-3 * e_r / HBAR_CM1_PS);
    Ok(HBAR_CM1_PS * cosine_integral(j, t, tol)?)
}

/// Instantaneous transition energy ν(t) in cm⁻¹.
pub fn stokes_shift_nu(
    j: &SpectralDensity,
    epsilon: f64,
    t: f64,
    convention: StokesConvention,
    opts: &DynamicsOptions,
) -> Result<f64> {
    check_time(t)?;
    let e_r = reorganization_energy(j)?;
    let relax = relaxing_energy(j, t, opts)?;
    Ok(match convention {
        StokesConvention::Printed => epsilon - e_r - relax,
        StokesConvention::Derivative => epsilon - e_r + relax,
    })
}

/// Normalised solvation correlation C(t), C(0) = 1.
pub fn hydration_correlation(j: &SpectralDensity, t: f64, opts: &DynamicsOptions) -> Result<f64> {
    check_time(t)?;
    let e_r = reorganization_energy(j)?;
    if !(e_r > 0.0) {
        return Err(Error::invalid(
            "spectral density",
            "zero reorganization energy; C(t) undefined",
        ));
    }
    Ok(relaxing_energy(j, t, opts)? / e_r)
}

/// Photon-echo peak shift S(t) = τ_g C(t)/√π in ps, meaningful at times
/// beyond the initial Gaussian decay.
pub fn echo_peak_shift(
    j: &SpectralDensity,
    temperature: f64,
    t: f64,
    opts: &DynamicsOptions,
) -> Result<f64> {
    let tau_g = gaussian_time(j, temperature, opts)?.preferred();
    Ok(tau_g / PI.sqrt() * hydration_correlation(j, t, opts)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::LorentzianSum;
    use approx::assert_relative_eq;

    fn single(alpha: f64, tau: f64) -> SpectralDensity {
        LorentzianSum::single(alpha, tau).unwrap().into()
    }

    fn quad() -> DynamicsOptions {
        DynamicsOptions {
            force_quadrature: true,
            ..Default::default()
        }
    }

    #[test]
    fn coth_branches() {
        assert_eq!(coth_factor(1.0, 0.0), 1.0);
        let t = 300.0;
        let w_small = 1e-6;
        let x = HBAR_CM1_PS * w_small / (2.0 * KB_CM1_PER_K * t);
        assert_relative_eq!(
            coth_factor(w_small, t),
            1.0 / x.tanh(),
            max_relative = 1e-12
        );
        assert_eq!(coth_factor(1e6, t), 1.0);
    }

    #[test]
    fn phase_shift_closed_form_and_quadrature() {
        let j = single(1.0, 1.0);
        assert_eq!(phase_shift(&j, 0.0, &Default::default()).unwrap(), 0.0);
        for t in [0.01f64, 0.5, 3.0, 20.0] {
            let exact = PI / 2.0 * (t - 1.0 + (-t).exp());
            assert_relative_eq!(
                phase_shift(&j, t, &Default::default()).unwrap(),
                exact,
                max_relative = 1e-12
            );
            assert_relative_eq!(
                phase_shift(&j, t, &quad()).unwrap(),
                exact,
                max_relative = 1e-6
            );
        }
    }

    #[test]
    fn phase_shift_long_time_slope() {
        let j = single(1.0, 1.0);
        let e_r = reorganization_energy(&j).unwrap();
        let (t1, t2) = (40.0, 50.0);
        let slope = (phase_shift(&j, t2, &quad()).unwrap() - phase_shift(&j, t1, &quad()).unwrap())
            / (t2 - t1);
        assert!((slope - e_r / HBAR_CM1_PS).abs() < 0.01 * slope);
    }

    #[test]
    fn zero_density_is_inert() {
        let j = single(0.0, 1.0);
        assert_eq!(phase_shift(&j, 3.0, &quad()).unwrap(), 0.0);
        assert_eq!(decoherence_gamma(&j, 3.0, 300.0, &quad()).unwrap(), 0.0);
        let s = TwoLevelState::equal_superposition(100.0);
        let p = density_matrix(&s, &j, 300.0, 5.0, &Default::default()).unwrap();
        assert_relative_eq!(p.rho12.norm(), 0.5, max_relative = 1e-14);
    }

    #[test]
    fn gamma_zero_temperature_matches_independent_quadrature() {
        // T = 0, α = 1, τ = 1: Γ = ∫ (1 − cos ωt)/(ω(1 + ω²)) dω
        let j = single(1.0, 1.0);
        let t = 2.0;
        let direct = crate::quadrature::integrate_to_infinity(
            |w| {
                let s = (0.5 * w * t).sin();
                2.0 * s * s / (w * (1.0 + w * w))
            },
            0.0,
            &[1.0, 10.0],
            Tolerance::new(1e-10, 0.0),
        )
        .unwrap()
        .value;
        let g = decoherence_gamma(&j, t, 0.0, &Default::default()).unwrap();
        assert!((g - direct).abs() < 1e-6 * direct);
    }

    #[test]
    fn gamma_increases_with_temperature() {
        let j = single(0.5, 2.0);
        for t in [0.1, 1.0, 10.0] {
            let g0 = decoherence_gamma(&j, t, 0.0, &Default::default()).unwrap();
            let g1 = decoherence_gamma(&j, t, 77.0, &Default::default()).unwrap();
            let g2 = decoherence_gamma(&j, t, 300.0, &Default::default()).unwrap();
            assert!(g0 <= g1 && g1 <= g2);
        }
    }

    #[test]
    fn gaussian_time_values() {
        let e = gaussian_time_high_temperature(100.0, 300.0).unwrap();
        assert!((e - 0.026).abs() < 5e-4);
        assert_relative_eq!(
            gaussian_time_high_temperature(200.0, 300.0).unwrap(),
            e / 2f64.sqrt(),
            max_relative = 1e-14
        );
        // k_BT = 20 ħ/τ: quadrature within 5% of the closed form
        let tau = 0.5;
        let temperature = 20.0 * HBAR_CM1_PS / tau / KB_CM1_PER_K;
        let g = gaussian_time(&single(2.0, tau), temperature, &Default::default()).unwrap();
        let ht = g.high_temperature.unwrap();
        assert!(
            (g.quadrature - ht).abs() < 0.05 * ht,
            "{} {}",
            g.quadrature,
            ht
        );
    }

    #[test]
    fn exponential_time_values() {
        assert!((exponential_time(1.0, 300.0).unwrap() - 0.0127).abs() < 1e-4);
        assert_relative_eq!(
            exponential_time(2.0, 300.0).unwrap(),
            exponential_time(1.0, 300.0).unwrap() / 2.0
        );
        assert!((exponential_time(100.0, 300.0).unwrap() * 1e3 - 0.127).abs() < 1e-3);
        assert!(exponential_time(1.0, 0.0).is_err());
    }

    #[test]
    fn density_matrix_limits() {
        let s =
            TwoLevelState::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), 50.0).unwrap();
        let j = single(1.0, 1.0);
        let p0 = density_matrix(&s, &j, 300.0, 0.0, &Default::default()).unwrap();
        assert_eq!(
            p0.rho12,
            Complex64::new(0.6, 0.0) * Complex64::new(0.0, 0.8)
        );
        let late = density_matrix(&s, &j, 300.0, 10.0, &Default::default()).unwrap();
        assert!(late.rho12.norm() < 1e-100);
        assert_eq!((late.rho11, late.rho22), (p0.rho11, p0.rho22));
        assert!(
            TwoLevelState::new(Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0), 0.0).is_err()
        );
    }

    #[test]
    fn golden_rule_rate() {
        let j = single(0.01, 1.0);
        let r = dephasing_rate(&j, HBAR_CM1_PS, 300.0).unwrap();
        assert!((r.rate - 0.3929).abs() < 2e-4, "{}", r.rate);
        assert!(r.weak_coupling);
        assert_relative_eq!(dephasing_rate(&j, HBAR_CM1_PS, 0.0).unwrap().rate, 0.005);
        // k_BT ≫ Δ
        let hot = dephasing_rate(&j, 0.1, 3000.0).unwrap().rate;
        let w = 0.1 / HBAR_CM1_PS;
        assert_relative_eq!(
            hot,
            j.evaluate(w).unwrap() * 2.0 * KB_CM1_PER_K * 3000.0 / 0.1,
            max_relative = 1e-6
        );
    }

    #[test]
    fn stokes_shift_limits() {
        let j = single(1.0, 1.0);
        let e_r = reorganization_energy(&j).unwrap();
        let eps = 1000.0;
        let nu0 =
            stokes_shift_nu(&j, eps, 0.0, StokesConvention::Printed, &Default::default()).unwrap();
        assert_relative_eq!(nu0, eps - 2.0 * e_r, max_relative = 1e-14);
        let d0 = stokes_shift_nu(
            &j,
            eps,
            0.0,
            StokesConvention::Derivative,
            &Default::default(),
        )
        .unwrap();
        assert_relative_eq!(d0, eps, max_relative = 1e-14);
        for t in [0.3f64, 2.0, 7.0] {
            let q = stokes_shift_nu(&j, eps, t, StokesConvention::Printed, &quad()).unwrap();
            assert!((q - (eps - e_r - e_r * (-t).exp())).abs() < 1e-6 * e_r);
        }
        let late = stokes_shift_nu(&j, eps, 60.0, StokesConvention::Printed, &quad()).unwrap();
        assert!((late - (eps - e_r)).abs() < 1e-6 * e_r);
    }

    #[test]
    fn correlation_values() {
        let j = single(1.0, 2.0);
        assert_relative_eq!(
            hydration_correlation(&j, 0.0, &quad()).unwrap(),
            1.0,
            max_relative = 1e-9
        );
        assert!((hydration_correlation(&j, 2.0, &quad()).unwrap() - (-1.0f64).exp()).abs() < 1e-6);
        // equal-energy pair
        let pair: SpectralDensity = LorentzianSum::new(vec![
            crate::spectral::LorentzianTerm::new(1.0, 1.0).unwrap(),
            crate::spectral::LorentzianTerm::new(10.0, 10.0).unwrap(),
        ])
        .unwrap()
        .into();
        let c = hydration_correlation(&pair, 1.0, &Default::default()).unwrap();
        assert_relative_eq!(
            c,
            0.5 * (-1.0f64).exp() + 0.5 * (-0.1f64).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn echo_shift_value() {
        let alpha = 100.0 * 2.0 / (PI * HBAR_CM1_PS);
        let j = single(alpha, 1.0);
        let s0 = echo_peak_shift(&j, 300.0, 0.0, &Default::default()).unwrap();
        let tg = gaussian_time(&j, 300.0, &Default::default())
            .unwrap()
            .preferred();
        assert_relative_eq!(s0, tg / PI.sqrt(), max_relative = 1e-12);
        let s1 = echo_peak_shift(&j, 300.0, 1.0, &Default::default()).unwrap();
        assert!((s1 - 5.4e-3).abs() < 0.1e-3, "{s1}");
    }
}
