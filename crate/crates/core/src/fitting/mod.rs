//! Multi-exponential fits of solvation correlation functions and their
//! conversion to Lorentzian spectral densities.
//!
//! `C(t) = Σ A_j exp(−t/τ_j)` with `A_j ≥ 0`, `Σ A_j = 1`. Weights are kept
//! on the simplex through a softmax (the last logit pinned at zero) and the
//! times through `τ = exp(s)`, so the solver works unconstrained.

mod datasets;
mod samples;

pub use datasets::{
    load_energy_scales, load_reference_datasets, load_timescales, parse_solvation_records,
    EnergyScale, Slot, SolvationRecord, Timescale,
};
pub use samples::{CorrelationSamples, Sample};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral::{LorentzianSum, LorentzianTerm};
use crate::units::constants::HBAR_CM1_PS;

pub const MAX_COMPONENTS: usize = 4;
pub const DEFAULT_SEED: u64 = 0x5eed;
const STARTS: usize = 12;
const MAX_ITERATIONS: usize = 800;
const GRADIENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpComponent {
    pub weight: f64,
    /// ps
    pub tau: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FitFlags {
    /// Two times agree within 1 %; the fit cannot tell them apart.
    pub degenerate: bool,
    /// A time ran beyond 100 × the last sample time.
    pub tau_diverged: bool,
}

impl FitFlags {
    pub fn any(&self) -> bool {
        self.degenerate || self.tau_diverged
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialFit {
    /// Sorted by ascending τ.
    pub components: Vec<ExpComponent>,
    /// `sqrt(Σ w r² / Σ w)`.
    pub residual_rms: f64,
    pub converged: bool,
    pub flags: FitFlags,
    /// Objective after every accepted step of the winning start.
    pub trace: Vec<f64>,
    pub iterations: usize,
}

impl ExponentialFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * (-t / c.tau).exp())
            .sum()
    }

    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.components.iter().map(|c| (c.weight, c.tau)).collect()
    }
}

struct Problem {
    t: Vec<f64>,
    c: Vec<f64>,
    sw: Vec<f64>,
    n: usize,
}

impl Problem {
    fn weights(&self, p: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut z: Vec<f64> = p[..n - 1].to_vec();
        z.push(0.0);
        let m = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = z.iter().map(|v| (v - m).exp()).collect();
        let s: f64 = e.iter().sum();
        e.iter().map(|v| v / s).collect()
    }

    fn taus(&self, p: &[f64]) -> Vec<f64> {
        p[self.n - 1..].iter().map(|s| s.exp()).collect()
    }

    fn residuals(&self, p: &[f64]) -> DVector<f64> {
        let a = self.weights(p);
        let tau = self.taus(p);
        DVector::from_iterator(
            self.t.len(),
            self.t
                .iter()
                .zip(&self.c)
                .zip(&self.sw)
                .map(|((&t, &c), &sw)| {
                    let m: f64 = a
                        .iter()
                        .zip(&tau)
                        .map(|(a, tau)| a * (-t / tau).exp())
                        .sum();
                    sw * (m - c)
                }),
        )
    }

    fn jacobian(&self, p: &[f64]) -> DMatrix<f64> {
        let n = self.n;
        let a = self.weights(p);
        let tau = self.taus(p);
        let mut jac = DMatrix::zeros(self.t.len(), 2 * n - 1);
        for (i, (&t, &sw)) in self.t.iter().zip(&self.sw).enumerate() {
            let e: Vec<f64> = tau.iter().map(|tau| (-t / tau).exp()).collect();
            let m: f64 = a.iter().zip(&e).map(|(a, e)| a * e).sum();
            for k in 0..n - 1 {
                jac[(i, k)] = sw * a[k] * (e[k] - m);
            }
            for j in 0..n {
                jac[(i, n - 1 + j)] = sw * a[j] * e[j] * t / tau[j];
            }
        }
        jac
    }
}

struct Run {
    p: Vec<f64>,
    objective: f64,
    converged: bool,
    trace: Vec<f64>,
    iterations: usize,
}

/// Levenberg–Marquardt with Marquardt diagonal scaling.
fn levenberg_marquardt(prob: &Problem, mut p: Vec<f64>) -> Run {
    let half_sq = |r: &DVector<f64>| 0.5 * r.norm_squared();
    let mut r = prob.residuals(&p);
    let mut f = half_sq(&r);
    let mut trace = vec![f];
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let jac = prob.jacobian(&p);
        let g = jac.tr_mul(&r);
        if g.amax() < GRADIENT_TOL {
            converged = true;
            break;
        }
        let jtj = jac.tr_mul(&jac);
        let mut accepted = false;
        while lambda < 1e16 {
            let mut a = jtj.clone();
            for k in 0..a.nrows() {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-12);
            }
            let step = match a.clone().cholesky() {
                Some(ch) => ch.solve(&(-&g)),
                None => match a.lu().solve(&(-&g)) {
                    Some(s) => s,
                    None => {
                        lambda *= 10.0;
                        continue;
                    }
                },
            };
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(x, d)| x + d).collect();
            let rt = prob.residuals(&trial);
            let ft = half_sq(&rt);
            if ft.is_finite() && ft < f {
                let gain = (f - ft) / f.max(f64::MIN_POSITIVE);
                p = trial;
                r = rt;
                f = ft;
                trace.push(f);
                lambda = (lambda / 3.0).max(1e-12);
                accepted = true;
                if gain < 1e-15 && step.amax() < 1e-12 {
                    lambda = 1e16;
                }
                break;
            }
            lambda *= 4.0;
        }
        if !accepted {
            // no downhill step exists at any damping: stationary to roundoff
            let g = prob.jacobian(&p).tr_mul(&r);
            converged = g.amax() < GRADIENT_TOL || f < 1e-28;
            break;
        }
    }
    Run {
        p,
        objective: f,
        converged,
        trace,
        iterations,
    }
}

/// Least-squares fit of `n` decaying exponentials. Deterministic for a given
/// seed: several starts with log-spaced and randomly drawn times are run and
/// the lowest objective wins.
pub fn fit_multiexponential(
    data: &CorrelationSamples,
    n: usize,
    seed: Option<u64>,
) -> Result<ExponentialFit> {
    if !(1..=MAX_COMPONENTS).contains(&n) {
        return Err(Error::invalid(
            "n",
            format!("must be 1..={MAX_COMPONENTS}, got {n}"),
        ));
    }
    let pts = data.points();
    if pts.len() < 2 * n + 1 {
        return Err(Error::InvalidData(format!(
            "{} points cannot constrain {} exponentials (need at least {})",
            pts.len(),
            n,
            2 * n + 1
        )));
    }
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    if last.c > first.c {
        return Err(Error::InvalidData(format!(
            "data do not decay: C({}) = {} > C({}) = {}",
            last.t, last.c, first.t, first.c
        )));
    }
    let prob = Problem {
        t: pts.iter().map(|p| p.t).collect(),
        c: pts.iter().map(|p| p.c).collect(),
        sw: pts.iter().map(|p| p.weight().sqrt()).collect(),
        n,
    };
    let t_max = last.t;
    let t_min = pts.iter().map(|p| p.t).find(|&t| t > 0.0).unwrap_or(t_max);
    let (lo, hi) = (t_min.ln(), t_max.ln());
    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(DEFAULT_SEED));
    let mut best: Option<Run> = None;
    for start in 0..STARTS {
        let mut p = vec![0.0; 2 * n - 1];
        for j in 0..n {
            p[n - 1 + j] = if start == 0 {
                lo + (hi - lo) * (j as f64 + 0.5) / n as f64
            } else {
                rng.random_range(lo - 1.0..hi + 1.0)
            };
        }
        if start > 0 {
            for z in p.iter_mut().take(n - 1) {
                *z = rng.random_range(-1.0..1.0);
            }
        }
        let run = levenberg_marquardt(&prob, p);
        if best.as_ref().is_none_or(|b| run.objective < b.objective) {
            best = Some(run);
        }
    }
    let run = best.expect("at least one start");
    let weights = prob.weights(&run.p);
    let taus = prob.taus(&run.p);
    let mut components: Vec<ExpComponent> = weights
        .into_iter()
        .zip(taus)
        .map(|(weight, tau)| ExpComponent { weight, tau })
        .collect();
    components.sort_by(|a, b| a.tau.total_cmp(&b.tau));
    let flags = FitFlags {
        degenerate: components
            .windows(2)
            .any(|w| (w[1].tau - w[0].tau) / w[1].tau < 0.01),
        tau_diverged: components.iter().any(|c| c.tau > 100.0 * t_max),
    };
    let wsum: f64 = pts.iter().map(Sample::weight).sum();
    let residual_rms = (2.0 * run.objective / wsum).sqrt();
    Ok(ExponentialFit {
        components,
        residual_rms,
        converged: run.converged,
        flags,
        trace: run.trace,
        iterations: run.iterations,
    })
}

/// Ohmic coupling of one exponential component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub weight: f64,
    pub tau: f64,
    /// `2 E_R A τ/(π ħ)`, so that the Lorentzian carries `A E_R`.
    pub alpha: f64,
    /// The rounded rule of thumb `0.25 A E_R τ` (E_R in cm⁻¹, τ in ps).
    pub quick_estimate: f64,
}

pub(crate) fn couplings_from_components(e_r: f64, pairs: &[(f64, f64)]) -> Vec<Coupling> {
    pairs
        .iter()
        .map(|&(weight, tau)| Coupling {
            weight,
            tau,
            alpha: 2.0 * e_r * weight * tau / (PI * HBAR_CM1_PS),
            quick_estimate: 0.25 * weight * e_r * tau,
        })
        .collect()
}

/// Couplings α_j for a fit given the total reorganization energy in cm⁻¹.
pub fn couplings_from_fit(e_r: f64, fit: &ExponentialFit) -> Result<Vec<Coupling>> {
    if !(e_r > 0.0) || !e_r.is_finite() {
        return Err(Error::invalid(
            "e_r",
            format!("must be finite and > 0 cm^-1, got {e_r}"),
        ));
    }
    Ok(couplings_from_components(e_r, &fit.pairs()))
}

/// The Lorentzian J whose relaxation function is the fitted decay.
pub fn lorentzian_from_fit(e_r: f64, fit: &ExponentialFit) -> Result<LorentzianSum> {
    let terms = couplings_from_fit(e_r, fit)?
        .into_iter()
        .map(|c| LorentzianTerm::new(c.alpha, c.tau))
        .collect::<Result<Vec<_>>>()?;
    LorentzianSum::new(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn synthetic(parts: &[(f64, f64)], t_max: f64, n: usize) -> CorrelationSamples {
        let t: Vec<f64> = (0..n)
            .map(|i| t_max * (i as f64 / (n - 1) as f64).powi(2))
            .collect();
        let c: Vec<f64> = t
            .iter()
            .map(|&t| parts.iter().map(|(a, tau)| a * (-t / tau).exp()).sum())
            .collect();
        CorrelationSamples::from_curve(&t, &c).unwrap()
    }

    #[test]
    fn recovers_two_exponentials() {
        let d = synthetic(&[(0.6, 0.8), (0.4, 38.0)], 200.0, 120);
        let fit = fit_multiexponential(&d, 2, None).unwrap();
        assert!(fit.converged);
        assert!(!fit.flags.any());
        assert_relative_eq!(fit.components[0].weight, 0.6, max_relative = 1e-6);
        assert_relative_eq!(fit.components[0].tau, 0.8, max_relative = 1e-6);
        assert_relative_eq!(fit.components[1].tau, 38.0, max_relative = 1e-6);
        assert!(fit.residual_rms < 1e-10);
    }

    #[test]
    fn trace_never_increases() {
        let d = synthetic(&[(0.3, 0.5), (0.3, 5.0), (0.4, 60.0)], 300.0, 150);
        let fit = fit_multiexponential(&d, 3, Some(7)).unwrap();
        assert!(fit.trace.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn constant_data_flags_divergence() {
        let t: Vec<f64> = (0..20).map(f64::from).collect();
        let d = CorrelationSamples::from_curve(&t, &[1.0; 20]).unwrap();
        let fit = fit_multiexponential(&d, 1, None).unwrap();
        assert!(!fit.converged || fit.flags.tau_diverged);
    }

    #[test]
    fn rejects_bad_requests() {
        let d = synthetic(&[(1.0, 1.0)], 5.0, 6);
        assert!(fit_multiexponential(&d, 0, None).is_err());
        assert!(fit_multiexponential(&d, 5, None).is_err());
        assert!(fit_multiexponential(&d, 3, None).is_err());
        let up =
            CorrelationSamples::from_curve(&[0.0, 1.0, 2.0, 3.0], &[0.1, 0.5, 0.7, 0.9]).unwrap();
        assert!(fit_multiexponential(&up, 1, None).is_err());
    }

    #[test]
    fn coupling_matches_quick_rule() {
        let c = couplings_from_components(2193.0, &[(0.45, 1.6)]);
        assert_relative_eq!(c[0].alpha, 189.35, max_relative = 1e-3);
        assert_relative_eq!(c[0].quick_estimate, 0.25 * 0.45 * 2193.0 * 1.6);
        // the rounded coefficient is about twice the exact 2/(πħ)
        assert_relative_eq!(
            c[0].quick_estimate / c[0].alpha,
            0.25 * PI * HBAR_CM1_PS / 2.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn lorentzian_carries_reorganization_energy() {
        let d = synthetic(&[(0.55, 0.34), (0.45, 1.6)], 20.0, 80);
        let fit = fit_multiexponential(&d, 2, None).unwrap();
        let j = lorentzian_from_fit(2193.0, &fit).unwrap();
        assert_relative_eq!(j.reorganization_energy(), 2193.0, max_relative = 1e-9);
    }
}
