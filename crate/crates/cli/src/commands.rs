use chromobath::dynamics::{
    decoherence_gamma, hydration_correlation, phase_shift, DynamicsOptions, StokesConvention,
};
use chromobath::fitting::{
    couplings_from_fit, fit_multiexponential, load_reference_datasets, CorrelationSamples, Slot,
};
use chromobath::quadrature::Tolerance;
use chromobath::spectral::{
    classify_regime, crossover_bound_bulk, crossover_protein_solvent, lorentzian_params,
    scale_separation_warnings, Crossover,
};
use chromobath::{
    reorganization_energy, Component, DebyeDielectric, Dielectric, EnvironmentModel, Error,
    LorentzianSum, LorentzianTerm, ModelKind, SpectralDensity, StaticDielectric,
    ThreeComponentEnvironment,
};

use crate::config::RunConfig;
use crate::output::{Field, Table};
use crate::CliError;

/// What a command produced, and whether the run should still count as a
/// failure once the table is written.
#[derive(Debug)]
pub struct Report {
    pub table: Table,
    pub failure: Option<CliError>,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Report {
            table,
            failure: None,
        }
    }
}

fn config_err(e: Error) -> CliError {
    CliError::Config(e.to_string())
}

fn numeric(context: impl std::fmt::Display, e: Error) -> CliError {
    CliError::Numeric(format!("{context}: {e}"))
}

/// The density selected by `model`.
#[derive(Debug, Clone)]
pub enum Backing {
    Model(EnvironmentModel),
    Three(ThreeComponentEnvironment),
    Lorentzian(LorentzianSum),
}

impl Backing {
    pub fn density(&self) -> SpectralDensity {
        match self {
            Backing::Model(m) => (*m).into(),
            Backing::Three(e) => (*e).into(),
            Backing::Lorentzian(s) => s.clone().into(),
        }
    }

    pub fn lorentzian(&self) -> Option<LorentzianSum> {
        match self {
            Backing::Three(e) => Some(lorentzian_params(e)),
            Backing::Lorentzian(s) => Some(s.clone()),
            Backing::Model(_) => None,
        }
    }
}

fn static_of(d: Dielectric) -> StaticDielectric {
    match d {
        Dielectric::Debye(d) => d.optical(),
        Dielectric::Static(s) => s,
    }
}

/// Builds and validates the density described by the config.
pub fn build_backing(cfg: &RunConfig) -> Result<Backing, CliError> {
    let model = cfg.raw("model").unwrap_or("three");
    let a = cfg.f64_or("a_angstrom", 3.0)?;
    let b = cfg.f64_or("b_angstrom", 10.0)?;
    let c = cfg.f64_or("c_angstrom", b + 4.5)?;
    let dmu = cfg.f64_or("delta_mu_debye", 1.0)?;
    let cavity = StaticDielectric::new(cfg.f64_or("cavity_eps", 1.0)?).map_err(config_err)?;
    let protein = cfg.medium("protein", DebyeDielectric::PROTEIN_DEFAULT)?;
    let bound = cfg.medium("bound", DebyeDielectric::BOUND_WATER_DEFAULT)?;
    let solvent = cfg.medium("solvent", DebyeDielectric::WATER)?;
    let kind = match model {
        "1" => ModelKind::FreeChromophore { a, cavity, solvent },
        "2" => ModelKind::InfiniteProtein { a, cavity, protein },
        "3" => ModelKind::StaticProteinSphere {
            b,
            protein: static_of(protein),
            solvent,
        },
        "4" => ModelKind::HollowProtein {
            a,
            b,
            protein,
            solvent,
        },
        "5" => ModelKind::BoundWaterShell {
            b,
            c,
            protein: static_of(protein),
            bound,
            solvent,
        },
        "three" => {
            let env = ThreeComponentEnvironment::new(
                cfg.debye("protein", DebyeDielectric::PROTEIN_DEFAULT)?,
                cfg.debye("bound", DebyeDielectric::BOUND_WATER_DEFAULT)?,
                cfg.debye("solvent", DebyeDielectric::WATER)?,
                a,
                b,
                c,
                dmu,
            )
            .map_err(config_err)?;
            return Ok(Backing::Three(env));
        }
        "lorentzian" => return lorentzian_from_config(cfg).map(Backing::Lorentzian),
        other => {
            return Err(CliError::Config(format!(
                "key `model`: expected 1-5, three or lorentzian, got `{other}`"
            )))
        }
    };
    EnvironmentModel::new(kind, dmu)
        .map(Backing::Model)
        .map_err(config_err)
}

fn lorentzian_from_config(cfg: &RunConfig) -> Result<LorentzianSum, CliError> {
    let alpha = cfg
        .list_f64("alpha")?
        .ok_or_else(|| CliError::Config("model = lorentzian needs key `alpha`".into()))?;
    let tau = cfg
        .list_f64("tau_ps")?
        .ok_or_else(|| CliError::Config("model = lorentzian needs key `tau_ps`".into()))?;
    if alpha.len() != tau.len() {
        return Err(CliError::Config(format!(
            "keys `alpha` and `tau_ps` have {} and {} entries",
            alpha.len(),
            tau.len()
        )));
    }
    let labels: Vec<Option<Component>> = match cfg.raw("labels") {
        None => vec![None; alpha.len()],
        Some(v) => {
            let parsed = v
                .split(',')
                .map(|s| s.trim().parse::<Component>().map(Some))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Config(format!("key `labels`: {e}")))?;
            if parsed.len() != alpha.len() {
                return Err(CliError::Config(format!(
                    "key `labels` has {} entries, `alpha` has {}",
                    parsed.len(),
                    alpha.len()
                )));
            }
            parsed
        }
    };
    let terms = alpha
        .iter()
        .zip(&tau)
        .zip(labels)
        .map(|((&a, &t), l)| {
            LorentzianTerm::new(a, t).map(|term| LorentzianTerm { label: l, ..term })
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(config_err)?;
    LorentzianSum::new(terms).map_err(config_err)
}

/// `prefix_min`, `prefix_max`, `prefix_points`, `prefix_scale`.
pub fn grid(
    cfg: &RunConfig,
    prefix: &str,
    min: f64,
    max: f64,
    points: usize,
) -> Result<Vec<f64>, CliError> {
    let lo = cfg.f64_or(&format!("{prefix}_min"), min)?;
    let hi = cfg.f64_or(&format!("{prefix}_max"), max)?;
    let n = cfg.usize_or(&format!("{prefix}_points"), points)?;
    let scale = cfg.raw(&format!("{prefix}_scale")).unwrap_or("log");
    if n < 2 {
        return Err(CliError::Config(format!(
            "key `{prefix}_points` must be at least 2, got {n}"
        )));
    }
    if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) || lo < 0.0 {
        return Err(CliError::Config(format!(
            "{prefix} range [{lo}, {hi}] must satisfy 0 <= min < max"
        )));
    }
    let step = |i: usize| i as f64 / (n - 1) as f64;
    match scale {
        "log" => {
            if lo <= 0.0 {
                return Err(CliError::Config(format!(
                    "key `{prefix}_min` must be > 0 on a log grid"
                )));
            }
            Ok((0..n)
                .map(|i| (lo.ln() + (hi / lo).ln() * step(i)).exp())
                .collect())
        }
        "linear" => Ok((0..n).map(|i| lo + (hi - lo) * step(i)).collect()),
        other => Err(CliError::Config(format!(
            "key `{prefix}_scale`: expected log or linear, got `{other}`"
        ))),
    }
}

fn rate_span(j: &SpectralDensity) -> Result<(f64, f64), CliError> {
    let rates = j.rates();
    match (rates.first(), rates.last()) {
        (Some(&lo), Some(&hi)) => Ok((lo, hi)),
        _ => Err(CliError::Config(
            "the density has no relaxing medium; set an explicit grid".into(),
        )),
    }
}

fn options(cfg: &RunConfig) -> Result<DynamicsOptions, CliError> {
    let tol = cfg.f64_or("tol", 1e-7)?;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Config(format!(
            "key `tol` must lie in (0, 1), got {tol}"
        )));
    }
    Ok(DynamicsOptions {
        tol: Tolerance::new(tol, 0.0),
        ..DynamicsOptions::default()
    })
}

pub fn spectral(cfg: &RunConfig) -> Result<Report, CliError> {
    let backing = build_backing(cfg)?;
    let j = backing.density();
    let omegas = match (cfg.contains("omega_min"), cfg.contains("omega_max")) {
        (true, true) => grid(cfg, "omega", 0.0, 0.0, 400)?,
        _ => {
            let (lo, hi) = rate_span(&j)?;
            grid(cfg, "omega", 1e-4 * lo, 1e3 * hi, 400)?
        }
    };
    let three = match &backing {
        Backing::Three(e) => Some(e),
        _ => None,
    };
    let mut table = if three.is_some() {
        Table::new(&[
            "omega_rad_per_ps",
            "J_rad_per_ps",
            "J_protein",
            "J_bound",
            "J_solvent",
        ])
    } else {
        Table::new(&["omega_rad_per_ps", "J_rad_per_ps"])
    };
    for &w in &omegas {
        let at = |e| numeric(format!("J at omega = {w:e} rad/ps"), e);
        match three {
            Some(env) => {
                let c = env.components(w).map_err(at)?;
                table.push(vec![
                    w.into(),
                    c.total().into(),
                    c.protein.into(),
                    c.bound.into(),
                    c.solvent.into(),
                ]);
            }
            None => table.push(vec![w.into(), j.evaluate(w).map_err(at)?.into()]),
        }
    }
    if three.is_some() {
        table.note("J_bound and J_solvent are differences of model densities and may be negative; J_rad_per_ps is their sum with J_protein");
    }
    Ok(table.into())
}

pub fn lorentzian(cfg: &RunConfig) -> Result<Report, CliError> {
    let sum = build_backing(cfg)?.lorentzian().ok_or_else(|| {
        CliError::Config("the Lorentzian decomposition needs model = three or lorentzian".into())
    })?;
    let mut table = Table::new(&["component", "alpha", "tau_ps", "E_R_cm1", "omega_peak"]);
    for (i, t) in sum.terms().iter().enumerate() {
        let name = t
            .label
            .map_or_else(|| format!("term{}", i + 1), |c| c.to_string());
        table.push(vec![
            name.into(),
            t.alpha.into(),
            t.tau.into(),
            t.reorganization_energy().into(),
            t.peak_frequency().into(),
        ]);
    }
    table.note(format!(
        "total E_R = {:.6} cm^-1",
        sum.reorganization_energy()
    ));
    for w in scale_separation_warnings(&sum) {
        table.note(format!("warning: {w}"));
    }
    Ok(table.into())
}

pub fn dynamics(cfg: &RunConfig) -> Result<Report, CliError> {
    let j = build_backing(cfg)?.density();
    let temperature = cfg.f64_or("temperature_K", 300.0)?;
    if temperature < 0.0 {
        return Err(CliError::Config(format!(
            "key `temperature_K` must be >= 0, got {temperature}"
        )));
    }
    let epsilon = cfg.f64_or("epsilon_cm1", 0.0)?;
    let convention = match cfg.raw("stokes_convention").unwrap_or("printed") {
        "printed" => StokesConvention::Printed,
        "derivative" => StokesConvention::Derivative,
        other => {
            return Err(CliError::Config(format!(
                "key `stokes_convention`: expected printed or derivative, got `{other}`"
            )))
        }
    };
    let opts = options(cfg)?;
    let times = match (cfg.contains("t_min"), cfg.contains("t_max")) {
        (true, true) => grid(cfg, "t", 0.0, 0.0, 200)?,
        _ => {
            let (lo, hi) = rate_span(&j)?;
            grid(cfg, "t", 1e-2 / hi, 10.0 / lo, 200)?
        }
    };
    let e_r = reorganization_energy(&j).map_err(|e| numeric("reorganization energy", e))?;
    let mut table = Table::new(&["t_ps", "theta", "gamma", "abs_rho12", "nu_cm1", "C"]);
    for &t in &times {
        let at = |e| numeric(format!("t = {t:e} ps"), e);
        let theta = phase_shift(&j, t, &opts).map_err(at)?;
        let gamma = decoherence_gamma(&j, t, temperature, &opts).map_err(at)?;
        let c = hydration_correlation(&j, t, &opts).map_err(at)?;
        // same as stokes_shift_nu, reusing C(t)
        let nu = match convention {
            StokesConvention::Printed => epsilon - e_r - e_r * c,
            StokesConvention::Derivative => epsilon - e_r + e_r * c,
        };
        table.push(vec![
            t.into(),
            theta.into(),
            gamma.into(),
            (0.5 * (-gamma).exp()).into(),
            nu.into(),
            c.into(),
        ]);
    }
    table.note(format!(
        "T = {temperature} K; equal superposition, |rho12(0)| = 0.5"
    ));
    Ok(table.into())
}

pub fn fit(cfg: &RunConfig) -> Result<Report, CliError> {
    let path = cfg
        .raw("input")
        .ok_or_else(|| CliError::Config("fit needs key `input`".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let data =
        CorrelationSamples::parse(&text).map_err(|e| CliError::Config(format!("{path}: {e}")))?;
    let n = cfg.usize_or("n_exponentials", 2)?;
    let e_r = cfg.f64("e_r_cm1")?;
    let fit = fit_multiexponential(&data, n, cfg.u64("seed")?).map_err(config_err)?;
    let couplings = match e_r {
        Some(e) => Some(couplings_from_fit(e, &fit).map_err(config_err)?),
        None => None,
    };
    let mut table = Table::new(&[
        "component",
        "weight",
        "tau_ps",
        "alpha",
        "alpha_quick",
        "E_R_cm1",
    ]);
    for (i, comp) in fit.components.iter().enumerate() {
        let cp = couplings.as_ref().map(|c| c[i]);
        table.push(vec![
            Field::Num((i + 1) as f64),
            comp.weight.into(),
            comp.tau.into(),
            cp.map(|c| c.alpha).into(),
            cp.map(|c| c.quick_estimate).into(),
            e_r.map(|e| e * comp.weight).into(),
        ]);
    }
    table.note(format!("residual_rms = {:e}", fit.residual_rms));
    table.note(format!(
        "converged = {}, iterations = {}",
        fit.converged, fit.iterations
    ));
    if fit.flags.degenerate {
        table.note("warning: two fitted times agree within 1%");
    }
    if fit.flags.tau_diverged {
        table.note("warning: a fitted time exceeds 100x the last sample time");
    }
    if couplings.is_some() {
        table.note("alpha = 2 E_R A tau/(pi hbar); alpha_quick = 0.25 A E_R tau, the rounded rule of thumb");
    }
    let failure = (!fit.converged || fit.flags.tau_diverged).then(|| {
        CliError::NotConverged(format!(
            "fit of {n} exponentials did not converge (converged = {}, tau diverged = {})",
            fit.converged, fit.flags.tau_diverged
        ))
    });
    Ok(Report { table, failure })
}

pub fn crossover(cfg: &RunConfig) -> Result<Report, CliError> {
    let sum = build_backing(cfg)?
        .lorentzian()
        .ok_or_else(|| CliError::Config("crossover needs model = three or lorentzian".into()))?;
    let temperature = cfg.f64_or("temperature_K", 300.0)?;
    let delta = cfg.f64_or("delta_cm1", 1.0)?;
    let mut table = Table::new(&[
        "kind",
        "name",
        "alpha",
        "tau_ps",
        "omega_analytic_rad_per_ps",
        "omega_numeric_rad_per_ps",
        "regime",
    ]);
    type Finder = fn(&LorentzianSum) -> chromobath::Result<Crossover>;
    let pairs: [(&str, Finder); 2] = [
        ("protein/solvent", crossover_protein_solvent),
        ("bound/solvent", crossover_bound_bulk),
    ];
    for (name, f) in pairs {
        match f(&sum) {
            Ok(c) => table.push(vec![
                "crossover".into(),
                name.into(),
                Field::Empty,
                Field::Empty,
                c.analytic.into(),
                c.numeric.into(),
                Field::Empty,
            ]),
            Err(e @ (Error::NoCrossover(_) | Error::InvalidParameter { .. })) => {
                table.note(format!("{name}: {e}"));
                table.push(vec![
                    "crossover".into(),
                    name.into(),
                    Field::Empty,
                    Field::Empty,
                    Field::Empty,
                    Field::Empty,
                    Field::Empty,
                ]);
            }
            Err(e) => return Err(numeric(name, e)),
        }
    }
    for (i, t) in sum.terms().iter().enumerate() {
        let name = t
            .label
            .map_or_else(|| format!("term{}", i + 1), |c| c.to_string());
        let regime =
            classify_regime(t.alpha, temperature, delta, 1.0 / t.tau).map_err(config_err)?;
        table.push(vec![
            "component".into(),
            name.into(),
            t.alpha.into(),
            t.tau.into(),
            Field::Empty,
            Field::Empty,
            regime.label().into(),
        ]);
    }
    table.note(format!(
        "regimes for T = {temperature} K, delta = {delta} cm^-1, omega_c = 1/tau"
    ));
    Ok(table.into())
}

pub fn datasets(cfg: &RunConfig) -> Result<Report, CliError> {
    let rows = load_reference_datasets().map_err(config_err)?;
    let matches = |value: &str, key: &str| {
        cfg.raw(key)
            .is_none_or(|f| value.to_lowercase().contains(&f.to_lowercase()))
    };
    let mut table = Table::new(&[
        "chromophore",
        "protein",
        "solvent",
        "E_R_cm1",
        "slot",
        "resolved",
        "A",
        "tau_ps",
        "alpha",
        "alpha_quick",
        "source",
    ]);
    for r in rows
        .iter()
        .filter(|r| matches(&r.chromophore, "chromophore") && matches(&r.protein, "protein_name"))
    {
        let couplings = r.couplings();
        let mut k = 0;
        for (slot, s) in r.slots.iter().enumerate() {
            let (resolved, a, tau, alpha, quick) = match *s {
                Slot::Resolved { weight, tau } => {
                    let c = couplings.as_ref().map(|c| c[k]);
                    k += 1;
                    (
                        "yes",
                        Some(weight),
                        Some(tau),
                        c.map(|c| c.alpha),
                        c.map(|c| c.quick_estimate),
                    )
                }
                Slot::Unresolved => ("no", None, None, None, None),
            };
            table.push(vec![
                r.chromophore.as_str().into(),
                r.protein.as_str().into(),
                r.solvent.as_str().into(),
                r.e_r.into(),
                Field::Num((slot + 1) as f64),
                resolved.into(),
                a.into(),
                tau.into(),
                alpha.into(),
                quick.into(),
                r.source.as_str().into(),
            ]);
        }
    }
    table.note("resolved = no marks a component faster than the instrument window");
    table.note("alpha = 2 E_R A tau/(pi hbar); alpha_quick = 0.25 A E_R tau");
    Ok(table.into())
}
