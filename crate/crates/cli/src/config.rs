//! Flat `key = value` run configuration.

use std::collections::BTreeMap;

use chromobath::{DebyeDielectric, Dielectric, StaticDielectric};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Every accepted key with a one-line description.
pub const KEYS: &[(&str, &str)] = &[
    (
        "model",
        "1, 2, 3, 4, 5, three or lorentzian (default three)",
    ),
    ("a_angstrom", "chromophore cavity radius (default 3)"),
    ("b_angstrom", "protein radius (default 10)"),
    (
        "c_angstrom",
        "outer radius of the bound-water shell (default b + 4.5)",
    ),
    ("delta_mu_debye", "dipole change on excitation (default 1)"),
    ("cavity_eps", "cavity permittivity (default 1)"),
    (
        "protein",
        "eps_s,eps_inf,tau_ps or a single static eps (default 15,2,10000)",
    ),
    ("bound", "bound-water medium (default 40,4.21,40)"),
    ("solvent", "solvent medium (default 78.3,4.21,8.2)"),
    (
        "alpha",
        "comma list of Lorentzian couplings (model = lorentzian)",
    ),
    (
        "tau_ps",
        "comma list of Lorentzian relaxation times (model = lorentzian)",
    ),
    (
        "labels",
        "comma list of protein, bound or solvent for the Lorentzian terms",
    ),
    ("temperature_K", "temperature (default 300)"),
    ("omega_min", "first frequency, rad/ps"),
    ("omega_max", "last frequency, rad/ps"),
    ("omega_points", "number of frequencies (default 400)"),
    ("omega_scale", "log or linear (default log)"),
    ("t_min", "first time, ps"),
    ("t_max", "last time, ps"),
    ("t_points", "number of times (default 200)"),
    ("t_scale", "log or linear (default log)"),
    (
        "epsilon_cm1",
        "bare transition energy for nu(t) (default 0)",
    ),
    (
        "stokes_convention",
        "printed or derivative (default printed)",
    ),
    (
        "delta_cm1",
        "tunnelling splitting for the regime labels (default 1)",
    ),
    ("input", "correlation data file for fit: t_ps, C[, sigma]"),
    (
        "n_exponentials",
        "number of exponentials to fit (default 2)",
    ),
    ("e_r_cm1", "reorganization energy for the fitted couplings"),
    ("chromophore", "datasets filter, case-insensitive substring"),
    ("protein_name", "datasets filter on the protein column"),
    ("tol", "relative quadrature tolerance (default 1e-7)"),
    ("seed", "fit multi-start seed"),
];

fn known(key: &str) -> bool {
    KEYS.iter().any(|(k, _)| *k == key)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                config_err(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    idx + 1
                ))
            })?;
            cfg.set(k.trim(), v.trim())
                .map_err(|e| config_err(format!("line {}: {}", idx + 1, e.message())))?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if !known(key) {
            return Err(config_err(format!("unknown key `{key}`")));
        }
        if value.is_empty() {
            return Err(config_err(format!("key `{key}` has an empty value")));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Applies `--key value` or `--key=value` pairs.
    pub fn apply_overrides(&mut self, args: &[String]) -> Result<(), CliError> {
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            let Some(body) = arg.strip_prefix("--") else {
                return Err(config_err(format!("expected `--key value`, got `{arg}`")));
            };
            let (key, value) = match body.split_once('=') {
                Some((k, v)) => (k.to_string(), v.to_string()),
                None => {
                    let v = it
                        .next()
                        .ok_or_else(|| config_err(format!("override `--{body}` has no value")))?;
                    (body.to_string(), v.clone())
                }
            };
            self.set(&key.replace('-', "_"), &value)?;
        }
        Ok(())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// SHA-256 of the sorted `key=value` lines.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in &self.values {
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| config_err(format!("key `{key}`: `{v}` is not a finite number")))
            })
            .transpose()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.parse::<usize>().map_err(|_| {
                config_err(format!("key `{key}`: `{v}` is not a non-negative integer"))
            }),
        }
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse::<u64>().map_err(|_| {
                    config_err(format!("key `{key}`: `{v}` is not a non-negative integer"))
                })
            })
            .transpose()
    }

    pub fn list_f64(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .ok_or_else(|| {
                                config_err(format!(
                                    "key `{key}`: `{}` is not a finite number",
                                    x.trim()
                                ))
                            })
                    })
                    .collect()
            })
            .transpose()
    }

    /// One number is a static medium, three are `eps_s, eps_inf, tau_ps`.
    pub fn medium(&self, key: &str, default: DebyeDielectric) -> Result<Dielectric, CliError> {
        let Some(v) = self.list_f64(key)? else {
            return Ok(default.into());
        };
        let built = match v.as_slice() {
            [eps] => StaticDielectric::new(*eps).map(Dielectric::from),
            [s, i, tau] => DebyeDielectric::new(*s, *i, *tau).map(Dielectric::from),
            _ => {
                return Err(config_err(format!(
                    "key `{key}`: expected eps or eps_s,eps_inf,tau_ps, got {} values",
                    v.len()
                )))
            }
        };
        built.map_err(|e| config_err(format!("key `{key}`: {e}")))
    }

    /// Like [`Self::medium`] but requires a relaxing medium.
    pub fn debye(&self, key: &str, default: DebyeDielectric) -> Result<DebyeDielectric, CliError> {
        match self.medium(key, default)? {
            Dielectric::Debye(d) => Ok(d),
            Dielectric::Static(_) => Err(config_err(format!(
                "key `{key}`: this model needs eps_s,eps_inf,tau_ps"
            ))),
        }
    }
}
