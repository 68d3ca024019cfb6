//! Bundled reference measurements: solvation correlation fits, energy scales
//! and timescales of competing processes.

use csv::StringRecord;

use crate::error::{Error, Result};

use super::{couplings_from_components, Coupling};

const SOLVATION_CSV: &str = include_str!("../../data/table2.csv");
const ENERGY_SCALES_CSV: &str = include_str!("../../data/table1.csv");
const TIMESCALES_CSV: &str = include_str!("../../data/timescales.csv");

/// One exponential of a published fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slot {
    Resolved {
        weight: f64,
        tau: f64,
    },
    /// The decay was faster than the instrument could resolve.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolvationRecord {
    pub chromophore: String,
    pub protein: String,
    pub solvent: String,
    /// Total reorganization energy, cm⁻¹, when reported.
    pub e_r: Option<f64>,
    pub slots: Vec<Slot>,
    pub source: String,
    /// Line in the source CSV.
    pub line: usize,
}

impl SolvationRecord {
    /// Resolved (A_j, τ_j) pairs, τ in ps.
    pub fn components(&self) -> Vec<(f64, f64)> {
        self.slots
            .iter()
            .filter_map(|s| match *s {
                Slot::Resolved { weight, tau } => Some((weight, tau)),
                Slot::Unresolved => None,
            })
            .collect()
    }

    pub fn weight_sum(&self) -> f64 {
        self.components().iter().map(|c| c.0).sum()
    }

    pub fn has_unresolved(&self) -> bool {
        self.slots.contains(&Slot::Unresolved)
    }

    pub fn in_protein(&self) -> bool {
        self.protein != "none"
    }

    /// Ohmic couplings per resolved component, or `None` without E_R.
    pub fn couplings(&self) -> Option<Vec<Coupling>> {
        self.e_r
            .map(|e| couplings_from_components(e, &self.components()))
    }
}

fn field(rec: &StringRecord, idx: usize) -> &str {
    rec.get(idx).unwrap_or("").trim()
}

fn number(rec: &StringRecord, idx: usize, name: &str, line: usize) -> Result<Option<f64>> {
    let raw = field(rec, idx);
    if raw.is_empty() {
        return Ok(None);
    }
    raw.parse::<f64>().map(Some).map_err(|_| Error::Dataset {
        line,
        field: name.into(),
        reason: format!("`{raw}` is not a number"),
    })
}

fn dataset_error(line: usize, field: &str, reason: impl Into<String>) -> Error {
    Error::Dataset {
        line,
        field: field.into(),
        reason: reason.into(),
    }
}

fn records(text: &str, expected: &[&str]) -> Result<Vec<(usize, StringRecord)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(false)
        .from_reader(text.as_bytes());
    let header = rdr
        .headers()
        .map_err(|e| dataset_error(1, "header", e.to_string()))?
        .clone();
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    if names != expected {
        return Err(dataset_error(
            1,
            "header",
            format!("expected {expected:?}, found {names:?}"),
        ));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            dataset_error(line, "row", e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        out.push((line, rec));
    }
    Ok(out)
}

const SOLVATION_HEADER: [&str; 11] = [
    "chromophore",
    "protein",
    "solvent",
    "E_R_cm1",
    "A1",
    "tau1_ps",
    "A2",
    "tau2_ps",
    "A3",
    "tau3_ps",
    "source",
];

/// Parses solvation records. A blank (A, τ) pair followed by a filled one is
/// an unresolved window; trailing blank pairs are absent components.
pub fn parse_solvation_records(text: &str) -> Result<Vec<SolvationRecord>> {
    let mut out = Vec::new();
    for (line, rec) in records(text, &SOLVATION_HEADER)? {
        let e_r = number(&rec, 3, "E_R_cm1", line)?;
        if let Some(e) = e_r {
            if !(e > 0.0) {
                return Err(dataset_error(
                    line,
                    "E_R_cm1",
                    format!("must be > 0, got {e}"),
                ));
            }
        }
        let mut pairs = Vec::new();
        for k in 0..3 {
            let a_name = format!("A{}", k + 1);
            let t_name = format!("tau{}_ps", k + 1);
            let a = number(&rec, 4 + 2 * k, &a_name, line)?;
            let t = number(&rec, 5 + 2 * k, &t_name, line)?;
            match (a, t) {
                (Some(a), Some(t)) => {
                    if !(0.0..=1.0).contains(&a) {
                        return Err(dataset_error(
                            line,
                            &a_name,
                            format!("weight must lie in [0, 1], got {a}"),
                        ));
                    }
                    if !(t > 0.0) {
                        return Err(dataset_error(
                            line,
                            &t_name,
                            format!("must be > 0, got {t}"),
                        ));
                    }
                    pairs.push(Some(Slot::Resolved { weight: a, tau: t }));
                }
                (None, None) => pairs.push(None),
                (Some(_), None) => {
                    return Err(dataset_error(line, &t_name, "weight given without a time"))
                }
                (None, Some(_)) => {
                    return Err(dataset_error(line, &a_name, "time given without a weight"))
                }
            }
        }
        let last = pairs.iter().rposition(Option::is_some);
        let Some(last) = last else {
            return Err(dataset_error(line, "A1", "no components"));
        };
        let slots: Vec<Slot> = pairs[..=last]
            .iter()
            .map(|p| p.unwrap_or(Slot::Unresolved))
            .collect();
        let record = SolvationRecord {
            chromophore: field(&rec, 0).to_string(),
            protein: field(&rec, 1).to_string(),
            solvent: field(&rec, 2).to_string(),
            e_r,
            slots,
            source: field(&rec, 10).to_string(),
            line,
        };
        let sum = record.weight_sum();
        if !(0.98..=1.02).contains(&sum) {
            return Err(dataset_error(
                line,
                "A",
                format!("weights sum to {sum}, outside [0.98, 1.02]"),
            ));
        }
        out.push(record);
    }
    Ok(out)
}

/// The bundled solvation-dynamics fits.
pub fn load_reference_datasets() -> Result<Vec<SolvationRecord>> {
    parse_solvation_records(SOLVATION_CSV)
}

/// Energy range of a process competing with decoherence, meV.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyScale {
    pub process: String,
    pub min_mev: f64,
    pub max_mev: f64,
    pub source: String,
}

/// Time range of a competing process, ps.
#[derive(Debug, Clone, PartialEq)]
pub struct Timescale {
    pub process: String,
    pub min_ps: f64,
    pub max_ps: f64,
    pub source: String,
}

fn ranges(text: &str, header: &[&str]) -> Result<Vec<(String, f64, f64, String)>> {
    let mut out = Vec::new();
    for (line, rec) in records(text, header)? {
        let lo = number(&rec, 1, header[1], line)?
            .ok_or_else(|| dataset_error(line, header[1], "missing"))?;
        let hi = number(&rec, 2, header[2], line)?
            .ok_or_else(|| dataset_error(line, header[2], "missing"))?;
        if !(lo > 0.0) || hi < lo {
            return Err(dataset_error(
                line,
                header[2],
                format!("bad range [{lo}, {hi}]"),
            ));
        }
        out.push((
            field(&rec, 0).to_string(),
            lo,
            hi,
            field(&rec, 3).to_string(),
        ));
    }
    Ok(out)
}

pub fn load_energy_scales() -> Result<Vec<EnergyScale>> {
    Ok(ranges(
        ENERGY_SCALES_CSV,
        &["process", "delta_min_meV", "delta_max_meV", "source"],
    )?
    .into_iter()
    .map(|(process, min_mev, max_mev, source)| EnergyScale {
        process,
        min_mev,
        max_mev,
        source,
    })
    .collect())
}

pub fn load_timescales() -> Result<Vec<Timescale>> {
    Ok(
        ranges(TIMESCALES_CSV, &["process", "min_ps", "max_ps", "source"])?
            .into_iter()
            .map(|(process, min_ps, max_ps, source)| Timescale {
                process,
                min_ps,
                max_ps,
                source,
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_load() {
        let rows = load_reference_datasets().unwrap();
        assert_eq!(rows.len(), 22);
        assert_eq!(rows.iter().filter(|r| r.has_unresolved()).count(), 6);
        assert_eq!(rows.iter().filter(|r| r.e_r.is_none()).count(), 3);
        assert_eq!(load_energy_scales().unwrap().len(), 12);
        assert_eq!(load_timescales().unwrap().len(), 12);
    }

    #[test]
    fn unresolved_window_kept_in_place() {
        let rows = load_reference_datasets().unwrap();
        let dcm = rows.iter().find(|r| r.chromophore == "DCM").unwrap();
        assert_eq!(dcm.slots[0], Slot::Unresolved);
        assert_eq!(dcm.components(), vec![(0.25, 600.0), (0.75, 10000.0)]);
    }

    #[test]
    fn errors_carry_line_and_field() {
        let head = SOLVATION_HEADER.join(",");
        let bad = format!("{head}\nX,none,water,100,0.5,1,0.5,abc,,,s\n");
        match parse_solvation_records(&bad).unwrap_err() {
            Error::Dataset { line, field, .. } => {
                assert_eq!(line, 2);
                assert_eq!(field, "tau2_ps");
            }
            e => panic!("{e}"),
        }
        let sum = format!("{head}\nX,none,water,100,0.5,1,0.3,2,,,s\n");
        assert!(parse_solvation_records(&sum).is_err());
        let half = format!("{head}\nX,none,water,100,0.5,,0.5,2,,,s\n");
        assert!(parse_solvation_records(&half).is_err());
    }
}
