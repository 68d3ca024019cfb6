use approx::assert_relative_eq;
use chromobath::dynamics::{
    decoherence_gamma, hydration_correlation, phase_shift, DynamicsOptions,
};
use chromobath::fitting::{
    fit_multiexponential, load_reference_datasets, lorentzian_from_fit, CorrelationSamples,
};
use chromobath::spectral::{
    crossover_bound_bulk, crossover_protein_solvent, lorentzian_params, reorganization_energy,
    SpectralDensity,
};
use chromobath::units::constants::HBAR_CM1_PS;
use chromobath::{convert, DebyeDielectric, Error, Quantity, ThreeComponentEnvironment, Unit};

fn environment() -> ThreeComponentEnvironment {
    ThreeComponentEnvironment::new(
        DebyeDielectric::PROTEIN_DEFAULT,
        DebyeDielectric::BOUND_WATER_DEFAULT,
        DebyeDielectric::WATER,
        3.0,
        10.0,
        14.5,
        1.0,
    )
    .unwrap()
}

#[test]
fn environment_to_crossovers() {
    let sum = lorentzian_params(&environment());
    assert_eq!(sum.terms().len(), 3);
    let ps = crossover_protein_solvent(&sum).unwrap();
    let bb = crossover_bound_bulk(&sum).unwrap();
    assert!(ps.analytic > 0.0 && bb.analytic > 0.0);
    assert!(ps.relative_gap().unwrap() < 0.25);
}

#[test]
fn dataset_row_to_decoherence() {
    let rows = load_reference_datasets().unwrap();
    let row = rows
        .iter()
        .find(|r| r.chromophore == "Trp" && r.protein == "SC")
        .unwrap();
    let (t, c): (Vec<f64>, Vec<f64>) = (0..150)
        .map(|i| {
            let t = 0.01 * 1.06f64.powi(i);
            let c = row
                .components()
                .iter()
                .map(|(a, tau)| a * (-t / tau).exp())
                .sum::<f64>();
            (t, c)
        })
        .unzip();
    let fit =
        fit_multiexponential(&CorrelationSamples::from_curve(&t, &c).unwrap(), 2, Some(3)).unwrap();
    assert!(fit.converged);
    let j = SpectralDensity::from(lorentzian_from_fit(row.e_r.unwrap(), &fit).unwrap());
    assert_relative_eq!(
        reorganization_energy(&j).unwrap(),
        1440.0,
        max_relative = 1e-9
    );

    let opts = DynamicsOptions::default();
    assert_relative_eq!(
        hydration_correlation(&j, 0.0, &opts).unwrap(),
        1.0,
        max_relative = 1e-12
    );
    let g1 = decoherence_gamma(&j, 0.01, 300.0, &opts).unwrap();
    let g2 = decoherence_gamma(&j, 0.02, 300.0, &opts).unwrap();
    assert!(g2 > g1 && g1 > 0.0);
    // θ(t) → E_R t/ħ at long times, minus a constant
    let th = phase_shift(&j, 1000.0, &opts).unwrap();
    assert!(th < 1440.0 * 1000.0 / HBAR_CM1_PS);
}

#[test]
fn units_round_trip() {
    let q = Quantity::new(1.0, Unit::MilliElectronVolt);
    let back = convert(
        convert(q, Unit::Wavenumber).unwrap(),
        Unit::MilliElectronVolt,
    )
    .unwrap();
    assert_relative_eq!(back.value, 1.0, max_relative = 1e-14);
    assert!(matches!(
        convert(q, Unit::Picosecond),
        Err(Error::IncompatibleUnits { .. })
    ));
}
