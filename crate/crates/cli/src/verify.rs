use chancomp::families;
use chancomp::gaussian::phase_conjugation;
use chancomp::numerics::{derive_seed, hermitian_eigenvalues, random_pure, spectrum_distance};
use chancomp::{
    complement, complement_gaussian, complements_witness, dilate, min_output_entropy, nu_p,
    wh_violation_threshold, wh_violation_witness, ComplexMatrix, Exponent, GaussianChannel,
    GaussianKind, KrausMap, OptimizerOptions,
};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Spectra,
    NuP,
    MinEntropy,
    TensorComplement,
    WhWitness,
    Gaussian,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Spectra => "spectra",
            Suite::NuP => "nu-p",
            Suite::MinEntropy => "min-entropy",
            Suite::TensorComplement => "tensor-complement",
            Suite::WhWitness => "wh-witness",
            Suite::Gaussian => "gaussian",
        }
    }

    fn default_trials(self) -> usize {
        match self {
            Suite::Spectra => 100,
            Suite::NuP | Suite::MinEntropy | Suite::TensorComplement => 5,
            Suite::WhWitness | Suite::Gaussian => 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteParams {
    pub trials: Option<usize>,
    pub d: Option<usize>,
    pub p: Option<Exponent>,
    pub restarts: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

pub struct SuiteOutcome {
    pub checks: Vec<Check>,
    /// Suite-specific values recorded next to the checks.
    pub extra: Value,
    pub tolerance: f64,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn run(suite: Suite, params: &SuiteParams) -> Result<SuiteOutcome, CliError> {
    let trials = params.trials.unwrap_or(suite.default_trials());
    match suite {
        Suite::Spectra => spectra(trials, params.seed),
        Suite::NuP => nu_p_suite(trials, params),
        Suite::MinEntropy => min_entropy_suite(trials, params),
        Suite::TensorComplement => tensor_complement(trials, params),
        Suite::WhWitness => wh_witness(params),
        Suite::Gaussian => gaussian(),
    }
}

fn positive_spectrum(m: &ComplexMatrix) -> Vec<f64> {
    hermitian_eigenvalues(m)
        .into_iter()
        .filter(|&l| l > 1e-12)
        .collect()
}

const SPECTRA_TOL: f64 = 1e-9;
const PURITY_TOL: f64 = 1e-5;
const WITNESS_TOL: f64 = 1e-9;
const GAUSSIAN_TOL: f64 = 1e-12;

/// Random CP maps with dimensions in {2,3,4} and 1–8 Kraus operators; 20 pure
/// inputs per map.
fn spectra(trials: usize, seed: u64) -> Result<SuiteOutcome, CliError> {
    let dims = [2, 3, 4];
    let mut checks = Vec::with_capacity(trials);
    for t in 0..trials as u64 {
        let s = derive_seed(seed, t);
        let d_in = dims[(s % 3) as usize];
        let d_out = dims[((s >> 8) % 3) as usize];
        let n = 1 + ((s >> 16) % 8) as usize;
        let phi = families::random_cp_map(d_in, d_out, n, s)?;
        let comp = complement(&phi);
        let mut worst: f64 = 0.0;
        for j in 0..20 {
            let rho = random_pure(d_in, derive_seed(s, j)).projector();
            let out = positive_spectrum(&phi.apply(&rho)?);
            let env = positive_spectrum(&comp.apply(&rho)?);
            worst = worst.max(spectrum_distance(&out, &env));
        }
        checks.push(Check::at_most(
            format!("trial {t}: {d_in}->{d_out}, {n} Kraus"),
            worst,
            SPECTRA_TOL,
        ));
    }
    Ok(SuiteOutcome {
        checks,
        extra: json!({ "inputs_per_map": 20 }),
        tolerance: SPECTRA_TOL,
    })
}

fn random_channels(trials: usize, params: &SuiteParams) -> Result<Vec<KrausMap>, CliError> {
    let d = params.d.unwrap_or(2);
    (0..trials as u64)
        .map(|t| {
            let s = derive_seed(params.seed, t);
            let n = 2 + (s % 3) as usize;
            Ok(families::random_channel(d, d, n, s)?)
        })
        .collect()
}

fn optimizer(params: &SuiteParams, t: usize) -> OptimizerOptions {
    OptimizerOptions::default()
        .with_restarts(params.restarts)
        .with_seed(derive_seed(params.seed, 1_000_000 + t as u64))
}

fn nu_p_suite(trials: usize, params: &SuiteParams) -> Result<SuiteOutcome, CliError> {
    let exponents = match params.p {
        Some(p) => vec![p],
        None => vec![
            Exponent::Finite(1.5),
            Exponent::Finite(2.0),
            Exponent::Finite(3.0),
            Exponent::Infinity,
        ],
    };
    let mut checks = Vec::new();
    let mut values = Vec::new();
    for (t, phi) in random_channels(trials, params)?.iter().enumerate() {
        let comp = complement(phi);
        let opts = optimizer(params, t);
        for &p in &exponents {
            let a = nu_p(phi, p, &opts)?;
            let b = nu_p(&comp, p, &opts)?;
            checks.push(Check::at_most(
                format!("trial {t}: p = {p}"),
                (a.value - b.value).abs(),
                PURITY_TOL,
            ));
            values.push(json!({ "trial": t, "p": p, "channel": a.value, "complement": b.value }));
        }
    }
    Ok(SuiteOutcome {
        checks,
        extra: json!({ "values": values }),
        tolerance: PURITY_TOL,
    })
}

fn min_entropy_suite(trials: usize, params: &SuiteParams) -> Result<SuiteOutcome, CliError> {
    let mut checks = Vec::new();
    let mut values = Vec::new();
    for (t, phi) in random_channels(trials, params)?.iter().enumerate() {
        let opts = optimizer(params, t);
        let a = min_output_entropy(phi, &opts)?;
        let b = min_output_entropy(&complement(phi), &opts)?;
        checks.push(Check::at_most(
            format!("trial {t}"),
            (a.value - b.value).abs(),
            PURITY_TOL,
        ));
        values.push(json!({ "trial": t, "channel": a.value, "complement": b.value }));
    }
    Ok(SuiteOutcome {
        checks,
        extra: json!({ "values": values }),
        tolerance: PURITY_TOL,
    })
}

/// `complement(Φ1⊗Φ2)` against `complement(Φ1)⊗complement(Φ2)`.
fn tensor_complement(trials: usize, params: &SuiteParams) -> Result<SuiteOutcome, CliError> {
    let d = params.d.unwrap_or(2);
    let mut checks = Vec::new();
    for t in 0..trials as u64 {
        let (s1, s2) = (
            derive_seed(params.seed, 2 * t),
            derive_seed(params.seed, 2 * t + 1),
        );
        let a = families::random_channel(d, d, 2 + (s1 % 3) as usize, s1)?;
        let b = families::random_channel(d, d, 2 + (s2 % 3) as usize, s2)?;
        let joint = complement(&a.tensor(&b)?);
        let product = complement(&a).tensor(&complement(&b))?;
        let r = complements_witness(&joint, &product)?;
        checks.push(Check::at_most(
            format!("pair {t}"),
            r.residual.max(r.forward_residual),
            WITNESS_TOL,
        ));
    }
    Ok(SuiteOutcome {
        checks,
        extra: json!({ "d": d }),
        tolerance: WITNESS_TOL,
    })
}

/// Eigenvalues of `(Φ⊗Φ)(Ω)` are `2/(d(d−1))` once and `(d−2)/(d(d−1)²)`
/// with multiplicity `d²−1`.
fn wh_closed_form(d: usize, p: Exponent) -> f64 {
    let df = d as f64;
    let top = 2.0 / (df * (df - 1.0));
    let rest = (df - 2.0) / (df * (df - 1.0) * (df - 1.0));
    let mut spectrum = vec![rest; d * d - 1];
    spectrum.push(top);
    let witness = p.norm_of_spectrum(&spectrum);
    let product = match p {
        Exponent::Finite(p) => (df - 1.0).powf(2.0 * (1.0 - p) / p),
        Exponent::Infinity => (df - 1.0).powi(-2),
    };
    witness / product
}

fn wh_witness(params: &SuiteParams) -> Result<SuiteOutcome, CliError> {
    let d = params.d.unwrap_or(4);
    let p = params.p.unwrap_or(Exponent::Finite(30.0));
    let w = wh_violation_witness(d, p)?;
    let oracle = wh_closed_form(d, p);
    let mut checks = vec![Check::at_most(
        "ratio against closed-form spectrum",
        (w.ratio - oracle).abs() / oracle.max(1.0),
        GAUSSIAN_TOL,
    )];
    if p.value() <= 2.0 {
        checks.push(Check::at_most(
            "ratio <= 1 for p <= 2",
            w.ratio - 1.0,
            GAUSSIAN_TOL,
        ));
    }
    Ok(SuiteOutcome {
        checks,
        extra: json!({
            "d": d,
            "p": p,
            "ratio": w.ratio,
            "oracle_ratio": oracle,
            "witness_value": w.witness_value,
            "product_value": w.product_value,
            "violation": w.ratio > 1.0,
            "threshold_p": wh_violation_threshold(d)?,
        }),
        tolerance: GAUSSIAN_TOL,
    })
}

fn max_entry(m: impl IntoIterator<Item = f64>) -> f64 {
    m.into_iter().fold(0.0, |a, v| a.max(v.abs()))
}

fn gaussian() -> Result<SuiteOutcome, CliError> {
    let mut checks = Vec::new();
    for i in 1..=9 {
        let k = i as f64 / 10.0;
        let ch = GaussianChannel::attenuation(k)?;
        let c = complement_gaussian(&ch)?;
        let mut coeff = (c.coeff - (1.0 - k * k).sqrt()).abs();
        if c.kind != GaussianKind::Attenuation {
            coeff = f64::INFINITY;
        }
        checks.push(Check::at_most(
            format!("attenuation {k}: complement coefficient"),
            coeff,
            GAUSSIAN_TOL,
        ));
        checks.push(Check::at_most(
            format!("attenuation {k}: dilation symplectic"),
            dilate(&ch)?.symplectic_residual(),
            GAUSSIAN_TOL,
        ));
    }
    for k in [1.25, 1.5, 2f64.sqrt(), 2.0, 3.0] {
        let ch = GaussianChannel::amplifier(k)?;
        let c = complement_gaussian(&ch)?;
        let expected = GaussianChannel::conjugate_amplifier((k * k - 1.0).sqrt())?;
        let mut dev = max_entry(
            (c.x - expected.x)
                .iter()
                .chain((c.y - expected.y).iter())
                .copied(),
        );
        if c.kind != GaussianKind::ConjugateAmplifier {
            dev = f64::INFINITY;
        }
        checks.push(Check::at_most(
            format!("amplifier {k:.6}: complement"),
            dev,
            GAUSSIAN_TOL,
        ));
        checks.push(Check::at_most(
            format!("amplifier {k:.6}: complement is CP"),
            (-c.cp_margin()).max(0.0),
            GAUSSIAN_TOL,
        ));
    }
    let amp = complement_gaussian(&GaussianChannel::amplifier(2f64.sqrt())?)?;
    let z_dev = max_entry((amp.x - phase_conjugation()).iter().copied());
    Ok(SuiteOutcome {
        checks,
        extra: json!({ "amplifier_sqrt2_complement": amp, "x_minus_z": z_dev }),
        tolerance: GAUSSIAN_TOL,
    })
}
