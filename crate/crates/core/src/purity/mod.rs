//! Output purity of CP maps: `ν_p`, minimal output entropy and its convex
//! closure `Ĥ`, plus the multiplicativity and additivity gaps built on them.
//!
//! Maximizations return values attained at the reported input, so `ν_p` is a
//! certified lower bound of the true maximum; entropies are certified upper
//! bounds of the true minimum. Restart `i` always starts from the seed
//! `derive_seed(seed, i)`, which makes results independent of scheduling and
//! monotone in the number of restarts.

mod ensemble;
mod sphere;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::channel::KrausMap;
use crate::error::{Error, Result};
use crate::families;
use crate::numerics::{
    derive_seed, hermitian_eigen, hermitian_eigenvalues, partial_trace, random_isometry,
    random_unit_vector, rng_from_seed, von_neumann_entropy, DensityMatrix, PureState, Subsystem,
    DEFAULT_SEED,
};

pub use ensemble::Ensemble;
use ensemble::Support;
use sphere::Objective;

/// Schatten-type exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p >= 1.0 && p.is_finite() {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::Domain(format!(
                "exponent must satisfy p >= 1, got {p}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    fn objective(self) -> Objective {
        match self {
            Exponent::Finite(p) => Objective::Purity(p),
            Exponent::Infinity => Objective::TopEigenvalue,
        }
    }

    /// `(Σ λ^p)^{1/p}`, or the largest entry for `p = ∞`. Scaled by the
    /// largest entry so large `p` neither underflows nor overflows.
    pub fn norm_of_spectrum(self, values: &[f64]) -> f64 {
        let top = values.iter().copied().fold(0.0, f64::max);
        match self {
            Exponent::Finite(_) if top == 0.0 => 0.0,
            Exponent::Finite(p) => {
                top * values
                    .iter()
                    .map(|&l| (l.max(0.0) / top).powf(p))
                    .sum::<f64>()
                    .powf(1.0 / p)
            }
            Exponent::Infinity => top,
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::Domain(format!("cannot parse exponent {s:?}")))?;
                Exponent::new(p)
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Minimal objective improvement over `window` iterations.
    pub tol: f64,
    pub window: usize,
    /// Members per ensemble in `h_hat`; defaults to `rank(ρ)²`.
    pub ensemble_size: Option<usize>,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 50,
            seed: DEFAULT_SEED,
            max_iter: 5000,
            tol: 1e-10,
            window: 20,
            ensemble_size: None,
        }
    }
}

impl OptimizerOptions {
    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn check(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Domain("at least one restart is required".into()));
        }
        if !(self.tol >= 0.0) || self.window == 0 {
            return Err(Error::Domain("convergence window must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PurityKind {
    NuP,
    MinEntropy,
    HHat,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Argmax {
    State(PureState),
    Ensemble(Ensemble),
}

impl Serialize for Argmax {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(1))?;
        match self {
            Argmax::State(psi) => {
                map.serialize_entry("state", &crate::io::encode_vector(psi.amplitudes()))?
            }
            Argmax::Ensemble(e) => map.serialize_entry("ensemble", e)?,
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurityResult {
    pub kind: PurityKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Exponent>,
    pub value: f64,
    pub argmax: Argmax,
    pub restarts_used: usize,
    /// Whether the winning restart met the stopping rule before `max_iter`.
    pub converged: bool,
    pub seed: u64,
    /// Distance between the best value and the best over the first half of
    /// the restarts; a rough measure of how settled the search is.
    pub spread: f64,
}

impl PurityResult {
    pub fn state(&self) -> Option<&PureState> {
        match &self.argmax {
            Argmax::State(s) => Some(s),
            Argmax::Ensemble(_) => None,
        }
    }

    pub fn ensemble(&self) -> Option<&Ensemble> {
        match &self.argmax {
            Argmax::Ensemble(e) => Some(e),
            Argmax::State(_) => None,
        }
    }
}

struct Outcome<T> {
    best: T,
    value: f64,
    converged: bool,
    spread: f64,
}

/// Runs `run(i)` for every restart and keeps the best value, ties going to
/// the lowest index.
fn multistart<T: Send>(
    restarts: usize,
    maximize: bool,
    run: impl Fn(usize) -> (T, f64, bool) + Sync,
) -> Outcome<T> {
    let mut runs: Vec<(T, f64, bool)> = (0..restarts).into_par_iter().map(&run).collect();
    let better = |a: f64, b: f64| if maximize { a > b } else { a < b };
    let best_of = |slice: &[(T, f64, bool)]| {
        let mut best = 0;
        for (i, r) in slice.iter().enumerate() {
            if !slice[best].1.is_finite() || (r.1.is_finite() && better(r.1, slice[best].1)) {
                best = i;
            }
        }
        best
    };
    let best = best_of(&runs);
    let half = best_of(&runs[..restarts.div_ceil(2)]);
    let spread = (runs[best].1 - runs[half].1).abs();
    let (t, value, converged) = runs.swap_remove(best);
    Outcome {
        best: t,
        value,
        converged,
        spread,
    }
}

fn sphere_search(phi: &KrausMap, obj: Objective, opts: &OptimizerOptions) -> Outcome<PureState> {
    let maximize = obj != Objective::Entropy;
    multistart(opts.restarts, maximize, |i| {
        let mut rng = rng_from_seed(derive_seed(opts.seed, i as u64));
        let x0 = random_unit_vector(phi.d_in(), &mut rng);
        let r = sphere::local_search(obj, phi, x0, opts);
        let state = PureState::from_unnormalized(r.x).expect("iterates stay on the unit sphere");
        (state, r.value, r.converged)
    })
}

/// `ν_p(Φ) = max_ψ ‖Φ(ψψ*)‖_p`. For `p = 1` the closed form
/// `λ_max(Σ V_α* V_α)` is returned without search.
pub fn nu_p(phi: &KrausMap, p: Exponent, opts: &OptimizerOptions) -> Result<PurityResult> {
    let p = Exponent::new(p.value())?;
    if p == Exponent::Finite(1.0) {
        let (values, vecs) = hermitian_eigen(&phi.effect());
        let state = PureState::from_unnormalized(vecs.column(0).into_owned())?;
        return Ok(PurityResult {
            kind: PurityKind::NuP,
            p: Some(p),
            value: values[0],
            argmax: Argmax::State(state),
            restarts_used: 0,
            converged: true,
            seed: opts.seed,
            spread: 0.0,
        });
    }
    nu_p_search(phi, p, opts)
}

/// `ν_p` by multi-start local search for every `p`, including `p = 1`.
pub fn nu_p_search(phi: &KrausMap, p: Exponent, opts: &OptimizerOptions) -> Result<PurityResult> {
    let p = Exponent::new(p.value())?;
    opts.check()?;
    let out = sphere_search(phi, p.objective(), opts);
    Ok(PurityResult {
        kind: PurityKind::NuP,
        p: Some(p),
        value: out.value,
        argmax: Argmax::State(out.best),
        restarts_used: opts.restarts,
        converged: out.converged,
        seed: opts.seed,
        spread: out.spread,
    })
}

fn require_trace_preserving(phi: &KrausMap) -> Result<()> {
    if !phi.is_trace_preserving() {
        return Err(Error::Domain(format!(
            "entropy needs a trace-preserving map (residual {:e})",
            phi.trace_preservation_residual()
        )));
    }
    Ok(())
}

/// `Ȟ(Φ) = min_ψ H(Φ(ψψ*))`.
pub fn min_output_entropy(phi: &KrausMap, opts: &OptimizerOptions) -> Result<PurityResult> {
    require_trace_preserving(phi)?;
    opts.check()?;
    let out = sphere_search(phi, Objective::Entropy, opts);
    Ok(PurityResult {
        kind: PurityKind::MinEntropy,
        p: None,
        value: out.value,
        argmax: Argmax::State(out.best),
        restarts_used: opts.restarts,
        converged: out.converged,
        seed: opts.seed,
        spread: out.spread,
    })
}

/// `Ĥ_Φ(ρ)`: smallest average output entropy over pure-state decompositions
/// of `ρ` with at most `ensemble_size` members.
pub fn h_hat(phi: &KrausMap, rho: &DensityMatrix, opts: &OptimizerOptions) -> Result<PurityResult> {
    require_trace_preserving(phi)?;
    opts.check()?;
    if rho.dim() != phi.d_in() {
        return Err(Error::Shape(format!(
            "state has dimension {}, channel input is {}",
            rho.dim(),
            phi.d_in()
        )));
    }
    if !rho.is_normalized() {
        return Err(Error::Validation("h_hat needs a unit-trace state".into()));
    }
    let support = Support::new(rho);
    let r = support.rank();
    if r == 1 {
        let ens = ensemble::spectral_ensemble(rho)?;
        let value = von_neumann_entropy(&phi.apply_state(&ens.states()[0].to_density())?);
        return Ok(PurityResult {
            kind: PurityKind::HHat,
            p: None,
            value,
            argmax: Argmax::Ensemble(ens),
            restarts_used: 0,
            converged: true,
            seed: opts.seed,
            spread: 0.0,
        });
    }
    let m = opts.ensemble_size.unwrap_or(r * r).max(r);
    let out = multistart(opts.restarts, false, |i| {
        let mut rng = rng_from_seed(derive_seed(opts.seed, i as u64));
        let u0 = random_isometry(m, r, &mut rng);
        let res = ensemble::stiefel_descent(phi, &support, u0, opts);
        (res.u, res.value, res.converged)
    });
    Ok(PurityResult {
        kind: PurityKind::HHat,
        p: None,
        value: out.value,
        argmax: Argmax::Ensemble(ensemble::ensemble_from(&support, &out.best)?),
        restarts_used: opts.restarts,
        converged: out.converged,
        seed: opts.seed,
        spread: out.spread,
    })
}

/// Joint value against the two single-channel values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub gap: f64,
    pub joint: f64,
    pub first: f64,
    pub second: f64,
    /// Sum of the optimizer spreads of the three sub-problems.
    pub band: f64,
}

/// `ν_p(Φ1⊗Φ2) − ν_p(Φ1)ν_p(Φ2)`. The joint term is a lower bound, so a
/// positive gap beyond the single-channel spreads indicates a violation.
pub fn multiplicativity_gap(
    phi1: &KrausMap,
    phi2: &KrausMap,
    p: Exponent,
    opts: &OptimizerOptions,
) -> Result<GapReport> {
    let joint = nu_p(&phi1.tensor(phi2)?, p, opts)?;
    let first = nu_p(phi1, p, opts)?;
    let second = nu_p(phi2, p, opts)?;
    Ok(GapReport {
        gap: joint.value - first.value * second.value,
        joint: joint.value,
        first: first.value,
        second: second.value,
        band: joint.spread + first.spread + second.spread,
    })
}

/// `Ȟ(Φ1⊗Φ2) − Ȟ(Φ1) − Ȟ(Φ2)`; negative values point at a violation.
pub fn additivity_gap(
    phi1: &KrausMap,
    phi2: &KrausMap,
    opts: &OptimizerOptions,
) -> Result<GapReport> {
    let joint = min_output_entropy(&phi1.tensor(phi2)?, opts)?;
    let first = min_output_entropy(phi1, opts)?;
    let second = min_output_entropy(phi2, opts)?;
    Ok(GapReport {
        gap: joint.value - first.value - second.value,
        joint: joint.value,
        first: first.value,
        second: second.value,
        band: joint.spread + first.spread + second.spread,
    })
}

/// Slack below which a superadditivity check is flagged for inspection.
pub const ANOMALY_THRESHOLD: f64 = -1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlackReport {
    pub slack: f64,
    pub joint: f64,
    pub first: f64,
    pub second: f64,
    /// Uncertainty band `±band` around `slack`.
    pub band: f64,
    /// `slack < ANOMALY_THRESHOLD`. All three terms are upper bounds, so this
    /// is a flag for inspection rather than a verdict.
    pub anomaly: bool,
}

/// `Ĥ_{Φ1⊗Φ2}(ρ12) − Ĥ_{Φ1}(ρ1) − Ĥ_{Φ2}(ρ2)` with marginals `ρ1`, `ρ2`.
pub fn superadditivity_slack(
    phi1: &KrausMap,
    phi2: &KrausMap,
    rho12: &DensityMatrix,
    opts: &OptimizerOptions,
) -> Result<SlackReport> {
    let (d1, d2) = (phi1.d_in(), phi2.d_in());
    let rho1 = DensityMatrix::new(partial_trace(rho12.matrix(), d1, d2, Subsystem::B)?)?;
    let rho2 = DensityMatrix::new(partial_trace(rho12.matrix(), d1, d2, Subsystem::C)?)?;
    let joint = h_hat(&phi1.tensor(phi2)?, rho12, opts)?;
    let first = h_hat(phi1, &rho1, opts)?;
    let second = h_hat(phi2, &rho2, opts)?;
    let slack = joint.value - first.value - second.value;
    Ok(SlackReport {
        slack,
        joint: joint.value,
        first: first.value,
        second: second.value,
        band: joint.spread + first.spread + second.spread,
        anomaly: slack < ANOMALY_THRESHOLD,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WhWitness {
    pub d: usize,
    pub p: Exponent,
    /// `witness_value / product_value`; above 1 the product rule fails.
    pub ratio: f64,
    /// `‖(Φ⊗Φ)(|Ω⟩⟨Ω|)‖_p` for the maximally entangled `Ω`.
    pub witness_value: f64,
    /// `ν_p(Φ)² = (d−1)^{2(1−p)/p}`, from the flat single-copy output.
    pub product_value: f64,
}

/// Spectrum of `(Φ⊗Φ)(|Ω⟩⟨Ω|)` for the transpose-depolarizing `Φ`.
fn wh_joint_spectrum(d: usize) -> Result<Vec<f64>> {
    let phi = families::transpose_depolarizing(d)?;
    let joint = phi.tensor(&phi)?;
    let out = joint.apply(&families::max_entangled(d).projector())?;
    Ok(hermitian_eigenvalues(&out))
}

fn wh_witness_from(d: usize, p: Exponent, spectrum: &[f64]) -> WhWitness {
    let witness_value = p.norm_of_spectrum(spectrum);
    let base = (d - 1) as f64;
    let product_value = match p {
        Exponent::Finite(p) => base.powf(2.0 * (1.0 - p) / p),
        Exponent::Infinity => base.powi(-2),
    };
    WhWitness {
        d,
        p,
        ratio: witness_value / product_value,
        witness_value,
        product_value,
    }
}

/// Exact multiplicativity test for the transpose-depolarizing channel on the
/// maximally entangled input.
pub fn wh_violation_witness(d: usize, p: Exponent) -> Result<WhWitness> {
    let p = Exponent::new(p.value())?;
    Ok(wh_witness_from(d, p, &wh_joint_spectrum(d)?))
}

/// Smallest `p` above which [`wh_violation_witness`] reports a ratio above 1,
/// to relative precision `1e-10`; `None` if the ratio stays at or below 1 up
/// to `p = ∞`. Assumes a single crossing in `p`.
pub fn wh_violation_threshold(d: usize) -> Result<Option<f64>> {
    let spectrum = wh_joint_spectrum(d)?;
    let violates = |p: Exponent| wh_witness_from(d, p, &spectrum).ratio > 1.0;
    if !violates(Exponent::Infinity) {
        return Ok(None);
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    while !violates(Exponent::Finite(hi)) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e15 {
            return Ok(None);
        }
    }
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if violates(Exponent::Finite(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}
