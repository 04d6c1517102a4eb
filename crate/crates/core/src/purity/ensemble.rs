//! Pure-state decompositions of a fixed density matrix.
//!
//! With `ρ = Σ_i λ_i e_i e_i*` of rank `r`, every `m`-member ensemble of `ρ`
//! is `ψ̃_x = Σ_i U_xi √λ_i e_i` for some `m × r` matrix `U` with orthonormal
//! columns, the weights being `π_x = ‖ψ̃_x‖²`. The average output entropy is
//! minimized over `U` on the complex Stiefel manifold.

use serde::Serialize;

use crate::channel::KrausMap;
use crate::error::{Error, Result};
use crate::numerics::{
    entropy_of_spectrum, frobenius_norm, hermitian_eigen, ComplexMatrix, ComplexVector,
    DensityMatrix, PureState, Tolerances,
};

use super::OptimizerOptions;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ensemble {
    weights: Vec<f64>,
    #[serde(serialize_with = "serialize_states")]
    states: Vec<PureState>,
}

fn serialize_states<S: serde::Serializer>(
    states: &[PureState],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(states.len()))?;
    for st in states {
        seq.serialize_element(&crate::io::encode_vector(st.amplitudes()))?;
    }
    seq.end()
}

impl Ensemble {
    pub fn new(weights: Vec<f64>, states: Vec<PureState>) -> Result<Self> {
        if weights.len() != states.len() || weights.is_empty() {
            return Err(Error::Shape(format!(
                "{} weights for {} states",
                weights.len(),
                states.len()
            )));
        }
        if states.iter().any(|s| s.dim() != states[0].dim()) {
            return Err(Error::Shape("ensemble members differ in dimension".into()));
        }
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|&w| !(w >= 0.0)) || (total - 1.0).abs() > Tolerances::default().trace
        {
            return Err(Error::Validation(format!(
                "ensemble weights must be a probability vector (sum {total})"
            )));
        }
        Ok(Self { weights, states })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ_x π_x ψ_x ψ_x*`.
    pub fn density(&self) -> ComplexMatrix {
        let d = self.states[0].dim();
        self.weights
            .iter()
            .zip(&self.states)
            .fold(ComplexMatrix::zeros(d, d), |acc, (&w, s)| {
                acc + s.projector().scale(w)
            })
    }

    /// Frobenius distance between `Σ_x π_x ψ_x ψ_x*` and `rho`.
    pub fn reconstruction_residual(&self, rho: &ComplexMatrix) -> f64 {
        frobenius_norm(&(self.density() - rho))
    }

    /// `Σ_x π_x H(Φ(ψ_x ψ_x*))`.
    pub fn average_output_entropy(&self, phi: &KrausMap) -> Result<f64> {
        let mut total = 0.0;
        for (&w, s) in self.weights.iter().zip(&self.states) {
            let out = phi.apply_state(&s.to_density())?;
            total += w * crate::numerics::von_neumann_entropy(&out);
        }
        Ok(total)
    }
}

/// Spectral data of the target state restricted to its support.
pub(crate) struct Support {
    /// Columns `√λ_i e_i`.
    pub c: ComplexMatrix,
}

impl Support {
    pub fn new(rho: &DensityMatrix) -> Self {
        let (values, vecs) = hermitian_eigen(rho.matrix());
        let top = values.first().copied().unwrap_or(0.0).max(0.0);
        let r = values
            .iter()
            .filter(|&&l| l > 1e-12 * top.max(1.0))
            .count()
            .max(1);
        let mut c = ComplexMatrix::zeros(vecs.nrows(), r);
        for i in 0..r {
            c.set_column(i, &vecs.column(i).scale(values[i].max(0.0).sqrt()));
        }
        Self { c }
    }

    pub fn rank(&self) -> usize {
        self.c.ncols()
    }
}

/// Member `S(σ̃) + π ln π` with `σ̃ = Φ(ψ̃ψ̃*)`, which equals `π H(Φ(ψψ*))`
/// for trace-preserving `Φ`, and optionally its gradient in `ψ̃`.
fn member(phi: &KrausMap, psi: &ComplexVector, with_grad: bool) -> (f64, Option<ComplexVector>) {
    let pi = psi.norm_squared();
    if pi <= 1e-300 {
        return (0.0, with_grad.then(|| ComplexVector::zeros(psi.len())));
    }
    let mut m = ComplexMatrix::zeros(phi.d_out(), phi.len());
    for (a, k) in phi.kraus().iter().enumerate() {
        m.set_column(a, &(k * psi));
    }
    let (values, vecs) = hermitian_eigen(&(&m * m.adjoint()));
    let clamped: Vec<f64> = values.iter().map(|&l| l.clamp(0.0, pi)).collect();
    let value = entropy_of_spectrum(&clamped) + pi * pi.ln();
    if !with_grad {
        return (value, None);
    }
    // gradient 2 Φ*(−ln σ̃ + ln π) ψ̃, restricted to the support of σ̃
    let mut k = ComplexMatrix::identity(vecs.nrows(), vecs.nrows()).scale(pi.ln());
    for (i, &l) in values.iter().enumerate() {
        if l > 0.0 {
            let u = vecs.column(i);
            k -= (u * u.adjoint()).scale(l.ln());
        }
    }
    let km = &k * &m;
    let mut g = ComplexVector::zeros(psi.len());
    for (a, op) in phi.kraus().iter().enumerate() {
        g += op.adjoint() * km.column(a);
    }
    (value, Some(g.scale(2.0)))
}

/// Unnormalized members `ψ̃_x` as columns of `C U^T`.
fn members(support: &Support, u: &ComplexMatrix) -> ComplexMatrix {
    &support.c * u.transpose()
}

pub(crate) fn objective(phi: &KrausMap, support: &Support, u: &ComplexMatrix) -> f64 {
    let psi = members(support, u);
    (0..psi.ncols())
        .map(|x| member(phi, &psi.column(x).into_owned(), false).0)
        .sum()
}

fn objective_and_gradient(
    phi: &KrausMap,
    support: &Support,
    u: &ComplexMatrix,
) -> (f64, ComplexMatrix) {
    let psi = members(support, u);
    let mut total = 0.0;
    let mut gamma = ComplexMatrix::zeros(psi.nrows(), psi.ncols());
    for x in 0..psi.ncols() {
        let (v, g) = member(phi, &psi.column(x).into_owned(), true);
        total += v;
        gamma.set_column(x, &g.expect("gradient requested"));
    }
    // G[x, i] = ⟨c_i | g_x⟩
    let grad = (support.c.adjoint() * gamma).transpose();
    (total, grad)
}

/// Q factor of a thin QR decomposition with the phases of `R`'s diagonal
/// moved into `Q`, which makes the retraction continuous.
fn orthonormalize(a: ComplexMatrix) -> ComplexMatrix {
    let qr = a.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..q.ncols() {
        let d = r[(k, k)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            let mut col = q.column_mut(k);
            col *= phase;
        }
    }
    q
}

pub(crate) struct StiefelResult {
    pub u: ComplexMatrix,
    pub value: f64,
    pub converged: bool,
}

/// Armijo descent on `{U : U*U = I}` with the embedded metric `Re Tr A*B`.
pub(crate) fn stiefel_descent(
    phi: &KrausMap,
    support: &Support,
    u0: ComplexMatrix,
    opts: &OptimizerOptions,
) -> StiefelResult {
    let mut u = orthonormalize(u0);
    let (mut f, mut g) = objective_and_gradient(phi, support, &u);
    let mut history = vec![f];
    let mut step = 1.0;
    let mut converged = false;
    let mut previous: Option<(ComplexMatrix, ComplexMatrix)> = None;
    for _ in 0..opts.max_iter {
        let ug = u.adjoint() * &g;
        let sym = (&ug + ug.adjoint()).scale(0.5);
        let dir = &g - &u * sym;
        let slope = dir.norm_squared();
        if slope < 1e-30 {
            converged = true;
            break;
        }
        // Barzilai-Borwein guess from the last displacement and gradient change
        if let Some((u_prev, dir_prev)) = &previous {
            let s = &u - u_prev;
            let y = &dir - dir_prev;
            let sy: f64 = s.iter().zip(y.iter()).map(|(a, b)| (a.conj() * b).re).sum();
            if sy > 0.0 {
                step = (s.norm_squared() / sy).clamp(1e-10, 1e8);
            }
        }
        previous = Some((u.clone(), dir.clone()));
        let mut t = step;
        let mut accepted = None;
        for _ in 0..60 {
            let trial = orthonormalize(&u - dir.scale(t));
            let ft = objective(phi, support, &trial);
            if ft <= f - 1e-4 * t * slope {
                accepted = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }
        let Some((next, _)) = accepted else {
            converged = true;
            break;
        };
        step = (2.0 * t).min(1e8);
        u = next;
        (f, g) = objective_and_gradient(phi, support, &u);
        history.push(f);
        let n = history.len();
        if n > opts.window && history[n - 1 - opts.window] - f < opts.tol {
            converged = true;
            break;
        }
    }
    StiefelResult {
        value: objective(phi, support, &u),
        u,
        converged,
    }
}

/// Ensemble described by `U`, dropping members of zero weight.
pub(crate) fn ensemble_from(support: &Support, u: &ComplexMatrix) -> Result<Ensemble> {
    let psi = members(support, u);
    let mut weights = Vec::new();
    let mut states = Vec::new();
    for x in 0..psi.ncols() {
        let col = psi.column(x).into_owned();
        let w = col.norm_squared();
        if w > 1e-300 {
            weights.push(w);
            states.push(PureState::from_unnormalized(col)?);
        }
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ensemble::new(weights, states)
}

pub(crate) fn spectral_ensemble(rho: &DensityMatrix) -> Result<Ensemble> {
    let support = Support::new(rho);
    let r = support.rank();
    ensemble_from(&support, &ComplexMatrix::identity(r, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::numerics::{random_density, random_isometry, rng_from_seed};

    #[test]
    fn isometric_mixing_reproduces_target() {
        let rho = random_density(3, 4);
        let support = Support::new(&rho);
        let u = random_isometry(9, support.rank(), &mut rng_from_seed(3));
        let ens = ensemble_from(&support, &u).unwrap();
        assert!(ens.reconstruction_residual(rho.matrix()) < 1e-12);
        let total: f64 = ens.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn objective_matches_direct_average() {
        let phi = families::random_channel(3, 2, 3, 9).unwrap();
        let rho = random_density(3, 10);
        let support = Support::new(&rho);
        let u = random_isometry(9, support.rank(), &mut rng_from_seed(4));
        let ens = ensemble_from(&support, &u).unwrap();
        let direct = ens.average_output_entropy(&phi).unwrap();
        assert!((objective(&phi, &support, &u) - direct).abs() < 1e-10);
    }

    #[test]
    fn stiefel_gradient_matches_differences() {
        let phi = families::random_channel(2, 3, 2, 12).unwrap();
        let rho = random_density(2, 13);
        let support = Support::new(&rho);
        let u = random_isometry(4, 2, &mut rng_from_seed(5));
        let (_, g) = objective_and_gradient(&phi, &support, &u);
        let h = 1e-6;
        for x in 0..4 {
            for i in 0..2 {
                for unit in [
                    num_complex::Complex64::new(h, 0.0),
                    num_complex::Complex64::new(0.0, h),
                ] {
                    let mut p = u.clone();
                    p[(x, i)] += unit;
                    let mut m = u.clone();
                    m[(x, i)] -= unit;
                    let d =
                        (objective(&phi, &support, &p) - objective(&phi, &support, &m)) / (2.0 * h);
                    let analytic = if unit.re != 0.0 {
                        g[(x, i)].re
                    } else {
                        g[(x, i)].im
                    };
                    assert!((d - analytic).abs() < 1e-6, "({x},{i}) {d} vs {analytic}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_weights() {
        let s = PureState::basis(2, 0);
        assert!(Ensemble::new(vec![0.5], vec![s.clone()]).is_err());
        assert!(Ensemble::new(vec![1.5, -0.5], vec![s.clone(), s.clone()]).is_err());
        assert!(Ensemble::new(vec![1.0], vec![s]).is_ok());
    }
}
