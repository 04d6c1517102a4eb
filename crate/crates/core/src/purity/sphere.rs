//! Local search over unit input vectors.

use num_complex::Complex64;

use crate::channel::KrausMap;
use crate::numerics::{entropy_of_spectrum, hermitian_eigen, ComplexMatrix, ComplexVector};

use super::OptimizerOptions;

/// Spectral functional of `Φ(ψψ*)` seen as a function of `ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Objective {
    /// `(Tr σ^p)^{1/p}`, maximized.
    Purity(f64),
    /// Largest eigenvalue, maximized.
    TopEigenvalue,
    /// `H(σ)`, minimized.
    Entropy,
}

impl Objective {
    fn sign(self) -> f64 {
        match self {
            Objective::Entropy => -1.0,
            _ => 1.0,
        }
    }
}

/// Columns `V_α ψ`, so that `Φ(ψψ*) = M M*`.
fn images(phi: &KrausMap, x: &ComplexVector) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(phi.d_out(), phi.len());
    for (a, k) in phi.kraus().iter().enumerate() {
        m.set_column(a, &(k * x));
    }
    m
}

fn output(m: &ComplexMatrix) -> ComplexMatrix {
    m * m.adjoint()
}

fn value_of_spectrum(obj: Objective, values: &[f64]) -> f64 {
    match obj {
        Objective::Purity(p) => values
            .iter()
            .map(|&l| l.max(0.0).powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
        Objective::TopEigenvalue => values.first().copied().unwrap_or(0.0).max(0.0),
        Objective::Entropy => {
            let clamped: Vec<f64> = values.iter().map(|&l| l.clamp(0.0, 1.0)).collect();
            entropy_of_spectrum(&clamped)
        }
    }
}

pub(crate) fn evaluate(obj: Objective, phi: &KrausMap, x: &ComplexVector) -> f64 {
    let sigma = output(&images(phi, x));
    let values = crate::numerics::hermitian_eigenvalues(&sigma);
    value_of_spectrum(obj, &values)
}

fn is_even_integer(p: f64) -> bool {
    p.fract() == 0.0 && (p as i64) % 2 == 0
}

fn has_close_pair(values: &[f64], gap: f64) -> bool {
    let positive: Vec<f64> = values.iter().copied().filter(|&l| l > 1e-12).collect();
    positive.windows(2).any(|w| (w[0] - w[1]).abs() < gap)
}

/// Value and Euclidean gradient `∇f` with `df = Re⟨∇f, dψ⟩`.
fn value_and_gradient(obj: Objective, phi: &KrausMap, x: &ComplexVector) -> (f64, ComplexVector) {
    let m = images(phi, x);
    let (values, vecs) = hermitian_eigen(&output(&m));
    let value = value_of_spectrum(obj, &values);
    let weights: Vec<f64> = match obj {
        Objective::Purity(p) => {
            if !is_even_integer(p) && has_close_pair(&values, 1e-8) {
                return (value, finite_difference_gradient(obj, phi, x));
            }
            let total: f64 = values.iter().map(|&l| l.max(0.0).powf(p)).sum();
            if total <= 0.0 {
                return (value, ComplexVector::zeros(x.len()));
            }
            let scale = value / total;
            values
                .iter()
                .map(|&l| {
                    if l > 0.0 {
                        scale * l.powf(p - 1.0)
                    } else {
                        0.0
                    }
                })
                .collect()
        }
        Objective::Entropy => values
            .iter()
            .map(|&l| if l > 0.0 { -l.ln() - 1.0 } else { 0.0 })
            .collect(),
        Objective::TopEigenvalue => {
            let mut w = vec![0.0; values.len()];
            w[0] = 1.0;
            w
        }
    };
    // K = Σ w_i u_i u_i*, gradient 2 Σ_α V_α* K V_α ψ
    let mut k = ComplexMatrix::zeros(vecs.nrows(), vecs.nrows());
    for (i, &w) in weights.iter().enumerate() {
        if w != 0.0 {
            let u = vecs.column(i);
            k += (u * u.adjoint()).scale(w);
        }
    }
    let km = &k * &m;
    let mut grad = ComplexVector::zeros(x.len());
    for (a, op) in phi.kraus().iter().enumerate() {
        grad += op.adjoint() * km.column(a);
    }
    (value, grad.scale(2.0))
}

/// Central differences of the normalized objective along all real
/// coordinate directions.
fn finite_difference_gradient(obj: Objective, phi: &KrausMap, x: &ComplexVector) -> ComplexVector {
    let h = 1e-6;
    let f = |y: ComplexVector| evaluate(obj, phi, &y.unscale(y.norm()));
    let mut grad = ComplexVector::zeros(x.len());
    for k in 0..x.len() {
        for (part, unit) in [(0, Complex64::new(h, 0.0)), (1, Complex64::new(0.0, h))] {
            let mut plus = x.clone();
            plus[k] += unit;
            let mut minus = x.clone();
            minus[k] -= unit;
            let d = (f(plus) - f(minus)) / (2.0 * h);
            if part == 0 {
                grad[k].re = d;
            } else {
                grad[k].im = d;
            }
        }
    }
    grad
}

#[derive(Debug, Clone)]
pub(crate) struct LocalResult {
    pub x: ComplexVector,
    pub value: f64,
    pub converged: bool,
}

struct Stall {
    history: Vec<f64>,
    window: usize,
    tol: f64,
}

impl Stall {
    fn new(opts: &OptimizerOptions, start: f64) -> Self {
        Self {
            history: vec![start],
            window: opts.window,
            tol: opts.tol,
        }
    }

    /// Records an ascent value and reports whether the window improvement
    /// fell below tolerance.
    fn push(&mut self, f: f64) -> bool {
        self.history.push(f);
        let n = self.history.len();
        n > self.window && f - self.history[n - 1 - self.window] < self.tol
    }
}

/// Armijo projected-gradient search on the unit sphere with normalization
/// as retraction.
pub(crate) fn local_search(
    obj: Objective,
    phi: &KrausMap,
    x0: ComplexVector,
    opts: &OptimizerOptions,
) -> LocalResult {
    if obj == Objective::TopEigenvalue {
        return alternating_top(phi, x0, opts);
    }
    let s = obj.sign();
    let mut x = x0.unscale(x0.norm());
    let (v, g) = value_and_gradient(obj, phi, &x);
    let (mut f, mut g) = (s * v, g.scale(s));
    let mut stall = Stall::new(opts, f);
    let mut step = 1.0;
    let mut converged = false;
    for _ in 0..opts.max_iter {
        let radial = x.dotc(&g).re;
        let dir = &g - x.scale(radial);
        let slope = dir.norm_squared();
        if slope < 1e-30 {
            converged = true;
            break;
        }
        let mut t = step;
        let mut accepted = None;
        for _ in 0..60 {
            let trial = &x + dir.scale(t);
            let trial = trial.unscale(trial.norm());
            let ft = s * evaluate(obj, phi, &trial);
            if ft >= f + 1e-4 * t * slope {
                accepted = Some(trial);
                break;
            }
            t *= 0.5;
        }
        let Some(next) = accepted else {
            converged = true;
            break;
        };
        step = (2.0 * t).min(1e8);
        x = next;
        let (v, gn) = value_and_gradient(obj, phi, &x);
        f = s * v;
        g = gn.scale(s);
        if stall.push(f) {
            converged = true;
            break;
        }
    }
    LocalResult {
        value: evaluate(obj, phi, &x),
        x,
        converged,
    }
}

fn top_vector(h: &ComplexMatrix) -> ComplexVector {
    let (_, vecs) = hermitian_eigen(h);
    vecs.column(0).into_owned()
}

/// Alternating maximization of `⟨u|Φ(ψψ*)|u⟩` over unit `u` and `ψ`; each
/// half-step is an exact eigenvector problem, so the top output eigenvalue
/// never decreases.
fn alternating_top(phi: &KrausMap, x0: ComplexVector, opts: &OptimizerOptions) -> LocalResult {
    let mut x = x0.unscale(x0.norm());
    let mut f = evaluate(Objective::TopEigenvalue, phi, &x);
    let mut stall = Stall::new(opts, f);
    let mut converged = false;
    for _ in 0..opts.max_iter {
        let u = top_vector(&output(&images(phi, &x)));
        let dual = phi
            .dual_apply(&(&u * u.adjoint()))
            .expect("dimensions match by construction");
        let next = top_vector(&dual);
        let fn_ = evaluate(Objective::TopEigenvalue, phi, &next);
        if fn_ < f {
            converged = true;
            break;
        }
        x = next;
        f = fn_;
        if stall.push(f) {
            converged = true;
            break;
        }
    }
    LocalResult {
        value: f,
        x,
        converged,
    }
}
