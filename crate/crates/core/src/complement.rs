//! Complementary maps, minimal dilations and equivalence witnesses.
//!
//! For `V: H_A → H_B ⊗ H_C` the maps `Tr_C VρV*` and `Tr_B VρV*` are mutually
//! complementary. Two dilations of the same map are related by a partial
//! isometry `W` on the environment, `V' = (I_B ⊗ W) V`, which is what
//! [`equivalence_witness`] recovers.

use num_complex::Complex64;
use serde::Serialize;

use crate::channel::{EquivalenceWitness, KrausMap, StinespringOperator};
use crate::error::{Error, Result};
use crate::numerics::{
    frobenius_norm, hermitian_eigen, operator_norm, partial_trace, ComplexMatrix, Subsystem,
    Tolerances,
};

/// Relative acceptance threshold for "equal up to witness" comparisons.
pub const EQUIVALENCE_TOL: f64 = 1e-9;

/// `ε · max(1, ‖Choi‖)`.
pub fn scaled_tolerance(choi_norm: f64) -> f64 {
    EQUIVALENCE_TOL * choi_norm.max(1.0)
}

/// Complement with environment basis indexed by the Kraus order:
/// `Φ̃(ρ)_{αβ} = Tr V_α ρ V_β*`, Kraus `(Ṽ_j)_α = ⟨e_j| V_α`.
pub fn complement(phi: &KrausMap) -> KrausMap {
    StinespringOperator::from_kraus(phi).to_kraus(Subsystem::C)
}

/// Kraus form with `rank(Choi)` linearly independent operators.
pub fn minimal_form(phi: &KrausMap) -> KrausMap {
    phi.choi()
        .to_kraus(Tolerances::default().rank)
        .expect("the Choi matrix of a Kraus map is PSD")
}

/// Outcome of a witness solve between two dilations.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub witness: EquivalenceWitness,
    /// `‖V' − (I_B ⊗ W) V‖_F`.
    pub residual: f64,
    /// Choi distance between `Φ_C'` and `W Φ_C(·) W*`.
    pub forward_residual: f64,
    /// Choi distance between `Φ_C` and `W* Φ_C'(·) W`.
    pub backward_residual: f64,
    /// Choi distance of the two side-B maps.
    pub channel_residual: f64,
    /// Tolerance the residuals were judged against.
    pub tolerance: f64,
}

impl WitnessReport {
    pub fn passes(&self) -> bool {
        self.residual <= self.tolerance && self.forward_residual <= self.tolerance
    }
}

fn pseudo_inverse(g: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    let (values, vectors) = hermitian_eigen(g);
    let n = g.nrows();
    let top = values.first().copied().unwrap_or(0.0);
    let mut out = ComplexMatrix::zeros(n, n);
    if top <= 0.0 {
        return out;
    }
    for (k, &l) in values.iter().enumerate() {
        if l > rel_tol * top {
            let u = vectors.column(k);
            out += (u * u.adjoint()).unscale(l);
        }
    }
    out
}

fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Solves `V' = (I_B ⊗ W) V` in least squares. Both operators must dilate the
/// same side-B map (checked on Choi matrices).
pub fn equivalence_witness(
    v: &StinespringOperator,
    v2: &StinespringOperator,
) -> Result<WitnessReport> {
    if v.d_a() != v2.d_a() || v.d_b() != v2.d_b() {
        return Err(Error::Shape(format!(
            "dilations act on different spaces: {}→{} vs {}→{}",
            v.d_a(),
            v.d_b(),
            v2.d_a(),
            v2.d_b()
        )));
    }
    let side_b = v.to_kraus(Subsystem::B);
    let side_b2 = v2.to_kraus(Subsystem::B);
    let choi = side_b.choi();
    let tol = scaled_tolerance(choi.norm());
    let channel_residual = choi.distance(&side_b2.choi());
    if channel_residual > tol {
        return Err(Error::NotSameChannel(channel_residual));
    }

    let a = side_b.kraus();
    let a2 = side_b2.kraus();
    let gram = ComplexMatrix::from_fn(a.len(), a.len(), |k, l| hs_inner(&a[k], &a[l]));
    let cross = ComplexMatrix::from_fn(a.len(), a2.len(), |k, l| hs_inner(&a[k], &a2[l]));
    let coeffs = pseudo_inverse(&gram, Tolerances::default().rank) * cross;
    let w = coeffs.transpose();

    let lifted = ComplexMatrix::identity(v.d_b(), v.d_b()).kronecker(&w);
    let residual = frobenius_norm(&(v2.matrix() - lifted * v.matrix()));

    let env = v.to_kraus(Subsystem::C);
    let env2 = v2.to_kraus(Subsystem::C);
    let forward_residual = env2.choi().distance(&env.conjugate_output(&w)?.choi());
    let backward_residual = env
        .choi()
        .distance(&env2.conjugate_output(&w.adjoint())?.choi());

    Ok(WitnessReport {
        witness: EquivalenceWitness::new(w, tol),
        residual,
        forward_residual,
        backward_residual,
        channel_residual,
        tolerance: tol,
    })
}

/// Witness between two maps that are each claimed to be complementary to one
/// common map; each map's Kraus index plays the role of `H_B`.
pub fn complements_witness(c1: &KrausMap, c2: &KrausMap) -> Result<WitnessReport> {
    equivalence_witness(
        &StinespringOperator::from_complement_kraus(c1),
        &StinespringOperator::from_complement_kraus(c2),
    )
}

#[derive(Debug, Clone)]
pub struct DoubleComplementReport {
    pub witness: EquivalenceWitness,
    /// Choi distance between `Φ̃̃` and `W Φ(·) W*`.
    pub residual: f64,
    pub dilation_residual: f64,
}

/// Complements twice and recovers `W` with `Φ̃̃ = W Φ(·) W*`.
///
/// A failed solve is reported through an infinite residual, never an error.
pub fn double_complement_check(phi: &KrausMap) -> DoubleComplementReport {
    let tilde = complement(phi);
    let double = complement(&tilde);
    let seen_from_env = StinespringOperator::from_kraus(phi).swap_factors();
    let redilated = StinespringOperator::from_kraus(&tilde);
    match equivalence_witness(&seen_from_env, &redilated) {
        Ok(report) => {
            let residual = phi
                .conjugate_output(&report.witness.w)
                .map(|m| m.choi().distance(&double.choi()))
                .unwrap_or(f64::INFINITY);
            DoubleComplementReport {
                witness: report.witness,
                residual,
                dilation_residual: report.residual,
            }
        }
        Err(_) => DoubleComplementReport {
            witness: EquivalenceWitness::new(ComplexMatrix::zeros(phi.d_out(), phi.d_out()), 0.0),
            residual: f64::INFINITY,
            dilation_residual: f64::INFINITY,
        },
    }
}

/// `S: H_A ⊗ H_B → H_C` with `Φ_C(ρ) = S(ρ ⊗ I_B)S*`, related to a dilation
/// by `⟨ψ̄_B ⊗ ψ_C|V|ψ_A⟩ = ⟨ψ_C|S|ψ_A ⊗ ψ_B⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SForm {
    d_a: usize,
    d_b: usize,
    d_c: usize,
    #[serde(skip)]
    s: ComplexMatrix,
}

impl SForm {
    pub fn new(d_a: usize, d_b: usize, d_c: usize, s: ComplexMatrix) -> Result<Self> {
        if s.shape() != (d_c, d_a * d_b) {
            return Err(Error::Shape(format!(
                "S must be {d_c}x{}, got {}x{}",
                d_a * d_b,
                s.nrows(),
                s.ncols()
            )));
        }
        Ok(Self { d_a, d_b, d_c, s })
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn d_c(&self) -> usize {
        self.d_c
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.s
    }

    /// `‖Tr_B S*S − I_A‖`, zero for trace-preserving maps.
    pub fn trace_condition_residual(&self) -> f64 {
        let ss = self.s.adjoint() * &self.s;
        let reduced = partial_trace(&ss, self.d_a, self.d_b, Subsystem::B)
            .expect("S*S has the product shape");
        operator_norm(&(reduced - ComplexMatrix::identity(self.d_a, self.d_a)))
    }

    pub fn to_stinespring(&self) -> StinespringOperator {
        let (d_a, d_b, d_c) = (self.d_a, self.d_b, self.d_c);
        let v = ComplexMatrix::from_fn(d_b * d_c, d_a, |row, a| {
            let (b, c) = (row / d_c, row % d_c);
            self.s[(c, a * d_b + b)]
        });
        StinespringOperator::new(d_a, d_b, d_c, v).expect("shapes agree")
    }
}

pub fn s_form(v: &StinespringOperator) -> SForm {
    let (d_a, d_b, d_c) = (v.d_a(), v.d_b(), v.d_c());
    let s = ComplexMatrix::from_fn(d_c, d_a * d_b, |c, col| {
        let (a, b) = (col / d_b, col % d_b);
        v.matrix()[(b * d_c + c, a)]
    });
    SForm { d_a, d_b, d_c, s }
}

/// Kraus operators `S (I_A ⊗ |e_b⟩)` of `ρ ↦ S(ρ ⊗ I_B)S*`.
pub fn s_to_channel(s: &SForm) -> KrausMap {
    let kraus = (0..s.d_b)
        .map(|b| ComplexMatrix::from_fn(s.d_c, s.d_a, |c, a| s.s[(c, a * s.d_b + b)]))
        .collect();
    KrausMap::with_dims(s.d_a, s.d_c, kraus).expect("shapes agree")
}
