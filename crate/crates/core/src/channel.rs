//! Kraus, Stinespring and Choi representations of CP maps.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    check_dim, ensure_hermitian, frobenius_norm, hermitian_eigen, operator_norm, partial_trace,
    random_density, ComplexMatrix, DensityMatrix, Subsystem, Tolerances,
};

/// CP map `ρ ↦ Σ_α V_α ρ V_α*` with every `V_α` of shape `d_out × d_in`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMap {
    d_in: usize,
    d_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausMap {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::Validation("Kraus list is empty".into()))?;
        let (d_out, d_in) = first.shape();
        Self::with_dims(d_in, d_out, kraus)
    }

    pub fn with_dims(d_in: usize, d_out: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Validation("Kraus list is empty".into()));
        }
        if d_in == 0 || d_out == 0 {
            return Err(Error::Shape("channel dimensions must be positive".into()));
        }
        for (i, k) in kraus.iter().enumerate() {
            if k.shape() != (d_out, d_in) {
                return Err(Error::Shape(format!(
                    "Kraus operator {i} is {}x{}, expected {d_out}x{d_in}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            if k.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Validation(format!(
                    "Kraus operator {i} has non-finite entries"
                )));
            }
        }
        Ok(Self { d_in, d_out, kraus })
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn into_kraus(self) -> Vec<ComplexMatrix> {
        self.kraus
    }

    /// Number of Kraus operators, i.e. the environment dimension of the
    /// stacked dilation.
    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `Σ_α V_α* V_α`.
    pub fn effect(&self) -> ComplexMatrix {
        self.kraus
            .iter()
            .fold(ComplexMatrix::zeros(self.d_in, self.d_in), |acc, k| {
                acc + k.adjoint() * k
            })
    }

    pub fn trace_preservation_residual(&self) -> f64 {
        operator_norm(&(self.effect() - ComplexMatrix::identity(self.d_in, self.d_in)))
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.is_trace_preserving_within(Tolerances::default().trace)
    }

    pub fn is_trace_preserving_within(&self, tol: f64) -> bool {
        self.trace_preservation_residual() <= tol
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(Error::Shape(format!(
                "input is {}x{}, channel expects {}x{}",
                rho.nrows(),
                rho.ncols(),
                self.d_in,
                self.d_in
            )));
        }
        Ok(self
            .kraus
            .iter()
            .fold(ComplexMatrix::zeros(self.d_out, self.d_out), |acc, k| {
                acc + k * rho * k.adjoint()
            }))
    }

    /// Applies the map to a state. The output keeps the unit-trace contract
    /// only when the map is trace preserving.
    pub fn apply_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply(rho.matrix())?;
        let out = (&out + out.adjoint()).scale(0.5);
        Ok(DensityMatrix::from_trusted(
            out,
            rho.is_normalized() && self.is_trace_preserving(),
        ))
    }

    /// Heisenberg-picture map `X ↦ Σ_α V_α* X V_α`.
    pub fn dual_apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.shape() != (self.d_out, self.d_out) {
            return Err(Error::Shape(format!(
                "observable is {}x{}, channel output is {}x{}",
                x.nrows(),
                x.ncols(),
                self.d_out,
                self.d_out
            )));
        }
        Ok(self
            .kraus
            .iter()
            .fold(ComplexMatrix::zeros(self.d_in, self.d_in), |acc, k| {
                acc + k.adjoint() * x * k
            }))
    }

    pub fn choi(&self) -> ChoiMatrix {
        ChoiMatrix::from_kraus(self)
    }

    /// `Φ1 ⊗ Φ2` with Kraus operators `V_α ⊗ W_β`, `α` major.
    pub fn tensor(&self, other: &KrausMap) -> Result<KrausMap> {
        check_dim(self.d_in * other.d_in)?;
        check_dim(self.d_out * other.d_out)?;
        let kraus = self
            .kraus
            .iter()
            .flat_map(|a| other.kraus.iter().map(move |b| a.kronecker(b)))
            .collect();
        KrausMap::with_dims(self.d_in * other.d_in, self.d_out * other.d_out, kraus)
    }

    /// The map `ρ ↦ W Φ(ρ) W*`.
    pub fn conjugate_output(&self, w: &ComplexMatrix) -> Result<KrausMap> {
        if w.ncols() != self.d_out {
            return Err(Error::Shape(format!(
                "conjugating operator has {} columns, channel output is {}",
                w.ncols(),
                self.d_out
            )));
        }
        KrausMap::with_dims(
            self.d_in,
            w.nrows(),
            self.kraus.iter().map(|k| w * k).collect(),
        )
    }

    /// Largest operator-norm deviation `‖Φ(U_A ρ U_A*) − U_B Φ(ρ) U_B*‖` over a
    /// probe set of random states drawn from `seed`.
    pub fn covariance_residual(
        &self,
        u_a: &ComplexMatrix,
        u_b: &ComplexMatrix,
        probes: usize,
        seed: u64,
    ) -> Result<f64> {
        ensure_unitary(u_a, self.d_in, "U_A")?;
        ensure_unitary(u_b, self.d_out, "U_B")?;
        let mut worst = 0.0f64;
        for i in 0..probes as u64 {
            let rho = random_density(self.d_in, crate::numerics::derive_seed(seed, i));
            let rho = rho.matrix();
            let lhs = self.apply(&(u_a * rho * u_a.adjoint()))?;
            let rhs = u_b * self.apply(rho)? * u_b.adjoint();
            worst = worst.max(operator_norm(&(lhs - rhs)));
        }
        Ok(worst)
    }
}

pub fn check_covariance(phi: &KrausMap, u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Result<f64> {
    phi.covariance_residual(u_a, u_b, 8, crate::numerics::DEFAULT_SEED)
}

fn ensure_unitary(u: &ComplexMatrix, dim: usize, name: &str) -> Result<()> {
    if u.shape() != (dim, dim) {
        return Err(Error::Shape(format!(
            "{name} is {}x{}, expected {dim}x{dim}",
            u.nrows(),
            u.ncols()
        )));
    }
    let res = operator_norm(&(u.adjoint() * u - ComplexMatrix::identity(dim, dim)));
    if res > 1e-9 {
        return Err(Error::Validation(format!(
            "{name} is not unitary (residual {res:e})"
        )));
    }
    Ok(())
}

/// Operator `V: H_A → H_B ⊗ H_C`, stored as a `(d_B·d_C) × d_A` matrix with
/// row index `b·d_C + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct StinespringOperator {
    d_a: usize,
    d_b: usize,
    d_c: usize,
    v: ComplexMatrix,
}

impl StinespringOperator {
    pub fn new(d_a: usize, d_b: usize, d_c: usize, v: ComplexMatrix) -> Result<Self> {
        if v.shape() != (d_b * d_c, d_a) || d_a == 0 || d_b == 0 || d_c == 0 {
            return Err(Error::Shape(format!(
                "Stinespring operator is {}x{}, expected {}x{d_a}",
                v.nrows(),
                v.ncols(),
                d_b * d_c
            )));
        }
        Ok(Self { d_a, d_b, d_c, v })
    }

    /// Stacks the Kraus operators: `(I_B ⊗ ⟨f_α|) V = V_α`.
    pub fn from_kraus(phi: &KrausMap) -> Self {
        let (d_a, d_b, d_c) = (phi.d_in, phi.d_out, phi.len());
        let v = ComplexMatrix::from_fn(d_b * d_c, d_a, |row, a| {
            let (b, c) = (row / d_c, row % d_c);
            phi.kraus[c][(b, a)]
        });
        Self { d_a, d_b, d_c, v }
    }

    /// Dilation in which a complementary map's Kraus index labels `H_B`:
    /// `(⟨e_b| ⊗ I_C) V = K_b`. Side C of the result reproduces `comp`.
    pub fn from_complement_kraus(comp: &KrausMap) -> Self {
        let (d_a, d_b, d_c) = (comp.d_in, comp.len(), comp.d_out);
        let v = ComplexMatrix::from_fn(d_b * d_c, d_a, |row, a| {
            let (b, c) = (row / d_c, row % d_c);
            comp.kraus[b][(c, a)]
        });
        Self { d_a, d_b, d_c, v }
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
        &self.v
    }

    /// Kraus operators of `Φ_B` (side B, indexed by the C basis) or of `Φ_C`
    /// (side C, indexed by the B basis).
    pub fn to_kraus(&self, side: Subsystem) -> KrausMap {
        let (d_b, d_c) = (self.d_b, self.d_c);
        let kraus = match side {
            Subsystem::B => (0..d_c)
                .map(|c| ComplexMatrix::from_fn(d_b, self.d_a, |b, a| self.v[(b * d_c + c, a)]))
                .collect(),
            Subsystem::C => (0..d_b)
                .map(|b| ComplexMatrix::from_fn(d_c, self.d_a, |c, a| self.v[(b * d_c + c, a)]))
                .collect(),
        };
        let (d_out, _) = match side {
            Subsystem::B => (d_b, d_c),
            Subsystem::C => (d_c, d_b),
        };
        KrausMap::with_dims(self.d_a, d_out, kraus).expect("shapes are consistent by construction")
    }

    /// The same operator viewed as `H_A → H_C ⊗ H_B`.
    pub fn swap_factors(&self) -> Self {
        let (d_b, d_c) = (self.d_b, self.d_c);
        let v = ComplexMatrix::from_fn(d_b * d_c, self.d_a, |row, a| {
            let (c, b) = (row / d_b, row % d_b);
            self.v[(b * d_c + c, a)]
        });
        Self {
            d_a: self.d_a,
            d_b: d_c,
            d_c: d_b,
            v,
        }
    }

    /// `Tr_{other} V ρ V*` keeping the requested factor.
    pub fn reduced(&self, rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
        if rho.shape() != (self.d_a, self.d_a) {
            return Err(Error::Shape("input dimension does not match d_A".into()));
        }
        partial_trace(
            &(&self.v * rho * self.v.adjoint()),
            self.d_b,
            self.d_c,
            keep,
        )
    }

    pub fn isometry_residual(&self) -> f64 {
        operator_norm(&(self.v.adjoint() * &self.v - ComplexMatrix::identity(self.d_a, self.d_a)))
    }
}

/// `Choi(Φ) = Σ_{jk} E_jk ⊗ Φ(E_jk)`, a `(d_in·d_out)²` PSD matrix whose
/// `(j, k)` block is `Φ(|j⟩⟨k|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    d_in: usize,
    d_out: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn new(d_in: usize, d_out: usize, matrix: ComplexMatrix) -> Result<Self> {
        let n = d_in * d_out;
        if matrix.shape() != (n, n) {
            return Err(Error::Shape(format!("Choi matrix must be {n}x{n}")));
        }
        ensure_hermitian(
            &matrix,
            Tolerances::default().herm * crate::numerics::max_abs(&matrix).max(1.0),
        )?;
        Ok(Self {
            d_in,
            d_out,
            matrix,
        })
    }

    pub fn from_kraus(phi: &KrausMap) -> Self {
        let n = phi.d_in * phi.d_out;
        let mut matrix = ComplexMatrix::zeros(n, n);
        for k in &phi.kraus {
            // column-major storage is exactly vec(V)[j·d_out + b] = V[b, j]
            let v = nalgebra::DVector::from_column_slice(k.as_slice());
            matrix += &v * v.adjoint();
        }
        Self {
            d_in: phi.d_in,
            d_out: phi.d_out,
            matrix,
        }
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn norm(&self) -> f64 {
        frobenius_norm(&self.matrix)
    }

    /// Frobenius distance; infinite when the dimensions differ.
    pub fn distance(&self, other: &ChoiMatrix) -> f64 {
        if self.d_in != other.d_in || self.d_out != other.d_out {
            return f64::INFINITY;
        }
        frobenius_norm(&(&self.matrix - &other.matrix))
    }

    /// Number of eigenvalues above `rel_tol · λ_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let values = crate::numerics::hermitian_eigenvalues(&self.matrix);
        let top = values.first().copied().unwrap_or(0.0);
        if top <= 0.0 {
            return 0;
        }
        values.iter().filter(|&&l| l > rel_tol * top).count()
    }

    /// Kraus operators from the eigendecomposition, one per eigenvalue above
    /// `rel_tol · λ_max`. Output order: descending eigenvalue, ties broken by
    /// the lexicographic order of the phase-fixed eigenvector entries.
    pub fn to_kraus(&self, rel_tol: f64) -> Result<KrausMap> {
        let (values, vectors) = hermitian_eigen(&self.matrix);
        let top = values.first().copied().unwrap_or(0.0);
        let bottom = values.last().copied().unwrap_or(0.0);
        let scale = top.max(1.0);
        if bottom < -rel_tol * scale {
            return Err(Error::NotCompletelyPositive(bottom));
        }
        if top <= 0.0 {
            return Err(Error::Validation("Choi matrix is zero".into()));
        }
        let cutoff = rel_tol * top;
        let n = values.len();
        let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
            .filter(|&i| values[i] > cutoff)
            .map(|i| {
                (
                    values[i],
                    phase_fixed(vectors.column(i).iter().copied().collect()),
                )
            })
            .collect();

        // Cluster (near-)degenerate eigenvalues, then order inside each cluster.
        let mut ordered = Vec::with_capacity(pairs.len());
        while !pairs.is_empty() {
            let lead = pairs[0].0;
            let split = pairs
                .iter()
                .position(|(l, _)| lead - l > cutoff)
                .unwrap_or(pairs.len());
            let mut cluster: Vec<_> = pairs.drain(..split).collect();
            cluster.sort_by(|a, b| lex_cmp(&a.1, &b.1));
            ordered.extend(cluster);
        }

        let kraus = ordered
            .into_iter()
            .map(|(l, u)| {
                let s = l.sqrt();
                let scaled: Vec<Complex64> = u.into_iter().map(|z| z * s).collect();
                ComplexMatrix::from_column_slice(self.d_out, self.d_in, &scaled)
            })
            .collect();
        KrausMap::with_dims(self.d_in, self.d_out, kraus)
    }
}

fn phase_fixed(mut u: Vec<Complex64>) -> Vec<Complex64> {
    let max = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(pivot) = u.iter().find(|z| z.norm() >= max - 1e-9).copied() {
        let phase = pivot.conj() / pivot.norm();
        for z in &mut u {
            *z *= phase;
        }
    }
    u
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord.is_ne() {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

pub fn choi(phi: &KrausMap) -> ChoiMatrix {
    phi.choi()
}

pub fn choi_to_kraus(c: &ChoiMatrix, rel_tol: f64) -> Result<KrausMap> {
    c.to_kraus(rel_tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Isometry,
    PartialIsometry,
}

/// Operator `W: H_C → H_C'` relating two dilations by `V' = (I_B ⊗ W) V`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceWitness {
    pub w: ComplexMatrix,
    pub kind: WitnessKind,
}

impl EquivalenceWitness {
    /// Builds the witness and classifies it: an isometry when `W*W = I`.
    pub fn new(w: ComplexMatrix, tol: f64) -> Self {
        let n = w.ncols();
        let kind = if operator_norm(&(w.adjoint() * &w - ComplexMatrix::identity(n, n))) <= tol {
            WitnessKind::Isometry
        } else {
            WitnessKind::PartialIsometry
        };
        Self { w, kind }
    }

    /// `W*W`, the projection onto the initial space.
    pub fn initial_projection(&self) -> ComplexMatrix {
        self.w.adjoint() * &self.w
    }

    /// `WW*`, the projection onto the final space.
    pub fn final_projection(&self) -> ComplexMatrix {
        &self.w * self.w.adjoint()
    }

    /// Largest idempotence defect of `W*W` and `WW*`; zero for a partial isometry.
    pub fn projection_residual(&self) -> f64 {
        let p = self.initial_projection();
        let q = self.final_projection();
        operator_norm(&(&p * &p - &p)).max(operator_norm(&(&q * &q - &q)))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let (r, c) = self.w.shape();
        r == c
            && operator_norm(&(self.initial_projection() - ComplexMatrix::identity(c, c))) <= tol
            && operator_norm(&(self.final_projection() - ComplexMatrix::identity(r, r))) <= tol
    }
}
