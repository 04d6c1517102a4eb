//! One-mode Gaussian channels on quadrature covariance matrices.
//!
//! Conventions: the vacuum has covariance `I`, the symplectic form is
//! `Ω = [[0, 1], [−1, 0]]` and Hermitian conjugation of a mode acts on the
//! quadratures as `Z = diag(1, −1)`. A channel acts as `γ ↦ xγxᵀ + y`.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance for classifying blocks of a dilation.
const CLASSIFY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussianKind {
    Attenuation,
    Amplifier,
    ConjugateAmplifier,
}

pub fn omega() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -1.0, 0.0)
}

pub fn phase_conjugation() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

fn omega4() -> Matrix4<f64> {
    let mut w = Matrix4::zeros();
    w.fixed_view_mut::<2, 2>(0, 0).copy_from(&omega());
    w.fixed_view_mut::<2, 2>(2, 2).copy_from(&omega());
    w
}

fn serialize_m2<S: Serializer>(m: &Matrix2<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]].serialize(s)
}

fn max_entry(m: &Matrix2<f64>) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}

/// Smallest eigenvalue of the Hermitian 2×2 matrix `a`.
fn min_eigenvalue(a: &[[Complex64; 2]; 2]) -> f64 {
    let mean = 0.5 * (a[0][0].re + a[1][1].re);
    let half_diff = 0.5 * (a[0][0].re - a[1][1].re);
    mean - (half_diff * half_diff + a[0][1].norm_sqr()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianChannel {
    pub kind: GaussianKind,
    pub coeff: f64,
    #[serde(serialize_with = "serialize_m2")]
    pub x: Matrix2<f64>,
    #[serde(serialize_with = "serialize_m2")]
    pub y: Matrix2<f64>,
}

impl GaussianChannel {
    /// `a' = ka + √(1−k²)a₀` with `0 < k < 1`.
    pub fn attenuation(k: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Domain(format!(
                "attenuation needs 0 < k < 1, got {k}"
            )));
        }
        Ok(Self {
            kind: GaussianKind::Attenuation,
            coeff: k,
            x: Matrix2::identity() * k,
            y: Matrix2::identity() * (1.0 - k * k),
        })
    }

    /// `a' = ka + √(k²−1)a₀†` with `k > 1`.
    pub fn amplifier(k: f64) -> Result<Self> {
        if !(k > 1.0 && k.is_finite()) {
            return Err(Error::Domain(format!("amplifier needs k > 1, got {k}")));
        }
        Ok(Self {
            kind: GaussianKind::Amplifier,
            coeff: k,
            x: Matrix2::identity() * k,
            y: Matrix2::identity() * (k * k - 1.0),
        })
    }

    /// Phase-conjugating amplifier `x = cZ`, `y = (1+c²)I`, the environment
    /// output of `amplifier(√(1+c²))`.
    pub fn conjugate_amplifier(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!(
                "conjugate amplifier needs c > 0, got {c}"
            )));
        }
        Ok(Self {
            kind: GaussianKind::ConjugateAmplifier,
            coeff: c,
            x: phase_conjugation() * c,
            y: Matrix2::identity() * (1.0 + c * c),
        })
    }

    pub fn apply(&self, gamma: &Matrix2<f64>) -> Matrix2<f64> {
        self.x * gamma * self.x.transpose() + self.y
    }

    /// Smallest eigenvalue of `y − iΩ + i xΩxᵀ`; non-negative iff the
    /// channel is completely positive.
    pub fn cp_margin(&self) -> f64 {
        let w = omega();
        let twisted = self.x * w * self.x.transpose() - w;
        let mut a = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                a[r][c] = Complex64::new(self.y[(r, c)], twisted[(r, c)]);
            }
        }
        min_eigenvalue(&a)
    }

    pub fn is_completely_positive(&self) -> bool {
        self.cp_margin() >= -CLASSIFY_TOL
    }

    /// The same channel with its environment mode prepared in `env` instead
    /// of the vacuum; only `y` changes.
    pub fn with_environment(&self, env: &Matrix2<f64>) -> Result<Self> {
        check_covariance(env)?;
        let d = dilate(self)?;
        Ok(Self {
            y: d.coupling() * env * d.coupling().transpose(),
            ..*self
        })
    }
}

/// Checks `γ = γᵀ` and `γ + iΩ ⪰ 0`.
pub fn check_covariance(gamma: &Matrix2<f64>) -> Result<()> {
    if (gamma[(0, 1)] - gamma[(1, 0)]).abs() > CLASSIFY_TOL * max_entry(gamma).max(1.0) {
        return Err(Error::Validation(
            "covariance matrix is not symmetric".into(),
        ));
    }
    let w = omega();
    let mut a = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            a[r][c] = Complex64::new(gamma[(r, c)], w[(r, c)]);
        }
    }
    let margin = min_eigenvalue(&a);
    if margin < -CLASSIFY_TOL {
        return Err(Error::Validation(format!(
            "covariance violates the uncertainty relation (margin {margin:e})"
        )));
    }
    Ok(())
}

/// Symplectic map on stacked quadratures `(q, p, q₀, p₀)` of system and
/// environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovDilation {
    pub s: Matrix4<f64>,
}

impl BogoliubovDilation {
    fn block(&self, r: usize, c: usize) -> Matrix2<f64> {
        self.s.fixed_view::<2, 2>(2 * r, 2 * c).into_owned()
    }

    /// Environment-to-system block.
    fn coupling(&self) -> Matrix2<f64> {
        self.block(0, 1)
    }

    /// Largest entry of `sΩ₄sᵀ − Ω₄`.
    pub fn symplectic_residual(&self) -> f64 {
        let w = omega4();
        (self.s * w * self.s.transpose() - w).amax()
    }

    /// Output covariance of `γ ⊕ env`.
    pub fn joint_output(&self, gamma: &Matrix2<f64>, env: &Matrix2<f64>) -> Matrix4<f64> {
        let mut input = Matrix4::zeros();
        input.fixed_view_mut::<2, 2>(0, 0).copy_from(gamma);
        input.fixed_view_mut::<2, 2>(2, 2).copy_from(env);
        self.s * input * self.s.transpose()
    }

    /// `(x, y)` seen by the system output.
    pub fn system_action(&self, env: &Matrix2<f64>) -> (Matrix2<f64>, Matrix2<f64>) {
        let b = self.block(0, 1);
        (self.block(0, 0), b * env * b.transpose())
    }

    /// `(x, y)` seen by the environment output.
    pub fn environment_action(&self, env: &Matrix2<f64>) -> (Matrix2<f64>, Matrix2<f64>) {
        let d = self.block(1, 1);
        (self.block(1, 0), d * env * d.transpose())
    }
}

fn from_blocks(a: Matrix2<f64>, b: Matrix2<f64>, c: Matrix2<f64>, d: Matrix2<f64>) -> Matrix4<f64> {
    let mut s = Matrix4::zeros();
    s.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
    s.fixed_view_mut::<2, 2>(0, 2).copy_from(&b);
    s.fixed_view_mut::<2, 2>(2, 0).copy_from(&c);
    s.fixed_view_mut::<2, 2>(2, 2).copy_from(&d);
    s
}

/// Beamsplitter for attenuation, two-mode squeezer for amplification.
pub fn dilate(ch: &GaussianChannel) -> Result<BogoliubovDilation> {
    let i = Matrix2::identity();
    let z = phase_conjugation();
    let k = ch.coeff;
    let s = match ch.kind {
        GaussianKind::Attenuation => {
            let t = (1.0 - k * k).sqrt();
            from_blocks(i * k, i * t, i * t, -i * k)
        }
        GaussianKind::Amplifier => {
            let t = (k * k - 1.0).sqrt();
            from_blocks(i * k, z * t, z * t, i * k)
        }
        GaussianKind::ConjugateAmplifier => {
            return Err(Error::Domain(
                "only attenuation and amplifier channels have a built-in dilation".into(),
            ))
        }
    };
    Ok(BogoliubovDilation { s })
}

/// Reads the environment output of the dilation with vacuum environment and
/// names the resulting channel.
pub fn complement_gaussian(ch: &GaussianChannel) -> Result<GaussianChannel> {
    let d = dilate(ch)?;
    let (x, y) = d.environment_action(&Matrix2::identity());
    classify(x, y)
}

fn classify(x: Matrix2<f64>, y: Matrix2<f64>) -> Result<GaussianChannel> {
    let i = Matrix2::identity();
    let z = phase_conjugation();
    let c = x[(0, 0)];
    let close = |a: Matrix2<f64>, b: Matrix2<f64>| max_entry(&(a - b)) <= CLASSIFY_TOL;
    let candidate = if close(x, i * c) && c > 0.0 && c < 1.0 {
        GaussianChannel::attenuation(c)?
    } else if close(x, i * c) && c > 1.0 {
        GaussianChannel::amplifier(c)?
    } else if close(x, z * c) && c > 0.0 {
        GaussianChannel::conjugate_amplifier(c)?
    } else {
        return Err(Error::Domain(
            "environment output is not a recognised one-mode family".into(),
        ));
    };
    if !close(y, candidate.y) {
        return Err(Error::Domain(
            "environment noise does not match the recognised family".into(),
        ));
    }
    Ok(GaussianChannel { x, y, ..candidate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rng_from_seed;
    use rand::Rng;

    fn grid() -> Vec<GaussianChannel> {
        let mut v: Vec<_> = (1..=9)
            .map(|i| GaussianChannel::attenuation(i as f64 / 10.0).unwrap())
            .collect();
        v.extend((11..=30).map(|i| GaussianChannel::amplifier(i as f64 / 10.0).unwrap()));
        v
    }

    fn random_covariance(rng: &mut impl Rng) -> Matrix2<f64> {
        // symplectic squeeze-rotate of a thermal state
        let r: f64 = rng.random_range(-1.0..1.0);
        let th: f64 = rng.random_range(0.0..std::f64::consts::PI);
        let n: f64 = rng.random_range(1.0..3.0);
        let rot = Matrix2::new(th.cos(), -th.sin(), th.sin(), th.cos());
        let sq = Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp());
        let s = rot * sq;
        s * Matrix2::identity() * n * s.transpose()
    }

    #[test]
    fn range_checks() {
        assert!(GaussianChannel::attenuation(1.0).is_err());
        assert!(GaussianChannel::attenuation(0.0).is_err());
        assert!(GaussianChannel::amplifier(1.0).is_err());
        assert!(GaussianChannel::amplifier(f64::NAN).is_err());
    }

    #[test]
    fn vacuum_examples() {
        let att = GaussianChannel::attenuation(0.6).unwrap();
        assert!(max_entry(&(att.apply(&Matrix2::identity()) - Matrix2::identity())) < 1e-15);
        let amp = GaussianChannel::amplifier(2f64.sqrt()).unwrap();
        assert!(max_entry(&(amp.apply(&Matrix2::identity()) - Matrix2::identity() * 3.0)) < 1e-14);
        let near = GaussianChannel::attenuation(1.0 - 1e-12).unwrap();
        assert!(max_entry(&(near.x - Matrix2::identity())) < 1e-11);
        assert!(max_entry(&near.y) < 1e-11);
    }

    #[test]
    fn dilations_are_symplectic_and_reproduce_channel() {
        let mut rng = rng_from_seed(3);
        for ch in grid() {
            let d = dilate(&ch).unwrap();
            assert!(d.symplectic_residual() < 1e-12, "{ch:?}");
            for _ in 0..10 {
                let g = random_covariance(&mut rng);
                let out = d.joint_output(&g, &Matrix2::identity());
                let sys = out.fixed_view::<2, 2>(0, 0).into_owned();
                assert!(max_entry(&(sys - ch.apply(&g))) < 1e-12);
            }
        }
    }

    #[test]
    fn complement_coefficient_law() {
        let c = complement_gaussian(&GaussianChannel::attenuation(0.6).unwrap()).unwrap();
        assert_eq!(c.kind, GaussianKind::Attenuation);
        assert!((c.coeff - 0.8).abs() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = complement_gaussian(&GaussianChannel::attenuation(h).unwrap()).unwrap();
        assert!((c.coeff - h).abs() < 1e-12);
        let c = complement_gaussian(&GaussianChannel::amplifier(2f64.sqrt()).unwrap()).unwrap();
        assert_eq!(c.kind, GaussianKind::ConjugateAmplifier);
        assert!(max_entry(&(c.x - phase_conjugation())) < 1e-12);
        assert!(max_entry(&(c.y - Matrix2::identity() * 2.0)) < 1e-12);
    }

    #[test]
    fn complement_round_trip() {
        for i in 1..=9 {
            let k = i as f64 / 10.0;
            let ch = GaussianChannel::attenuation(k).unwrap();
            let back = complement_gaussian(&complement_gaussian(&ch).unwrap()).unwrap();
            assert_eq!(back.kind, GaussianKind::Attenuation);
            assert!((back.coeff - k).abs() < 1e-12);
        }
    }

    #[test]
    fn complete_positivity_everywhere() {
        for ch in grid() {
            assert!(ch.is_completely_positive(), "{ch:?}");
            assert!(complement_gaussian(&ch).unwrap().is_completely_positive());
        }
        let bad = GaussianChannel {
            y: Matrix2::zeros(),
            ..GaussianChannel::attenuation(0.5).unwrap()
        };
        assert!(!bad.is_completely_positive());
    }

    #[test]
    fn thermal_environment_changes_noise_only() {
        let ch = GaussianChannel::attenuation(0.6).unwrap();
        let hot = ch.with_environment(&(Matrix2::identity() * 3.0)).unwrap();
        assert_eq!(hot.x, ch.x);
        assert!(max_entry(&(hot.y - Matrix2::identity() * (0.64 * 3.0))) < 1e-14);
        assert!(hot.is_completely_positive());
        assert!(ch.with_environment(&(Matrix2::identity() * 0.5)).is_err());
    }

    #[test]
    fn conjugate_amplifier_has_no_dilation() {
        let c = GaussianChannel::conjugate_amplifier(1.0).unwrap();
        assert!(dilate(&c).is_err());
    }
}
