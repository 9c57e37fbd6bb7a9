//! Transfer matrices, Weyl solutions, zero-counting measures, Lyapunov
//! exponents, and the Thouless formula.
//!
//! The recursion for the orthonormal polynomials is a product of 2x2
//! matrices: with `A(z, α) = ρ^{-1} [[z, -conj(α)], [-α z, 1]]`,
//!
//! ```text
//! T_n(z) = A(z, α_{n-1}) ⋯ A(z, α_0),
//! T_n (1, 1)^t = (φ_n, φ_n*)^t,   T_n (1, -1)^t = (ψ_n, -ψ_n*)^t,
//! det T_n = z^n,
//! ```
//!
//! where `ψ_n` are the second-kind polynomials (the family of the
//! sign-flipped coefficients). The Carathéodory value `F(z)` singles out
//! the decaying direction: `(F φ_n + ψ_n, F φ_n* - ψ_n*)` shrinks like
//! `|z|^n` while every other initial vector rides the bounded-or-growing
//! direction — that contrast is the Weyl-solution characterization, and
//! `weyl_residual` measures it.
//!
//! On the statistical side: the zeros of `Φ_n` induce the normalized
//! zero-counting measure, whose moments are traces of powers of the CMV
//! section; ergodic coefficient families have a Lyapunov exponent
//! `γ(z) = lim (1/n) log ‖T_n(z)‖`, tied to the zero distribution `ν` and
//! the geometric mean `ρ_∞` of the `ρ_j` by the Thouless formula
//! `γ(z) = -log ρ_∞ + ∫ log|e^{iθ} - z| dν(θ)`.

use crate::cmv::{build_cmv, phi_zeros};
use crate::eigen;
use crate::error::{Error, Result};
use crate::measure::CircleMeasure;
use crate::poly::ComplexPoly;
use crate::szego::{szego_forward, VerblunskySeq};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A product of one-step transfer matrices, with its bookkeeping.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    entries: [[Complex64; 2]; 2],
    steps: usize,
    z: Complex64,
}

impl TransferMatrix {
    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn det(&self) -> Complex64 {
        self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
    }

    /// Applies the matrix to a 2-vector.
    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.entries[0][0] * v[0] + self.entries[0][1] * v[1],
            self.entries[1][0] * v[0] + self.entries[1][1] * v[1],
        ]
    }

    /// Spectral norm (largest singular value), in closed form for 2x2.
    pub fn spectral_norm(&self) -> f64 {
        spectral_norm_2x2(&self.entries)
    }
}

fn spectral_norm_2x2(m: &[[Complex64; 2]; 2]) -> f64 {
    let frob_sq: f64 = m.iter().flatten().map(|c| c.norm_sqr()).sum();
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (frob_sq * frob_sq - 4.0 * det.norm_sqr()).max(0.0).sqrt();
    (0.5 * (frob_sq + disc)).sqrt()
}

/// One Szegő step as a matrix: `A(z, α) = ρ^{-1} [[z, -conj(α)], [-α z, 1]]`.
fn step_matrix(z: Complex64, alpha: Complex64) -> [[Complex64; 2]; 2] {
    let rho_inv = 1.0 / (1.0 - alpha.norm_sqr()).sqrt();
    [
        [rho_inv * z, -rho_inv * alpha.conj()],
        [-rho_inv * alpha * z, Complex64::new(rho_inv, 0.0)],
    ]
}

fn mat2_mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// The `n`-step transfer matrix `T_n(z) = A(z, α_{n-1}) ⋯ A(z, α_0)`.
pub fn transfer(alpha: &VerblunskySeq, n: usize, z: Complex64) -> Result<TransferMatrix> {
    if n > alpha.interior().len() {
        return Err(Error::invalid(format!(
            "{n} transfer steps need {n} interior coefficients, have {}",
            alpha.interior().len()
        )));
    }
    let mut prod = [[ONE, Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), ONE]];
    for j in 0..n {
        prod = mat2_mul(&step_matrix(z, alpha.alpha(j)), &prod);
    }
    Ok(TransferMatrix {
        entries: prod,
        steps: n,
        z,
    })
}

/// Orthonormal second-kind polynomials `(ψ_n, ψ_n*)`: the family of the
/// sign-flipped coefficient sequence.
pub fn second_kind(alpha: &VerblunskySeq, n: usize) -> Result<(ComplexPoly, ComplexPoly)> {
    if n > alpha.interior().len() {
        return Err(Error::invalid(format!(
            "second-kind degree {n} needs {n} interior coefficients, have {}",
            alpha.interior().len()
        )));
    }
    let fam = szego_forward(&alpha.interior().prefix(n).sign_flipped())?;
    Ok((fam.orthonormal(n), fam.orthonormal_star(n)))
}

/// Weyl-solution residuals at a point of the disk:
/// `(|F φ_n + ψ_n|, |F φ_n* - ψ_n*|)` for a caller-supplied Carathéodory
/// value `F = F(z)`.
///
/// With the true `F` both components decay: the first is bounded by
/// `2|z|^n/(1-|z|)` and the second by `2|z|^{n+1}/(1-|z|)`. Any other
/// value of `F` leaks the non-decaying solution into the pair — the
/// second component then stalls near `|F - F_true| · |φ_n*(z)|` instead
/// of vanishing, which is the computable face of the uniqueness half of
/// the Weyl characterization.
pub fn weyl_residual(
    alpha: &VerblunskySeq,
    n: usize,
    z: Complex64,
    f_value: Complex64,
) -> Result<(f64, f64)> {
    if z.norm() >= 1.0 {
        return Err(Error::OutsideDisk { modulus: z.norm() });
    }
    let prefix = alpha.interior();
    if n > prefix.len() {
        return Err(Error::invalid(format!(
            "Weyl residual at step {n} needs {n} interior coefficients, have {}",
            prefix.len()
        )));
    }
    let t = transfer(&prefix, n, z)?;
    // T_n (F+1, F-1)^t = (F φ_n + ψ_n, F φ_n* - ψ_n*)^t.
    let v = t.apply([f_value + ONE, f_value - ONE]);
    Ok((v[0].norm(), v[1].norm()))
}

/// Moments of the zero-counting measure of `Φ_n`:
/// `m_ℓ = (1/n) Σ_k z_k^ℓ = (1/n) Tr [C^(n)]^ℓ` for `ℓ = 1 ..= L`,
/// computed from traces of CMV powers.
pub fn zero_counting_moments(
    alpha: &VerblunskySeq,
    n: usize,
    l_max: usize,
) -> Result<Vec<Complex64>> {
    if l_max == 0 {
        return Err(Error::invalid("need at least one moment"));
    }
    let c = build_cmv(alpha, n)?;
    let mut power = c.dense().clone();
    let mut out = Vec::with_capacity(l_max);
    for _ in 0..l_max {
        let trace: Complex64 = (0..n).map(|i| power[i][i]).sum();
        out.push(trace / n as f64);
        power = eigen::mat_mul(&power, c.dense());
    }
    Ok(out)
}

/// The same moments from the zeros themselves (power sums over
/// [`phi_zeros`] divided by `n`) — the independent route for
/// cross-checking the trace computation.
pub fn zero_counting_moments_from_roots(
    alpha: &VerblunskySeq,
    n: usize,
    l_max: usize,
) -> Result<Vec<Complex64>> {
    let zeros = phi_zeros(alpha, n)?;
    Ok((1..=l_max)
        .map(|l| {
            zeros
                .iter()
                .map(|z| z.powi(l as i32))
                .sum::<Complex64>()
                / n as f64
        })
        .collect())
}

/// Ergodic/random coefficient families for Lyapunov experiments. Every
/// variant realizes deterministically (sampling uses a seeded
/// counter-based generator).
#[derive(Debug, Clone)]
pub enum ErgodicSpec {
    /// Independent draws, uniform on the closed disk of the given radius
    /// (strictly less than 1).
    IidUniformDisk { radius: f64, length: usize, seed: u64 },
    /// A fixed, explicitly supplied sequence.
    Fixed { alphas: Vec<Complex64> },
    /// Almost-periodic rotation orbit `α_j = a e^{i(2π β j + θ_0)}`.
    RotationAlmostPeriodic {
        amplitude: f64,
        frequency: f64,
        phase: f64,
        length: usize,
    },
    /// Sparse pattern: `α_j = value` when `j + 1` is a multiple of
    /// `period`, zero otherwise.
    Sparse {
        period: usize,
        value: Complex64,
        length: usize,
    },
}

impl ErgodicSpec {
    pub fn len(&self) -> usize {
        match self {
            ErgodicSpec::IidUniformDisk { length, .. } => *length,
            ErgodicSpec::Fixed { alphas } => alphas.len(),
            ErgodicSpec::RotationAlmostPeriodic { length, .. } => *length,
            ErgodicSpec::Sparse { length, .. } => *length,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Materializes the coefficient sequence.
    pub fn realize(&self) -> Result<VerblunskySeq> {
        match self {
            ErgodicSpec::IidUniformDisk {
                radius,
                length,
                seed,
            } => {
                if !(0.0..1.0).contains(radius) {
                    return Err(Error::invalid(format!(
                        "iid disk radius {radius} must lie in [0, 1)"
                    )));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let alphas = (0..*length)
                    .map(|_| {
                        let r = radius * rng.gen::<f64>().sqrt();
                        let phase = rng.gen::<f64>() * TAU;
                        Complex64::from_polar(r, phase)
                    })
                    .collect();
                VerblunskySeq::new(alphas)
            }
            ErgodicSpec::Fixed { alphas } => VerblunskySeq::new(alphas.clone()),
            ErgodicSpec::RotationAlmostPeriodic {
                amplitude,
                frequency,
                phase,
                length,
            } => {
                if !(0.0..1.0).contains(amplitude) {
                    return Err(Error::invalid(format!(
                        "almost-periodic amplitude {amplitude} must lie in [0, 1)"
                    )));
                }
                let alphas = (0..*length)
                    .map(|j| Complex64::from_polar(*amplitude, TAU * frequency * j as f64 + phase))
                    .collect();
                VerblunskySeq::new(alphas)
            }
            ErgodicSpec::Sparse {
                period,
                value,
                length,
            } => {
                if *period == 0 {
                    return Err(Error::invalid("sparse pattern needs period >= 1"));
                }
                let zero = Complex64::new(0.0, 0.0);
                let alphas = (0..*length)
                    .map(|j| if (j + 1) % period == 0 { *value } else { zero })
                    .collect();
                VerblunskySeq::new(alphas)
            }
        }
    }
}

/// Steps between norm renormalizations in the Lyapunov product.
const RENORM_INTERVAL: usize = 32;

/// Finite-`n` Lyapunov estimate `(1/n) log ‖T_n(z)‖` for an ergodic
/// family, with periodic rescaling so the product never overflows.
pub fn lyapunov(spec: &ErgodicSpec, z: Complex64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("Lyapunov estimates need n >= 1"));
    }
    if n > spec.len() {
        return Err(Error::invalid(format!(
            "Lyapunov estimate at n = {n} exceeds the family length {}",
            spec.len()
        )));
    }
    let alpha = spec.realize()?;
    let mut prod = [[ONE, Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), ONE]];
    let mut log_acc = 0.0f64;
    for j in 0..n {
        prod = mat2_mul(&step_matrix(z, alpha.alpha(j)), &prod);
        if (j + 1) % RENORM_INTERVAL == 0 {
            let norm = spectral_norm_2x2(&prod);
            if norm > 0.0 {
                log_acc += norm.ln();
                let inv = 1.0 / norm;
                for row in prod.iter_mut() {
                    for e in row.iter_mut() {
                        *e *= inv;
                    }
                }
            }
        }
    }
    Ok((log_acc + spectral_norm_2x2(&prod).ln()) / n as f64)
}

/// Geometric mean `ρ_∞ = (ρ_0 ⋯ ρ_{n-1})^{1/n}` of a realized sequence.
pub fn rho_infinity(alpha: &VerblunskySeq) -> Result<f64> {
    let interior = alpha.interior();
    if interior.is_empty() {
        return Err(Error::invalid("geometric mean of an empty sequence"));
    }
    let log_mean: f64 = (0..interior.len())
        .map(|j| interior.rho(j).ln())
        .sum::<f64>()
        / interior.len() as f64;
    Ok(log_mean.exp())
}

/// Margin by which Thouless evaluation points must avoid the unit circle.
const CIRCLE_MARGIN: f64 = 1e-3;

/// The right-hand side of the Thouless formula,
/// `-log ρ_∞ + ∫ log|e^{iθ} - z| dν(θ)`, for a zero-distribution measure
/// `ν` on the circle.
pub fn thouless_rhs(nu: &CircleMeasure, rho_inf: f64, z: Complex64) -> Result<f64> {
    if (z.norm() - 1.0).abs() < CIRCLE_MARGIN {
        return Err(Error::invalid(format!(
            "|z| = {} is within {CIRCLE_MARGIN} of the unit circle; the log kernel is singular there",
            z.norm()
        )));
    }
    if rho_inf <= 0.0 {
        return Err(Error::invalid("rho_inf must be positive"));
    }
    let integral = nu
        .integrate(|theta| {
            let w = (Complex64::from_polar(1.0, theta) - z).norm();
            Complex64::new(w.ln(), 0.0)
        })
        .re;
    Ok(-rho_inf.ln() + integral)
}

/// Mean and standard deviation of the zero moduli of `Φ_n` — the
/// statistics behind clock/circle-of-radius-`r` zero distribution laws
/// for geometric coefficient families.
pub fn mhaskar_saff_check(alpha: &VerblunskySeq, n: usize) -> Result<(f64, f64)> {
    let zeros = phi_zeros(alpha, n)?;
    let moduli: Vec<f64> = zeros.iter().map(|z| z.norm()).collect();
    let mean = moduli.iter().sum::<f64>() / moduli.len() as f64;
    let var = moduli.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / moduli.len() as f64;
    Ok((mean, var.sqrt()))
}
