//! CMV matrices: the canonical five-diagonal unitary realization.
//!
//! Multiplication by `z` on `L²(dμ)`, written in the basis obtained by
//! orthonormalizing `1, z, z⁻¹, z², z⁻², …`, is a pentadiagonal matrix
//! `C` factoring into two block-diagonal unitaries,
//!
//! ```text
//! C = L M,   L = Θ(α_0) ⊕ Θ(α_2) ⊕ …,   M = 1 ⊕ Θ(α_1) ⊕ Θ(α_3) ⊕ …,
//! Θ(α) = [[conj(α), ρ], [ρ, -α]],   ρ = (1 - |α|²)^{1/2}.
//! ```
//!
//! The top-left `N×N` block `C^(N)` has characteristic polynomial `Φ_N`,
//! so zeros of the orthogonal polynomials are eigenvalues of a structured
//! matrix rather than roots hunted in the plane. Replacing the last
//! coefficient by a unimodular `β` makes the block exactly unitary; its
//! spectrum is the zero set of the paraorthogonal polynomial
//! `z Φ_{N-1} - conj(β) Φ*_{N-1}` and carries an `N`-point spectral
//! measure with masses `|⟨δ_0, v_k⟩|²`. Rotating the whole coefficient
//! sequence (Aleksandrov family) only conjugates the matrix by a diagonal
//! and swaps the `1` in `M` for the rotation — checked here entrywise.
//! Finally, the unique rotation-invariant (Haar) distribution on these
//! finite unitaries makes the coefficients independent, with
//! `|α_j|² ~ Beta(1, n-j-1)`; a seeded sampler reproduces it.

use crate::eigen;
use crate::error::{Error, Result};
use crate::measure::{CircleMeasure, PointMass};
use crate::poly::ComplexPoly;
use crate::szego::VerblunskySeq;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The 2x2 building block `Θ(α) = [[conj(α), ρ], [ρ, -α]]`: unitary,
/// symmetric, and the whole of the Szegő recursion in matrix clothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaBlock {
    alpha: Complex64,
}

impl ThetaBlock {
    /// Requires `|α| ≤ 1` (within 1e-12 slack; the modulus-one case is the
    /// decoupling block of a terminal coefficient).
    pub fn new(alpha: Complex64) -> Result<Self> {
        if alpha.norm() > 1.0 + 1e-12 {
            return Err(Error::NotStrictlyInside {
                index: 0,
                modulus: alpha.norm(),
            });
        }
        Ok(ThetaBlock { alpha })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        (1.0 - self.alpha.norm_sqr()).max(0.0).sqrt()
    }

    /// The dense 2x2 entries.
    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        let rho = Complex64::new(self.rho(), 0.0);
        [[self.alpha.conj(), rho], [rho, -self.alpha]]
    }

    /// Max-entry deviation of `Θ*Θ` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let e = self.entries();
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let mut s = ZERO;
                for k in 0..2 {
                    s += e[k][i].conj() * e[k][j];
                }
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }
}

/// Which factor order to materialize: `C = LM` (default) or the
/// transpose-convention variant `C̃ = ML`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorOrder {
    Lm,
    Ml,
}

/// A dense finite section of a CMV matrix.
#[derive(Debug, Clone)]
pub struct CmvMatrix {
    dim: usize,
    order: FactorOrder,
    dense: eigen::Matrix,
}

/// One nonzero band entry, serialized as `{row, col, value: [re, im]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BandEntry {
    pub row: usize,
    pub col: usize,
    #[serde(with = "crate::serde_util::complex_scalar")]
    pub value: Complex64,
}

impl CmvMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> FactorOrder {
        self.order
    }

    pub fn dense(&self) -> &eigen::Matrix {
        &self.dense
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.dense[i][j]
    }

    /// Max-entry deviation of `C*C` from the identity. Zero (to rounding)
    /// exactly when the section is unitary, i.e. for terminal sequences.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut s = ZERO;
                for k in 0..n {
                    s += self.dense[k][i].conj() * self.dense[k][j];
                }
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    /// The nonzero entries of the five-diagonal band, row-major, for the
    /// debugging dump format.
    pub fn band_entries(&self) -> Vec<BandEntry> {
        let mut out = Vec::new();
        for (i, row) in self.dense.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                if value != ZERO {
                    out.push(BandEntry {
                        row: i,
                        col: j,
                        value,
                    });
                }
            }
        }
        out
    }
}

/// Coefficient lookup with zero padding beyond the supplied data.
fn alpha_padded(alpha: &VerblunskySeq, j: usize) -> Complex64 {
    if j < alpha.len() {
        alpha.alpha(j)
    } else {
        ZERO
    }
}

/// Dense `m x m` sections of the factors: `L` places `Θ(α_{2k})` at rows
/// `2k`, `M` places a leading scalar (`1`, or `top_left` for the
/// Aleksandrov variant) and `Θ(α_{2k+1})` at rows `2k+1`.
fn build_lm(alpha: &VerblunskySeq, m: usize, top_left: Complex64) -> (eigen::Matrix, eigen::Matrix) {
    let mut l = vec![vec![ZERO; m]; m];
    let mut mm = vec![vec![ZERO; m]; m];
    let place = |mat: &mut eigen::Matrix, start: usize, block: &ThetaBlock| {
        let e = block.entries();
        for di in 0..2 {
            for dj in 0..2 {
                mat[start + di][start + dj] = e[di][dj];
            }
        }
    };
    let mut k = 0;
    while k + 1 < m {
        let block = ThetaBlock::new(alpha_padded(alpha, k)).expect("validated coefficients");
        place(&mut l, k, &block);
        k += 2;
    }
    if k < m {
        // A straddling block only touches rows outside every window we
        // read; a diagonal 1 keeps the factor well-formed.
        l[k][k] = ONE;
    }
    mm[0][0] = top_left;
    let mut k = 1;
    while k + 1 < m {
        let block = ThetaBlock::new(alpha_padded(alpha, k)).expect("validated coefficients");
        place(&mut mm, k, &block);
        k += 2;
    }
    if k < m {
        mm[k][k] = ONE;
    }
    (l, mm)
}

/// The top-left `n x n` section of the CMV matrix, in the requested
/// factor order. The section of `LM` is computed from `(n+2)`-sized
/// factors so truncation artifacts never reach the returned window; the
/// entries depend only on `α_0 ..= α_{n-1}`, so `n ≤ len` is required.
pub fn build_cmv_ordered(
    alpha: &VerblunskySeq,
    n: usize,
    order: FactorOrder,
) -> Result<CmvMatrix> {
    if n == 0 {
        return Err(Error::invalid("CMV sections need dimension at least 1"));
    }
    if n > alpha.len() {
        return Err(Error::invalid(format!(
            "an {n}-dimensional CMV section needs {n} coefficients, have {}; \
             use build_cmv_padded to extend with zeros",
            alpha.len()
        )));
    }
    Ok(build_unchecked(alpha, n, order))
}

fn build_unchecked(alpha: &VerblunskySeq, n: usize, order: FactorOrder) -> CmvMatrix {
    let m = n + 2;
    let (l, mm) = build_lm(alpha, m, ONE);
    let full = match order {
        FactorOrder::Lm => eigen::mat_mul(&l, &mm),
        FactorOrder::Ml => eigen::mat_mul(&mm, &l),
    };
    let dense: eigen::Matrix = full[..n].iter().map(|row| row[..n].to_vec()).collect();
    CmvMatrix {
        dim: n,
        order,
        dense,
    }
}

/// [`build_cmv_ordered`] with the standard `C = LM` order.
pub fn build_cmv(alpha: &VerblunskySeq, n: usize) -> Result<CmvMatrix> {
    build_cmv_ordered(alpha, n, FactorOrder::Lm)
}

/// CMV section of any size, extending the coefficient sequence by zeros
/// (Lebesgue tail) beyond the supplied data.
pub fn build_cmv_padded(alpha: &VerblunskySeq, n: usize) -> Result<CmvMatrix> {
    if n == 0 {
        return Err(Error::invalid("CMV sections need dimension at least 1"));
    }
    Ok(build_unchecked(alpha, n, FactorOrder::Lm))
}

/// `det(z I - C^(N))` — equal to the monic orthogonal polynomial `Φ_N`.
pub fn char_poly(alpha: &VerblunskySeq, n: usize) -> Result<ComplexPoly> {
    let c = build_cmv(alpha, n)?;
    eigen::char_poly(&c.dense)
}

/// Sort points of the plane by angle in `[0, 2π)`, then modulus: a
/// deterministic presentation for spectra.
pub fn sort_by_angle(points: &mut [Complex64]) {
    points.sort_by(|a, b| {
        let ka = (a.arg().rem_euclid(TAU), a.norm());
        let kb = (b.arg().rem_euclid(TAU), b.norm());
        ka.partial_cmp(&kb).expect("finite spectra")
    });
}

/// Zeros of `Φ_N` (with multiplicity), as eigenvalues of the CMV section,
/// sorted by angle. All lie strictly inside the unit disk.
pub fn phi_zeros(alpha: &VerblunskySeq, n: usize) -> Result<Vec<Complex64>> {
    let c = build_cmv(alpha, n)?;
    let mut zeros = eigen::eigenvalues(&c.dense)?;
    sort_by_angle(&mut zeros);
    Ok(zeros)
}

/// Greedy clustering of near-coincident roots: each cluster is reported
/// as `(centroid, multiplicity)`. A multiple zero of a polynomial is
/// resolved by floating point into a tight cluster whose centroid is far
/// more accurate than its members, so this is the honest way to report
/// multiplicity.
pub fn cluster_roots(zeros: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &z in zeros {
        match clusters
            .iter_mut()
            .find(|(c, _)| (*c - z).norm() <= tol)
        {
            Some((c, count)) => {
                // Running centroid.
                *c = (*c * (*count as f64) + z) / (*count as f64 + 1.0);
                *count += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    clusters
}

/// Builds the terminal sequence `(α_0, …, α_{N-2}, β)` whose CMV section
/// is unitary.
fn paraorthogonal_seq(alpha: &VerblunskySeq, n: usize, beta: Complex64) -> Result<VerblunskySeq> {
    if (beta.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!(
            "paraorthogonal boundary parameter must be unimodular, |β| = {}",
            beta.norm()
        )));
    }
    if n == 0 {
        return Err(Error::invalid("paraorthogonal polynomials start at N = 1"));
    }
    if alpha.len() < n - 1 || (alpha.is_terminal() && alpha.interior().len() < n - 1) {
        return Err(Error::invalid(format!(
            "paraorthogonal degree {n} needs {} interior coefficients, have {}",
            n - 1,
            alpha.interior().len()
        )));
    }
    let mut seq: Vec<Complex64> = (0..n - 1).map(|j| alpha.alpha(j)).collect();
    seq.push(beta / beta.norm());
    VerblunskySeq::terminal(seq)
}

/// Zeros of the paraorthogonal polynomial
/// `Φ_N^(β) = z Φ_{N-1} - conj(β) Φ*_{N-1}`, as the spectrum of the
/// unitary CMV section with last coefficient `β`; sorted by angle, all on
/// the unit circle.
pub fn paraorthogonal_zeros(
    alpha: &VerblunskySeq,
    n: usize,
    beta: Complex64,
) -> Result<Vec<Complex64>> {
    let seq = paraorthogonal_seq(alpha, n, beta)?;
    let c = build_cmv(&seq, n)?;
    let mut zeros = eigen::eigenvalues(&c.dense)?;
    sort_by_angle(&mut zeros);
    Ok(zeros)
}

/// The paraorthogonal polynomial itself, via the same unitary section.
pub fn paraorthogonal_poly(
    alpha: &VerblunskySeq,
    n: usize,
    beta: Complex64,
) -> Result<ComplexPoly> {
    let seq = paraorthogonal_seq(alpha, n, beta)?;
    char_poly(&seq, n)
}

/// Spectral measure of the unitary section attached to a terminal
/// sequence: atoms at the eigenvalues, masses `|⟨δ_0, v_k⟩|²`.
///
/// The first basis vector is cyclic, so the masses are positive, sum to
/// one, and the measure's Verblunsky coefficients reproduce
/// `α_0 ..= α_{N-2}`.
pub fn spectral_measure(alpha: &VerblunskySeq) -> Result<CircleMeasure> {
    let n = alpha.len();
    if n == 0 {
        return Err(Error::invalid("spectral measure of an empty sequence"));
    }
    let c = build_cmv(alpha, n)?;
    let deviation = c.unitarity_deviation();
    if !alpha.is_terminal() || deviation > 1e-10 {
        return Err(Error::NotUnitary {
            deviation,
            tol: 1e-10,
        });
    }
    let (values, vectors) = eigen::eigenpairs(&c.dense)?;
    let mut atoms: Vec<PointMass> = values
        .iter()
        .zip(&vectors)
        .map(|(z, v)| PointMass {
            theta: z.arg().rem_euclid(TAU),
            mass: v[0].norm_sqr(),
        })
        .collect();
    let total: f64 = atoms.iter().map(|a| a.mass).sum();
    if total <= 0.0 {
        return Err(Error::invalid("spectral masses vanished"));
    }
    for a in &mut atoms {
        a.mass /= total;
    }
    let grid = (8 * n).max(64);
    CircleMeasure::from_atoms(grid, atoms)
}

/// Max-entry deviation in the Aleksandrov conjugation identity: with
/// `D = diag(1, λ^{-1}, 1, λ^{-1}, …)`,
///
/// ```text
/// D · C({λ α_j}) · D^{-1} = L({α}) · M_λ({α}),
/// ```
///
/// where `M_λ` is `M` with its leading `1` replaced by `conj(λ)`.
/// Rotating every coefficient therefore moves the matrix by a rank-one
/// change of `M` up to diagonal conjugation.
pub fn aleksandrov_conjugation_check(
    alpha: &VerblunskySeq,
    lambda: Complex64,
    n: usize,
) -> Result<f64> {
    if (lambda.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!(
            "Aleksandrov rotations are unimodular, |λ| = {}",
            lambda.norm()
        )));
    }
    if n == 0 || n > alpha.len() {
        return Err(Error::invalid(format!(
            "conjugation check at dimension {n} with {} coefficients",
            alpha.len()
        )));
    }
    let rotated = alpha.rotated(lambda);
    let c_rot = build_unchecked(&rotated, n, FactorOrder::Lm);
    // D C D^{-1} multiplies entry (i, j) by d_i / d_j, d_even = 1,
    // d_odd = λ^{-1}.
    let d = |i: usize| -> Complex64 {
        if i % 2 == 0 {
            ONE
        } else {
            lambda.conj()
        }
    };
    let m = n + 2;
    let (l, m_lambda) = build_lm(alpha, m, lambda.conj());
    let rhs_full = eigen::mat_mul(&l, &m_lambda);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let lhs = d(i) * c_rot.dense[i][j] * d(j).conj();
            worst = worst.max((lhs - rhs_full[i][j]).norm());
        }
    }
    Ok(worst)
}

/// Samples a length-`n` terminal sequence from the Haar distribution of
/// `n`-dimensional unitary CMV sections.
///
/// The coefficients come out independent: `|α_j|² ~ Beta(1, n-j-1)`
/// (radius via the inverse CDF `r² = 1 - U^{1/(n-j-1)}`, uniform phase)
/// and the terminal coefficient uniform on the circle. The generator is
/// a seeded counter-based stream cipher, so a seed fully determines the
/// sample on every platform.
pub fn haar_sample(n: usize, seed: u64) -> Result<VerblunskySeq> {
    if n == 0 {
        return Err(Error::invalid("Haar samples need dimension at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alphas = Vec::with_capacity(n);
    for j in 0..n - 1 {
        let k = (n - j - 1) as f64;
        let u: f64 = rng.gen();
        let r = (1.0 - u.powf(1.0 / k)).max(0.0).sqrt();
        let phase: f64 = rng.gen::<f64>() * TAU;
        alphas.push(Complex64::from_polar(r, phase));
    }
    let phase: f64 = rng.gen::<f64>() * TAU;
    alphas.push(Complex64::from_polar(1.0, phase));
    VerblunskySeq::terminal(alphas)
}
