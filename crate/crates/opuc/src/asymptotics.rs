//! Toeplitz determinants, Szegő's theorem and its strong form, the Szegő
//! function, and decay diagnostics.
//!
//! The Gram determinant of `{1, z, …, z^n}` in `L²(dμ)` is the Toeplitz
//! determinant `D_n = det(c_{j-k})_{j,k ≤ n}`, and the recursion norms
//! factor it exactly:
//!
//! ```text
//! D_n = Π_{j=0}^{n-1} (1 - |α_j|²)^{n-j}.
//! ```
//!
//! Two limits built from the same factors carry the classical theory:
//! `F = Π (1-|α_j|²)` equals `exp(∫ log w dθ/2π)` (Szegő's theorem — the
//! geometric mean of the a.c. weight sees exactly the product of the
//! `ρ_j²`), and `G = Π (1-|α_j|²)^{-j-1}` equals `exp(Σ_{m≥1} m|L̂_m|²)`
//! with `L̂_m` the Fourier coefficients of `log w` (the strong Szegő
//! theorem, valid when the singular part vanishes).
//!
//! The Szegő function
//! `D(z) = exp((1/4π) ∫ (e^{iθ}+z)/(e^{iθ}-z) · log w(θ) dθ)` is the
//! outer function with `|D(e^{iθ})|² = w(θ)` and `D(0) > 0`; the starred
//! orthonormal polynomials converge to `1/D` inside the disk, which
//! `szego_asymptotics_report` tracks in three norms at once. Exponential
//! decay of the coefficients is measured by `nevai_totik_rate`
//! (`limsup |α_n|^{1/n}` estimated by regression), and `baxter_diagnostics`
//! reports the weighted-summability quantities that govern smoothness of
//! the weight.

use crate::error::{Error, Result};
use crate::measure::{CircleMeasure, MomentSeq};
use crate::szego::{szego_forward, VerblunskySeq};
use crate::synthesis::bernstein_szego;
use num_complex::Complex64;
use serde::Serialize;

/// Density samples at or below this value are treated as a vanishing
/// weight: the entropy integral is `-∞` and the Szegő function is
/// undefined.
const WEIGHT_FLOOR: f64 = 1e-300;

/// Partial products of `(1-|α_j|²)^{-j-1}` beyond this threshold are
/// flagged as divergent.
const G_DIVERGENCE_THRESHOLD: f64 = 1e12;

/// Summary of the Toeplitz/Szegő quantities of a measure.
#[derive(Debug, Clone, Serialize)]
pub struct SzegoReport {
    /// Toeplitz determinants `D_0 ..= D_n` (leading principal minors).
    pub d: Vec<f64>,
    /// Partial product `Π (1-|α_j|²)`.
    pub f_limit: f64,
    /// Partial product `Π (1-|α_j|²)^{-j-1}`; `None` flags divergence.
    pub g_limit: Option<f64>,
    /// `∫ log w dθ/2π` (`-∞` when the weight vanishes on the grid).
    pub entropy: f64,
    /// `Σ_{m≥1} m |L̂_m|²` over the retained Fourier window of `log w`;
    /// `NaN` when the weight vanishes somewhere.
    pub strong_sum: f64,
}

/// One row of the Szegő-asymptotics table at polynomial degree `n`.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticsRow {
    pub n: usize,
    /// `‖φ_n* - 1/D‖_{L²(dμ)}`.
    pub l2_distance: f64,
    /// `∫ |φ_n|² dμ_s` (mass the polynomial sees in the atoms).
    pub singular_mass: f64,
    /// `sup |φ_n*(z) - 1/D(z)|` over the supplied interior samples.
    pub sup_disk: f64,
}

fn toeplitz_matrix(c: &MomentSeq, n: usize) -> Result<Vec<Vec<Complex64>>> {
    let mut t = vec![vec![Complex64::new(0.0, 0.0); n + 1]; n + 1];
    for (j, row) in t.iter_mut().enumerate() {
        for (k, entry) in row.iter_mut().enumerate() {
            *entry = c.get(j as i64 - k as i64)?;
        }
    }
    Ok(t)
}

/// Cholesky factorization of a Hermitian matrix, returning the leading
/// principal minors `det T_k`, `k = 0..m`. Fails on a non-positive pivot.
fn hermitian_leading_minors(t: &[Vec<Complex64>]) -> Result<Vec<f64>> {
    let m = t.len();
    let mut l = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    let mut minors = Vec::with_capacity(m);
    let mut running = 1.0f64;
    for i in 0..m {
        for j in 0..=i {
            let mut s = t[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            if i == j {
                if s.re <= 0.0 {
                    return Err(Error::NotPositiveDefinite {
                        size: i + 1,
                        pivot: s.re,
                    });
                }
                l[i][i] = Complex64::new(s.re.sqrt(), 0.0);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
        running *= l[i][i].re * l[i][i].re;
        minors.push(running);
    }
    Ok(minors)
}

/// All Toeplitz determinants `D_0 ..= D_n` of a moment sequence, from one
/// Cholesky factorization of the largest matrix.
pub fn toeplitz_minors(c: &MomentSeq, n: usize) -> Result<Vec<f64>> {
    hermitian_leading_minors(&toeplitz_matrix(c, n)?)
}

/// The Toeplitz determinant `D_n` computed two independent ways: as the
/// Gram determinant of the `(n+1)×(n+1)` moment matrix, and as the product
/// `Π_{j<n} (1-|α_j|²)^{n-j}` over the extracted recursion coefficients.
pub fn toeplitz_det(c: &MomentSeq, n: usize) -> Result<(f64, f64)> {
    let gram = *toeplitz_minors(c, n)?
        .last()
        .expect("minor list is nonempty");
    let alpha = VerblunskySeq::from_moments(c, n)?;
    let product_form = (0..n)
        .map(|j| (1.0 - alpha.alpha(j).norm_sqr()).powi((n - j) as i32))
        .product();
    Ok((gram, product_form))
}

/// The two Szegő products of a coefficient sequence: `F = Π (1-|α_j|²)`
/// and `G = Π (1-|α_j|²)^{-j-1}`, the latter flagged `None` once its
/// partial products pass the divergence threshold.
pub fn szego_limits(alpha: &VerblunskySeq) -> (f64, Option<f64>) {
    let interior = alpha.interior();
    let mut f = 1.0f64;
    let mut g = 1.0f64;
    let mut diverged = false;
    for j in 0..interior.len() {
        let factor = 1.0 - interior.alpha(j).norm_sqr();
        f *= factor;
        if !diverged {
            g *= factor.powi(-(j as i32) - 1);
            if g > G_DIVERGENCE_THRESHOLD {
                diverged = true;
            }
        }
    }
    (f, if diverged { None } else { Some(g) })
}

/// The entropy integral `∫ log w dθ/2π` of the a.c. weight, `-∞` when the
/// weight vanishes (beyond round-off) on a grid node.
///
/// The weight samples are rescaled by the a.c. mass so the integral refers
/// to the density against `dθ/2π` of the whole measure — atoms reduce the
/// a.c. part and therefore the entropy, exactly as the normalized
/// `CircleMeasure` stores it.
pub fn entropy(mu: &CircleMeasure) -> f64 {
    let w = mu.ac_weight();
    if w.iter().any(|&v| v <= WEIGHT_FLOOR) {
        return f64::NEG_INFINITY;
    }
    w.iter().map(|&v| v.ln()).sum::<f64>() / w.len() as f64
}

/// Both sides of Szegő's theorem at truncation `n`:
/// `lhs = Π_{j<n} (1-|α_j(μ)|²)` from the extracted coefficients and
/// `rhs = exp(∫ log w dθ/2π)` from quadrature. The left side decreases to
/// the right side as `n` grows; a weight with zeros gives `rhs = 0`.
pub fn szego_theorem_check(mu: &CircleMeasure, n: usize) -> Result<(f64, f64)> {
    let c = mu.moments(n)?;
    let alpha = VerblunskySeq::from_moments(&c, n)?;
    let lhs = (0..n)
        .map(|j| 1.0 - alpha.alpha(j).norm_sqr())
        .product::<f64>();
    let rhs = entropy(mu).exp();
    Ok((lhs, rhs))
}

/// Fourier coefficients `L̂_0 ..= L̂_k_max` of `log w` by grid quadrature,
/// `L̂_m = (1/2π) ∫ e^{-imθ} log w(θ) dθ`.
fn log_weight_coefficients(mu: &CircleMeasure, k_max: usize) -> Result<Vec<Complex64>> {
    let w = mu.ac_weight();
    if w.iter().any(|&v| v <= WEIGHT_FLOOR) {
        return Err(Error::invalid(
            "weight vanishes on the grid; log w is singular",
        ));
    }
    let m = w.len();
    let log_w: Vec<f64> = w.iter().map(|&v| v.ln()).collect();
    let mut coeffs = Vec::with_capacity(k_max + 1);
    for freq in 0..=k_max {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &lw) in log_w.iter().enumerate() {
            let theta = mu.theta(k);
            acc += Complex64::from_polar(1.0, -(freq as f64) * theta) * lw;
        }
        coeffs.push(acc / m as f64);
    }
    Ok(coeffs)
}

/// The Szegő function
/// `D(z) = exp((1/4π) ∫ (e^{iθ}+z)/(e^{iθ}-z) log w(θ) dθ)` of the a.c.
/// weight, evaluated inside the disk. `D(0) = exp(entropy/2) > 0`, and on
/// the boundary `|D(e^{iθ})|² = w(θ)`.
pub fn szego_function(mu: &CircleMeasure, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::OutsideDisk { modulus: z.norm() });
    }
    let w = mu.ac_weight();
    if w.iter().any(|&v| v <= WEIGHT_FLOOR) {
        return Err(Error::invalid(
            "weight vanishes on the grid; the Szegő function is undefined",
        ));
    }
    let m = w.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &v) in w.iter().enumerate() {
        let e = Complex64::from_polar(1.0, mu.theta(k));
        acc += (e + z) / (e - z) * v.ln();
    }
    Ok((acc / (2.0 * m as f64)).exp())
}

/// Szegő-asymptotics table for degrees `0 ..= n_max`: the `L²(dμ)`
/// distance of `φ_n*` to `1/D` on the boundary, the singular mass
/// `∫ |φ_n|² dμ_s`, and the sup of `|φ_n*(z) - 1/D(z)|` over the supplied
/// interior sample points. All three columns trend to zero exactly when
/// Szegő asymptotics hold.
pub fn szego_asymptotics_report(
    mu: &CircleMeasure,
    n_max: usize,
    z_samples: &[Complex64],
) -> Result<Vec<AsymptoticsRow>> {
    let c = mu.moments(n_max)?;
    let alpha = VerblunskySeq::from_moments(&c, n_max)?;
    let fam = szego_forward(&alpha)?;

    // Boundary values of 1/D synthesized from the Fourier series of log w:
    // log D(e^{iθ}) = L̂_0/2 + Σ_{m≥1} L̂_m e^{imθ}.
    let k_max = mu.grid_size() / 4;
    let lw = log_weight_coefficients(mu, k_max)?;
    let log_d_at = |theta: f64| -> Complex64 {
        let mut acc = lw[0] * 0.5;
        for (freq, coeff) in lw.iter().enumerate().skip(1) {
            acc += coeff * Complex64::from_polar(1.0, freq as f64 * theta);
        }
        acc
    };
    let inv_d_grid: Vec<Complex64> = (0..mu.grid_size())
        .map(|k| (-log_d_at(mu.theta(k))).exp())
        .collect();
    let inv_d_samples: Vec<Complex64> = z_samples
        .iter()
        .map(|&z| szego_function(mu, z).map(|d| d.inv()))
        .collect::<Result<_>>()?;

    let w = mu.ac_weight();
    let m = mu.grid_size() as f64;
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let star = fam.orthonormal_star(n);
        let phi = fam.orthonormal(n);
        let mut dist_sq = 0.0;
        for k in 0..mu.grid_size() {
            let e = Complex64::from_polar(1.0, mu.theta(k));
            dist_sq += w[k] * (star.eval(e) - inv_d_grid[k]).norm_sqr();
        }
        dist_sq /= m;
        let mut singular = 0.0;
        for atom in mu.point_masses() {
            let e = Complex64::from_polar(1.0, atom.theta);
            dist_sq += atom.mass * (star.eval(e) - (-log_d_at(atom.theta)).exp()).norm_sqr();
            singular += atom.mass * phi.eval(e).norm_sqr();
        }
        let sup_disk = z_samples
            .iter()
            .zip(&inv_d_samples)
            .map(|(&z, &inv_d)| (star.eval(z) - inv_d).norm())
            .fold(0.0f64, f64::max);
        rows.push(AsymptoticsRow {
            n,
            l2_distance: dist_sq.sqrt(),
            singular_mass: singular,
            sup_disk,
        });
    }
    Ok(rows)
}

/// Both sides of the strong Szegő theorem:
/// `lhs = Π_{j<n} (1-|α_j|²)^{-j-1}` from extracted coefficients and
/// `rhs = exp(Σ_{m≥1} m |L̂_m|²)` from the Fourier coefficients of `log w`
/// (retained up to `grid_size/4`). Measures with atoms are rejected — the
/// theorem's hypothesis is a purely a.c. measure.
pub fn strong_szego_check(mu: &CircleMeasure, n: usize) -> Result<(f64, f64)> {
    if !mu.point_masses().is_empty() {
        return Err(Error::invalid(
            "strong Szegő comparison requires a measure without atoms",
        ));
    }
    let c = mu.moments(n)?;
    let alpha = VerblunskySeq::from_moments(&c, n)?;
    let lhs = (0..n)
        .map(|j| (1.0 - alpha.alpha(j).norm_sqr()).powi(-(j as i32) - 1))
        .product::<f64>();
    let lw = log_weight_coefficients(mu, mu.grid_size() / 4)?;
    let sum: f64 = lw
        .iter()
        .enumerate()
        .skip(1)
        .map(|(freq, coeff)| freq as f64 * coeff.norm_sqr())
        .sum();
    Ok((lhs, sum.exp()))
}

/// Exponential decay rate of the coefficients: the least-squares estimate
/// of `limsup |α_n|^{1/n}` from `log |α_n|` over the tail half of the
/// nonzero entries, together with a companion estimate of the same
/// quantity from the coefficient-ratio test on the deepest `φ_n*` (whose
/// limit function `1/D` has radius of analyticity equal to the reciprocal
/// rate). Sequences whose tail half is (numerically) zero report rate 0.
pub fn nevai_totik_rate(alpha: &VerblunskySeq) -> Result<(f64, f64)> {
    let interior = alpha.interior();
    let len = interior.len();
    if len < 8 {
        return Err(Error::invalid(format!(
            "decay-rate regression needs at least 8 coefficients, have {len}"
        )));
    }
    let points: Vec<(f64, f64)> = (len / 2..len)
        .filter(|&j| interior.alpha(j).norm() > 1e-280)
        .map(|j| (j as f64, interior.alpha(j).norm().ln()))
        .collect();
    let rate = if points.len() < 2 {
        0.0
    } else {
        let n = points.len() as f64;
        let sx: f64 = points.iter().map(|p| p.0).sum();
        let sy: f64 = points.iter().map(|p| p.1).sum();
        let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        slope.exp()
    };

    let fam = szego_forward(&interior)?;
    let star = fam.orthonormal_star(len);
    let coeffs = star.coeffs();
    let mut ratios = Vec::new();
    for k in len / 4..len / 2 {
        let lo = coeffs[k].norm();
        let hi = coeffs[k + 1].norm();
        if lo > 1e-280 && hi > 1e-280 {
            ratios.push((hi / lo).ln());
        }
    }
    let companion = if ratios.is_empty() {
        0.0
    } else {
        (ratios.iter().sum::<f64>() / ratios.len() as f64).exp()
    };
    Ok((rate, companion))
}

/// Baxter-type summability diagnostics: the partial sums
/// `Σ_j j^ℓ |α_j|` and `Σ_{n≥1} n^ℓ |c_n|`, and the grid minimum of the
/// a.c. weight of the full-depth Bernstein–Szegő synthesis of `alpha`.
/// All three are finite descriptive quantities — no limit is asserted.
pub fn baxter_diagnostics(
    alpha: &VerblunskySeq,
    c: &MomentSeq,
    ell: u32,
) -> Result<(f64, f64, f64)> {
    let interior = alpha.interior();
    let sum_alpha = (0..interior.len())
        .map(|j| (j as f64).powi(ell as i32) * interior.alpha(j).norm())
        .sum();
    let sum_c = (1..=c.max_index())
        .map(|n| (n as f64).powi(ell as i32) * c.get(n as i64).unwrap().norm())
        .sum();
    let n = interior.len();
    let grid = (64 * n).max(256);
    let mu = bernstein_szego(&interior, n, grid)?;
    let min_w = mu
        .ac_weight()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok((sum_alpha, sum_c, min_w))
}

/// Assembles the Toeplitz/Szegő summary of a measure at truncation `n`:
/// determinants `D_0..D_n`, the `F` and `G` partial products of the
/// extracted coefficients, the entropy integral, and the strong-Szegő sum.
pub fn szego_report(mu: &CircleMeasure, n: usize) -> Result<SzegoReport> {
    let c = mu.moments(n)?;
    let d = toeplitz_minors(&c, n)?;
    let alpha = VerblunskySeq::from_moments(&c, n)?;
    let (f_limit, g_limit) = szego_limits(&alpha);
    let ent = entropy(mu);
    let strong_sum = match log_weight_coefficients(mu, mu.grid_size() / 4) {
        Ok(lw) => lw
            .iter()
            .enumerate()
            .skip(1)
            .map(|(freq, coeff)| freq as f64 * coeff.norm_sqr())
            .sum(),
        Err(_) => f64::NAN,
    };
    Ok(SzegoReport {
        d,
        f_limit,
        g_limit,
        entropy: ent,
        strong_sum,
    })
}
