//! Dense complex eigensolver for the small matrices this crate produces.
//!
//! Everything here targets matrices of dimension at most a few hundred
//! (truncated CMV and Jacobi matrices, companion matrices of band-edge
//! polynomials), so the classic dense pipeline is the right tool:
//! unitary Householder reduction to upper Hessenberg form, explicit
//! single-shift QR iteration with Wilkinson shifts and occasional
//! symmetry-breaking exceptional shifts, and inverse iteration with a
//! partial-pivot LU factorization for eigenvectors. The QR iteration
//! works eigenvalue windows independently — the coupling blocks of a
//! block-triangular split never influence the spectrum — which keeps the
//! sweeps short.
//!
//! The module also exposes the characteristic polynomial through the
//! Hessenberg determinant recurrence
//!
//! ```text
//! d_k(z) = (z - h_kk) d_{k-1}(z)
//!          - Σ_{m<k} h_mk (Π_{i=m..k-1} h_{i+1,i}) d_{m-1}(z),
//! ```
//!
//! valid because a Hessenberg minor splits into a leading principal block
//! and a triangular subdiagonal run. Reduction to Hessenberg form is a
//! unitary similarity, so the recurrence computes `det(zI - A)` for any
//! square input.

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use num_complex::Complex64;

/// Square complex matrix in row-major nested vectors.
pub type Matrix = Vec<Vec<Complex64>>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Validates squareness and returns the dimension.
fn dimension(a: &[Vec<Complex64>]) -> Result<usize> {
    let n = a.len();
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(Error::invalid(format!(
                "matrix is not square: row {i} has length {} in an {n}-row matrix",
                row.len()
            )));
        }
    }
    Ok(n)
}

/// Infinity norm (maximum absolute row sum); the natural scale for
/// negligibility thresholds.
pub fn inf_norm(a: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .map(|row| row.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix-vector product.
pub fn mat_vec(a: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(m, v)| m * v).sum())
        .collect()
}

/// Matrix-matrix product.
pub fn mat_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Matrix {
    let n = a.len();
    let p = b[0].len();
    let mut out = vec![vec![ZERO; p]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..p {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Householder reduction to upper Hessenberg form (unitary similarity, so
/// the spectrum and characteristic polynomial are untouched).
pub fn hessenberg(a: &[Vec<Complex64>]) -> Result<Matrix> {
    let n = dimension(a)?;
    let mut h: Matrix = a.to_vec();
    if n < 3 {
        return Ok(h);
    }
    let scale = inf_norm(&h).max(1e-300);
    for k in 0..n - 2 {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[i][k]).collect();
        let xnorm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if xnorm <= f64::EPSILON * scale {
            for i in k + 2..n {
                h[i][k] = ZERO;
            }
            continue;
        }
        // alpha = -sign(x_0) * |x|, so v = x - alpha e_1 adds magnitudes.
        let alpha = if x[0].norm() > 0.0 {
            -(x[0] / x[0].norm()) * xnorm
        } else {
            Complex64::new(-xnorm, 0.0)
        };
        let mut v = x;
        v[0] -= alpha;
        let vnorm_sq = v.iter().map(|c| c.norm_sqr()).sum::<f64>();
        if vnorm_sq == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sq;
        // Left: rows k+1..n, every column from k on.
        for j in k..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(m, vm)| vm.conj() * h[k + 1 + m][j])
                .sum();
            let bs = beta * s;
            for (m, vm) in v.iter().enumerate() {
                h[k + 1 + m][j] -= bs * vm;
            }
        }
        // Right: columns k+1..n, every row.
        for r in 0..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(m, vm)| h[r][k + 1 + m] * vm)
                .sum();
            let bs = beta * s;
            for (m, vm) in v.iter().enumerate() {
                h[r][k + 1 + m] -= bs * vm.conj();
            }
        }
        h[k + 1][k] = alpha;
        for i in k + 2..n {
            h[i][k] = ZERO;
        }
    }
    Ok(h)
}

/// Monic characteristic polynomial `det(zI - A)` via Hessenberg reduction
/// and the determinant recurrence.
pub fn char_poly(a: &[Vec<Complex64>]) -> Result<ComplexPoly> {
    let n = dimension(a)?;
    if n == 0 {
        return Ok(ComplexPoly::one());
    }
    let h = hessenberg(a)?;
    // d[k] = det of the leading k x k block of (zI - H).
    let mut d: Vec<ComplexPoly> = Vec::with_capacity(n + 1);
    d.push(ComplexPoly::one());
    for k in 1..=n {
        // (z - h_{kk}) d_{k-1}
        let mut poly = d[k - 1]
            .mul_z()
            .sub(&d[k - 1].scale(h[k - 1][k - 1]));
        // Subdiagonal run products, accumulated from m = k-1 downward.
        let mut run = ONE;
        for m in (1..k).rev() {
            run *= h[m][m - 1];
            if run.norm() == 0.0 {
                break;
            }
            poly = poly.sub(&d[m - 1].scale(h[m - 1][k - 1] * run));
        }
        d.push(poly);
    }
    Ok(d.pop().expect("n >= 1"))
}

/// Eigenvalues of the 2x2 matrix `[[a, b], [c, d]]`.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let mid = (a + d) * 0.5;
    let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
    (mid + disc, mid - disc)
}

/// Wilkinson shift: the eigenvalue of the trailing 2x2 block closest to
/// its bottom-right entry.
fn wilkinson_shift(h: &[Vec<Complex64>], hi: usize) -> Complex64 {
    let (l1, l2) = eig2(
        h[hi - 1][hi - 1],
        h[hi - 1][hi],
        h[hi][hi - 1],
        h[hi][hi],
    );
    if (l1 - h[hi][hi]).norm() <= (l2 - h[hi][hi]).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR sweep on the window `lo..=hi` of a Hessenberg
/// matrix, in place.
fn qr_sweep(h: &mut Matrix, lo: usize, hi: usize, shift: Complex64) {
    for i in lo..=hi {
        h[i][i] -= shift;
    }
    // Left Givens pass: G_i annihilates h[i+1][i].
    let mut rots: Vec<(Complex64, Complex64)> = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let a = h[i][i];
        let b = h[i + 1][i];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if r == 0.0 {
            rots.push((ONE, ZERO));
            continue;
        }
        let ca = a.conj() / r;
        let sb = b.conj() / r;
        rots.push((ca, sb));
        for j in i..=hi {
            let t1 = h[i][j];
            let t2 = h[i + 1][j];
            h[i][j] = ca * t1 + sb * t2;
            h[i + 1][j] = -sb.conj() * t1 + ca.conj() * t2;
        }
    }
    // Right pass with the adjoints restores Hessenberg form (RQ).
    for (idx, &(ca, sb)) in rots.iter().enumerate() {
        let i = lo + idx;
        for r in lo..=(i + 1).min(hi) {
            let u = h[r][i];
            let w = h[r][i + 1];
            h[r][i] = u * ca.conj() + w * sb.conj();
            h[r][i + 1] = -u * sb + w * ca;
        }
    }
    for i in lo..=hi {
        h[i][i] += shift;
    }
}

/// Eigenvalues of a square complex matrix, in deflation order.
///
/// Fails with [`Error::NonConvergence`] if the QR iteration exceeds its
/// sweep budget (about forty sweeps per dimension).
pub fn eigenvalues(a: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
    let n = dimension(a)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![a[0][0]]);
    }
    let mut h = hessenberg(a)?;
    let scale = inf_norm(&h).max(1e-300);
    let negligible = |h: &Matrix, m: usize| -> bool {
        let local = h[m - 1][m - 1].norm() + h[m][m].norm();
        let thresh = f64::EPSILON * if local > 0.0 { local } else { scale };
        h[m][m - 1].norm() <= thresh
    };

    let mut values = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut stagnation = 0usize;
    let mut total_sweeps = 0usize;
    let budget = 40 * n + 100;
    loop {
        if hi == 0 {
            values.push(h[0][0]);
            break;
        }
        // Zero out negligible subdiagonals and find the window start.
        let mut lo = 0;
        for m in (1..=hi).rev() {
            if negligible(&h, m) {
                h[m][m - 1] = ZERO;
                lo = m;
                break;
            }
        }
        if lo == hi {
            values.push(h[hi][hi]);
            hi -= 1;
            stagnation = 0;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eig2(h[lo][lo], h[lo][hi], h[hi][lo], h[hi][hi]);
            values.push(l1);
            values.push(l2);
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            stagnation = 0;
            continue;
        }
        total_sweeps += 1;
        if total_sweeps > budget {
            return Err(Error::NonConvergence {
                what: "QR eigenvalue iteration",
                iterations: total_sweeps,
            });
        }
        stagnation += 1;
        let shift = if stagnation % 13 == 12 {
            // Symmetry-breaking exceptional shift for cyclic spectra.
            h[hi][hi]
                + (0.75 * h[hi][hi - 1].norm() + 0.05 * scale) * Complex64::new(0.6, 0.8)
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    Ok(values)
}

/// Partial-pivot LU factorization. Exactly singular pivots are nudged by
/// a tiny multiple of the matrix scale so that inverse iteration can run
/// on `A - λI` at an exact eigenvalue.
struct Lu {
    lu: Matrix,
    piv: Vec<usize>,
}

impl Lu {
    /// `pivot_floor` replaces exactly singular pivots; callers supply it
    /// from the scale of the matrix the shift was built from, because the
    /// shifted matrix itself can be identically zero.
    fn factor(mut a: Matrix, pivot_floor: f64) -> Lu {
        let n = a.len();
        let tiny = pivot_floor.max(f64::EPSILON * inf_norm(&a)).max(1e-300);
        let mut piv = Vec::with_capacity(n);
        for k in 0..n {
            let (best, _) = (k..n)
                .map(|i| (i, a[i][k].norm()))
                .fold((k, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            a.swap(k, best);
            piv.push(best);
            if a[k][k].norm() < tiny {
                a[k][k] = Complex64::new(tiny, 0.0);
            }
            let pivot = a[k][k];
            for i in k + 1..n {
                let factor = a[i][k] / pivot;
                a[i][k] = factor;
                for j in k + 1..n {
                    let akj = a[k][j];
                    a[i][j] -= factor * akj;
                }
            }
        }
        Lu { lu: a, piv }
    }

    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = b.len();
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            for i in k + 1..n {
                let xk = x[k];
                x[i] -= self.lu[i][k] * xk;
            }
        }
        for k in (0..n).rev() {
            for j in k + 1..n {
                let xj = x[j];
                x[k] -= self.lu[k][j] * xj;
            }
            x[k] /= self.lu[k][k];
        }
        x
    }
}

fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Unit right eigenvector for a known eigenvalue, by inverse iteration.
///
/// One or two solves suffice for well-separated eigenvalues; for tight
/// clusters the vector lands somewhere in the cluster's invariant
/// subspace, which is the best any single vector can do.
pub fn eigenvector(a: &[Vec<Complex64>], lambda: Complex64) -> Result<Vec<Complex64>> {
    let n = dimension(a)?;
    if n == 0 {
        return Err(Error::invalid("eigenvector of an empty matrix"));
    }
    let scale = inf_norm(a).max(1e-300);
    let mut shifted = a.to_vec();
    for i in 0..n {
        shifted[i][i] -= lambda;
    }
    let lu = Lu::factor(shifted, f64::EPSILON * scale);
    // Deterministic start with a phase ramp so it is never orthogonal to
    // the target by symmetry.
    let mut x: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, 0.7 * j as f64))
        .collect();
    let nx = vec_norm(&x);
    x.iter_mut().for_each(|c| *c /= nx);
    let tol = 1e-10 * scale;
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for _ in 0..8 {
        let y = lu.solve(&x);
        let ny = vec_norm(&y);
        if !ny.is_finite() || ny == 0.0 {
            break;
        }
        x = y.into_iter().map(|c| c / ny).collect();
        let ax = mat_vec(a, &x);
        let residual = vec_norm(
            &ax.iter()
                .zip(&x)
                .map(|(axi, xi)| axi - lambda * xi)
                .collect::<Vec<_>>(),
        );
        if best.as_ref().map_or(true, |(r, _)| residual < *r) {
            best = Some((residual, x.clone()));
        }
        if residual <= tol {
            break;
        }
    }
    match best {
        Some((residual, v)) if residual <= 1e-7 * scale => Ok(v),
        _ => Err(Error::NonConvergence {
            what: "inverse iteration for an eigenvector",
            iterations: 8,
        }),
    }
}

/// Eigenvalues with matching unit eigenvectors.
pub fn eigenpairs(a: &[Vec<Complex64>]) -> Result<(Vec<Complex64>, Vec<Vec<Complex64>>)> {
    let values = eigenvalues(a)?;
    let mut vectors = Vec::with_capacity(values.len());
    for &lambda in &values {
        vectors.push(eigenvector(a, lambda)?);
    }
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Greedy one-to-one matching; returns the largest pairing distance.
    fn match_spectra(computed: &[Complex64], expected: &[Complex64]) -> f64 {
        assert_eq!(computed.len(), expected.len());
        let mut used = vec![false; computed.len()];
        let mut worst: f64 = 0.0;
        for e in expected {
            let (idx, dist) = computed
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, c)| (i, (c - e).norm()))
                .fold((usize::MAX, f64::INFINITY), |acc, cur| {
                    if cur.1 < acc.1 {
                        cur
                    } else {
                        acc
                    }
                });
            used[idx] = true;
            worst = worst.max(dist);
        }
        worst
    }

    #[test]
    fn diagonal_matrix_returns_its_diagonal() {
        let d = vec![c64(1.0, 0.0), c64(2.0, 1.0), c64(-0.5, 0.25)];
        let a: Matrix = (0..3)
            .map(|i| (0..3).map(|j| if i == j { d[i] } else { ZERO }).collect())
            .collect();
        let vals = eigenvalues(&a).unwrap();
        assert!(match_spectra(&vals, &d) < 1e-14);
    }

    #[test]
    fn swap_matrix_has_plus_minus_one() {
        let a = vec![vec![ZERO, ONE], vec![ONE, ZERO]];
        let vals = eigenvalues(&a).unwrap();
        assert!(match_spectra(&vals, &[c64(1.0, 0.0), c64(-1.0, 0.0)]) < 1e-14);
    }

    #[test]
    fn cyclic_permutation_yields_roots_of_unity() {
        // Companion of z^6 - 1: a pure cycle, the classic stagnation case
        // for unshifted QR; the exceptional shift must break the symmetry.
        let n = 6;
        let mut a = vec![vec![ZERO; n]; n];
        for i in 0..n - 1 {
            a[i + 1][i] = ONE;
        }
        a[0][n - 1] = ONE;
        let vals = eigenvalues(&a).unwrap();
        let expected: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        assert!(match_spectra(&vals, &expected) < 1e-10);
    }

    #[test]
    fn similarity_transform_preserves_the_spectrum() {
        // Conjugate a known diagonal by the Householder reflection of a
        // fixed complex vector (exactly unitary).
        let d = [c64(1.5, 0.0), c64(-0.3, 0.7), c64(0.0, -1.2), c64(2.0, 2.0)];
        let v = [c64(1.0, 0.5), c64(-0.3, 0.2), c64(0.7, -0.1), c64(0.2, 0.9)];
        let vn: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        let n = 4;
        let mut u = vec![vec![ZERO; n]; n];
        for i in 0..n {
            for j in 0..n {
                u[i][j] = if i == j { ONE } else { ZERO };
                u[i][j] -= 2.0 / vn * v[i] * v[j].conj();
            }
        }
        let mut dm = vec![vec![ZERO; n]; n];
        for i in 0..n {
            dm[i][i] = d[i];
        }
        // u is Hermitian and unitary, so u d u is a similarity.
        let a = mat_mul(&mat_mul(&u, &dm), &u);
        let vals = eigenvalues(&a).unwrap();
        assert!(match_spectra(&vals, &d) < 1e-12);

        // Eigenpairs carry small residuals.
        let (vals, vecs) = eigenpairs(&a).unwrap();
        for (lam, v) in vals.iter().zip(&vecs) {
            let av = mat_vec(&a, v);
            let res: f64 = vec_norm(
                &av.iter()
                    .zip(v)
                    .map(|(a, b)| a - lam * b)
                    .collect::<Vec<_>>(),
            );
            assert!(res < 1e-11, "residual {res}");
            assert!((vec_norm(v) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn char_poly_of_a_companion_matrix_recovers_the_polynomial() {
        // Companion of p(z) = z^3 + 2 z^2 - z + 5 (already Hessenberg).
        let p = [c64(5.0, 0.0), c64(-1.0, 0.0), c64(2.0, 0.0)];
        let n = 3;
        let mut a = vec![vec![ZERO; n]; n];
        for i in 0..n - 1 {
            a[i + 1][i] = ONE;
        }
        for (i, pi) in p.iter().enumerate() {
            a[i][n - 1] = -pi;
        }
        let cp = char_poly(&a).unwrap();
        let expect = ComplexPoly::new(vec![p[0], p[1], p[2], ONE]);
        assert!(cp.coeff_distance(&expect) < 1e-13);
    }

    #[test]
    fn char_poly_matches_eigenvalue_product_on_a_dense_matrix() {
        let a = vec![
            vec![c64(0.5, 0.1), c64(-0.2, 0.3), c64(0.1, 0.0)],
            vec![c64(0.4, -0.5), c64(0.0, 0.2), c64(0.3, 0.3)],
            vec![c64(-0.1, 0.1), c64(0.6, 0.0), c64(-0.4, -0.2)],
        ];
        let cp = char_poly(&a).unwrap();
        let vals = eigenvalues(&a).unwrap();
        // Monic with the eigenvalues as roots.
        assert!((cp.coeff(3) - ONE).norm() < 1e-14);
        for v in &vals {
            assert!(cp.eval(*v).norm() < 1e-12, "root residual {}", cp.eval(*v).norm());
        }
        // Constant coefficient is (-1)^n det = product of (-roots).
        let prod = vals.iter().fold(ONE, |acc, v| acc * -v);
        assert!((cp.coeff(0) - prod).norm() < 1e-13);
    }

    #[test]
    fn nilpotent_jordan_block_clusters_near_zero() {
        // A single Jordan block with eigenvalue 0: rounding splits the
        // multiple eigenvalue into a cluster of radius about eps^(1/n),
        // but the trace (sum of computed values) stays at zero scale.
        let n = 5;
        let mut a = vec![vec![ZERO; n]; n];
        for i in 0..n - 1 {
            a[i][i + 1] = ONE;
        }
        let vals = eigenvalues(&a).unwrap();
        for v in &vals {
            assert!(v.norm() < 5e-3, "cluster radius {}", v.norm());
        }
        let mean = vals.iter().sum::<Complex64>() / n as f64;
        assert!(mean.norm() < 1e-12);
    }

    #[test]
    fn eigenvector_of_the_swap_matrix() {
        let a = vec![vec![ZERO, ONE], vec![ONE, ZERO]];
        let v = eigenvector(&a, c64(1.0, 0.0)).unwrap();
        assert!((v[0] - v[1]).norm() < 1e-12);
        let w = eigenvector(&a, c64(-1.0, 0.0)).unwrap();
        assert!((w[0] + w[1]).norm() < 1e-12);
    }

    #[test]
    fn non_square_input_is_rejected() {
        let a = vec![vec![ZERO, ONE], vec![ONE]];
        assert!(matches!(eigenvalues(&a), Err(Error::InvalidInput(_))));
    }
}
