//! The Szegő mapping between probability measures on `[-2, 2]` and even
//! measures on the unit circle, with the Geronimus relations tying
//! Verblunsky coefficients to Jacobi parameters.
//!
//! The boundary restriction of `z ↦ z + 1/z` sends `e^{iθ} ↦ 2cos θ`,
//! folding the circle two-to-one onto `[-2, 2]`. A measure `ρ` on the
//! interval pulls back to the unique conjugation-invariant measure `μ` with
//!
//! ```text
//! ∫ f(x) dρ(x) = ∫ f(2cos θ) dμ(θ),
//! ```
//!
//! and evenness of `μ` is equivalent to its Verblunsky coefficients being
//! real. On the polynomial level the monic OPRL for `ρ` are
//!
//! ```text
//! P_n(z + 1/z) = (1 - α_{2n-1})^{-1} z^{-n} [Φ_{2n}(z) + Φ*_{2n}(z)],
//! ```
//!
//! and on the coefficient level the Geronimus relations give the Jacobi
//! parameters of `ρ` directly:
//!
//! ```text
//! a²_{n+1} = (1 - α_{2n-1})(1 - α²_{2n})(1 + α_{2n+1}),
//! b_{n+1}  = (1 - α_{2n-1}) α_{2n} - (1 + α_{2n-1}) α_{2n-2},
//! ```
//!
//! with the boundary convention `α_{-1} = -1` (which makes `1 + α_{-1}`
//! vanish, so `α_{-2}` never matters, and gives the scaled Chebyshev
//! first-kind data `a_1 = √2`, `b_1 = 0` from `α ≡ 0`). The inverse
//! direction runs the `±2` boundary recursions
//!
//! ```text
//! φ±_{n+1} = (±2 - b_n) φ±_n - a²_{n-1} φ±_{n-1},   φ_0 = 0, φ_1 = 1,
//! ```
//!
//! whose Sturm-type sign conditions `φ+_n > 0`, `(-1)^{n+1} φ-_n > 0`
//! characterize measures supported in `[-2, 2]`; the ratios
//! `u_n = φ+_{n+2}/φ+_{n+1}` and `v_n = -φ-_{n+2}/φ-_{n+1}` then recover
//! `α_{2n} = (v_n - u_n)/(v_n + u_n)` and `α_{2n-1} = 1 - (u_n + v_n)/2`.

use crate::error::{Error, Result};
use crate::measure::{compensated_sum, CircleMeasure, PointMass};
use crate::poly::ComplexPoly;
use crate::szego::{szego_forward, VerblunskySeq};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Tolerance below which a coefficient's imaginary part is considered
/// round-off and the coefficient real.
const REALITY_TOL: f64 = 1e-9;

/// Atoms whose Chebyshev angles agree to this tolerance are merged.
const ATOM_MERGE_TOL: f64 = 1e-11;

/// Chebyshev angles this close to `0` or `π` are treated as the interval
/// endpoints `x = ±2` (which map to single atoms, not mirror pairs).
const ENDPOINT_TOL: f64 = 1e-9;

/// A point mass on `[-2, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineAtom {
    pub x: f64,
    pub mass: f64,
}

/// A probability measure on `[-2, 2]`: an absolutely continuous part
/// sampled in the Chebyshev angle, plus atoms.
///
/// The AC part is stored as samples `v(θ_j)` on the closed uniform grid
/// `θ_j = πj/H`, `j = 0 ..= H`, of the weight *in the angle variable*
/// `x = 2cos θ`, normalized against `dθ/π`: a density `W(x)` against `dx`
/// corresponds to `v(θ) = 2π sin θ · W(2cos θ)`. This is the natural
/// parametrization for the interval — inverse-square-root edge behavior
/// like the equilibrium weight `1/(π√(4-x²))` becomes a bounded, smooth
/// sample vector (identically `1` in that case) — and it makes the
/// Szegő map exact on the grid rather than an interpolation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawLineMeasure")]
pub struct LineMeasure {
    /// `v(πj/H)` for `j = 0 ..= H`.
    weight: Vec<f64>,
    atoms: Vec<LineAtom>,
}

/// Wire format for [`LineMeasure`]; construction re-validates.
#[derive(Deserialize)]
struct RawLineMeasure {
    weight: Vec<f64>,
    #[serde(default)]
    atoms: Vec<LineAtom>,
}

impl TryFrom<RawLineMeasure> for LineMeasure {
    type Error = Error;
    fn try_from(raw: RawLineMeasure) -> Result<Self> {
        LineMeasure::new(raw.weight, raw.atoms)
    }
}

impl LineMeasure {
    /// Builds a measure from angle-variable weight samples (length `H+1`,
    /// `H ≥ 2`) and atoms in `[-2, 2]`, then normalizes total mass to one.
    ///
    /// Rejects negative weight beyond round-off, atoms outside the
    /// interval or with non-positive mass, and data with no mass. Atoms
    /// whose Chebyshev angles collide within round-off are merged.
    pub fn new(weight: Vec<f64>, atoms: Vec<LineAtom>) -> Result<Self> {
        if weight.len() < 3 {
            return Err(Error::invalid(format!(
                "need at least 3 weight samples (half-grid H ≥ 2), got {}",
                weight.len()
            )));
        }
        let mut weight = weight;
        for v in weight.iter_mut() {
            if !v.is_finite() || *v < -1e-12 {
                return Err(Error::invalid(format!("bad weight sample {v}")));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        for a in &atoms {
            if !a.x.is_finite() || a.x.abs() > 2.0 {
                return Err(Error::invalid(format!(
                    "atom at x = {} lies outside [-2, 2]",
                    a.x
                )));
            }
            if !(a.mass > 0.0) || !a.mass.is_finite() {
                return Err(Error::invalid(format!(
                    "atom mass {} is not positive",
                    a.mass
                )));
            }
        }
        // Merge atoms by Chebyshev angle: the x ↦ acos(x/2) map compresses
        // distances near the endpoints, and the angle is what the circle
        // side resolves.
        let mut angled: Vec<(f64, f64)> = atoms
            .iter()
            .map(|a| ((a.x / 2.0).clamp(-1.0, 1.0).acos(), a.mass))
            .collect();
        angled.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (theta, mass) in angled {
            match merged.last_mut() {
                Some((prev, m)) if theta - *prev < ATOM_MERGE_TOL => *m += mass,
                _ => merged.push((theta, mass)),
            }
        }
        let mut atoms: Vec<LineAtom> = merged
            .into_iter()
            .map(|(theta, mass)| LineAtom {
                x: 2.0 * theta.cos(),
                mass,
            })
            .collect();
        let h = weight.len() - 1;
        let ac_mass = trapezoid(&weight) / h as f64;
        let atom_mass: f64 = atoms.iter().map(|a| a.mass).sum();
        let total = ac_mass + atom_mass;
        if !(total > 1e-300) {
            return Err(Error::invalid("measure has no mass"));
        }
        let scale = 1.0 / total;
        for v in weight.iter_mut() {
            *v *= scale;
        }
        for a in atoms.iter_mut() {
            a.mass *= scale;
        }
        Ok(LineMeasure { weight, atoms })
    }

    /// Builds a purely absolutely continuous measure from a density `W(x)`
    /// against `dx`, sampled through `v(θ) = 2π sin θ · W(2cos θ)` on an
    /// `H+1`-point angle grid. The endpoint samples are `0`, which is the
    /// correct limit whenever `W` stays bounded there.
    pub fn from_dx_density(h: usize, w: impl Fn(f64) -> f64) -> Result<Self> {
        let weight = (0..=h)
            .map(|j| {
                let theta = PI * j as f64 / h as f64;
                if j == 0 || j == h {
                    0.0
                } else {
                    TAU * theta.sin() * w(2.0 * theta.cos())
                }
            })
            .collect();
        LineMeasure::new(weight, Vec::new())
    }

    /// The equilibrium measure `dx/(π√(4-x²))` of the interval, whose
    /// angle-variable weight is identically one and whose image under the
    /// Szegő map is the uniform measure on the circle.
    pub fn equilibrium(h: usize) -> Result<Self> {
        LineMeasure::new(vec![1.0; h + 1], Vec::new())
    }

    /// A purely atomic probability measure.
    pub fn from_atoms(h: usize, atoms: Vec<LineAtom>) -> Result<Self> {
        LineMeasure::new(vec![0.0; h + 1], atoms)
    }

    /// The half-grid size `H` (the circle image uses `2H` points).
    pub fn half_grid(&self) -> usize {
        self.weight.len() - 1
    }

    /// Grid angle `θ_j = πj/H`.
    pub fn theta(&self, j: usize) -> f64 {
        PI * j as f64 / self.half_grid() as f64
    }

    /// Grid abscissa `x_j = 2cos(πj/H)`, decreasing from `2` to `-2`.
    pub fn node(&self, j: usize) -> f64 {
        2.0 * self.theta(j).cos()
    }

    /// Angle-variable weight samples (against `dθ/π`, after normalization).
    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    /// The atoms, sorted by decreasing `x`.
    pub fn atoms(&self) -> &[LineAtom] {
        &self.atoms
    }

    /// Total mass (one up to rounding, by construction).
    pub fn total_mass(&self) -> f64 {
        trapezoid(&self.weight) / self.half_grid() as f64
            + self.atoms.iter().map(|a| a.mass).sum::<f64>()
    }

    /// Integrates a function on `[-2, 2]` against the measure: trapezoid
    /// rule in the Chebyshev angle for the AC part, exact sums over atoms.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let h = self.half_grid();
        let vals: Vec<f64> = (0..=h)
            .map(|j| {
                let scale = if j == 0 || j == h { 0.5 } else { 1.0 };
                scale * f(self.node(j)) * self.weight[j]
            })
            .collect();
        let mut acc = compensated_sum(vals.into_iter()) / h as f64;
        for a in &self.atoms {
            acc += f(a.x) * a.mass;
        }
        acc
    }

    /// The power moment `∫ x^k dρ`.
    pub fn moment(&self, k: u32) -> f64 {
        self.integrate(|x| x.powi(k as i32))
    }
}

/// Trapezoid sum `Σ'' v_j` (half-weight endpoints), to be divided by `H`.
fn trapezoid(v: &[f64]) -> f64 {
    let last = v.len() - 1;
    compensated_sum(
        v.iter()
            .enumerate()
            .map(|(j, &x)| if j == 0 || j == last { 0.5 * x } else { x }),
    )
}

/// Pushes a measure on `[-2, 2]` forward to the even measure on the circle
/// with `∫ f(x) dρ = ∫ f(2cos θ) dμ`.
///
/// The AC samples transfer grid-exactly (`w(θ_k) = v(|θ_k|)` on the
/// doubled grid), interior atoms split into mirror pairs `±θ` of half the
/// mass, and endpoint atoms at `x = ±2` map to single atoms at `θ = 0, π`.
/// Quadrature against the result reproduces [`LineMeasure::integrate`] to
/// round-off, so moment identities like `∫x² dρ = ∫4cos²θ dμ` hold at the
/// `1e-9` level rather than merely up to grid resolution.
pub fn szego_map(rho: &LineMeasure) -> CircleMeasure {
    let h = rho.half_grid();
    let m = 2 * h;
    let mut w = vec![0.0; m];
    for k in 0..m {
        let j = if k <= h { k } else { m - k };
        w[k] = rho.weight()[j];
    }
    let mut atoms = Vec::new();
    for a in rho.atoms() {
        let theta = (a.x / 2.0).clamp(-1.0, 1.0).acos();
        if theta < ENDPOINT_TOL {
            atoms.push(PointMass {
                theta: 0.0,
                mass: a.mass,
            });
        } else if PI - theta < ENDPOINT_TOL {
            atoms.push(PointMass {
                theta: PI,
                mass: a.mass,
            });
        } else {
            atoms.push(PointMass {
                theta,
                mass: 0.5 * a.mass,
            });
            atoms.push(PointMass {
                theta: TAU - theta,
                mass: 0.5 * a.mass,
            });
        }
    }
    CircleMeasure::new(w, atoms).expect("the image of a valid line measure is valid")
}

/// `α_k` with the boundary convention `α_{-1} = -1` (and `α_{-2} = 0`,
/// which never matters because `1 + α_{-1} = 0`).
fn alpha_at(alphas: &[f64], k: i64) -> f64 {
    if k == -1 {
        -1.0
    } else if k < 0 {
        0.0
    } else {
        alphas[k as usize]
    }
}

/// Extracts real parts of a coefficient sequence, rejecting genuinely
/// complex entries (evenness of the underlying measure fails there).
fn real_alphas(alpha: &VerblunskySeq) -> Result<Vec<f64>> {
    alpha
        .alphas()
        .iter()
        .enumerate()
        .map(|(j, a)| {
            if a.im.abs() > REALITY_TOL {
                Err(Error::invalid(format!(
                    "coefficient α_{j} = {a} is not real; the measure is not even"
                )))
            } else {
                Ok(a.re)
            }
        })
        .collect()
}

/// The monic orthogonal polynomial `P_n(x)` of the mapped measure on
/// `[-2, 2]`, from the circle side:
///
/// ```text
/// P_n(z + 1/z) = (1 - α_{2n-1})^{-1} z^{-n} [Φ_{2n}(z) + Φ*_{2n}(z)].
/// ```
///
/// The bracket is a self-reciprocal polynomial, so the right side is a
/// symmetric Laurent polynomial `q_0 + Σ_k q_k (z^k + z^{-k})`, and
/// `z^k + z^{-k} = C_k(x)` rewrites it as a degree-`n` polynomial in
/// `x = z + 1/z` via `C_0 = 2`, `C_1 = x`, `C_{k+1} = x·C_k - C_{k-1}`.
/// Requires `2n` real coefficients.
pub fn oprl_from_opuc(alpha: &VerblunskySeq, n: usize) -> Result<ComplexPoly> {
    if 2 * n > alpha.len() {
        return Err(Error::invalid(format!(
            "degree {n} needs {} coefficients, got {}",
            2 * n,
            alpha.len()
        )));
    }
    let re = real_alphas(alpha)?;
    let fam = szego_forward(&alpha.prefix(2 * n))?;
    let bracket = fam.phi(2 * n).add(fam.phi_star(2 * n));
    let scale = 1.0 / (1.0 - alpha_at(&re, 2 * n as i64 - 1));
    let q: Vec<f64> = (0..=n)
        .map(|k| bracket.coeff(n + k).re * scale)
        .collect();

    let x = ComplexPoly::from_real(&[0.0, 1.0]);
    let mut c_prev = ComplexPoly::from_real(&[2.0]);
    let mut c_cur = x.clone();
    let mut p = ComplexPoly::from_real(&[q[0]]);
    for (k, &qk) in q.iter().enumerate().skip(1) {
        p = p.add(&c_cur.mul(&ComplexPoly::from_real(&[qk])));
        if k < n {
            let c_next = x.mul(&c_cur).sub(&c_prev);
            c_prev = c_cur;
            c_cur = c_next;
        }
    }
    Ok(p)
}

/// Off-diagonal and diagonal Jacobi-matrix entries `a_1..a_n > 0`,
/// `b_1..b_n`, the three-term recursion data of a measure on the real
/// line: `x P_k = P_{k+1} + b_{k+1} P_k + a_k² P_{k-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJacobiParams")]
pub struct JacobiParams {
    a: Vec<f64>,
    b: Vec<f64>,
}

/// Wire format for [`JacobiParams`]; construction re-validates.
#[derive(Deserialize)]
struct RawJacobiParams {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TryFrom<RawJacobiParams> for JacobiParams {
    type Error = Error;
    fn try_from(raw: RawJacobiParams) -> Result<Self> {
        JacobiParams::new(raw.a, raw.b)
    }
}

impl JacobiParams {
    /// Validates equal-length vectors with every `a_k > 0` and all entries
    /// finite.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::invalid(format!(
                "need equal nonempty parameter vectors, got {} a's and {} b's",
                a.len(),
                b.len()
            )));
        }
        for (k, &ak) in a.iter().enumerate() {
            if !(ak > 0.0) || !ak.is_finite() {
                return Err(Error::invalid(format!(
                    "a_{} = {ak} is not a positive real",
                    k + 1
                )));
            }
        }
        for (k, &bk) in b.iter().enumerate() {
            if !bk.is_finite() {
                return Err(Error::invalid(format!("b_{} = {bk} is not finite", k + 1)));
            }
        }
        Ok(JacobiParams { a, b })
    }

    /// Number of `(a, b)` pairs.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Off-diagonal entries `a_1..a_n` (1-based in formulas).
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// Diagonal entries `b_1..b_n`.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// The `n×n` truncation of the Jacobi matrix: diagonal `b`, first
    /// off-diagonals `a`, as a complex matrix for the eigen machinery.
    pub fn matrix(&self, n: usize) -> Result<Vec<Vec<Complex64>>> {
        if n == 0 || n > self.len() {
            return Err(Error::invalid(format!(
                "truncation size {n} not in 1..={}",
                self.len()
            )));
        }
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            m[i][i] = Complex64::new(self.b[i], 0.0);
            if i + 1 < n {
                m[i][i + 1] = Complex64::new(self.a[i], 0.0);
                m[i + 1][i] = Complex64::new(self.a[i], 0.0);
            }
        }
        Ok(m)
    }
}

/// The Geronimus map from real Verblunsky coefficients to Jacobi
/// parameters of the measure pushed to `[-2, 2]`:
///
/// ```text
/// a²_{n+1} = (1 - α_{2n-1})(1 - α²_{2n})(1 + α_{2n+1}),
/// b_{n+1}  = (1 - α_{2n-1}) α_{2n} - (1 + α_{2n-1}) α_{2n-2},
/// ```
///
/// with `α_{-1} = -1`. Every factor of `a²` is strictly positive for
/// coefficients in `(-1, 1)`, so the square root is safe. `2m`
/// coefficients yield `m` pairs (an odd trailing coefficient is ignored).
pub fn geronimus_forward(alpha: &VerblunskySeq) -> Result<JacobiParams> {
    let re = real_alphas(alpha)?;
    let pairs = re.len() / 2;
    if pairs == 0 {
        return Err(Error::invalid("need at least 2 coefficients"));
    }
    let mut a = Vec::with_capacity(pairs);
    let mut b = Vec::with_capacity(pairs);
    for m in 0..pairs as i64 {
        let odd_prev = alpha_at(&re, 2 * m - 1);
        let even = alpha_at(&re, 2 * m);
        let odd_next = alpha_at(&re, 2 * m + 1);
        let even_prev = alpha_at(&re, 2 * m - 2);
        a.push(((1.0 - odd_prev) * (1.0 - even * even) * (1.0 + odd_next)).sqrt());
        b.push((1.0 - odd_prev) * even - (1.0 + odd_prev) * even_prev);
    }
    JacobiParams::new(a, b)
}

/// The inverse Geronimus map, through the `±2` boundary recursions.
///
/// From `m` parameter pairs it builds `φ±_1 ..= φ±_{m+1}` (the last `a_m`
/// is never consumed), checks the Sturm sign conditions `φ+ > 0` and
/// alternation of `φ-` — failure means the underlying measure is not
/// supported inside `[-2, 2]` and is reported with the first offending
/// index — and recovers `α_0 ..= α_{2m-2}` from the ratio variables. The
/// `n = 0` ratios reproduce the boundary convention `α_{-1} = -1`
/// identically, which is why that convention is not an arbitrary choice.
pub fn geronimus_inverse(j: &JacobiParams) -> Result<VerblunskySeq> {
    let m = j.len();
    let (a, b) = (j.a(), j.b());
    let mut plus = vec![0.0f64; m + 2];
    let mut minus = vec![0.0f64; m + 2];
    plus[1] = 1.0;
    minus[1] = 1.0;
    for n in 1..=m {
        // a_0 := 1 multiplies φ_0 = 0, so its value never matters.
        let a_prev_sq = if n >= 2 { a[n - 2] * a[n - 2] } else { 1.0 };
        plus[n + 1] = (2.0 - b[n - 1]) * plus[n] - a_prev_sq * plus[n - 1];
        minus[n + 1] = (-2.0 - b[n - 1]) * minus[n] - a_prev_sq * minus[n - 1];
        if plus[n + 1] <= 0.0 || minus[n + 1] * minus[n] >= 0.0 {
            return Err(Error::SupportOutsideInterval { index: n + 1 });
        }
    }
    let mut alphas = Vec::with_capacity(2 * m - 1);
    for n in 0..m {
        let u = plus[n + 2] / plus[n + 1];
        let v = -minus[n + 2] / minus[n + 1];
        if n >= 1 {
            alphas.push(1.0 - 0.5 * (u + v));
        }
        alphas.push((v - u) / (v + u));
    }
    VerblunskySeq::from_real(&alphas)
}

/// The monic orthogonal polynomial `P_n(x)` by the three-term recurrence
/// `P_{k+1} = (x - b_{k+1}) P_k - a_k² P_{k-1}`, `P_0 = 1`.
pub fn jacobi_opr(j: &JacobiParams, n: usize, x: f64) -> Result<f64> {
    if n > j.len() {
        return Err(Error::invalid(format!(
            "degree {n} exceeds the {} stored parameter pairs",
            j.len()
        )));
    }
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let a_sq = if k >= 1 { j.a()[k - 1] * j.a()[k - 1] } else { 0.0 };
        let next = (x - j.b()[k]) * cur - a_sq * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigenvalues;
    use crate::synthesis::bernstein_szego;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn line_measure_quadrature_oracles() {
        // Equilibrium measure: v ≡ 1, ∫x² dρ = 2, ∫x dρ = 0.
        let eq = LineMeasure::equilibrium(128).unwrap();
        assert!((eq.total_mass() - 1.0).abs() < 1e-14);
        assert!(eq.moment(1).abs() < 1e-12);
        assert!((eq.moment(2) - 2.0).abs() < 1e-10);

        // Semicircle-type weight √(4-x²)/(2π): v(θ) = 2sin²θ, moments
        // 0 and 1 (the a ≡ 1, b ≡ 0 spectral measure).
        let sc = LineMeasure::from_dx_density(128, |x| {
            (4.0 - x * x).max(0.0).sqrt() / TAU
        })
        .unwrap();
        assert!((sc.total_mass() - 1.0).abs() < 1e-14);
        assert!(sc.moment(1).abs() < 1e-12);
        assert!((sc.moment(2) - 1.0).abs() < 1e-10);

        // Atoms contribute exactly; nearby atoms merge.
        let atomic = LineMeasure::from_atoms(
            8,
            vec![
                LineAtom { x: 1.0, mass: 0.25 },
                LineAtom { x: 1.0 + 1e-15, mass: 0.25 },
                LineAtom { x: -2.0, mass: 0.5 },
            ],
        )
        .unwrap();
        assert_eq!(atomic.atoms().len(), 2);
        assert!((atomic.moment(1) - (0.5 * 1.0 + 0.5 * (-2.0))).abs() < 1e-12);

        assert!(LineMeasure::new(vec![1.0, 1.0], vec![]).is_err());
        assert!(LineMeasure::new(vec![1.0, -1.0, 1.0], vec![]).is_err());
        assert!(LineMeasure::from_atoms(8, vec![LineAtom { x: 2.5, mass: 1.0 }]).is_err());
        assert!(LineMeasure::from_atoms(8, vec![LineAtom { x: 0.0, mass: 0.0 }]).is_err());
        assert!(LineMeasure::new(vec![0.0, 0.0, 0.0], vec![]).is_err());
    }

    #[test]
    fn szego_map_sends_equilibrium_to_uniform() {
        let mu = szego_map(&LineMeasure::equilibrium(256).unwrap());
        assert_eq!(mu.grid_size(), 512);
        for &w in mu.ac_weight() {
            assert!((w - 1.0).abs() < 1e-14);
        }
        let c = mu.moments(8).unwrap();
        for n in 1..=8 {
            assert!(c.get(n as i64).unwrap().norm() < 1e-13);
        }
        let alpha = VerblunskySeq::from_moments(&c, 8).unwrap();
        for a in alpha.alphas() {
            assert!(a.norm() < 1e-12);
        }
    }

    #[test]
    fn szego_map_atom_placement() {
        // δ at x = 2 → δ at θ = 0.
        let rho = LineMeasure::from_atoms(8, vec![LineAtom { x: 2.0, mass: 1.0 }]).unwrap();
        let mu = szego_map(&rho);
        assert_eq!(mu.point_masses().len(), 1);
        assert_eq!(mu.point_masses()[0].theta, 0.0);
        assert!((mu.point_masses()[0].mass - 1.0).abs() < 1e-14);

        // An interior atom splits into a mirror pair of half masses.
        let rho = LineMeasure::from_atoms(8, vec![LineAtom { x: 0.0, mass: 1.0 }]).unwrap();
        let mu = szego_map(&rho);
        let atoms = mu.point_masses();
        assert_eq!(atoms.len(), 2);
        assert!((atoms[0].theta - PI / 2.0).abs() < 1e-14);
        assert!((atoms[1].theta - 3.0 * PI / 2.0).abs() < 1e-14);
        assert!((atoms[0].mass - 0.5).abs() < 1e-14);
        assert!((atoms[1].mass - 0.5).abs() < 1e-14);
    }

    #[test]
    fn szego_map_is_measure_preserving_and_even() {
        let weight: Vec<f64> = (0..=192)
            .map(|j| {
                let t = PI * j as f64 / 192.0;
                1.0 + 0.7 * t.cos() + 0.25 * (3.0 * t).cos()
            })
            .collect();
        let rho = LineMeasure::new(
            weight,
            vec![
                LineAtom { x: -1.3, mass: 0.2 },
                LineAtom { x: 2.0, mass: 0.1 },
            ],
        )
        .unwrap();
        let mu = szego_map(&rho);

        // Exact evenness of the samples.
        let w = mu.ac_weight();
        let m = mu.grid_size();
        for k in 1..m {
            assert_eq!(w[k], w[m - k]);
        }

        // Moment consistency ∫x^k dρ = ∫(2cos θ)^k dμ at round-off level.
        for k in 1..=4u32 {
            let line = rho.moment(k);
            let circle = mu
                .integrate(|t| Complex64::new((2.0 * t.cos()).powi(k as i32), 0.0))
                .re;
            assert!(
                (line - circle).abs() < 1e-9,
                "k = {k}: {line} vs {circle}"
            );
        }

        // Verblunsky coefficients of the image are real.
        let c = mu.moments(10).unwrap();
        let alpha = VerblunskySeq::from_moments(&c, 10).unwrap();
        for a in alpha.alphas() {
            assert!(a.im.abs() <= 1e-9, "Im α = {}", a.im);
        }
    }

    #[test]
    fn oprl_from_free_coefficients() {
        let alpha = VerblunskySeq::from_real(&[0.0; 8]).unwrap();
        let cases: [(usize, &[f64]); 3] = [
            (1, &[0.0, 1.0]),
            (2, &[-2.0, 0.0, 1.0]),
            (3, &[0.0, -3.0, 0.0, 1.0]),
        ];
        for (n, want) in cases {
            let p = oprl_from_opuc(&alpha, n).unwrap();
            for (k, &c) in want.iter().enumerate() {
                assert!(
                    (p.coeff(k) - Complex64::new(c, 0.0)).norm() < 1e-12,
                    "n = {n}, coeff {k}"
                );
            }
        }
    }

    #[test]
    fn oprl_with_nonzero_alpha_is_monic_and_orthogonal() {
        let alpha = VerblunskySeq::from_real(&[0.5, 0.0, 0.0, 0.0]).unwrap();
        let p1 = oprl_from_opuc(&alpha, 1).unwrap();
        assert!((p1.coeff(0) - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((p1.coeff(1) - Complex64::new(1.0, 0.0)).norm() < 1e-12);

        // Gram orthogonality against the mapped moments, n ≤ 5, for a
        // random real coefficient sequence.
        let mut rng = ChaCha8Rng::seed_from_u64(4101);
        let raw: Vec<f64> = (0..10).map(|_| rng.gen_range(-0.6..0.6)).collect();
        let alpha = VerblunskySeq::from_real(&raw).unwrap();
        let mu = bernstein_szego(&alpha, alpha.len(), 2048).unwrap();
        for n in 1..=5usize {
            let p = oprl_from_opuc(&alpha, n).unwrap();
            assert!((p.coeff(n) - Complex64::new(1.0, 0.0)).norm() < 1e-10, "monic");
            for j in 0..n {
                let val = mu.integrate(|t| {
                    let x = Complex64::new(2.0 * t.cos(), 0.0);
                    p.eval(x) * x.powu(j as u32)
                });
                assert!(val.norm() < 1e-8, "n = {n}, j = {j}: {val}");
            }
        }
    }

    #[test]
    fn forward_map_chebyshev_correspondences() {
        // α ≡ 0 → a = (√2, 1, 1, ...), b ≡ 0.
        let j = geronimus_forward(&VerblunskySeq::from_real(&[0.0; 10]).unwrap()).unwrap();
        assert_eq!(j.len(), 5);
        assert!((j.a()[0] - 2.0f64.sqrt()).abs() < 1e-12);
        for &ak in &j.a()[1..] {
            assert!((ak - 1.0).abs() < 1e-12);
        }
        for &bk in j.b() {
            assert!(bk.abs() < 1e-12);
        }

        // α_{2n} = 0, α_{2n-1} = -1/(n+1) → a ≡ 1, b ≡ 0.
        let mut raw = vec![0.0f64; 12];
        for n in 1..=6 {
            raw[2 * n - 1] = -1.0 / (n as f64 + 1.0);
        }
        let j = geronimus_forward(&VerblunskySeq::from_real(&raw).unwrap()).unwrap();
        for &ak in j.a() {
            assert!((ak - 1.0).abs() < 1e-12);
        }
        for &bk in j.b() {
            assert!(bk.abs() < 1e-12);
        }

        // Complex coefficients are rejected.
        let complex =
            VerblunskySeq::new(vec![Complex64::new(0.0, 0.3), Complex64::new(0.1, 0.0)])
                .unwrap();
        assert!(geronimus_forward(&complex).is_err());
    }

    #[test]
    fn inverse_map_chebyshev_correspondences() {
        let mut a = vec![1.0; 8];
        a[0] = 2.0f64.sqrt();
        let j = JacobiParams::new(a, vec![0.0; 8]).unwrap();
        let alpha = geronimus_inverse(&j).unwrap();
        assert_eq!(alpha.len(), 15);
        for v in alpha.alphas() {
            assert!(v.norm() < 1e-12);
        }

        let j = JacobiParams::new(vec![1.0; 8], vec![0.0; 8]).unwrap();
        let alpha = geronimus_inverse(&j).unwrap();
        for n in 0..alpha.len() {
            let want = if n % 2 == 1 {
                -1.0 / ((n + 1) / 2 + 1) as f64
            } else {
                0.0
            };
            assert!(
                (alpha.alpha(n) - Complex64::new(want, 0.0)).norm() < 1e-12,
                "α_{n}"
            );
        }

        // A diagonal entry pushing spectrum outside [-2, 2] trips the sign
        // condition immediately.
        let mut a = vec![1.0; 4];
        a[0] = 2.0f64.sqrt();
        let bad = JacobiParams::new(a, vec![3.0, 0.0, 0.0, 0.0]).unwrap();
        match geronimus_inverse(&bad) {
            Err(Error::SupportOutsideInterval { index }) => assert_eq!(index, 2),
            other => panic!("expected a support error, got {other:?}"),
        }
    }

    #[test]
    fn geronimus_roundtrip_on_random_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(90125);
        let mut accepted = 0;
        let mut draws = 0;
        while accepted < 100 {
            draws += 1;
            assert!(draws < 200_000, "sign condition acceptance collapsed");
            let a: Vec<f64> = (0..5).map(|_| rng.gen_range(0.5..1.5)).collect();
            let b: Vec<f64> = (0..5).map(|_| rng.gen_range(-0.5..0.5)).collect();
            let j = JacobiParams::new(a.clone(), b.clone()).unwrap();
            let alpha = match geronimus_inverse(&j) {
                Ok(alpha) => alpha,
                Err(Error::SupportOutsideInterval { .. }) => continue,
                Err(other) => panic!("unexpected error {other:?}"),
            };
            let back = geronimus_forward(&alpha).unwrap();
            assert_eq!(back.len(), 4);
            for k in 0..4 {
                assert!(
                    (back.a()[k] - a[k]).abs() < 1e-10,
                    "a_{}: {} vs {}",
                    k + 1,
                    back.a()[k],
                    a[k]
                );
                assert!(
                    (back.b()[k] - b[k]).abs() < 1e-10,
                    "b_{}: {} vs {}",
                    k + 1,
                    back.b()[k],
                    b[k]
                );
            }
            accepted += 1;
        }
    }

    #[test]
    fn jacobi_truncations_have_interval_spectrum_and_matching_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(777);
        let raw: Vec<f64> = (0..14).map(|_| rng.gen_range(-0.55..0.55)).collect();
        let alpha = VerblunskySeq::from_real(&raw).unwrap();
        let j = geronimus_forward(&alpha).unwrap();

        for n in 2..=6 {
            let m = j.matrix(n).unwrap();
            for lambda in eigenvalues(&m).unwrap() {
                assert!(lambda.im.abs() < 1e-8);
                assert!(lambda.re.abs() <= 2.0 + 1e-8, "eigenvalue {lambda}");
            }
        }

        // ⟨e_1, J^k e_1⟩ equals the k-th power moment of the mapped
        // measure, computed on the circle side. The 8192-point grid keeps
        // trapezoid aliasing below 1e-10 even when a polynomial zero sits
        // within a hundredth of the circle.
        let mu = bernstein_szego(&alpha, alpha.len(), 8192).unwrap();
        let size = 6;
        for k in 0..=4u32 {
            let mut v = vec![0.0f64; size];
            v[0] = 1.0;
            for _ in 0..k {
                let mut next = vec![0.0f64; size];
                for i in 0..size {
                    let mut acc = j.b()[i] * v[i];
                    if i > 0 {
                        acc += j.a()[i - 1] * v[i - 1];
                    }
                    if i + 1 < size {
                        acc += j.a()[i] * v[i + 1];
                    }
                    next[i] = acc;
                }
                v = next;
            }
            let matrix_moment = v[0];
            let circle_moment = mu
                .integrate(|t| Complex64::new((2.0 * t.cos()).powi(k as i32), 0.0))
                .re;
            assert!(
                (matrix_moment - circle_moment).abs() < 1e-8,
                "k = {k}: {matrix_moment} vs {circle_moment}"
            );
        }
    }

    #[test]
    fn coefficient_map_is_local() {
        let mut rng = ChaCha8Rng::seed_from_u64(3111);
        let raw: Vec<f64> = (0..12).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let alpha = VerblunskySeq::from_real(&raw).unwrap();
        let base = geronimus_forward(&alpha).unwrap();
        for k in 0..12 {
            let mut bumped = raw.clone();
            bumped[k] = (bumped[k] + 0.05).clamp(-0.9, 0.9);
            let perturbed =
                geronimus_forward(&VerblunskySeq::from_real(&bumped).unwrap()).unwrap();
            let target = k / 2 + 1;
            let mut touched = false;
            for m in 0..base.len() {
                let changed = base.a()[m] != perturbed.a()[m] || base.b()[m] != perturbed.b()[m];
                if changed {
                    touched = true;
                    let dist = (m as i64 + 1 - target as i64).abs();
                    assert!(dist <= 2, "α_{k} moved entry {} (distance {dist})", m + 1);
                }
            }
            assert!(touched, "α_{k} changed nothing");
        }
    }

    #[test]
    fn jacobi_opr_recurrence_values() {
        let j = JacobiParams::new(vec![1.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(jacobi_opr(&j, 0, 1.7).unwrap(), 1.0);
        assert!((jacobi_opr(&j, 2, 0.0).unwrap() + 1.0).abs() < 1e-15);

        let j = JacobiParams::new(vec![2.0f64.sqrt(), 1.0], vec![0.0, 0.0]).unwrap();
        assert!((jacobi_opr(&j, 2, 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(jacobi_opr(&j, 3, 0.0).is_err());
    }

    #[test]
    fn jacobi_params_validation_and_json() {
        assert!(JacobiParams::new(vec![], vec![]).is_err());
        assert!(JacobiParams::new(vec![1.0], vec![0.0, 0.0]).is_err());
        assert!(JacobiParams::new(vec![0.0], vec![0.0]).is_err());
        assert!(JacobiParams::new(vec![-1.0], vec![0.0]).is_err());
        assert!(JacobiParams::new(vec![f64::NAN], vec![0.0]).is_err());

        let j = JacobiParams::new(vec![2.0f64.sqrt(), 1.0], vec![0.25, -0.5]).unwrap();
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"a\"") && text.contains("\"b\""));
        let back: JacobiParams = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        assert!(serde_json::from_str::<JacobiParams>("{\"a\":[-1.0],\"b\":[0.0]}").is_err());
    }
}
