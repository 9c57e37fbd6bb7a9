//! Probability measures on the unit circle and their moments.
//!
//! A [`CircleMeasure`] is the desk-scale representation used everywhere in
//! the crate: an absolutely continuous part sampled on the uniform grid
//! `θ_k = 2πk/M` (values of the density `w` against `dθ/2π`), plus a finite
//! list of point masses. Integrals against the AC part are trapezoid sums,
//! which on the periodic grid are spectrally accurate for smooth densities;
//! atoms are summed exactly.
//!
//! From a measure flow the three transforms at the heart of the subject:
//!
//! * moments `c_n = ∫ e^{-inθ} dμ(θ)`,
//! * the Carathéodory function
//!   `F(z) = ∫ (e^{iθ} + z)/(e^{iθ} - z) dμ(θ) = 1 + 2 Σ_{n≥1} c_n z^n`,
//!   analytic on the disk with positive real part and `F(0) = 1`,
//! * the Schur function `f` with `F = (1 + z f)/(1 - z f)`, analytic with
//!   `|f| ≤ 1` on the disk.
//!
//! `μ ↔ F ↔ f` are bijections; `μ` is recovered from `F` through the weak
//! limit of `Re F(r e^{iθ}) dθ/2π` as `r → 1`, realized here at a fixed
//! radius tied to the grid resolution.

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::series::PowerSeries;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// A single atom of a [`CircleMeasure`]: angle in `[0, 2π)` and a positive
/// mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMass {
    pub theta: f64,
    pub mass: f64,
}

/// A probability measure on the unit circle: grid-sampled AC density plus
/// point masses. Normalized to total mass one on construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawCircleMeasure")]
pub struct CircleMeasure {
    grid_size: usize,
    ac_weight: Vec<f64>,
    point_masses: Vec<PointMass>,
}

/// Wire format for [`CircleMeasure`]; construction re-validates.
#[derive(Deserialize)]
struct RawCircleMeasure {
    grid_size: usize,
    ac_weight: Vec<f64>,
    #[serde(default)]
    point_masses: Vec<PointMass>,
}

impl TryFrom<RawCircleMeasure> for CircleMeasure {
    type Error = Error;
    fn try_from(raw: RawCircleMeasure) -> Result<Self> {
        if raw.grid_size != raw.ac_weight.len() {
            return Err(Error::invalid(format!(
                "grid_size {} does not match {} density samples",
                raw.grid_size,
                raw.ac_weight.len()
            )));
        }
        CircleMeasure::new(raw.ac_weight, raw.point_masses)
    }
}

/// Moments `c_0 ..= c_N` of a probability measure, with `c_0 = 1` exactly
/// and the convention `c_{-n} = conj(c_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMomentSeq")]
pub struct MomentSeq {
    #[serde(with = "crate::serde_util::complex_vec")]
    c: Vec<Complex64>,
}

/// Wire format for [`MomentSeq`]; construction re-validates.
#[derive(Deserialize)]
struct RawMomentSeq {
    #[serde(with = "crate::serde_util::complex_vec")]
    c: Vec<Complex64>,
}

impl TryFrom<RawMomentSeq> for MomentSeq {
    type Error = Error;
    fn try_from(raw: RawMomentSeq) -> Result<Self> {
        MomentSeq::new(raw.c)
    }
}

/// Neumaier-compensated sum; moments are small differences of large grid
/// sums, so the extra digits are cheap insurance.
pub(crate) fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

impl CircleMeasure {
    /// Builds a measure from density samples `w(θ_k)` on the uniform grid
    /// and a list of atoms, then normalizes total mass to one.
    ///
    /// Rejects grids smaller than 4 points, negative density beyond
    /// round-off, non-positive masses, duplicate atom angles, and data with
    /// no mass at all. Atom angles are reduced modulo `2π`.
    pub fn new(ac_weight: Vec<f64>, point_masses: Vec<PointMass>) -> Result<Self> {
        let grid_size = ac_weight.len();
        if grid_size < 4 {
            return Err(Error::invalid(format!(
                "grid of {grid_size} points is too small (need at least 4)"
            )));
        }
        let mut weight = ac_weight;
        for w in weight.iter_mut() {
            if *w < -1e-12 {
                return Err(Error::invalid(format!("negative density sample {w}")));
            }
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        let mut atoms = point_masses;
        for a in atoms.iter_mut() {
            if !(a.mass > 0.0) {
                return Err(Error::invalid(format!("atom mass {} is not positive", a.mass)));
            }
            a.theta = a.theta.rem_euclid(TAU);
        }
        atoms.sort_by(|p, q| p.theta.total_cmp(&q.theta));
        for pair in atoms.windows(2) {
            if (pair[1].theta - pair[0].theta).abs() < 1e-12 {
                return Err(Error::invalid(format!(
                    "duplicate atom angle {}",
                    pair[0].theta
                )));
            }
        }
        let ac_mass = compensated_sum(weight.iter().copied()) / grid_size as f64;
        let atom_mass: f64 = atoms.iter().map(|a| a.mass).sum();
        let total = ac_mass + atom_mass;
        if !(total > 1e-300) {
            return Err(Error::invalid("measure has no mass"));
        }
        let scale = 1.0 / total;
        for w in weight.iter_mut() {
            *w *= scale;
        }
        for a in atoms.iter_mut() {
            a.mass *= scale;
        }
        Ok(CircleMeasure {
            grid_size,
            ac_weight: weight,
            point_masses: atoms,
        })
    }

    /// Normalized Lebesgue measure `dθ/2π` on an `m`-point grid.
    pub fn uniform(m: usize) -> Self {
        CircleMeasure::new(vec![1.0; m], Vec::new()).expect("uniform measure is valid")
    }

    /// Builds a purely absolutely continuous measure by sampling a density
    /// function (values against `dθ/2π`) on the `m`-point grid.
    pub fn from_density(m: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let weight = (0..m).map(|k| f(TAU * k as f64 / m as f64)).collect();
        CircleMeasure::new(weight, Vec::new())
    }

    /// A purely atomic probability measure.
    pub fn from_atoms(grid_size: usize, atoms: Vec<PointMass>) -> Result<Self> {
        CircleMeasure::new(vec![0.0; grid_size.max(4)], atoms)
    }

    /// Number of grid points `M`.
    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    /// Grid angle `θ_k = 2πk/M`.
    pub fn theta(&self, k: usize) -> f64 {
        TAU * k as f64 / self.grid_size as f64
    }

    /// Density samples against `dθ/2π` (after normalization).
    pub fn ac_weight(&self) -> &[f64] {
        &self.ac_weight
    }

    /// The atoms, sorted by angle.
    pub fn point_masses(&self) -> &[PointMass] {
        &self.point_masses
    }

    /// Total mass (one up to rounding, by construction).
    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.ac_weight.iter().copied()) / self.grid_size as f64
            + self.point_masses.iter().map(|a| a.mass).sum::<f64>()
    }

    /// Mass of the absolutely continuous part alone.
    pub fn ac_mass(&self) -> f64 {
        compensated_sum(self.ac_weight.iter().copied()) / self.grid_size as f64
    }

    /// Integrates a complex-valued function against the measure: trapezoid
    /// over the grid for the AC part, exact sums over atoms.
    pub fn integrate(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        let m = self.grid_size as f64;
        let vals: Vec<Complex64> = (0..self.grid_size)
            .map(|k| f(self.theta(k)) * self.ac_weight[k])
            .collect();
        let re = compensated_sum(vals.iter().map(|v| v.re)) / m;
        let im = compensated_sum(vals.iter().map(|v| v.im)) / m;
        let mut acc = Complex64::new(re, im);
        for a in &self.point_masses {
            acc += f(a.theta) * a.mass;
        }
        acc
    }

    /// Moments `c_0 ..= c_N` with `c_n = ∫ e^{-inθ} dμ`, renormalized so
    /// that `c_0 = 1` exactly.
    ///
    /// Fails with [`Error::AliasingRisk`] when `N ≥ M/2`: beyond the grid's
    /// Nyquist index the trapezoid sums fold high frequencies into low ones
    /// with O(1) error.
    pub fn moments(&self, n_max: usize) -> Result<MomentSeq> {
        if 2 * n_max >= self.grid_size {
            return Err(Error::AliasingRisk {
                index: n_max,
                grid_size: self.grid_size,
            });
        }
        let mut c = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let nn = n as f64;
            c.push(self.integrate(|theta| Complex64::from_polar(1.0, -nn * theta)));
        }
        let c0 = c[0];
        debug_assert!(c0.im.abs() < 1e-12, "c_0 must be real");
        for v in c.iter_mut() {
            *v /= c0.re;
        }
        c[0] = Complex64::new(1.0, 0.0);
        Ok(MomentSeq { c })
    }

    /// Carathéodory function by direct quadrature of the Herglotz kernel.
    /// Complements the truncated-series route of
    /// [`MomentSeq::caratheodory`]; preferable when `|z|` is within a few
    /// grid spacings of the circle. Requires `|z| < 1`.
    pub fn caratheodory_at(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDisk { modulus: z.norm() });
        }
        Ok(self.integrate(|theta| {
            let e = Complex64::from_polar(1.0, theta);
            (e + z) / (e - z)
        }))
    }
}

impl MomentSeq {
    /// Wraps raw moments `c_0 ..= c_N`, normalizing so `c_0 = 1`. Rejects
    /// empty input, a vanishing `c_0`, and any `|c_n| > 1 + slack`
    /// (impossible for a probability measure).
    pub fn new(c: Vec<Complex64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::invalid("moment sequence needs at least c_0"));
        }
        if c[0].norm() < 1e-300 {
            return Err(Error::invalid("c_0 must be nonzero"));
        }
        let c0 = c[0];
        let c: Vec<Complex64> = c.iter().map(|&v| v / c0).collect();
        for (n, v) in c.iter().enumerate() {
            if v.norm() > 1.0 + 1e-9 {
                return Err(Error::invalid(format!(
                    "|c_{n}| = {} exceeds 1; not the moments of a probability measure",
                    v.norm()
                )));
            }
        }
        Ok(MomentSeq { c })
    }

    /// Largest available moment index `N`.
    pub fn max_index(&self) -> usize {
        self.c.len() - 1
    }

    /// Moment `c_n` for any integer `n` in `[-N, N]`, via `c_{-n} = conj(c_n)`.
    pub fn get(&self, n: i64) -> Result<Complex64> {
        let idx = n.unsigned_abs() as usize;
        let v = self
            .c
            .get(idx)
            .copied()
            .ok_or_else(|| Error::invalid(format!("moment index {n} beyond available {}", self.max_index())))?;
        Ok(if n >= 0 { v } else { v.conj() })
    }

    /// The nonnegative-index moments `c_0 ..= c_N`.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.c
    }

    /// Carathéodory function as a truncated series
    /// `F(z) = 1 + 2 Σ_{n=1}^K c_n z^n`, with `K` capped at the available
    /// moment range.
    pub fn caratheodory_series(&self, order: usize) -> PowerSeries {
        let k = order.min(self.max_index());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
            *slot = 2.0 * self.c[n];
        }
        PowerSeries::new(coeffs)
    }

    /// Evaluates the truncated Carathéodory series at `z`, `|z| < 1`.
    ///
    /// The truncation error is of order `|z|^{N+1}/(1-|z|)`; for `|z|`
    /// within a few grid spacings of the circle prefer
    /// [`CircleMeasure::caratheodory_at`].
    pub fn caratheodory(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDisk { modulus: z.norm() });
        }
        Ok(self.caratheodory_series(self.max_index()).eval(z))
    }
}

/// Schur function series from a Carathéodory series:
/// `f(z) = z^{-1} (F(z) - 1)/(F(z) + 1)`, one order lower than the input.
///
/// Rejects series with `F(0) ≠ 1` and data whose real part goes negative
/// on a probe circle of radius 1/4 — a truncated genuine Carathéodory
/// function satisfies `Re F ≥ 1/3` there, so a violation means the input
/// never came from a probability measure.
pub fn schur_from_caratheodory(f_series: &PowerSeries) -> Result<PowerSeries> {
    if (f_series.coeff(0) - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
        return Err(Error::invalid(format!(
            "Carathéodory data must have F(0) = 1, got {}",
            f_series.coeff(0)
        )));
    }
    if f_series.order() == 0 {
        return Err(Error::invalid(
            "need at least one moment beyond c_0 to form a Schur function",
        ));
    }
    let probe = 64;
    for k in 0..probe {
        let z = Complex64::from_polar(0.25, TAU * k as f64 / probe as f64);
        if f_series.eval(z).re < 1e-9 {
            return Err(Error::invalid(
                "series has nonpositive real part on |z| = 1/4; not Carathéodory data",
            ));
        }
    }
    let one = PowerSeries::constant(Complex64::new(1.0, 0.0), f_series.order());
    let numer = f_series.sub(&one).div_z()?;
    let denom = f_series.add(&one).truncated(numer.order());
    Ok(numer.mul(&denom.reciprocal()?))
}

/// Carathéodory series from a Schur series:
/// `F(z) = (1 + z f(z))/(1 - z f(z))`, one order higher than the input.
pub fn caratheodory_from_schur(f: &PowerSeries) -> PowerSeries {
    let mut zf_coeffs = Vec::with_capacity(f.order() + 2);
    zf_coeffs.push(Complex64::new(0.0, 0.0));
    zf_coeffs.extend_from_slice(f.coeffs());
    let zf = PowerSeries::new(zf_coeffs);
    let one = PowerSeries::constant(Complex64::new(1.0, 0.0), zf.order());
    let numer = one.add(&zf);
    let denom = one.sub(&zf);
    numer.mul(&denom.reciprocal().expect("1 - z f has constant term 1"))
}

/// Recovers a measure from a truncated Carathéodory series through the
/// Poisson-smoothed density `w(θ_k) = Re F(r e^{iθ_k})`, normalized to mass
/// one. The default radius `r = 1 - 10/M` ties the smoothing scale to the
/// grid resolution. Atoms blur into AC lumps of width `~(1-r)` at this
/// radius; only the absolutely continuous part is recovered faithfully.
///
/// Fails if the sampled density dips below `-1e-9` (not Carathéodory data
/// at this resolution), or if the grid cannot resolve the series order.
pub fn measure_from_caratheodory(
    f_series: &PowerSeries,
    grid_size: usize,
    radius: Option<f64>,
) -> Result<CircleMeasure> {
    let m = grid_size;
    if m < 2 * f_series.order() {
        return Err(Error::invalid(format!(
            "grid of {m} points cannot resolve a series of order {}",
            f_series.order()
        )));
    }
    let r = radius.unwrap_or(1.0 - 10.0 / m as f64);
    if !(0.0..1.0).contains(&r) {
        return Err(Error::invalid(format!("radius {r} must lie in [0, 1)")));
    }
    let mut weight = Vec::with_capacity(m);
    for k in 0..m {
        let z = Complex64::from_polar(r, TAU * k as f64 / m as f64);
        let w = f_series.eval(z).re;
        if w < -1e-9 {
            return Err(Error::invalid(format!(
                "density {w} at grid index {k} is negative; not Carathéodory data"
            )));
        }
        weight.push(w.max(0.0));
    }
    CircleMeasure::new(weight, Vec::new())
}

/// Toeplitz-form inner product `⟨P, Q⟩ = Σ_{j,k} conj(p_j) q_k c_{j-k}`
/// (antilinear in `P`), equal to `∫ conj(P) Q dμ` for the measure behind
/// the moments. Fails if either degree exceeds the available moment range.
pub fn inner_product(p: &ComplexPoly, q: &ComplexPoly, c: &MomentSeq) -> Result<Complex64> {
    let dp = p.degree(0.0).unwrap_or(0);
    let dq = q.degree(0.0).unwrap_or(0);
    if dp.max(dq) > c.max_index() {
        return Err(Error::invalid(format!(
            "inner product of degrees ({dp}, {dq}) needs moments to index {}, have {}",
            dp.max(dq),
            c.max_index()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=dp {
        for k in 0..=dq {
            acc += p.coeff(j).conj() * q.coeff(k) * c.get(j as i64 - k as i64)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Density of the degree-one Bernstein–Szegő measure with parameter `a`:
    /// `w(θ) = (1 - a²)/|e^{iθ} - a|²`.
    fn bs_weight(a: f64) -> impl Fn(f64) -> f64 {
        move |theta: f64| {
            let e = Complex64::from_polar(1.0, theta);
            (1.0 - a * a) / (e - c64(a, 0.0)).norm_sqr()
        }
    }

    #[test]
    fn uniform_measure_has_delta_moments() {
        let mu = CircleMeasure::uniform(8);
        let c = mu.moments(2).unwrap();
        assert_eq!(c.get(0).unwrap(), c64(1.0, 0.0));
        assert!(c.get(1).unwrap().norm() < 1e-15);
        assert!(c.get(2).unwrap().norm() < 1e-15);
    }

    #[test]
    fn single_atom_has_unit_moments() {
        let mu = CircleMeasure::from_atoms(16, vec![PointMass { theta: 0.0, mass: 1.0 }]).unwrap();
        let c = mu.moments(5).unwrap();
        for n in 0..=5 {
            assert!((c.get(n).unwrap() - c64(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn bernstein_szego_moments_are_geometric() {
        // Degree-one Bernstein-Szego density with a = 1/2 has c_n = 2^{-n}.
        let mu = CircleMeasure::from_density(1024, bs_weight(0.5)).unwrap();
        let c = mu.moments(2).unwrap();
        assert!((c.get(1).unwrap() - c64(0.5, 0.0)).norm() < 1e-12);
        assert!((c.get(2).unwrap() - c64(0.25, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn moments_reject_aliasing_range() {
        let mu = CircleMeasure::uniform(64);
        assert!(matches!(
            mu.moments(32),
            Err(Error::AliasingRisk { index: 32, grid_size: 64 })
        ));
        assert!(mu.moments(31).is_ok());
    }

    #[test]
    fn negative_density_is_rejected() {
        assert!(CircleMeasure::new(vec![1.0, 1.0, -0.5, 1.0], Vec::new()).is_err());
    }

    #[test]
    fn caratheodory_of_geometric_moments() {
        // c_n = 2^{-n}: F(0.3) = 1 + 2 sum (0.15)^n = 1 + 0.3/0.85.
        let c = MomentSeq::new((0..=40).map(|n| c64(0.5f64.powi(n), 0.0)).collect()).unwrap();
        let f = c.caratheodory(c64(0.3, 0.0)).unwrap();
        assert!((f - c64(1.0 + 0.3 / 0.85, 0.0)).norm() < 1e-14);
        assert!(c.caratheodory(c64(1.0, 0.0)).is_err());
    }

    #[test]
    fn quadrature_caratheodory_matches_series() {
        let mu = CircleMeasure::from_density(2048, bs_weight(0.5)).unwrap();
        let c = mu.moments(60).unwrap();
        let z = c64(0.2, 0.35);
        let by_series = c.caratheodory(z).unwrap();
        let by_quadrature = mu.caratheodory_at(z).unwrap();
        assert!((by_series - by_quadrature).norm() < 1e-10);
    }

    #[test]
    fn schur_function_of_geometric_moments_is_constant() {
        // F = (1 + z/2)/(1 - z/2) has Schur function f = 1/2.
        let c = MomentSeq::new((0..=30).map(|n| c64(0.5f64.powi(n), 0.0)).collect()).unwrap();
        let f = schur_from_caratheodory(&c.caratheodory_series(30)).unwrap();
        assert!((f.coeff(0) - c64(0.5, 0.0)).norm() < 1e-13);
        for j in 1..=f.order() {
            assert!(f.coeff(j).norm() < 1e-13, "f_{j} = {}", f.coeff(j));
        }
    }

    #[test]
    fn schur_caratheodory_round_trip() {
        let mu = CircleMeasure::from_density(512, |t| 1.0 + 0.3 * t.cos() + 0.2 * (2.0 * t).sin())
            .unwrap();
        let f_c = mu.moments(20).unwrap().caratheodory_series(20);
        let f = schur_from_caratheodory(&f_c).unwrap();
        let back = caratheodory_from_schur(&f);
        assert!(back.coeff_distance(&f_c) < 1e-12);
    }

    #[test]
    fn constant_caratheodory_recovers_uniform_measure() {
        let f = PowerSeries::constant(c64(1.0, 0.0), 4);
        let mu = measure_from_caratheodory(&f, 64, None).unwrap();
        assert!(mu.point_masses().is_empty());
        for &w in mu.ac_weight() {
            assert!((w - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn smooth_density_round_trips_through_caratheodory() {
        // The Poisson smoothing error at radius r is (1-r) Σ n |ŵ_n| for a
        // smooth density, so a tight sup-norm recovery asks for a radius
        // closer to the circle than the atom-friendly default.
        let m = 1024;
        let mu = CircleMeasure::from_density(m, bs_weight(0.5)).unwrap();
        let series = mu.moments(40).unwrap().caratheodory_series(40);
        let back = measure_from_caratheodory(&series, m, Some(1.0 - 1e-4)).unwrap();
        let sup_err = back
            .ac_weight()
            .iter()
            .zip(mu.ac_weight())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(sup_err < 1e-3, "sup error {sup_err}");
    }

    #[test]
    fn default_radius_smoothing_error_is_first_order() {
        // At the default radius 1 - 10/M the only surviving error for
        // w = 1 + 0.5 cos θ is the damping of c_1: exactly 0.5 (1 - r).
        let m = 1024;
        let mu = CircleMeasure::from_density(m, |t| 1.0 + 0.5 * t.cos()).unwrap();
        let series = mu.moments(8).unwrap().caratheodory_series(8);
        let back = measure_from_caratheodory(&series, m, None).unwrap();
        let sup_err = back
            .ac_weight()
            .iter()
            .zip(mu.ac_weight())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let predicted = 0.5 * (10.0 / m as f64);
        assert!((sup_err - predicted).abs() < 1e-6, "sup error {sup_err} vs {predicted}");
    }

    #[test]
    fn atom_blurs_into_poisson_bump() {
        // An atom is smeared into a lump of height ~ mass (1+r)/(1-r) at
        // the default radius; the recovery stays a valid measure.
        let m = 256;
        let mu = CircleMeasure::new(
            vec![0.5; m],
            vec![PointMass { theta: 0.0, mass: 0.5 }],
        )
        .unwrap();
        let series = mu.moments(m / 2 - 1).unwrap().caratheodory_series(m / 2 - 1);
        let back = measure_from_caratheodory(&series, m, None).unwrap();
        let r: f64 = 1.0 - 10.0 / m as f64;
        let expected_peak = 0.5 + 0.5 * (1.0 + r) / (1.0 - r);
        assert!((back.total_mass() - 1.0).abs() < 1e-12);
        let peak = back.ac_weight()[0];
        assert!(
            (peak - expected_peak).abs() / expected_peak < 0.35,
            "peak {peak} vs predicted {expected_peak}"
        );
        // Far from the atom the density is near its AC level.
        assert!((back.ac_weight()[m / 2] - 0.5).abs() < 0.05);
    }

    #[test]
    fn inner_product_of_first_monic_polynomial() {
        // <P, P> for P = z - 1/2 against c = (1, 1/2, 1/4) is 3/4.
        let c = MomentSeq::new(vec![c64(1.0, 0.0), c64(0.5, 0.0), c64(0.25, 0.0)]).unwrap();
        let p = ComplexPoly::from_real(&[-0.5, 1.0]);
        let ip = inner_product(&p, &p, &c).unwrap();
        assert!((ip - c64(0.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn inner_product_needs_enough_moments() {
        let c = MomentSeq::new(vec![c64(1.0, 0.0), c64(0.5, 0.0)]).unwrap();
        let p = ComplexPoly::from_real(&[0.0, 0.0, 1.0]);
        assert!(inner_product(&p, &p, &c).is_err());
    }

    #[test]
    fn measure_json_round_trip() {
        let mu = CircleMeasure::new(
            vec![0.5; 8],
            vec![PointMass { theta: 1.0, mass: 0.5 }],
        )
        .unwrap();
        let text = serde_json::to_string(&mu).unwrap();
        let back: CircleMeasure = serde_json::from_str(&text).unwrap();
        assert_eq!(back.grid_size(), 8);
        assert!((back.total_mass() - 1.0).abs() < 1e-15);
        assert_eq!(back.point_masses().len(), 1);
    }

    #[test]
    fn moment_json_matches_schema() {
        let c = MomentSeq::new(vec![c64(1.0, 0.0), c64(0.25, -0.5)]).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"c":[[1.0,0.0],[0.25,-0.5]]}"#);
    }
}
