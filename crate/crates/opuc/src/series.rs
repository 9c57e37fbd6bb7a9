//! Truncated power series on the unit disk.
//!
//! A [`PowerSeries`] holds Taylor coefficients `a_0 ... a_K` of a function
//! analytic near the origin, with every operation truncating back to a
//! common order. These are the working representation for Carathéodory
//! functions `F(z) = 1 + 2 Σ c_n z^n`, Schur functions, and the various
//! Möbius-type transforms between them, where only finitely many
//! coefficients are ever known.
//!
//! Arithmetic is exact on the retained coefficients: if two inputs agree
//! with analytic functions to order `K`, so does every result (the usual
//! truncation algebra of formal power series).

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Taylor coefficients `a_0 ..= a_K` of an analytic function.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Builds a series from coefficients `a_0 ..= a_K`. The vector must be
    /// nonempty.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least a_0");
        PowerSeries { coeffs }
    }

    /// The constant series `value + 0·z + ...` of the given order.
    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = value;
        PowerSeries { coeffs }
    }

    /// Truncation order `K` (the series has `K + 1` coefficients).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^j`, zero beyond the truncation order.
    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs
            .get(j)
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Coefficient slice `a_0 ..= a_K`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Copy truncated (or zero-padded) to order `k`.
    pub fn truncated(&self, k: usize) -> PowerSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(k + 1, Complex64::new(0.0, 0.0));
        PowerSeries { coeffs }
    }

    /// Sum, at the smaller of the two orders.
    pub fn add(&self, rhs: &PowerSeries) -> PowerSeries {
        let k = self.order().min(rhs.order());
        PowerSeries::new((0..=k).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }

    /// Difference, at the smaller of the two orders.
    pub fn sub(&self, rhs: &PowerSeries) -> PowerSeries {
        let k = self.order().min(rhs.order());
        PowerSeries::new((0..=k).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }

    /// Product, truncated at the smaller of the two orders.
    pub fn mul(&self, rhs: &PowerSeries) -> PowerSeries {
        let k = self.order().min(rhs.order());
        let mut out = vec![Complex64::new(0.0, 0.0); k + 1];
        for j in 0..=k {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..=j {
                acc += self.coeff(i) * rhs.coeff(j - i);
            }
            out[j] = acc;
        }
        PowerSeries::new(out)
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Complex64) -> PowerSeries {
        PowerSeries::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Reciprocal series `1 / self` to the same order.
    ///
    /// Fails if `a_0` vanishes (to working precision), since the reciprocal
    /// is then not analytic at the origin.
    pub fn reciprocal(&self) -> Result<PowerSeries> {
        let a0 = self.coeff(0);
        if a0.norm() < 1e-300 {
            return Err(Error::invalid(
                "reciprocal of a power series with vanishing constant term",
            ));
        }
        let k = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); k + 1];
        out[0] = Complex64::new(1.0, 0.0) / a0;
        for j in 1..=k {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 1..=j {
                acc += self.coeff(i) * out[j - i];
            }
            out[j] = -acc / a0;
        }
        Ok(PowerSeries::new(out))
    }

    /// Multiplication by `z`: shifts coefficients up, dropping the top one
    /// so the order is preserved.
    pub fn mul_z(&self) -> PowerSeries {
        let mut out = Vec::with_capacity(self.coeffs.len());
        out.push(Complex64::new(0.0, 0.0));
        out.extend_from_slice(&self.coeffs[..self.coeffs.len() - 1]);
        PowerSeries::new(out)
    }

    /// Division by `z` for a series vanishing at the origin: drops `a_0`
    /// (which the caller asserts is zero by construction) and lowers the
    /// order by one.
    ///
    /// Fails when the series is constant, or when `a_0` is not small
    /// relative to the largest coefficient.
    pub fn div_z(&self) -> Result<PowerSeries> {
        if self.coeffs.len() == 1 {
            return Err(Error::invalid("cannot divide a constant series by z"));
        }
        let scale = self
            .coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            .max(1.0);
        if self.coeff(0).norm() > 1e-8 * scale {
            return Err(Error::invalid(format!(
                "series does not vanish at the origin (a_0 = {})",
                self.coeff(0)
            )));
        }
        Ok(PowerSeries::new(self.coeffs[1..].to_vec()))
    }

    /// Horner evaluation of the truncated series at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Maximum modulus of the coefficient-wise difference up to the
    /// smaller order.
    pub fn coeff_distance(&self, rhs: &PowerSeries) -> f64 {
        let k = self.order().min(rhs.order());
        (0..=k)
            .map(|j| (self.coeff(j) - rhs.coeff(j)).norm())
            .fold(0.0, f64::max)
    }
}

impl From<&crate::poly::ComplexPoly> for PowerSeries {
    fn from(p: &crate::poly::ComplexPoly) -> Self {
        PowerSeries::new(p.coeffs().to_vec())
    }
}
