//! Dense complex polynomials in one variable.
//!
//! Coefficients are stored low degree first, so `coeffs[j]` multiplies
//! `z^j`. The length of the coefficient vector fixes the *formal* degree:
//! trailing zeros are meaningful to operations such as [`ComplexPoly::reversed`],
//! where the reversal degree must be supplied explicitly because
//! `P*` depends on which space `ℂ[z]_n` the polynomial is viewed in.
//!
//! The reversal `P*(z) = z^n · conj(P(1/z̄))`, i.e. coefficient `j` of `P*`
//! is `conj(c_{n-j})`, is the single most used operation in the crate: the
//! Szegő recursion, Wall polynomials, and band-structure computations all
//! lean on it.

use num_complex::Complex64;
use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// A polynomial with `Complex64` coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    /// Builds a polynomial from coefficients, lowest degree first.
    /// An empty vector is normalized to the zero polynomial `[0]`.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            ComplexPoly {
                coeffs: vec![Complex64::new(0.0, 0.0)],
            }
        } else {
            ComplexPoly { coeffs }
        }
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        ComplexPoly {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        ComplexPoly {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        }
    }

    /// Builds a polynomial from real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        ComplexPoly::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Coefficient slice, lowest degree first.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^j`, zero beyond the stored length.
    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs
            .get(j)
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Formal degree: one less than the stored coefficient count.
    pub fn formal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Actual degree: index of the last coefficient with modulus above
    /// `tol`; `None` for the (numerical) zero polynomial.
    pub fn degree(&self, tol: f64) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.norm() > tol)
    }

    /// Largest coefficient modulus; a natural scale for residual checks.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// The reversal in degree `n`: `P*(z) = z^n conj(P(1/z̄))`, with
    /// coefficient `j` equal to `conj(c_{n-j})`.
    ///
    /// Panics if `n` is smaller than the actual degree of `self`, since the
    /// reversal is only defined on `ℂ[z]_n`.
    pub fn reversed(&self, n: usize) -> ComplexPoly {
        let deg = self.degree(0.0).unwrap_or(0);
        assert!(
            n >= deg,
            "reversal degree {n} is below the polynomial degree {deg}"
        );
        let mut rev = vec![Complex64::new(0.0, 0.0); n + 1];
        for (j, slot) in rev.iter_mut().enumerate() {
            let c = self.coeff(n - j);
            *slot = c.conj();
        }
        ComplexPoly::new(rev)
    }

    /// Coefficient-wise complex conjugation (`P(z) ↦ conj-coefficients`,
    /// i.e. the polynomial `z ↦ conj(P(z̄))`).
    pub fn conj_coeffs(&self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Sum of two polynomials.
    pub fn add(&self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff(j) + rhs.coeff(j);
        }
        ComplexPoly::new(out)
    }

    /// Difference of two polynomials.
    pub fn sub(&self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff(j) - rhs.coeff(j);
        }
        ComplexPoly::new(out)
    }

    /// Product of two polynomials (dense convolution).
    pub fn mul(&self, rhs: &ComplexPoly) -> ComplexPoly {
        let mut out =
            vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (j, &a) in self.coeffs.iter().enumerate() {
            for (k, &b) in rhs.coeffs.iter().enumerate() {
                out[j + k] += a * b;
            }
        }
        ComplexPoly::new(out)
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Complex64) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Multiplication by `z` (shift all coefficients up one degree).
    pub fn mul_z(&self) -> ComplexPoly {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(Complex64::new(0.0, 0.0));
        out.extend_from_slice(&self.coeffs);
        ComplexPoly::new(out)
    }

    /// Exact division by `z`, discarding the constant term.
    ///
    /// Intended for quantities that vanish at the origin by construction
    /// (inverse Szegő steps, Schur algorithm numerators); the constant term
    /// is dropped rather than folded into round-off.
    pub fn div_z(&self) -> ComplexPoly {
        if self.coeffs.len() == 1 {
            ComplexPoly::zero()
        } else {
            ComplexPoly::new(self.coeffs[1..].to_vec())
        }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> ComplexPoly {
        if self.coeffs.len() == 1 {
            return ComplexPoly::zero();
        }
        ComplexPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(j, &c)| c * ((j + 1) as f64))
                .collect(),
        )
    }

    /// Maximum modulus of the coefficient-wise difference, comparing
    /// positions beyond either length against zero.
    pub fn coeff_distance(&self, rhs: &ComplexPoly) -> f64 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        (0..n)
            .map(|j| (self.coeff(j) - rhs.coeff(j)).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 && self.coeffs.len() > 1 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            if j == 1 {
                write!(f, " z")?;
            } else if j > 1 {
                write!(f, " z^{j}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// External encoding: a bare list of [re, im] pairs, lowest degree first.
impl Serialize for ComplexPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&[c.re, c.im])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ComplexPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        struct PolyVisitor;
        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = ComplexPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a list of [re, im] coefficient pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(p) = seq.next_element::<[f64; 2]>()? {
                    coeffs.push(Complex64::new(p[0], p[1]));
                }
                Ok(ComplexPoly::new(coeffs))
            }
        }
        de.deserialize_seq(PolyVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reversal_swaps_and_conjugates_coefficients() {
        // (1+i) + 2 z^2 reversed within degree 2 is 2 + (1-i) z^2.
        let p = ComplexPoly::new(vec![c(1.0, 1.0), c(0.0, 0.0), c(2.0, 0.0)]);
        let rev = p.reversed(2);
        assert_eq!(rev.coeffs(), &[c(2.0, 0.0), c(0.0, 0.0), c(1.0, -1.0)]);
    }

    #[test]
    fn reversal_in_padded_degree_shifts_up() {
        // z - 1/2 viewed in degree 3: reversal is z^2 (z^{-1} ... ), i.e.
        // coefficients (0, 0, 1, -1/2) reversed-conjugated.
        let p = ComplexPoly::from_real(&[-0.5, 1.0]);
        let rev = p.reversed(3);
        assert_eq!(
            rev.coeffs(),
            &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(-0.5, 0.0)]
        );
    }

    #[test]
    fn reversal_is_an_involution_on_full_degree() {
        let p = ComplexPoly::new(vec![c(0.3, -0.2), c(1.5, 0.4), c(-0.7, 0.9)]);
        assert_eq!(p.reversed(2).reversed(2), p);
    }

    #[test]
    fn horner_evaluation_matches_direct_sum() {
        let p = ComplexPoly::new(vec![c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 1.0)]);
        let z = c(0.4, -0.3);
        let direct = p.coeff(0) + p.coeff(1) * z + p.coeff(2) * z * z;
        assert!((p.eval(z) - direct).norm() < 1e-15);
    }

    #[test]
    fn derivative_of_cubic() {
        let p = ComplexPoly::from_real(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(
            p.derivative().coeffs(),
            &[c(2.0, 0.0), c(6.0, 0.0), c(12.0, 0.0)]
        );
    }

    #[test]
    fn div_z_drops_constant_term() {
        let p = ComplexPoly::from_real(&[0.0, 5.0, 7.0]);
        assert_eq!(p.div_z().coeffs(), &[c(5.0, 0.0), c(7.0, 0.0)]);
        assert_eq!(ComplexPoly::zero().div_z(), ComplexPoly::zero());
    }

    #[test]
    fn serde_round_trip_is_exact() {
        let p = ComplexPoly::new(vec![c(0.125, -0.5), c(3.0, 0.0625)]);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, "[[0.125,-0.5],[3.0,0.0625]]");
        let back: ComplexPoly = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }

    fn arb_poly(max_len: usize) -> impl Strategy<Value = ComplexPoly> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..max_len)
            .prop_map(|v| ComplexPoly::new(v.into_iter().map(|(re, im)| c(re, im)).collect()))
    }

    proptest! {
        #[test]
        fn multiplication_commutes(p in arb_poly(6), q in arb_poly(6)) {
            let pq = p.mul(&q);
            let qp = q.mul(&p);
            prop_assert!(pq.coeff_distance(&qp) < 1e-12);
        }

        #[test]
        fn evaluation_is_multiplicative(p in arb_poly(6), q in arb_poly(6)) {
            let z = c(0.37, -0.21);
            let lhs = p.mul(&q).eval(z);
            let rhs = p.eval(z) * q.eval(z);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
