//! The Szegő recursion and Verblunsky coefficients.
//!
//! For a nontrivial probability measure `μ` on the circle, the monic
//! orthogonal polynomials `Φ_n` obey the recursion
//!
//! ```text
//! Φ_{n+1}(z) = z Φ_n(z) - conj(α_n) Φ_n*(z),
//! Φ*_{n+1}(z) = Φ_n*(z) - α_n z Φ_n(z),
//! ```
//!
//! where `Φ_n*` is the degree-`n` reversal and the Verblunsky coefficients
//! `α_n = -conj(Φ_{n+1}(0))` lie strictly inside the unit disk. The map
//! `μ ↦ (α_0, α_1, ...)` is a bijection onto disk sequences, and everything
//! else in this crate is a change of coordinates on that bijection.
//!
//! Norms never need separate integration: `‖Φ_{n+1}‖ = ρ_n ‖Φ_n‖` with
//! `ρ_n = (1 - |α_n|²)^{1/2}`, so `‖Φ_n‖ = Π_{j<n} ρ_j`.
//!
//! The recursion inverts step by step (strict contraction of the data), and
//! the coefficients can be pulled directly out of a moment sequence by a
//! Levinson-type sweep using `⟨1, z Φ_n⟩ = conj(α_n) ‖Φ_n‖²`. Both
//! directions are implemented here, along with the Christoffel–Darboux
//! kernel in closed form.

use crate::error::{Error, Result};
use crate::measure::MomentSeq;
use crate::poly::ComplexPoly;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Hard cap on Levinson extraction length; beyond this the triangular
/// moment problem is too ill-conditioned in double precision to certify.
pub const MAX_EXTRACTION: usize = 64;

/// A finite sequence of Verblunsky coefficients.
///
/// All entries lie strictly inside the unit disk, except that a sequence
/// may be *terminal*: its last entry has modulus exactly one, encoding a
/// measure supported on finitely many points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawVerblunskySeq")]
pub struct VerblunskySeq {
    #[serde(with = "crate::serde_util::complex_vec")]
    alphas: Vec<Complex64>,
    terminal_unimodular: bool,
}

#[derive(Deserialize)]
struct RawVerblunskySeq {
    #[serde(with = "crate::serde_util::complex_vec")]
    alphas: Vec<Complex64>,
    #[serde(default)]
    terminal_unimodular: bool,
}

impl TryFrom<RawVerblunskySeq> for VerblunskySeq {
    type Error = Error;
    fn try_from(raw: RawVerblunskySeq) -> Result<Self> {
        if raw.terminal_unimodular {
            VerblunskySeq::terminal(raw.alphas)
        } else {
            VerblunskySeq::new(raw.alphas)
        }
    }
}

impl VerblunskySeq {
    /// A sequence with every coefficient strictly inside the disk
    /// (modulus below `1 - 1e-12`).
    pub fn new(alphas: Vec<Complex64>) -> Result<Self> {
        for (index, a) in alphas.iter().enumerate() {
            let modulus = a.norm();
            if modulus >= 1.0 - 1e-12 {
                return Err(Error::NotStrictlyInside { index, modulus });
            }
        }
        Ok(VerblunskySeq {
            alphas,
            terminal_unimodular: false,
        })
    }

    /// A terminal sequence: interior coefficients strictly inside the disk
    /// and a final coefficient of modulus one (snapped exactly onto the
    /// circle; rejected if off by more than `1e-9`).
    pub fn terminal(mut alphas: Vec<Complex64>) -> Result<Self> {
        let n = alphas.len();
        if n == 0 {
            return Err(Error::invalid("terminal sequence needs at least one entry"));
        }
        for (index, a) in alphas[..n - 1].iter().enumerate() {
            let modulus = a.norm();
            if modulus >= 1.0 - 1e-12 {
                return Err(Error::NotStrictlyInside { index, modulus });
            }
        }
        let last = alphas[n - 1];
        if (last.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "terminal coefficient has modulus {}, expected 1",
                last.norm()
            )));
        }
        alphas[n - 1] = last / last.norm();
        Ok(VerblunskySeq {
            alphas,
            terminal_unimodular: true,
        })
    }

    /// Builds from real coefficients (common in tests and examples).
    pub fn from_real(alphas: &[f64]) -> Result<Self> {
        VerblunskySeq::new(alphas.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Number of coefficients.
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    /// True when no coefficients are present.
    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// True when the final coefficient is unimodular.
    pub fn is_terminal(&self) -> bool {
        self.terminal_unimodular
    }

    /// The coefficients.
    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    /// Coefficient `α_j`.
    pub fn alpha(&self, j: usize) -> Complex64 {
        self.alphas[j]
    }

    /// `ρ_j = (1 - |α_j|²)^{1/2}`.
    pub fn rho(&self, j: usize) -> f64 {
        (1.0 - self.alphas[j].norm_sqr()).max(0.0).sqrt()
    }

    /// The non-terminal prefix: all of a plain sequence, or everything
    /// before the unimodular entry of a terminal one.
    pub fn interior(&self) -> VerblunskySeq {
        if self.terminal_unimodular {
            VerblunskySeq {
                alphas: self.alphas[..self.alphas.len() - 1].to_vec(),
                terminal_unimodular: false,
            }
        } else {
            self.clone()
        }
    }

    /// The first `n` coefficients as a plain (non-terminal) sequence.
    /// Panics if `n` reaches into a terminal entry.
    pub fn prefix(&self, n: usize) -> VerblunskySeq {
        assert!(n <= self.alphas.len());
        assert!(
            !(self.terminal_unimodular && n == self.alphas.len()),
            "prefix would include the terminal coefficient"
        );
        VerblunskySeq {
            alphas: self.alphas[..n].to_vec(),
            terminal_unimodular: false,
        }
    }

    /// Coefficients from index `n` onward (the data of the `n`-th Schur
    /// iterate). Preserves terminality.
    pub fn shifted(&self, n: usize) -> VerblunskySeq {
        assert!(n <= self.alphas.len());
        VerblunskySeq {
            alphas: self.alphas[n..].to_vec(),
            terminal_unimodular: self.terminal_unimodular && n < self.alphas.len(),
        }
    }

    /// The sequence `{-α_j}`, whose orthogonal polynomials are the
    /// second-kind polynomials of this one.
    pub fn sign_flipped(&self) -> VerblunskySeq {
        VerblunskySeq {
            alphas: self.alphas.iter().map(|a| -a).collect(),
            terminal_unimodular: self.terminal_unimodular,
        }
    }

    /// The rotated sequence `{λ α_j}` for unimodular `λ` (an Aleksandrov
    /// relative). Panics if `|λ|` is not 1 within `1e-12`.
    pub fn rotated(&self, lambda: Complex64) -> VerblunskySeq {
        assert!(
            (lambda.norm() - 1.0).abs() < 1e-12,
            "rotation parameter must be unimodular"
        );
        VerblunskySeq {
            alphas: self.alphas.iter().map(|&a| lambda * a).collect(),
            terminal_unimodular: self.terminal_unimodular,
        }
    }

    /// `Π_{j<n} ρ_j`, the norm `‖Φ_n‖`.
    pub fn norm_product(&self, n: usize) -> f64 {
        (0..n).map(|j| self.rho(j)).product()
    }

    /// Levinson-type extraction of `α_0 ..= α_{n-1}` from moments
    /// `c_0 ..= c_n`.
    ///
    /// Runs the Szegő recursion forward, producing each new coefficient
    /// from `α_k = Σ_m conj(Φ_k[m]) c_{m+1} / ‖Φ_k‖²`. Cost is O(n²) and
    /// the length is capped at [`MAX_EXTRACTION`].
    ///
    /// A coefficient with modulus beyond `1 + 1e-8` means the moments are
    /// not positive definite; one within `1e-10` of the circle means the
    /// measure behind the data is (numerically) supported on `k` points,
    /// reported as [`Error::TerminalParameter`].
    pub fn from_moments(c: &MomentSeq, n: usize) -> Result<Self> {
        if n > MAX_EXTRACTION {
            return Err(Error::invalid(format!(
                "extraction length {n} exceeds the supported cap {MAX_EXTRACTION}"
            )));
        }
        if n > c.max_index() {
            return Err(Error::invalid(format!(
                "extracting {n} coefficients needs moments to index {n}, have {}",
                c.max_index()
            )));
        }
        let mut alphas: Vec<Complex64> = Vec::with_capacity(n);
        let mut phi = ComplexPoly::one();
        let mut phi_star = ComplexPoly::one();
        let mut norm_sq = 1.0;
        for k in 0..n {
            let mut ip = Complex64::new(0.0, 0.0);
            for (m, coeff) in phi.coeffs().iter().enumerate() {
                ip += coeff.conj() * c.get(m as i64 + 1)?;
            }
            let alpha = ip / norm_sq;
            let modulus = alpha.norm();
            if modulus >= 1.0 + 1e-8 {
                return Err(Error::NotPositiveDefinite {
                    size: k + 1,
                    pivot: 1.0 - modulus * modulus,
                });
            }
            if modulus >= 1.0 - 1e-10 {
                return Err(Error::TerminalParameter { index: k });
            }
            let next_phi = phi.mul_z().sub(&phi_star.scale(alpha.conj()));
            let next_star = phi_star.sub(&phi.mul_z().scale(alpha));
            phi = next_phi;
            phi_star = next_star;
            norm_sq *= 1.0 - modulus * modulus;
            alphas.push(alpha);
        }
        VerblunskySeq::new(alphas)
    }
}

/// The first `N+1` monic orthogonal polynomials of a coefficient sequence,
/// their reversals, and their norms.
#[derive(Debug, Clone)]
pub struct OpucFamily {
    phi: Vec<ComplexPoly>,
    phi_star: Vec<ComplexPoly>,
    norms: Vec<f64>,
}

impl OpucFamily {
    /// Largest polynomial degree `N` available.
    pub fn max_degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Monic polynomial `Φ_n`.
    pub fn phi(&self, n: usize) -> &ComplexPoly {
        &self.phi[n]
    }

    /// Reversed polynomial `Φ_n*`.
    pub fn phi_star(&self, n: usize) -> &ComplexPoly {
        &self.phi_star[n]
    }

    /// Norm `‖Φ_n‖ = Π_{j<n} ρ_j`.
    pub fn norm(&self, n: usize) -> f64 {
        self.norms[n]
    }

    /// Orthonormal polynomial `φ_n = Φ_n / ‖Φ_n‖`.
    pub fn orthonormal(&self, n: usize) -> ComplexPoly {
        self.phi[n].scale(Complex64::new(1.0 / self.norms[n], 0.0))
    }

    /// Orthonormal reversed polynomial `φ_n* = Φ_n* / ‖Φ_n‖`.
    pub fn orthonormal_star(&self, n: usize) -> ComplexPoly {
        self.phi_star[n].scale(Complex64::new(1.0 / self.norms[n], 0.0))
    }
}

/// Runs the Szegő recursion forward, producing `Φ_0 ..= Φ_N` together with
/// reversals and norms. The input must be non-terminal (every coefficient
/// strictly inside the disk); slice a terminal sequence with
/// [`VerblunskySeq::interior`] first.
pub fn szego_forward(alpha: &VerblunskySeq) -> Result<OpucFamily> {
    if alpha.is_terminal() {
        return Err(Error::NotStrictlyInside {
            index: alpha.len() - 1,
            modulus: 1.0,
        });
    }
    let n = alpha.len();
    let mut phi = Vec::with_capacity(n + 1);
    let mut phi_star = Vec::with_capacity(n + 1);
    let mut norms = Vec::with_capacity(n + 1);
    phi.push(ComplexPoly::one());
    phi_star.push(ComplexPoly::one());
    norms.push(1.0);
    for k in 0..n {
        let a = alpha.alpha(k);
        let z_phi = phi[k].mul_z();
        phi.push(z_phi.sub(&phi_star[k].scale(a.conj())));
        phi_star.push(phi_star[k].sub(&z_phi.scale(a)));
        norms.push(norms[k] * alpha.rho(k));
    }
    Ok(OpucFamily {
        phi,
        phi_star,
        norms,
    })
}

/// One inverse step of the recursion: reads `α_{n-1} = -conj(Φ_n(0))` off
/// a monic `Φ_n` and reconstructs `Φ_{n-1}` through
/// `Φ_{n-1} = (Φ_n + conj(α_{n-1}) Φ_n*) / (ρ² z)`.
///
/// The bracket vanishes at the origin identically; its computed constant
/// term is discarded rather than divided, so no spurious `z^{-1}` leakage
/// occurs. Fails on constant input, on non-monic input, and when the
/// extracted coefficient is not strictly inside the disk.
pub fn inverse_szego_step(phi_n: &ComplexPoly) -> Result<(Complex64, ComplexPoly)> {
    let n = phi_n.formal_degree();
    if n == 0 {
        return Err(Error::invalid("cannot invert below degree zero"));
    }
    let lead = phi_n.coeff(n);
    if (lead - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
        return Err(Error::invalid(format!(
            "inverse step needs a monic polynomial; leading coefficient is {lead}"
        )));
    }
    let alpha = -phi_n.coeff(0).conj();
    let modulus = alpha.norm();
    if modulus >= 1.0 - 1e-12 {
        return Err(Error::NotStrictlyInside {
            index: n - 1,
            modulus,
        });
    }
    let rho_sq = 1.0 - modulus * modulus;
    let bracket = phi_n.add(&phi_n.reversed(n).scale(alpha.conj()));
    let phi_prev = bracket.div_z().scale(Complex64::new(1.0 / rho_sq, 0.0));
    // div_z dropped the constant; trim the top coefficient, which is
    // (1 - |α|²)/ρ² = 1 by construction, down to an exact monic vector.
    let mut coeffs = phi_prev.coeffs().to_vec();
    coeffs.truncate(n);
    coeffs[n - 1] = Complex64::new(1.0, 0.0);
    Ok((alpha, ComplexPoly::new(coeffs)))
}

/// Christoffel–Darboux kernel `K_n(z, ζ) = Σ_{j=0}^n conj(φ_j(ζ)) φ_j(z)`.
///
/// Away from the diagonal `z conj(ζ) = 1` the closed form
///
/// ```text
/// (1 - z conj(ζ)) K_n(z, ζ) = conj(φ*_{n+1}(ζ)) φ*_{n+1}(z)
///                              - conj(φ_{n+1}(ζ)) φ_{n+1}(z)
/// ```
///
/// is used; within `1e-8` of the diagonal the definition is summed
/// directly. Requires `n + 1` coefficients.
pub fn cd_kernel(alpha: &VerblunskySeq, n: usize, z: Complex64, zeta: Complex64) -> Result<Complex64> {
    if n + 1 > alpha.len() {
        return Err(Error::invalid(format!(
            "CD kernel at order {n} needs {} coefficients, have {}",
            n + 1,
            alpha.len()
        )));
    }
    let fam = szego_forward(&alpha.prefix(n + 1))?;
    let denom = Complex64::new(1.0, 0.0) - z * zeta.conj();
    if denom.norm() < 1e-8 {
        return Ok(cd_kernel_direct(&fam, n, z, zeta));
    }
    let top = fam.orthonormal_star(n + 1).eval(zeta).conj() * fam.orthonormal_star(n + 1).eval(z)
        - fam.orthonormal(n + 1).eval(zeta).conj() * fam.orthonormal(n + 1).eval(z);
    Ok(top / denom)
}

/// The CD kernel by direct summation of `Σ conj(φ_j(ζ)) φ_j(z)`.
pub fn cd_kernel_direct(fam: &OpucFamily, n: usize, z: Complex64, zeta: Complex64) -> Complex64 {
    (0..=n)
        .map(|j| {
            let pj = fam.orthonormal(j);
            pj.eval(zeta).conj() * pj.eval(z)
        })
        .sum()
}
