//! The Schur algorithm and Wall rational approximants.
//!
//! A Schur function is analytic on the disk with `|f| ≤ 1`. The Schur
//! algorithm peels off one disk parameter per step:
//!
//! ```text
//! γ_n = f_n(0),    f_{n+1}(z) = (f_n(z) - γ_n) / (z (1 - conj(γ_n) f_n(z))),
//! ```
//!
//! terminating exactly when some `|γ_n| = 1` (then `f_n` is a unimodular
//! constant and the underlying measure has finite support). The parameters
//! `γ_n` of the Schur function attached to a measure are *identical* to its
//! Verblunsky coefficients — that identification is what lets moment data
//! flow into the recursion world and back.
//!
//! Truncating the algorithm (set `f_{n+1} = 0`) and unwinding produces the
//! rational approximant `f^[n] = A_n / B_n` in Wall polynomials. Writing
//! the unwinding as a product of Möbius matrices
//! `M(γ) = [[z, γ], [conj(γ) z, 1]]`, the ordered product
//! `P_n = M(γ_0) ⋯ M(γ_n)` has the block form
//!
//! ```text
//! P_n = [[ z B_n*, A_n ],
//!        [ z A_n*, B_n ]],
//! ```
//!
//! which yields both Wall polynomials and, via the determinant
//! `det M(γ) = z ρ²`, the identity
//! `B_n B_n* - A_n A_n* = z^n Π_{j≤n} ρ_j²` used as a consistency check.
//! For a *finite* coefficient sequence the approximant at full depth is the
//! exact Schur function of the associated Bernstein–Szegő measure, which is
//! what makes the rational form here exact rather than approximate.

use crate::error::{Error, Result};
use crate::measure::MomentSeq;
use crate::poly::ComplexPoly;
use crate::series::PowerSeries;
use crate::szego::{szego_forward, VerblunskySeq};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Modulus at which a Schur parameter is treated as unimodular and the
/// algorithm stops.
const TERMINAL_TOL: f64 = 1e-10;

/// Depth cap for Wall rationals used in grid diagnostics.
const DIAGNOSTIC_DEPTH: usize = 20;

/// A Wall numerator/denominator pair `(A_n, B_n)` with `f^[n] = A_n/B_n`,
/// `B_n(0) = 1`, and `B_n` zero-free on the closed disk.
#[derive(Debug, Clone, PartialEq)]
pub struct WallPair {
    a: ComplexPoly,
    b: ComplexPoly,
    rho_sq_product: f64,
}

impl WallPair {
    /// Numerator `A_n`.
    pub fn numerator(&self) -> &ComplexPoly {
        &self.a
    }

    /// Denominator `B_n`.
    pub fn denominator(&self) -> &ComplexPoly {
        &self.b
    }

    /// `Π (1 - |γ_j|²)` over the parameters that built the pair.
    pub fn rho_sq_product(&self) -> f64 {
        self.rho_sq_product
    }

    /// Evaluates `A/B` at a point of the closed disk.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.a.eval(z) / self.b.eval(z)
    }

    /// Taylor series of `A/B` to the given order (exact division,
    /// `B(0) = 1`).
    pub fn series(&self, order: usize) -> PowerSeries {
        let a = PowerSeries::from(&self.a).truncated(order);
        let b = PowerSeries::from(&self.b).truncated(order);
        a.mul(&b.reciprocal().expect("Wall denominators satisfy B(0) = 1"))
    }
}

/// A Schur function: truncated Taylor data, optionally backed by an exact
/// Wall rational form.
#[derive(Debug, Clone)]
pub struct SchurFunction {
    series: PowerSeries,
    rational: Option<WallPair>,
}

impl SchurFunction {
    /// Wraps Taylor data. Rejects series with `|f(0)| > 1 + 1e-9`, which no
    /// Schur function can have.
    pub fn from_series(series: PowerSeries) -> Result<Self> {
        if series.coeff(0).norm() > 1.0 + 1e-9 {
            return Err(Error::invalid(format!(
                "|f(0)| = {} exceeds 1; not a Schur function",
                series.coeff(0).norm()
            )));
        }
        Ok(SchurFunction {
            series,
            rational: None,
        })
    }

    /// Wraps an exact rational form, retaining Taylor data to `order`.
    pub fn from_rational(pair: WallPair, order: usize) -> Self {
        SchurFunction {
            series: pair.series(order),
            rational: Some(pair),
        }
    }

    /// The truncated Taylor coefficients.
    pub fn series(&self) -> &PowerSeries {
        &self.series
    }

    /// The exact rational form, when one is attached.
    pub fn rational(&self) -> Option<&WallPair> {
        self.rational.as_ref()
    }

    /// Evaluates the function: exactly via the rational form when present,
    /// otherwise via the truncated series.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match &self.rational {
            Some(pair) => pair.eval(z),
            None => self.series.eval(z),
        }
    }
}

/// One step of the Schur algorithm on truncated Taylor data: returns
/// `(γ_0, f_1)` with the order dropping by one.
///
/// Fails with [`Error::TerminalParameter`] when `|f(0)| ≥ 1 - 1e-10` (the
/// algorithm has bottomed out on a finitely supported measure) and with
/// invalid input on a constant series, which holds no further information.
pub fn schur_step(f: &PowerSeries) -> Result<(Complex64, PowerSeries)> {
    let gamma = f.coeff(0);
    if gamma.norm() >= 1.0 - TERMINAL_TOL {
        return Err(Error::TerminalParameter { index: 0 });
    }
    if f.order() == 0 {
        return Err(Error::invalid(
            "cannot continue the Schur algorithm on a constant series",
        ));
    }
    let numer = f
        .sub(&PowerSeries::constant(gamma, f.order()))
        .div_z()
        .expect("f - f(0) vanishes at the origin");
    let denom = PowerSeries::constant(Complex64::new(1.0, 0.0), numer.order())
        .sub(&f.scale(gamma.conj()).truncated(numer.order()));
    Ok((gamma, numer.mul(&denom.reciprocal()?)))
}

/// Runs the Schur algorithm for up to `n` parameters.
///
/// When a unimodular parameter appears at step `k < n`, the parameter is
/// snapped onto the circle and the result is a terminal sequence of length
/// `k + 1`; by Geronimus' theorem the parameters equal the Verblunsky
/// coefficients of the underlying measure either way.
pub fn schur_parameters(f: &PowerSeries, n: usize) -> Result<VerblunskySeq> {
    if n == 0 {
        return VerblunskySeq::new(Vec::new());
    }
    if n > f.order() + 1 {
        return Err(Error::invalid(format!(
            "{n} Schur parameters need Taylor data to order {}, have {}",
            n - 1,
            f.order()
        )));
    }
    let mut gammas = Vec::with_capacity(n);
    let mut current = f.clone();
    for k in 0..n {
        let gamma = current.coeff(0);
        if gamma.norm() >= 1.0 - TERMINAL_TOL {
            gammas.push(gamma / gamma.norm());
            return VerblunskySeq::terminal(gammas);
        }
        if k + 1 == n {
            gammas.push(gamma);
            break;
        }
        let (gamma, next) = schur_step(&current)?;
        gammas.push(gamma);
        current = next;
    }
    VerblunskySeq::new(gammas)
}

/// Internal 2x2 polynomial matrix used for the Möbius products.
pub(crate) struct PolyMat2 {
    m: [[ComplexPoly; 2]; 2],
}

impl PolyMat2 {
    pub(crate) fn new(m: [[ComplexPoly; 2]; 2]) -> Self {
        PolyMat2 { m }
    }

    pub(crate) fn entry(&self, i: usize, j: usize) -> &ComplexPoly {
        &self.m[i][j]
    }

    pub(crate) fn identity() -> Self {
        PolyMat2 {
            m: [
                [ComplexPoly::one(), ComplexPoly::zero()],
                [ComplexPoly::zero(), ComplexPoly::one()],
            ],
        }
    }

    /// `M(γ) = [[z, γ], [conj(γ) z, 1]]`.
    fn moebius(gamma: Complex64) -> Self {
        let z = ComplexPoly::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        PolyMat2 {
            m: [
                [z.clone(), ComplexPoly::new(vec![gamma])],
                [z.scale(gamma.conj()), ComplexPoly::one()],
            ],
        }
    }

    pub(crate) fn mul(&self, rhs: &PolyMat2) -> PolyMat2 {
        let entry = |i: usize, j: usize| {
            self.m[i][0]
                .mul(&rhs.m[0][j])
                .add(&self.m[i][1].mul(&rhs.m[1][j]))
        };
        PolyMat2 {
            m: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]],
        }
    }
}

/// Wall polynomials `(A_n, B_n)` of the parameters `γ_0 ..= γ_n`, as the
/// right column of the Möbius product `P_n = M(γ_0) ⋯ M(γ_n)`.
///
/// `f^[n] = A_n/B_n` is the degree-`n` Schur approximant; for a plain
/// (non-terminal) sequence taken at full depth it is *the* Schur function
/// of the sequence's Bernstein–Szegő measure. Requires `n < len`.
pub fn schur_approximant(gamma: &VerblunskySeq, n: usize) -> Result<SchurFunction> {
    if n >= gamma.len() {
        return Err(Error::invalid(format!(
            "approximant depth {n} needs parameters to index {n}, have {}",
            gamma.len()
        )));
    }
    let mut prod = PolyMat2::identity();
    let mut rho_sq_product = 1.0;
    for j in 0..=n {
        prod = prod.mul(&PolyMat2::moebius(gamma.alpha(j)));
        rho_sq_product *= 1.0 - gamma.alpha(j).norm_sqr();
    }
    let pair = WallPair {
        a: prod.m[0][1].clone(),
        b: prod.m[1][1].clone(),
        rho_sq_product,
    };
    Ok(SchurFunction::from_rational(pair, n + 1))
}

/// The exact Schur function of a finite coefficient sequence (its
/// Bernstein–Szegő measure): the full-depth Wall rational, or the zero
/// function for an empty sequence.
pub fn schur_function_of(alpha: &VerblunskySeq, order: usize) -> Result<SchurFunction> {
    if alpha.is_empty() {
        return SchurFunction::from_series(PowerSeries::constant(
            Complex64::new(0.0, 0.0),
            order,
        ));
    }
    let mut f = schur_approximant(alpha, alpha.len() - 1)?;
    f.series = f
        .rational
        .as_ref()
        .expect("approximant carries its rational form")
        .series(order);
    Ok(f)
}

/// Khrushchev product `b_n(z) f_n(z)` as a Taylor series to `order`, where
/// `b_n = φ_n/φ_n* = Φ_n/Φ_n*` is the Blaschke-type inner ratio and `f_n`
/// the `n`-th Schur iterate (the Schur function of the shifted coefficient
/// sequence).
///
/// This is the Schur function of the probe measure `|φ_n|² dμ`: the product
/// form turns orthogonality into function algebra, and its constant term
/// recovers `f_n(0) = α_n` when `n < len`.
pub fn khrushchev_product(alpha: &VerblunskySeq, n: usize, order: usize) -> Result<PowerSeries> {
    if alpha.is_terminal() {
        return Err(Error::invalid(
            "Khrushchev products need a non-terminal sequence",
        ));
    }
    if n > alpha.len() {
        return Err(Error::invalid(format!(
            "Schur iterate {n} of a sequence of length {}",
            alpha.len()
        )));
    }
    let fam = szego_forward(&alpha.prefix(n))?;
    let b_num = PowerSeries::from(fam.phi(n)).truncated(order);
    let b_den = PowerSeries::from(fam.phi_star(n)).truncated(order);
    let b = b_num.mul(&b_den.reciprocal()?);
    let f = schur_function_of(&alpha.shifted(n), order)?;
    Ok(b.mul(f.series()))
}

/// Grid estimate of `∫ |f_n(e^{iθ})|² dθ/2π` for the `n`-th Schur iterate,
/// evaluating the Wall rational of the shifted sequence at depth
/// `min(len - n, 20)` on a uniform grid.
///
/// The value lies in `[0, 1]`; it vanishes iff the iterate vanishes
/// (Lebesgue measure from index `n` on) and approaches 1 as the tail
/// coefficients crowd the circle.
pub fn schur_l2_diagnostics(alpha: &VerblunskySeq, n: usize, grid_size: usize) -> Result<f64> {
    if n > alpha.len() {
        return Err(Error::invalid(format!(
            "Schur iterate {n} of a sequence of length {}",
            alpha.len()
        )));
    }
    if grid_size < 16 {
        return Err(Error::invalid("diagnostic grid needs at least 16 points"));
    }
    let tail = alpha.shifted(n);
    let depth = tail.len().min(DIAGNOSTIC_DEPTH);
    if depth == 0 {
        return Ok(0.0);
    }
    let head = if depth == tail.len() {
        tail.clone()
    } else {
        tail.prefix(depth)
    };
    let f = schur_approximant(&head, depth - 1)?;
    let mut acc = 0.0;
    for k in 0..grid_size {
        let z = Complex64::from_polar(1.0, TAU * k as f64 / grid_size as f64);
        acc += f.eval(z).norm_sqr();
    }
    Ok(acc / grid_size as f64)
}

/// Geronimus pipeline: Schur parameters extracted from a moment sequence,
/// via the Carathéodory series and the Schur algorithm. An independent
/// route to the same coefficients as [`VerblunskySeq::from_moments`].
pub fn schur_parameters_from_moments(c: &MomentSeq, n: usize) -> Result<VerblunskySeq> {
    let f_c = c.caratheodory_series(c.max_index());
    let f = crate::measure::schur_from_caratheodory(&f_c)?;
    schur_parameters(&f, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{schur_from_caratheodory, CircleMeasure};

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn series_of(coeffs: &[f64]) -> PowerSeries {
        PowerSeries::new(coeffs.iter().map(|&x| c64(x, 0.0)).collect())
    }

    #[test]
    fn step_on_the_wall_rational_of_two_parameters() {
        // f = (1/2 + z/3)/(1 + z/6) has gamma_0 = 1/2 and f_1 = 1/3.
        let pair = WallPair {
            a: ComplexPoly::from_real(&[0.5, 1.0 / 3.0]),
            b: ComplexPoly::from_real(&[1.0, 1.0 / 6.0]),
            rho_sq_product: 0.75 * (8.0 / 9.0),
        };
        let f = pair.series(12);
        let (gamma, f1) = schur_step(&f).unwrap();
        assert!((gamma - c64(0.5, 0.0)).norm() < 1e-15);
        assert!((f1.coeff(0) - c64(1.0 / 3.0, 0.0)).norm() < 1e-12);
        for j in 1..=f1.order() {
            assert!(f1.coeff(j).norm() < 1e-12);
        }
    }

    #[test]
    fn parameters_of_the_two_parameter_rational() {
        let f = schur_approximant(
            &VerblunskySeq::from_real(&[0.5, 1.0 / 3.0]).unwrap(),
            1,
        )
        .unwrap();
        let params = schur_parameters(&f.rational().unwrap().series(10), 4).unwrap();
        assert!(!params.is_terminal());
        assert!((params.alpha(0) - c64(0.5, 0.0)).norm() < 1e-13);
        assert!((params.alpha(1) - c64(1.0 / 3.0, 0.0)).norm() < 1e-13);
        assert!(params.alpha(2).norm() < 1e-12);
        assert!(params.alpha(3).norm() < 1e-12);
    }

    #[test]
    fn unimodular_constant_terminates_immediately() {
        let f = series_of(&[1.0, 0.0, 0.0]);
        assert!(matches!(
            schur_step(&f),
            Err(Error::TerminalParameter { index: 0 })
        ));
        let params = schur_parameters(&f, 3).unwrap();
        assert!(params.is_terminal());
        assert_eq!(params.len(), 1);
        assert_eq!(params.alpha(0), c64(1.0, 0.0));
    }

    #[test]
    fn wall_pair_of_two_parameters_is_the_known_rational() {
        let f = schur_approximant(&VerblunskySeq::from_real(&[0.5, 1.0 / 3.0]).unwrap(), 1)
            .unwrap();
        let pair = f.rational().unwrap();
        assert!(pair
            .numerator()
            .coeff_distance(&ComplexPoly::from_real(&[0.5, 1.0 / 3.0]))
            < 1e-15);
        assert!(pair
            .denominator()
            .coeff_distance(&ComplexPoly::from_real(&[1.0, 1.0 / 6.0]))
            < 1e-15);
    }

    #[test]
    fn wall_determinant_identity() {
        // B_n B_n* - A_n A_n* = z^n prod rho^2, coefficient by coefficient.
        let gamma = VerblunskySeq::new(vec![c64(0.5, 0.2), c64(-0.3, 0.4), c64(0.1, -0.6)])
            .unwrap();
        for n in 0..3 {
            let f = schur_approximant(&gamma, n).unwrap();
            let pair = f.rational().unwrap();
            let b = pair.denominator();
            let a = pair.numerator();
            let lhs = b.mul(&b.reversed(n)).sub(&a.mul(&a.reversed(n)));
            let mut expect = vec![c64(0.0, 0.0); n + 1];
            expect[n] = c64(pair.rho_sq_product(), 0.0);
            assert!(lhs.coeff_distance(&ComplexPoly::new(expect)) < 1e-14);
        }
    }

    #[test]
    fn approximant_interpolates_to_its_depth() {
        // f - f^[n] = O(z^{n+1}): the approximant matches the exact Schur
        // function's Taylor data through order n.
        let alpha = VerblunskySeq::new(vec![c64(0.4, 0.1), c64(-0.2, 0.3), c64(0.15, -0.5), c64(0.0, 0.6)])
            .unwrap();
        let exact = schur_function_of(&alpha, 8).unwrap();
        for n in 0..alpha.len() {
            let approx = schur_approximant(&alpha, n).unwrap();
            let diff = exact.series().sub(approx.series());
            for j in 0..=n {
                assert!(diff.coeff(j).norm() < 1e-13, "order {n} coeff {j}");
            }
        }
    }

    #[test]
    fn geronimus_identification_on_a_synthesized_measure() {
        // Verblunsky coefficients out of the measure's Schur function equal
        // the ones the measure was built from.
        let alpha = VerblunskySeq::new(vec![c64(0.5, -0.2), c64(0.3, 0.3), c64(-0.4, 0.1)])
            .unwrap();
        let fam = szego_forward(&alpha).unwrap();
        let n = alpha.len();
        let norm_sq = fam.norm(n) * fam.norm(n);
        let mu = CircleMeasure::from_density(2048, |theta| {
            let z = Complex64::from_polar(1.0, theta);
            norm_sq / fam.phi(n).eval(z).norm_sqr()
        })
        .unwrap();
        let c = mu.moments(12).unwrap();
        let f = schur_from_caratheodory(&c.caratheodory_series(12)).unwrap();
        let gammas = schur_parameters(&f, 3).unwrap();
        for j in 0..3 {
            assert!(
                (gammas.alpha(j) - alpha.alpha(j)).norm() < 1e-9,
                "gamma_{j} = {} vs alpha_{j} = {}",
                gammas.alpha(j),
                alpha.alpha(j)
            );
        }
    }

    #[test]
    fn khrushchev_product_of_free_sequence_vanishes() {
        let alpha = VerblunskySeq::from_real(&[0.0; 5]).unwrap();
        let prod = khrushchev_product(&alpha, 2, 6).unwrap();
        for j in 0..=6 {
            assert!(prod.coeff(j).norm() < 1e-15);
        }
    }

    #[test]
    fn khrushchev_product_hand_value() {
        // alpha = (1/2, 1/3), n = 1: b_1 f_1 = (1/3)(z - 1/2)/(1 - z/2),
        // series -1/6 + sum_{k>=1} 2^{-k-1} z^k.
        let alpha = VerblunskySeq::from_real(&[0.5, 1.0 / 3.0]).unwrap();
        let prod = khrushchev_product(&alpha, 1, 8).unwrap();
        assert!((prod.coeff(0) - c64(-1.0 / 6.0, 0.0)).norm() < 1e-15);
        for k in 1..=8usize {
            let expect = 0.5f64.powi(k as i32 + 1);
            assert!((prod.coeff(k) - c64(expect, 0.0)).norm() < 1e-14, "k = {k}");
        }
        // Constant term of f_1 alone is alpha_1 (visible after removing b_1:
        // here b_1(0) = -1/2, so f_1(0) = prod(0)/b_1(0) = 1/3).
        assert!((prod.coeff(0) / c64(-0.5, 0.0) - c64(1.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn khrushchev_product_matches_the_probe_measure() {
        // The product is the Schur function of |phi_n|^2 dmu: compare its
        // series against the moment pipeline of the probe measure.
        let alpha = VerblunskySeq::new(vec![c64(0.5, 0.1), c64(-0.3, 0.25), c64(0.2, -0.4), c64(0.1, 0.3)])
            .unwrap();
        let n = 2;
        let fam = szego_forward(&alpha).unwrap();
        let full = alpha.len();
        let norm_sq = fam.norm(full) * fam.norm(full);
        let phi_n = fam.orthonormal(n);
        let mu = CircleMeasure::from_density(4096, |theta| {
            let z = Complex64::from_polar(1.0, theta);
            let w = norm_sq / fam.phi(full).eval(z).norm_sqr();
            phi_n.eval(z).norm_sqr() * w
        })
        .unwrap();
        let order = 10;
        let c = mu.moments(order + 1).unwrap();
        let by_measure = schur_from_caratheodory(&c.caratheodory_series(order + 1)).unwrap();
        let by_product = khrushchev_product(&alpha, n, order).unwrap();
        assert!(
            by_product.coeff_distance(&by_measure) < 1e-8,
            "distance {}",
            by_product.coeff_distance(&by_measure)
        );
    }

    #[test]
    fn l2_diagnostic_bounds_and_free_case() {
        let free = VerblunskySeq::from_real(&[0.0; 8]).unwrap();
        assert_eq!(schur_l2_diagnostics(&free, 3, 256).unwrap(), 0.0);

        let decaying =
            VerblunskySeq::from_real(&[0.9, 0.81, 0.729, 0.6561, 0.59049, 0.531441, 0.4782969,
                0.43046721, 0.387420489, 0.3486784401, 0.31381059609, 0.282429536481])
            .unwrap();
        let early = schur_l2_diagnostics(&decaying, 2, 512).unwrap();
        let late = schur_l2_diagnostics(&decaying, 10, 512).unwrap();
        assert!((0.0..=1.0).contains(&early));
        assert!((0.0..=1.0).contains(&late));
        assert!(late < early, "decaying tail: {late} should sit below {early}");
    }
}
