//! Discriminant, band structure, and density of zeros for periodic
//! coefficient sequences.
//!
//! For `α_{j+p} = α_j` with even period `p`, the discriminant
//!
//! ```text
//! Δ(z) = Tr( z^{-p/2} T_p(z) )
//! ```
//!
//! is a Laurent polynomial that is real on the unit circle. Its level set
//! `Δ ∈ [-2, 2]` is the essential support `B` of the measure: `p` closed
//! arcs (bands) whose endpoints solve `Δ = ±2`, separated by open gaps or
//! touching at closed ones. On band interiors the transfer products stay
//! bounded; in gaps they grow geometrically — the computable face of the
//! Floquet dichotomy.
//!
//! The density of zeros / density of states on `B` is
//! `dρ = (2/p) |∂Δ/∂θ| (4-Δ²)^{-1/2} dθ/2π`; each band carries mass
//! exactly `1/p`, and `dρ` is the equilibrium measure of `B`, whose
//! logarithmic capacity obeys the closed form
//! `C_B = Π_j (1-|α_j|²)^{1/2p}`.

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::schur::PolyMat2;
use crate::szego::VerblunskySeq;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

/// Angle tolerance for classifying a band edge as a closed-gap touch
/// point and for merging duplicate edge candidates.
const TOUCH_TOL: f64 = 1e-8;

/// Bisection target width for edge angles.
const EDGE_REFINE_TOL: f64 = 1e-12;

/// Quadrature nodes per band for masses and potentials.
const BAND_QUADRATURE_NODES: usize = 4096;

/// One period of a periodic Verblunsky sequence (even period, all
/// entries strictly inside the disk).
#[derive(Debug, Clone)]
pub struct PeriodicSpec {
    alphas: Vec<Complex64>,
}

impl PeriodicSpec {
    /// Validates one period of coefficients. The period must be even and
    /// at least 2 (double up a period to make an odd pattern even), and
    /// every entry must lie strictly inside the unit disk.
    pub fn new(alphas: Vec<Complex64>) -> Result<Self> {
        if alphas.is_empty() || alphas.len() % 2 != 0 {
            return Err(Error::invalid(format!(
                "period {} is not a positive even number",
                alphas.len()
            )));
        }
        for (j, a) in alphas.iter().enumerate() {
            if a.norm() >= 1.0 {
                return Err(Error::NotStrictlyInside {
                    index: j,
                    modulus: a.norm(),
                });
            }
        }
        Ok(PeriodicSpec { alphas })
    }

    /// A constant sequence `α_j ≡ a` of the given even period.
    pub fn geronimus(a: Complex64, period: usize) -> Result<Self> {
        PeriodicSpec::new(vec![a; period])
    }

    pub fn period(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    /// The periodized sequence over `m` full periods.
    pub fn repeated(&self, m: usize) -> VerblunskySeq {
        let mut alphas = Vec::with_capacity(m * self.alphas.len());
        for _ in 0..m {
            alphas.extend_from_slice(&self.alphas);
        }
        VerblunskySeq::new(alphas).expect("entries validated at construction")
    }

    /// `Π_j ρ_j` over one period.
    pub fn rho_product(&self) -> f64 {
        self.alphas
            .iter()
            .map(|a| (1.0 - a.norm_sqr()).sqrt())
            .product()
    }
}

/// Laurent coefficients `t_{-p/2} ..= t_{p/2}` of the discriminant,
/// from the symbolic one-period transfer product.
fn laurent_coefficients(spec: &PeriodicSpec) -> Vec<Complex64> {
    let p = spec.period();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut prod = PolyMat2::identity();
    for &a in spec.alphas() {
        // One recursion step, without its 1/ρ prefactor:
        // [[z, -conj(α)], [-α z, 1]].
        let step = PolyMat2::new([
            [
                ComplexPoly::new(vec![zero, one]),
                ComplexPoly::new(vec![-a.conj()]),
            ],
            [ComplexPoly::new(vec![zero, -a]), ComplexPoly::new(vec![one])],
        ]);
        prod = step.mul(&prod);
    }
    let trace = prod.entry(0, 0).add(prod.entry(1, 1));
    let scale = 1.0 / spec.rho_product();
    let coeffs = trace.coeffs();
    (0..=p)
        .map(|k| coeffs.get(k).copied().unwrap_or(zero) * scale)
        .collect()
}

/// The discriminant `Δ(z) = Tr(z^{-p/2} T_p(z))`, a Laurent polynomial
/// in `z^{±1}` that takes real values on the unit circle.
pub fn discriminant(spec: &PeriodicSpec, z: Complex64) -> Result<Complex64> {
    if z.norm() < 1e-300 {
        return Err(Error::invalid(
            "the discriminant has a pole of order p/2 at z = 0",
        ));
    }
    let t = laurent_coefficients(spec);
    let half = spec.period() as i32 / 2;
    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, &coeff) in t.iter().enumerate() {
        acc += coeff * z.powi(idx as i32 - half);
    }
    Ok(acc)
}

/// Real evaluation machinery for `Δ(e^{iθ})` and its `θ`-derivative. The
/// Laurent coefficients satisfy `t_{-k} = conj(t_k)` (that is the reality
/// of `Δ` on the circle), so both values are assembled from the
/// nonnegative-frequency half.
struct DiscriminantCurve {
    /// `t_0 ..= t_{p/2}` (frequency-`k` coefficient of `Δ(e^{iθ})`).
    t: Vec<Complex64>,
    p: usize,
}

impl DiscriminantCurve {
    fn build(spec: &PeriodicSpec) -> Result<Self> {
        let full = laurent_coefficients(spec);
        let half = spec.period() / 2;
        let scale = full.iter().map(|c| c.norm()).fold(1.0f64, f64::max);
        for k in 1..=half {
            let deviation = (full[half - k] - full[half + k].conj()).norm();
            if deviation > 1e-10 * scale {
                return Err(Error::invalid(format!(
                    "discriminant is not real on the circle (coefficient symmetry off by {deviation})"
                )));
            }
        }
        Ok(DiscriminantCurve {
            t: full[half..].to_vec(),
            p: spec.period(),
        })
    }

    /// `Δ(e^{iθ})`, exactly real by construction.
    fn value(&self, theta: f64) -> f64 {
        let mut acc = self.t[0].re;
        for (k, &coeff) in self.t.iter().enumerate().skip(1) {
            acc += 2.0 * (coeff * Complex64::from_polar(1.0, k as f64 * theta)).re;
        }
        acc
    }

    /// `∂Δ(e^{iθ})/∂θ`.
    fn derivative(&self, theta: f64) -> f64 {
        let mut acc = 0.0;
        for (k, &coeff) in self.t.iter().enumerate().skip(1) {
            let rotated = coeff * Complex64::from_polar(1.0, k as f64 * theta);
            acc += -2.0 * k as f64 * rotated.im;
        }
        acc
    }

    /// Density of states at a band-interior angle, against `dθ/2π`.
    fn density(&self, theta: f64) -> f64 {
        let e = self.value(theta);
        (2.0 / self.p as f64) * self.derivative(theta).abs() / (4.0 - e * e).sqrt()
    }
}

/// One closed band arc `[x, y]` (angles, with `y ≤ x + 2π`) and the mass
/// the density of states gives it.
#[derive(Debug, Clone, Serialize)]
pub struct BandArc {
    pub x: f64,
    pub y: f64,
    pub mass: f64,
}

/// A gap arc; closed gaps (band touchings) appear with `x == y`.
#[derive(Debug, Clone, Serialize)]
pub struct GapArc {
    pub x: f64,
    pub y: f64,
}

/// The essential support of a periodic spec: `p` bands with their
/// masses, and the complementary gaps (zero-length entries mark band
/// touchings).
#[derive(Debug, Clone, Serialize)]
pub struct BandStructure {
    pub bands: Vec<BandArc>,
    pub gaps: Vec<GapArc>,
}

impl BandStructure {
    /// Total mass over all bands (1 up to quadrature error).
    pub fn total_mass(&self) -> f64 {
        self.bands.iter().map(|b| b.mass).sum()
    }
}

fn bisect(mut lo: f64, mut hi: f64, f: &impl Fn(f64) -> f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        if hi - lo < EDGE_REFINE_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if (flo <= 0.0) == (fmid <= 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum EdgeKind {
    Crossing,
    Touch,
}

/// Locates the band edges and assembles bands, gaps, and masses.
///
/// Edges are found on a scan grid as sign changes of `Δ ∓ 2` (simple
/// crossings, refined by bisection) and as critical points of `Δ` whose
/// value lands on `±2` within `1e-8` (closed-gap touch points — `Δ` has
/// no critical points strictly inside a band, so every interior extremum
/// belongs to a gap or a touching). A coarse grid that fails to separate
/// the edges of a narrow band leaves fewer than `p` arcs, which is
/// reported as a refinement failure.
pub fn band_structure(spec: &PeriodicSpec, grid: usize) -> Result<BandStructure> {
    if grid < 512 {
        return Err(Error::invalid(format!(
            "band scan needs at least 512 grid points, got {grid}"
        )));
    }
    let curve = DiscriminantCurve::build(spec)?;
    let p = spec.period();

    // Offset nodes so symmetric specs don't land roots exactly on the
    // scan grid (exact zeros would hide sign changes).
    let node = |g: usize| TAU * (g as f64 + 0.37) / grid as f64;
    let values: Vec<f64> = (0..grid).map(|g| curve.value(node(g))).collect();
    let derivs: Vec<f64> = (0..grid).map(|g| curve.derivative(node(g))).collect();

    let mut edges: Vec<(f64, EdgeKind)> = Vec::new();
    for g in 0..grid {
        let (a, b) = (node(g), node(g + 1));
        let (va, vb) = (values[g], values[(g + 1) % grid]);
        for level in [2.0, -2.0] {
            if (va - level) * (vb - level) < 0.0 {
                let f = |t: f64| curve.value(t) - level;
                edges.push((bisect(a, b, &f).rem_euclid(TAU), EdgeKind::Crossing));
            }
        }
        let (da, db) = (derivs[g], derivs[(g + 1) % grid]);
        if da * db < 0.0 {
            let f = |t: f64| curve.derivative(t);
            let theta = bisect(a, b, &f).rem_euclid(TAU);
            let v = curve.value(theta);
            if (v.abs() - 2.0).abs() <= TOUCH_TOL {
                edges.push((theta, EdgeKind::Touch));
            }
        }
    }

    edges.sort_by(|u, v| u.0.total_cmp(&v.0));
    let mut merged: Vec<(f64, EdgeKind)> = Vec::new();
    for (theta, kind) in edges {
        match merged.last_mut() {
            Some((last, last_kind)) if (theta - *last).abs() < TOUCH_TOL => {
                if kind == EdgeKind::Touch {
                    *last_kind = EdgeKind::Touch;
                }
            }
            _ => merged.push((theta, kind)),
        }
    }
    // A touch duplicated across the 0/2π seam.
    if merged.len() >= 2 {
        let first = merged[0].0;
        let last = merged.last().unwrap().0;
        if (first + TAU - last).abs() < TOUCH_TOL {
            if merged[0].1 == EdgeKind::Touch {
                merged.last_mut().unwrap().1 = EdgeKind::Touch;
            }
            merged.remove(0);
        }
    }

    if merged.is_empty() {
        return Err(Error::invalid(
            "no band edges found; the scan grid is too coarse for this spec",
        ));
    }

    let mut bands = Vec::new();
    let mut gaps = Vec::new();
    for i in 0..merged.len() {
        let (x, kind) = merged[i];
        let y = if i + 1 < merged.len() {
            merged[i + 1].0
        } else {
            merged[0].0 + TAU
        };
        if kind == EdgeKind::Touch {
            gaps.push(GapArc { x, y: x });
        }
        let mid = 0.5 * (x + y);
        if curve.value(mid).abs() < 2.0 {
            let mass = band_mass(&curve, x, y);
            bands.push(BandArc { x, y, mass });
        } else {
            gaps.push(GapArc { x, y });
        }
    }

    if bands.len() != p {
        return Err(Error::invalid(format!(
            "located {} band arcs but the period is {p}; refine the scan grid",
            bands.len()
        )));
    }
    Ok(BandStructure { bands, gaps })
}

/// Band mass `∫_x^y dρ` by midpoint quadrature in the edge-clustering
/// variable `θ = x + (y-x)(1-cos s)/2`: the substitution absorbs the
/// inverse-square-root edge singularities of the density, restoring
/// smooth convergence.
fn band_mass(curve: &DiscriminantCurve, x: f64, y: f64) -> f64 {
    quadrature_over_band(curve, x, y, |_| 1.0)
}

fn quadrature_over_band(
    curve: &DiscriminantCurve,
    x: f64,
    y: f64,
    f: impl Fn(f64) -> f64,
) -> f64 {
    let k = BAND_QUADRATURE_NODES;
    let h = PI / k as f64;
    let mut acc = 0.0;
    for i in 0..k {
        let s = (i as f64 + 0.5) * h;
        let theta = x + (y - x) * 0.5 * (1.0 - s.cos());
        let jacobian = (y - x) * 0.5 * s.sin();
        acc += f(theta) * curve.density(theta) * jacobian;
    }
    acc * h / TAU
}

/// The density of zeros/states `(2/p) |∂Δ/∂θ| (4-Δ²)^{-1/2}` against
/// `dθ/2π`, defined on band interiors; gap points and band edges are
/// rejected.
pub fn dos_density(spec: &PeriodicSpec, theta: f64) -> Result<f64> {
    let curve = DiscriminantCurve::build(spec)?;
    let e = curve.value(theta);
    if 4.0 - e * e <= 1e-12 {
        return Err(Error::invalid(format!(
            "θ = {theta} has Δ = {e}; the density lives strictly inside the bands"
        )));
    }
    Ok(curve.density(theta))
}

/// Logarithmic capacity of the band set, two ways: the equilibrium
/// potential `exp(∫ log|z_0 - e^{iθ}| dρ(θ))` of the density of states
/// evaluated at a band point `z_0` (Frostman: constant on the support),
/// and the closed form `Π_j (1-|α_j|²)^{1/2p}`.
pub fn capacity_check(spec: &PeriodicSpec, grid: usize) -> Result<(f64, f64)> {
    let structure = band_structure(spec, grid)?;
    let curve = DiscriminantCurve::build(spec)?;
    let z0 = Complex64::from_polar(1.0, structure.bands[0].x);
    let mut potential = 0.0;
    for band in &structure.bands {
        potential += quadrature_over_band(&curve, band.x, band.y, |theta| {
            (Complex64::from_polar(1.0, theta) - z0).norm().ln()
        });
    }
    let numeric = potential.exp();
    let product = spec
        .alphas()
        .iter()
        .map(|a| 1.0 - a.norm_sqr())
        .product::<f64>()
        .powf(1.0 / (2.0 * spec.period() as f64));
    Ok((numeric, product))
}
