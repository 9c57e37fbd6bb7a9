//! Named verification suites: reproducible, seeded batteries of the
//! crate's cross-module identities, each reporting per-check residuals
//! against explicit tolerances.
//!
//! Every suite is deterministic in its [`SuiteConfig`] — same seed and
//! sizes, same residuals — and a suite passes exactly when every check's
//! residual sits within its tolerance. Checks are reported sorted by
//! name so aggregation order never matters.

use crate::asymptotics::{strong_szego_check, toeplitz_det};
use crate::cmv::{
    aleksandrov_conjugation_check, char_poly, haar_sample, paraorthogonal_zeros, phi_zeros,
};
use crate::error::{Error, Result};
use crate::measure::CircleMeasure;
use crate::periodic::{band_structure, discriminant, PeriodicSpec};
use crate::poly::ComplexPoly;
use crate::schur::schur_parameters_from_moments;
use crate::synthesis::{aleksandrov_average, bernstein_szego, bs_caratheodory, bs_moments};
use crate::szego::{cd_kernel, cd_kernel_direct, inverse_szego_step, szego_forward, VerblunskySeq};
use crate::szego_map::{geronimus_forward, geronimus_inverse, JacobiParams};
use crate::transfer::weyl_residual;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::TAU;

/// The registered suite names, in the order they are documented.
pub const SUITE_NAMES: [&str; 11] = [
    "recursion-roundtrip",
    "geronimus",
    "cmv-charpoly",
    "cd-formula",
    "weyl",
    "toeplitz",
    "strong-szego",
    "aleksandrov",
    "periodic-bands",
    "szego-map",
    "haar",
];

/// Sizes and seed shared by all suites.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteConfig {
    /// Quadrature grid for synthesized measures.
    pub grid_size: usize,
    /// Truncation order for power-series pipelines.
    pub series_order: usize,
    /// Largest polynomial degree / matrix dimension exercised.
    pub max_n: usize,
    /// Seed for every random draw a suite makes.
    pub seed: u64,
    /// Monte Carlo sample count (the `haar` suite).
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            grid_size: 8192,
            series_order: 48,
            max_n: 12,
            seed: 20240816,
            samples: 20_000,
        }
    }
}

impl SuiteConfig {
    fn validate(&self) -> Result<()> {
        if self.grid_size < 64 {
            return Err(Error::invalid("suite grid needs at least 64 points"));
        }
        if self.series_order < 8 {
            return Err(Error::invalid("series order below 8 is meaningless here"));
        }
        if self.max_n < 2 {
            return Err(Error::invalid("max_n must be at least 2"));
        }
        if self.samples < 100 {
            return Err(Error::invalid("Monte Carlo checks need at least 100 samples"));
        }
        Ok(())
    }
}

/// One assertion's outcome: the measured residual against its tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check(name: &str, residual: f64, tolerance: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        residual,
        tolerance,
        pass: residual.is_finite() && residual <= tolerance,
    }
}

/// A suite's aggregated outcome.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    fn assemble(suite: &str, mut checks: Vec<CheckResult>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        SuiteReport {
            suite: suite.to_string(),
            passed: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    /// The largest residual across checks (0 for an empty list).
    pub fn max_residual(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, c| m.max(c.residual))
    }
}

/// Runs the named suite. Unknown names are an input error, so callers can
/// distinguish "bad suite name" from "suite ran and failed".
pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let checks = match name {
        "recursion-roundtrip" => recursion_roundtrip(config)?,
        "geronimus" => geronimus(config)?,
        "cmv-charpoly" => cmv_charpoly(config)?,
        "cd-formula" => cd_formula(config)?,
        "weyl" => weyl(config)?,
        "toeplitz" => toeplitz(config)?,
        "strong-szego" => strong_szego(config)?,
        "aleksandrov" => aleksandrov(config)?,
        "periodic-bands" => periodic_bands(config)?,
        "szego-map" => szego_map_suite(config)?,
        "haar" => haar(config)?,
        other => {
            return Err(Error::invalid(format!(
                "unknown suite '{other}'; registered suites: {}",
                SUITE_NAMES.join(", ")
            )))
        }
    };
    Ok(SuiteReport::assemble(name, checks))
}

/// A random coefficient sequence with moduli `≤ r_max` (area-uniform in
/// the disk of that radius, phases uniform).
fn random_alphas(rng: &mut ChaCha8Rng, n: usize, r_max: f64) -> VerblunskySeq {
    let alphas: Vec<Complex64> = (0..n)
        .map(|_| Complex64::from_polar(r_max * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>()))
        .collect();
    VerblunskySeq::new(alphas).expect("moduli below r_max < 1")
}

fn suite_rng(config: &SuiteConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed ^ salt)
}

/// A trapezoid grid large enough that Bernstein–Szegő moment aliasing
/// stays near 1e-11 for this coefficient sequence: the density's Fourier
/// coefficients decay like `r^m` with `r` the outermost polynomial zero
/// modulus, so the grid must outrun `26/|ln r|`. Never shrinks below
/// `floor`; capped so a zero hugging the circle degrades accuracy rather
/// than stalling the suite.
fn moment_grid(alpha: &VerblunskySeq, n: usize, floor: usize) -> Result<usize> {
    let r = phi_zeros(alpha, n)?
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max);
    let needed = if r < 0.5 {
        0
    } else {
        ((n as f64 + 26.0 / -r.ln()).ceil() as usize).next_power_of_two()
    };
    Ok(needed.clamp(floor, 1 << 17).max(floor))
}

fn recursion_roundtrip(config: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut rng = suite_rng(config, 0x7275);
    let n_cap = config.max_n.min(15);

    // Measure route: α → Bernstein–Szegő moments → α. The moments come
    // from the coefficient pipeline, which stays exact even when the
    // polynomial zeros hug the circle (as they routinely do at radius 0.9).
    let mut worst_measure: f64 = 0.0;
    for _ in 0..40 {
        let n = rng.gen_range(1..=n_cap);
        let alpha = random_alphas(&mut rng, n, 0.9);
        let c = bs_moments(&alpha, n, n)?;
        let back = VerblunskySeq::from_moments(&c, n)?;
        for j in 0..n {
            worst_measure = worst_measure.max((back.alpha(j) - alpha.alpha(j)).norm());
        }
    }

    // Grid route: the same roundtrip through an actual sampled density,
    // at radii where a trapezoid grid can resolve the weight.
    let mut worst_grid: f64 = 0.0;
    for _ in 0..12 {
        let n = rng.gen_range(1..=n_cap);
        let alpha = random_alphas(&mut rng, n, 0.7);
        let grid = moment_grid(&alpha, n, config.grid_size)?;
        let mu = bernstein_szego(&alpha, n, grid)?;
        let c = mu.moments(n)?;
        let back = VerblunskySeq::from_moments(&c, n)?;
        for j in 0..n {
            worst_grid = worst_grid.max((back.alpha(j) - alpha.alpha(j)).norm());
        }
    }

    // Polynomial route: α → Φ_n → peel one degree at a time.
    let mut worst_poly: f64 = 0.0;
    for _ in 0..40 {
        let n = rng.gen_range(1..=n_cap);
        let alpha = random_alphas(&mut rng, n, 0.9);
        let fam = szego_forward(&alpha)?;
        let mut phi = fam.phi(n).clone();
        for j in (0..n).rev() {
            let (a, lower) = inverse_szego_step(&phi)?;
            worst_poly = worst_poly.max((a - alpha.alpha(j)).norm());
            phi = lower;
        }
    }

    Ok(vec![
        check("measure-moments-roundtrip", worst_measure, 1e-8),
        check("grid-moments-roundtrip", worst_grid, 1e-8),
        check("polynomial-peeling-roundtrip", worst_poly, 1e-10),
    ])
}

fn geronimus(config: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut rng = suite_rng(config, 0x6765);
    let n_cap = config.max_n.min(12);
    let mut worst: f64 = 0.0;
    for _ in 0..30 {
        let n = rng.gen_range(1..=n_cap);
        let alpha = random_alphas(&mut rng, n, 0.8);
        let c = bs_moments(&alpha, n, n)?;
        let gamma = schur_parameters_from_moments(&c, n)?;
        for j in 0..n {
            worst = worst.max((gamma.alpha(j) - alpha.alpha(j)).norm());
        }
    }
    Ok(vec![check("schur-parameters-equal-alpha", worst, 1e-8)])
}

fn cmv_charpoly(config: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut rng = suite_rng(config, 0x636d);
    let n_cap = config.max_n.min(12);

    let frozen = VerblunskySeq::from_real(&[0.5, 1.0 / 3.0])?;
    let p = char_poly(&frozen, 2)?;
    let want = ComplexPoly::from_real(&[-1.0 / 3.0, -1.0 / 3.0, 1.0]);
    let mut frozen_dev: f64 = 0.0;
    for k in 0..=2 {
        frozen_dev = frozen_dev.max((p.coeff(k) - want.coeff(k)).norm());
    }

    let mut worst: f64 = 0.0;
    let mut worst_inside: f64 = 0.0;
    let mut worst_para: f64 = 0.0;
    for _ in 0..25 {
        let n = rng.gen_range(2..=n_cap);
        let alpha = random_alphas(&mut rng, n, 0.7);
        let p = char_poly(&alpha, n)?;
        let fam = szego_forward(&alpha)?;
        for k in 0..=n {
            worst = worst.max((p.coeff(k) - fam.phi(n).coeff(k)).norm());
        }
        for z in phi_zeros(&alpha, n)? {
            worst_inside = worst_inside.max(z.norm());
        }
        let beta = Complex64::from_polar(1.0, TAU * rng.gen::<f64>());
        for z in paraorthogonal_zeros(&alpha, n, beta)? {
            worst_para = worst_para.max((z.norm() - 1.0).abs());
        }
    }

    Ok(vec![
        check("frozen-phi2-coefficients", frozen_dev, 1e-12),
        check("charpoly-matches-phi", worst, 1e-10),
        check("phi-zeros-strictly-inside", worst_inside, 1.0 - 1e-10),
        check("paraorthogonal-zeros-unimodular", worst_para, 1e-10),
    ])
}

fn cd_formula(config: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut rng = suite_rng(config, 0x6364);
    let n_cap = config.max_n.min(12);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=n_cap);
        let alpha = random_alphas(&mut rng, n + 1, 0.8);
        let fam = szego_forward(&alpha)?;
        let z = Complex64::from_polar(0.95 * rng.gen::<f64>(), TAU * rng.gen::<f64>());
        let zeta = Complex64::from_polar(0.95 * rng.gen::<f64>(), TAU * rng.gen::<f64>());
        let closed = cd_kernel(&alpha, n, z, zeta)?;
        let direct = cd_kernel_direct(&fam, n, z, zeta);
        worst = worst.max((closed - direct).norm());
    }
    Ok(vec![check("closed-form-vs-direct-sum", worst, 1e-10)])
}

fn weyl(config: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut rng = suite_rng(config, 0x7765);
    let mut worst_ratio: f64 = 0.0;
    let mut worst_perturbed: f64 = 0.0;
    for _ in 0..20 {
        let len = 24;
        let alpha = random_alphas(&mut rng, len, 0.6);
        let z = Complex64::from_polar(
            0.3 + 0.4 * rng.gen::<f64>(),
            TAU * rng.gen::<f64>(),
        );
        let f = bs_caratheodory(&alpha, len, z)?;
        for n in [8, 16, 24] {
            let (first, _) = weyl_residual(&alpha, n, z, f)?;
            let bound = 2.0 * z.norm().powi(n as i32) / (1.0 - z.norm());
            worst_ratio = worst_ratio.max(first / bound);
        }
        let (_, second_exact) = weyl_residual(&alpha, len, z, f)?;
        let (_, second_bad) =
            weyl_residual(&alpha, len, z, f + Complex64::new(0.1, 0.0))?;
        worst_perturbed = worst_perturbed.max(second_exact / second_bad);
    }
    Ok(vec![
        check("first-residual-within-bound", worst_ratio, 1.0),
        check("perturbed-value-stalls", worst_perturbed, 0.1),
    ])
}

fn toeplitz(config: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut rng = suite_rng(config, 0x746f);
    let n_cap = config.max_n.min(12);

    let mut frozen_dev: f64 = 0.0;
    let alpha = VerblunskySeq::from_real(&[0.5, 1.0 / 3.0])?;
    let mu = bernstein_szego(&alpha, 2, config.grid_size)?;
    let c = mu.moments(4)?;
    let (d1_gram, d1_prod) = toeplitz_det(&c, 1)?;
    let (d2_gram, d2_prod) = toeplitz_det(&c, 2)?;
    for v in [d1_gram, d1_prod] {
        frozen_dev = frozen_dev.max((v - 0.75).abs());
    }
    for v in [d2_gram, d2_prod] {
        frozen_dev = frozen_dev.max((v - 0.5).abs());
    }

    let mut worst_rel: f64 = 0.0;
    for _ in 0..25 {
        let n = rng.gen_range(1..=n_cap);
        let alpha = random_alphas(&mut rng, n, 0.7);
        let c = bs_moments(&alpha, n, n)?;
        let (gram, product) = toeplitz_det(&c, n)?;
        worst_rel = worst_rel.max((gram - product).abs() / product);
    }

    Ok(vec![
        check("frozen-determinants", frozen_dev, 1e-8),
        check("gram-vs-product", worst_rel, 1e-8),
    ])
}

fn strong_szego(config: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let alpha = VerblunskySeq::from_real(&[0.5])?;
    let mu = bernstein_szego(&alpha, 1, config.grid_size)?;
    let (lhs, rhs) = strong_szego_check(&mu, 1)?;
    let closed = (lhs - 4.0 / 3.0).abs().max((rhs - 4.0 / 3.0).abs());

    let mu = CircleMeasure::from_density(config.grid_size, |t| 1.0 + 0.5 * t.cos())?;
    let (lhs, rhs) = strong_szego_check(&mu, 40)?;
    let dual = (lhs - rhs).abs() / rhs;

    Ok(vec![
        check("bernstein-szego-closed-form", closed, 1e-6),
        check("smooth-weight-dual-route", dual, 1e-3),
    ])
}

fn aleksandrov(config: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut rng = suite_rng(config, 0x616c);
    let mut worst_avg: f64 = 0.0;
    let mut worst_conj: f64 = 0.0;
    for _ in 0..10 {
        let n = rng.gen_range(2..=config.max_n.min(8));
        let alpha = random_alphas(&mut rng, n, 0.7);
        for moment in 1..=4 {
            worst_avg = worst_avg.max(aleksandrov_average(&alpha, moment, 64)?.norm());
        }
        let lambda = Complex64::from_polar(1.0, TAU * rng.gen::<f64>());
        worst_conj = worst_conj.max(aleksandrov_conjugation_check(&alpha, lambda, n)?);
    }
    Ok(vec![
        check("averaged-moments-vanish", worst_avg, 1e-6),
        check("conjugation-identity", worst_conj, 1e-12),
    ])
}

fn periodic_bands(config: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut rng = suite_rng(config, 0x7065);

    let mut worst_im: f64 = 0.0;
    for &p in &[2usize, 4, 6] {
        for _ in 0..4 {
            let alphas: Vec<Complex64> = (0..p)
                .map(|_| {
                    Complex64::from_polar(0.85 * rng.gen::<f64>(), TAU * rng.gen::<f64>())
                })
                .collect();
            let spec = PeriodicSpec::new(alphas)?;
            for g in 0..64 {
                let z = Complex64::from_polar(1.0, TAU * g as f64 / 64.0);
                worst_im = worst_im.max(discriminant(&spec, z)?.im.abs());
            }
        }
    }

    let spec = PeriodicSpec::geronimus(Complex64::new(0.5, 0.0), 2)?;
    let bs = band_structure(&spec, 2048)?;
    let edge_dev = (bs.bands[0].x - std::f64::consts::PI / 3.0)
        .abs()
        .max((bs.bands[1].y - 5.0 * std::f64::consts::PI / 3.0).abs());
    let mut mass_dev: f64 = 0.0;
    for band in &bs.bands {
        mass_dev = mass_dev.max((band.mass - 0.5).abs());
    }
    let free = PeriodicSpec::geronimus(Complex64::new(0.0, 0.0), 4)?;
    for band in &band_structure(&free, 2048)?.bands {
        mass_dev = mass_dev.max((band.mass - 0.25).abs());
    }

    Ok(vec![
        check("discriminant-real-on-circle", worst_im, 1e-10),
        check("geronimus-half-band-edges", edge_dev, 1e-8),
        check("band-masses-equal-one-over-p", mass_dev, 1e-6),
    ])
}

fn szego_map_suite(config: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut rng = suite_rng(config, 0x737a);

    // Chebyshev correspondences, both directions.
    let mut cheb_dev: f64 = 0.0;
    let j = geronimus_forward(&VerblunskySeq::from_real(&[0.0; 12])?)?;
    cheb_dev = cheb_dev.max((j.a()[0] - 2.0f64.sqrt()).abs());
    for &ak in &j.a()[1..] {
        cheb_dev = cheb_dev.max((ak - 1.0).abs());
    }
    for &bk in j.b() {
        cheb_dev = cheb_dev.max(bk.abs());
    }
    let j = JacobiParams::new(vec![1.0; 8], vec![0.0; 8])?;
    let alpha = geronimus_inverse(&j)?;
    for n in 0..alpha.len() {
        let want = if n % 2 == 1 {
            -1.0 / ((n + 1) / 2 + 1) as f64
        } else {
            0.0
        };
        cheb_dev = cheb_dev.max((alpha.alpha(n) - Complex64::new(want, 0.0)).norm());
    }

    // Forward ∘ inverse on sign-condition-filtered random Jacobi data.
    let mut worst_rt: f64 = 0.0;
    let mut accepted = 0;
    let mut draws = 0;
    while accepted < 100 && draws < 200_000 {
        draws += 1;
        let a: Vec<f64> = (0..5).map(|_| rng.gen_range(0.5..1.5)).collect();
        let b: Vec<f64> = (0..5).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let j = JacobiParams::new(a.clone(), b.clone())?;
        let alpha = match geronimus_inverse(&j) {
            Ok(alpha) => alpha,
            Err(Error::SupportOutsideInterval { .. }) => continue,
            Err(other) => return Err(other),
        };
        let back = geronimus_forward(&alpha)?;
        for k in 0..back.len() {
            worst_rt = worst_rt.max((back.a()[k] - a[k]).abs());
            worst_rt = worst_rt.max((back.b()[k] - b[k]).abs());
        }
        accepted += 1;
    }
    if accepted < 100 {
        worst_rt = f64::INFINITY;
    }

    Ok(vec![
        check("chebyshev-correspondences", cheb_dev, 1e-12),
        check("forward-inverse-roundtrip", worst_rt, 1e-10),
    ])
}

fn haar(config: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let n = 5;
    let mut sums = vec![0.0f64; n - 1];
    let mut sq_sums = vec![0.0f64; n - 1];
    let mut terminal_dev: f64 = 0.0;
    for i in 0..config.samples {
        let alpha = haar_sample(n, config.seed.wrapping_add(i as u64))?;
        for j in 0..n - 1 {
            let m = alpha.alpha(j).norm_sqr();
            sums[j] += m;
            sq_sums[j] += m * m;
        }
        terminal_dev = terminal_dev.max((alpha.alpha(n - 1).norm() - 1.0).abs());
    }
    let mut worst_z: f64 = 0.0;
    let count = config.samples as f64;
    for j in 0..n - 1 {
        let mean = sums[j] / count;
        let var = (sq_sums[j] / count - mean * mean).max(0.0);
        let se = (var / count).sqrt();
        let target = 1.0 / (n - j) as f64;
        worst_z = worst_z.max((mean - target).abs() / se);
    }
    Ok(vec![
        check("moduli-match-beta-law", worst_z, 3.0),
        check("terminal-coefficient-unimodular", terminal_dev, 1e-12),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A small config keeps the full sweep fast; every suite must pass on
    /// the shipped build.
    fn fast_config() -> SuiteConfig {
        SuiteConfig {
            grid_size: 4096,
            series_order: 32,
            max_n: 10,
            seed: 20240816,
            samples: 2000,
        }
    }

    #[test]
    fn every_registered_suite_passes() {
        for name in SUITE_NAMES {
            let report = run_suite(name, &fast_config()).unwrap();
            assert!(
                report.passed,
                "suite {name} failed: {:?}",
                report
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .collect::<Vec<_>>()
            );
            assert!(!report.checks.is_empty());
        }
    }

    #[test]
    fn checks_are_sorted_and_serializable() {
        let report = run_suite("toeplitz", &fast_config()).unwrap();
        let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        assert_eq!(names, sorted);
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("\"residual\""));
    }

    #[test]
    fn unknown_suites_and_bad_configs_are_input_errors() {
        assert!(run_suite("no-such-suite", &SuiteConfig::default()).is_err());
        let bad = SuiteConfig {
            grid_size: 8,
            ..SuiteConfig::default()
        };
        assert!(run_suite("toeplitz", &bad).is_err());
    }

    #[test]
    fn reports_are_deterministic_in_the_seed() {
        let a = run_suite("cd-formula", &fast_config()).unwrap();
        let b = run_suite("cd-formula", &fast_config()).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let mut other = fast_config();
        other.seed ^= 0xdead;
        let c = run_suite("cd-formula", &other).unwrap();
        assert_ne!(a.max_residual(), c.max_residual());
    }
}

