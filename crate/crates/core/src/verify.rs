//! Verification suites for the transform.
//!
//! Every suite returns a [`VerificationReport`]: a list of named checks,
//! each comparing a computed value with a reference under an absolute or
//! relative tolerance. Randomised suites draw from a ChaCha stream seeded by
//! [`VerifyConfig::seed`], so a report is a pure function of its config.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ck::{
    builtin_monogenic_polynomials, ck_extend, cst_analytic, generalized_hermite_check,
    neg_heat_x0_poly, psi_basis, CkBox, CkSeries, Truncation,
};
use crate::clifford::{blade_product_sign, hermitian_inner, BladeIndex, Multivector, OneVector};
use crate::error::{CstError, Result};
use crate::gaussian_poly::{l2_inner, phi_k, phi_norm_sqr, GaussianPolynomial};
use crate::quadrature::{QuadratureRule, DEFAULT_HERMITE_NODES};
use crate::spectral::{
    chi_projectors, clifford_exponential, cst_spectral, pointwise_weyl_residual, weyl_residual,
    GridSpec, SampledField,
};
use crate::torus::{torus_cst, torus_isometry_check, ParsevalMode, TorusCoefficients};

pub const DEFAULT_SEED: u64 = 1;

/// How a check's deviation is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    /// `|computed − reference| ≤ tolerance`.
    Abs,
    /// `|computed − reference| ≤ tolerance · scale`.
    Rel,
}

/// One named comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    #[serde(with = "nan_complex")]
    pub computed: Complex64,
    #[serde(with = "nan_complex")]
    pub reference: Complex64,
    #[serde(with = "nan_f64")]
    pub deviation: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    #[serde(with = "nan_f64")]
    pub scale: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckEntry {
    fn build(
        name: impl Into<String>,
        computed: Complex64,
        reference: Complex64,
        tolerance: f64,
        comparison: Comparison,
        scale: f64,
    ) -> Self {
        let deviation = (computed - reference).norm();
        let limit = match comparison {
            Comparison::Abs => tolerance,
            Comparison::Rel => tolerance * scale,
        };
        CheckEntry {
            name: name.into(),
            computed,
            reference,
            deviation,
            tolerance,
            comparison,
            scale,
            passed: deviation <= limit,
            runtime_ms: None,
            note: None,
        }
    }

    pub fn abs(name: impl Into<String>, computed: impl Into<Complex64>, reference: impl Into<Complex64>, tol: f64) -> Self {
        Self::build(name, computed.into(), reference.into(), tol, Comparison::Abs, 1.0)
    }

    /// Relative to `|reference|`.
    pub fn rel(name: impl Into<String>, computed: impl Into<Complex64>, reference: impl Into<Complex64>, tol: f64) -> Self {
        let r = reference.into();
        Self::build(name, computed.into(), r, tol, Comparison::Rel, r.norm())
    }

    /// Relative to an explicit scale.
    pub fn rel_to(
        name: impl Into<String>,
        computed: impl Into<Complex64>,
        reference: impl Into<Complex64>,
        tol: f64,
        scale: f64,
    ) -> Self {
        Self::build(name, computed.into(), reference.into(), tol, Comparison::Rel, scale)
    }

    /// A check that could not be evaluated.
    pub fn errored(name: impl Into<String>, tol: f64, err: &CstError) -> Self {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        let mut e = Self::build(name, nan, Complex64::new(0.0, 0.0), tol, Comparison::Abs, 1.0);
        e.note = Some(err.to_string());
        e
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

mod nan_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

mod nan_complex {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    fn opt(v: f64) -> Option<f64> {
        v.is_finite().then_some(v)
    }

    pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [opt(v.re), opt(v.im)].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[Option<f64>; 2]>::deserialize(d)?;
        Ok(Complex64::new(re.unwrap_or(f64::NAN), im.unwrap_or(f64::NAN)))
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        VerificationReport {
            suite: suite.into(),
            seed,
            passed: true,
            checks: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.passed &= entry.passed;
        self.checks.push(entry);
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Merges several reports under one name.
    pub fn combine(suite: impl Into<String>, seed: u64, parts: Vec<VerificationReport>) -> Self {
        let mut out = Self::new(suite, seed);
        for p in parts {
            for c in p.checks {
                let mut c = c;
                c.name = format!("{}: {}", p.suite, c.name);
                out.push(c);
            }
            out.warnings.extend(p.warnings);
        }
        out
    }
}

/// Sign convention for the momentum operator `p̂ⱼ = ±i∂ⱼ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentumSign {
    /// `p̂ⱼ = i∂ⱼ`, so `x̂ + ip̂` acts as `x̲ − D̲`.
    #[default]
    Plus,
    /// `p̂ⱼ = −i∂ⱼ`, so `x̂ + ip̂` acts as `x̲ + D̲`.
    Minus,
}

/// Shared knobs for every suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides each check's default tolerance.
    pub tol: Option<f64>,
    /// Record wall-clock time per check (makes reports non-reproducible).
    pub timings: bool,
    pub momentum_sign: MomentumSign,
    pub hermite_nodes: usize,
    /// Dimensions to cover; suites fall back to their own defaults.
    pub m: Option<Vec<usize>>,
    pub kmax: Option<u32>,
    /// Truncation order of the re-expanded series in the generalized-Hermite suite.
    pub order: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: DEFAULT_SEED,
            tol: None,
            timings: false,
            momentum_sign: MomentumSign::Plus,
            hermite_nodes: DEFAULT_HERMITE_NODES,
            m: None,
            kmax: None,
            order: None,
        }
    }
}

impl VerifyConfig {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn dims(&self, default: &[usize]) -> Vec<usize> {
        self.m.clone().unwrap_or_else(|| default.to_vec())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }

    fn timed(&self, f: impl FnOnce() -> CheckEntry) -> CheckEntry {
        let start = Instant::now();
        let mut e = f();
        if self.timings {
            e.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        e
    }
}

/// The verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Projectors,
    HeatHermite,
    CrossPath,
    Monogenic,
    Isometry,
    Gram,
    TorusParseval,
    Intertwine,
    GenHermite,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Algebra,
        Suite::Projectors,
        Suite::HeatHermite,
        Suite::CrossPath,
        Suite::Monogenic,
        Suite::Isometry,
        Suite::Gram,
        Suite::TorusParseval,
        Suite::Intertwine,
        Suite::GenHermite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Projectors => "projectors",
            Suite::HeatHermite => "heat-hermite",
            Suite::CrossPath => "cross-path",
            Suite::Monogenic => "monogenic",
            Suite::Isometry => "isometry",
            Suite::Gram => "gram",
            Suite::TorusParseval => "torus-parseval",
            Suite::Intertwine => "intertwine",
            Suite::GenHermite => "genhermite",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn run(self, cfg: &VerifyConfig) -> Result<VerificationReport> {
        match self {
            Suite::Algebra => Ok(algebra_suite(cfg)),
            Suite::Projectors => Ok(projector_suite(cfg)),
            Suite::HeatHermite => heat_hermite_suite(cfg),
            Suite::CrossPath => cross_path_suite(cfg),
            Suite::Monogenic => monogenic_suite(cfg),
            Suite::Isometry => isometry_suite(cfg),
            Suite::Gram => gram_suite(cfg),
            Suite::TorusParseval => torus_parseval_suite(cfg),
            Suite::Intertwine => intertwine_suite(cfg),
            Suite::GenHermite => genhermite_suite(cfg),
        }
    }
}

/// Runs every suite and merges the results.
pub fn run_all(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let parts = Suite::ALL
        .iter()
        .map(|s| s.run(cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::combine("all", cfg.seed, parts))
}

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_multivector(rng: &mut impl Rng, m: usize) -> Multivector {
    let coeffs = (0..1 << m)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    Multivector::from_coeffs(m, coeffs).expect("finite coefficients")
}

fn random_one_vector(rng: &mut impl Rng, m: usize, range: f64) -> OneVector {
    OneVector::new((0..m).map(|_| rng.random_range(-range..range)).collect())
}

/// Multi-indices with every entry `≤ kmax`.
fn box_indices(m: usize, kmax: u32) -> Vec<Vec<u32>> {
    let n = kmax as usize + 1;
    (0..n.pow(m as u32))
        .map(|mut p| {
            let mut k = vec![0u32; m];
            for j in (0..m).rev() {
                k[j] = (p % n) as u32;
                p /= n;
            }
            k
        })
        .collect()
}

/// Multi-indices with total degree `≤ kmax`.
fn simplex_indices(m: usize, kmax: u32) -> Vec<Vec<u32>> {
    box_indices(m, kmax)
        .into_iter()
        .filter(|k| k.iter().sum::<u32>() <= kmax)
        .collect()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

pub fn algebra_suite(cfg: &VerifyConfig) -> VerificationReport {
    let mut rep = VerificationReport::new(Suite::Algebra.name(), cfg.seed);
    rep.push(cfg.timed(|| {
        let mut worst = 0.0f64;
        for m in 1..=6 {
            for i in 1..=m {
                for j in 1..=m {
                    let ei = Multivector::basis_vector(m, i);
                    let ej = Multivector::basis_vector(m, j);
                    let anti = &(&ei * &ej) + &(&ej * &ei);
                    let expect = if i == j { -2.0 } else { 0.0 };
                    worst = worst.max((&anti - &Multivector::scalar(m, c64(expect))).max_abs());
                }
            }
        }
        CheckEntry::abs("anticommutation e_i e_j + e_j e_i = -2 delta_ij, m <= 6", worst, 0.0, 0.0)
    }));
    rep.push(cfg.timed(|| {
        let mut rng = cfg.rng(1);
        let mut worst = 0.0f64;
        for t in 0..1000 {
            let m = 1 + t % 6;
            let (u, v, w) = (
                random_multivector(&mut rng, m),
                random_multivector(&mut rng, m),
                random_multivector(&mut rng, m),
            );
            let lhs = &(&u * &v) * &w;
            let rhs = &u * &(&v * &w);
            let scale = u.norm() * v.norm() * w.norm();
            worst = worst.max((&lhs - &rhs).norm() / scale);
        }
        CheckEntry::abs("associativity, 1000 random triples (relative)", worst, 0.0, cfg.tol(1e-12))
    }));
    rep.push(cfg.timed(|| {
        let mut rng = cfg.rng(2);
        let mut worst = 0.0f64;
        for t in 0..1000 {
            let m = 1 + t % 6;
            let p = random_one_vector(&mut rng, m, 3.0).embed();
            let u = random_multivector(&mut rng, m);
            let v = random_multivector(&mut rng, m);
            let a = hermitian_inner(&(&p * &u), &v).unwrap();
            let b = hermitian_inner(&u, &(&p * &v)).unwrap();
            worst = worst.max((a + b).norm() / (p.norm() * u.norm() * v.norm()));
        }
        CheckEntry::abs("(p u, v) = -(u, p v) for real 1-vectors", worst, 0.0, cfg.tol(1e-12))
    }));
    rep.push(cfg.timed(|| {
        let x = OneVector::new(vec![3.0, 4.0]).embed();
        CheckEntry::abs("(3e1 + 4e2)^2", (&x * &x).scalar_part(), -25.0, 0.0)
    }));
    rep
}

pub fn projector_suite(cfg: &VerifyConfig) -> VerificationReport {
    let mut rep = VerificationReport::new(Suite::Projectors.name(), cfg.seed);
    let mut rng = cfg.rng(3);
    let samples: Vec<(OneVector, f64, Multivector, Multivector)> = (0..1000)
        .map(|t| {
            let m = 1 + t % 4;
            let p = random_one_vector(&mut rng, m, 4.0);
            let x0 = rng.random_range(-1.0..1.0);
            let u = random_multivector(&mut rng, m);
            let v = random_multivector(&mut rng, m);
            (p, x0, u, v)
        })
        .collect();
    let tol = cfg.tol(1e-12);
    let mut idem = 0.0f64;
    let mut comp = 0.0f64;
    let mut cross = 0.0f64;
    let mut eigen = 0.0f64;
    let mut series = 0.0f64;
    let mut selfadj = 0.0f64;
    let mut fd = 0.0f64;
    let start = Instant::now();
    for (p, x0, u, v) in &samples {
        let m = p.dim();
        let (cp, cm) = chi_projectors(p).unwrap();
        let r = p.norm();
        idem = idem.max((&(&cp * &cp) - &cp).norm()).max((&(&cm * &cm) - &cm).norm());
        comp = comp.max((&(&cp + &cm) - &Multivector::one(m)).norm());
        cross = cross.max((&cp * &cm).norm()).max((&cm * &cp).norm());
        let ip = p.embed().scale(Complex64::new(0.0, 1.0));
        eigen = eigen
            .max((&(&ip * &cp) - &cp.scale_real(r)).norm() / r)
            .max((&(&ip * &cm) + &cm.scale_real(r)).norm() / r);

        let e = clifford_exponential(*x0, p);
        // Σ (−x₀)ʲ/j! (ip̲)ʲ
        let mut term = Multivector::one(m);
        let mut sum = Multivector::one(m);
        for j in 1..80 {
            term = (&term * &ip).scale_real(-x0 / j as f64);
            sum += &term;
        }
        series = series.max((&sum - &e).norm() / e.norm());

        let a = hermitian_inner(&(&e * u), v).unwrap();
        let b = hermitian_inner(u, &(&e * v)).unwrap();
        selfadj = selfadj.max((a - b).norm() / (e.norm() * u.norm() * v.norm()));

        let h = 1e-5;
        let d = (&clifford_exponential(x0 + h, p) - &clifford_exponential(x0 - h, p)).scale_real(0.5 / h);
        let expect = (&ip * &e).scale_real(-1.0);
        fd = fd.max((&d - &expect).norm() / (r * e.norm()));
    }
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let mut push = |name: &str, v: f64, t: f64| {
        let mut e = CheckEntry::abs(name, v, 0.0, t);
        if cfg.timings {
            e.runtime_ms = Some(ms);
        }
        rep.push(e);
    };
    push("idempotence chi^2 = chi (1000 random p)", idem, tol);
    push("complementarity chi+ + chi- = 1", comp, tol);
    push("chi+ chi- = chi- chi+ = 0", cross, tol);
    push("eigen-relation i p chi = +-|p| chi (relative)", eigen, tol);
    push("exponential equals truncated power series (relative)", series, tol);
    push("(E u, v) = (u, E v) (relative)", selfadj, tol);
    push("d/dx0 E = -i p E by central differences (relative)", fd, cfg.tol(1e-7));
    rep
}

pub fn heat_hermite_suite(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(Suite::HeatHermite.name(), cfg.seed);
    let kmax = cfg.kmax.unwrap_or(5);
    for m in cfg.dims(&[1, 2, 3]) {
        let entry = cfg.timed(|| {
            let mut worst = 0.0f64;
            for k in box_indices(m, kmax) {
                let heat = match phi_k(&k) {
                    Ok(p) => p.heat_halftime(),
                    Err(e) => return CheckEntry::errored(format!("m={m}"), 0.0, &e),
                };
                let mut expect = GaussianPolynomial::zero(m, 0.25).expect("valid");
                expect = expect
                    .add(
                        &GaussianPolynomial::monomial(
                            &k,
                            0.25,
                            Multivector::scalar(m, c64(2f64.powf(-(m as f64) / 2.0))),
                        )
                        .expect("valid"),
                    )
                    .expect("same space");
                if heat.alpha() != 0.25 {
                    worst = f64::INFINITY;
                    continue;
                }
                worst = worst.max(heat.sub(&expect).expect("same space").max_coeff());
            }
            CheckEntry::abs(
                format!("heat of phi_k equals 2^(-m/2) x^k e^(-x^2/4), m={m}, |k|inf <= {kmax} (max coefficient error)"),
                worst,
                0.0,
                cfg.tol(1e-12),
            )
        });
        rep.push(entry);
    }
    rep.push(cfg.timed(|| {
        let mut rng = cfg.rng(4);
        let mut worst = 0.0f64;
        for t in 0..30 {
            let m = 1 + t % 3;
            let f = random_gaussian_poly(&mut rng, m, 4);
            let dd = f.dirac().dirac();
            let lap = f.laplacian().scale(c64(-1.0));
            worst = worst.max(dd.sub(&lap).expect("same space").max_coeff() / f.max_coeff().max(1.0));
        }
        CheckEntry::abs("D^2 = -Laplacian on random Gaussian polynomials", worst, 0.0, cfg.tol(1e-12))
    }));
    rep.push(cfg.timed(|| {
        let mut rng = cfg.rng(5);
        let mut worst = 0.0f64;
        for t in 0..30 {
            let m = 1 + t % 3;
            let f = random_gaussian_poly(&mut rng, m, 4);
            let a = f.dirac().heat_halftime();
            let b = f.heat_halftime().dirac();
            worst = worst.max(a.sub(&b).expect("same space").max_coeff() / f.max_coeff().max(1.0));
        }
        CheckEntry::abs("heat flow commutes with D", worst, 0.0, cfg.tol(1e-12))
    }));
    Ok(rep)
}

fn random_gaussian_poly(rng: &mut impl Rng, m: usize, max_deg: u32) -> GaussianPolynomial {
    let alpha = [0.25, 0.5, 0.7][rng.random_range(0..3)];
    let terms: Vec<(Vec<u32>, Multivector)> = (0..5)
        .map(|_| {
            let mut k = vec![0u32; m];
            let mut left = rng.random_range(0..=max_deg);
            for kj in k.iter_mut() {
                let take = rng.random_range(0..=left);
                *kj = take;
                left -= take;
            }
            (k, random_multivector(rng, m))
        })
        .collect();
    GaussianPolynomial::from_terms(m, alpha, terms).expect("small degree")
}

pub fn cross_path_suite(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(Suite::CrossPath.name(), cfg.seed);
    let kmax = cfg.kmax.unwrap_or(3);
    let x0s = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let bbox = CkBox::new(2.0, 8.0)?;
    for m in cfg.dims(&[1, 2]) {
        let grid = GridSpec::new(m, 8.0, 128)?;
        let axis = grid.axis();
        let axes: Vec<&[f64]> = (0..m).map(|_| axis.as_slice()).collect();
        let nb = 1 << m;
        for k in box_indices(m, kmax) {
            let entry = cfg.timed(|| {
                let run = || -> Result<(f64, Vec<String>)> {
                    let phi = phi_k(&k)?;
                    let sampled = SampledField::from_gaussian_poly(grid, &phi)?;
                    let spectral = cst_spectral(&sampled, &x0s)?;
                    let analytic = cst_analytic(&phi, Truncation::Tolerance(1e-13), bbox)?;
                    let mut worst = 0.0f64;
                    for (t, slice) in x0s.iter().zip(&spectral.slices) {
                        let exact = analytic.eval_grid(*t, &axes);
                        for (a, s) in exact.chunks(nb).zip(slice.flat().chunks(nb)) {
                            let mag = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                            if mag > 1e-9 {
                                let d = a.iter().zip(s).map(|(u, v)| (u - v).norm_sqr()).sum::<f64>().sqrt();
                                worst = worst.max(d / mag);
                            }
                        }
                    }
                    Ok((worst, spectral.warnings))
                };
                let name = format!("spectral vs series, phi_{k:?}, m={m}, |x0| <= 2 (max relative deviation)");
                match run() {
                    Ok((w, warns)) => {
                        let e = CheckEntry::abs(name, w, 0.0, cfg.tol(1e-6));
                        if warns.is_empty() {
                            e
                        } else {
                            e.with_note(warns.join("; "))
                        }
                    }
                    Err(err) => CheckEntry::errored(name, cfg.tol(1e-6), &err),
                }
            });
            rep.push(entry);
        }
    }
    Ok(rep)
}

pub fn monogenic_suite(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(Suite::Monogenic.name(), cfg.seed);
    let dt = 1e-3;
    let kmax = cfg.kmax.unwrap_or(3);
    for m in cfg.dims(&[1, 2]) {
        let centers = [-0.5, 0.0, 0.5];
        let indices = if m == 1 { box_indices(1, kmax) } else { simplex_indices(m, kmax.min(2)) };
        for k in indices {
            let entry = cfg.timed(|| {
                let run = || -> Result<f64> {
                    let phi = phi_k(&k)?;
                    let mut worst = 0.0f64;
                    if m == 1 {
                        // fine spectral grid, h ≈ 5e-4
                        let grid = GridSpec::new(1, 8.0, 32768)?;
                        let sampled = SampledField::from_gaussian_poly(grid, &phi)?;
                        for c in centers {
                            let field = cst_spectral(&sampled, &[c - dt, c, c + dt])?;
                            worst = worst.max(weyl_residual(&field)?);
                        }
                    } else {
                        let grid = GridSpec::new(m, 0.25, 256)?;
                        let series = cst_analytic(&phi, Truncation::Tolerance(1e-13), CkBox::new(0.51, 0.25)?)?;
                        for c in centers {
                            let field = series.sample(grid, &[c - dt, c, c + dt])?;
                            worst = worst.max(weyl_residual(&field)?);
                        }
                    }
                    Ok(worst)
                };
                let path = if m == 1 { "spectral" } else { "series" };
                let name = format!("Weyl residual of V(phi_{k:?}), m={m}, {path} path, dx0 = 1e-3");
                match run() {
                    Ok(w) => CheckEntry::abs(name, w, 0.0, cfg.tol(1e-5)),
                    Err(e) => CheckEntry::errored(name, cfg.tol(1e-5), &e),
                }
            });
            rep.push(entry);
        }
    }
    rep.push(cfg.timed(|| {
        let run = || -> Result<f64> {
            let f = GaussianPolynomial::monomial(&[1], 0.0, Multivector::one(1))?;
            let series = ck_extend(&f, Truncation::Tolerance(1e-12), CkBox::new(1.0, 1.0)?)?;
            let grid = GridSpec::new(1, 1.0, 8)?;
            weyl_residual(&series.sample(grid, &[-dt, 0.0, dt])?)
        };
        let name = "Weyl residual of the exact extension x - x0 e1";
        match run() {
            Ok(w) => CheckEntry::abs(name, w, 0.0, cfg.tol(1e-12)),
            Err(e) => CheckEntry::errored(name, cfg.tol(1e-12), &e),
        }
    }));
    Ok(rep)
}

/// Quadrature for `dμ = π^{−1/2}e^{−x₀²}dx₀dx`: Gauss–Hermite in `x₀`, a
/// tensor trapezoid on `[−L, L]ᵐ` in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureRule {
    pub hermite: QuadratureRule,
    pub x: QuadratureRule,
}

impl MeasureRule {
    pub fn new(hermite_nodes: usize, half_width: f64, step: f64) -> Result<Self> {
        Ok(MeasureRule {
            hermite: QuadratureRule::gauss_hermite(hermite_nodes)?,
            x: QuadratureRule::tensor_trapezoid(half_width, step)?,
        })
    }

    /// 64 Hermite nodes, `L = 10`, `h = 1/4`.
    pub fn standard(hermite_nodes: usize) -> Result<Self> {
        Self::new(hermite_nodes, 10.0, 0.25)
    }
}

/// Largest number of `x`-lattice points a Gram computation may touch.
pub const GRAM_POINT_BUDGET: usize = 1 << 20;

/// Gram matrix `⟨Fᵢe_A, Fⱼe_B⟩_μ` of series times blades.
///
/// Entries are ordered series-major: `(i, A)` sits at `i·blades.len() + a`.
pub fn gram_matrix(
    series: &[CkSeries],
    blades: &[BladeIndex],
    rule: &MeasureRule,
) -> Result<Vec<Vec<Complex64>>> {
    let Some(first) = series.first() else {
        return Ok(Vec::new());
    };
    let m = first.dim();
    if let Some(bad) = series.iter().find(|s| s.dim() != m) {
        return Err(CstError::DimensionMismatch {
            left: m,
            right: bad.dim(),
        });
    }
    let axis = &rule.x.nodes;
    let npts = axis.len().pow(m as u32);
    if npts > GRAM_POINT_BUDGET {
        return Err(CstError::QuadratureBudget(format!(
            "{npts} x-points exceed the budget of {GRAM_POINT_BUDGET}"
        )));
    }
    let nb = 1usize << m;
    let ns = series.len();
    let axes: Vec<&[f64]> = (0..m).map(|_| axis.as_slice()).collect();
    let point_weights: Vec<f64> = (0..npts)
        .map(|mut p| {
            let mut w = 1.0;
            for _ in 0..m {
                w *= rule.x.weights[p % axis.len()];
                p /= axis.len();
            }
            w
        })
        .collect();

    // M[i][j][C][D] = Σ w · (Fᵢ)_C · conj((Fⱼ)_D), for i ≤ j
    let pair_index = |i: usize, j: usize| i * ns + j;
    let block = nb * nb;
    let per_node: Vec<Vec<Complex64>> = rule
        .hermite
        .nodes
        .par_iter()
        .zip(&rule.hermite.weights)
        .map(|(&t, &w)| {
            let samples: Vec<Vec<Complex64>> = series.iter().map(|s| s.eval_grid(t, &axes)).collect();
            let mut acc = vec![Complex64::new(0.0, 0.0); ns * ns * block];
            for i in 0..ns {
                for j in i..ns {
                    let dst = &mut acc[pair_index(i, j) * block..(pair_index(i, j) + 1) * block];
                    for (p, &pw) in point_weights.iter().enumerate() {
                        let a = &samples[i][p * nb..(p + 1) * nb];
                        let b = &samples[j][p * nb..(p + 1) * nb];
                        for (c, &ac) in a.iter().enumerate() {
                            if ac.re == 0.0 && ac.im == 0.0 {
                                continue;
                            }
                            let ac = ac * pw;
                            for (d, bd) in b.iter().enumerate() {
                                dst[c * nb + d] += ac * bd.conj();
                            }
                        }
                    }
                }
            }
            for z in &mut acc {
                *z *= w;
            }
            acc
        })
        .collect();
    let mut moments = vec![Complex64::new(0.0, 0.0); ns * ns * block];
    for node in per_node {
        for (a, b) in moments.iter_mut().zip(node) {
            *a += b;
        }
    }
    let norm = 1.0 / PI.sqrt();
    let nblades = blades.len();
    let dim = ns * nblades;
    let mut g = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for i in 0..ns {
        for j in i..ns {
            let mm = &moments[pair_index(i, j) * block..(pair_index(i, j) + 1) * block];
            for (ai, &a) in blades.iter().enumerate() {
                for (bi, &b) in blades.iter().enumerate() {
                    // (F e_A)_E = sign(E⊕A, A)·F_{E⊕A}
                    let mut v = Complex64::new(0.0, 0.0);
                    for e in 0..nb as u32 {
                        let ca = e ^ a.0;
                        let cb = e ^ b.0;
                        let s = blade_product_sign(BladeIndex(ca), a) * blade_product_sign(BladeIndex(cb), b);
                        v += mm[ca as usize * nb + cb as usize] * s;
                    }
                    let v = v * norm;
                    g[i * nblades + ai][j * nblades + bi] = v;
                    g[j * nblades + bi][i * nblades + ai] = v.conj();
                }
            }
        }
    }
    Ok(g)
}

/// `⟨V h₁, V h₂⟩_μ` by quadrature, next to `⟨h₁, h₂⟩` in closed form.
pub fn verify_isometry_rm(
    h1: &GaussianPolynomial,
    h2: &GaussianPolynomial,
    rule: &MeasureRule,
    tau: f64,
) -> Result<(Complex64, Complex64)> {
    if h1.dim() > 2 {
        return Err(CstError::QuadratureBudget(format!(
            "isometry quadrature supports m <= 2, got m={}",
            h1.dim()
        )));
    }
    let bbox = isometry_box();
    let a = cst_analytic(h1, Truncation::Tolerance(tau), bbox)?;
    let b = cst_analytic(h2, Truncation::Tolerance(tau), bbox)?;
    let g = gram_matrix(&[a, b], &[BladeIndex::SCALAR], rule)?;
    Ok((g[0][1], l2_inner(h1, h2)?))
}

/// Series box for `dμ` quadrature. Hermite nodes beyond `|x₀| = 6` carry
/// weights below `e^{−36}`, so truncation error there is invisible.
fn isometry_box() -> CkBox {
    CkBox {
        x0_max: 6.0,
        x_half_width: 10.0,
    }
}

fn gram_entries(
    rep: &mut VerificationReport,
    cfg: &VerifyConfig,
    label: &str,
    g: &[Vec<Complex64>],
    diag_ref: &[f64],
    names: &[String],
    offdiag_relative: bool,
) {
    let tol = cfg.tol(1e-6);
    for (i, name) in names.iter().enumerate() {
        rep.push(CheckEntry::rel(format!("{label} diagonal {name}"), g[i][i], diag_ref[i], tol));
    }
    let mut worst = 0.0f64;
    for i in 0..g.len() {
        for j in 0..g.len() {
            if i != j {
                let v = if offdiag_relative {
                    g[i][j].norm() / (diag_ref[i] * diag_ref[j]).sqrt()
                } else {
                    g[i][j].norm()
                };
                worst = worst.max(v);
            }
        }
    }
    let what = if offdiag_relative {
        "max |G_ij| / sqrt(G_ii G_jj)"
    } else {
        "max |G_ij|"
    };
    rep.push(CheckEntry::abs(format!("{label} off-diagonal, {what}"), worst, 0.0, tol));
}

pub fn isometry_suite(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(Suite::Isometry.name(), cfg.seed);
    let kmax = cfg.kmax.unwrap_or(3);
    let rule = MeasureRule::standard(cfg.hermite_nodes)?;
    for m in cfg.dims(&[1, 2]) {
        if m > 2 {
            return Err(CstError::QuadratureBudget(format!("isometry suite supports m <= 2, got {m}")));
        }
        let start = Instant::now();
        let indices = box_indices(m, kmax);
        let series = indices
            .iter()
            .map(|k| cst_analytic(&phi_k(k)?, Truncation::Tolerance(1e-10), isometry_box()))
            .collect::<Result<Vec<_>>>()?;
        let blades: Vec<BladeIndex> = BladeIndex::all(m).collect();
        let g = gram_matrix(&series, &blades, &rule)?;
        let mut refs = Vec::new();
        let mut names = Vec::new();
        for k in &indices {
            for b in &blades {
                refs.push(phi_norm_sqr(k));
                names.push(format!("V(phi_{k:?}) {}", b.label()));
            }
        }
        let before = rep.checks.len();
        gram_entries(&mut rep, cfg, &format!("m={m}"), &g, &refs, &names, true);
        if cfg.timings {
            let ms = start.elapsed().as_secs_f64() * 1e3;
            for c in &mut rep.checks[before..] {
                c.runtime_ms = Some(ms);
            }
        }
    }
    Ok(rep)
}

pub fn gram_suite(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(Suite::Gram.name(), cfg.seed);
    let kmax = cfg.kmax.unwrap_or(3);
    let rule = MeasureRule::standard(cfg.hermite_nodes)?;
    for m in cfg.dims(&[1]) {
        if m > 2 {
            return Err(CstError::QuadratureBudget(format!("gram suite supports m <= 2, got {m}")));
        }
        let indices = box_indices(m, kmax);
        let series = indices
            .iter()
            .map(|k| psi_basis(k, Truncation::Tolerance(1e-10), isometry_box()))
            .collect::<Result<Vec<_>>>()?;
        let blades: Vec<BladeIndex> = BladeIndex::all(m).collect();
        let g = gram_matrix(&series, &blades, &rule)?;
        let mut refs = Vec::new();
        let mut names = Vec::new();
        for k in &indices {
            for b in &blades {
                refs.push(2f64.powi(m as i32) * phi_norm_sqr(k));
                names.push(format!("psi_{k:?} {}", b.label()));
            }
        }
        gram_entries(&mut rep, cfg, &format!("m={m}"), &g, &refs, &names, false);
    }
    Ok(rep)
}

fn random_torus(rng: &mut impl Rng, m: usize, kmax: i64, count: usize) -> TorusCoefficients {
    let mut t = TorusCoefficients::new(m).expect("valid dimension");
    for _ in 0..count {
        let k: Vec<i64> = (0..m).map(|_| rng.random_range(-kmax..=kmax)).collect();
        t.insert(k, random_multivector(rng, m)).expect("finite");
    }
    t
}

/// `h` reuses about half of `f`'s modes so the pairing is not trivially zero.
fn random_torus_pair(rng: &mut impl Rng, m: usize, kmax: i64) -> (TorusCoefficients, TorusCoefficients) {
    let count = rng.random_range(1..=6);
    let f = random_torus(rng, m, kmax, count);
    let extra = rng.random_range(0..=3);
    let mut h = random_torus(rng, m, kmax, extra);
    let shared: Vec<Vec<i64>> = f.modes().map(|(k, _)| k.clone()).collect();
    for k in shared {
        if rng.random_bool(0.5) {
            h.insert(k, random_multivector(rng, m)).expect("finite");
        }
    }
    (f, h)
}

pub fn torus_parseval_suite(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(Suite::TorusParseval.name(), cfg.seed);
    let mut rng = cfg.rng(6);
    rep.push(cfg.timed(|| {
        let mut worst = 0.0f64;
        for t in 0..100 {
            let (f, h) = random_torus_pair(&mut rng, 1 + t % 3, 8);
            match torus_isometry_check(&f, &h, ParsevalMode::Analytic) {
                Ok(o) => worst = worst.max((o.transformed - o.coefficient_pairing).norm()),
                Err(e) => return CheckEntry::errored("analytic mode", 1e-12, &e),
            }
        }
        CheckEntry::abs(
            "analytic mode, 100 random sets, m <= 3, |k|inf <= 8 (max |<Vf,Vh> - sum (f_k,h_k)|)",
            worst,
            0.0,
            cfg.tol(1e-12),
        )
    }));
    rep.push(cfg.timed(|| {
        let f = TorusCoefficients::from_modes(2, [(vec![2, -1], random_multivector(&mut rng, 2))])
            .expect("valid");
        let norm = f.modes().next().map(|(_, c)| c.norm_sqr()).unwrap_or(0.0);
        match torus_isometry_check(&f, &f, ParsevalMode::Analytic) {
            Ok(o) => CheckEntry::rel("single mode, <Vf,Vf> = |f_k|^2", o.transformed, norm, cfg.tol(1e-12)),
            Err(e) => CheckEntry::errored("single mode", 1e-12, &e),
        }
    }));
    let nodes = cfg.hermite_nodes;
    let quad_cases: Vec<(String, TorusCoefficients, TorusCoefficients)> = {
        let full = |rng: &mut ChaCha8Rng| {
            TorusCoefficients::from_modes(1, (-2..=2).map(|k| (vec![k], random_multivector(rng, 1))))
                .expect("valid")
        };
        let a = full(&mut rng);
        let b = full(&mut rng);
        let mut cases = vec![("m=1, modes -2..2".to_string(), a, b)];
        for m in 1..=3 {
            let (f, h) = random_torus_pair(&mut rng, m, 3);
            cases.push((format!("m={m}, random modes |k|inf <= 3"), f, h));
        }
        cases
    };
    for (label, f, h) in quad_cases {
        rep.push(cfg.timed(|| {
            let name = format!("quadrature mode, {nodes} Hermite nodes, {label} (relative to |f||h|)");
            match torus_isometry_check(&f, &h, ParsevalMode::Quadrature { hermite_nodes: nodes }) {
                Ok(o) => CheckEntry::rel_to(name, o.transformed, o.coefficient_pairing, cfg.tol(1e-8), o.scale),
                Err(e) => CheckEntry::errored(name, 1e-8, &e),
            }
        }));
    }
    rep.push(cfg.timed(|| {
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let f = random_torus(&mut rng, 2, 4, 6);
            let v = torus_cst(&f);
            for _ in 0..10 {
                let x = [rng.random_range(0.0..2.0 * PI), rng.random_range(0.0..2.0 * PI)];
                let t = rng.random_range(-1.0..1.0);
                worst = worst.max(pointwise_weyl_residual(|a, y| v.eval(a, y), t, &x, 1e-4));
            }
        }
        CheckEntry::abs("Weyl residual of torus fields, |k|inf <= 4, step 1e-4", worst, 0.0, cfg.tol(1e-6))
    }));
    rep.push(cfg.timed(|| {
        let f = random_torus(&mut rng, 2, 3, 5);
        let v = torus_cst(&f);
        let heat = v.heat_restriction();
        let mut worst = 0.0f64;
        for (k, c) in f.modes() {
            let k2: f64 = k.iter().map(|&x| (x * x) as f64).sum();
            let expect = c.scale_real((-k2 / 2.0).exp());
            let got = heat.get(k).cloned().unwrap_or_else(|| Multivector::zero(2));
            worst = worst.max((&got - &expect).norm());
        }
        CheckEntry::abs("x0 = 0 restriction has coefficients e^(-|k|^2/2) f_k", worst, 0.0, 0.0)
    }));
    Ok(rep)
}

/// `(x̂ + ip̂)h` read as a Clifford vector: `x̲h ∓ D̲h` by sign convention.
pub fn position_momentum_apply(h: &GaussianPolynomial, sign: MomentumSign) -> GaussianPolynomial {
    let xh = h.left_mul_position();
    let dh = h.dirac();
    match sign {
        MomentumSign::Plus => xh.sub(&dh),
        MomentumSign::Minus => xh.add(&dh),
    }
    .expect("same gaussian exponent")
}

/// Max deviation between `V((x̂ + ip̂)h)` and `e^{−x₀D̲}(x̲·e^{Δ/2}h)` on the
/// lattice `x0s × xsᵐ`.
pub fn intertwine_check(
    h: &GaussianPolynomial,
    sign: MomentumSign,
    bbox: CkBox,
    tau: f64,
    x0s: &[f64],
    xs: &[f64],
) -> Result<f64> {
    let lhs = cst_analytic(&position_momentum_apply(h, sign), Truncation::Tolerance(tau), bbox)?;
    let rhs = ck_extend(&h.heat_halftime().left_mul_position(), Truncation::Tolerance(tau), bbox)?;
    let axes: Vec<&[f64]> = (0..h.dim()).map(|_| xs).collect();
    let worst = x0s
        .par_iter()
        .map(|&t| {
            let a = lhs.eval_grid(t, &axes);
            let b = rhs.eval_grid(t, &axes);
            a.chunks(1 << h.dim())
                .zip(b.chunks(1 << h.dim()))
                .map(|(u, v)| u.iter().zip(v).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

pub fn intertwine_suite(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(Suite::Intertwine.name(), cfg.seed);
    let kmax = cfg.kmax.unwrap_or(2);
    let bbox = CkBox::new(1.0, 4.0)?;
    let x0s = linspace(-1.0, 1.0, 9);
    let xs = linspace(-4.0, 4.0, 17);
    let sign = cfg.momentum_sign;
    for m in cfg.dims(&[1, 2]) {
        for k in simplex_indices(m, kmax) {
            rep.push(cfg.timed(|| {
                let name = format!("V((x + ip)phi_{k:?}) vs e^(-x0 D)(x heat(phi_{k:?})), m={m}, momentum sign {sign:?}");
                match phi_k(&k).and_then(|h| intertwine_check(&h, sign, bbox, 1e-13, &x0s, &xs)) {
                    Ok(d) => CheckEntry::abs(name, d, 0.0, cfg.tol(1e-8)),
                    Err(e) => CheckEntry::errored(name, cfg.tol(1e-8), &e),
                }
            }));
        }
    }
    Ok(rep)
}

/// `Σⱼ (−½)ʲ/j! q⁽²ʲ⁾` by repeated differentiation.
fn neg_heat_by_differentiation(q: &[f64]) -> Vec<f64> {
    let mut out = q.to_vec();
    let mut deriv = q.to_vec();
    let mut j = 0u32;
    let mut fact = 1.0;
    loop {
        for _ in 0..2 {
            deriv = deriv.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
        }
        if deriv.is_empty() {
            break;
        }
        j += 1;
        fact *= j as f64;
        let w = (-0.5f64).powi(j as i32) / fact;
        for (o, d) in out.iter_mut().zip(&deriv) {
            *o += w * d;
        }
    }
    out
}

pub fn genhermite_suite(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(Suite::GenHermite.name(), cfg.seed);
    let order = cfg.order.unwrap_or(60);
    let bbox = CkBox::new(1.0, 4.0)?;
    let x0s = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let xs = [-4.0, -2.0, 0.0, 2.0, 4.0];
    let dims = cfg.dims(&[1, 2, 3]);
    for (name, p) in builtin_monogenic_polynomials() {
        if !dims.contains(&p.dim()) {
            continue;
        }
        rep.push(cfg.timed(|| {
            let label = format!(
                "heat(CK(P e^(-x^2/2))) re-expanded vs CK(heat(P e^(-x^2/2))), P = {name}, order {order}"
            );
            match generalized_hermite_check(&p, order, 1e-13, bbox, &x0s, &xs) {
                Ok(o) => CheckEntry::abs(label, o.max_deviation, 0.0, cfg.tol(1e-8)),
                Err(e) => CheckEntry::errored(label, cfg.tol(1e-8), &e),
            }
        }));
    }
    rep.push(cfg.timed(|| {
        let mut worst = 0.0f64;
        for n in 0..=10 {
            let mut q = vec![0.0; n + 1];
            q[n] = 1.0;
            let a = neg_heat_x0_poly(&q).expect("small degree");
            let b = neg_heat_by_differentiation(&q);
            worst = worst.max(a.iter().zip(&b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max));
        }
        CheckEntry::abs("e^(-d^2/2) on x0^n matches repeated differentiation, n <= 10", worst, 0.0, 0.0)
    }));
    Ok(rep)
}

/// All `φ_k` indices with `k_j ≤ kmax` (exposed for the CLI).
pub fn hermite_indices(m: usize, kmax: u32) -> Vec<Vec<u32>> {
    box_indices(m, kmax)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_pass_rules() {
        assert!(CheckEntry::abs("a", 1.0, 1.0 + 1e-9, 1e-8).passed);
        assert!(!CheckEntry::abs("a", 1.0, 1.1, 1e-8).passed);
        assert!(CheckEntry::rel("r", 100.0, 100.0 + 1e-5, 1e-6).passed);
        assert!(!CheckEntry::rel("r", 1.0, 1.0 + 1e-5, 1e-6).passed);
        assert!(!CheckEntry::abs("nan", f64::NAN, 0.0, 1.0).passed);
    }

    #[test]
    fn report_round_trip_keeps_verdicts() {
        let mut rep = VerificationReport::new("x", 3);
        rep.push(CheckEntry::abs("ok", 1.0, 1.0, 0.0));
        rep.push(CheckEntry::abs("nan", f64::NAN, 0.0, 1.0));
        let s = serde_json::to_string(&rep).unwrap();
        assert!(s.contains("null"));
        let back: VerificationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.passed, rep.passed);
        let flags: Vec<bool> = back.checks.iter().map(|c| c.passed).collect();
        assert_eq!(flags, vec![true, false]);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn position_momentum_examples() {
        let pm = position_momentum_apply(&phi_k(&[0]).unwrap(), MomentumSign::Plus);
        let expect = phi_k(&[1]).unwrap().right_mul(&Multivector::basis_vector(1, 1));
        assert!(pm.sub(&expect).unwrap().max_coeff() < 1e-15);
        let pm = position_momentum_apply(&phi_k(&[1]).unwrap(), MomentumSign::Plus);
        let expect = phi_k(&[2]).unwrap().right_mul(&Multivector::basis_vector(1, 1));
        assert!(pm.sub(&expect).unwrap().max_coeff() < 1e-15);
        let z = GaussianPolynomial::zero(1, 0.5).unwrap();
        assert!(position_momentum_apply(&z, MomentumSign::Plus).is_zero());
    }

    #[test]
    fn isometry_phi0_phi1_m1() {
        let rule = MeasureRule::standard(64).unwrap();
        let p0 = phi_k(&[0]).unwrap();
        let p1 = phi_k(&[1]).unwrap();
        let (g, r) = verify_isometry_rm(&p0, &p0, &rule, 1e-10).unwrap();
        assert!((g - r).norm() <= 1e-6 * r.norm());
        let (g, _) = verify_isometry_rm(&p0, &p1, &rule, 1e-10).unwrap();
        assert!(g.norm() <= 1e-8);
        let e1 = p1.right_mul(&Multivector::basis_vector(1, 1));
        let (g, _) = verify_isometry_rm(&p1, &e1, &rule, 1e-10).unwrap();
        assert!(g.norm() <= 1e-8);
    }

    #[test]
    fn neg_heat_oracle_agrees() {
        let q = [0.5, -1.0, 2.0, 0.0, 3.0, 1.0];
        assert_eq!(neg_heat_x0_poly(&q).unwrap(), neg_heat_by_differentiation(&q));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
    }
}
