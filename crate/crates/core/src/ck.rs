//! Cauchy-Kowalevski extension `e^{−x₀D̲}f = Σⱼ (−x₀)ʲ/j!·D̲ʲf`.
//!
//! On the Gaussian-polynomial class every term is exact, so the only error
//! is truncation. The series converges uniformly on compacts, which makes
//! any error statement box-dependent: a [`CkSeries`] is always built for a
//! declared [`CkBox`], and tolerance-driven truncation stops at the first
//! term whose bound on that box drops below `τ`.
//!
//! Terms are stored pre-divided by `j!`, so `powers[j] = D̲ʲf/j!`. Without the
//! scaling, coefficients of high powers overflow long before the series
//! has converged.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::{BladeIndex, Multivector};
use crate::error::{CstError, Result};
use crate::gaussian_poly::{DenseCoefficients, GaussianPolynomial, MAX_INPUT_DEGREE};
use crate::spectral::{GridSpec, SampledField, SpacetimeField};

/// Hard cap on the truncation order.
pub const MAX_CK_ORDER: usize = 200;

/// Default truncation tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Evaluation box `|x₀| ≤ x0_max`, `|xⱼ| ≤ x_half_width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CkBox {
    pub x0_max: f64,
    pub x_half_width: f64,
}

impl CkBox {
    pub fn new(x0_max: f64, x_half_width: f64) -> Result<Self> {
        if !(x0_max >= 0.0 && x0_max.is_finite() && x_half_width > 0.0 && x_half_width.is_finite())
        {
            return Err(CstError::InvalidInput(format!(
                "evaluation box needs x0_max >= 0 and x_half_width > 0, got {x0_max}, {x_half_width}"
            )));
        }
        Ok(CkBox {
            x0_max,
            x_half_width,
        })
    }

    /// Per-axis lattice used to estimate sup norms.
    fn lattice_axis(&self, m: usize) -> Vec<f64> {
        let n = match m {
            1 => 129,
            2 => 41,
            3 => 17,
            _ => 9,
        };
        (0..n)
            .map(|i| -self.x_half_width + 2.0 * self.x_half_width * i as f64 / (n - 1) as f64)
            .collect()
    }
}

/// How to pick the truncation order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    Order(usize),
    Tolerance(f64),
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Tolerance(DEFAULT_TOLERANCE)
    }
}

/// A truncated Cauchy-Kowalevski series.
#[derive(Debug, Clone, PartialEq)]
pub struct CkSeries {
    powers: Vec<GaussianPolynomial>,
    order: usize,
    tolerance: Option<f64>,
    bbox: CkBox,
    term_bounds: Vec<f64>,
}

/// Largest sample norm of `f` on the box lattice.
fn lattice_sup(f: &GaussianPolynomial, bbox: &CkBox) -> f64 {
    if f.is_zero() {
        return 0.0;
    }
    let axis = bbox.lattice_axis(f.dim());
    let axes: Vec<&[f64]> = (0..f.dim()).map(|_| axis.as_slice()).collect();
    let nb = 1 << f.dim();
    f.eval_grid(&axes)
        .chunks(nb)
        .map(scaled_norm)
        .fold(0.0, f64::max)
}

/// Euclidean norm that survives squares below the smallest normal double.
fn scaled_norm(c: &[Complex64]) -> f64 {
    let big = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if big == 0.0 || !big.is_finite() {
        return big;
    }
    big * c.iter().map(|z| (z / big).norm_sqr()).sum::<f64>().sqrt()
}

/// Builds `e^{−x₀D̲}f` on `bbox`.
///
/// With [`Truncation::Tolerance`], term `j` is bounded by
/// `x0_maxʲ · sup |D̲ʲf/j!|`, the sup being sampled on a lattice over the
/// `x`-box; the series stops at the first `j` whose bound is below `τ`.
pub fn ck_extend(f: &GaussianPolynomial, truncation: Truncation, bbox: CkBox) -> Result<CkSeries> {
    if f.degree() > MAX_INPUT_DEGREE {
        return Err(CstError::DegreeTooLarge {
            degree: f.degree(),
            max: MAX_INPUT_DEGREE,
        });
    }
    let mut powers = vec![f.clone()];
    let mut term_bounds = Vec::new();
    match truncation {
        Truncation::Order(order) => {
            if order > MAX_CK_ORDER {
                return Err(CstError::InvalidInput(format!(
                    "truncation order {order} exceeds {MAX_CK_ORDER}"
                )));
            }
            for j in 1..=order {
                let next = powers[j - 1].dirac().scale(Complex64::new(1.0 / j as f64, 0.0));
                powers.push(next);
            }
            Ok(CkSeries {
                powers,
                order,
                tolerance: None,
                bbox,
                term_bounds,
            })
        }
        Truncation::Tolerance(tau) => {
            if !(tau > 0.0 && tau.is_finite()) {
                return Err(CstError::InvalidInput(format!("tolerance must be positive, got {tau}")));
            }
            term_bounds.push(lattice_sup(f, &bbox));
            if f.is_zero() {
                return Ok(CkSeries {
                    powers,
                    order: 0,
                    tolerance: Some(tau),
                    bbox,
                    term_bounds,
                });
            }
            let mut j = 0;
            loop {
                j += 1;
                if j > MAX_CK_ORDER {
                    return Err(CstError::TruncationFailure {
                        order: MAX_CK_ORDER,
                        tolerance: tau,
                        achieved: *term_bounds.last().unwrap(),
                    });
                }
                let next = powers[j - 1].dirac().scale(Complex64::new(1.0 / j as f64, 0.0));
                let bound = bbox.x0_max.powi(j as i32) * lattice_sup(&next, &bbox);
                if !bound.is_finite() {
                    return Err(CstError::TruncationFailure {
                        order: j,
                        tolerance: tau,
                        achieved: bound,
                    });
                }
                // with a Gaussian factor each D̲ raises the degree by exactly one
                // (the top part is multiplied by −2αx̲); anything else means the
                // leading coefficients underflowed
                let exhausted = next.is_zero();
                if f.alpha() != 0.0 && next.degree() != f.degree() + j as u32 {
                    return Err(CstError::TruncationFailure {
                        order: j,
                        tolerance: tau,
                        achieved: *term_bounds.last().unwrap(),
                    });
                }
                powers.push(next);
                term_bounds.push(bound);
                if bound < tau || exhausted {
                    break;
                }
            }
            Ok(CkSeries {
                powers,
                order: j,
                tolerance: Some(tau),
                bbox,
                term_bounds,
            })
        }
    }
}

/// `V(h) = e^{−x₀D̲}(e^{Δ/2}h)`.
pub fn cst_analytic(h: &GaussianPolynomial, truncation: Truncation, bbox: CkBox) -> Result<CkSeries> {
    if h.degree() > MAX_INPUT_DEGREE {
        return Err(CstError::DegreeTooLarge {
            degree: h.degree(),
            max: MAX_INPUT_DEGREE,
        });
    }
    ck_extend(&h.heat_halftime(), truncation, bbox)
}

/// `ψ_k = e^{−x₀D̲}(xᵏe^{−|x|²/4}) = 2^{m/2}V(φ_k)`.
pub fn psi_basis(k: &[u32], truncation: Truncation, bbox: CkBox) -> Result<CkSeries> {
    let base = GaussianPolynomial::monomial(k, 0.25, Multivector::one(k.len()))?;
    ck_extend(&base, truncation, bbox)
}

impl CkSeries {
    pub fn dim(&self) -> usize {
        self.powers[0].dim()
    }

    /// The `x₀ = 0` data `f`.
    pub fn base(&self) -> &GaussianPolynomial {
        &self.powers[0]
    }

    /// `D̲ʲf/j!` for `j = 0…J`.
    pub fn scaled_powers(&self) -> &[GaussianPolynomial] {
        &self.powers
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn tolerance(&self) -> Option<f64> {
        self.tolerance
    }

    pub fn bbox(&self) -> CkBox {
        self.bbox
    }

    /// Sampled bounds of each included term (tolerance mode only).
    pub fn term_bounds(&self) -> &[f64] {
        &self.term_bounds
    }

    /// The series at fixed `x₀`, collapsed into one Gaussian polynomial.
    pub fn slice(&self, x0: f64) -> GaussianPolynomial {
        let mut out = self.powers[0].clone();
        let mut w = 1.0;
        for p in &self.powers[1..] {
            w *= -x0;
            out.axpy(p, Complex64::new(w, 0.0));
        }
        out
    }

    /// Samples the slice at `x₀` on the tensor grid `axes[0] × … × axes[m−1]`
    /// (same layout as [`GaussianPolynomial::eval_grid`]).
    pub fn eval_grid(&self, x0: f64, axes: &[&[f64]]) -> Vec<Complex64> {
        let m = self.dim();
        let degs = (0..m)
            .map(|j| self.powers.iter().map(|p| p.max_axis_degree(j)).max().unwrap_or(0))
            .collect();
        let mut dense = DenseCoefficients::new(m, self.powers[0].alpha(), degs);
        let mut w = 1.0;
        for p in &self.powers {
            dense.accumulate(p, Complex64::new(w, 0.0));
            w *= -x0;
        }
        dense.eval_grid(axes)
    }

    pub fn eval(&self, x0: f64, x: &[f64]) -> Multivector {
        let mut out = self.powers[0].eval(x);
        let mut w = 1.0;
        for p in &self.powers[1..] {
            w *= -x0;
            out.add_scaled(&p.eval(x), Complex64::new(w, 0.0));
        }
        out
    }

    /// Coefficients `c_n(x)` of the series as a polynomial `Σ x₀ⁿc_n(x)`.
    pub fn x0_coefficients(&self) -> Vec<GaussianPolynomial> {
        self.powers
            .iter()
            .enumerate()
            .map(|(n, p)| {
                if n % 2 == 1 {
                    p.scale(Complex64::new(-1.0, 0.0))
                } else {
                    p.clone()
                }
            })
            .collect()
    }

    /// `series · a` for a constant multivector `a`.
    pub fn right_mul(&self, a: &Multivector) -> Self {
        CkSeries {
            powers: self.powers.iter().map(|p| p.right_mul(a)).collect(),
            ..self.clone()
        }
    }

    pub fn right_mul_blade(&self, a: BladeIndex) -> Self {
        self.right_mul(&Multivector::blade(self.dim(), a))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CkSeries {
            powers: self.powers.iter().map(|p| p.scale(s)).collect(),
            ..self.clone()
        }
    }

    /// Samples the series on `grid` at each `x₀`.
    pub fn sample(&self, grid: GridSpec, x0_values: &[f64]) -> Result<SpacetimeField> {
        if grid.m != self.dim() {
            return Err(CstError::DimensionMismatch {
                left: grid.m,
                right: self.dim(),
            });
        }
        let slices = x0_values
            .par_iter()
            .map(|&t| {
                let axis = grid.axis();
                let axes: Vec<&[f64]> = (0..grid.m).map(|_| axis.as_slice()).collect();
                SampledField::from_flat(grid, self.eval_grid(t, &axes))
            })
            .collect::<Result<Vec<_>>>()?;
        SpacetimeField::new(x0_values.to_vec(), slices)
    }
}

#[derive(Serialize)]
struct CkSeriesJson<'a> {
    order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(rename = "box")]
    bbox: CkBox,
    power_scaling: &'static str,
    base: &'a GaussianPolynomial,
    powers: &'a [GaussianPolynomial],
}

impl Serialize for CkSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CkSeriesJson {
            order: self.order,
            tolerance: self.tolerance,
            bbox: self.bbox,
            power_scaling: "inverse_factorial",
            base: &self.powers[0],
            powers: &self.powers,
        }
        .serialize(s)
    }
}

/// Image of `x₀ⁿ` under `e^{−∂²/2}`, as `(power, coefficient)` pairs:
/// `x₀ⁿ ↦ Σⱼ (−½)ʲ/j! · n!/(n−2j)! · x₀ⁿ⁻²ʲ`.
pub fn neg_heat_monomial(n: usize) -> Vec<(usize, f64)> {
    let mut out = Vec::with_capacity(n / 2 + 1);
    // n!/((n−2j)! j! 2ʲ) counts partial matchings, hence stays integral
    let mut a = 1.0;
    let mut j = 0;
    loop {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        out.push((n - 2 * j, sign * a));
        if 2 * j + 2 > n {
            break;
        }
        a *= ((n - 2 * j) * (n - 2 * j - 1)) as f64 / (2 * (j + 1)) as f64;
        j += 1;
    }
    out
}

/// Applies `e^{−∂²/2}` to a polynomial in `x₀` (coefficients low to high).
pub fn neg_heat_x0_poly(q: &[f64]) -> Result<Vec<f64>> {
    let deg = q.len().saturating_sub(1);
    if deg > MAX_INPUT_DEGREE as usize {
        return Err(CstError::DegreeTooLarge {
            degree: deg as u32,
            max: MAX_INPUT_DEGREE,
        });
    }
    let mut out = vec![0.0; q.len()];
    for (n, &c) in q.iter().enumerate() {
        if c != 0.0 {
            for (p, w) in neg_heat_monomial(n) {
                out[p] += c * w;
            }
        }
    }
    Ok(out)
}

/// Max deviation between `e^{−x₀D̲}(e^{Δ/2}f)` and `e^{−∂₀²/2}` applied
/// term-wise to the order-`order` series `e^{−x₀D̲}f`, over a lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorIdentityOutcome {
    pub max_deviation: f64,
    pub max_magnitude: f64,
    pub order: usize,
    pub points: usize,
}

/// Compares the two orderings of heat flow and CK extension on the lattice
/// `x0s × xsᵐ`.
///
/// Left side: [`cst_analytic`] with tolerance `tau` on `bbox`. Right side:
/// the truncated series of `f` to `order`, with each power of `x₀` mapped
/// through [`neg_heat_monomial`]. On monogenic functions `Δ = −∂₀²`, so the
/// two agree when the rearranged series converges.
pub fn operator_identity_deviation(
    f: &GaussianPolynomial,
    order: usize,
    tau: f64,
    bbox: CkBox,
    x0s: &[f64],
    xs: &[f64],
) -> Result<OperatorIdentityOutcome> {
    let m = f.dim();
    let lhs = cst_analytic(f, Truncation::Tolerance(tau), bbox)?;
    let series = ck_extend(f, Truncation::Order(order), bbox)?;
    let coeffs = series.x0_coefficients();
    let mut mapped: Vec<GaussianPolynomial> = (0..coeffs.len()).map(|_| coeffs[0].empty_like()).collect();
    for (n, c) in coeffs.iter().enumerate() {
        for (p, w) in neg_heat_monomial(n) {
            mapped[p].axpy(c, Complex64::new(w, 0.0));
        }
    }
    let axes: Vec<&[f64]> = (0..m).map(|_| xs).collect();
    let mapped_grids: Vec<Vec<Complex64>> = mapped.par_iter().map(|d| d.eval_grid(&axes)).collect();
    let nb = 1usize << m;
    let (dev, mag) = x0s
        .par_iter()
        .map(|&t| {
            let a = lhs.eval_grid(t, &axes);
            let mut b = vec![Complex64::new(0.0, 0.0); a.len()];
            let mut w = 1.0;
            for g in &mapped_grids {
                for (z, v) in b.iter_mut().zip(g) {
                    *z += v * w;
                }
                w *= t;
            }
            let mut dev = 0.0f64;
            let mut mag = 0.0f64;
            for (pa, pb) in a.chunks(nb).zip(b.chunks(nb)) {
                let d: f64 = pa.iter().zip(pb).map(|(u, v)| (u - v).norm_sqr()).sum();
                dev = dev.max(d.sqrt());
                mag = mag.max(pa.iter().map(|u| u.norm_sqr()).sum::<f64>().sqrt());
            }
            (dev, mag)
        })
        .reduce(|| (0.0, 0.0), |p, q| (p.0.max(q.0), p.1.max(q.1)));
    Ok(OperatorIdentityOutcome {
        max_deviation: dev,
        max_magnitude: mag,
        order,
        points: x0s.len() * xs.len().pow(m as u32),
    })
}

/// Checks `e^{Δ/2}∘e^{−x₀D̲} = e^{−x₀D̲}∘e^{Δ/2}` on `P·e^{−|x|²/2}` for a
/// homogeneous monogenic polynomial `P`.
pub fn generalized_hermite_check(
    p: &GaussianPolynomial,
    order: usize,
    tau: f64,
    bbox: CkBox,
    x0s: &[f64],
    xs: &[f64],
) -> Result<OperatorIdentityOutcome> {
    check_monogenic_homogeneous(p)?;
    let f = p.with_alpha(0.5)?;
    operator_identity_deviation(&f, order, tau, bbox, x0s, xs)
}

fn check_monogenic_homogeneous(p: &GaussianPolynomial) -> Result<()> {
    if p.alpha() != 0.0 {
        return Err(CstError::InvalidInput(
            "expected a bare polynomial (gaussian exponent 0)".into(),
        ));
    }
    if p.is_zero() || !p.is_homogeneous() {
        return Err(CstError::NotHomogeneous);
    }
    let residual = p.dirac().max_coeff();
    if residual > 1e-12 * p.max_coeff() {
        return Err(CstError::NotMonogenic(residual));
    }
    Ok(())
}

/// Small homogeneous monogenic polynomials (degree ≤ 2, m ≤ 3).
pub fn builtin_monogenic_polynomials() -> Vec<(&'static str, GaussianPolynomial)> {
    let e = Multivector::basis_vector;
    let one = Multivector::one;
    let mk = |m: usize, terms: Vec<(Vec<u32>, Multivector)>| {
        GaussianPolynomial::from_terms(m, 0.0, terms).expect("built-in polynomial")
    };
    let list = vec![
        ("1 (m=1)", mk(1, vec![(vec![0], one(1))])),
        ("1 (m=2)", mk(2, vec![(vec![0, 0], one(2))])),
        ("x1e1 - x2e2", mk(2, vec![(vec![1, 0], e(2, 1)), (vec![0, 1], -e(2, 2))])),
        (
            "x1^2 - x2^2 - 2x1x2e12",
            mk(
                2,
                vec![
                    (vec![2, 0], one(2)),
                    (vec![0, 2], -one(2)),
                    (vec![1, 1], Multivector::blade(2, BladeIndex(3)).scale_real(-2.0)),
                ],
            ),
        ),
        ("1 (m=3)", mk(3, vec![(vec![0, 0, 0], one(3))])),
        ("x1e2 + x2e1", mk(3, vec![(vec![1, 0, 0], e(3, 2)), (vec![0, 1, 0], e(3, 1))])),
        ("x1e1 - x3e3", mk(3, vec![(vec![1, 0, 0], e(3, 1)), (vec![0, 0, 1], -e(3, 3))])),
    ];
    for (name, p) in &list {
        debug_assert!(check_monogenic_homogeneous(p).is_ok(), "{name}");
    }
    list
}

/// Tensor lattice `x0s × xsᵐ`.
pub fn product_lattice(m: usize, x0s: &[f64], xs: &[f64]) -> Vec<(f64, Vec<f64>)> {
    let mut out = Vec::new();
    let total = xs.len().pow(m as u32);
    for &t in x0s {
        for mut p in 0..total {
            let mut x = vec![0.0; m];
            for j in (0..m).rev() {
                x[j] = xs[p % xs.len()];
                p /= xs.len();
            }
            out.push((t, x));
        }
    }
    out
}
