//! Functions of the form `P(x)·exp(−α|x|²)` with ℂₘ-valued polynomial `P`.
//!
//! The class is closed under the Dirac operator `D̲ = Σ eⱼ∂ⱼ`, the heat
//! operator `e^{Δ/2}` (convolution with `ρ₁(x) = (2π)^{−m/2}e^{−|x|²/2}`),
//! multiplication by coordinates, and has closed-form `L²` pairings. Every
//! function met by the transform pipeline lives here: the Hermite functions
//! `φ_k`, their heat images `2^{−m/2}xᵏe^{−|x|²/4}`, and each term of a
//! Cauchy-Kowalevski series.
//!
//! Clifford coefficients always multiply from the left: `D̲f` is
//! `Σⱼ eⱼ·∂ⱼf` with `eⱼ` applied to each coefficient.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::clifford::{inner_unchecked, Multivector, MAX_DIM};
use crate::error::{CstError, Result};

/// Total degree accepted on user-facing constructors.
pub const MAX_INPUT_DEGREE: u32 = 64;

/// An exponent multi-index `k ∈ ℕ₀ᵐ`; unused trailing slots stay zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex([u16; MAX_DIM]);

impl MultiIndex {
    pub fn new(k: &[u32]) -> Self {
        assert!(k.len() <= MAX_DIM, "multi-index longer than {MAX_DIM}");
        let mut raw = [0u16; MAX_DIM];
        for (slot, &kj) in raw.iter_mut().zip(k) {
            *slot = u16::try_from(kj).expect("exponent overflow");
        }
        MultiIndex(raw)
    }

    /// Exponent of axis `j` (0-based).
    #[inline]
    pub fn get(&self, j: usize) -> u32 {
        self.0[j] as u32
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&k| k as u32).sum()
    }

    pub fn to_vec(&self, m: usize) -> Vec<u32> {
        self.0[..m].iter().map(|&k| k as u32).collect()
    }

    #[inline]
    fn bumped(mut self, j: usize) -> Self {
        self.0[j] += 1;
        self
    }

    #[inline]
    fn lowered(mut self, j: usize) -> Self {
        self.0[j] -= 1;
        self
    }

    /// `k!` in multi-index notation.
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&k| (1..=k as u64).map(|i| i as f64).product::<f64>())
            .product()
    }
}

/// `P(x)·exp(−α|x|²)` with multivector coefficients.
#[derive(Clone, PartialEq)]
pub struct GaussianPolynomial {
    m: usize,
    alpha: f64,
    terms: BTreeMap<MultiIndex, Multivector>,
}

impl std::fmt::Debug for GaussianPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GaussianPolynomial")
            .field("m", &self.m)
            .field("alpha", &self.alpha)
            .field("terms", &self.terms.len())
            .field("degree", &self.degree())
            .finish()
    }
}

impl GaussianPolynomial {
    /// The zero function with the given Gaussian exponent.
    pub fn zero(m: usize, alpha: f64) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&m) {
            return Err(CstError::InvalidDimension(m));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(CstError::InvalidInput(format!(
                "gaussian exponent must be finite and >= 0, got {alpha}"
            )));
        }
        Ok(GaussianPolynomial {
            m,
            alpha,
            terms: BTreeMap::new(),
        })
    }

    /// `exp(−α|x|²)` alone.
    pub fn gaussian(m: usize, alpha: f64) -> Result<Self> {
        let mut g = Self::zero(m, alpha)?;
        g.add_term(MultiIndex::default(), &Multivector::one(m));
        Ok(g)
    }

    /// `coeff · xᵏ · exp(−α|x|²)`.
    pub fn monomial(k: &[u32], alpha: f64, coeff: Multivector) -> Result<Self> {
        let m = k.len();
        if coeff.dim() != m {
            return Err(CstError::DimensionMismatch {
                left: m,
                right: coeff.dim(),
            });
        }
        Self::from_terms(m, alpha, [(k.to_vec(), coeff)])
    }

    /// Builds from `(k, coefficient)` pairs; repeated indices accumulate.
    pub fn from_terms<I>(m: usize, alpha: f64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Multivector)>,
    {
        let mut g = Self::zero(m, alpha)?;
        for (k, c) in terms {
            if k.len() != m {
                return Err(CstError::InvalidInput(format!(
                    "multi-index {k:?} has length {} but m={m}",
                    k.len()
                )));
            }
            if c.dim() != m {
                return Err(CstError::DimensionMismatch {
                    left: m,
                    right: c.dim(),
                });
            }
            if !c.is_finite() {
                return Err(CstError::NonFinite("polynomial coefficient".into()));
            }
            let deg: u32 = k.iter().sum();
            if deg > MAX_INPUT_DEGREE {
                return Err(CstError::DegreeTooLarge {
                    degree: deg,
                    max: MAX_INPUT_DEGREE,
                });
            }
            g.add_term(MultiIndex::new(&k), &c);
        }
        Ok(g)
    }

    pub(crate) fn empty_like(&self) -> Self {
        GaussianPolynomial {
            m: self.m,
            alpha: self.alpha,
            terms: BTreeMap::new(),
        }
    }

    /// Accumulates `c` onto the coefficient of `xᵏ`, dropping exact zeros.
    pub(crate) fn add_term(&mut self, k: MultiIndex, c: &Multivector) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    fn add_term_scaled(&mut self, k: MultiIndex, c: &Multivector, s: Complex64) {
        if s == Complex64::new(0.0, 0.0) || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(existing) => {
                existing.add_scaled(c, s);
                if existing.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.scale(s));
            }
        }
    }

    /// `self += s · other`; both must share `m` and `α`.
    pub(crate) fn axpy(&mut self, other: &Self, s: Complex64) {
        debug_assert!(self.m == other.m && self.alpha == other.alpha);
        for (k, c) in &other.terms {
            self.add_term_scaled(*k, c, s);
        }
    }

    /// The same polynomial with a different Gaussian exponent.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        let mut out = Self::zero(self.m, alpha)?;
        out.terms = self.terms.clone();
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Multivector)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, k: &[u32]) -> Option<&Multivector> {
        self.terms.get(&MultiIndex::new(k))
    }

    /// Total degree of `P` (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|k| k.total()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|k| k.total());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    pub(crate) fn max_axis_degree(&self, j: usize) -> usize {
        self.terms.keys().map(|k| k.get(j) as usize).max().unwrap_or(0)
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(CstError::DimensionMismatch {
                left: self.m,
                right: other.m,
            });
        }
        if self.alpha != other.alpha {
            return Err(CstError::InvalidInput(format!(
                "gaussian exponents differ: {} vs {}",
                self.alpha, other.alpha
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, &-c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            out.add_term(*k, &c.scale(s));
        }
        out
    }

    /// `a · f` with `a` acting by left Clifford multiplication.
    pub fn left_mul(&self, a: &Multivector) -> Self {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            out.add_term(*k, &(a * c));
        }
        out
    }

    /// `f · a`.
    pub fn right_mul(&self, a: &Multivector) -> Self {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            out.add_term(*k, &(c * a));
        }
        out
    }

    /// `xⱼ · f` (axis `j` is 1-based).
    pub fn mul_coordinate(&self, j: usize) -> Self {
        assert!(j >= 1 && j <= self.m);
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            out.add_term(k.bumped(j - 1), c);
        }
        out
    }

    /// `x̲ · f = Σⱼ eⱼ xⱼ f`.
    pub fn left_mul_position(&self) -> Self {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            for j in 0..self.m {
                out.add_term(k.bumped(j), &c.left_mul_generator(j + 1));
            }
        }
        out
    }

    /// Scalar partial derivative `∂ⱼ` (1-based): `(∂ⱼP − 2αxⱼP)e^{−α|x|²}`.
    pub fn partial(&self, j: usize) -> Self {
        assert!(j >= 1 && j <= self.m);
        let a = j - 1;
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            let kj = k.get(a);
            if kj > 0 {
                out.add_term_scaled(k.lowered(a), c, Complex64::new(kj as f64, 0.0));
            }
            if self.alpha != 0.0 {
                out.add_term_scaled(k.bumped(a), c, Complex64::new(-2.0 * self.alpha, 0.0));
            }
        }
        out
    }

    /// The Dirac operator `D̲f = Σⱼ eⱼ·∂ⱼf`.
    pub fn dirac(&self) -> Self {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            for a in 0..self.m {
                let ec = c.left_mul_generator(a + 1);
                let kj = k.get(a);
                if kj > 0 {
                    out.add_term_scaled(k.lowered(a), &ec, Complex64::new(kj as f64, 0.0));
                }
                if self.alpha != 0.0 {
                    out.add_term_scaled(k.bumped(a), &ec, Complex64::new(-2.0 * self.alpha, 0.0));
                }
            }
        }
        out
    }

    /// Symbolic Laplacian `Σⱼ ∂ⱼ²f`.
    pub fn laplacian(&self) -> Self {
        let mut out = self.empty_like();
        for j in 1..=self.m {
            let d2 = self.partial(j).partial(j);
            for (k, c) in &d2.terms {
                out.add_term(*k, c);
            }
        }
        out
    }

    /// Exact heat evolution `e^{Δ/2}f = ρ₁ * f`.
    ///
    /// Per axis, `xⁿe^{−αx²}` maps to
    /// `(2β)^{−1/2} Σ_{i even} C(n,i)(i−1)!!(2β)^{−i/2} sⁿ⁻ⁱ xⁿ⁻ⁱ · e^{−α'x²}`
    /// with `β = ½ + α`, `s = 1/(1+2α)` and `α' = α/(1+2α)`.
    pub fn heat_halftime(&self) -> Self {
        let beta = 0.5 + self.alpha;
        let s = 1.0 / (1.0 + 2.0 * self.alpha);
        let q = 1.0 / (2.0 * beta);
        // applied once at the end so the cancellations below stay exact for
        // dyadic inputs
        let pref = (2.0 * beta).powf(-0.5 * self.m as f64);
        let new_alpha = self.alpha / (1.0 + 2.0 * self.alpha);

        let max_n = (0..self.m).map(|j| self.max_axis_degree(j)).max().unwrap_or(0);
        // table[n] = [(power, coefficient)] for the 1-D image of xⁿ
        let table: Vec<Vec<(u32, f64)>> = (0..=max_n)
            .map(|n| {
                let mut row = Vec::new();
                let mut t = 1.0; // C(n,i)(i-1)!! q^{i/2} at i = 0
                let mut i = 0usize;
                while i <= n {
                    let p = (n - i) as u32;
                    row.push((p, t * s.powi(p as i32)));
                    if i + 2 > n {
                        break;
                    }
                    t = t * ((n - i) * (n - i - 1)) as f64 / (i + 2) as f64 * q;
                    i += 2;
                }
                row
            })
            .collect();

        let mut out = GaussianPolynomial {
            m: self.m,
            alpha: new_alpha,
            terms: BTreeMap::new(),
        };
        for (k, c) in &self.terms {
            // tensor product of per-axis expansions
            let mut partial: Vec<(MultiIndex, f64)> = vec![(MultiIndex::default(), 1.0)];
            for j in 0..self.m {
                let row = &table[k.get(j) as usize];
                let mut next = Vec::with_capacity(partial.len() * row.len());
                for (idx, w) in &partial {
                    for &(p, cw) in row {
                        let mut nidx = *idx;
                        nidx.0[j] = p as u16;
                        next.push((nidx, w * cw));
                    }
                }
                partial = next;
            }
            for (idx, w) in partial {
                out.add_term_scaled(idx, c, Complex64::new(w, 0.0));
            }
        }
        for c in out.terms.values_mut() {
            *c = c.scale_real(pref);
        }
        out
    }

    /// Pointwise evaluation.
    pub fn eval(&self, x: &[f64]) -> Multivector {
        assert_eq!(x.len(), self.m, "point dimension mismatch");
        let mut out = Multivector::zero(self.m);
        if self.terms.is_empty() {
            return out;
        }
        let pows: Vec<Vec<f64>> = (0..self.m)
            .map(|j| powers(x[j], self.max_axis_degree(j)))
            .collect();
        for (k, c) in &self.terms {
            let w: f64 = (0..self.m).map(|j| pows[j][k.get(j) as usize]).product();
            out.add_scaled(c, Complex64::new(w, 0.0));
        }
        let r2: f64 = x.iter().map(|v| v * v).sum();
        out.scale_real((-self.alpha * r2).exp())
    }

    /// Evaluates on the tensor grid `axes[0] × … × axes[m−1]`.
    ///
    /// Output is flat, row-major in the axes (axis 1 slowest), with the
    /// `2ᵐ` blade coefficients of each point contiguous.
    pub fn eval_grid(&self, axes: &[&[f64]]) -> Vec<Complex64> {
        assert_eq!(axes.len(), self.m, "grid dimension mismatch");
        let mut dense = DenseCoefficients::new(
            self.m,
            self.alpha,
            (0..self.m).map(|j| self.max_axis_degree(j)).collect(),
        );
        dense.accumulate(self, Complex64::new(1.0, 0.0));
        dense.eval_grid(axes)
    }
}

/// Coefficients of a Gaussian polynomial laid out densely by exponent,
/// shape `(d₁+1) × … × (dₘ+1) × 2ᵐ`.
#[derive(Debug, Clone)]
pub(crate) struct DenseCoefficients {
    m: usize,
    alpha: f64,
    shape: Vec<usize>,
    data: Vec<Complex64>,
}

impl DenseCoefficients {
    pub(crate) fn new(m: usize, alpha: f64, max_degrees: Vec<usize>) -> Self {
        let shape: Vec<usize> = max_degrees.iter().map(|d| d + 1).collect();
        let len = shape.iter().product::<usize>() << m;
        DenseCoefficients {
            m,
            alpha,
            shape,
            data: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// `self += w · f`; `f` must fit the shape and share `α`.
    pub(crate) fn accumulate(&mut self, f: &GaussianPolynomial, w: Complex64) {
        debug_assert_eq!(f.alpha, self.alpha);
        let nb = 1usize << self.m;
        for (k, c) in &f.terms {
            let mut off = 0;
            for j in 0..self.m {
                off = off * self.shape[j] + k.get(j) as usize;
            }
            for (t, v) in self.data[off * nb..(off + 1) * nb].iter_mut().zip(c.coeffs()) {
                *t += v * w;
            }
        }
    }

    pub(crate) fn eval_grid(&self, axes: &[&[f64]]) -> Vec<Complex64> {
        let nb = 1usize << self.m;
        let npts: usize = axes.iter().map(|a| a.len()).product();
        let mut shape = self.shape.clone();
        let mut data = self.data.clone();
        // contract one axis at a time against its Vandermonde matrix
        for a in 0..self.m {
            let outer: usize = shape[..a].iter().product();
            let inner: usize = shape[a + 1..].iter().product::<usize>() * nb;
            let d = shape[a];
            let n = axes[a].len();
            let vander: Vec<Vec<f64>> = axes[a].iter().map(|&x| powers(x, d - 1)).collect();
            let mut next = vec![Complex64::new(0.0, 0.0); outer * n * inner];
            for o in 0..outer {
                for (i, vrow) in vander.iter().enumerate() {
                    let dst = &mut next[(o * n + i) * inner..(o * n + i + 1) * inner];
                    for (kk, &v) in vrow.iter().enumerate() {
                        if v == 0.0 {
                            continue;
                        }
                        let src = &data[(o * d + kk) * inner..(o * d + kk + 1) * inner];
                        for (t, s) in dst.iter_mut().zip(src) {
                            *t += s * v;
                        }
                    }
                }
            }
            shape[a] = n;
            data = next;
        }
        if self.alpha != 0.0 {
            let sq: Vec<Vec<f64>> = axes
                .iter()
                .map(|ax| ax.iter().map(|x| x * x).collect())
                .collect();
            let mut idx = vec![0usize; self.m];
            for p in 0..npts {
                let r2: f64 = (0..self.m).map(|j| sq[j][idx[j]]).sum();
                let g = (-self.alpha * r2).exp();
                for v in &mut data[p * nb..(p + 1) * nb] {
                    *v *= g;
                }
                for j in (0..self.m).rev() {
                    idx[j] += 1;
                    if idx[j] < axes[j].len() {
                        break;
                    }
                    idx[j] = 0;
                }
            }
        }
        data
    }
}

fn powers(x: f64, max: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(max + 1);
    let mut p = 1.0;
    for _ in 0..=max {
        v.push(p);
        p *= x;
    }
    v
}

/// `∫ xⁿ e^{−βx²} dx`.
fn gaussian_moment(n: u32, beta: f64) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let mut dfact = 1.0;
    let mut i = n as i64 - 1;
    while i > 1 {
        dfact *= i as f64;
        i -= 2;
    }
    dfact * (2.0 * beta).powf(-(n as f64) / 2.0) * (PI / beta).sqrt()
}

/// `∫_{ℝᵐ} (f(x), g(x)) dx` in closed form.
pub fn l2_inner(f: &GaussianPolynomial, g: &GaussianPolynomial) -> Result<Complex64> {
    if f.m != g.m {
        return Err(CstError::DimensionMismatch {
            left: f.m,
            right: g.m,
        });
    }
    if f.is_zero() || g.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let beta = f.alpha + g.alpha;
    if beta <= 0.0 {
        return Err(CstError::DivergentIntegral);
    }
    let max_n = (f.degree() + g.degree()) as usize;
    let moments: Vec<f64> = (0..=max_n as u32).map(|n| gaussian_moment(n, beta)).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, c) in &f.terms {
        for (l, d) in &g.terms {
            let mut w = 1.0;
            for j in 0..f.m {
                w *= moments[(k.get(j) + l.get(j)) as usize];
                if w == 0.0 {
                    break;
                }
            }
            if w != 0.0 {
                acc += inner_unchecked(c.coeffs(), d.coeffs()) * w;
            }
        }
    }
    Ok(acc)
}

/// Coefficients (low to high) of the physicists' Hermite polynomial `Hₙ`.
pub fn hermite_coefficients(n: u32) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0];
    for k in 1..n {
        let mut next = vec![0.0; k as usize + 2];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= 2.0 * k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_k(x) = H_{k₁}(x₁)⋯H_{kₘ}(xₘ)` with Gaussian exponent 0.
pub fn hermite_poly(k: &[u32]) -> Result<GaussianPolynomial> {
    let m = k.len();
    let deg: u32 = k.iter().sum();
    if deg > MAX_INPUT_DEGREE {
        return Err(CstError::DegreeTooLarge {
            degree: deg,
            max: MAX_INPUT_DEGREE,
        });
    }
    let mut out = GaussianPolynomial::zero(m, 0.0)?;
    let mut partial: Vec<(Vec<u32>, f64)> = vec![(Vec::new(), 1.0)];
    for &kj in k {
        let row = hermite_coefficients(kj);
        let mut next = Vec::new();
        for (idx, w) in &partial {
            for (p, &c) in row.iter().enumerate() {
                if c != 0.0 {
                    let mut nidx = idx.clone();
                    nidx.push(p as u32);
                    next.push((nidx, w * c));
                }
            }
        }
        partial = next;
    }
    let one = Multivector::one(m);
    for (idx, w) in partial {
        out.add_term_scaled(MultiIndex::new(&idx), &one, Complex64::new(w, 0.0));
    }
    Ok(out)
}

/// The Hermite function `φ_k = H_k(x)e^{−|x|²/2}`.
pub fn phi_k(k: &[u32]) -> Result<GaussianPolynomial> {
    let h = hermite_poly(k)?;
    Ok(GaussianPolynomial {
        m: h.m,
        alpha: 0.5,
        terms: h.terms,
    })
}

/// `‖φ_k‖² = π^{m/2} 2^{|k|} k!`.
pub fn phi_norm_sqr(k: &[u32]) -> f64 {
    let mi = MultiIndex::new(k);
    PI.powf(k.len() as f64 / 2.0) * 2f64.powi(mi.total() as i32) * mi.factorial()
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    k: Vec<u32>,
    coeff: Multivector,
}

#[derive(Serialize, Deserialize)]
struct GaussianPolynomialJson {
    m: usize,
    alpha: f64,
    terms: Vec<TermJson>,
}

impl Serialize for GaussianPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GaussianPolynomialJson {
            m: self.m,
            alpha: self.alpha,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| TermJson {
                    k: k.to_vec(self.m),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GaussianPolynomialJson::deserialize(d)?;
        GaussianPolynomial::from_terms(
            raw.m,
            raw.alpha,
            raw.terms.into_iter().map(|t| (t.k, t.coeff)),
        )
        .map_err(de::Error::custom)
    }
}
