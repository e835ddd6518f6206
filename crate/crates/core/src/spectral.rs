//! The Fourier-side realisation of the transform.
//!
//! With `f̂(p) = (2π)^{−m/2}∫e^{−i(p,x)}f(x)dx`, the transform is
//!
//! ```text
//! V(f)(x₀, x) = (2π)^{−m/2} ∫ e^{−|p|²/2} e^{i(p,x)} e^{−ix₀p̲} f̂(p) dp
//! ```
//!
//! where the Clifford exponential `e^{−ix₀p̲} = cosh(x₀|p|) − i sinh(x₀|p|)p̲/|p|`
//! multiplies `f̂(p)` from the left. [`cst_spectral`] evaluates this with
//! FFTs on a uniform grid.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::clifford::{blade_product_sign, BladeIndex, Multivector, OneVector};
use crate::error::{CstError, Result};
use crate::gaussian_poly::GaussianPolynomial;

/// Largest dimension accepted by the spectral path.
pub const MAX_SPECTRAL_DIM: usize = 4;

/// Samples on the boundary above this magnitude trigger a wrap-around warning.
pub const BOUNDARY_DECAY_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Uniform grid on `[−L, L)ᵐ` with `N` points per axis.
///
/// Sample `n` sits at `−L + n·h` with `h = 2L/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub m: usize,
    pub half_width: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(m: usize, half_width: f64, points: usize) -> Result<Self> {
        let g = GridSpec {
            m,
            half_width,
            points,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_SPECTRAL_DIM).contains(&self.m) {
            return Err(CstError::InvalidGrid(format!(
                "dimension {} outside 1..={MAX_SPECTRAL_DIM}",
                self.m
            )));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(CstError::InvalidGrid(format!(
                "half width must be positive, got {}",
                self.half_width
            )));
        }
        if self.points < 8 || !self.points.is_power_of_two() {
            return Err(CstError::InvalidGrid(format!(
                "points per axis must be a power of two >= 8, got {}",
                self.points
            )));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn axis(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points)
            .map(|n| -self.half_width + n as f64 * h)
            .collect()
    }

    /// Angular frequencies `2πk/(Nh)` in DFT order.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.points as i64;
        let dp = PI / self.half_width;
        (0..n)
            .map(|k| if k < n / 2 { k } else { k - n } as f64 * dp)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.m as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn blades(&self) -> usize {
        1 << self.m
    }

    /// Multi-index of flat sample `p` (axis 1 slowest).
    pub fn unravel(&self, mut p: usize) -> Vec<usize> {
        let mut idx = vec![0; self.m];
        for j in (0..self.m).rev() {
            idx[j] = p % self.points;
            p /= self.points;
        }
        idx
    }

    pub fn point(&self, p: usize) -> Vec<f64> {
        let h = self.spacing();
        self.unravel(p)
            .into_iter()
            .map(|i| -self.half_width + i as f64 * h)
            .collect()
    }
}

/// A ℂₘ-valued function sampled on a [`GridSpec`].
///
/// Values are stored flat: the `2ᵐ` coefficients of each sample are
/// contiguous and samples follow row-major axis order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl SampledField {
    pub fn zeros(grid: GridSpec) -> Self {
        SampledField {
            grid,
            values: vec![ZERO; grid.len() * grid.blades()],
        }
    }

    pub fn from_flat(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.len() * grid.blades() {
            return Err(CstError::InvalidGrid(format!(
                "expected {} coefficients, got {}",
                grid.len() * grid.blades(),
                values.len()
            )));
        }
        Ok(SampledField { grid, values })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> Multivector + Sync) -> Result<Self> {
        grid.validate()?;
        let nb = grid.blades();
        let mut values = vec![ZERO; grid.len() * nb];
        values
            .par_chunks_mut(nb)
            .enumerate()
            .for_each(|(p, out)| out.copy_from_slice(f(&grid.point(p)).coeffs()));
        Ok(SampledField { grid, values })
    }

    pub fn from_gaussian_poly(grid: GridSpec, f: &GaussianPolynomial) -> Result<Self> {
        grid.validate()?;
        if f.dim() != grid.m {
            return Err(CstError::DimensionMismatch {
                left: grid.m,
                right: f.dim(),
            });
        }
        let axis = grid.axis();
        let axes: Vec<&[f64]> = (0..grid.m).map(|_| axis.as_slice()).collect();
        Ok(SampledField {
            grid,
            values: f.eval_grid(&axes),
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn flat(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, p: usize) -> Multivector {
        let nb = self.grid.blades();
        Multivector::from_slice_unchecked(self.grid.m, &self.values[p * nb..(p + 1) * nb])
    }

    /// Largest sample norm.
    pub fn max_norm(&self) -> f64 {
        self.values
            .chunks(self.grid.blades())
            .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// Largest sample norm over points with some index `0` or `N − 1`.
    pub fn boundary_max_norm(&self) -> f64 {
        let n = self.grid.points;
        self.values
            .chunks(self.grid.blades())
            .enumerate()
            .filter(|(p, _)| self.grid.unravel(*p).iter().any(|&i| i == 0 || i == n - 1))
            .map(|(_, c)| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `f · a`, acting sample by sample.
    pub fn right_mul(&self, a: &Multivector) -> Self {
        let nb = self.grid.blades();
        let mut values = Vec::with_capacity(self.values.len());
        for chunk in self.values.chunks(nb) {
            let v = Multivector::from_slice_unchecked(self.grid.m, chunk);
            values.extend_from_slice((&v * a).coeffs());
        }
        SampledField {
            grid: self.grid,
            values,
        }
    }

    /// CSV rows `x₁,…,xₘ,re_1,im_1,re_e1,…`, optionally prefixed by `x0`.
    pub fn write_csv_rows(&self, x0: Option<f64>, w: &mut impl Write) -> std::io::Result<()> {
        let nb = self.grid.blades();
        for (p, chunk) in self.values.chunks(nb).enumerate() {
            let mut row = Vec::with_capacity(self.grid.m + 1 + 2 * nb);
            if let Some(t) = x0 {
                row.push(fmt_f64(t));
            }
            row.extend(self.grid.point(p).into_iter().map(fmt_f64));
            for z in chunk {
                row.push(fmt_f64(z.re));
                row.push(fmt_f64(z.im));
            }
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn write_csv(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "{}", csv_header(self.grid.m, false))?;
        self.write_csv_rows(None, w)
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}

pub(crate) fn csv_header(m: usize, with_x0: bool) -> String {
    let mut cols = Vec::new();
    if with_x0 {
        cols.push("x0".to_string());
    }
    cols.extend((1..=m).map(|j| format!("x{j}")));
    for b in BladeIndex::all(m) {
        let l = b.label();
        cols.push(format!("re_{l}"));
        cols.push(format!("im_{l}"));
    }
    cols.join(",")
}

#[derive(Serialize, Deserialize)]
struct SampledFieldJson {
    grid: GridSpec,
    values: Vec<Multivector>,
}

impl Serialize for SampledField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SampledFieldJson {
            grid: self.grid,
            values: (0..self.grid.len()).map(|p| self.value(p)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SampledField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SampledFieldJson::deserialize(d)?;
        raw.grid.validate().map_err(D::Error::custom)?;
        if raw.values.len() != raw.grid.len() {
            return Err(D::Error::custom(format!(
                "grid has {} points but {} values were given",
                raw.grid.len(),
                raw.values.len()
            )));
        }
        let mut flat = Vec::with_capacity(raw.grid.len() * raw.grid.blades());
        for (p, v) in raw.values.iter().enumerate() {
            if v.dim() != raw.grid.m {
                return Err(D::Error::custom(format!(
                    "value {p} has m={} but the grid has m={}",
                    v.dim(),
                    raw.grid.m
                )));
            }
            flat.extend_from_slice(v.coeffs());
        }
        Ok(SampledField {
            grid: raw.grid,
            values: flat,
        })
    }
}

/// Output of [`fourier_forward`]: samples of `f̂` on the frequency lattice
/// of the grid, in DFT order per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn flat(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, p: usize) -> Multivector {
        let nb = self.grid.blades();
        Multivector::from_slice_unchecked(self.grid.m, &self.values[p * nb..(p + 1) * nb])
    }

    /// Frequency vector of flat sample `p`.
    pub fn frequency(&self, p: usize) -> Vec<f64> {
        let freqs = self.grid.frequencies();
        self.grid.unravel(p).into_iter().map(|i| freqs[i]).collect()
    }
}

/// `V(f)` sampled on a list of `x₀` slices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeField {
    pub grid: GridSpec,
    pub x0_values: Vec<f64>,
    pub slices: Vec<SampledField>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SpacetimeField {
    pub fn new(x0_values: Vec<f64>, slices: Vec<SampledField>) -> Result<Self> {
        if slices.is_empty() || slices.len() != x0_values.len() {
            return Err(CstError::InvalidInput(format!(
                "{} slices for {} x0 values",
                slices.len(),
                x0_values.len()
            )));
        }
        check_x0(&x0_values)?;
        let grid = slices[0].grid;
        if slices.iter().any(|s| s.grid != grid) {
            return Err(CstError::InvalidGrid("slices use different grids".into()));
        }
        Ok(SpacetimeField {
            grid,
            x0_values,
            slices,
            warnings: Vec::new(),
        })
    }

    pub fn write_csv(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "{}", csv_header(self.grid.m, true))?;
        for (t, s) in self.x0_values.iter().zip(&self.slices) {
            s.write_csv_rows(Some(*t), w)?;
        }
        Ok(())
    }
}

fn check_x0(x0: &[f64]) -> Result<()> {
    if x0.iter().any(|t| !t.is_finite()) {
        return Err(CstError::NonFinite("x0 values".into()));
    }
    if x0.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CstError::InvalidInput("x0 values must be strictly increasing".into()));
    }
    Ok(())
}

/// The pair `(χ₊, χ₋)` with `χ± = ½(1 ± ip̲/|p|)`.
pub fn chi_projectors(p: &OneVector) -> Result<(Multivector, Multivector)> {
    let r = p.norm();
    if r == 0.0 || !r.is_finite() {
        return Err(CstError::SingularDirection);
    }
    let half = Multivector::scalar(p.dim(), Complex64::new(0.5, 0.0));
    let dir = p.embed().scale(Complex64::new(0.0, 0.5 / r));
    Ok((&half + &dir, &half - &dir))
}

/// Scalar and vector weights `(c, s)` with `e^{−ix₀p̲} = c + s·p̲`.
///
/// `s = −i sinh(x₀|p|)/|p|`; for tiny `|p|` the ratio is replaced by its
/// Taylor expansion so the zero frequency needs no special casing.
#[inline]
fn exponential_weights(x0: f64, r: f64) -> (f64, f64) {
    let t = x0 * r;
    let c = t.cosh();
    let sinh_over_r = if r < 1e-8 {
        x0 * (1.0 + t * t / 6.0)
    } else {
        t.sinh() / r
    };
    (c, -sinh_over_r)
}

/// The Clifford exponential `e^{−ix₀p̲} = cosh(x₀|p|) − i sinh(x₀|p|)p̲/|p|`.
pub fn clifford_exponential(x0: f64, p: &OneVector) -> Multivector {
    let (c, s) = exponential_weights(x0, p.norm());
    let mut e = p.embed().scale(Complex64::new(0.0, s));
    e.coeffs_mut()[0] = Complex64::new(c, 0.0);
    e
}

/// The monogenic plane wave `e^{i(p,x)}·e^{−ix₀p̲}`.
pub fn plane_wave(x0: f64, x: &[f64], p: &OneVector) -> Multivector {
    assert_eq!(x.len(), p.dim(), "point dimension mismatch");
    let phase: f64 = x.iter().zip(&p.0).map(|(a, b)| a * b).sum();
    clifford_exponential(x0, p).scale(Complex64::from_polar(1.0, phase))
}

/// `out = c·v + Σⱼ sⱼ·eⱼv` for a coefficient slice `v`.
fn left_apply_vector(v: &[Complex64], c: Complex64, s: &[Complex64], out: &mut [Complex64]) {
    for (o, x) in out.iter_mut().zip(v) {
        *o = c * x;
    }
    for (j, &sj) in s.iter().enumerate() {
        if sj == ZERO {
            continue;
        }
        let g = BladeIndex(1 << j);
        for (b, &x) in v.iter().enumerate() {
            if x != ZERO {
                let sign = blade_product_sign(g, BladeIndex(b as u32));
                out[b ^ (1 << j)] += sj * x * sign;
            }
        }
    }
}

/// Applies the 1-D FFT along every axis, followed by the per-axis factor.
fn transform_axes(
    data: &mut [Complex64],
    grid: &GridSpec,
    fft: &Arc<dyn Fft<f64>>,
    factor: &[Complex64],
) {
    let n = grid.points;
    let nb = grid.blades();
    let total = grid.len();
    let mut line = vec![ZERO; n];
    let mut scratch = vec![ZERO; fft.get_inplace_scratch_len()];
    for a in 0..grid.m {
        let stride = n.pow((grid.m - 1 - a) as u32);
        let outer = total / (n * stride);
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * n * stride + inner;
                for b in 0..nb {
                    for (i, l) in line.iter_mut().enumerate() {
                        *l = data[(base + i * stride) * nb + b];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (i, l) in line.iter().enumerate() {
                        data[(base + i * stride) * nb + b] = l * factor[i];
                    }
                }
            }
        }
    }
}

/// Per-axis factor `h/√(2π)·e^{−ipₖx_first}`; with `x_first = −L` the phase is `(−1)ᵏ`.
fn forward_factor(grid: &GridSpec) -> Vec<Complex64> {
    let n = grid.points as i64;
    let scale = grid.spacing() / (2.0 * PI).sqrt();
    (0..n)
        .map(|k| {
            let kk = if k < n / 2 { k } else { k - n };
            Complex64::new(if kk % 2 == 0 { scale } else { -scale }, 0.0)
        })
        .collect()
}

/// Per-axis factor applied before the inverse DFT: `Δp/√(2π)·e^{ipₖx_first}`.
fn inverse_factor(grid: &GridSpec) -> Vec<Complex64> {
    let dp = PI / grid.half_width;
    let scale = dp / (2.0 * PI).sqrt();
    let n = grid.points as i64;
    (0..n)
        .map(|k| {
            let kk = if k < n / 2 { k } else { k - n };
            Complex64::new(if kk % 2 == 0 { scale } else { -scale }, 0.0)
        })
        .collect()
}

/// Continuum-normalised forward transform `f ↦ f̂`.
pub fn fourier_forward(f: &SampledField) -> Spectrum {
    let grid = f.grid;
    let fft = FftPlanner::new().plan_fft_forward(grid.points);
    let mut values = f.values.clone();
    transform_axes(&mut values, &grid, &fft, &forward_factor(&grid));
    Spectrum { grid, values }
}

/// Inverse of [`fourier_forward`].
pub fn fourier_inverse(s: &Spectrum) -> SampledField {
    let fft = FftPlanner::new().plan_fft_inverse(s.grid.points);
    SampledField {
        grid: s.grid,
        values: inverse_with(&s.values, &s.grid, &fft),
    }
}

fn inverse_with(values: &[Complex64], grid: &GridSpec, fft: &Arc<dyn Fft<f64>>) -> Vec<Complex64> {
    // the phase must precede the DFT, so apply it along each axis by hand
    let mut data = values.to_vec();
    let factor = inverse_factor(grid);
    let n = grid.points;
    let nb = grid.blades();
    for (p, chunk) in data.chunks_mut(nb).enumerate() {
        let mut w = Complex64::new(1.0, 0.0);
        let mut q = p;
        for _ in 0..grid.m {
            w *= factor[q % n];
            q /= n;
        }
        for z in chunk {
            *z *= w;
        }
    }
    let ones = vec![Complex64::new(1.0, 0.0); n];
    transform_axes(&mut data, grid, fft, &ones);
    data
}

/// Options for [`cst_spectral`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    /// The input is embedded in a box this many times larger (zero filled)
    /// before transforming, then cropped back. Transformed fields spread
    /// like `e^{−(|x|²−x₀²)/4}`, so without padding the periodic images of
    /// the DFT overlap the box.
    pub padding: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions { padding: 2 }
    }
}

/// `V(f)` on each requested slice, by Fourier multiplication.
pub fn cst_spectral(f: &SampledField, x0_values: &[f64]) -> Result<SpacetimeField> {
    cst_spectral_with(f, x0_values, SpectralOptions::default())
}

pub fn cst_spectral_with(
    f: &SampledField,
    x0_values: &[f64],
    opts: SpectralOptions,
) -> Result<SpacetimeField> {
    if x0_values.is_empty() {
        return Err(CstError::InvalidInput("no x0 values requested".into()));
    }
    check_x0(x0_values)?;
    if !f.is_finite() {
        return Err(CstError::NonFinite("sampled input field".into()));
    }
    if opts.padding == 0 || !opts.padding.is_power_of_two() {
        return Err(CstError::InvalidInput(format!(
            "padding factor must be a power of two, got {}",
            opts.padding
        )));
    }
    let grid = f.grid;
    let mut warnings = Vec::new();
    let edge = f.boundary_max_norm();
    if edge > BOUNDARY_DECAY_TOL {
        warnings.push(format!(
            "input is {edge:e} at the box boundary (> {BOUNDARY_DECAY_TOL:e}); periodic wrap-around may corrupt the result"
        ));
    }
    for &t in x0_values {
        if t.abs() > grid.half_width / 2.0 {
            warnings.push(format!(
                "|x0| = {} exceeds L/2 = {}; aliasing may exceed tolerance",
                t.abs(),
                grid.half_width / 2.0
            ));
        }
    }

    let big = GridSpec {
        m: grid.m,
        half_width: grid.half_width * opts.padding as f64,
        points: grid.points * opts.padding,
    };
    let nb = grid.blades();
    let offset = (big.points - grid.points) / 2;
    let map_small_to_big = |p: usize| -> usize {
        let mut q = 0;
        for i in grid.unravel(p) {
            q = q * big.points + i + offset;
        }
        q
    };
    let mut padded = vec![ZERO; big.len() * nb];
    for p in 0..grid.len() {
        let q = map_small_to_big(p);
        padded[q * nb..(q + 1) * nb].copy_from_slice(&f.values[p * nb..(p + 1) * nb]);
    }
    let spec = fourier_forward(&SampledField {
        grid: big,
        values: padded,
    });

    let freqs = big.frequencies();
    let pvecs: Vec<Vec<f64>> = (0..big.len())
        .map(|p| big.unravel(p).into_iter().map(|i| freqs[i]).collect())
        .collect();
    let inv = FftPlanner::new().plan_fft_inverse(big.points);

    let slices: Vec<SampledField> = x0_values
        .par_iter()
        .map(|&t| {
            let mut mult = vec![ZERO; big.len() * nb];
            let mut svec = vec![ZERO; big.m];
            for (p, pv) in pvecs.iter().enumerate() {
                let r2: f64 = pv.iter().map(|x| x * x).sum();
                let r = r2.sqrt();
                // e^{-r²/2}·cosh and e^{-r²/2}·sinh/r without overflow
                let (c, s) = damped_weights(t, r);
                for (sj, &pj) in svec.iter_mut().zip(pv) {
                    *sj = Complex64::new(0.0, s * pj);
                }
                left_apply_vector(
                    &spec.values[p * nb..(p + 1) * nb],
                    Complex64::new(c, 0.0),
                    &svec,
                    &mut mult[p * nb..(p + 1) * nb],
                );
            }
            let full = inverse_with(&mult, &big, &inv);
            let mut out = vec![ZERO; grid.len() * nb];
            for p in 0..grid.len() {
                let q = map_small_to_big(p);
                out[p * nb..(p + 1) * nb].copy_from_slice(&full[q * nb..(q + 1) * nb]);
            }
            SampledField { grid, values: out }
        })
        .collect();

    if slices.iter().any(|s| !s.is_finite()) {
        return Err(CstError::NonFinite("transformed field".into()));
    }
    Ok(SpacetimeField {
        grid,
        x0_values: x0_values.to_vec(),
        slices,
        warnings,
    })
}

/// `(e^{−r²/2}cosh(x₀r), −e^{−r²/2}sinh(x₀r)/r)`.
fn damped_weights(x0: f64, r: f64) -> (f64, f64) {
    if r < 1e-8 {
        let (c, s) = exponential_weights(x0, r);
        let d = (-r * r / 2.0).exp();
        return (c * d, s * d);
    }
    let a = -r * r / 2.0;
    let plus = (a + x0 * r).exp();
    let minus = (a - x0 * r).exp();
    ((plus + minus) / 2.0, -(plus - minus) / (2.0 * r))
}

/// Max over interior samples of `|∂₀F + D̲F|` by central differences.
pub fn weyl_residual(field: &SpacetimeField) -> Result<f64> {
    let n0 = field.x0_values.len();
    if n0 < 3 {
        return Err(CstError::TooFewSlices(n0));
    }
    let dt = field.x0_values[1] - field.x0_values[0];
    if field
        .x0_values
        .windows(2)
        .any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.abs())
    {
        return Err(CstError::InvalidInput("x0 slices are not uniformly spaced".into()));
    }
    let grid = field.grid;
    let n = grid.points;
    let nb = grid.blades();
    let h = grid.spacing();
    let strides: Vec<usize> = (0..grid.m).map(|a| n.pow((grid.m - 1 - a) as u32)).collect();

    let worst = (1..n0 - 1)
        .into_par_iter()
        .map(|s| {
            let prev = &field.slices[s - 1].values;
            let cur = &field.slices[s].values;
            let next = &field.slices[s + 1].values;
            let mut worst = 0.0f64;
            let mut acc = vec![ZERO; nb];
            for p in 0..grid.len() {
                let idx = grid.unravel(p);
                if idx.iter().any(|&i| i == 0 || i == n - 1) {
                    continue;
                }
                for b in 0..nb {
                    acc[b] = (next[p * nb + b] - prev[p * nb + b]) / (2.0 * dt);
                }
                for a in 0..grid.m {
                    let up = (p + strides[a]) * nb;
                    let dn = (p - strides[a]) * nb;
                    let g = BladeIndex(1 << a);
                    for b in 0..nb {
                        let d = (cur[up + b] - cur[dn + b]) / (2.0 * h);
                        let sign = blade_product_sign(g, BladeIndex(b as u32));
                        acc[b ^ (1 << a)] += d * sign;
                    }
                }
                let r = acc.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                worst = worst.max(r);
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// `|∂₀F + D̲F|` at one point by central differences of step `h`.
pub fn pointwise_weyl_residual(
    f: impl Fn(f64, &[f64]) -> Multivector,
    x0: f64,
    x: &[f64],
    h: f64,
) -> f64 {
    let mut acc = (&f(x0 + h, x) - &f(x0 - h, x)).scale_real(0.5 / h);
    let mut y = x.to_vec();
    for j in 0..x.len() {
        y[j] = x[j] + h;
        let up = f(x0, &y);
        y[j] = x[j] - h;
        let dn = f(x0, &y);
        y[j] = x[j];
        acc += &(&up - &dn).scale_real(0.5 / h).left_mul_generator(j + 1);
    }
    acc.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian_poly::phi_k;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn projector_example_m1() {
        let (p, q) = chi_projectors(&OneVector::new(vec![1.0])).unwrap();
        assert_eq!(p, Multivector::from_coeffs(1, vec![c(0.5, 0.0), c(0.0, 0.5)]).unwrap());
        assert_eq!(q, Multivector::from_coeffs(1, vec![c(0.5, 0.0), c(0.0, -0.5)]).unwrap());
        assert_eq!(&p + &q, Multivector::one(1));
        assert_eq!(&p * &p, p);
        assert!(matches!(
            chi_projectors(&OneVector::new(vec![0.0, 0.0])),
            Err(CstError::SingularDirection)
        ));
    }

    #[test]
    fn exponential_examples() {
        let p = OneVector::new(vec![0.3, -1.2]);
        assert_eq!(clifford_exponential(0.0, &p), Multivector::one(2));
        assert_eq!(clifford_exponential(2.5, &OneVector::new(vec![0.0, 0.0])), Multivector::one(2));
        let t = 0.7;
        let e = clifford_exponential(t, &OneVector::new(vec![1.0]));
        assert_abs_diff_eq!(e.coeffs()[0].re, t.cosh(), epsilon = 1e-15);
        assert_abs_diff_eq!(e.coeffs()[1].im, -t.sinh(), epsilon = 1e-15);
        let w = plane_wave(t, &[0.0], &OneVector::new(vec![1.0]));
        assert_eq!(w, e);
    }

    #[test]
    fn exponential_matches_projector_form() {
        let p = OneVector::new(vec![0.4, 1.1, -0.3]);
        let (cp, cm) = chi_projectors(&p).unwrap();
        let t = -0.9;
        let r = p.norm();
        let via = &cp.scale_real((-t * r).exp()) + &cm.scale_real((t * r).exp());
        let direct = clifford_exponential(t, &p);
        assert!((&via - &direct).norm() < 1e-14);
    }

    #[test]
    fn plane_wave_is_monogenic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = OneVector::new((0..2).map(|_| rng.random_range(-2.0..2.0)).collect());
            let x: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
            let t = rng.random_range(-1.0..1.0);
            let r = pointwise_weyl_residual(|a, y| plane_wave(a, y, &p), t, &x, 1e-4);
            assert!(r <= 1e-6, "residual {r}");
        }
    }

    #[test]
    fn gaussian_is_self_dual() {
        let grid = GridSpec::new(1, 10.0, 256).unwrap();
        let f = SampledField::from_fn(grid, |x| {
            Multivector::scalar(1, c((-x[0] * x[0] / 2.0).exp(), 0.0))
        })
        .unwrap();
        let s = fourier_forward(&f);
        let mut worst = 0.0f64;
        for p in 0..grid.len() {
            let k = s.frequency(p)[0];
            worst = worst.max((s.value(p).coeffs()[0] - (-k * k / 2.0).exp()).norm());
        }
        assert!(worst <= 1e-8, "{worst:e}");
    }

    #[test]
    fn round_trip_is_identity() {
        let grid = GridSpec::new(2, 3.0, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let vals: Vec<Complex64> = (0..grid.len() * 4)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let f = SampledField::from_flat(grid, vals).unwrap();
        let back = fourier_inverse(&fourier_forward(&f));
        for (a, b) in back.flat().iter().zip(f.flat()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn heat_slice_of_phi0() {
        let grid = GridSpec::new(1, 8.0, 128).unwrap();
        let f = SampledField::from_gaussian_poly(grid, &phi_k(&[0]).unwrap()).unwrap();
        let out = cst_spectral(&f, &[0.0]).unwrap();
        assert!(out.warnings.is_empty(), "{:?}", out.warnings);
        let mut worst = 0.0f64;
        for p in 0..grid.len() {
            let x = grid.point(p)[0];
            let exact = 2f64.powf(-0.5) * (-x * x / 4.0).exp();
            worst = worst.max((out.slices[0].value(p).coeffs()[0] - exact).norm());
        }
        assert!(worst <= 1e-8, "{worst:e}");
    }

    #[test]
    fn zero_in_zero_out() {
        let grid = GridSpec::new(2, 4.0, 16).unwrap();
        let out = cst_spectral(&SampledField::zeros(grid), &[-1.0, 0.0, 1.0]).unwrap();
        assert!(out.slices.iter().all(|s| s.max_norm() == 0.0));
    }

    #[test]
    fn commutes_with_right_multiplication() {
        let grid = GridSpec::new(2, 6.0, 32).unwrap();
        let f = SampledField::from_gaussian_poly(grid, &phi_k(&[1, 0]).unwrap()).unwrap();
        let a = Multivector::from_coeffs(2, vec![c(0.5, 1.0), c(0.0, 0.0), c(-1.0, 0.2), c(0.3, 0.0)])
            .unwrap();
        let lhs = cst_spectral(&f.right_mul(&a), &[0.8]).unwrap();
        let rhs = cst_spectral(&f, &[0.8]).unwrap().slices[0].right_mul(&a);
        for (x, y) in lhs.slices[0].flat().iter().zip(rhs.flat()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_nan_and_warns_on_slow_decay() {
        let grid = GridSpec::new(1, 2.0, 16).unwrap();
        let mut vals = vec![c(1.0, 0.0); 32];
        let f = SampledField::from_flat(grid, vals.clone()).unwrap();
        let out = cst_spectral(&f, &[0.0, 1.5]).unwrap();
        assert_eq!(out.warnings.len(), 2);
        vals[3] = c(f64::NAN, 0.0);
        let f = SampledField::from_flat(grid, vals).unwrap();
        assert!(matches!(cst_spectral(&f, &[0.0]), Err(CstError::NonFinite(_))));
    }

    #[test]
    fn constant_field_has_zero_residual() {
        let grid = GridSpec::new(2, 1.0, 8).unwrap();
        let s = SampledField::from_fn(grid, |_| Multivector::scalar(2, c(3.0, -1.0))).unwrap();
        let f = SpacetimeField::new(vec![0.0, 0.1, 0.2], vec![s.clone(), s.clone(), s]).unwrap();
        assert_eq!(weyl_residual(&f).unwrap(), 0.0);
        let two = SpacetimeField::new(vec![0.0, 0.1], vec![f.slices[0].clone(), f.slices[0].clone()])
            .unwrap();
        assert!(matches!(weyl_residual(&two), Err(CstError::TooFewSlices(2))));
    }

    #[test]
    fn csv_layout() {
        let grid = GridSpec::new(1, 1.0, 8).unwrap();
        let s = SampledField::zeros(grid);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x1,re_1,im_1,re_e1,im_e1\n"));
        assert_eq!(text.lines().count(), 9);
    }

    #[test]
    fn json_round_trip() {
        let grid = GridSpec::new(1, 2.0, 8).unwrap();
        let f = SampledField::from_gaussian_poly(grid, &phi_k(&[1]).unwrap()).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let back: SampledField = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
