//! The transform on the torus `𝕋ᵐ = ℝᵐ/2πℤᵐ`.
//!
//! A function is given by finitely many Fourier coefficients,
//! `f(x) = (2π)^{−m/2} Σ_k f_k e^{i(k,x)}`, and its transform is
//!
//! ```text
//! V(f)(x₀, x) = (2π)^{−m/2} Σ_k e^{−|k|²/2} e^{i(k,x)} e^{−ix₀k̲} f_k.
//! ```
//!
//! The `L²(𝕋ᵐ)` pairing is the coefficient pairing `Σ_k (f_k, h_k)`, which
//! is what Lebesgue measure on `[0, 2π)ᵐ` gives under this normalisation.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::clifford::{inner_unchecked, Multivector, OneVector, MAX_DIM};
use crate::error::{CstError, Result};
use crate::quadrature::QuadratureRule;
use crate::spectral::{clifford_exponential, GridSpec, SampledField, SpacetimeField};

/// Largest `|k|∞` accepted by quadrature-mode Parseval checks.
pub const QUADRATURE_MODE_LIMIT: i64 = 3;

/// Finitely supported Fourier data `k ↦ f_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusCoefficients {
    m: usize,
    modes: BTreeMap<Vec<i64>, Multivector>,
}

impl TorusCoefficients {
    pub fn new(m: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&m) {
            return Err(CstError::InvalidDimension(m));
        }
        Ok(TorusCoefficients {
            m,
            modes: BTreeMap::new(),
        })
    }

    pub fn from_modes<I>(m: usize, modes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Multivector)>,
    {
        let mut out = Self::new(m)?;
        for (k, c) in modes {
            out.insert(k, c)?;
        }
        Ok(out)
    }

    /// Adds `c` to the coefficient of mode `k`.
    pub fn insert(&mut self, k: Vec<i64>, c: Multivector) -> Result<()> {
        if k.len() != self.m {
            return Err(CstError::InvalidInput(format!(
                "mode {k:?} has length {} but m={}",
                k.len(),
                self.m
            )));
        }
        if c.dim() != self.m {
            return Err(CstError::DimensionMismatch {
                left: self.m,
                right: c.dim(),
            });
        }
        if !c.is_finite() {
            return Err(CstError::NonFinite(format!("coefficient of mode {k:?}")));
        }
        let entry = self.modes.entry(k.clone()).or_insert_with(|| Multivector::zero(c.dim()));
        *entry += &c;
        if entry.is_zero() {
            self.modes.remove(&k);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn modes(&self) -> impl Iterator<Item = (&Vec<i64>, &Multivector)> {
        self.modes.iter()
    }

    pub fn get(&self, k: &[i64]) -> Option<&Multivector> {
        self.modes.get(k)
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// `max |k|∞` over the support (0 when empty).
    pub fn max_mode(&self) -> i64 {
        self.modes
            .keys()
            .flat_map(|k| k.iter().map(|v| v.abs()))
            .max()
            .unwrap_or(0)
    }

    /// `f(x) = (2π)^{−m/2} Σ_k f_k e^{i(k,x)}`.
    pub fn eval(&self, x: &[f64]) -> Multivector {
        let norm = (2.0 * PI).powf(-(self.m as f64) / 2.0);
        let mut out = Multivector::zero(self.m);
        for (k, c) in &self.modes {
            let phase: f64 = k.iter().zip(x).map(|(&kj, &xj)| kj as f64 * xj).sum();
            out.add_scaled(c, Complex64::from_polar(norm, phase));
        }
        out
    }
}

/// `Σ_k (f_k, h_k)`.
pub fn torus_inner(f: &TorusCoefficients, h: &TorusCoefficients) -> Result<Complex64> {
    if f.m != h.m {
        return Err(CstError::DimensionMismatch {
            left: f.m,
            right: h.m,
        });
    }
    Ok(f
        .modes
        .iter()
        .filter_map(|(k, u)| h.modes.get(k).map(|v| inner_unchecked(u.coeffs(), v.coeffs())))
        .sum())
}

#[derive(Serialize, Deserialize)]
struct ModeJson {
    k: Vec<i64>,
    coeff: Multivector,
}

#[derive(Serialize, Deserialize)]
struct TorusJson {
    m: usize,
    modes: Vec<ModeJson>,
}

impl Serialize for TorusCoefficients {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TorusJson {
            m: self.m,
            modes: self
                .modes
                .iter()
                .map(|(k, c)| ModeJson {
                    k: k.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusCoefficients {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TorusJson::deserialize(d)?;
        TorusCoefficients::from_modes(raw.m, raw.modes.into_iter().map(|t| (t.k, t.coeff)))
            .map_err(de::Error::custom)
    }
}

/// `V(f)` for torus data; each mode carries its heat damping `e^{−|k|²/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusMonogenicField {
    m: usize,
    modes: Vec<(Vec<i64>, f64, Multivector)>,
}

pub fn torus_cst(f: &TorusCoefficients) -> TorusMonogenicField {
    TorusMonogenicField {
        m: f.m,
        modes: f
            .modes
            .iter()
            .map(|(k, c)| {
                let k2: f64 = k.iter().map(|&v| (v * v) as f64).sum();
                (k.clone(), (-k2 / 2.0).exp(), c.clone())
            })
            .collect(),
    }
}

impl TorusMonogenicField {
    pub fn dim(&self) -> usize {
        self.m
    }

    /// Per-mode values `e^{−|k|²/2}e^{−ix₀k̲}f_k` at fixed `x₀`.
    fn mode_values(&self, x0: f64) -> Vec<Multivector> {
        self.modes
            .iter()
            .map(|(k, damp, c)| {
                let kv = OneVector::new(k.iter().map(|&v| v as f64).collect());
                (&clifford_exponential(x0, &kv) * c).scale_real(*damp)
            })
            .collect()
    }

    pub fn eval(&self, x0: f64, x: &[f64]) -> Multivector {
        assert_eq!(x.len(), self.m, "point dimension mismatch");
        let norm = (2.0 * PI).powf(-(self.m as f64) / 2.0);
        let mut out = Multivector::zero(self.m);
        for ((k, _, _), v) in self.modes.iter().zip(self.mode_values(x0)) {
            let phase: f64 = k.iter().zip(x).map(|(&kj, &xj)| kj as f64 * xj).sum();
            out.add_scaled(&v, Complex64::from_polar(norm, phase));
        }
        out
    }

    /// The `x₀ = 0` restriction as torus data: `f_k ↦ e^{−|k|²/2}f_k`.
    pub fn heat_restriction(&self) -> TorusCoefficients {
        TorusCoefficients {
            m: self.m,
            modes: self
                .modes
                .iter()
                .map(|(k, d, c)| (k.clone(), c.scale_real(*d)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Samples on the periodic lattice `−π + 2πj/N`, one slice per `x₀`.
    pub fn sample(&self, points: usize, x0_values: &[f64]) -> Result<SpacetimeField> {
        let grid = GridSpec::new(self.m, PI, points)?;
        let slices = x0_values
            .par_iter()
            .map(|&t| SampledField::from_fn(grid, |x| self.eval(t, x)))
            .collect::<Result<Vec<_>>>()?;
        SpacetimeField::new(x0_values.to_vec(), slices)
    }
}

/// How [`torus_isometry_check`] evaluates `⟨Vf, Vh⟩_μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParsevalMode {
    /// Mode orthogonality in `x` and Gaussian integrals in `x₀`, in closed form.
    Analytic,
    /// Trapezoid in `x` and Gauss–Hermite in `x₀`.
    Quadrature { hermite_nodes: usize },
}

/// Result of a torus Parseval comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParsevalOutcome {
    pub transformed: Complex64,
    pub coefficient_pairing: Complex64,
    /// `√(‖f‖²‖h‖²)`, the natural scale for relative comparisons.
    pub scale: f64,
}

/// `⟨Vf, Vh⟩` under `dμ = π^{−1/2}e^{−x₀²}dx₀dx` on `ℝ × 𝕋ᵐ`.
pub fn torus_isometry_check(
    f: &TorusCoefficients,
    h: &TorusCoefficients,
    mode: ParsevalMode,
) -> Result<ParsevalOutcome> {
    let reference = torus_inner(f, h)?;
    let scale = (torus_inner(f, f)?.re * torus_inner(h, h)?.re).sqrt();
    let transformed = match mode {
        ParsevalMode::Analytic => analytic_pairing(f, h),
        ParsevalMode::Quadrature { hermite_nodes } => {
            let worst = f.max_mode().max(h.max_mode());
            if worst > QUADRATURE_MODE_LIMIT {
                return Err(CstError::ModeTooLarge {
                    max_abs: worst,
                    limit: QUADRATURE_MODE_LIMIT,
                });
            }
            quadrature_pairing(f, h, hermite_nodes)?
        }
    };
    Ok(ParsevalOutcome {
        transformed,
        coefficient_pairing: reference,
        scale,
    })
}

/// Per mode with `K = |k|`, `c = cosh(x₀K)`, `s = sinh(x₀K)`:
/// `(e^{−ix₀k̲}u, e^{−ix₀k̲}v) = c²(u,v) + s²(k̂u,k̂v) + (odd in x₀)`, and
/// `π^{−1/2}∫e^{−x₀²}c² = (e^{K²}+1)/2`, `π^{−1/2}∫e^{−x₀²}s² = (e^{K²}−1)/2`.
/// The damping `e^{−K²}` is folded in before anything can overflow.
fn analytic_pairing(f: &TorusCoefficients, h: &TorusCoefficients) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, u) in &f.modes {
        let Some(v) = h.modes.get(k) else { continue };
        let kv = OneVector::new(k.iter().map(|&x| x as f64).collect());
        let kk = kv.norm();
        let even = inner_unchecked(u.coeffs(), v.coeffs());
        let cosh_part = (1.0 + (-kk * kk).exp()) / 2.0;
        acc += even * cosh_part;
        if kk > 0.0 {
            let dir = kv.embed().scale_real(1.0 / kk);
            let ku = &dir * u;
            let kvv = &dir * v;
            let sinh_part = -(-kk * kk).exp_m1() / 2.0;
            acc += inner_unchecked(ku.coeffs(), kvv.coeffs()) * sinh_part;
        }
    }
    acc
}

fn quadrature_pairing(f: &TorusCoefficients, h: &TorusCoefficients, nodes: usize) -> Result<Complex64> {
    let m = f.m;
    let gh = QuadratureRule::gauss_hermite(nodes)?;
    let kmax = f.max_mode().max(h.max_mode()) as usize;
    let n = 4 * kmax + 4;
    let rule = QuadratureRule::torus_trapezoid(n)?;
    let total = n.pow(m as u32);
    if total > 1 << 20 {
        return Err(CstError::QuadratureBudget(format!("{total} lattice points")));
    }
    let vf = torus_cst(f);
    let vh = torus_cst(h);
    let cell: f64 = rule.weights[0].powi(m as i32);
    let nb = 1usize << m;
    let norm = (2.0 * PI).powf(-(m as f64) / 2.0);

    // phases e^{i(k,x)} on the lattice are shared by every node
    let points: Vec<Vec<f64>> = (0..total)
        .map(|mut p| {
            let mut x = vec![0.0; m];
            for j in (0..m).rev() {
                x[j] = rule.nodes[p % n];
                p /= n;
            }
            x
        })
        .collect();
    let phases = |field: &TorusMonogenicField| -> Vec<Vec<Complex64>> {
        points
            .iter()
            .map(|x| {
                field
                    .modes
                    .iter()
                    .map(|(k, _, _)| {
                        let ph: f64 = k.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum();
                        Complex64::from_polar(norm, ph)
                    })
                    .collect()
            })
            .collect()
    };
    let ph_f = phases(&vf);
    let ph_h = phases(&vh);

    let per_node: Vec<Complex64> = gh
        .nodes
        .par_iter()
        .zip(&gh.weights)
        .map(|(&t, &w)| {
            let mf = vf.mode_values(t);
            let mh = vh.mode_values(t);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut a = vec![Complex64::new(0.0, 0.0); nb];
            let mut b = vec![Complex64::new(0.0, 0.0); nb];
            for p in 0..total {
                a.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                b.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                for (ph, v) in ph_f[p].iter().zip(&mf) {
                    for (z, c) in a.iter_mut().zip(v.coeffs()) {
                        *z += ph * c;
                    }
                }
                for (ph, v) in ph_h[p].iter().zip(&mh) {
                    for (z, c) in b.iter_mut().zip(v.coeffs()) {
                        *z += ph * c;
                    }
                }
                acc += inner_unchecked(&a, &b);
            }
            acc * w * cell
        })
        .collect();
    Ok(per_node.into_iter().sum::<Complex64>() / PI.sqrt())
}
