//! Quadrature rules for the measure `dμ = π^{−1/2}e^{−x₀²}dx₀dx`.
//!
//! Gauss–Hermite nodes come from Newton's method on the orthonormal Hermite
//! recurrence, seeded with the usual asymptotic root estimates. Eigenvalue
//! methods lose the relative accuracy of the tiny outer weights, which
//! matters here because the integrands grow like `e^{2x₀K}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{CstError, Result};

/// Default number of Gauss–Hermite nodes.
pub const DEFAULT_HERMITE_NODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    /// `∫ g(x)e^{−x²}dx`; the weight is folded into the weights.
    GaussHermite,
    /// Uniform nodes on `[−L, L]` (applied per axis).
    TensorTrapezoid,
    /// Uniform nodes on `[0, 2π)` (applied per axis).
    TorusTrapezoid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// `n`-point Gauss–Hermite rule, nodes ascending.
    pub fn gauss_hermite(n: usize) -> Result<Self> {
        if n == 0 || n > 400 {
            return Err(CstError::InvalidInput(format!(
                "hermite node count must be in 1..=400, got {n}"
            )));
        }
        let (nodes, weights) = gauss_hermite_nodes(n);
        Ok(QuadratureRule {
            kind: QuadratureKind::GaussHermite,
            nodes,
            weights,
        })
    }

    /// Trapezoid rule on `[−L, L]` with spacing `h`; endpoints get half weight.
    pub fn tensor_trapezoid(half_width: f64, h: f64) -> Result<Self> {
        if !(half_width > 0.0 && h > 0.0 && half_width.is_finite()) {
            return Err(CstError::InvalidInput(format!(
                "trapezoid needs L > 0 and h > 0, got L={half_width}, h={h}"
            )));
        }
        let n = (2.0 * half_width / h).round() as usize;
        if n < 2 {
            return Err(CstError::InvalidInput("trapezoid needs at least 3 nodes".into()));
        }
        let h = 2.0 * half_width / n as f64;
        let nodes: Vec<f64> = (0..=n).map(|i| -half_width + i as f64 * h).collect();
        let mut weights = vec![h; n + 1];
        weights[0] = h / 2.0;
        weights[n] = h / 2.0;
        Ok(QuadratureRule {
            kind: QuadratureKind::TensorTrapezoid,
            nodes,
            weights,
        })
    }

    /// `n` equispaced nodes on `[0, 2π)`, exact for trigonometric
    /// polynomials of degree below `n`.
    pub fn torus_trapezoid(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(CstError::InvalidInput("torus rule needs n >= 1".into()));
        }
        let h = 2.0 * PI / n as f64;
        Ok(QuadratureRule {
            kind: QuadratureKind::TorusTrapezoid,
            nodes: (0..n).map(|i| i as f64 * h).collect(),
            weights: vec![h; n],
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ wᵢ g(xᵢ)`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)).sum()
    }
}

fn gauss_hermite_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    const PIM4: f64 = 0.751_125_544_464_942_5; // π^{-1/4}
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let half = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..half {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let (p1, p2) = hermite_orthonormal(n, z, PIM4);
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        // one extra step at the converged point refreshes the derivative
        let (p1, p2) = hermite_orthonormal(n, z, PIM4);
        let pp_new = (2.0 * nf).sqrt() * p2;
        if pp_new != 0.0 {
            z -= p1 / pp_new;
            pp = pp_new;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[half - 1] = 0.0;
    }
    x.reverse();
    w.reverse();
    (x, w)
}

/// Orthonormal Hermite values `(pₙ(z), pₙ₋₁(z))` for the weight `e^{−z²}`.
fn hermite_orthonormal(n: usize, z: f64, p0: f64) -> (f64, f64) {
    let mut p1 = p0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, p2)
}

/// One row of the Gauss–Hermite moment self-test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    /// The moment `∫x^{2j}e^{−x²}dx`.
    pub j: usize,
    pub computed: f64,
    pub reference: f64,
    pub relative_error: f64,
}

/// `(2j−1)!!·√π / 2ʲ`.
pub fn hermite_even_moment(j: usize) -> f64 {
    let mut v = PI.sqrt();
    for i in 1..=j {
        v *= (2 * i - 1) as f64 / 2.0;
    }
    v
}

/// Compares the rule's even moments for `j ≤ n − 1` against the closed form.
pub fn hermite_selftest(rule: &QuadratureRule) -> Vec<MomentCheck> {
    let n = rule.len();
    (0..n)
        .map(|j| {
            let computed = rule.integrate(|x| x.powi(2 * j as i32));
            let reference = hermite_even_moment(j);
            MomentCheck {
                j,
                computed,
                reference,
                relative_error: (computed - reference).abs() / reference,
            }
        })
        .collect()
}
