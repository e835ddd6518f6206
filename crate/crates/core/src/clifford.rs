//! Dense arithmetic in the complex Clifford algebra ℂₘ.
//!
//! Generators `e₁,…,eₘ` satisfy `eᵢeⱼ + eⱼeᵢ = −2δᵢⱼ`. A basis blade `e_A`
//! is the ordered product of the generators in `A ⊂ {1,…,m}` and is
//! addressed by an `m`-bit mask: bit `j − 1` is set when `eⱼ` is a factor.
//! A [`Multivector`] stores all `2ᵐ` complex coefficients in mask order.
//!
//! ```
//! use monogenic_cst::clifford::{Multivector, OneVector};
//!
//! let x = OneVector::new(vec![3.0, 4.0]).embed();
//! let sq = &x * &x;
//! assert_eq!(sq, Multivector::scalar(2, (-25.0).into()));
//! ```

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{CstError, Result};

/// Largest supported number of generators.
pub const MAX_DIM: usize = 6;

pub(crate) type Coeffs = SmallVec<[Complex64; 8]>;

/// A basis blade `e_A`, encoded as a bitmask over the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BladeIndex(pub u32);

impl BladeIndex {
    pub const SCALAR: BladeIndex = BladeIndex(0);

    /// The blade of the single generator `eⱼ` (1-based).
    pub fn generator(j: usize) -> Self {
        debug_assert!((1..=MAX_DIM).contains(&j));
        BladeIndex(1 << (j - 1))
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    /// All blades of the algebra with `m` generators, in mask order.
    pub fn all(m: usize) -> impl Iterator<Item = BladeIndex> {
        (0..1u32 << m).map(BladeIndex)
    }

    /// Human-readable label, `1` for the scalar and `e13` for `e₁e₃`.
    pub fn label(self) -> String {
        if self.0 == 0 {
            return "1".to_string();
        }
        let mut s = String::from("e");
        for j in 0..MAX_DIM as u32 {
            if self.0 & (1 << j) != 0 {
                s.push_str(&(j + 1).to_string());
            }
        }
        s
    }
}

/// Sign of the product `e_A e_B = sign · e_{A△B}`.
///
/// The reordering sign counts the transpositions needed to sort the
/// concatenated index lists; every repeated generator contributes `eⱼ² = −1`.
#[inline]
pub fn blade_product_sign(a: BladeIndex, b: BladeIndex) -> f64 {
    let mut swaps = 0u32;
    let mut x = a.0 >> 1;
    while x != 0 {
        swaps += (x & b.0).count_ones();
        x >>= 1;
    }
    swaps += (a.0 & b.0).count_ones();
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn check_dim(m: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&m) {
        Ok(())
    } else {
        Err(CstError::InvalidDimension(m))
    }
}

/// An element of ℂₘ.
#[derive(Clone, PartialEq)]
pub struct Multivector {
    m: usize,
    coeffs: Coeffs,
}

impl Multivector {
    pub fn zero(m: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&m), "dimension {m} out of range");
        Multivector {
            m,
            coeffs: SmallVec::from_elem(Complex64::new(0.0, 0.0), 1 << m),
        }
    }

    pub fn scalar(m: usize, c: Complex64) -> Self {
        let mut v = Self::zero(m);
        v.coeffs[0] = c;
        v
    }

    pub fn one(m: usize) -> Self {
        Self::scalar(m, Complex64::new(1.0, 0.0))
    }

    pub fn blade(m: usize, blade: BladeIndex) -> Self {
        let mut v = Self::zero(m);
        v.coeffs[blade.0 as usize] = Complex64::new(1.0, 0.0);
        v
    }

    /// The generator `eⱼ` (1-based).
    pub fn basis_vector(m: usize, j: usize) -> Self {
        assert!(j >= 1 && j <= m, "generator e{j} out of range for m={m}");
        Self::blade(m, BladeIndex::generator(j))
    }

    /// Builds a multivector from `2ᵐ` coefficients in mask order.
    pub fn from_coeffs(m: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_dim(m)?;
        if coeffs.len() != 1 << m {
            return Err(CstError::InvalidInput(format!(
                "expected {} coefficients for m={m}, got {}",
                1 << m,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(CstError::NonFinite("multivector coefficients".into()));
        }
        Ok(Multivector {
            m,
            coeffs: SmallVec::from_vec(coeffs),
        })
    }

    pub(crate) fn from_slice_unchecked(m: usize, coeffs: &[Complex64]) -> Self {
        debug_assert_eq!(coeffs.len(), 1 << m);
        Multivector {
            m,
            coeffs: SmallVec::from_slice(coeffs),
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, blade: BladeIndex) -> Complex64 {
        self.coeffs[blade.0 as usize]
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// `(u, u)`, the squared hermitian norm.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Multivector {
            m: self.m,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Multivector {
            m: self.m,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Multivector, c: Complex64) {
        assert_eq!(self.m, other.m, "dimension mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *a += b * c;
        }
    }

    /// Left multiplication by the generator `eⱼ` (1-based).
    pub fn left_mul_generator(&self, j: usize) -> Self {
        let g = BladeIndex::generator(j);
        let mut out = Self::zero(self.m);
        for (c, &v) in self.coeffs.iter().enumerate() {
            if v.re != 0.0 || v.im != 0.0 {
                let b = BladeIndex(c as u32);
                out.coeffs[(c as u32 ^ g.0) as usize] += v * blade_product_sign(g, b);
            }
        }
        out
    }

    /// Right multiplication by the basis blade `e_A`.
    pub fn right_mul_blade(&self, a: BladeIndex) -> Self {
        let mut out = Self::zero(self.m);
        for (c, &v) in self.coeffs.iter().enumerate() {
            let b = BladeIndex(c as u32);
            out.coeffs[(c as u32 ^ a.0) as usize] += v * blade_product_sign(b, a);
        }
        out
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        write!(f, "Multivector(m={}: ", self.m)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}){}", c, BladeIndex(i as u32).label())?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

/// Geometric product, rejecting operands of different dimension.
pub fn geometric_product(u: &Multivector, v: &Multivector) -> Result<Multivector> {
    if u.m != v.m {
        return Err(CstError::DimensionMismatch {
            left: u.m,
            right: v.m,
        });
    }
    Ok(product_unchecked(u, v))
}

fn product_unchecked(u: &Multivector, v: &Multivector) -> Multivector {
    let mut out = Multivector::zero(u.m);
    for (a, &ua) in u.coeffs.iter().enumerate() {
        if ua.re == 0.0 && ua.im == 0.0 {
            continue;
        }
        for (b, &vb) in v.coeffs.iter().enumerate() {
            if vb.re == 0.0 && vb.im == 0.0 {
                continue;
            }
            let s = blade_product_sign(BladeIndex(a as u32), BladeIndex(b as u32));
            out.coeffs[a ^ b] += ua * vb * s;
        }
    }
    out
}

/// `Σ_A u_A · conj(v_A)`: linear in `u`, conjugate-linear in `v`.
pub fn hermitian_inner(u: &Multivector, v: &Multivector) -> Result<Complex64> {
    if u.m != v.m {
        return Err(CstError::DimensionMismatch {
            left: u.m,
            right: v.m,
        });
    }
    Ok(inner_unchecked(u.coeffs(), v.coeffs()))
}

#[inline]
pub(crate) fn inner_unchecked(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

impl Mul for &Multivector {
    type Output = Multivector;

    /// # Panics
    /// On a dimension mismatch; use [`geometric_product`] for a checked product.
    fn mul(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.m, rhs.m, "dimension mismatch in geometric product");
        product_unchecked(self, rhs)
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        &self * &rhs
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        Multivector {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(rhs.coeffs.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        &self + &rhs
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        Multivector {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(rhs.coeffs.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        &self - &rhs
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale_real(-1.0)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        -&self
    }
}

/// A real 1-vector `(x₁,…,xₘ)`, embedded as `Σ xⱼeⱼ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneVector(pub Vec<f64>);

impl OneVector {
    pub fn new(components: Vec<f64>) -> Self {
        OneVector(components)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn embed(&self) -> Multivector {
        embed_one_vector(self)
    }
}

/// `x ↦ Σ xⱼeⱼ`; the result squares to `−|x|²`.
pub fn embed_one_vector(x: &OneVector) -> Multivector {
    let mut v = Multivector::zero(x.dim());
    for (j, &xj) in x.0.iter().enumerate() {
        v.coeffs[1 << j] = Complex64::new(xj, 0.0);
    }
    v
}

#[derive(Serialize, Deserialize)]
struct MultivectorJson {
    m: usize,
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for Multivector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MultivectorJson {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multivector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MultivectorJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        Multivector::from_coeffs(raw.m, coeffs).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn generator_squares_to_minus_one() {
        let e1 = Multivector::basis_vector(1, 1);
        assert_eq!(&e1 * &e1, Multivector::scalar(1, c(-1.0, 0.0)));
    }

    #[test]
    fn unit_is_identity() {
        let u = Multivector::from_coeffs(2, vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0), c(4.0, 4.0)])
            .unwrap();
        assert_eq!(&Multivector::one(2) * &u, u);
        assert_eq!(&u * &Multivector::one(2), u);
    }

    #[test]
    fn bivector_times_generator() {
        let e1 = Multivector::basis_vector(2, 1);
        let e2 = Multivector::basis_vector(2, 2);
        let e12 = &e1 * &e2;
        assert_eq!(e12, Multivector::blade(2, BladeIndex(0b11)));
        assert_eq!(&e12 * &e2, -&e1);
    }

    #[test]
    fn anticommutation_exhaustive() {
        for m in 1..=MAX_DIM {
            for i in 1..=m {
                for j in 1..=m {
                    let ei = Multivector::basis_vector(m, i);
                    let ej = Multivector::basis_vector(m, j);
                    let s = &(&ei * &ej) + &(&ej * &ei);
                    let expect = if i == j { -2.0 } else { 0.0 };
                    assert_eq!(s, Multivector::scalar(m, c(expect, 0.0)), "m={m} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = Multivector::one(1);
        let b = Multivector::one(2);
        assert!(matches!(
            geometric_product(&a, &b),
            Err(CstError::DimensionMismatch { left: 1, right: 2 })
        ));
        assert!(hermitian_inner(&a, &b).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let e1 = Multivector::basis_vector(2, 1);
        let e2 = Multivector::basis_vector(2, 2);
        assert_eq!(hermitian_inner(&e1, &e1).unwrap(), c(1.0, 0.0));
        assert_eq!(hermitian_inner(&e1, &e2).unwrap(), c(0.0, 0.0));
        assert_eq!(hermitian_inner(&e1.scale(c(1.0, 1.0)), &e1).unwrap(), c(1.0, 1.0));
        // conjugate-linear in the second slot
        assert_eq!(hermitian_inner(&e1, &e1.scale(c(1.0, 1.0))).unwrap(), c(1.0, -1.0));
    }

    #[test]
    fn embedding_examples() {
        let x = OneVector::new(vec![3.0, 4.0]).embed();
        assert_eq!(x.coeff(BladeIndex(1)), c(3.0, 0.0));
        assert_eq!(x.coeff(BladeIndex(2)), c(4.0, 0.0));
        assert_eq!(&x * &x, Multivector::scalar(2, c(-25.0, 0.0)));
        assert!(OneVector::new(vec![0.0]).embed().is_zero());
        assert_eq!(OneVector::new(vec![1.0, 0.0, 0.0]).embed(), Multivector::basis_vector(3, 1));
    }

    #[test]
    fn generator_and_blade_fast_paths_match_product() {
        let u = Multivector::from_coeffs(
            3,
            (0..8).map(|i| c(i as f64 - 3.5, 0.25 * i as f64)).collect(),
        )
        .unwrap();
        for j in 1..=3 {
            assert_eq!(u.left_mul_generator(j), &Multivector::basis_vector(3, j) * &u);
        }
        for a in BladeIndex::all(3) {
            assert_eq!(u.right_mul_blade(a), &u * &Multivector::blade(3, a));
        }
    }

    #[test]
    fn json_layout() {
        let v = Multivector::from_coeffs(1, vec![c(1.0, 0.0), c(0.0, -2.0)]).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"m":1,"coeffs":[[1.0,0.0],[0.0,-2.0]]}"#);
        let back: Multivector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<Multivector>(r#"{"m":2,"coeffs":[[1,0]]}"#).is_err());
        assert!(serde_json::from_str::<Multivector>(r#"{"m":7,"coeffs":[]}"#).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(BladeIndex(0).label(), "1");
        assert_eq!(BladeIndex(0b101).label(), "e13");
    }
}
