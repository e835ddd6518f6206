use num_complex::Complex64;
use proptest::prelude::*;

use monogenic_cst::ck::{ck_extend, CkBox, Truncation};
use monogenic_cst::clifford::{blade_product_sign, hermitian_inner, BladeIndex, Multivector, OneVector};
use monogenic_cst::gaussian_poly::{l2_inner, GaussianPolynomial};
use monogenic_cst::spectral::{chi_projectors, clifford_exponential, pointwise_weyl_residual};
use monogenic_cst::torus::{torus_isometry_check, ParsevalMode, TorusCoefficients};

fn multivector(m: usize) -> impl Strategy<Value = Multivector> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 1 << m).prop_map(move |v| {
        Multivector::from_coeffs(m, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
    })
}

fn mv_triple() -> impl Strategy<Value = (Multivector, Multivector, Multivector)> {
    (1usize..=6).prop_flat_map(|m| (multivector(m), multivector(m), multivector(m)))
}

fn one_vector(m: usize) -> impl Strategy<Value = OneVector> {
    prop::collection::vec(-5.0..5.0f64, m)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-6)
        .prop_map(OneVector::new)
}

fn gaussian_poly(m: usize, max_deg: u32) -> impl Strategy<Value = GaussianPolynomial> {
    let term = (prop::collection::vec(0..=max_deg, m), multivector(m));
    (prop::sample::select(vec![0.25, 0.5, 1.0]), prop::collection::vec(term, 1..4))
        .prop_map(move |(alpha, terms)| GaussianPolynomial::from_terms(m, alpha, terms).unwrap())
}

fn bare_poly(m: usize) -> impl Strategy<Value = GaussianPolynomial> {
    let term = (prop::collection::vec(0..=3u32, m), multivector(m));
    prop::collection::vec(term, 1..4).prop_map(move |terms| GaussianPolynomial::from_terms(m, 0.0, terms).unwrap())
}

proptest! {
    #[test]
    fn product_associative_and_distributive((u, v, w) in mv_triple()) {
        let scale = 1.0 + u.norm() * v.norm() * w.norm();
        prop_assert!((&(&(&u * &v) * &w) - &(&u * &(&v * &w))).norm() <= 1e-12 * scale);
        let lhs = &u * &(&v + &w);
        let rhs = &(&u * &v) + &(&u * &w);
        prop_assert!((&lhs - &rhs).norm() <= 1e-12 * scale);
    }

    #[test]
    fn blade_products_follow_sign(m in 1usize..=6, a in 0u32..64, b in 0u32..64) {
        let mask = (1u32 << m) - 1;
        let (a, b) = (BladeIndex(a & mask), BladeIndex(b & mask));
        let p = &Multivector::blade(m, a) * &Multivector::blade(m, b);
        let expect = Multivector::blade(m, BladeIndex(a.0 ^ b.0)).scale_real(blade_product_sign(a, b));
        prop_assert_eq!(p, expect);
    }

    #[test]
    fn inner_product_hermitian((u, v, _w) in mv_triple()) {
        let a = hermitian_inner(&u, &v).unwrap();
        let b = hermitian_inner(&v, &u).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
        prop_assert!((hermitian_inner(&u, &u).unwrap().re - u.norm_sqr()).abs() <= 1e-12 * (1.0 + u.norm_sqr()));
    }

    #[test]
    fn projector_identities(p in (1usize..=4).prop_flat_map(one_vector), x0 in -2.0..2.0f64) {
        let m = p.dim();
        let (cp, cm) = chi_projectors(&p).unwrap();
        prop_assert!((&(&cp * &cp) - &cp).norm() <= 1e-12);
        prop_assert!((&(&cp + &cm) - &Multivector::one(m)).norm() <= 1e-12);
        // e^{−ix₀p̲} = e^{−x₀|p|}χ₊ + e^{x₀|p|}χ₋
        let r = p.norm();
        let split = &cp.scale_real((-x0 * r).exp()) + &cm.scale_real((x0 * r).exp());
        let e = clifford_exponential(x0, &p);
        prop_assert!((&split - &e).norm() <= 1e-12 * e.norm());
    }

    #[test]
    fn dirac_squares_to_minus_laplacian(f in (1usize..=3).prop_flat_map(|m| gaussian_poly(m, 4))) {
        let dd = f.dirac().dirac();
        let lap = f.laplacian().scale(Complex64::new(-1.0, 0.0));
        prop_assert!(dd.sub(&lap).unwrap().max_coeff() <= 1e-11 * (1.0 + f.max_coeff()));
    }

    #[test]
    fn heat_commutes_with_derivatives(f in (1usize..=3).prop_flat_map(|m| gaussian_poly(m, 4)), j in 0usize..3) {
        let j = 1 + j % f.dim();
        let a = f.partial(j).heat_halftime();
        let b = f.heat_halftime().partial(j);
        prop_assert!(a.sub(&b).unwrap().max_coeff() <= 1e-12 * (1.0 + f.max_coeff()));
    }

    #[test]
    fn l2_inner_hermitian_and_positive(
        (f, g) in (1usize..=2).prop_flat_map(|m| (gaussian_poly(m, 3), gaussian_poly(m, 3)))
    ) {
        let a = l2_inner(&f, &g).unwrap();
        let b = l2_inner(&g, &f).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-10 * (1.0 + a.norm()));
        let n = l2_inner(&f, &f).unwrap();
        prop_assert!(n.re >= 0.0 && n.im.abs() <= 1e-10 * (1.0 + n.re));
    }

    #[test]
    fn grid_and_point_evaluation_agree(f in (1usize..=2).prop_flat_map(|m| gaussian_poly(m, 5))) {
        let axis = [-1.5, -0.25, 0.0, 0.75, 2.0];
        let axes: Vec<&[f64]> = (0..f.dim()).map(|_| &axis[..]).collect();
        let grid = f.eval_grid(&axes);
        let nb = 1 << f.dim();
        for (p, chunk) in grid.chunks(nb).enumerate() {
            let x: Vec<f64> = if f.dim() == 1 { vec![axis[p]] } else { vec![axis[p / 5], axis[p % 5]] };
            let v = f.eval(&x);
            for (a, b) in chunk.iter().zip(v.coeffs()) {
                prop_assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
            }
        }
    }

    #[test]
    fn polynomial_extension_is_exact_and_monogenic(
        f in (1usize..=3).prop_flat_map(bare_poly),
        x0 in -1.0..1.0f64,
        xs in prop::collection::vec(-1.0..1.0f64, 3),
    ) {
        let series = ck_extend(&f, Truncation::Tolerance(1e-12), CkBox::new(1.0, 1.0).unwrap()).unwrap();
        prop_assert!(series.order() <= f.degree() as usize + 1);
        prop_assert!(series.slice(0.0).sub(&f).unwrap().is_zero());
        let x = &xs[..f.dim()];
        let r = pointwise_weyl_residual(|t, y| series.eval(t, y), x0, x, 1e-4);
        prop_assert!(r <= 1e-6 * (1.0 + f.max_coeff()));
    }

    #[test]
    fn torus_parseval_random(m in 1usize..=3, modes in prop::collection::vec((prop::collection::vec(-8i64..=8, 3), (-1.0..1.0f64, -1.0..1.0f64)), 1..6)) {
        let mut f = TorusCoefficients::new(m).unwrap();
        for (k, (a, b)) in &modes {
            f.insert(k[..m].to_vec(), Multivector::scalar(m, Complex64::new(*a, *b))).unwrap();
        }
        let o = torus_isometry_check(&f, &f, ParsevalMode::Analytic).unwrap();
        prop_assert!((o.transformed - o.coefficient_pairing).norm() <= 1e-12);
    }

    #[test]
    fn json_round_trips(f in (1usize..=3).prop_flat_map(|m| gaussian_poly(m, 4))) {
        let s = serde_json::to_string(&f).unwrap();
        let back: GaussianPolynomial = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(&back, &f);
        let t = f.terms().next().unwrap().1.clone();
        let s = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<Multivector>(&s).unwrap(), t);
    }
}
