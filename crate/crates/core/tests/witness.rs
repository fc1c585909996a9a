mod common;

use common::*;
use fredholm_core::{
    companion_linearize, eigenvalues, find_witnesses, nonmonic_scan, scale_transform, Complex64,
    Error, MatrixElement, MonicMatrixPolynomial, NonMonicPencil,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn witness_points(p: &MonicMatrixPolynomial) -> Vec<Complex64> {
    find_witnesses(p, 1e-6)
        .unwrap()
        .witnesses
        .iter()
        .map(|w| w.z)
        .collect()
}

/// Coefficients of `det(zI - M)` by Faddeev-LeVerrier, ascending, leading 1.
fn char_poly(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = m.nrows();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut mk = DMatrix::<Complex64>::zeros(n, n);
    for k in 1..=n {
        let mut next = m * &mk;
        for i in 0..n {
            next[(i, i)] += coeffs[n - k + 1];
        }
        mk = next;
        let tr: Complex64 = (m * &mk).trace();
        coeffs[n - k] = -tr / k as f64;
    }
    coeffs
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

#[test]
fn witness_examples() {
    let a = MatrixElement::diagonal(&[c(2.0, 0.0), c(3.0, 0.0)]);
    let w = witness_points(&MonicMatrixPolynomial::linear(&a));
    assert!(multiset_close(&w, &[c(2.0, 0.0), c(3.0, 0.0)], |_| 1e-12));

    let p = MonicMatrixPolynomial::from_scalar_coeffs(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let report = find_witnesses(&p, 1e-8).unwrap();
    assert_eq!(report.count, 2);
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["witnesses"][0]["z"].as_array().unwrap().len(), 2);
    assert!(multiset_close(
        &witness_points(&p),
        &[c(0.0, 1.0), c(0.0, -1.0)],
        |_| 1e-12
    ));
}

#[test]
fn companion_examples() {
    let p = MonicMatrixPolynomial::from_scalar_coeffs(&[c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let ev = eigenvalues(&companion_linearize(&p).data).unwrap();
    assert!(multiset_close(&ev, &[c(1.0, 0.0), c(-1.0, 0.0)], |_| 1e-14));
}

#[test]
fn eigenvalue_examples() {
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0, 0.0), c(3.0, 0.0)]));
    assert!(multiset_close(
        &eigenvalues(&d).unwrap(),
        &[c(2.0, 0.0), c(3.0, 0.0)],
        |_| 1e-14
    ));
    let r = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
    assert!(multiset_close(
        &eigenvalues(&r).unwrap(),
        &[c(0.0, 1.0), c(0.0, -1.0)],
        |_| 1e-14
    ));
    assert!(matches!(
        eigenvalues(&DMatrix::zeros(2, 3)),
        Err(Error::InvalidArgument { .. })
    ));
}

#[test]
fn nonmonic_examples() {
    let nil =
        MatrixElement::from_rows(2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    let grid: Vec<Complex64> = (0..100)
        .map(|k| Complex64::from_polar(k as f64, 0.37 * k as f64))
        .collect();
    let scan = nonmonic_scan(&NonMonicPencil::new(nil), &grid).unwrap();
    assert!(scan.det_values.iter().all(|d| *d == c(1.0, 0.0)));
    assert!(scan.singular_points.is_empty());

    let scan = nonmonic_scan(&NonMonicPencil::new(MatrixElement::zeros(3)), &grid).unwrap();
    assert_eq!(scan.min_sigma, 1.0);

    let pencil = NonMonicPencil::new(MatrixElement::diagonal(&[c(2.0, 0.0), c(0.0, 0.0)]));
    let scan = nonmonic_scan(&pencil, &grid).unwrap();
    assert_eq!(scan.singular_points.len(), 1);
    assert!((scan.singular_points[0] - c(-0.5, 0.0)).norm() < 1e-15);
    assert!(pencil.evaluate(scan.singular_points[0]).sigma_min() <= 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn companion_char_poly_is_det_p(p in poly_with(3, 2), zs in prop::collection::vec(unit_disc(), 7)) {
        let cp = char_poly(&companion_linearize(&p).data);
        for z in zs {
            let z = z * 1.5;
            let det = p.evaluate(z).determinant();
            let chi = horner(&cp, z);
            prop_assert!((det - chi).norm() <= 1e-8 * det.norm().max(1.0), "{det} vs {chi}");
        }
    }

    #[test]
    fn eigenvalues_satisfy_vieta(m in matrix(8).prop_map(|a| a.into_matrix() * Complex64::new(2.0, 0.0))) {
        let ev = eigenvalues(&m).unwrap();
        prop_assert_eq!(ev.len(), 8);
        let sum: Complex64 = ev.iter().sum();
        let prod: Complex64 = ev.iter().product();
        let det = m.clone().determinant();
        prop_assert!((sum - m.trace()).norm() <= 1e-8 * m.norm());
        prop_assert!((prod - det).norm() <= 1e-8 * det.norm().max(1.0));
    }

    #[test]
    fn witness_count_and_residuals(p in poly(5, 4)) {
        let n = p.degree() as i32;
        let r = find_witnesses(&p, 1e-6).unwrap();
        prop_assert_eq!(r.count, p.degree() * p.dim());
        for w in &r.witnesses {
            prop_assert!(w.residual <= 1e-6 * (1.0 + w.z.norm()).powi(n));
        }
        let zs: Vec<f64> = r.witnesses.iter().map(|w| w.z.norm()).collect();
        prop_assert!(zs.windows(2).all(|q| q[0] <= q[1]));
    }

    #[test]
    fn witnesses_are_similarity_invariant(p in poly(3, 3), t in matrix(3)) {
        let d = p.dim();
        let t = t.into_matrix().resize(d, d, Complex64::new(0.0, 0.0)) + DMatrix::identity(d, d) * Complex64::new(2.0, 0.0);
        let tinv = t.clone().try_inverse().unwrap();
        let conj = MonicMatrixPolynomial::new(
            p.coeffs().iter().map(|a| MatrixElement::new(&t * a.matrix() * &tinv).unwrap()).collect(),
        ).unwrap();
        prop_assert!(multiset_close(&witness_points(&p), &witness_points(&conj), |z| 1e-6 * (1.0 + z.norm())));
    }

    #[test]
    fn degree_one_witnesses_are_the_spectrum(
        lambdas in prop::collection::vec(unit_disc(), 1..=6),
        seed in prop::collection::vec(unit_disc(), 36),
    ) {
        // a = V diag(lambda) V^{-1} with V = 2I + noise
        let d = lambdas.len();
        let v = DMatrix::from_fn(d, d, |i, j| seed[i * 6 + j]) + DMatrix::identity(d, d) * Complex64::new(2.0, 0.0);
        let vinv = v.clone().try_inverse().unwrap();
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(lambdas.clone()));
        let a = MatrixElement::new(&v * lambda * vinv).unwrap();
        let w = witness_points(&MonicMatrixPolynomial::linear(&a));
        prop_assert!(multiset_close(&w, &lambdas, |_| 1e-8));
        prop_assert!(multiset_close(&eigenvalues(a.matrix()).unwrap(), &lambdas, |_| 1e-8));
    }

    #[test]
    fn scaling_scales_witnesses(p in poly(4, 3)) {
        let base = witness_points(&p);
        for eps in [0.5, 0.1] {
            let q = scale_transform(&p, Complex64::new(eps, 0.0));
            let scaled: Vec<Complex64> = base.iter().map(|z| z * eps).collect();
            let got = witness_points(&q);
            prop_assert!(multiset_close(&got, &scaled, |z| 1e-6 * z.norm().max(1e-3)));
        }
    }
}
