#![allow(dead_code)]

use fredholm_core::{Complex64, MatrixElement, MonicMatrixPolynomial};
use nalgebra::DMatrix;
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniform-ish point of the closed unit disc.
pub fn unit_disc() -> impl Strategy<Value = Complex64> {
    (0.0..=1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r.sqrt(), t))
}

pub fn matrix(d: usize) -> impl Strategy<Value = MatrixElement> {
    prop::collection::vec(unit_disc(), d * d)
        .prop_map(move |v| MatrixElement::new(DMatrix::from_vec(d, d, v)).unwrap())
}

pub fn poly_with(n: usize, d: usize) -> impl Strategy<Value = MonicMatrixPolynomial> {
    prop::collection::vec(matrix(d), n).prop_map(|cs| MonicMatrixPolynomial::new(cs).unwrap())
}

pub fn poly(max_n: usize, max_d: usize) -> impl Strategy<Value = MonicMatrixPolynomial> {
    (1..=max_n, 1..=max_d).prop_flat_map(|(n, d)| poly_with(n, d))
}

/// Root whose modulus stays at least `gap` away from 1, with modulus in `[0, 3]`.
pub fn off_circle_root(gap: f64) -> impl Strategy<Value = Complex64> {
    prop_oneof![0.0..(1.0 - gap), (1.0 + gap)..3.0]
        .prop_flat_map(|m| (Just(m), 0.0..std::f64::consts::TAU))
        .prop_map(|(m, t)| Complex64::from_polar(m, t))
}

/// Greedy multiset match: every `a` has a distinct `b` within `tol`.
pub fn multiset_close(a: &[Complex64], b: &[Complex64], tol: impl Fn(Complex64) -> f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm()));
    for i in order {
        let best = (0..b.len())
            .filter(|&j| !used[j])
            .min_by(|&x, &y| (a[i] - b[x]).norm().total_cmp(&(a[i] - b[y]).norm()));
        match best {
            Some(j) if (a[i] - b[j]).norm() <= tol(a[i]) => used[j] = true,
            _ => return false,
        }
    }
    true
}
