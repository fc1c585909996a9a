use serde::Serialize;

use fredholm_core::{
    fredholm_index, nonmonic_scan, Complex64, MatrixElement, MonicMatrixPolynomial, NonMonicPencil,
    Result,
};

#[derive(Serialize)]
pub struct ShiftCase {
    pub m: usize,
    pub index: Option<i64>,
    pub expected: i64,
    pub agreement: bool,
}

#[derive(Serialize)]
pub struct LambdaCase {
    pub lambda: [f64; 2],
    pub index: Option<i64>,
    pub expected: i64,
    pub agreement: bool,
}

#[derive(Serialize)]
pub struct NilpotentCase {
    pub grid_points: usize,
    pub max_radius: f64,
    pub max_det_deviation: f64,
    pub min_sigma: f64,
    pub singular_points: usize,
}

#[derive(Serialize)]
pub struct DemoReport {
    pub shifts: Vec<ShiftCase>,
    pub shift_minus_lambda: Vec<LambdaCase>,
    pub nilpotent_pencil: NilpotentCase,
    pub all_passed: bool,
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn run() -> Result<DemoReport> {
    let mut shifts = Vec::new();
    for m in 1..=6 {
        let r = fredholm_index(&MonicMatrixPolynomial::monomial(m, 1)?, ONE)?;
        shifts.push(ShiftCase {
            m,
            index: r.index_winding,
            expected: -(m as i64),
            agreement: r.agreement,
        });
    }

    let lambdas = [
        (Complex64::new(0.0, 0.0), -1),
        (Complex64::new(0.5, 0.0), -1),
        (Complex64::new(0.0, 0.9), -1),
        (Complex64::new(-0.3, 0.4), -1),
        (Complex64::new(2.0, 0.0), 0),
        (Complex64::new(-1.5, 0.0), 0),
        (Complex64::new(0.0, 3.0), 0),
    ];
    let mut shift_minus_lambda = Vec::new();
    for (lambda, expected) in lambdas {
        let r = fredholm_index(&MonicMatrixPolynomial::from_roots(&[lambda])?, ONE)?;
        shift_minus_lambda.push(LambdaCase {
            lambda: [lambda.re, lambda.im],
            index: r.index_winding,
            expected,
            agreement: r.agreement,
        });
    }

    let zero = Complex64::new(0.0, 0.0);
    let a = MatrixElement::from_rows(2, &[zero, ONE, zero, zero])?;
    let steps = 32;
    let max_radius = 100.0;
    let grid: Vec<Complex64> = (1..=steps)
        .flat_map(|i| {
            (0..steps).map(move |j| {
                Complex64::from_polar(
                    max_radius * i as f64 / steps as f64,
                    std::f64::consts::TAU * j as f64 / steps as f64,
                )
            })
        })
        .collect();
    let scan = nonmonic_scan(&NonMonicPencil::new(a), &grid)?;
    let nilpotent_pencil = NilpotentCase {
        grid_points: grid.len(),
        max_radius,
        max_det_deviation: scan
            .det_values
            .iter()
            .map(|d| (d - ONE).norm())
            .fold(0.0, f64::max),
        min_sigma: scan.min_sigma,
        singular_points: scan.singular_points.len(),
    };

    let all_passed = shifts
        .iter()
        .all(|c| c.index == Some(c.expected) && c.agreement)
        && shift_minus_lambda
            .iter()
            .all(|c| c.index == Some(c.expected) && c.agreement)
        && nilpotent_pencil.max_det_deviation <= 1e-10
        && nilpotent_pencil.singular_points == 0;
    Ok(DemoReport {
        shifts,
        shift_minus_lambda,
        nilpotent_pencil,
        all_passed,
    })
}
