//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p fredholm-cli --test acceptance -- --nocapture`;
//! the harness is plain `main`, so output is never captured.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use fredholm_core::{
    apply_operator, decay_profile, eigenvalues, epsilon_sweep, find_witnesses, fredholm_index,
    injectivity_certificate, nonmonic_scan, subspace_index_sample, Complex64, FiniteSequence,
    MatrixElement, MonicMatrixPolynomial, NonMonicPencil, SamplerConfig,
};

const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const ORACLE_BUDGET: Duration = Duration::from_secs(30);
const WITNESS_BUDGET: Duration = Duration::from_secs(60);
const DECAY_BUDGET: Duration = Duration::from_secs(120);

const WITNESS_TOL: f64 = 1e-6;
const SPECTRUM_TOL: f64 = 1e-8;
const BRACKET_REL_WIDTH: f64 = 1e-6;
const CERTIFICATE_SLACK: f64 = 1e-10;
const DECAY_SIZES: [usize; 4] = [64, 128, 256, 512];
const RATE_TOL: f64 = 0.1;
const DET_TOL: f64 = 1e-10;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) / std::f64::consts::SQRT_2
}

fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(d, d, |_, _| normal(rng))
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, d: usize) -> MonicMatrixPolynomial {
    let coeffs = (0..n)
        .map(|_| MatrixElement::new(random_matrix(rng, d)).unwrap())
        .collect();
    MonicMatrixPolynomial::new(coeffs).unwrap()
}

fn polar(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    let r = rng.random_range(lo..hi);
    Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

fn within(start: Instant, budget: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    if t < budget {
        Ok(t)
    } else {
        Err(format!("took {t:.2?}, budget {budget:?}"))
    }
}

/// Every element of `got` within `tol` of a distinct element of `want`.
fn multiset_match(got: &[Complex64], want: &[Complex64], tol: f64) -> bool {
    if got.len() != want.len() {
        return false;
    }
    let mut used = vec![false; want.len()];
    got.iter().all(|g| {
        let best = want
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .min_by(|a, b| (a.1 - g).norm().total_cmp(&(b.1 - g).norm()));
        match best {
            Some((i, w)) if (w - g).norm() <= tol => {
                used[i] = true;
                true
            }
            _ => false,
        }
    })
}

fn index_of(p: &MonicMatrixPolynomial, eps: f64) -> Result<Option<i64>, String> {
    fredholm_index(p, c(eps, 0.0))
        .map(|r| r.index_winding)
        .map_err(|e| e.to_string())
}

fn golden_anchors() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    let inside = [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.9), c(-0.3, 0.4)];
    let outside = [c(2.0, 0.0), c(-1.5, 0.0), c(0.0, 3.0)];
    for (lambdas, want) in [(&inside[..], -1), (&outside[..], 0)] {
        for &lambda in lambdas {
            let p = MonicMatrixPolynomial::from_roots(&[lambda]).unwrap();
            let got = index_of(&p, 1.0)?;
            if got != Some(want) {
                return Err(format!("S_1 - ({lambda}): index {got:?}, want {want}"));
            }
            cases += 1;
        }
    }
    for m in 1..=6 {
        let p = MonicMatrixPolynomial::monomial(m, 1).unwrap();
        let got = index_of(&p, 1.0)?;
        if got != Some(-(m as i64)) {
            return Err(format!("S_{m}: index {got:?}, want {}", -(m as i64)));
        }
        cases += 1;
    }
    let t = within(start, GOLDEN_BUDGET)?;
    Ok(format!("{cases} cases in {t:.2?}"))
}

fn winding_vs_root_count() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(2);
    for trial in 0..100 {
        let n = rng.random_range(1..=8);
        let roots: Vec<Complex64> = (0..n)
            .map(|_| {
                if rng.random_bool(0.5) {
                    polar(&mut rng, 0.0, 0.95)
                } else {
                    polar(&mut rng, 1.05, 3.0)
                }
            })
            .collect();
        let inside = roots.iter().filter(|r| r.norm() < 1.0).count() as i64;
        let p = MonicMatrixPolynomial::from_roots(&roots).unwrap();
        let got = index_of(&p, 1.0)?;
        if got != Some(-inside) {
            return Err(format!(
                "trial {trial}: winding index {got:?}, want {}",
                -inside
            ));
        }
    }
    let t = within(start, ORACLE_BUDGET)?;
    Ok(format!("100 trials in {t:.2?}"))
}

fn witnesses_exist() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(3);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let n = rng.random_range(1..=5);
        let d = rng.random_range(1..=4);
        let p = random_poly(&mut rng, n, d);
        let report = find_witnesses(&p, WITNESS_TOL).map_err(|e| format!("trial {trial}: {e}"))?;
        if report.count != n * d {
            return Err(format!(
                "trial {trial}: {} witnesses, want {}",
                report.count,
                n * d
            ));
        }
        for w in &report.witnesses {
            let bound = WITNESS_TOL * (1.0 + w.z.norm()).powi(n as i32);
            let sigma = p.evaluate(w.z).sigma_min();
            if sigma > bound {
                return Err(format!(
                    "trial {trial}: sigma_min {sigma:e} at {} exceeds {bound:e}",
                    w.z
                ));
            }
            worst = worst.max(sigma / bound);
        }
    }
    let t = within(start, WITNESS_BUDGET)?;
    Ok(format!(
        "100 polynomials, worst sigma/bound {worst:.1e}, {t:.2?}"
    ))
}

fn spectrum_of_linear() -> Outcome {
    let mut rng = rng(4);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let d = rng.random_range(1..=6);
        let lambda: Vec<Complex64> = (0..d).map(|_| normal(&mut rng)).collect();
        let v = random_matrix(&mut rng, d);
        let v_inv = v
            .clone()
            .try_inverse()
            .ok_or("singular eigenvector basis")?;
        let a = &v * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(lambda.clone())) * v_inv;
        let p = MonicMatrixPolynomial::linear(&MatrixElement::new(a.clone()).unwrap());
        let got: Vec<Complex64> = find_witnesses(&p, WITNESS_TOL)
            .map_err(|e| format!("trial {trial}: {e}"))?
            .witnesses
            .iter()
            .map(|w| w.z)
            .collect();
        let eig = eigenvalues(&a).map_err(|e| e.to_string())?;
        if !multiset_match(&got, &lambda, SPECTRUM_TOL) || !multiset_match(&got, &eig, SPECTRUM_TOL)
        {
            return Err(format!(
                "trial {trial}: witnesses {got:?}, spectrum {lambda:?}"
            ));
        }
        for g in &got {
            let nearest = lambda
                .iter()
                .map(|l| (l - g).norm())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(nearest);
        }
    }
    Ok(format!("50 matrices, worst distance {worst:.1e}"))
}

fn sweep_reproduces_mechanism() -> Outcome {
    let mut rng = rng(5);
    let mut brackets = 0;
    for trial in 0..20 {
        let n = rng.random_range(1..=3);
        let d = rng.random_range(1..=2);
        let p = random_poly(&mut rng, n, d);
        let roots =
            eigenvalues(&fredholm_core::companion_linearize(&p).data).map_err(|e| e.to_string())?;
        let (rmin, rmax) = roots
            .iter()
            .map(|r| r.norm())
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
                (lo.min(r), hi.max(r))
            });
        // critical eps sit at 1 / |root|
        let lo = 0.1 / rmax;
        let hi = 10.0 / rmin.max(1e-3);
        let grid: Vec<f64> = (0..48)
            .map(|i| lo * (hi / lo).powf(i as f64 / 47.0))
            .collect();
        let sweep = epsilon_sweep(&p, &grid).map_err(|e| format!("trial {trial}: {e}"))?;
        let first = sweep.indices[0].index_winding;
        if first != Some(-((n * d) as i64)) {
            return Err(format!(
                "trial {trial}: index {first:?} at smallest eps, want {}",
                -((n * d) as i64)
            ));
        }
        for crit in &sweep.critical_eps {
            if crit.hi - crit.lo > BRACKET_REL_WIDTH * crit.lo {
                return Err(format!(
                    "trial {trial}: bracket [{}, {}] too wide",
                    crit.lo, crit.hi
                ));
            }
            brackets += 1;
        }
        for (a, b) in sweep.segments() {
            if a >= b {
                continue;
            }
            let mid = (a * b).sqrt();
            let want = index_of(&p, mid)?;
            for t in [0.25, 0.75] {
                let e = a * (b / a).powf(t);
                if index_of(&p, e)? != want {
                    return Err(format!("trial {trial}: index changes inside ({a}, {b})"));
                }
            }
            for (e, r) in sweep.eps_values.iter().zip(&sweep.indices) {
                if *e > a && *e < b && r.index_winding != want {
                    return Err(format!(
                        "trial {trial}: grid eps {e} disagrees with midpoint {mid}"
                    ));
                }
            }
        }
    }
    Ok(format!("20 sweeps, {brackets} brackets"))
}

fn random_sequence(rng: &mut ChaCha8Rng, d: usize) -> FiniteSequence {
    let len = rng.random_range(1..=24);
    let items = (0..len)
        .map(|_| {
            let scale = rng.random_range(0.0..2.0f64).powi(3);
            MatrixElement::new(random_matrix(rng, d) * c(scale, 0.0)).unwrap()
        })
        .collect();
    FiniteSequence::new(d, items).unwrap()
}

fn certificate_soundness() -> Outcome {
    let mut rng = rng(6);
    let mut issued = 0;
    let mut attempts = 0;
    let mut min_slack = f64::INFINITY;
    while issued < 20 {
        attempts += 1;
        if attempts > 1000 {
            return Err(format!("only {issued} certificates issued"));
        }
        let n = rng.random_range(1..=4);
        let d = rng.random_range(1..=3);
        let p = random_poly(&mut rng, n, d);
        let budget: f64 = p.coeffs().iter().map(|a| a.norm()).sum();
        let eps = polar(&mut rng, 0.0, 1.2 / budget.max(1.0));
        let Some(k) = injectivity_certificate(&p, eps) else {
            continue;
        };
        issued += 1;
        for _ in 0..200 {
            let x = random_sequence(&mut rng, d);
            let qx = apply_operator(&p, eps, &x).map_err(|e| e.to_string())?;
            let slack = qx.l1_norm() - (k * x.l1_norm() - CERTIFICATE_SLACK);
            if slack < 0.0 {
                return Err(format!(
                    "violation: |Qx| = {}, k |x| = {}",
                    qx.l1_norm(),
                    k * x.l1_norm()
                ));
            }
            min_slack = min_slack.min(slack);
        }
    }
    Ok(format!(
        "{issued} certificates x 200 sequences, min slack {min_slack:.2e}"
    ))
}

fn decay_signature() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(7);
    let mut rates = Vec::new();
    let mut instances = 0;
    for k in 0..=2usize {
        for rep in 0..3 {
            let outside = rng.random_range(1..=2) - usize::from(k == 2 && rep == 0);
            let mut roots: Vec<Complex64> = Vec::new();
            while roots.len() < k {
                let r = polar(&mut rng, 0.2, 0.9);
                if roots.iter().all(|s| (s - r).norm() > 0.1) {
                    roots.push(r);
                }
            }
            for _ in 0..outside {
                roots.push(polar(&mut rng, 1.2, 2.5));
            }
            let p = MonicMatrixPolynomial::from_roots(&roots).unwrap();
            let prof = decay_profile(&p, &DECAY_SIZES).map_err(|e| format!("{roots:?}: {e}"))?;
            if prof.decaying_tracks != k {
                return Err(format!(
                    "{roots:?}: {} decaying tracks, want {k}; rates {:?}",
                    prof.decaying_tracks, prof.fitted_rates
                ));
            }
            if k == 1 {
                let want = roots[0].norm();
                let got = prof.fitted_rates[0];
                if (got - want).abs() > RATE_TOL {
                    return Err(format!("{roots:?}: rate {got}, want {want} +- {RATE_TOL}"));
                }
                rates.push(format!("{got:.3}/{want:.3}"));
            }
            instances += 1;
        }
    }
    let t = within(start, DECAY_BUDGET)?;
    Ok(format!(
        "{instances} instances, k=1 rate/modulus {}, {t:.2?}",
        rates.join(" ")
    ))
}

fn nilpotent_pencil() -> Outcome {
    let a =
        MatrixElement::from_rows(2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    let grid: Vec<Complex64> = (0..1000)
        .map(|i| {
            let r = 100.0 * ((i / 40) as f64 + 1.0) / 25.0;
            Complex64::from_polar(r, std::f64::consts::TAU * (i % 40) as f64 / 40.0)
        })
        .collect();
    let scan = nonmonic_scan(&NonMonicPencil::new(a), &grid).map_err(|e| e.to_string())?;
    let dev = scan
        .det_values
        .iter()
        .map(|d| (d - c(1.0, 0.0)).norm())
        .fold(0.0f64, f64::max);
    if scan.det_values.len() != 1000 || dev > DET_TOL {
        return Err(format!("max |det - 1| = {dev:e}"));
    }
    if !scan.singular_points.is_empty() {
        return Err(format!("witnesses reported: {:?}", scan.singular_points));
    }
    Ok(format!(
        "1000 points, max |det - 1| {dev:.1e}, min sigma {:.2e}",
        scan.min_sigma
    ))
}

fn bounded_index_sampler() -> Outcome {
    let hist =
        subspace_index_sample(3, 500, &SamplerConfig::gaussian(9)).map_err(|e| e.to_string())?;
    let total: usize = hist.counts.values().sum::<usize>() + hist.non_fredholm_count;
    if hist.trials != 500 || total != 500 {
        return Err(format!("{total} of 500 samples accounted for"));
    }
    if let Some(bad) = hist.counts.keys().find(|k| !(-3..=0).contains(*k)) {
        return Err(format!("index {bad} outside [-3, 0]"));
    }
    Ok(format!(
        "counts {:?}, non-Fredholm {}",
        hist.counts, hist.non_fredholm_count
    ))
}

fn strip_wall_time(doc: &str) -> String {
    let key = "\"wall_time\":";
    let Some(at) = doc.find(key) else {
        return doc.to_owned();
    };
    let tail = &doc[at + key.len()..];
    let end = tail.find(['}', ',']).unwrap_or(tail.len());
    format!("{}{}", &doc[..at], &tail[end..])
}

fn cli_determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("fredholm-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let poly = dir.join("p.json");
    std::fs::write(
        &poly,
        r#"{"degree":2,"dim":1,"coeffs":[[[[0.1,0]]],[[[-0.7,0.2]]]]}"#,
    )
    .map_err(|e| e.to_string())?;
    let poly = poly.to_str().unwrap().to_owned();
    let csv = |name: &str| -> String { dir.join(name).to_str().unwrap().to_owned() };
    let runs: BTreeMap<&str, Vec<String>> = BTreeMap::from([
        ("demo", vec!["demo".into()]),
        (
            "sample-index",
            vec![
                "sample-index".into(),
                "--degree".into(),
                "3".into(),
                "--trials".into(),
                "200".into(),
                "--seed".into(),
                "11".into(),
            ],
        ),
        (
            "sweep",
            vec![
                "sweep".into(),
                "--poly".into(),
                poly.clone(),
                "--eps-min".into(),
                "0.1".into(),
                "--eps-max".into(),
                "20".into(),
                "--steps".into(),
                "40".into(),
                "--seed".into(),
                "11".into(),
                "--out".into(),
                csv("sweep.csv"),
            ],
        ),
        (
            "decay",
            vec![
                "decay".into(),
                "--poly".into(),
                poly.clone(),
                "--sizes".into(),
                "16,32,64".into(),
                "--seed".into(),
                "11".into(),
                "--out".into(),
                csv("decay.csv"),
            ],
        ),
    ]);
    let bin = PathBuf::from(env!("CARGO_BIN_EXE_fredholm"));
    for (name, args) in &runs {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let out = Command::new(&bin)
                .args(args)
                .output()
                .map_err(|e| e.to_string())?;
            if !out.status.success() {
                return Err(format!("{name}: {}", String::from_utf8_lossy(&out.stderr)));
            }
            let doc = strip_wall_time(&String::from_utf8_lossy(&out.stdout));
            let side = match *name {
                "sweep" => std::fs::read(csv("sweep.csv")).map_err(|e| e.to_string())?,
                "decay" => std::fs::read(csv("decay.csv")).map_err(|e| e.to_string())?,
                _ => Vec::new(),
            };
            outputs.push((doc, side));
        }
        if outputs[0] != outputs[1] {
            return Err(format!("{name}: runs differ"));
        }
    }
    Ok(format!("{} subcommands byte-identical", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("golden anchors", golden_anchors),
        ("winding vs root count", winding_vs_root_count),
        ("witness existence", witnesses_exist),
        ("spectrum of z - a", spectrum_of_linear),
        ("epsilon sweep", sweep_reproduces_mechanism),
        ("injectivity certificate", certificate_soundness),
        ("finite-section decay", decay_signature),
        ("nilpotent pencil", nilpotent_pencil),
        ("bounded index sampler", bounded_index_sampler),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
