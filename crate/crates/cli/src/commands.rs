use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use fredholm_core::algebra::matrix_from_json;
use fredholm_core::index::FREDHOLM_MARGIN;
use fredholm_core::{
    assemble_truncation, count_roots_in_disc, decay_profile, epsilon_sweep, find_witnesses,
    fredholm_index, nonmonic_scan, scale_transform, subspace_index_sample, Complex64, Error,
    MonicMatrixPolynomial, NonMonicPencil, NonmonicScan, SamplerConfig,
};

use crate::output::{to_json, Document, Manifest};
use crate::{demo, Command};

pub const USAGE: u8 = 2;
pub const NUMERICAL: u8 = 3;
pub const NOT_FREDHOLM: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: USAGE,
            message: message.into(),
        }
    }

    fn core(input: &str, e: Error) -> Self {
        let code = match e {
            Error::NotFredholm { .. } => NOT_FREDHOLM,
            ref e if e.is_numerical() => NUMERICAL,
            _ => USAGE,
        };
        CliError {
            code,
            message: format!("{input}: {e}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

struct Input {
    label: String,
    digest: String,
    text: String,
}

fn read_input(path: &Path) -> CliResult<Input> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::usage(format!("{} is not UTF-8", path.display())))?;
    Ok(Input {
        label: path.display().to_string(),
        digest,
        text,
    })
}

fn read_poly(op: &str, path: &Path) -> CliResult<(Input, MonicMatrixPolynomial)> {
    let input = read_input(path)?;
    let p = MonicMatrixPolynomial::from_json(&input.text).map_err(|e| {
        let mut err = CliError::core(&input.label, e);
        err.message = format!("{op}: {}", err.message);
        err
    })?;
    Ok((input, p))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

/// Runs `f` on a single worker unless `parallel` is set; results are
/// identical either way.
fn pool<T: Send>(parallel: bool, f: impl FnOnce() -> T + Send) -> T {
    if parallel {
        f()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .expect("single-thread pool")
            .install(f)
    }
}

struct Run {
    name: &'static str,
    digest: Option<String>,
    seed: Option<u64>,
    start: Instant,
}

impl Run {
    fn new(name: &'static str) -> Self {
        Run {
            name,
            digest: None,
            seed: None,
            start: Instant::now(),
        }
    }

    fn finish<T: Serialize>(self, result: &T, json_out: Option<&PathBuf>) -> CliResult<String> {
        let manifest = Manifest {
            subcommand: self.name,
            input_digest: self.digest,
            seed: self.seed,
            tool_version: env!("CARGO_PKG_VERSION"),
            wall_time: self.start.elapsed().as_secs_f64(),
        };
        let doc = to_json(&Document {
            manifest: &manifest,
            result,
        });
        if let Some(path) = json_out {
            write_file(path, &format!("{doc}\n"))?;
        }
        Ok(doc)
    }
}

/// `steps` points from `lo` to `hi`, evenly spaced in `log eps`.
fn log_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    let ratio = (hi / lo).ln();
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                hi
            } else {
                lo * (ratio * i as f64 / (steps - 1) as f64).exp()
            }
        })
        .collect()
}

/// Origin plus `steps` radii `R i / steps` times `steps` angles.
fn polar_grid(radius: f64, steps: usize) -> Vec<Complex64> {
    let mut grid = vec![Complex64::new(0.0, 0.0)];
    for i in 1..=steps {
        let r = radius * i as f64 / steps as f64;
        for j in 0..steps {
            grid.push(Complex64::from_polar(r, TAU * j as f64 / steps as f64));
        }
    }
    grid
}

#[derive(Serialize)]
struct TruncateResult {
    rows: usize,
    cols: usize,
    dim: usize,
    degree: usize,
    shape: fredholm_core::Shape,
}

#[derive(Serialize)]
struct ScanResult {
    grid_points: usize,
    #[serde(flatten)]
    scan: NonmonicScan,
}

pub fn run(command: Command) -> CliResult<String> {
    match command {
        Command::Witness { poly, tol, out } => {
            let mut run = Run::new("witness");
            let (input, p) = read_poly("find_witnesses", &poly)?;
            run.digest = Some(input.digest.clone());
            let report = find_witnesses(&p, tol).map_err(|e| CliError::core(&input.label, e))?;
            run.finish(&report, out.as_ref())
        }
        Command::Index { poly, eps, out } => {
            let mut run = Run::new("index");
            let (input, p) = read_poly("fredholm_index", &poly)?;
            run.digest = Some(input.digest.clone());
            let eps = Complex64::new(eps, 0.0);
            let fail = |e| CliError::core(&input.label, e);
            let report = fredholm_index(&p, eps).map_err(fail)?;
            if !report.fredholm {
                let roots = count_roots_in_disc(&scale_transform(&p, eps), FREDHOLM_MARGIN)
                    .map_err(|e| CliError::core(&input.label, e))?;
                return Err(CliError::core(
                    &input.label,
                    Error::NotFredholm {
                        op: "fredholm_index",
                        root: roots.nearest_circle_root,
                        margin: FREDHOLM_MARGIN,
                    },
                ));
            }
            run.finish(&report, out.as_ref())
        }
        Command::Sweep {
            poly,
            eps_min,
            eps_max,
            steps,
            parallel,
            seed,
            out,
        } => {
            let mut run = Run::new("sweep");
            run.seed = seed;
            if !(eps_min > 0.0 && eps_max >= eps_min && eps_max.is_finite()) || steps == 0 {
                return Err(CliError::usage(
                    "sweep: need 0 < eps-min <= eps-max and steps >= 1",
                ));
            }
            if steps > 1 && eps_max == eps_min {
                return Err(CliError::usage("sweep: eps-min = eps-max needs steps = 1"));
            }
            let (input, p) = read_poly("epsilon_sweep", &poly)?;
            run.digest = Some(input.digest.clone());
            let grid = log_grid(eps_min, eps_max, steps);
            let result = pool(parallel, || epsilon_sweep(&p, &grid))
                .map_err(|e| CliError::core(&input.label, e))?;
            if let Some(path) = &out {
                write_file(path, &result.to_csv())?;
            }
            run.finish(&result, None)
        }
        Command::Decay {
            poly,
            sizes,
            parallel,
            seed,
            out,
        } => {
            let mut run = Run::new("decay");
            run.seed = seed;
            let (input, p) = read_poly("decay_profile", &poly)?;
            run.digest = Some(input.digest.clone());
            let profile = pool(parallel, || decay_profile(&p, &sizes))
                .map_err(|e| CliError::core(&input.label, e))?;
            if let Some(path) = &out {
                write_file(path, &profile.to_csv())?;
            }
            run.finish(&profile, None)
        }
        Command::Truncate {
            poly,
            size,
            shape,
            eps,
            out,
        } => {
            let mut run = Run::new("truncate");
            let (input, p) = read_poly("assemble_truncation", &poly)?;
            run.digest = Some(input.digest.clone());
            let t = assemble_truncation(&p, Complex64::new(eps, 0.0), size, shape)
                .map_err(|e| CliError::core(&input.label, e))?;
            write_file(&out, &t.to_csv())?;
            let result = TruncateResult {
                rows: t.rows,
                cols: t.cols,
                dim: t.dim,
                degree: t.degree,
                shape: t.shape,
            };
            run.finish(&result, None)
        }
        Command::ScanNonmonic {
            matrix,
            grid_radius,
            grid_steps,
            out,
        } => {
            let mut run = Run::new("scan-nonmonic");
            let input = read_input(&matrix)?;
            run.digest = Some(input.digest.clone());
            if !(grid_radius > 0.0 && grid_radius.is_finite()) || grid_steps == 0 {
                return Err(CliError::usage(
                    "scan-nonmonic: need grid-radius > 0 and grid-steps >= 1",
                ));
            }
            let fail = |e| CliError::core(&input.label, e);
            let a = matrix_from_json(&input.text).map_err(fail)?;
            let grid = polar_grid(grid_radius, grid_steps);
            let scan = nonmonic_scan(&NonMonicPencil::new(a), &grid)
                .map_err(|e| CliError::core(&input.label, e))?;
            let result = ScanResult {
                grid_points: grid.len(),
                scan,
            };
            run.finish(&result, out.as_ref())
        }
        Command::SampleIndex {
            degree,
            trials,
            seed,
            parallel,
            out,
        } => {
            let mut run = Run::new("sample-index");
            run.seed = Some(seed);
            let hist = pool(parallel, || {
                subspace_index_sample(degree, trials, &SamplerConfig::gaussian(seed))
            })
            .map_err(|e| CliError::core("sampled polynomials", e))?;
            run.finish(&hist, out.as_ref())
        }
        Command::Demo { out } => {
            let run = Run::new("demo");
            let report = demo::run().map_err(|e| CliError::core("golden cases", e))?;
            if !report.all_passed {
                let doc = run.finish(&report, out.as_ref())?;
                return Err(CliError {
                    code: NUMERICAL,
                    message: format!("demo: a golden case failed\n{doc}"),
                });
            }
            run.finish(&report, out.as_ref())
        }
    }
}
