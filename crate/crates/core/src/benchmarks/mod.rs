//! Benchmark families and a batch runner that tracks every path of a family,
//! verifies the resulting certificates and writes the run to disk.

pub mod bootstrap;
pub mod katsura;
pub mod lowrank;
pub mod newton;
pub mod random_quadratic;
pub mod svd;

use crate::certify::{self, verify, PathCertificate};
use crate::error::{Error, Result};
use crate::serial::opt_complex_vec;
use crate::system::Homotopy;
use crate::tracker::{track_path, StepRecord, TrackMode, TrackerConfig};
use lowrank::LowrankStart;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::time::{Duration, Instant};

/// Environment variable holding the number of worker threads.
pub const WORKERS_ENV: &str = "BENCH_WORKERS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Newton { m: f64 },
    Random { k: usize },
    Katsura { n: usize },
    Lowrank { n: usize, start: LowrankStart },
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::Newton { m } => format!("newton(m={m})"),
            Family::Random { k } => format!("random(k={k})"),
            Family::Katsura { n } => format!("katsura{n}"),
            Family::Lowrank { n, .. } => format!("lowrank(n={n})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub family: Family,
    pub cfg: TrackerConfig,
    pub seed: u64,
}

impl BenchmarkSpec {
    pub fn new(family: Family, mode: TrackMode, dt0: f64, r0: f64, seed: u64) -> Self {
        Self {
            family,
            cfg: TrackerConfig::with_steps(mode, dt0, r0),
            seed,
        }
    }
}

/// A homotopy together with approximations of all its start solutions.
pub struct Problem {
    pub homotopy: Homotopy,
    pub starts: Vec<Vec<Complex64>>,
}

pub fn build_problem(family: &Family, seed: u64) -> Result<Problem> {
    let (homotopy, starts) = match *family {
        Family::Newton { m } => {
            let (h, s) = newton::gen_newton_homotopy(m)?;
            (h, vec![s])
        }
        Family::Random { k } => random_quadratic::gen_random_quadratic(k, seed)?,
        Family::Katsura { n } => katsura::gen_katsura(n, seed)?,
        Family::Lowrank { n, start } => {
            let a0 = lowrank::start_matrix(start, n, seed);
            let p = lowrank::gen_lowrank(n, &a0, &lowrank::hilbert(n), seed)?;
            (p.homotopy, vec![p.start])
        }
    };
    Ok(Problem { homotopy, starts })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathReport {
    pub path: usize,
    pub certified: bool,
    pub verified: bool,
    pub iterations: usize,
    pub accepted: usize,
    pub rejected: usize,
    #[serde(with = "opt_complex_vec")]
    pub final_point: Option<Vec<Complex64>>,
    pub final_residual: Option<f64>,
    pub certificate: Option<String>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub paths: usize,
    pub certified: usize,
    pub verified: usize,
    pub min_iterations: usize,
    pub max_iterations: usize,
    pub avg_iterations: f64,
}

/// Per-run statistics. Contains no timing so reruns are byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub benchmark: String,
    pub family: Family,
    pub mode: TrackMode,
    pub dt0: f64,
    pub r0: f64,
    pub lambda: f64,
    pub ratio: f64,
    pub seed: u64,
    pub paths: Vec<PathReport>,
    pub summary: Summary,
}

#[derive(Clone, Debug)]
pub struct PathOutcome {
    pub certificate: Option<PathCertificate>,
    pub steps: Vec<StepRecord>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct BenchmarkRun {
    pub report: BenchmarkReport,
    pub outcomes: Vec<PathOutcome>,
    pub elapsed: Duration,
}

pub fn cert_file_name(path: usize) -> String {
    format!("cert_{path}.json")
}

/// Thread pool sized from [`WORKERS_ENV`] (all cores when unset or invalid).
pub fn worker_pool() -> rayon::ThreadPool {
    let workers = std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool construction")
}

fn run_path(h: &Homotopy, start: &[Complex64], cfg: &TrackerConfig, path: usize) -> (PathReport, PathOutcome) {
    let t = Instant::now();
    let mut report = PathReport {
        path,
        certified: false,
        verified: false,
        iterations: 0,
        accepted: 0,
        rejected: 0,
        final_point: None,
        final_residual: None,
        certificate: None,
        error: None,
    };
    let mut outcome = PathOutcome {
        certificate: None,
        steps: Vec::new(),
        elapsed: Duration::ZERO,
    };
    match track_path(h, start, cfg) {
        Ok(res) => {
            report.certified = true;
            report.iterations = res.iterations();
            report.accepted = res.accepted();
            report.rejected = res.rejected();
            report.final_residual = Some(res.final_residual);
            report.final_point = Some(res.final_point.clone());
            report.certificate = Some(cert_file_name(path));
            match verify(&res.certificate) {
                Ok(v) => report.verified = v.passed(),
                Err(e) => report.error = Some(format!("verification: {e}")),
            }
            outcome.steps = res.steps;
            outcome.certificate = Some(res.certificate);
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    outcome.elapsed = t.elapsed();
    (report, outcome)
}

fn summarize(paths: &[PathReport]) -> Summary {
    let done: Vec<usize> = paths.iter().filter(|p| p.certified).map(|p| p.iterations).collect();
    Summary {
        paths: paths.len(),
        certified: done.len(),
        verified: paths.iter().filter(|p| p.verified).count(),
        min_iterations: done.iter().copied().min().unwrap_or(0),
        max_iterations: done.iter().copied().max().unwrap_or(0),
        avg_iterations: if done.is_empty() {
            0.0
        } else {
            done.iter().sum::<usize>() as f64 / done.len() as f64
        },
    }
}

/// Track (and verify) every path of the benchmark. Individual path failures
/// are recorded in the report; only setup errors abort the run.
pub fn run_benchmark(spec: &BenchmarkSpec) -> Result<BenchmarkRun> {
    spec.cfg.validate()?;
    let t = Instant::now();
    let problem = build_problem(&spec.family, spec.seed)?;
    let h = &problem.homotopy;
    let results: Vec<(PathReport, PathOutcome)> = worker_pool().install(|| {
        problem
            .starts
            .par_iter()
            .enumerate()
            .map(|(i, s)| run_path(h, s, &spec.cfg, i))
            .collect()
    });
    let (paths, outcomes): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let report = BenchmarkReport {
        benchmark: spec.family.name(),
        family: spec.family.clone(),
        mode: spec.cfg.mode,
        dt0: spec.cfg.dt0,
        r0: spec.cfg.r0,
        lambda: spec.cfg.lambda,
        ratio: spec.cfg.ratio(),
        seed: spec.seed,
        summary: summarize(&paths),
        paths,
    };
    Ok(BenchmarkRun {
        report,
        outcomes,
        elapsed: t.elapsed(),
    })
}

#[derive(Serialize)]
struct StepRow {
    path_id: usize,
    step_index: usize,
    t0: f64,
    dt: f64,
    r: f64,
    accepted: bool,
    residual_norm: Option<f64>,
}

#[derive(Serialize)]
struct Timing {
    wall_seconds: f64,
    path_seconds: Vec<f64>,
}

/// Write `report.json`, `steps.csv`, `timing.json` and one
/// `cert_<path>.json` per certified path into `dir`.
pub fn write_outputs(run: &BenchmarkRun, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut report = serde_json::to_vec_pretty(&run.report)?;
    report.push(b'\n');
    std::fs::write(dir.join("report.json"), report)?;

    let mut w = csv::Writer::from_path(dir.join("steps.csv")).map_err(|e| Error::Io(e.to_string()))?;
    for (path_id, o) in run.outcomes.iter().enumerate() {
        for (step_index, s) in o.steps.iter().enumerate() {
            w.serialize(StepRow {
                path_id,
                step_index,
                t0: s.t0,
                dt: s.dt,
                r: s.r,
                accepted: s.accepted,
                residual_norm: s.residual_norm,
            })
            .map_err(|e| Error::Io(e.to_string()))?;
        }
    }
    w.flush()?;

    for (i, o) in run.outcomes.iter().enumerate() {
        if let Some(c) = &o.certificate {
            let mut bytes = certify::serialize(c);
            bytes.push(b'\n');
            std::fs::write(dir.join(cert_file_name(i)), bytes)?;
        }
    }

    let timing = Timing {
        wall_seconds: run.elapsed.as_secs_f64(),
        path_seconds: run.outcomes.iter().map(|o| o.elapsed.as_secs_f64()).collect(),
    };
    std::fs::write(dir.join("timing.json"), serde_json::to_vec_pretty(&timing)?)?;
    Ok(())
}
