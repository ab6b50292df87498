use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use krawczyk_core::benchmarks::lowrank::LowrankStart;
use krawczyk_core::benchmarks::{run_benchmark, write_outputs, BenchmarkSpec, Family, WORKERS_ENV};
use krawczyk_core::certify::{deserialize, verify};
use krawczyk_core::tracker::TrackMode;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bench", version, about = "Certified path tracking benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Track every path of a benchmark family and write the results.
    Run(RunArgs),
    /// Replay certificates: a single file, or every cert_*.json below a directory.
    Verify { path: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Newton,
    Random,
    Katsura,
    Lowrank,
}

#[derive(Clone, Copy, ValueEnum)]
enum StartKind {
    Random,
    Identity,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    /// Size for katsura and lowrank.
    #[arg(long)]
    n: Option<usize>,
    /// Number of variables for random.
    #[arg(long)]
    k: Option<usize>,
    /// Slope for newton.
    #[arg(long)]
    m: Option<f64>,
    /// Start matrix for lowrank.
    #[arg(long, value_enum, default_value = "random")]
    start: StartKind,
    #[arg(long, default_value = "tilted")]
    mode: TrackMode,
    #[arg(long, default_value_t = 0.1)]
    dt0: f64,
    #[arg(long, default_value_t = 0.1)]
    r0: f64,
    #[arg(long, default_value_t = 3.0)]
    lambda: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads (overrides BENCH_WORKERS).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

fn family(a: &RunArgs) -> Result<Family> {
    let need = |v: Option<usize>, flag: &str| v.with_context(|| format!("--{flag} is required for this family"));
    Ok(match a.family {
        FamilyKind::Newton => Family::Newton {
            m: a.m.context("--m is required for newton")?,
        },
        FamilyKind::Random => Family::Random { k: need(a.k, "k")? },
        FamilyKind::Katsura => Family::Katsura { n: need(a.n, "n")? },
        FamilyKind::Lowrank => Family::Lowrank {
            n: need(a.n, "n")?,
            start: match a.start {
                StartKind::Random => LowrankStart::Random,
                StartKind::Identity => LowrankStart::Identity,
            },
        },
    })
}

fn run(a: RunArgs) -> Result<ExitCode> {
    if let Some(w) = a.workers {
        std::env::set_var(WORKERS_ENV, w.to_string());
    }
    let mut spec = BenchmarkSpec::new(family(&a)?, a.mode, a.dt0, a.r0, a.seed);
    spec.cfg.lambda = a.lambda;
    let run = run_benchmark(&spec)?;
    write_outputs(&run, &a.out).with_context(|| format!("writing results to {}", a.out.display()))?;

    let mode = match a.mode {
        TrackMode::Tilted => "tilted",
        TrackMode::Rect => "rect",
    };
    println!(
        "{} ({mode}, dt0={}, r0={}, lambda={})",
        run.report.benchmark, a.dt0, a.r0, a.lambda
    );
    for p in &run.report.paths {
        match &p.error {
            Some(e) => println!("  path {:>3}: failed: {e}", p.path),
            None => println!(
                "  path {:>3}: {} iterations ({} rejected), residual {:.2e}, verified {}",
                p.path,
                p.iterations,
                p.rejected,
                p.final_residual.unwrap_or(f64::NAN),
                p.verified
            ),
        }
    }
    let s = &run.report.summary;
    println!(
        "certified {}/{}, verified {}/{}, iterations avg {:.2} min {} max {}, {:.2}s",
        s.certified,
        s.paths,
        s.verified,
        s.paths,
        s.avg_iterations,
        s.min_iterations,
        s.max_iterations,
        run.elapsed.as_secs_f64()
    );
    Ok(if s.verified == s.paths {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn collect_certs(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    entries.sort();
    for p in entries {
        if p.is_dir() {
            collect_certs(&p, out)?;
        } else if p
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.starts_with("cert_") && n.ends_with(".json"))
        {
            out.push(p);
        }
    }
    Ok(())
}

/// Verify one certificate file; errors in reading or replaying count as failures.
fn verify_file(path: &Path) -> bool {
    let result = std::fs::read(path)
        .map_err(anyhow::Error::from)
        .and_then(|b| Ok(deserialize(&b)?))
        .and_then(|c| Ok((c.segments.len(), verify(&c)?)));
    match result {
        Ok((segments, rep)) if rep.passed() => {
            println!("PASS {} ({segments} segments)", path.display());
            true
        }
        Ok((_, rep)) => {
            let mut why = Vec::new();
            if !rep.failed_segments().is_empty() {
                why.push(format!("segments {:?}", rep.failed_segments()));
            }
            why.extend(rep.chain_issues.iter().cloned());
            if !rep.final_residual_ok {
                why.push("final residual".into());
            }
            if !rep.final_in_region {
                why.push("final point outside the last region".into());
            }
            println!("FAIL {}: {}", path.display(), why.join("; "));
            false
        }
        Err(e) => {
            println!("FAIL {}: {e:#}", path.display());
            false
        }
    }
}

fn verify_path(path: &Path) -> Result<ExitCode> {
    let files = if path.is_dir() {
        let mut v = Vec::new();
        collect_certs(path, &mut v)?;
        if v.is_empty() {
            bail!("no cert_*.json files under {}", path.display());
        }
        v
    } else {
        vec![path.to_path_buf()]
    };
    let passed = files.iter().filter(|f| verify_file(f)).count();
    println!("{passed}/{} certificates verified", files.len());
    Ok(if passed == files.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run(a) => run(a),
        Command::Verify { path } => verify_path(&path),
    }
}
