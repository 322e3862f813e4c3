use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use konvex_core::io::{self, ConstructionSidecar};
use konvex_core::stabbing::{find_stabbing_line, max_line_multiplicity, random_line_oracle};
use konvex_core::theorem::{self, BodySummary};
use konvex_core::{s_bound, ConstructionParams, Error};

mod render;
mod scene;

/// Curves in convex polygons and the lines that meet them.
#[derive(Parser)]
#[command(name = "konvex", version)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Threshold length s(K, r) with the perimeter and diameter of K.
    Bound { body: PathBuf, r: u32 },
    /// Largest number of times a line meets the curve, with a witness line.
    Analyze {
        curve: PathBuf,
        /// Also run this many random lines as a cross-check.
        #[arg(long)]
        oracle: Option<usize>,
    },
    /// Line meeting a curve longer than s(K, r) at least r + 1 times.
    Stab { curve: PathBuf, r: u32, body: PathBuf },
    /// Curve of length at least s(K, r) − eps that no line meets more than r times.
    Construct {
        body: PathBuf,
        r: u32,
        /// Allowed shortfall; defaults to 5% of s(K, r).
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Vertices per loop.
        #[arg(long)]
        m: Option<usize>,
        /// Attempts after the first before giving up.
        #[arg(long)]
        retries: Option<u32>,
        /// Curve file; a JSON sidecar is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also draw the body and curve.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Checks a curve against the upper bound.
    Verify { curve: PathBuf, body: PathBuf, r: u32 },
    /// Random curves in K: none that no line meets more than r times may exceed s(K, r).
    Falsify {
        body: PathBuf,
        r: u32,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Convexity of a simple closed curve against its largest line multiplicity.
    Prop1 { curve: PathBuf },
    /// Renders a JSON scene description to SVG.
    Svg {
        scene: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A failed check, as opposed to bad input.
struct Unverified(String);

enum Failure {
    Error(Error),
    Unverified(Unverified),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<Unverified> for Failure {
    fn from(u: Unverified) -> Self {
        Failure::Unverified(u)
    }
}

fn seed(flag: Option<u64>) -> Result<u64, Error> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("KONVEX_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("KONVEX_SEED `{v}` is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn emit(json: bool, value: &impl serde::Serialize, text: impl FnOnce() -> String) -> Result<(), Error> {
    if json {
        println!("{}", io::to_json(value)?);
    } else {
        print!("{}", text());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let json = cli.json;
    match cli.command {
        Command::Bound { body, r } => {
            let k = io::read_polygon(&body)?;
            let s = s_bound(&k, r)?;
            let summary = BodySummary::of(&k);
            let value = serde_json::json!({ "r": r, "s": s, "perimeter": summary.perimeter, "diameter": summary.diameter });
            emit(json, &value, || {
                format!(
                    "s = {} (p={}, d={})\n",
                    render::num(s),
                    render::num(summary.perimeter),
                    render::num(summary.diameter)
                )
            })?;
        }
        Command::Analyze { curve, oracle } => {
            let poly = io::read_polyline(&curve)?;
            let report = max_line_multiplicity(&poly)?;
            let check = oracle.map(|n| random_line_oracle(&poly, n, 0)).transpose()?;
            if let Some(o) = &check {
                if o.count > report.count {
                    return Err(Unverified(format!(
                        "random lines reached {} components but enumeration only {}",
                        o.count, report.count
                    ))
                    .into());
                }
            }
            let value = serde_json::json!({ "enumeration": report, "oracle": check });
            emit(json, &value, || {
                let mut s = render::multiplicity(&report);
                if let Some(o) = &check {
                    s += &format!("oracle count={}\n", o.count);
                }
                s
            })?;
        }
        Command::Stab { curve, r, body } => {
            let poly = io::read_polyline(&curve)?;
            let k = io::read_polygon(&body)?;
            let report = find_stabbing_line(&poly, r, &k)?;
            emit(json, &report, || render::multiplicity(&report))?;
        }
        Command::Construct { body, r, eps, seed: seed_flag, m, retries, out, svg } => {
            let k = io::read_polygon(&body)?;
            let eps = match eps {
                Some(e) => e,
                None => 0.05 * s_bound(&k, r)?,
            };
            let mut params = ConstructionParams::new(r, eps).with_seed(seed(seed_flag)?);
            if let Some(m) = m {
                params = params.with_samples(m);
            }
            if let Some(n) = retries {
                params = params.with_retries(n);
            }
            let report = theorem::realize_lower_bound(&k, &params)?;
            let theorem::Evidence::Construction { result } = &report.evidence else {
                unreachable!("the builder always returns a construction");
            };
            let sidecar = ConstructionSidecar::of(result);
            if let Some(path) = &svg {
                io::write_svg(&scene::construction(&k, result), path)?;
            }
            match &out {
                Some(path) => {
                    let side = io::save_construction(result, path)?;
                    emit(json, &sidecar, || {
                        format!(
                            "{}curve: {}\nsidecar: {}\n",
                            render::construction(&sidecar),
                            path.display(),
                            side.display()
                        )
                    })?;
                }
                None => {
                    let value = serde_json::json!({ "sidecar": sidecar, "curve": result.curve });
                    emit(json, &value, || io::write_polyline(&result.curve))?;
                }
            }
        }
        Command::Verify { curve, body, r } => {
            let poly = io::read_polyline(&curve)?;
            let k = io::read_polygon(&body)?;
            let report = theorem::check_upper_bound(&poly, &k, r)?;
            emit(json, &report, || render::bound_report(&report))?;
            if !report.holds() {
                return Err(Unverified("evidence contradicts the bound".into()).into());
            }
        }
        Command::Falsify { body, r, trials, seed: seed_flag } => {
            let k = io::read_polygon(&body)?;
            let report = theorem::falsify(&k, r, trials, seed(seed_flag)?)?;
            emit(json, &report, || render::bound_report(&report))?;
            if !report.holds() {
                return Err(Unverified("a qualifying curve exceeded the bound".into()).into());
            }
        }
        Command::Prop1 { curve } => {
            let poly = io::read_polyline(&curve)?;
            let report = theorem::prop1_check(&poly)?;
            emit(json, &report, || render::prop1(&report))?;
            if !report.consistent {
                return Err(Unverified("convexity and multiplicity disagree".into()).into());
            }
        }
        Command::Svg { scene: spec, out } => {
            let doc = scene::load(&spec)?;
            io::write_svg(&doc, &out)?;
            if !json {
                println!("wrote {}", out.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_verification_failure() { 2 } else { 1 })
        }
        Err(Failure::Unverified(Unverified(msg))) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
