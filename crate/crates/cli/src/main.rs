mod golden;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use wpsbir_core::classify::{self, Generality, HypersurfaceProblem};
use wpsbir_core::cy::{self, CySetup};
use wpsbir_core::fflab;
use wpsbir_core::lattice::DivisorClass;
use wpsbir_core::par::Exec;
use wpsbir_core::sqm;
use wpsbir_core::verify::{self, Suite, VerifyConfig};
use wpsbir_core::wps::{Multidegree, ProductSpace};
use wpsbir_core::Error;

#[derive(Parser)]
#[command(name = "wpsbir", version, about = "Hypersurfaces in products of weighted projective spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Output {
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct Problem {
    /// Comma-separated factors, e.g. "P1,P(1,1,2)".
    #[arg(long)]
    space: String,
    /// Comma-separated multidegree, e.g. "2,2".
    #[arg(long)]
    degree: String,
    #[arg(long, default_value = "very_general")]
    generality: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Mori dream space verdict.
    Classify {
        #[command(flatten)]
        problem: Problem,
        #[command(flatten)]
        output: Output,
    },
    /// Cox ring presentation, when one is known.
    Cox {
        #[command(flatten)]
        problem: Problem,
        #[command(flatten)]
        output: Output,
    },
    /// Effective, movable and nef cones of an MDS verdict.
    Cones {
        #[command(flatten)]
        problem: Problem,
        #[command(flatten)]
        output: Output,
    },
    /// Forward and inverse small modification on sampled F_p points.
    SqmEval {
        #[arg(long)]
        space: String,
        #[arg(long)]
        degree: String,
        #[arg(long, default_value_t = 101)]
        prime: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Reduce a class into the nef chamber by lattice involutions.
    CyReduce {
        #[arg(long)]
        space: String,
        /// Comma-separated coordinates, e.g. "-1,4".
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Distinct images of the nef cone under short words.
    CyOrbit {
        #[arg(long)]
        space: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run a self-check suite.
    Verify {
        /// det, sqm, graded, sections, gorenstein, ptpoly, cy, rank, flip or golden
        #[arg(long)]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        dmax: Option<usize>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        sequential: bool,
        /// Table of (space, degree, generality) rows for the golden suite.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Expected classify output, one JSON line per fixture row.
        #[arg(long)]
        golden: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Usage(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn emit<T: Serialize>(value: &T, out: &Output) -> Outcome {
    let text = if out.pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .map_err(|e| Failure::Domain(e.to_string()))?;
    match &out.out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| Failure::Domain(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn exec(sequential: bool) -> Exec {
    if sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

impl Problem {
    fn parse(&self) -> Result<HypersurfaceProblem, Failure> {
        let g: Generality = self.generality.parse()?;
        Ok(HypersurfaceProblem::parse(&self.space, &self.degree, g)?)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Classify { problem, output } => emit(&classify::classify(&problem.parse()?), &output),
        Cmd::Cox { problem, output } => emit(&classify::cox_presentation(&problem.parse()?)?, &output),
        Cmd::Cones { problem, output } => emit(&classify::cones_for(&problem.parse()?)?, &output),
        Cmd::SqmEval {
            space,
            degree,
            prime,
            seed,
            points,
            sequential,
            output,
        } => sqm_eval(&space, &degree, prime, seed, points, exec(sequential), &output),
        Cmd::CyReduce {
            space,
            class,
            max_steps,
            output,
        } => {
            let s = CySetup::new(space.parse::<ProductSpace>()?)?;
            let coords: Multidegree = class.trim_matches(|c| c == '(' || c == ')').parse()?;
            let t = cy::reduce_to_nef(&s, &DivisorClass(coords.0), max_steps)?;
            emit(&t, &output)
        }
        Cmd::CyOrbit {
            space,
            depth,
            sequential,
            output,
        } => {
            let s = CySetup::new(space.parse::<ProductSpace>()?)?;
            emit(&cy::orbit_chambers(&s, depth, exec(sequential))?, &output)
        }
        Cmd::Verify {
            suite,
            seed,
            prime,
            dmax,
            points,
            sequential,
            fixtures,
            golden: golden_path,
            output,
        } => {
            if suite == "golden" {
                let (Some(f), Some(g)) = (fixtures, golden_path) else {
                    return Err(Failure::Usage("the golden suite needs --fixtures and --golden".into()));
                };
                let report = golden::check(&f, &g).map_err(Failure::Usage)?;
                let passed = report.mismatches.is_empty();
                emit(&json!({ "suite": "golden", "passed": passed, "details": report }), &output)?;
                return if passed {
                    Ok(())
                } else {
                    Err(Failure::Domain("golden table mismatch".into()))
                };
            }
            let suite: Suite = suite.parse()?;
            let randomized = matches!(suite, Suite::Det | Suite::Sqm | Suite::Graded | Suite::Rank);
            if randomized && seed.is_none() {
                return Err(Failure::Usage(format!("suite {suite} needs --seed")));
            }
            let cfg = VerifyConfig {
                seed: seed.unwrap_or(0),
                prime,
                dmax,
                points,
                exec: exec(sequential),
            };
            let report = verify::run(suite, &cfg)?;
            emit(&report, &output)?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Domain(format!("suite {suite} failed")))
            }
        }
    }
}

fn sqm_eval(space: &str, degree: &str, p: u64, seed: u64, points: usize, exec: Exec, out: &Output) -> Outcome {
    let x: ProductSpace = space.parse()?;
    let deg: Multidegree = degree.parse()?;
    let f = x.factors();
    if f.len() != 2 || deg.len() != 2 {
        return Err(Failure::Usage("sqm-eval needs a space P1,P(w) and a degree d,e".into()));
    }
    let (i, j) = match (f[0].is_p1(), f[1].is_p1()) {
        (true, _) => (0, 1),
        (false, true) => (1, 0),
        _ => return Err(Failure::Domain(format!("{x} has no P1 factor"))),
    };
    let (d, e) = (deg.0[i], deg.0[j]);
    if d < 1 {
        return Err(Failure::Domain(format!("degree {d} on P1 must be positive")));
    }
    let w = &f[j];
    let d = d as usize;
    let h = fflab::sample_hypersurface(p, d, e, w, seed)?;
    let pts = fflab::sample_points(&h, points, seed.wrapping_add(1), exec);
    let mut ok = 0;
    let mut flagged = 0;
    let mut failures = 0;
    let mut contractions = 0;
    for pt in &pts {
        match sqm::sqm_forward(&h, pt) {
            Err(Error::Indeterminacy(_)) => flagged += 1,
            Err(_) => failures += 1,
            Ok(q) => match sqm::sqm_backward(&h, &q) {
                Ok(back) if sqm::points_equivalent(&back, pt, w.weights(), p) => ok += 1,
                Err(Error::DivisorialContraction) => contractions += 1,
                Err(Error::Indeterminacy(_)) => flagged += 1,
                _ => failures += 1,
            },
        }
    }
    let stats = fflab::rank_statistics(&h, &pts, exec);
    let report = json!({
        "config": { "space": x.to_string(), "degree": deg.0, "p": p, "seed": seed, "points": points },
        "matrix_m": sqm::build_m(d),
        "matrix_n": sqm::build_n(d).ok(),
        "sampled": pts.len(),
        "roundtrip_ok": ok,
        "flagged": flagged,
        "divisorial_contraction": contractions,
        "failures": failures,
        "rank": stats,
    });
    emit(&report, out)?;
    if failures == 0 {
        Ok(())
    } else {
        Err(Failure::Domain(format!("{failures} roundtrip failures")))
    }
}
