use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use movcone_core::checks::{self, CheckConfig};
use movcone_core::chow::intersection_data;
use movcone_core::cone_dynamics::{C2Form, Geometry, GeometryError, IntegralClass, TriForm};
use movcone_core::hilbert_oracle::{derive_intersection_data, HilbertConfig};
use movcone_core::kappa::{self, SweepRay};
use movcone_core::model_file::ModelFile;
use movcone_core::riemann_roch::h0_movable;

#[derive(Parser)]
#[command(name = "movcone", version, about = "Movable-cone dynamics and section growth on rank-2 Calabi-Yau threefolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute intersection numbers from the `ci` or `ideal` block and store them
    Derive {
        model: PathBuf,
        /// Write here instead of updating the model file in place
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overwrite existing intersection numbers that disagree
        #[arg(long)]
        force: bool,
        /// Largest a, b sampled for the Hilbert function fit
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// Validate a model and run the randomized exact checks
    Verify {
        model: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = CheckConfig::default().seed)]
        seed: u64,
    },
    /// Sweep h0(floor(m R) + A) over m = mmin, 2 mmin, ... <= mmax and fit the exponent
    Sweep {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Ray::R1)]
        ray: Ray,
        /// Ample class A as "p,q"
        #[arg(long, default_value = "5,5", allow_hyphen_values = true)]
        ample: String,
        #[arg(long, default_value_t = 256)]
        mmin: u64,
        #[arg(long, default_value_t = 1 << 20)]
        mmax: u64,
        /// CSV destination; "-" for standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Move a big class into the fundamental domain
    Reduce {
        model: PathBuf,
        /// Class as "p,q"
        #[arg(allow_hyphen_values = true)]
        class: String,
    },
    /// Count sections of a big class
    H0 {
        model: PathBuf,
        #[arg(allow_hyphen_values = true)]
        class: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Ray {
    R1,
    R2,
}

/// Failure classes with stable exit codes.
enum Failure {
    Invalid(anyhow::Error),
    Parse(anyhow::Error),
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Parse(_) => 3,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Invalid(e) | Failure::Parse(e) | Failure::Other(e) => e,
        }
    }
}

fn invalid<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Invalid(e.into())
}

fn parse_err<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Parse(e.into())
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Derive {
            model,
            out,
            force,
            max_degree,
        } => cmd_derive(&model, out.as_deref(), force, max_degree),
        Command::Verify {
            model,
            samples,
            seed,
        } => cmd_verify(&model, CheckConfig { samples, seed }),
        Command::Sweep {
            model,
            ray,
            ample,
            mmin,
            mmax,
            out,
        } => cmd_sweep(&model, ray, &ample, mmin, mmax, out.as_deref()),
        Command::Reduce { model, class } => cmd_reduce(&model, &class, false),
        Command::H0 { model, class } => cmd_reduce(&model, &class, true),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}

fn load_geometry(path: &Path) -> Result<Geometry, Failure> {
    let file = ModelFile::load(path).map_err(parse_err)?;
    let model = file.to_model().map_err(parse_err)?;
    Geometry::new(model).map_err(|e| match e {
        GeometryError::Invalid(_) => invalid(e),
        GeometryError::Cone(_) => invalid(e),
    })
}

fn parse_class(text: &str) -> Result<IntegralClass, Failure> {
    text.parse().map_err(|e: String| parse_err(anyhow!(e)))
}

fn fmt_data(tri: &TriForm, c2: &C2Form) -> String {
    format!(
        "triform ({}, {}, {}, {}), c2form ({}, {})",
        tri.t111, tri.t112, tri.t122, tri.t222, c2.c1, c2.c2
    )
}

fn cmd_derive(path: &Path, out: Option<&Path>, force: bool, max_degree: u32) -> Outcome {
    let mut file = ModelFile::load(path).map_err(parse_err)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let ideal = file.load_ideal(base).map_err(parse_err)?;

    let from_chow = match &file.ci {
        Some(ci) => Some(intersection_data(ci).map_err(invalid)?),
        None => None,
    };
    let from_hilbert = match &ideal {
        Some(ideal) => {
            let cfg = HilbertConfig::default();
            Some(derive_intersection_data(ideal, max_degree, &cfg).map_err(invalid)?)
        }
        None => None,
    };
    let ((tri, c2), tag) = match (from_chow, from_hilbert) {
        (None, None) => {
            return Err(invalid(anyhow!("model has neither a `ci` nor an `ideal` block")))
        }
        (Some(c), None) => (c, "chow"),
        (None, Some(h)) => (h, "hilbert-fit"),
        (Some(c), Some(h)) => {
            if c != h {
                return Err(invalid(anyhow!(
                    "chow gives {} but the Hilbert fit gives {}",
                    fmt_data(&c.0, &c.1),
                    fmt_data(&h.0, &h.1)
                )));
            }
            (c, "chow, hilbert-fit")
        }
    };
    println!("derived ({tag}): {}", fmt_data(&tri, &c2));

    if let (Some(old_t), Some(old_c)) = (file.triform, file.c2form) {
        let old = (TriForm::from_array(old_t), C2Form::from_array(old_c));
        if old != (tri.clone(), c2.clone()) && !force {
            return Err(invalid(anyhow!(
                "model already has {}; pass --force to overwrite",
                fmt_data(&old.0, &old.1)
            )));
        }
    }
    file.set_intersection_data(&tri, &c2, tag);
    let dest = out.unwrap_or(path);
    file.save(dest).map_err(|e| Failure::Other(e.into()))?;
    println!("wrote {}", dest.display());
    Ok(())
}

fn cmd_verify(path: &Path, cfg: CheckConfig) -> Outcome {
    let file = ModelFile::load(path).map_err(parse_err)?;
    let model = file.to_model().map_err(parse_err)?;
    let outcomes = checks::run_checks(&model, &cfg);
    let stdout = io::stdout();
    let mut w = stdout.lock();
    for o in &outcomes {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        writeln!(w, "{verdict}\t{}\t{}", o.name, o.detail).map_err(|e| Failure::Other(e.into()))?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(invalid(anyhow!("{failed} check(s) failed for {}", model.name)));
    }
    Ok(())
}

fn cmd_sweep(
    path: &Path,
    ray: Ray,
    ample: &str,
    mmin: u64,
    mmax: u64,
    out: Option<&Path>,
) -> Outcome {
    let geom = load_geometry(path)?;
    let a = parse_class(ample)?;
    if mmin == 0 || mmin > mmax {
        return Err(invalid(anyhow!("need 1 <= mmin <= mmax")));
    }
    let ms: Vec<BigInt> = std::iter::successors(Some(mmin), |&m| m.checked_mul(2))
        .take_while(|&m| m <= mmax)
        .map(BigInt::from)
        .collect();
    let sweep_ray = match ray {
        Ray::R1 => SweepRay::R1,
        Ray::R2 => SweepRay::R2,
    };
    let records = kappa::sweep(&geom, &a, &ms, &sweep_ray).map_err(invalid)?;
    match out {
        Some(p) if p == Path::new("-") => {
            kappa::write_csv(&records, io::stdout().lock()).map_err(|e| Failure::Other(e.into()))?
        }
        Some(p) => {
            let f = File::create(p)
                .with_context(|| format!("cannot create {}", p.display()))
                .map_err(Failure::Other)?;
            kappa::write_csv(&records, f).map_err(|e| Failure::Other(e.into()))?;
        }
        None => {}
    }
    let skipped = records.iter().filter(|r| r.skipped()).count();
    let fit = kappa::estimate_exponent(&records).map_err(invalid)?;
    // summary goes to stderr when the CSV occupies stdout
    let mut w: Box<dyn Write> = if out == Some(Path::new("-")) {
        Box::new(io::stderr())
    } else {
        Box::new(io::stdout())
    };
    let io_err = |e: io::Error| Failure::Other(e.into());
    writeln!(w, "model: {}", geom.model.name).map_err(io_err)?;
    writeln!(w, "records: {} used, {} skipped", fit.points, skipped).map_err(io_err)?;
    writeln!(w, "slope: {:.6}", fit.slope).map_err(io_err)?;
    writeln!(w, "intercept: {:.6}", fit.intercept).map_err(io_err)?;
    writeln!(w, "residual: {:.3e}", fit.residual).map_err(io_err)?;
    writeln!(w, "leave-one-out: {:.3e}", fit.leave_one_out).map_err(io_err)?;
    writeln!(w, "h0/m^1.5 band: [{:.6}, {:.6}]", fit.band_min, fit.band_max).map_err(io_err)?;
    if let Some((lo, hi)) = kappa::l1_band(&records) {
        writeln!(w, "h0/L1^1.5 band: [{lo:.6}, {hi:.6}]").map_err(io_err)?;
    }
    Ok(())
}

fn cmd_reduce(path: &Path, class: &str, count: bool) -> Outcome {
    let geom = load_geometry(path)?;
    let d = parse_class(class)?;
    if count {
        let (h0, word) = h0_movable(&geom, &d).map_err(invalid)?;
        let reduced = geom.apply(&word, &d).map_err(invalid)?;
        println!("word: {word}");
        println!("reduced: {reduced}");
        println!("h0: {h0}");
    } else {
        let (word, reduced) = geom.reduce(&d).map_err(invalid)?;
        println!("word: {word}");
        println!("reduced: {reduced}");
    }
    Ok(())
}
