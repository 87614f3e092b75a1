//! Command-line front end: thin argument handling over the library, with
//! JSON tensor files as the interchange format.
//!
//! Exit codes: 0 success (and a passing verification), 1 failing
//! verification, 2 usage or file errors, 3 numerical errors raised by the
//! library. All diagnostics go to stderr; machine-readable output (reports,
//! index summaries) goes to stdout.

pub mod files;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use mprod::random::{random_tensor, tensor_with_index};
use mprod::{
    check_drazin, check_one_d, check_one_mp_system, check_one_star, check_penrose,
    drazin_inverse, exact_inverse, mp_inverse, one_d_inverse, one_mp_inverse,
    one_star_inverse, slice_svd, solve_drazin_projected, solve_drazin_right, solve_mp_projected,
    solve_mp_right, solve_star_projected, tensor_index, DenseTensor3, OneInverseParams,
    SolutionFamily, TransformSpec, VerificationReport, DEFAULT_VERIFY_TOL,
};

use files::{
    load_tensor, load_transform, save_family, save_tensor, save_transform, FileError, FileResult,
};

#[derive(Parser)]
#[command(
    name = "mprod",
    version,
    about = "Generalized inverses and multilinear solvers for third-order complex tensors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an inverse (or the index) of a tensor.
    Compute(ComputeArgs),
    /// Check a claimed inverse against its defining equations.
    Verify(VerifyArgs),
    /// Produce the full solution family of a multilinear system.
    Solve(SolveArgs),
    /// Generate a seeded random tensor, optionally with a prescribed index.
    Gen(GenArgs),
    /// Write the documented worked-example tensor sets to a directory.
    Fixtures(FixturesArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ComputeOp {
    Mp,
    OneMp,
    Drazin,
    OneD,
    OneStar,
    Inv,
    Index,
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long, value_enum)]
    op: ComputeOp,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    transform: PathBuf,
    /// Explicit inner inverse of the input, as a tensor file (validated).
    #[arg(long)]
    params: Option<PathBuf>,
    /// Seed for random free parameters of the inner inverse.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClaimArg {
    Mp,
    OneMp,
    Drazin,
    OneD,
    OneStar,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    claim: ClaimArg,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    x: PathBuf,
    /// Inner inverse the claim is relative to (one-d and one-star only).
    #[arg(long = "a-minus")]
    a_minus: Option<PathBuf>,
    #[arg(long)]
    transform: PathBuf,
    #[arg(long, default_value_t = DEFAULT_VERIFY_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SystemArg {
    MpProj,
    MpRight,
    DrazinProj,
    DrazinRight,
    StarProj,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    system: SystemArg,
    #[arg(long)]
    a: PathBuf,
    /// Right-hand side (projected systems only).
    #[arg(long)]
    b: Option<PathBuf>,
    /// Free tensor selecting one member of the family.
    #[arg(long)]
    z: Option<PathBuf>,
    /// Seed for a random free tensor (alternative to --z).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    transform: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Also write the whole family (side, particular, projector).
    #[arg(long = "family-out")]
    family_out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Shape as three comma-separated dimensions, e.g. 3,2,4.
    #[arg(long, value_parser = parse_shape)]
    shape: (usize, usize, usize),
    #[arg(long)]
    seed: u64,
    /// Prescribe the overall index (square shapes; needs --transform).
    #[arg(long)]
    index: Option<usize>,
    /// Mixing matrix used by the prescribed-index construction.
    #[arg(long)]
    transform: Option<PathBuf>,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct FixturesArgs {
    /// Directory to populate (created if missing).
    #[arg(long)]
    dir: PathBuf,
}

fn parse_shape(text: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<_> = text.split(',').collect();
    if parts.len() != 3 {
        return Err("expected three comma-separated dimensions, e.g. 3,2,4".into());
    }
    let dim = |s: &str| -> Result<usize, String> {
        let n = s
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("bad dimension {s:?}: {e}"))?;
        if n == 0 {
            return Err("dimensions must be positive".into());
        }
        Ok(n)
    };
    Ok((dim(parts[0])?, dim(parts[1])?, dim(parts[2])?))
}

/// Runs the command line and returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                FileError::Numeric(_) => 3,
                _ => 2,
            }
        }
    }
}

/// A usage error discovered after argument parsing (flag combinations that
/// clap's declarative constraints cannot express).
fn usage(detail: impl Into<String>) -> FileError {
    FileError::Schema {
        path: PathBuf::from("usage"),
        detail: detail.into(),
    }
}

fn run(command: Command) -> FileResult<i32> {
    match command {
        Command::Compute(args) => compute(args),
        Command::Verify(args) => verify(args),
        Command::Solve(args) => solve(args),
        Command::Gen(args) => gen(args),
        Command::Fixtures(args) => fixtures(args),
    }
}

/// Builds the inner-inverse parameters a subcommand asked for: explicit
/// tensor file, seeded random blocks, or all zeros.
fn params_for(
    a: &DenseTensor3,
    t: &TransformSpec,
    params: &Option<PathBuf>,
    seed: Option<u64>,
) -> FileResult<OneInverseParams> {
    if params.is_some() && seed.is_some() {
        return Err(usage("--params and --seed are mutually exclusive"));
    }
    if let Some(path) = params {
        let g = load_tensor(path)?;
        return Ok(OneInverseParams::from_one_inverse(a, &g, t)?);
    }
    let svd = slice_svd(a, t, None)?;
    Ok(match seed {
        Some(seed) => OneInverseParams::seeded(&svd, seed),
        None => OneInverseParams::zeros(&svd),
    })
}

fn compute(args: ComputeArgs) -> FileResult<i32> {
    let takes_params = matches!(
        args.op,
        ComputeOp::OneMp | ComputeOp::OneD | ComputeOp::OneStar
    );
    if !takes_params && (args.params.is_some() || args.seed.is_some()) {
        return Err(usage("--params/--seed apply only to one-mp, one-d, one-star"));
    }

    let a = load_tensor(&args.input)?;
    let t = load_transform(&args.transform)?;

    if args.op == ComputeOp::Index {
        if args.output.is_some() {
            return Err(usage("--op index prints to stdout; --output is not accepted"));
        }
        let index = tensor_index(&a, &t)?;
        let per_slice: Vec<_> = index.per_slice.iter().map(|k| k.to_string()).collect();
        println!(
            "{{\"per_slice\": [{}], \"overall\": {}}}",
            per_slice.join(", "),
            index.overall
        );
        return Ok(0);
    }

    let output = args
        .output
        .as_deref()
        .ok_or_else(|| usage("--output is required for this op"))?;
    let x = match args.op {
        ComputeOp::Mp => mp_inverse(&a, &t)?,
        ComputeOp::Drazin => drazin_inverse(&a, &t)?,
        ComputeOp::Inv => exact_inverse(&a, &t)?,
        ComputeOp::OneMp => one_mp_inverse(&a, &t, &params_for(&a, &t, &args.params, args.seed)?)?,
        ComputeOp::OneD => one_d_inverse(&a, &t, &params_for(&a, &t, &args.params, args.seed)?)?,
        ComputeOp::OneStar => {
            one_star_inverse(&a, &t, &params_for(&a, &t, &args.params, args.seed)?)?
        }
        ComputeOp::Index => unreachable!("handled above"),
    };
    save_tensor(&x, output)?;
    Ok(0)
}

fn report_json(report: &VerificationReport) -> serde_json::Value {
    serde_json::json!({
        "claim": report.claim.name(),
        "tolerance": report.tolerance,
        "scale": report.scale,
        "residuals": report
            .residuals
            .iter()
            .map(|r| serde_json::json!({"name": r.name, "value": r.value}))
            .collect::<Vec<_>>(),
        "pass": report.pass,
    })
}

fn verify(args: VerifyArgs) -> FileResult<i32> {
    let a = load_tensor(&args.a)?;
    let x = load_tensor(&args.x)?;
    let t = load_transform(&args.transform)?;

    let needs_minus = matches!(args.claim, ClaimArg::OneD | ClaimArg::OneStar);
    if needs_minus != args.a_minus.is_some() {
        return Err(usage(if needs_minus {
            "--a-minus is required for this claim"
        } else {
            "--a-minus applies only to one-d and one-star"
        }));
    }

    let report = match args.claim {
        ClaimArg::Mp => check_penrose(&a, &x, &t, &[1, 2, 3, 4], args.tol)?,
        ClaimArg::OneMp => check_one_mp_system(&a, &x, &t, args.tol)?,
        ClaimArg::Drazin => check_drazin(&a, &x, &t, args.tol)?,
        ClaimArg::OneD => {
            let g = load_tensor(args.a_minus.as_deref().expect("checked above"))?;
            check_one_d(&a, &x, &g, &t, args.tol)?
        }
        ClaimArg::OneStar => {
            let g = load_tensor(args.a_minus.as_deref().expect("checked above"))?;
            check_one_star(&a, &x, &g, &t, args.tol)?
        }
    };
    println!("{}", serde_json::to_string_pretty(&report_json(&report)).expect("report is plain data"));
    Ok(if report.pass { 0 } else { 1 })
}

fn solve(args: SolveArgs) -> FileResult<i32> {
    let a = load_tensor(&args.a)?;
    let t = load_transform(&args.transform)?;
    if args.z.is_some() && args.seed.is_some() {
        return Err(usage("--z and --seed are mutually exclusive"));
    }

    let projected = matches!(
        args.system,
        SystemArg::MpProj | SystemArg::DrazinProj | SystemArg::StarProj
    );
    if projected != args.b.is_some() {
        return Err(usage(if projected {
            "--b is required for projected systems"
        } else {
            "--b applies only to projected systems"
        }));
    }

    let params = OneInverseParams::zeros(&slice_svd(&a, &t, None)?);
    let family: SolutionFamily = match args.system {
        SystemArg::MpProj => {
            let b = load_tensor(args.b.as_deref().expect("checked above"))?;
            solve_mp_projected(&a, &b, &t, &params)?
        }
        SystemArg::DrazinProj => {
            let b = load_tensor(args.b.as_deref().expect("checked above"))?;
            solve_drazin_projected(&a, &b, &t, &params)?
        }
        SystemArg::StarProj => {
            let b = load_tensor(args.b.as_deref().expect("checked above"))?;
            solve_star_projected(&a, &b, &t, &params)?
        }
        SystemArg::MpRight => solve_mp_right(&a, &t, &params)?,
        SystemArg::DrazinRight => solve_drazin_right(&a, &t, &params)?,
    };

    let (zn1, zn2, zn3) = family.free_shape();
    let z = if let Some(path) = &args.z {
        let z = load_tensor(path)?;
        if z.shape() != (zn1, zn2, zn3) {
            return Err(usage(format!(
                "--z must be {zn1}x{zn2}x{zn3}, got {}x{}x{}",
                z.n1(),
                z.n2(),
                z.n3()
            )));
        }
        z
    } else if let Some(seed) = args.seed {
        random_tensor(zn1, zn2, zn3, seed)
    } else {
        DenseTensor3::zeros(zn1, zn2, zn3)
    };

    let x = family.instantiate(&z, &t)?;
    save_tensor(&x, &args.output)?;
    if let Some(path) = &args.family_out {
        save_family(&family, path)?;
    }
    Ok(0)
}

fn gen(args: GenArgs) -> FileResult<i32> {
    let (n1, n2, n3) = args.shape;
    let tensor = match args.index {
        None => {
            if args.transform.is_some() {
                return Err(usage("--transform is only used with --index"));
            }
            random_tensor(n1, n2, n3, args.seed)
        }
        Some(k) => {
            if n1 != n2 {
                return Err(usage("--index requires a square shape"));
            }
            let path = args
                .transform
                .as_deref()
                .ok_or_else(|| usage("--index requires --transform"))?;
            let t = load_transform(path)?;
            if t.n3() != n3 {
                return Err(usage(format!(
                    "transform is {0}x{0} but shape has n3 = {n3}",
                    t.n3()
                )));
            }
            tensor_with_index(n1, k, args.seed, &t)?
        }
    };
    save_tensor(&tensor, &args.output)?;
    Ok(0)
}

/// Writes the worked-example inputs and expected outputs the library's
/// fixtures module documents, one subdirectory per example.
fn fixtures(args: FixturesArgs) -> FileResult<i32> {
    use mprod::fixtures as fx;

    let dir = &args.dir;
    let make = |sub: &str| -> FileResult<PathBuf> {
        let path = dir.join(sub);
        std::fs::create_dir_all(&path).map_err(|source| FileError::Io {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    };
    let t = fx::mixing_transform();

    let one_mp = make("one_mp")?;
    save_tensor(&fx::one_mp_input(), &one_mp.join("a.json"))?;
    save_transform(&t, &one_mp.join("m.json"))?;
    save_tensor(&fx::one_mp_expected(), &one_mp.join("expected.json"))?;

    let one_d = make("one_d")?;
    save_tensor(&fx::one_d_input(), &one_d.join("a.json"))?;
    save_transform(&t, &one_d.join("m.json"))?;
    save_tensor(&fx::one_d_inner_inverse(), &one_d.join("a_minus.json"))?;
    save_tensor(&fx::one_d_expected(), &one_d.join("expected.json"))?;

    let one_star = make("one_star")?;
    save_tensor(&fx::one_star_input(), &one_star.join("a.json"))?;
    save_transform(&t, &one_star.join("m.json"))?;
    save_tensor(&fx::one_star_g(), &one_star.join("g.json"))?;
    save_tensor(&fx::one_star_expected(), &one_star.join("expected.json"))?;

    let star_solve = make("star_solve")?;
    save_tensor(&fx::solve_star_input(), &star_solve.join("a.json"))?;
    save_transform(&t, &star_solve.join("m.json"))?;
    save_tensor(&fx::solve_star_rhs(), &star_solve.join("b.json"))?;
    save_tensor(&fx::solve_star_expected(), &star_solve.join("expected.json"))?;

    eprintln!("wrote fixture sets under {}", dir.display());
    Ok(0)
}
