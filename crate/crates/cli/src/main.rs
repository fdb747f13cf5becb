//! `opconvex` command-line front end.
//!
//! Exit codes: 0 success or no violation, 1 mathematical violation found,
//! 2 usage, input or configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use opconvex::entropy::{von_neumann_entropy, DensityMatrix};
use opconvex::jensen::{counterexample_search, recheck, verify_suite, Functional, SuiteSpec, Witness};
use opconvex::{ComplexMatrix, Error, MatrixFile, MatrixKind, PositiveMatrix, ScalarFunction, ToleranceConfig};

#[derive(Parser)]
#[command(name = "opconvex", version, about = "Matrix perspectives, quantum entropies and randomized operator-convexity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a functional on matrices read from files, or replay a witness.
    Eval(EvalArgs),
    /// Run a seeded verification suite and write its report.
    Verify(VerifyArgs),
    /// Search for a counterexample to the affine Jensen inequality.
    Search(SearchArgs),
}

#[derive(Args)]
struct FunctionArgs {
    /// Scalar function id, e.g. `xlogx`, `neg_power:s=0.5`.
    #[arg(long = "fn")]
    f: Option<String>,
    /// Denominator function id for Maréchal functionals.
    #[arg(long = "h-fn")]
    h: Option<String>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
}

#[derive(Args)]
struct TolArgs {
    /// Loewner-order tolerance (psd_tol).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    eq_tol: Option<f64>,
    #[arg(long)]
    dom_floor: Option<f64>,
}

#[derive(Args)]
struct EvalArgs {
    /// rel_entropy, vn_entropy, lieb[:s=..], lieb_pq[:p=..,q=..], perspective[:<fn>], marechal.
    functional: Option<String>,
    #[arg(long)]
    rho: Option<PathBuf>,
    #[arg(long)]
    sigma: Option<PathBuf>,
    #[arg(long)]
    a: Option<PathBuf>,
    #[arg(long)]
    b: Option<PathBuf>,
    #[arg(long)]
    k: Option<PathBuf>,
    #[arg(long)]
    x: Option<PathBuf>,
    /// Witness file to replay; prints its recomputed margin.
    #[arg(long, conflicts_with = "functional")]
    witness: Option<PathBuf>,
    #[command(flatten)]
    func: FunctionArgs,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// affine_jensen, subhom_jensen, shift_route, joint_convexity:<functional>,
    /// loewner_convexity[:<fn>], counterexample[:<fn>].
    suite: String,
    #[command(flatten)]
    func: FunctionArgs,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    tol: TolArgs,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long = "fn")]
    f: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    tol: TolArgs,
    /// Witness path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type CliResult = Result<u8, Failure>;

fn tolerances(t: &TolArgs) -> Result<ToleranceConfig, Failure> {
    let mut cfg = ToleranceConfig::default();
    if let Some(v) = t.tol {
        cfg.psd_tol = v;
    }
    if let Some(v) = t.eq_tol {
        cfg.eq_tol = v;
    }
    if let Some(v) = t.dom_floor {
        cfg.dom_floor = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_fn(id: &Option<String>) -> Result<Option<ScalarFunction>, Failure> {
    Ok(id.as_deref().map(ScalarFunction::parse).transpose()?)
}

/// Formats `v` with 15 significant digits.
fn sig15(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        format!("{:.*}", (14 - exp).max(0) as usize, v)
    } else {
        format!("{v:.14e}")
    }
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

struct Operand<'a> {
    name: &'a str,
    path: &'a Option<PathBuf>,
}

impl Operand<'_> {
    fn file(&self) -> Result<MatrixFile, Failure> {
        let path: &Path = self
            .path
            .as_deref()
            .ok_or_else(|| usage(format!("missing operand --{}", self.name)))?;
        let file = MatrixFile::load(path)?;
        if file.entries.nrows() != file.n {
            return Err(usage(format!("{}: n = {} but {} rows", self.name, file.n, file.entries.nrows())));
        }
        Ok(file)
    }

    /// Loads the operand and checks any kind claimed in the file.
    fn checked(&self, cfg: &ToleranceConfig) -> Result<MatrixFile, Failure> {
        let file = self.file()?;
        let claimed = match file.kind {
            Some(MatrixKind::Hermitian) => file.hermitian().map(|_| ()),
            Some(MatrixKind::Positive) => file.positive(cfg, self.name).map(|_| ()),
            Some(MatrixKind::Density) => file.density(cfg, self.name).map(|_| ()),
            Some(MatrixKind::General) | None => Ok(()),
        };
        claimed.map_err(|e| usage(format!("{}: {e}", self.name)))?;
        Ok(file)
    }

    fn general(&self, cfg: &ToleranceConfig) -> Result<ComplexMatrix, Failure> {
        let file = self.checked(cfg)?;
        if file.entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(usage(format!("{}: non-finite entry", self.name)));
        }
        Ok(file.entries)
    }

    fn positive(&self, cfg: &ToleranceConfig) -> Result<PositiveMatrix, Failure> {
        let file = self.file()?;
        let p = file.positive(cfg, self.name).map_err(|e| prefix(self.name, e))?;
        self.checked(cfg)?;
        Ok(p)
    }

    fn density(&self, cfg: &ToleranceConfig) -> Result<DensityMatrix, Failure> {
        let file = self.file()?;
        let d = file.density(cfg, self.name).map_err(|e| prefix(self.name, e))?;
        self.checked(cfg)?;
        Ok(d)
    }
}

/// Positivity errors already name the operand; others get it prefixed.
fn prefix(name: &str, e: Error) -> Failure {
    match e {
        Error::NotPositive { .. } | Error::Precondition(_) => e.into(),
        other => usage(format!("{name}: {other}")),
    }
}

fn eval(args: &EvalArgs) -> CliResult {
    let cfg = tolerances(&args.tol)?;
    if let Some(path) = &args.witness {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let w = Witness::parse(&text)?;
        let rep = recheck(&w, &cfg)?;
        println!("{}", sig15(rep.margin));
        eprintln!(
            "{} trial {}: margin {} (stored {}), scale {}",
            w.suite,
            w.trial,
            sig15(rep.margin),
            sig15(w.margin),
            sig15(rep.scale)
        );
        return Ok(0);
    }
    let id = args
        .functional
        .as_deref()
        .ok_or_else(|| usage("eval needs a functional id or --witness"))?;
    let f = parse_fn(&args.func.f)?;
    let h = parse_fn(&args.func.h)?;
    let functional = Functional::parse(id, f.as_ref(), h.as_ref(), args.func.s, args.func.p, args.func.q)?;
    let op = |name, path| Operand { name, path };
    let value = match &functional {
        Functional::RelEntropy => {
            let rho = op("rho", &args.rho).density(&cfg)?;
            let sigma = op("sigma", &args.sigma).density(&cfg)?;
            functional.eval(rho.positive(), sigma.positive(), &ComplexMatrix::zeros(0, 0), &cfg)?
        }
        Functional::VnEntropy => {
            let rho = op("rho", &args.rho).density(&cfg)?;
            von_neumann_entropy(&rho, &cfg)?
        }
        Functional::LiebPq(_) => {
            let a = op("a", &args.a).positive(&cfg)?;
            let b = op("b", &args.b).positive(&cfg)?;
            let x = op("x", &args.x).general(&cfg)?;
            functional.eval(&a, &b, &x, &cfg)?
        }
        Functional::Lieb { .. } | Functional::Perspective(_) | Functional::Marechal(..) => {
            let a = op("a", &args.a).positive(&cfg)?;
            let b = op("b", &args.b).positive(&cfg)?;
            let k = op("k", &args.k).general(&cfg)?;
            functional.eval(&a, &b, &k, &cfg)?
        }
    };
    println!("{}", sig15(value));
    Ok(0)
}

fn verify(args: &VerifyArgs) -> CliResult {
    let cfg = tolerances(&args.tol)?;
    let f = parse_fn(&args.func.f)?;
    let h = parse_fn(&args.func.h)?;
    let spec = SuiteSpec::parse(&args.suite, f, h, args.func.s, args.func.p, args.func.q, args.n, args.trials, args.seed)?;
    let report = verify_suite(&spec, &cfg)?;
    write_out(&args.out, &report.to_canonical_json())?;
    eprintln!(
        "{}: {} trials, worst margin/scale {:.3e}, {} violations, {:.2}s",
        report.suite,
        report.trials_run,
        report.worst_relative_margin,
        report.violations.len(),
        report.elapsed.as_secs_f64()
    );
    Ok(if report.passed { 0 } else { 1 })
}

fn search(args: &SearchArgs) -> CliResult {
    let cfg = tolerances(&args.tol)?;
    let f = ScalarFunction::parse(&args.f)?;
    let outcome = counterexample_search(&f, args.n, args.trials, args.seed, &cfg)?;
    match outcome.witness {
        Some(w) => {
            write_out(&args.out, &w.to_canonical_json())?;
            eprintln!(
                "witness at trial {}: margin {} (scale {})",
                w.trial,
                sig15(w.margin),
                sig15(w.scale)
            );
            Ok(1)
        }
        None => {
            println!("none");
            eprintln!("no witness in {} trials", outcome.trials_run);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval(a) => eval(a),
        Command::Verify(a) => verify(a),
        Command::Search(a) => search(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::sig15;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(sig15(0.14384103622589045), "0.143841036225890");
        assert_eq!(sig15(5.0), "5.00000000000000");
        assert_eq!(sig15(-1234.5), "-1234.50000000000");
        assert_eq!(sig15(0.0), "0");
        assert_eq!(sig15(1.5e-9), "1.50000000000000e-9");
    }
}
