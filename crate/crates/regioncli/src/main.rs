//! `extcond`: command-line front end for dataset checks, PSD certificates,
//! region scans, figure reproduction, engine cross-checks and chain bounds.
//!
//! Exit codes: 0 when the condition holds or the command succeeded, 1 when
//! it is violated, 2 on usage or validation errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use extcond::certify::{solve_psd_feasibility, PsdFeasibilityProblem, PsdOptions};
use extcond::dispatch::{certify, check, ClassName, ClassParams};
use extcond::oracle::{run_oracle, OracleFamily, OracleOptions};
use extcond::region::{builtin_figure, render, GridFormat, RegionGrid, RegionSpec};
use extcond::strengthened::{bounds_bu, SimplexScan};
use extcond::{load_dataset, ClassSpec, Dataset, Error, Tolerance};

#[derive(Parser, Debug)]
#[command(name = "extcond", version, about = "Interpolation and strengthened extension conditions for finite datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a dataset file against a class and print the verdict as JSON.
    Check {
        #[command(flatten)]
        class: ClassFlags,
        #[command(flatten)]
        numeric: NumericFlags,
        /// Dataset JSON file.
        dataset: PathBuf,
    },
    /// Classify the grid of a region spec file.
    Region {
        /// Region spec JSON file.
        spec: PathBuf,
        #[command(flatten)]
        output: OutputFlags,
        /// Cells per axis, overriding the spec.
        #[arg(long)]
        grid: Option<usize>,
        /// Overrides the tolerance of the spec.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Reproduce one of the built-in figures 1 to 6 as a region classification.
    Figure {
        number: u32,
        #[command(flatten)]
        output: OutputFlags,
        /// Cells per axis.
        #[arg(long)]
        grid: Option<usize>,
        /// Range of the first coordinate, as `lo,hi`.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        xrange: Option<[f64; 2]>,
        /// Range of the second coordinate, as `lo,hi`.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        yrange: Option<[f64; 2]>,
    },
    /// Solve the PSD systems of a dataset, or a raw PSD problem file.
    Sdp {
        #[command(flatten)]
        class: ClassFlags,
        #[arg(long)]
        tol: Option<f64>,
        /// Eigenvalue tolerance of the PSD solver.
        #[arg(long, default_value_t = PsdOptions::default().eps_psd)]
        eps_psd: f64,
        #[arg(long, default_value_t = PsdOptions::default().max_iter)]
        max_iter: usize,
        /// Dataset JSON file, or a PSD problem JSON file with `blocks` and `theta_dim`.
        input: PathBuf,
    },
    /// Compare the numeric extension engine with a closed-form condition on random data.
    Oracle {
        /// `smooth-convex` (engine on p′ against p″) or `op-lipschitz`.
        #[arg(long)]
        class: String,
        #[arg(long = "L")]
        l: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Largest dimension; trials cycle through 1..=dim.
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Candidate grid points per axis.
        #[arg(long, default_value_t = 17)]
        grid: usize,
        /// Margin band, relative to scale, excluded from the comparison.
        #[arg(long, default_value_t = 1e-3)]
        band: f64,
    },
    /// Lower and upper bounds on f(y) from a one- or two-step chain.
    Bounds {
        #[arg(long = "L")]
        l: f64,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        x: Coords,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        gx: Coords,
        #[arg(long, allow_hyphen_values = true)]
        fx: f64,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        y: Coords,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        gy: Coords,
        /// 1 or 2; both when omitted.
        #[arg(long)]
        steps: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct ClassFlags {
    /// smooth-convex, smooth-convex-alpha, loja, blockwise, op-monotone,
    /// op-cocoercive, unif-convex, op-lipschitz or constrained.
    #[arg(long)]
    class: String,
    /// Check the one-point strengthened condition.
    #[arg(long)]
    strengthened: bool,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long = "L")]
    l: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    fstar: Option<f64>,
    /// One-based coordinate blocks, e.g. "1,2;3".
    #[arg(long)]
    blocks: Option<String>,
    /// Smoothness constant per block, e.g. "1,1".
    #[arg(long = "Lvec")]
    lvec: Option<String>,
    /// Smooth convex form: p, p' or p''.
    #[arg(long)]
    variant: Option<String>,
    /// Domain for the constrained class, as JSON such as
    /// '{"Ball":{"center":[0,0],"radius":2}}'.
    #[arg(long)]
    domain: Option<String>,
}

impl ClassFlags {
    fn spec(&self) -> Result<ClassSpec, Error> {
        let domain = self
            .domain
            .as_deref()
            .map(|text| serde_json::from_str(text).map_err(|e| Error::Parse(format!("--domain: {e}"))))
            .transpose()?;
        let params = ClassParams {
            mu: self.mu,
            l: self.l,
            beta: self.beta,
            q: self.q,
            alpha: self.alpha,
            fstar: self.fstar,
            blocks: self.blocks.clone(),
            lvec: self.lvec.clone(),
            variant: self.variant.clone(),
            domain,
        };
        params.to_spec(ClassName::parse(&self.class)?)
    }
}

#[derive(Args, Debug)]
struct NumericFlags {
    /// Absolute and relative margin tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Simplex subdivisions for the operator triple conditions.
    #[arg(long)]
    grid: Option<usize>,
    /// Accepted for interface uniformity; checks are deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct OutputFlags {
    /// csv, svg or json; guessed from --out, else csv for regions and svg for figures.
    #[arg(long)]
    format: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_vector(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect()
}

/// A comma-separated vector argument.
#[derive(Debug, Clone)]
struct Coords(Vec<f64>);

fn parse_coords(text: &str) -> Result<Coords, String> {
    parse_vector(text).map(Coords)
}

fn parse_range(text: &str) -> Result<[f64; 2], String> {
    match parse_vector(text)?.as_slice() {
        [lo, hi] if lo <= hi => Ok([*lo, *hi]),
        _ => Err("expected `lo,hi` with lo <= hi".into()),
    }
}

fn tolerance(tol: Option<f64>) -> Tolerance {
    tol.map(Tolerance::uniform).unwrap_or_default()
}

/// Writes to standard output; a closed pipe downstream is not an error.
fn emit_stdout(text: &str) -> Result<(), Error> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Io(e.to_string())),
        _ => Ok(()),
    }
}

fn print_json(value: &Value) -> Result<(), Error> {
    emit_stdout(&(serde_json::to_string_pretty(value).expect("JSON value serializes") + "\n"))
}

fn write_grid(grid: &RegionGrid, output: &OutputFlags, default: GridFormat) -> Result<(), Error> {
    let format = match (&output.format, &output.out) {
        (Some(name), _) => GridFormat::parse(name)?,
        (None, Some(path)) => GridFormat::from_path(path).unwrap_or(default),
        (None, None) => default,
    };
    let text = render(grid, format);
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => emit_stdout(&text),
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Outcome of a command: `true` when the condition holds.
fn run(command: Command) -> Result<bool, Error> {
    match command {
        Command::Check { class, numeric, dataset } => {
            let spec = class.spec()?;
            let ds = load_dataset(&dataset, Some(spec.kind()))?;
            let mut scan = SimplexScan::default();
            if let Some(n) = numeric.grid {
                scan.subdivisions = n.max(1);
            }
            let verdict = check(&ds, &spec, class.strengthened, &scan, &tolerance(numeric.tol))?;
            print_json(&json!({
                "class": class.class,
                "strengthened": class.strengthened,
                "verdict": verdict,
            }))?;
            Ok(verdict.satisfied)
        }
        Command::Region { spec, output, grid, tol } => {
            let mut spec = RegionSpec::from_json_value(&read_json(&spec)?)?;
            if let Some(n) = grid {
                spec.resolution.iter_mut().for_each(|r| *r = n);
            }
            if let Some(t) = tol {
                spec.tol = Tolerance::uniform(t);
            }
            write_grid(&spec.scan()?, &output, GridFormat::Csv)?;
            Ok(true)
        }
        Command::Figure { number, output, grid, xrange, yrange } => {
            let mut figure = builtin_figure(number)?;
            if let Some(n) = grid {
                figure.set_resolution(n, n);
            }
            if xrange.is_some() || yrange.is_some() {
                let current = match &figure {
                    extcond::region::Figure::Scan(spec) => [spec.ranges[0], spec.ranges[1]],
                    extcond::region::Figure::Bounds(b) => b.ranges,
                };
                figure.set_ranges(xrange.unwrap_or(current[0]), yrange.unwrap_or(current[1]));
            }
            write_grid(&figure.scan()?, &output, GridFormat::Svg)?;
            Ok(true)
        }
        Command::Sdp { class, tol, eps_psd, max_iter, input } => {
            let opts = PsdOptions { eps_psd, max_iter };
            let value = read_json(&input)?;
            if value.get("blocks").is_some() {
                let problem = PsdFeasibilityProblem::from_json_value(&value)?;
                let verdict = solve_psd_feasibility(&problem, &opts);
                print_json(&json!(verdict))?;
                return Ok(verdict.feasible);
            }
            let spec = class.spec()?;
            let ds = Dataset::from_json_value(&value, Some(spec.kind()))?;
            let certificate = certify(&ds, &spec, &tolerance(tol), &opts)?;
            print_json(&json!({ "class": class.class, "certificate": certificate }))?;
            Ok(certificate.feasible)
        }
        Command::Oracle { class, l, seed, trials, dim, grid, band } => {
            let family = match ClassName::parse(&class)? {
                ClassName::SmoothConvex => OracleFamily::SmoothConvex { l },
                ClassName::OpLipschitz => OracleFamily::OpLipschitz { l },
                other => {
                    return Err(Error::Unsupported(format!("no closed-form oracle for class {other}")));
                }
            };
            let opts = OracleOptions { trials, seed, max_dim: dim, grid_per_axis: grid, band };
            let report = run_oracle(family, &opts)?;
            print_json(&json!({
                "report": report,
                "mismatch_rate": report.mismatch_rate(),
            }))?;
            Ok(report.mismatches.is_empty())
        }
        Command::Bounds { l, x, gx, fx, y, gy, steps } => {
            let counts = match steps {
                Some(n @ (1 | 2)) => vec![n],
                Some(n) => return Err(Error::Parameter(format!("--steps must be 1 or 2, got {n}"))),
                None => vec![1, 2],
            };
            let results = counts
                .into_iter()
                .map(|n| bounds_bu(&x.0, &gx.0, fx, &y.0, &gy.0, l, n))
                .collect::<Result<Vec<_>, _>>()?;
            let feasible = results.iter().all(|b| b.feasible);
            print_json(&json!(results))?;
            Ok(feasible)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
