//! `lieframe`: analyze a group spec, build a window and sampling plan, verify the frame.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use lieframe::catalog::{all_entries, get_entry};
use lieframe::frame::{estimate_frame_bounds, norm_squared, SumOptions, Thresholds};
use lieframe::pipeline::{Built, Problem, VerifyOptions, WindowRecipe};
use lieframe::specfile::{load_problem, SpecFile};
use lieframe::FrameError;

const EXIT_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_PIPELINE: u8 = 3;

#[derive(Parser)]
#[command(name = "lieframe", version, about = "Frames for induced representations of split Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the spec, test the immersion condition and sample the weight.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Build the frequency box, cover and window; predict the frame bounds.
    Build {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        knobs: Knobs,
    },
    /// Build, then check frame sums of seeded test functions against the bounds.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        knobs: Knobs,
        /// Seed for the random test functions.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of test functions.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        tests: u64,
        /// TOML file overriding any of bound_slack, parseval_tol, oracle_tol, gram_tol, tail_tol.
        #[arg(long)]
        thresholds_file: Option<PathBuf>,
    },
    /// List the catalog ids.
    CatalogList,
    /// Print a catalog entry (or re-print a spec file) as a TOML spec file.
    ExportSpec {
        #[arg(long)]
        input: String,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Catalog id or path to a TOML spec file.
    #[arg(long)]
    input: String,
    /// Directory for JSON and CSV outputs.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum WindowChoice {
    #[value(alias = "parseval")]
    SplineParseval,
    Indicator,
    CustomFile,
}

#[derive(Args)]
struct WindowArgs {
    /// Window family; the entry's default when omitted.
    #[arg(long, value_enum)]
    window: Option<WindowChoice>,
    /// B-spline degree for spline-parseval.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=8))]
    degree: u64,
    /// CSV table `t1..tr,value` for custom-file.
    #[arg(long)]
    window_file: Option<PathBuf>,
}

#[derive(Args)]
struct Knobs {
    /// Gauss-Legendre points per axis and piece.
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(2..=256))]
    quad_order: u64,
    /// Starting grid per axis for the periodization bounds.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(2..))]
    grid: u64,
    /// Largest Γ_N shell radius in the frame sum.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(i64).range(2..))]
    trunc: i64,
}

impl WindowArgs {
    fn recipe(&self) -> Result<Option<WindowRecipe>, Failure> {
        Ok(match self.window {
            None => None,
            Some(WindowChoice::SplineParseval) => Some(WindowRecipe::SplineParseval { degree: self.degree as usize }),
            Some(WindowChoice::Indicator) => Some(WindowRecipe::Indicator),
            Some(WindowChoice::CustomFile) => {
                let path = self
                    .window_file
                    .clone()
                    .ok_or_else(|| Failure::invalid("--window custom-file needs --window-file"))?;
                if !path.exists() {
                    return Err(Failure::invalid(format!("window file {} not found", path.display())));
                }
                Some(WindowRecipe::Tabulated { path })
            }
        })
    }
}

/// An exit code with the message and, for pipeline errors, a JSON payload.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_INVALID, message: msg.into() }
    }

    fn pipeline(e: FrameError) -> Self {
        Failure { code: EXIT_PIPELINE, message: e.to_string() }
    }
}

/// Loading and input errors are the caller's fault (2); the rest are pipeline errors (3).
fn classify(e: FrameError) -> Failure {
    match e {
        FrameError::InvalidSpec(_)
        | FrameError::DimensionMismatch { .. }
        | FrameError::UnknownCatalog(_)
        | FrameError::Io { .. }
        | FrameError::Parse(_) => Failure::invalid(e.to_string()),
        other => Failure::pipeline(other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let verify_out = match &cli.command {
        Command::Verify { common, .. } => common.out_dir.clone(),
        _ => None,
    };
    let result = run(cli.command);
    eprintln!("elapsed {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            if f.code == EXIT_PIPELINE {
                let payload = json!({ "status": "error", "error": f.message });
                let text = serde_json::to_string_pretty(&payload).unwrap_or_default();
                println!("{text}");
                if let Some(dir) = verify_out {
                    let _ = fs::create_dir_all(&dir).and_then(|_| fs::write(dir.join("report.json"), text + "\n"));
                }
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Result<u8, Failure> {
    match cmd {
        Command::Analyze { common } => analyze(&common),
        Command::Build { common, window, knobs } => build(&common, &window, &knobs),
        Command::Verify { common, window, knobs, seed, tests, thresholds_file } => {
            verify(&common, &window, &knobs, seed, tests as usize, thresholds_file.as_deref())
        }
        Command::CatalogList => {
            for e in all_entries().map_err(Failure::pipeline)? {
                println!("{:<22} {}", e.id, e.title);
            }
            Ok(0)
        }
        Command::ExportSpec { input, out } => {
            let text = match get_entry(&input) {
                Ok(e) => SpecFile::from_problem(&e.problem).to_toml(),
                Err(_) => SpecFile::load(Path::new(&input)).and_then(|s| s.to_toml()),
            }
            .map_err(classify)?;
            match out {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::pipeline(FrameError::Parse(e.to_string())))?;
    write(path, &(text + "\n"))
}

fn out_dir(common: &Common) -> Result<Option<PathBuf>, Failure> {
    if let Some(d) = &common.out_dir {
        fs::create_dir_all(d).map_err(|e| Failure::invalid(format!("cannot create {}: {e}", d.display())))?;
    }
    Ok(common.out_dir.clone())
}

fn load(common: &Common) -> Result<Problem, Failure> {
    load_problem(&common.input).map_err(classify)
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn analyze(common: &Common) -> Result<u8, Failure> {
    let problem = load(common)?;
    let dir = out_dir(common)?;
    let report = match problem.analyze() {
        Ok(r) => r,
        Err(FrameError::InvalidSpec(msg)) => {
            eprintln!("spec violations:");
            for v in msg.split("; ") {
                eprintln!("  {v}");
            }
            return Err(Failure::invalid("invalid spec"));
        }
        Err(e) => return Err(classify(e)),
    };
    println!("entry {}  (n = {}, r = {})", report.entry, report.n_dim, report.r_dim);
    println!("D =");
    for row in &report.jacobian {
        println!("  {}", fmt_vec(row));
    }
    println!("det(D^T D) = {:.6e}  (threshold {:.3e})", report.immersion.det_dtd, report.immersion.threshold);
    if !report.immersion.passes {
        println!("immersion fails");
    } else {
        println!("immersion passes");
        let j: Vec<usize> = report.index_set.iter().map(|i| i + 1).collect();
        println!("J = {j:?}");
        if let Some(b) = &report.domain {
            let radii: Vec<f64> = (0..b.dim()).map(|k| 0.5 * b.width(k)).collect();
            println!("O = {} .. {}  radii {}", fmt_vec(&b.lo), fmt_vec(&b.hi), fmt_vec(&radii));
        }
        println!("haar {}", report.haar);
        if let Some(e) = &report.chart_error {
            println!("chart error: {e}");
        }
        if !report.weight_samples.is_empty() {
            println!("W samples (t, xi, W):");
            for s in &report.weight_samples {
                println!("  {}  {}  {:.10e}", fmt_vec(&s.t), fmt_vec(&s.xi), s.weight);
            }
        }
    }
    if let Some(d) = dir {
        write_json(&d.join("analysis.json"), &report)?;
    }
    Ok(if report.immersion.passes && report.chart_error.is_none() { 0 } else { EXIT_FAIL })
}

fn build_problem(common: &Common, window: &WindowArgs) -> Result<(Problem, Built), Failure> {
    let problem = load(common)?;
    let recipe = window.recipe()?;
    let built = problem.build(recipe).map_err(classify)?;
    Ok((problem, built))
}

fn write_build_outputs(dir: &Path, built: &Built) -> Result<(), Failure> {
    write_json(&dir.join("sampling.json"), &built.plan)?;
    let per_axis = match built.window.dim() {
        0 | 1 => 401,
        2 => 41,
        _ => 13,
    };
    built.window.write_csv(&dir.join("window.csv"), per_axis).map_err(Failure::pipeline)
}

fn build(common: &Common, window: &WindowArgs, knobs: &Knobs) -> Result<u8, Failure> {
    let (_, built) = build_problem(common, window)?;
    let dir = out_dir(common)?;
    if built.chart.dim() >= 3 {
        eprintln!("note: bound estimation in {} dimensions is slow", built.chart.dim());
    }
    let bounds = estimate_frame_bounds(
        &built.chart,
        &built.cover,
        &built.window,
        &built.fbox,
        Some(&built.plan.region),
        knobs.grid as usize,
    )
    .map_err(Failure::pipeline)?;
    let norm = norm_squared(&built.chart, &built.window, 2 * knobs.quad_order as usize).map_err(Failure::pipeline)?;
    let parseval = bounds.tight && (bounds.lower - 1.0).abs() <= 1e-8 && (bounds.upper - 1.0).abs() <= 1e-8;
    let onb_candidate = parseval && (norm - 1.0).abs() <= 1e-8;
    println!("entry {}  window {}", built.plan.entry, built.plan.window.label());
    println!("|C| = {:.6e}  spacing {:.6e}", built.fbox.volume(), built.fbox.spacing());
    println!("predicted A = {:.10}  B = {:.10}  (m = {:.6e}, M = {:.6e})", bounds.lower, bounds.upper, bounds.m_hat, bounds.big_m_hat);
    println!("|f|^2 = {norm:.10}");
    if bounds.m_hat <= 1e-12 {
        println!("not a frame: periodization vanishes somewhere");
    } else if onb_candidate {
        println!("ONB candidate");
    } else if parseval {
        println!("Parseval frame predicted");
    }
    if let Some(d) = dir {
        write_build_outputs(&d, &built)?;
        write_json(
            &d.join("build.json"),
            &json!({
                "entry": built.plan.entry,
                "window": built.plan.window.label(),
                "bounds": bounds,
                "window_norm_sq": norm,
                "parseval_predicted": parseval,
                "onb_candidate": onb_candidate,
            }),
        )?;
    }
    Ok(0)
}

fn load_thresholds(path: Option<&Path>) -> Result<Thresholds, Failure> {
    let Some(path) = path else { return Ok(Thresholds::default()) };
    let text = fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    let th: Thresholds = toml::from_str(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    let all = [th.bound_slack, th.parseval_tol, th.oracle_tol, th.gram_tol, th.tail_tol];
    if all.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Failure::invalid("thresholds must be positive"));
    }
    Ok(th)
}

fn verify(
    common: &Common,
    window: &WindowArgs,
    knobs: &Knobs,
    seed: u64,
    tests: usize,
    thresholds_file: Option<&Path>,
) -> Result<u8, Failure> {
    let thresholds = load_thresholds(thresholds_file)?;
    let (_, built) = build_problem(common, window)?;
    let dir = out_dir(common)?;
    if built.chart.dim() >= 3 {
        eprintln!("note: verification in {} dimensions is slow", built.chart.dim());
    }
    let opts = VerifyOptions {
        seed,
        tests,
        sum: SumOptions {
            quad_order: knobs.quad_order as usize,
            max_radius: knobs.trunc,
            tail_tol: thresholds.tail_tol,
            ..SumOptions::default()
        },
        thresholds,
        bounds_grid: knobs.grid as usize,
    };
    let report = built.verify(&opts).map_err(Failure::pipeline)?;
    println!("entry {}  window {}  seed {}", report.entry, report.window, report.seed);
    println!("A = {:.10}  B = {:.10}  |f|^2 = {:.10}", report.lower_bound, report.upper_bound, report.window_norm_sq);
    if let Some(o) = &report.onb {
        println!("Gram patch residual {:.3e} over {} elements", o.gram_residual, o.patch_size);
    }
    for t in &report.tests {
        println!(
            "  test {}: ratio {:.8}  tail {:.2e}  oracle {:.2e}  {}",
            t.index,
            t.ratio,
            t.tail,
            t.oracle.residual,
            if t.passed { "ok" } else { "FAIL" }
        );
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("verdict {:?}  within thresholds: {}", report.verdict, report.within_thresholds);
    if let Some(d) = dir {
        write_json(&d.join("report.json"), &report)?;
        write(&d.join("report.csv"), &report.to_csv())?;
        write_build_outputs(&d, &built)?;
    }
    Ok(if report.within_thresholds { 0 } else { EXIT_FAIL })
}
