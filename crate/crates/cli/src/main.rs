mod output;

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use pcamean::diagnostics::{self, DiagnosticsReport};
use pcamean::estimators::{pre, theoretical_bias, theoretical_mse};
use pcamean::pca::fit_pca;
use pcamean::population::{read_columns, summarize};
use pcamean::presets::{SummaryInput, MADDALA_LAHIRI};
use pcamean::simulation::{self, Mode, SimulationConfig, GENERATOR};
use pcamean::{Category, EstimatorKind, FinitePopulation, PsiChoice, PsiConfig};

use output::{sig6, table, write_atomic};

#[derive(Parser)]
#[command(name = "pcamean", version, about = "Finite population mean estimators with PCA-combined auxiliaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Theoretical MSE and PRE of every estimator from summary statistics.
    Analyze(AnalyzeArgs),
    /// Monte Carlo grid over correlations and sample sizes.
    Simulate(SimulateArgs),
    /// VIF, eigenvalues and condition index of the x, z columns of a CSV.
    Diagnose(DiagnoseArgs),
    /// First principal component of the x, z columns of a CSV.
    Pca(PcaArgs),
    /// Summary statistics of a y, x, z CSV, in the format `analyze --summary` reads.
    Summarize(SummarizeArgs),
}

#[derive(Args)]
struct PsiArgs {
    /// Shift for x in t*: cv, sd, kurtosis, rho or a number.
    #[arg(long, default_value = "cv")]
    psi_x: PsiChoice,
    /// Shift for z in t*.
    #[arg(long, default_value = "cv")]
    psi_z: PsiChoice,
    /// Shift for the component in t_PCA.
    #[arg(long, default_value = "cv")]
    psi_w: PsiChoice,
}

impl PsiArgs {
    fn config(&self) -> PsiConfig {
        PsiConfig {
            x: self.psi_x,
            z: self.psi_z,
            w: self.psi_w,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Built-in summary (`maddala-lahiri`).
    #[arg(long, conflicts_with = "summary", required_unless_present = "summary")]
    preset: Option<String>,
    /// `key = value` summary file.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    psi: PsiArgs,
    /// Also write the table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// `key = value` config file; defaults are used for absent keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
}

#[derive(Args)]
struct DiagnoseArgs {
    csv: PathBuf,
    /// Correlation to feed the VIF instead of the realized one.
    #[arg(long, allow_hyphen_values = true)]
    nominal_rho: Option<f64>,
}

#[derive(Args)]
struct PcaArgs {
    csv: PathBuf,
    /// Where to write the component scores.
    #[arg(long, default_value = "scores.csv")]
    scores: PathBuf,
}

#[derive(Args)]
struct SummarizeArgs {
    csv: PathBuf,
    /// Sample size to record as `n`.
    #[arg(long, short = 'n')]
    sample_size: usize,
}

/// A message plus the process exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_DEGENERATE: u8 = 4;

fn exit_code(category: Category) -> u8 {
    match category {
        Category::Input => EXIT_INPUT,
        Category::Numerical => EXIT_NUMERICAL,
        Category::Degenerate => EXIT_DEGENERATE,
    }
}

impl From<pcamean::Error> for Failure {
    fn from(e: pcamean::Error) -> Self {
        Failure {
            code: exit_code(e.category()),
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| io_failure(path, e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Simulate(a) => simulate(a),
        Command::Diagnose(a) => diagnose(a),
        Command::Pca(a) => pca(a),
        Command::Summarize(a) => summarize_cmd(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn analyze(args: AnalyzeArgs) -> Result<u8, Failure> {
    let input = match (&args.preset, &args.summary) {
        (Some(name), _) => SummaryInput::preset(name).ok_or_else(|| Failure {
            code: EXIT_INPUT,
            message: format!("unknown preset `{name}` (available: {MADDALA_LAHIRI})"),
        })?,
        (None, Some(path)) => SummaryInput::parse(&read_text(path)?)?,
        (None, None) => unreachable!("clap requires one of --preset, --summary"),
    };
    let summary = input.to_summary(true)?;
    let psi = args.psi.config().resolve(&summary)?;

    let census = summary.theta == 0.0;
    let baseline = theoretical_mse(EstimatorKind::T0, &summary, &psi)?;
    let mut first_error = None;
    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    for kind in EstimatorKind::ALL {
        let mse = theoretical_mse(kind, &summary, &psi);
        let bias = theoretical_bias(kind, &summary, &psi);
        match (mse, bias) {
            (Ok(mse), Ok(bias)) => {
                let p = (!census).then(|| pre(baseline, mse)).transpose()?;
                rows.push(vec![
                    kind.label().to_string(),
                    sig6(mse),
                    p.map(sig6).unwrap_or_else(|| "-".into()),
                    sig6(bias),
                ]);
                csv_rows.push([kind.label().to_string(), mse.to_string(), opt(p), bias.to_string(), String::new()]);
            }
            (Err(e), _) | (_, Err(e)) => {
                rows.push(vec![kind.label().to_string(), "-".into(), "-".into(), "-".into(), e.to_string()]);
                csv_rows.push([kind.label().to_string(), String::new(), String::new(), String::new(), e.to_string()]);
                first_error.get_or_insert(e);
            }
        }
    }

    let mut text = format!(
        "N = {}, n = {}, theta = {}\npsi: x = {}, z = {}, w = {}\n\n",
        summary.population_size,
        summary.sample_size,
        sig6(summary.theta),
        sig6(psi.psi1),
        sig6(psi.psi2),
        psi.psi_w.map(sig6).unwrap_or_default(),
    );
    text.push_str(&table(&["estimator", "mse", "pre", "bias", "note"], &rows));
    print!("{text}");
    if census {
        eprintln!("warning: census (n = N): every MSE is zero and PRE is undefined");
    }
    if let Some(path) = &args.csv {
        write_atomic(path, |w| {
            writeln!(w, "estimator,mse,pre,bias,error")?;
            for r in &csv_rows {
                writeln!(w, "{}", r.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","))?;
            }
            Ok(())
        })
        .map_err(|e| io_failure(path, e))?;
    }
    Ok(first_error.map_or(0, |e| exit_code(e.category())))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn simulate(args: SimulateArgs) -> Result<u8, Failure> {
    let mut cfg = match &args.config {
        Some(p) => SimulationConfig::parse(&read_text(p)?)?,
        None => SimulationConfig::default(),
    };
    if let Some(m) = args.mode {
        cfg.mode = m;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(r) = args.reps {
        cfg.replications = r;
    }
    cfg.validate()?;

    let start = Instant::now();
    let cells = simulation::run_grid(&cfg);
    let elapsed = start.elapsed();

    let out = &args.out;
    let write = |name: &str, f: &dyn Fn(&mut dyn Write) -> pcamean::Result<()>| -> Result<(), Failure> {
        let path = out.join(name);
        write_atomic(&path, |w| f(w).map_err(io::Error::other)).map_err(|e| io_failure(&path, e))
    };
    write("mse.csv", &|w| simulation::write_mse_csv(w, &cells))?;
    write("pre.csv", &|w| simulation::write_pre_csv(w, &cells, cfg.mode))?;
    write("diagnostics.csv", &|w| simulation::write_diagnostics_csv(w, &cells))?;

    let failed: Vec<_> = cells.iter().filter(|c| c.outcome.is_err()).collect();
    let mut meta = String::new();
    let _ = writeln!(meta, "# pcamean {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(meta, "# generator: {GENERATOR}");
    let _ = writeln!(meta, "# seed: {}", cfg.seed);
    let _ = writeln!(meta, "# wall_time_seconds: {:.3}", elapsed.as_secs_f64());
    let _ = writeln!(meta, "# cells: {} ({} failed)", cells.len(), failed.len());
    for c in &failed {
        if let Err(e) = &c.outcome {
            let _ = writeln!(meta, "# failed: n = {}, rho_xz = {}: {e}", c.n, c.rho_xz);
        }
    }
    meta.push_str(&cfg.to_config_text());
    let meta_path = out.join("meta.txt");
    write_atomic(&meta_path, |w| w.write_all(meta.as_bytes())).map_err(|e| io_failure(&meta_path, e))?;

    let mut theory_faults = 0;
    for c in &cells {
        match &c.outcome {
            Err(e) => eprintln!("warning: cell n = {}, rho_xz = {} failed: {e}", c.n, c.rho_xz),
            Ok(r) => {
                for e in &r.estimators {
                    if let Some(err) = &e.theory_error {
                        theory_faults += 1;
                        eprintln!("note: n = {}, rho_xz = {}, {}: {err}", c.n, c.rho_xz, e.kind);
                    }
                }
            }
        }
    }
    println!(
        "{} cells ({} failed, {} theoretical MSEs unavailable) in {:.2} s; wrote {}",
        cells.len(),
        failed.len(),
        theory_faults,
        elapsed.as_secs_f64(),
        out.display()
    );
    Ok(0)
}

fn diagnostics_rows(d: &DiagnosticsReport) -> Vec<Vec<String>> {
    vec![
        vec!["rho_realized".into(), sig6(d.rho_realized)],
        vec!["rho_for_vif".into(), sig6(d.rho_nominal)],
        vec!["vif".into(), sig6(d.vif)],
        vec!["eig1".into(), sig6(d.lambda1)],
        vec!["eig2".into(), sig6(d.lambda2)],
        vec!["ci".into(), sig6(d.ci)],
    ]
}

fn diagnose(args: DiagnoseArgs) -> Result<u8, Failure> {
    let cols = read_columns(open(&args.csv)?, &["x", "z"])?;
    let realized = diagnostics::realized_correlation(&cols[0], &cols[1])?;
    let nominal = args.nominal_rho.unwrap_or(realized);
    let (lambda1, lambda2) = diagnostics::correlation_eigenvalues(realized)?;
    match diagnostics::report_from_correlations(nominal, realized) {
        Ok(d) => {
            print!("{}", table(&["statistic", "value"], &diagnostics_rows(&d)));
            Ok(0)
        }
        Err(e) if e.category() == Category::Degenerate => {
            let vif = diagnostics::vif(nominal).unwrap_or(f64::INFINITY);
            let ci = diagnostics::condition_index(lambda1, lambda2).unwrap_or(f64::INFINITY);
            let d = DiagnosticsReport {
                rho_nominal: nominal,
                rho_realized: realized,
                vif,
                lambda1,
                lambda2,
                ci,
            };
            print!("{}", table(&["statistic", "value"], &diagnostics_rows(&d)));
            eprintln!("degenerate: {e}");
            Ok(EXIT_DEGENERATE)
        }
        Err(e) => Err(e.into()),
    }
}

fn pca(args: PcaArgs) -> Result<u8, Failure> {
    let cols = read_columns(open(&args.csv)?, &["x", "z"])?;
    let (x, z) = (&cols[0], &cols[1]);
    let model = fit_pca(x, z).map_err(|e| Failure {
        // Zero variance is a property of the input file here.
        code: EXIT_INPUT,
        message: e.to_string(),
    })?;
    let (q1, q2) = model.second_loadings();
    let rows = vec![
        vec!["rho".into(), sig6(model.rho)],
        vec!["loading_x".into(), sig6(model.p1), sig6(q1)],
        vec!["loading_z".into(), sig6(model.p2), sig6(q2)],
        vec!["eigenvalue".into(), sig6(model.lambda1), sig6(model.lambda2)],
        vec![
            "variance_explained".into(),
            sig6(model.variance_explained),
            sig6(1.0 - model.variance_explained),
        ],
    ];
    print!("{}", table(&["", "pc1", "pc2"], &rows));
    let w1 = model.scores(x, z);
    let w2 = model.second_scores(x, z);
    write_atomic(&args.scores, |w| {
        writeln!(w, "w,w2")?;
        for (a, b) in w1.iter().zip(&w2) {
            writeln!(w, "{a},{b}")?;
        }
        Ok(())
    })
    .map_err(|e| io_failure(&args.scores, e))?;
    println!("wrote {} scores to {}", w1.len(), args.scores.display());
    Ok(0)
}

fn summarize_cmd(args: SummarizeArgs) -> Result<u8, Failure> {
    let pop = FinitePopulation::from_csv(open(&args.csv)?)?.with_fitted_component()?;
    let s = summarize(&pop, args.sample_size)?;
    let c = s.require_component()?;
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("N", s.population_size.to_string());
    kv("n", s.sample_size.to_string());
    kv("y_bar", s.y_bar.to_string());
    kv("x_bar", s.x_bar.to_string());
    kv("z_bar", s.z_bar.to_string());
    kv("w_bar", c.w_bar.to_string());
    kv("c_y", s.c_y.to_string());
    kv("c_x", s.c_x.to_string());
    kv("c_z", s.c_z.to_string());
    kv("c_w", c.c_w.to_string());
    kv("s_w", c.s_w.to_string());
    kv("rho_yx", s.rho_yx.to_string());
    kv("rho_yz", s.rho_yz.to_string());
    kv("rho_xz", s.rho_xz.to_string());
    kv("rho_yw", c.rho_yw.to_string());
    for (k, v) in [
        ("beta2_x", s.kurtosis.x),
        ("beta2_z", s.kurtosis.z),
        ("beta2_w", s.kurtosis.w),
    ] {
        if let Some(v) = v {
            kv(k, v.to_string());
        }
    }
    io::stdout()
        .write_all(out.as_bytes())
        .map_err(|e| io_failure(Path::new("<stdout>"), e))?;
    Ok(0)
}
