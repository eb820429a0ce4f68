use abstain::datasets::{self, ScoreMixtureSpec, SpiralSpec};
use abstain::empirical::EmpiricalDistribution;
use abstain::io::{
    self, CalibrationSnapshot, ScoreRecord, SNAPSHOT_FORMAT_VERSION,
};
use abstain::metrics;
use abstain::plot;
use abstain::svm::{self, KernelParams, SmoSettings};
use abstain::testing::{CalibratedTester, Decision, TestConfig};
use clap::{Args, Parser, Subcommand};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub enum AppError {
    Usage(String),
    Data(String),
}

impl AppError {
    fn usage(msg: impl Into<String>) -> Self {
        AppError::Usage(msg.into())
    }
    fn data(msg: impl std::fmt::Display) -> Self {
        AppError::Data(msg.to_string())
    }
}

#[derive(Parser)]
#[command(name = "abstain", version, about = "Binary classification with an abstention option")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the spiral benchmark: train an SVM, calibrate the three
    /// experiment configurations and emit histogram and region-map SVGs.
    Spiral(SpiralArgs),
    /// Calibrate acceptance regions from a labeled score CSV and write a
    /// snapshot file.
    Calibrate(CalibrateArgs),
    /// Apply a calibration snapshot to a score CSV and write per-row
    /// decisions.
    Decide(DecideArgs),
    /// Score decisions against true labels and print a metrics table.
    Evaluate(EvaluateArgs),
    /// Export a synthetic dataset as CSV.
    Gen(GenArgs),
}

#[derive(Args)]
struct SvmFlags {
    /// Soft-margin box constraint.
    #[arg(long = "c", default_value_t = 1.0)]
    c: f64,
    /// RBF kernel width gamma.
    #[arg(long, default_value_t = 8.0)]
    gamma: f64,
    /// KKT tolerance.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// SMO outer-iteration budget.
    #[arg(long, default_value_t = 10_000)]
    max_passes: usize,
}

#[derive(Args)]
struct SpiralArgs {
    #[command(flatten)]
    svm: SvmFlags,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Region-map grid resolution.
    #[arg(long, default_value_t = 80)]
    resolution: usize,
    /// Histogram bin count.
    #[arg(long, default_value_t = 30)]
    bins: usize,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct QuantileFlags {
    /// Common significance level (expands to points (alpha, 1-alpha) for
    /// both tests). Mutually exclusive with the explicit q flags.
    #[arg(long, conflicts_with_all = ["q1_lo", "q1_hi", "q2_lo", "q2_hi"])]
    alpha: Option<f64>,
    /// Lower quantile point of test 1.
    #[arg(long, requires_all = ["q1_hi", "q2_lo", "q2_hi"])]
    q1_lo: Option<f64>,
    /// Upper quantile point of test 1.
    #[arg(long)]
    q1_hi: Option<f64>,
    /// Lower quantile point of test 2.
    #[arg(long)]
    q2_lo: Option<f64>,
    /// Upper quantile point of test 2.
    #[arg(long)]
    q2_hi: Option<f64>,
}

impl QuantileFlags {
    fn config(&self) -> Result<TestConfig, AppError> {
        match (self.alpha, self.q1_lo) {
            (Some(a), _) => TestConfig::symmetric(a).map_err(AppError::data),
            (None, Some(lo)) => TestConfig::new(
                lo,
                self.q1_hi.unwrap(),
                self.q2_lo.unwrap(),
                self.q2_hi.unwrap(),
            )
            .map_err(AppError::data),
            (None, None) => TestConfig::symmetric(0.025).map_err(AppError::data),
        }
    }
}

#[derive(Args)]
struct CalibrateArgs {
    /// Labeled score CSV (columns score,label).
    #[arg(long)]
    scores: PathBuf,
    /// Output snapshot path.
    #[arg(long)]
    snapshot: PathBuf,
    #[command(flatten)]
    quantiles: QuantileFlags,
    /// Minimum per-class sample count accepted for calibration.
    #[arg(long, default_value_t = EmpiricalDistribution::DEFAULT_MIN_COUNT)]
    min_count: usize,
}

#[derive(Args)]
struct DecideArgs {
    /// Score CSV; the label column is optional here.
    #[arg(long)]
    scores: PathBuf,
    #[arg(long)]
    snapshot: PathBuf,
    /// Report both uncertainty kinds as a single `uncertain` value.
    #[arg(long)]
    merge_uncertain: bool,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Labeled score CSV to evaluate.
    #[arg(long)]
    scores: PathBuf,
    /// Calibration snapshot; prints one row at its configuration.
    #[arg(long, conflicts_with = "calib")]
    snapshot: Option<PathBuf>,
    /// Labeled score CSV used to recalibrate per requested alpha.
    #[arg(long)]
    calib: Option<PathBuf>,
    /// Significance levels for the sweep (requires --calib). Defaults to
    /// 1.0%, 2.5% and 5.0%.
    #[arg(long)]
    alpha: Vec<f64>,
    /// Which label counts as positive.
    #[arg(long, default_value_t = 1)]
    positive_class: u8,
    /// Report both uncertainty kinds as a single abstention bucket.
    #[arg(long)]
    merge_uncertain: bool,
    #[arg(long, default_value_t = EmpiricalDistribution::DEFAULT_MIN_COUNT)]
    min_count: usize,
}

#[derive(Args)]
struct GenArgs {
    /// Dataset kind: `spiral` (x,y,label CSV) or `scores` (score,label CSV).
    #[arg(long)]
    dataset: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Points per class (spiral) or per-class counts n1=n2 (scores).
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = 1.75)]
    turns: f64,
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    #[arg(long, default_value_t = -3.0)]
    mean1: f64,
    #[arg(long, default_value_t = 3.0)]
    mean2: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0.0)]
    outlier_fraction: f64,
    #[arg(long, default_value_t = 0.0)]
    outlier_shift: f64,
}

pub fn run(cli: Cli) -> Result<bool, AppError> {
    match cli.command {
        Command::Spiral(args) => cmd_spiral(args),
        Command::Calibrate(args) => cmd_calibrate(args).map(|_| false),
        Command::Decide(args) => cmd_decide(args).map(|_| false),
        Command::Evaluate(args) => cmd_evaluate(args).map(|_| false),
        Command::Gen(args) => cmd_gen(args).map(|_| false),
    }
}

fn ensure_dir(dir: &Path) -> Result<(), AppError> {
    std::fs::create_dir_all(dir).map_err(AppError::data)
}

fn write_file(path: &Path, contents: &str) -> Result<(), AppError> {
    std::fs::write(path, contents)
        .map_err(|e| AppError::Data(format!("cannot write {}: {e}", path.display())))
}

/// The three benchmark quantile configurations.
pub fn experiment_configs() -> [(&'static str, TestConfig); 3] {
    [
        ("i", TestConfig::new(0.025, 0.975, 0.025, 0.975).unwrap()),
        ("ii", TestConfig::new(0.05, 0.975, 0.025, 0.95).unwrap()),
        ("iii", TestConfig::new(0.05, 0.99, 0.01, 0.95).unwrap()),
    ]
}

fn split_by_label(records: &[ScoreRecord]) -> Result<(Vec<f64>, Vec<f64>), AppError> {
    let mut class1 = Vec::new();
    let mut class2 = Vec::new();
    for r in records {
        match r.label {
            Some(0) => class1.push(r.score),
            Some(1) => class2.push(r.score),
            _ => return Err(AppError::usage("score file must be fully labeled")),
        }
    }
    Ok((class1, class2))
}

fn cmd_spiral(args: SpiralArgs) -> Result<bool, AppError> {
    ensure_dir(&args.out_dir)?;
    let spec = SpiralSpec::benchmark(args.seed);
    let (points, labels) = datasets::generate_spiral(&spec);

    let kernel = KernelParams::new(args.svm.gamma).map_err(AppError::data)?;
    let settings = SmoSettings {
        c: args.svm.c,
        tolerance: args.svm.tol,
        max_passes: args.svm.max_passes,
        seed: args.seed,
    };
    let model = svm::train(&points, &labels, kernel, settings).map_err(AppError::data)?;
    if !model.converged {
        eprintln!("warning: SMO did not converge within {} passes", args.svm.max_passes);
    }

    // Label +1 is class 1; its discriminant values are predominantly positive.
    let g_of = |want: f64| -> Vec<f64> {
        points
            .iter()
            .zip(&labels)
            .filter(|(_, &y)| y == want)
            .map(|(p, _)| model.decision_function(*p).unwrap())
            .collect()
    };
    let dist1 = EmpiricalDistribution::from_samples(&g_of(1.0), 20).map_err(AppError::data)?;
    let dist2 = EmpiricalDistribution::from_samples(&g_of(-1.0), 20).map_err(AppError::data)?;

    let range = 1.5 * spec.radius_scale;
    let grid = model
        .decision_grid((-range, range), (-range, range), args.resolution)
        .map_err(AppError::data)?;

    // Plain-SVM baseline: sign of g only.
    let plain_colors: Vec<&str> = grid
        .values
        .iter()
        .map(|&g| {
            plot::decision_color(if g >= 0.0 {
                Decision::Class1
            } else {
                Decision::Class2
            })
        })
        .collect();
    write_file(
        &args.out_dir.join("region_plain.svg"),
        &plot::region_map_svg(&grid, &plain_colors, &points, &labels),
    )?;

    for (idx, (name, config)) in experiment_configs().into_iter().enumerate() {
        let tester =
            CalibratedTester::calibrate(&dist1, &dist2, config).map_err(AppError::data)?;
        println!(
            "experiment ({name}): test 1 points ({}, {}), test 2 points ({}, {})",
            pct(config.class1_lower_p),
            pct(config.class1_upper_p),
            pct(config.class2_lower_p),
            pct(config.class2_upper_p),
        );
        println!(
            "  region1 [{:.4}, {:.4}]  region2 [{:.4}, {:.4}]",
            tester.region1.lower, tester.region1.upper, tester.region2.lower, tester.region2.upper
        );
        if idx == 0 {
            write_file(
                &args.out_dir.join("histogram.svg"),
                &plot::histogram_svg(&dist1, &dist2, &tester, args.bins),
            )?;
        }
        let colors: Vec<&str> = grid
            .values
            .iter()
            .map(|&g| plot::decision_color(tester.decide(g).unwrap()))
            .collect();
        write_file(
            &args.out_dir.join(format!("region_exp_{name}.svg")),
            &plot::region_map_svg(&grid, &colors, &points, &labels),
        )?;
    }
    Ok(!model.converged)
}

fn pct(p: f64) -> String {
    format!("{}%", p * 100.0)
}

fn cmd_calibrate(args: CalibrateArgs) -> Result<(), AppError> {
    let records = io::read_scores(&args.scores).map_err(AppError::data)?;
    let (class1, class2) = split_by_label(&records)?;
    let config = args.quantiles.config()?;
    let dist1 =
        EmpiricalDistribution::from_samples(&class1, args.min_count).map_err(AppError::data)?;
    let dist2 =
        EmpiricalDistribution::from_samples(&class2, args.min_count).map_err(AppError::data)?;
    let tester = CalibratedTester::calibrate(&dist1, &dist2, config).map_err(AppError::data)?;

    let self_rejection = |dist: &EmpiricalDistribution, region: &abstain::AcceptanceRegion| {
        let rejected = dist.values().iter().filter(|&&t| !region.contains(t)).count();
        rejected as f64 / dist.count() as f64
    };
    println!(
        "quantile points: test 1 ({}, {}), test 2 ({}, {})",
        pct(config.class1_lower_p),
        pct(config.class1_upper_p),
        pct(config.class2_lower_p),
        pct(config.class2_upper_p),
    );
    println!(
        "class 1: n={} region [{:.6}, {:.6}] self-rejection {:.4}",
        dist1.count(),
        tester.region1.lower,
        tester.region1.upper,
        self_rejection(&dist1, &tester.region1)
    );
    println!(
        "class 2: n={} region [{:.6}, {:.6}] self-rejection {:.4}",
        dist2.count(),
        tester.region2.lower,
        tester.region2.upper,
        self_rejection(&dist2, &tester.region2)
    );

    let snapshot = CalibrationSnapshot {
        format_version: SNAPSHOT_FORMAT_VERSION,
        config,
        region1: tester.region1,
        region2: tester.region2,
        provenance: format!("calibrated from {}", args.scores.display()),
        sample_counts: (dist1.count(), dist2.count()),
        svm: None,
    };
    if let Some(parent) = args.snapshot.parent() {
        if !parent.as_os_str().is_empty() {
            ensure_dir(parent)?;
        }
    }
    io::write_snapshot(&snapshot, &args.snapshot).map_err(AppError::data)?;
    println!("snapshot written to {}", args.snapshot.display());
    Ok(())
}

fn decision_token(d: Decision, merge: bool) -> &'static str {
    if merge && d.is_uncertain() {
        "uncertain"
    } else {
        d.as_str()
    }
}

fn cmd_decide(args: DecideArgs) -> Result<(), AppError> {
    let snapshot = io::read_snapshot(&args.snapshot).map_err(AppError::data)?;
    let records = io::read_scores(&args.scores).map_err(AppError::data)?;
    if records.is_empty() {
        return Err(AppError::usage("score file has no rows"));
    }
    let tester = snapshot.tester();
    let labeled = records[0].label.is_some();
    let mut out = String::from(if labeled {
        "score,label,decision\n"
    } else {
        "score,decision\n"
    });
    for r in &records {
        let d = tester.decide(r.score).map_err(AppError::data)?;
        match r.label {
            Some(l) if labeled => {
                writeln!(out, "{:?},{},{}", r.score, l, decision_token(d, args.merge_uncertain))
                    .unwrap()
            }
            _ => writeln!(out, "{:?},{}", r.score, decision_token(d, args.merge_uncertain))
                .unwrap(),
        }
    }
    ensure_dir(&args.out_dir)?;
    let path = args.out_dir.join("decisions.csv");
    write_file(&path, &out)?;
    println!("decisions written to {}", path.display());
    Ok(())
}

fn report_row(alpha_label: &str, r: &metrics::SelectiveReport) -> String {
    let cell = |v: Option<f64>| match v {
        Some(x) => format!("{:6.2}", x * 100.0),
        None => format!("{:>6}", "-"),
    };
    format!(
        "{alpha_label:>6}  {:6.2}  {}  {}  {}  {}  {}",
        r.coverage * 100.0,
        cell(r.accuracy),
        cell(r.recall),
        cell(r.precision),
        cell(r.specificity),
        cell(r.f1),
    )
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), AppError> {
    let records = io::read_scores(&args.scores).map_err(AppError::data)?;
    if records.is_empty() {
        return Err(AppError::usage("score file has no rows"));
    }
    let truths: Vec<u8> = records
        .iter()
        .map(|r| r.label.ok_or_else(|| AppError::usage("evaluation scores must be labeled")))
        .collect::<Result<_, _>>()?;
    let scores: Vec<f64> = records.iter().map(|r| r.score).collect();

    println!(
        "{:>6}  {:>6}  {:>6}  {:>6}  {:>6}  {:>6}  {:>6}",
        "alpha%", "cov%", "acc%", "rec%", "prec%", "spec%", "f1%"
    );
    let eval_with = |tester: &CalibratedTester, alpha_label: &str| -> Result<(), AppError> {
        let decisions = tester.decide_batch(&scores).map_err(AppError::data)?;
        let report =
            metrics::evaluate(&decisions, &truths, args.positive_class).map_err(AppError::data)?;
        println!("{}", report_row(alpha_label, &report));
        Ok(())
    };

    match (&args.calib, &args.snapshot) {
        (Some(calib), _) => {
            let calib_records = io::read_scores(calib).map_err(AppError::data)?;
            let (class1, class2) = split_by_label(&calib_records)?;
            let dist1 = EmpiricalDistribution::from_samples(&class1, args.min_count)
                .map_err(AppError::data)?;
            let dist2 = EmpiricalDistribution::from_samples(&class2, args.min_count)
                .map_err(AppError::data)?;
            let alphas = if args.alpha.is_empty() {
                vec![0.01, 0.025, 0.05]
            } else {
                args.alpha.clone()
            };
            for a in alphas {
                let config = TestConfig::symmetric(a).map_err(AppError::data)?;
                let tester = CalibratedTester::calibrate(&dist1, &dist2, config)
                    .map_err(AppError::data)?;
                eval_with(&tester, &format!("{}", a * 100.0))?;
            }
            Ok(())
        }
        (None, Some(path)) => {
            if !args.alpha.is_empty() {
                return Err(AppError::usage("--alpha sweeps require --calib"));
            }
            let snapshot = io::read_snapshot(path).map_err(AppError::data)?;
            eval_with(&snapshot.tester(), "snap")
        }
        (None, None) => Err(AppError::usage("provide --snapshot or --calib")),
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), AppError> {
    ensure_dir(&args.out_dir)?;
    match args.dataset.as_str() {
        "spiral" => {
            let spec = SpiralSpec::new(args.n, args.turns, args.noise, 1.0, args.seed)
                .map_err(AppError::data)?;
            let (points, labels) = datasets::generate_spiral(&spec);
            let mut out = String::from("x,y,label\n");
            for (p, &y) in points.iter().zip(&labels) {
                writeln!(out, "{:?},{:?},{}", p[0], p[1], if y > 0.0 { 0 } else { 1 }).unwrap();
            }
            let path = args.out_dir.join("spiral.csv");
            write_file(&path, &out)?;
            println!("spiral dataset written to {}", path.display());
        }
        "scores" => {
            let spec = ScoreMixtureSpec::new(
                args.mean1,
                args.mean2,
                args.sigma,
                args.sigma,
                args.n,
                args.n,
                args.outlier_fraction,
                args.outlier_shift,
                args.seed,
            )
            .map_err(AppError::data)?;
            let (scores, labels) = datasets::generate_scores(&spec);
            let records: Vec<ScoreRecord> = scores
                .iter()
                .zip(&labels)
                .map(|(&score, &label)| ScoreRecord {
                    score,
                    label: Some(label),
                })
                .collect();
            let path = args.out_dir.join("scores.csv");
            io::write_scores(&records, &path).map_err(AppError::data)?;
            println!("score dataset written to {}", path.display());
        }
        other => {
            return Err(AppError::usage(format!(
                "unknown dataset {other:?}; expected 'spiral' or 'scores'"
            )))
        }
    }
    Ok(())
}
