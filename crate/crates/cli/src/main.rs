use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use ergap::experiments::{
    fig3_grid, fig4_grid, intermediate_bounds_check, predict_second_order, predict_supercritical,
    regime_t_star, run_sweep, solve_anchor_degree_fraction, verify_propositions, write_csv,
    write_gnuplot, write_json, write_timing, OutputFormat, SweepConfig, VerifyOptions,
};
use ergap::gap::{gap_report, lambda2, Method, SolverOptions};
use ergap::graph::{generate_er, read_edge_list, write_edge_list, Graph, RngSeed};
use ergap::scan::{find_pendant_lines, write_detections_jsonl};
use ergap::trees::{line_gap, minimality_oracle};
use ergap::Error;

#[derive(Parser)]
#[command(name = "ergap", version, about = "Spectral gap experiments on sparse Erdős–Rényi graphs")]
struct Cli {
    /// Master seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Relative residual target of the gap solver.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Sample G(n, d/n) and write it as an edge list.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: f64,
        /// Stream index under the master seed.
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Smallest non-zero Laplacian eigenvalue of an edge-list graph.
    Gap {
        graph: PathBuf,
        /// Compare against the line value for this size.
        #[arg(long)]
        t_star: Option<usize>,
        #[arg(long, value_enum)]
        method: Option<SolverMethod>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Closed-form predictions for given n and d.
    Predict {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: f64,
        /// Regime margin.
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Line size used for the predictions; `⌊ln n / d⌋` by default.
        #[arg(long)]
        t_star: Option<usize>,
        /// Minimum degree for the supercritical formulas; sampled when omitted.
        #[arg(long)]
        min_degree: Option<usize>,
    },
    /// Monte-Carlo sweep over d = ln n / t.
    Sweep(SweepArgs),
    /// Exact checks on small anchored trees.
    Verify {
        #[arg(long, default_value_t = 6)]
        t_max: usize,
        #[arg(long, default_value_t = 2)]
        multiplicity_cap: u32,
        /// Shift of the oracle threshold away from the line value (fault injection).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        threshold_shift: f64,
        /// Also write one oracle table per size into this directory.
        #[arg(long)]
        oracle_dir: Option<PathBuf>,
    },
    /// Pendant lines of exactly t vertices in an edge-list graph.
    Lines {
        graph: PathBuf,
        #[arg(long)]
        t: usize,
    },
    /// Fraction of gaps inside the two-sided bound near d = ln n / t*.
    Intermediate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t_star: usize,
        /// Mean degree; `ln n / t*` by default.
        #[arg(long)]
        d: Option<f64>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 10.0)]
        kappa: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverMethod {
    Dense,
    Iterative,
}

#[derive(Clone, Copy, ValueEnum)]
enum Grid {
    Fig3,
    Fig4,
}

#[derive(Args)]
struct SweepArgs {
    /// `key = value` configuration file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated values of t.
    #[arg(long, value_delimiter = ',')]
    t_grid: Option<Vec<f64>>,
    /// Predefined grid of t.
    #[arg(long, value_enum, conflicts_with = "t_grid")]
    grid: Option<Grid>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
}

enum Failure {
    /// Bad arguments or unreadable input.
    Invalid(String),
    /// A check ran and did not hold.
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } | Error::GapTooSmall { .. } => Failure::Failed(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult {
    let seed = cli.seed.unwrap_or(1);
    let format = cli.format.unwrap_or(Format::Csv);
    let mut solver = SolverOptions::default();
    if let Some(tol) = cli.tol {
        if !(tol > 0.0) {
            return Err(Failure::Invalid(format!("--tol must be positive, got {tol}")));
        }
        solver.tol = tol;
    }
    let out = cli.out.as_deref();

    match cli.command {
        Command::Generate { n, d, stream } => {
            let g = generate_er(n, d, RngSeed::new(seed, stream))?;
            write_edge_list(&g, open_out(out)?)?;
        }
        Command::Gap {
            graph,
            t_star,
            method,
            max_iter,
        } => {
            let g = load_graph(&graph)?;
            solver.method = method.map(|m| match m {
                SolverMethod::Dense => Method::Dense,
                SolverMethod::Iterative => Method::Iterative,
            });
            solver.max_iter = max_iter;
            let value = match t_star {
                Some(t) => serde_json::to_value(gap_report(&g, t, &solver)?),
                None => serde_json::to_value(lambda2(&g, &solver)?),
            }
            .expect("reports serialise");
            emit_record(&value, format, open_out(out)?)?;
        }
        Command::Predict {
            n,
            d,
            epsilon,
            t_star,
            min_degree,
        } => {
            let value = predict(n, d, epsilon, t_star, min_degree, seed)?;
            emit_record(&value, format, open_out(out)?)?;
        }
        Command::Sweep(args) => sweep(args, cli.seed, cli.tol, cli.out, cli.format)?,
        Command::Verify {
            t_max,
            multiplicity_cap,
            threshold_shift,
            oracle_dir,
        } => {
            let opts = VerifyOptions {
                t_max,
                multiplicity_cap,
                threshold_shift,
            };
            let report = verify_propositions(&opts)?;
            let mut w = open_out(out)?;
            match format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut w, &report).map_err(io::Error::from)?;
                    writeln!(w)?;
                }
                Format::Csv => {
                    writeln!(w, "name,passed,worst_margin,detail")?;
                    for c in &report.checks {
                        writeln!(
                            w,
                            "{},{},{},{}",
                            quote(&c.name),
                            c.passed,
                            c.worst_margin,
                            quote(&c.detail)
                        )?;
                    }
                }
            }
            w.flush()?;
            if let Some(dir) = oracle_dir {
                std::fs::create_dir_all(&dir)?;
                for t in 1..=t_max {
                    let oracle = minimality_oracle(t, multiplicity_cap)?;
                    oracle.write_csv(BufWriter::new(File::create(
                        dir.join(format!("oracle_t{t}.csv")),
                    )?))?;
                }
            }
            if !report.passed() {
                let names: Vec<String> = report
                    .failures()
                    .map(|c| format!("{} ({})", c.name, c.detail))
                    .collect();
                return Err(Failure::Failed(format!("verification failed: {}", names.join("; "))));
            }
        }
        Command::Lines { graph, t } => {
            if t == 0 {
                return Err(Failure::Invalid("--t must be at least 1".into()));
            }
            let g = load_graph(&graph)?;
            let lines = find_pendant_lines(&g, t);
            let mut w = open_out(out)?;
            match format {
                Format::Json => write_detections_jsonl(&lines, &mut w)?,
                Format::Csv => {
                    writeln!(w, "path,anchor,anchor_degree,s2_size")?;
                    for l in &lines {
                        let path: Vec<String> = l.path.iter().map(usize::to_string).collect();
                        writeln!(w, "{},{},{},{}", path.join(";"), l.anchor, l.anchor_degree, l.s2_size)?;
                    }
                    w.flush()?;
                }
            }
        }
        Command::Intermediate {
            n,
            t_star,
            d,
            trials,
            kappa,
        } => {
            if n < 2 {
                return Err(Failure::Invalid(format!("--n must be at least 2, got {n}")));
            }
            let d = d.unwrap_or((n as f64).ln() / t_star.max(1) as f64);
            let report = intermediate_bounds_check(n, d, t_star, trials, seed, kappa)?;
            let mut value = serde_json::to_value(&report).expect("reports serialise");
            if format == Format::Csv {
                value.as_object_mut().expect("object").remove("lambdas");
            }
            emit_record(&value, format, open_out(out)?)?;
        }
    }
    Ok(())
}

fn predict(
    n: usize,
    d: f64,
    epsilon: f64,
    t_star: Option<usize>,
    min_degree: Option<usize>,
    seed: u64,
) -> Result<Value, Failure> {
    if n < 2 || !(d > 0.0) || !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Failure::Invalid(format!(
            "need n >= 2, d > 0 and epsilon in (0, 1); got n = {n}, d = {d}, epsilon = {epsilon}"
        )));
    }
    let ln_n = (n as f64).ln();
    let regime = regime_t_star(n, d, epsilon);
    let t_star = t_star.or_else(|| {
        let s = (ln_n / d + 1e-9).floor() as usize;
        (s >= 1).then_some(s)
    });
    let mut record = serde_json::Map::new();
    record.insert("n".into(), n.into());
    record.insert("d".into(), d.into());
    record.insert("regime".into(), regime.label().into());
    record.insert("t_star".into(), t_star.into());
    record.insert("first_order".into(), t_star.filter(|&t| t >= 1).map(line_gap).into());
    let (fraction, second) = match t_star.filter(|&t| t >= 1) {
        Some(t) => (
            solve_anchor_degree_fraction(n, d, t).ok(),
            predict_second_order(n, d, t).ok(),
        ),
        None => (None, None),
    };
    record.insert("anchor_degree_fraction".into(), fraction.into());
    record.insert("second_order".into(), second.into());
    let (min_deg, sup_first, sup_second) = if d >= ln_n {
        let delta = match min_degree {
            Some(m) => m,
            None => generate_er(n, d, RngSeed::new(seed, 0))?.min_degree(),
        };
        let (a, b) = predict_supercritical(delta as f64, d);
        (Some(delta), Some(a), b)
    } else {
        (min_degree, None, None)
    };
    record.insert("min_degree".into(), min_deg.into());
    record.insert("supercritical_first".into(), sup_first.into());
    record.insert("supercritical_second".into(), sup_second.into());
    Ok(Value::Object(record))
}

fn sweep(
    args: SweepArgs,
    seed: Option<u64>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
) -> CliResult {
    let mut cfg = match &args.config {
        Some(path) => SweepConfig::from_file(path)?,
        None => SweepConfig::default(),
    };
    if let Some(v) = args.n {
        cfg.n = v;
    }
    if let Some(v) = args.t_grid {
        cfg.t_grid = v;
    }
    match args.grid {
        Some(Grid::Fig3) => cfg.t_grid = fig3_grid(),
        Some(Grid::Fig4) => cfg.t_grid = fig4_grid(),
        None => {}
    }
    if let Some(v) = args.trials {
        cfg.trials_per_point = v;
    }
    if let Some(v) = args.kappa {
        cfg.kappa = v;
    }
    if let Some(v) = args.epsilon {
        cfg.epsilon = v;
    }
    if let Some(v) = seed {
        cfg.master_seed = v;
    }
    if let Some(v) = tol {
        cfg.tol = v;
    }
    if let Some(v) = out {
        cfg.output = v;
    }
    if let Some(f) = format {
        cfg.format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    cfg.validate()?;

    let rows = run_sweep(&cfg)?;
    let main = BufWriter::new(File::create(&cfg.output)?);
    match cfg.format {
        OutputFormat::Csv => write_csv(&rows, main)?,
        OutputFormat::Json => write_json(&rows, main)?,
    }
    write_gnuplot(&rows, cfg.n, BufWriter::new(File::create(sidecar(&cfg.output, "dat"))?))?;
    write_timing(&rows, BufWriter::new(File::create(sidecar(&cfg.output, "timing.csv"))?))?;

    let ok = rows.iter().filter(|r| r.status == "ok").count();
    let with_lines: Vec<_> = rows
        .iter()
        .filter(|r| r.pendant_line_count.is_some_and(|c| c > 0))
        .collect();
    let in_band = with_lines
        .iter()
        .filter(|r| r.within_band(cfg.kappa) == Some(true))
        .count();
    eprintln!(
        "{} rows ({ok} solved), {}/{} rows with a pendant line within {}/d of the line value; wrote {}",
        rows.len(),
        in_band,
        with_lines.len(),
        cfg.kappa,
        cfg.output.display()
    );
    Ok(())
}

/// `out.csv` → `out.<ext>`.
fn sidecar(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let file = File::open(path)
        .map_err(|e| Failure::Invalid(format!("cannot open {}: {e}", path.display())))?;
    Ok(read_edge_list(BufReader::new(file))?)
}

fn open_out(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes a flat JSON object as pretty JSON or as a two-line CSV.
fn emit_record(value: &Value, format: Format, mut w: impl Write) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let obj = value.as_object().expect("record is an object");
            let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
            let cells: Vec<String> = obj
                .values()
                .map(|v| match v {
                    Value::Null => String::new(),
                    Value::String(s) => quote(s),
                    other => other.to_string(),
                })
                .collect();
            writeln!(w, "{}", keys.join(","))?;
            writeln!(w, "{}", cells.join(","))?;
        }
    }
    w.flush()
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}
