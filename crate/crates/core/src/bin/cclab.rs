//! Command-line front end: analyze operator files, cross-check them
//! numerically, decompose them, and run the scripted experiments.
//!
//! Exit codes: 0 success, 1 internal inconsistency (or a failed experiment
//! check), 2 usage or parse error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cclab::criteria::{analyze, scaling_decompose, step_decompose, AnalysisReport};
use cclab::opdsl::{parse_file, OperatorSpec};
use cclab::spectral::export::{to_csv, write_result};
use cclab::spectral::{numeric_check, run_experiment, ExperimentConfig, NumericOptions, EXPERIMENTS};

#[derive(Parser)]
#[command(name = "cclab", version, about = "Zero-integral, H1 and null-Lagrangian analysis of differential operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every operator in the given files.
    Analyze {
        files: Vec<PathBuf>,
        /// Attach a quadrature cross-check to each report.
        #[arg(long)]
        numeric: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Print the scaling levels and first-slot step decomposition.
    Decompose {
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Quadrature cross-check of the symbolic zero-integral verdict.
    Numeric {
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a named experiment and write `<name>.csv` and `<name>.json`.
    Experiment {
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Analyze the bundled corpus.
    Corpus {
        #[arg(long)]
        numeric: bool,
        /// List the bundled files instead of analyzing them.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Grid points per axis (default 256 in 2D, 64 in 3D).
    #[arg(long)]
    grid: Option<usize>,
    /// Random samples for `numeric` (default 20); experiments have their
    /// own defaults.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Dyadic scale range `J-,J+` for the maximal-function estimator.
    #[arg(long, value_parser = parse_scales, allow_hyphen_values = true)]
    scales: Option<(i32, i32)>,
    /// Output file (reports) or directory (experiments).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_scales(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s.split_once(',').ok_or("expected J-,J+")?;
    let a: i32 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: i32 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err("J- must not exceed J+".into());
    }
    Ok((a, b))
}

/// Failure modes mapped to exit codes.
enum Failure {
    Inconsistent(String),
    Usage(String),
}

impl Common {
    fn numeric_options(&self) -> NumericOptions {
        NumericOptions {
            grid: self.grid,
            trials: self.trials.unwrap_or(20),
            seed: self.seed,
            tol: self.tol,
        }
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn load(files: &[PathBuf]) -> Result<Vec<OperatorSpec>, Failure> {
    if files.is_empty() {
        return Err(Failure::Usage("no input files".into()));
    }
    let mut specs = Vec::new();
    for f in files {
        let text = fs::read_to_string(f).map_err(|e| Failure::Usage(format!("{}: {e}", f.display())))?;
        specs.extend(parse_file(&text).map_err(|e| Failure::Usage(format!("{}:{e}", f.display())))?);
    }
    specs.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(specs)
}

fn analyze_all(specs: &[OperatorSpec], numeric: bool, common: &Common) -> Result<Vec<AnalysisReport>, Failure> {
    let opts = common.numeric_options();
    specs
        .iter()
        .map(|s| {
            let mut r = analyze(s).map_err(|e| Failure::Usage(format!("{}: {e}", s.name)))?;
            if numeric {
                r.numeric = Some(numeric_check(s, &opts).map_err(|e| Failure::Usage(format!("{}: {e}", s.name)))?);
            }
            Ok(r)
        })
        .collect()
}

fn reports_text(reports: &[AnalysisReport], format: Format) -> String {
    match format {
        Format::Json => {
            let v: Vec<Value> = reports.iter().map(|r| r.to_json()).collect();
            serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "name",
                "n",
                "shape",
                "zero_integral",
                "null_lagrangian",
                "h1_regular",
                "theorem",
                "inconsistencies",
                "findings",
            ])
            .expect("in-memory write");
            for r in reports {
                w.write_record([
                    r.name.clone(),
                    r.dim.to_string(),
                    r.shape.clone(),
                    r.zero_integral.value.to_string(),
                    r.null_lagrangian.value.to_string(),
                    r.computed("h1_regular").unwrap_or_default(),
                    r.computed("theorem").unwrap_or_default(),
                    r.inconsistencies().join("; "),
                    r.findings().join("; "),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
    }
}

fn finish_reports(reports: &[AnalysisReport], common: &Common) -> Result<(), Failure> {
    common.emit(&reports_text(reports, common.format))?;
    for r in reports {
        for f in r.findings() {
            eprintln!("finding: {}: {f}", r.name);
        }
    }
    let bad: Vec<String> = reports
        .iter()
        .flat_map(|r| r.inconsistencies().into_iter().map(move |i| format!("{}: {i}", r.name)))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Inconsistent(bad.join("\n")))
    }
}

fn decompose_text(specs: &[OperatorSpec]) -> String {
    let mut out = String::new();
    for s in specs {
        out += &format!("== {} ==\n", s.name);
        for (level, piece) in scaling_decompose(s) {
            out += &format!("level {level}: {}\n", piece.body);
        }
        if let Ok(d) = step_decompose(s) {
            for ((l1, l2), piece) in &d.pieces {
                out += &format!("step ({l1},{l2}): {}\n", piece.body);
            }
            for (k, r) in &d.remainders {
                out += &format!("remainder D{}: {r}\n", k + 1);
            }
        }
    }
    out
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { files, numeric, common } => {
            let specs = load(&files)?;
            finish_reports(&analyze_all(&specs, numeric, &common)?, &common)
        }
        Command::Corpus { numeric, list, common } => {
            if list {
                let names: Vec<&str> = cclab::corpus::FILES.iter().map(|(n, _)| *n).collect();
                return common.emit(&(names.join("\n") + "\n"));
            }
            let specs = cclab::corpus::load().map_err(|(f, e)| Failure::Usage(format!("{f}:{e}")))?;
            finish_reports(&analyze_all(&specs, numeric, &common)?, &common)
        }
        Command::Decompose { files, common } => common.emit(&decompose_text(&load(&files)?)),
        Command::Numeric { files, common } => {
            let specs = load(&files)?;
            let opts = common.numeric_options();
            let mut rows = Vec::new();
            let mut bad = Vec::new();
            for s in &specs {
                let n = numeric_check(s, &opts).map_err(|e| Failure::Usage(format!("{}: {e}", s.name)))?;
                if !n.agrees {
                    bad.push(format!("{}: numeric quadrature disagrees with the symbolic verdict", s.name));
                }
                rows.push(json!({
                    "name": s.name,
                    "trials": n.trials,
                    "seed": n.seed,
                    "tol": n.tol,
                    "max_rel_integral": n.max_rel_integral,
                    "witness_rel_integral": n.witness_rel_integral,
                    "agrees": n.agrees,
                }));
            }
            let text = match common.format {
                Format::Json => serde_json::to_string_pretty(&rows).expect("json values serialize") + "\n",
                Format::Csv => {
                    let mut out = String::from("name,max_rel_integral,witness_rel_integral,agrees\n");
                    for r in &rows {
                        out += &format!(
                            "{},{},{},{}\n",
                            r["name"].as_str().unwrap_or_default(),
                            r["max_rel_integral"],
                            r["witness_rel_integral"],
                            r["agrees"]
                        );
                    }
                    out
                }
            };
            common.emit(&text)?;
            if bad.is_empty() {
                Ok(())
            } else {
                Err(Failure::Inconsistent(bad.join("\n")))
            }
        }
        Command::Experiment { name, common } => {
            if !EXPERIMENTS.contains(&name.as_str()) {
                return Err(Failure::Usage(format!(
                    "unknown experiment `{name}` (expected one of: {})",
                    EXPERIMENTS.join(", ")
                )));
            }
            let cfg = ExperimentConfig {
                grid: common.grid,
                trials: common.trials,
                seed: common.seed,
                scales: common.scales,
            };
            let result = run_experiment(&name, &cfg).map_err(|e| Failure::Usage(e.to_string()))?;
            match &common.out {
                Some(dir) => {
                    let (c, j) = write_result(&result, dir).map_err(|e| Failure::Usage(e.to_string()))?;
                    eprintln!("wrote {} and {}", c.display(), j.display());
                }
                None => match common.format {
                    Format::Json => {
                        println!("{}", serde_json::to_string_pretty(&result.to_json()).expect("json values serialize"))
                    }
                    Format::Csv => print!("{}", to_csv(&result).map_err(|e| Failure::Usage(e.to_string()))?),
                },
            }
            for c in &result.checks {
                eprintln!(
                    "{} {} = {:e} ({} {:e})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.comparison,
                    c.threshold
                );
            }
            if result.pass() {
                Ok(())
            } else {
                Err(Failure::Inconsistent(format!("experiment `{name}` failed a check")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Inconsistent(msg)) => {
            eprintln!("inconsistency:\n{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
