//! `ulrich-kit`: tables, Ulrich checks, Chern solving, central charges, K-group
//! gating and heart scans from the command line.
//!
//! Exit codes: 0 pass, 1 fail, 2 usage error, 3 unsupported model.

mod config;
mod demo;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ulrich_core::bridgeland::{
    central_charge, parse_grid, question_scan, slope, ulrich_charge_closed_form, ulrich_charge_expanded, ChargeValue,
    Convention, PhaseKey, Slope,
};
use ulrich_core::chern::{chern_admissible, ulrich_chern_solve, NumClass};
use ulrich_core::cohomology::{sheaf_table, split_list, SheafDescriptor};
use ulrich_core::complexes::{hyper_table, FormalComplex};
use ulrich_core::generators::generator_gate;
use ulrich_core::ulrich::{is_ulrich_object_with, CheckOptions, Mode};
use ulrich_core::variety::VarietyModel;
use ulrich_core::Error;

use crate::config::Config;
use crate::report::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "ulrich-kit", version, about = "Exact checks for Ulrich objects on model varieties")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: FormatArg,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// key=value file setting window, probe_depth and convention.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Twisted cohomology table of a sheaf or hypercohomology of an object.
    Table {
        #[arg(long)]
        variety: VarietyModel,
        #[command(flatten)]
        input: Input,
        /// Twist window `lo..hi`.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Ulrich verdict with a full criterion trace.
    Check {
        #[arg(long)]
        variety: VarietyModel,
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "both")]
        mode: Mode,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long)]
        probe_depth: Option<i64>,
    },
    /// Chern character of a rank-r Ulrich sheaf on a surface.
    ChernSolve {
        /// `d=…,i=…,chi=…`
        #[arg(long)]
        surface: String,
        #[arg(long, allow_hyphen_values = true)]
        rank: i64,
    },
    /// Central charge of the rank-r Ulrich class at (s, t).
    Charge {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        rank: i64,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long)]
        t: String,
    },
    /// Rank of the K-group span of a list of bundles; fails on a deficit.
    Gate {
        #[arg(long)]
        variety: VarietyModel,
        /// Comma-separated descriptors, e.g. `O(1),O(2)`.
        #[arg(long)]
        bundles: String,
    },
    /// Heart filter and central charge over a grid of (s, t).
    Scan {
        #[arg(long)]
        object: PathBuf,
        /// `s=lo..hi:step,t=lo..hi:step`
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        convention: Option<String>,
    },
    /// Runs the built-in example suite.
    Demo {
        #[arg(long)]
        paper_examples: bool,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Input {
    /// Object JSON file.
    #[arg(long)]
    object: Option<PathBuf>,
    /// Single sheaf descriptor placed in degree 0.
    #[arg(long)]
    sheaf: Option<String>,
}

/// Why a command stopped.
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(e) if e.is_unsupported() => 3,
            Failure::Domain(
                Error::Parse(_) | Error::MalformedModel(_) | Error::InvalidDescriptor(_) | Error::MissingConvention(_),
            ) => 2,
            Failure::Domain(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Domain(e) => e.to_string(),
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn read_object(path: &Path) -> Result<FormalComplex, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_input(input: &Input, model: &VarietyModel) -> Result<FormalComplex, Failure> {
    match (&input.object, &input.sheaf) {
        (Some(path), _) => {
            let obj = read_object(path)?;
            if obj.model() != model {
                return Err(Failure::Domain(Error::ModelMismatch(model.to_string(), obj.model().to_string())));
            }
            Ok(obj)
        }
        (None, Some(desc)) => Ok(FormalComplex::sheaf(*model, SheafDescriptor::parse(desc, model)?, 0)?),
        (None, None) => Err(Failure::Usage("either --object or --sheaf is required".into())),
    }
}

fn surface_model(spec: &str) -> Result<VarietyModel, Failure> {
    let spec = spec.strip_prefix("surface:").unwrap_or(spec);
    Ok(format!("surface:{spec}").parse()?)
}

#[derive(Serialize)]
struct ChernSolveResult {
    class: NumClass,
    slope: Slope,
    admissible: bool,
    /// Set for `r ≤ 0`, where no sheaf realizes the class.
    numeric_only: bool,
}

#[derive(Serialize)]
struct ChargeResult {
    class: NumClass,
    /// `−∫ e^{−(s+it)H} ch` on the solved class.
    definition: ChargeValue,
    /// The displayed closed form for Ulrich classes.
    closed_form: ChargeValue,
    /// The closed form obtained by expanding the definition.
    expanded: ChargeValue,
    /// Whether the displayed closed form equals the definition.
    agree: bool,
    phase: PhaseKey,
}

fn run(cli: &Cli, argv: &[String]) -> Outcome {
    let cfg = match &cli.config {
        Some(path) => Config::load(path).map_err(Failure::Usage)?,
        None => Config::default(),
    };
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Tsv => Format::Tsv,
    };
    let report = Report::new(argv);
    match &cli.command {
        Command::Table { variety, input, window } => {
            let window = config::window(window.as_deref(), cfg.window)
                .map_err(Failure::Usage)?
                .unwrap_or_else(|| variety.default_window());
            let obj = load_input(input, variety)?;
            match (&input.sheaf, obj.sheaf_at(0)) {
                (Some(_), Some(desc)) => {
                    let table = sheaf_table(desc, variety, window)?;
                    let tsv = table.to_tsv();
                    Ok((report.variety(variety).finish(format, &table, Some(tsv), None), true))
                }
                _ => {
                    let hyper = hyper_table(&obj, window)?;
                    let tsv = hyper.table.to_tsv();
                    Ok((report.variety(variety).finish(format, &hyper, Some(tsv), None), true))
                }
            }
        }
        Command::Check {
            variety,
            input,
            mode,
            window,
            probe_depth,
        } => {
            let opts = CheckOptions {
                window: config::window(window.as_deref(), cfg.window).map_err(Failure::Usage)?,
                probe_depth: probe_depth.or(cfg.probe_depth),
            };
            let obj = load_input(input, variety)?;
            let verdict = is_ulrich_object_with(&obj, *mode, &opts)?;
            let passed = verdict.passed;
            Ok((report.variety(variety).finish(format, &verdict, None, Some(passed)), passed))
        }
        Command::ChernSolve { surface, rank } => {
            let model = surface_model(surface)?;
            let class = ulrich_chern_solve(&model, *rank)?;
            let result = ChernSolveResult {
                slope: slope(&class),
                admissible: chern_admissible(&class, &model)?,
                numeric_only: *rank <= 0,
                class,
            };
            Ok((report.variety(&model).finish(format, &result, None, None), true))
        }
        Command::Charge { surface, rank, s, t } => {
            let model = surface_model(surface)?;
            let (s, t) = (ulrich_core::rational::parse(s)?, ulrich_core::rational::parse(t)?);
            let class = ulrich_chern_solve(&model, *rank)?;
            let definition = central_charge(&class, &s, &t, &model)?;
            let closed_form = ulrich_charge_closed_form(*rank, &s, &t, &model)?;
            let expanded = ulrich_charge_expanded(*rank, &s, &t, &model)?;
            let result = ChargeResult {
                agree: definition == closed_form,
                phase: definition.phase_key(),
                class,
                definition,
                closed_form,
                expanded,
            };
            Ok((report.variety(&model).finish(format, &result, None, None), true))
        }
        Command::Gate { variety, bundles } => {
            let objs = split_list(bundles)
                .into_iter()
                .map(|b| Ok(FormalComplex::sheaf(*variety, SheafDescriptor::parse(b.trim(), variety)?, 0)?))
                .collect::<Result<Vec<_>, Failure>>()?;
            let verdict = generator_gate(&objs, variety)?;
            let passed = verdict.is_full();
            Ok((report.variety(variety).finish(format, &verdict, None, Some(passed)), passed))
        }
        Command::Scan { object, grid, convention } => {
            let conv: Convention = match convention.as_deref().or(cfg.convention.as_deref()) {
                Some(c) => c.parse()?,
                None => Convention::default(),
            };
            let obj = read_object(object)?;
            let grid = parse_grid(grid)?;
            let rows = question_scan(&obj, &grid, conv)?;
            Ok((report.variety(obj.model()).convention(conv).finish(format, &rows, None, None), true))
        }
        Command::Demo { .. } => {
            let results = demo::run();
            let passed = results.iter().all(|r| r.passed);
            Ok((report.finish(format, &results, Some(demo::to_tsv(&results)), Some(passed)), passed))
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli, &argv[1..]) {
        Ok((text, passed)) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{text}");
            }
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
