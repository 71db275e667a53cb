//! Command-line interface. Thin orchestration only: every computation
//! lives in the library. Results go to stdout, diagnostics and warnings to
//! stderr, so reports can be piped. Exit codes: 0 success, 1 usage error,
//! 2 invalid input, 3 requested metric undefined.

use std::path::{Path, PathBuf};

use clap::builder::Styles;
use clap::{Parser, Subcommand};

use geotea::config::{self, ProjectDocument};
use geotea::model::Pathway;
use geotea::pipeline::evaluate;
use geotea::report::{
    render_assessment, render_comparison, render_emissions, render_monte_carlo, render_tornado,
    Assessment, ReportFormat,
};
use geotea::scenarios::{compare_pathways, preset, AutomationLevel, ProjectConfig};
use geotea::uncertainty::{self, TargetMetric};
use geotea::{Error, Result};

#[derive(Parser)]
#[command(
    name = "geotea",
    version,
    about = "Techno-economic and environmental screening for geothermal energy pathways",
    styles = Styles::plain()
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one project: energy, costs, financial metrics, emissions
    Assess {
        /// Project file (TOML)
        #[arg(short = 'f', long = "file", value_name = "PROJECT")]
        file: PathBuf,
        #[arg(long, default_value = "table", value_parser = ["table", "csv", "structured"])]
        format: String,
    },
    /// Side-by-side metrics for several projects or the bundled presets
    Compare {
        /// Project files to include, in order (repeatable)
        #[arg(short = 'f', long = "file", value_name = "PROJECT")]
        files: Vec<PathBuf>,
        /// Preset pathways to append: "all" or a comma list of egs,wells,gshp.
        /// Defaults to all when no files are given
        #[arg(long, value_name = "LIST")]
        presets: Option<String>,
        /// Automation levels for the presets, comma list of baseline,moderate,full
        #[arg(long, value_name = "LIST", default_value = "baseline,full")]
        levels: String,
        #[arg(long, default_value = "table", value_parser = ["table", "csv", "structured"])]
        format: String,
    },
    /// Monte Carlo uncertainty propagation over a project
    Montecarlo {
        #[arg(short = 'f', long = "file", value_name = "PROJECT")]
        file: PathBuf,
        /// Override the sample count from the spec
        #[arg(long, value_name = "N")]
        samples: Option<u32>,
        /// Override the random seed from the spec
        #[arg(long, value_name = "S")]
        seed: Option<u64>,
        /// Calibration file supplying the distributions (instead of the
        /// project's [uncertainty] section)
        #[arg(long, value_name = "FILE")]
        calibration: Option<PathBuf>,
        #[arg(long, default_value = "table", value_parser = ["table", "csv", "structured"])]
        format: String,
    },
    /// One-at-a-time sensitivity sweep, ranked by output swing
    Tornado {
        #[arg(short = 'f', long = "file", value_name = "PROJECT")]
        file: PathBuf,
        /// Output to track across the sweeps
        #[arg(long, value_parser = ["lcoe", "npv"])]
        metric: String,
        /// Ranges file; omitted, the built-in default ranges apply
        #[arg(long, value_name = "FILE")]
        ranges: Option<PathBuf>,
        #[arg(long, default_value = "table", value_parser = ["table", "csv", "structured"])]
        format: String,
    },
    /// Avoided and lifetime-net CO2 for a project
    Emissions {
        #[arg(short = 'f', long = "file", value_name = "PROJECT")]
        file: PathBuf,
        #[arg(long, default_value = "table", value_parser = ["table", "csv", "structured"])]
        format: String,
    },
    /// List the bundled reference presets or dump one as a project file
    Presets {
        /// Enumerate available pathway/level combinations
        #[arg(long)]
        list: bool,
        /// Emit the preset for PATHWAY at LEVEL as project TOML
        #[arg(long, num_args = 2, value_names = ["PATHWAY", "LEVEL"], conflicts_with = "list")]
        dump: Option<Vec<String>>,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(report) => {
            print!("{report}");
            0
        }
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Undefined(_) => 3,
                _ => 2,
            }
        }
    }
}

fn dispatch(command: Command) -> Result<String> {
    match command {
        Command::Assess { file, format } => {
            let format = ReportFormat::parse(&format)?;
            let doc = load(&file)?;
            let evaluation = evaluate(&doc.config)?;
            Ok(render_assessment(
                &Assessment::new(&doc.config, &evaluation),
                format,
            ))
        }
        Command::Compare {
            files,
            presets,
            levels,
            format,
        } => {
            let format = ReportFormat::parse(&format)?;
            let mut configs: Vec<ProjectConfig> = Vec::new();
            for file in &files {
                configs.push(load(file)?.config);
            }
            let preset_arg = match presets {
                Some(list) => Some(parse_pathways(&list)?),
                None if files.is_empty() => Some(Pathway::all().to_vec()),
                None => None,
            };
            if let Some(pathways) = preset_arg {
                let levels = parse_levels(&levels)?;
                for pathway in pathways {
                    for level in &levels {
                        configs.push(preset(pathway, *level));
                    }
                }
            }
            Ok(render_comparison(&compare_pathways(&configs), format))
        }
        Command::Montecarlo {
            file,
            samples,
            seed,
            calibration,
            format,
        } => {
            let format = ReportFormat::parse(&format)?;
            let doc = load(&file)?;
            let mut spec = match calibration {
                Some(path) => config::load_calibration(&path, doc.config.plant.pathway)?,
                None => doc.uncertainty.clone().ok_or_else(|| {
                    Error::config(
                        "no uncertainty spec: add an [uncertainty] section to the \
                         project file or pass --calibration",
                    )
                })?,
            };
            if let Some(samples) = samples {
                spec.samples = samples;
            }
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            let summary = uncertainty::run_monte_carlo(&doc.config, &spec)?;
            Ok(render_monte_carlo(&summary, format))
        }
        Command::Tornado {
            file,
            metric,
            ranges,
            format,
        } => {
            let format = ReportFormat::parse(&format)?;
            let metric = TargetMetric::parse(&metric)?;
            let doc = load(&file)?;
            let ranges = match ranges {
                Some(path) => config::load_ranges(&path)?,
                None => uncertainty::default_tornado_ranges(&doc.config),
            };
            let entries = uncertainty::tornado(&doc.config, metric, &ranges)?;
            Ok(render_tornado(&entries, metric, format))
        }
        Command::Emissions { file, format } => {
            let format = ReportFormat::parse(&format)?;
            let doc = load(&file)?;
            let evaluation = evaluate(&doc.config)?;
            Ok(render_emissions(&evaluation.emissions, format))
        }
        Command::Presets { list: _, dump } => match dump {
            None => {
                let mut out = String::new();
                for pathway in Pathway::all() {
                    for level in AutomationLevel::all() {
                        out.push_str(&format!(
                            "{} {}  {}\n",
                            pathway.id(),
                            level.id(),
                            preset(pathway, level).name
                        ));
                    }
                }
                Ok(out)
            }
            Some(args) => {
                let pathway = Pathway::from_id(&args[0]).ok_or_else(|| {
                    Error::config(format!(
                        "unknown pathway \"{}\" (expected egs, wells, or gshp)",
                        args[0]
                    ))
                })?;
                let level = AutomationLevel::from_id(&args[1]).ok_or_else(|| {
                    Error::config(format!(
                        "unknown level \"{}\" (expected baseline, moderate, or full)",
                        args[1]
                    ))
                })?;
                Ok(config::serialize_project(&preset(pathway, level)))
            }
        },
    }
}

/// Loads a project and forwards its soft warnings to stderr.
fn load(file: &Path) -> Result<ProjectDocument> {
    let doc = config::load_project(file)?;
    for warning in &doc.warnings {
        eprintln!("{warning}");
    }
    Ok(doc)
}

fn parse_pathways(list: &str) -> Result<Vec<Pathway>> {
    if list == "all" {
        return Ok(Pathway::all().to_vec());
    }
    list.split(',')
        .map(|id| {
            Pathway::from_id(id.trim()).ok_or_else(|| {
                Error::config(format!(
                    "--presets: unknown pathway \"{id}\" (expected all or a comma \
                     list of egs, wells, gshp)"
                ))
            })
        })
        .collect()
}

fn parse_levels(list: &str) -> Result<Vec<AutomationLevel>> {
    list.split(',')
        .map(|id| {
            AutomationLevel::from_id(id.trim()).ok_or_else(|| {
                Error::config(format!(
                    "--levels: unknown level \"{id}\" (expected a comma list of \
                     baseline, moderate, full)"
                ))
            })
        })
        .collect()
}
