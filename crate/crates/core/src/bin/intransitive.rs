//! Command-line front end: canonical demos, verification of device files,
//! and exhaustive searches streaming JSON Lines.
//!
//! Exit codes: 0 = the expected structure was confirmed / the search found
//! at least one result; 1 = it was not found; 2 = bad usage, unparseable
//! input, or a violated precondition.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use intransitive::dice::SearchSpec;
use intransitive::gears::GearGeometry;
use intransitive::rational::parse_rational;
use intransitive::voting::RotationDirection;
use intransitive::workbench::{
    cmd_demo, cmd_search_dice, cmd_search_lane_triples, cmd_verify_file, parse_palette, RunOptions,
    RunReport, WorkbenchError,
};

#[derive(Parser)]
#[command(
    name = "intransitive",
    version,
    about = "Build, simulate, and verify systems whose pairwise duels form cycles instead of rankings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format on stdout (searches always stream JSON Lines and send
    /// the report to stderr).
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Copies per side in value-multiset duels.
    #[arg(long, global = true, default_value_t = 1)]
    copies: u32,

    /// Longest cycle to search for (0 = up to the number of players).
    #[arg(long, global = true, default_value_t = 0)]
    max_cycle_len: usize,

    /// Worker threads for searches (0 = one per core). Output is identical
    /// for every setting.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Stop streaming after this many results.
    #[arg(long, global = true)]
    limit: Option<u64>,

    /// Rotation direction for fixtures built from a rotated base row.
    #[arg(long, global = true, value_enum)]
    rotation: Option<Rotation>,

    /// Append a clearly marked decimal approximation to non-integer values.
    #[arg(long, global = true)]
    decimal: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Rotation {
    /// First element moves to the back.
    Left,
    /// Last element moves to the front.
    Right,
}

impl From<Rotation> for RotationDirection {
    fn from(r: Rotation) -> Self {
        match r {
            Rotation::Left => RotationDirection::Left,
            Rotation::Right => RotationDirection::Right,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a canonical fixture: efron, losho-sticks, condorcet-vote, gears3,
    /// gears-chain-n, levers, pulleys, towers, combs, or birds.
    Demo {
        name: String,
        /// Ring size for gears-chain-n (at least 3).
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Large gear radius (exact rational, e.g. "2" or "5/2").
        #[arg(long)]
        rx: Option<String>,
        /// Small gear radius (exact rational).
        #[arg(long)]
        ry: Option<String>,
    },
    /// Parse a JSON device file and check it for the expected structure.
    Verify { file: PathBuf },
    /// Exhaustively enumerate a bounded design space, streaming hits as
    /// JSON Lines on stdout.
    Search {
        #[command(subcommand)]
        kind: SearchKind,
    },
}

#[derive(Subcommand)]
enum SearchKind {
    /// Families of value multisets whose duels form a cycle.
    Dice {
        /// Number of sets per family.
        #[arg(long)]
        sets: usize,
        /// Values per set.
        #[arg(long)]
        faces: usize,
        /// Smallest candidate value.
        #[arg(long)]
        min: i64,
        /// Largest candidate value.
        #[arg(long)]
        max: i64,
        /// Required cycle length (defaults to --sets).
        #[arg(long)]
        cycle_len: Option<usize>,
        /// Only keep families whose weakest step wins by at least this
        /// probability margin (exact rational).
        #[arg(long)]
        min_margin: Option<String>,
    },
    /// Base lane rows whose three rotations act on each other in a strict
    /// cycle.
    LaneTriples {
        /// Lanes per device.
        #[arg(long)]
        lanes: usize,
        /// Comma-separated palette: "Kind:lo-hi", "Kind:a|b|c", or "Gap".
        #[arg(long, default_value = "Marker:1-3,Block:1-3,Gap")]
        palette: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, WorkbenchError> {
    let options = RunOptions {
        copies: cli.copies,
        max_cycle_len: cli.max_cycle_len,
        rotation: cli.rotation.map(Into::into),
        decimal: cli.decimal,
        ..RunOptions::default()
    };
    match &cli.command {
        Command::Demo { name, n, rx, ry } => {
            let geometry = geometry_from_flags(rx.as_deref(), ry.as_deref())?;
            let options = RunOptions {
                n: *n,
                geometry,
                ..options
            };
            let report = cmd_demo(name, &options)?;
            emit_report(&report, cli.format, &mut std::io::stdout())
        }
        Command::Verify { file } => {
            let report = cmd_verify_file(file, &options)?;
            emit_report(&report, cli.format, &mut std::io::stdout())
        }
        Command::Search { kind } => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            let report = match kind {
                SearchKind::Dice {
                    sets,
                    faces,
                    min,
                    max,
                    cycle_len,
                    min_margin,
                } => {
                    let min_margin = min_margin
                        .as_deref()
                        .map(|s| {
                            parse_rational(s).map_err(|e| {
                                WorkbenchError::BadOption(format!("bad --min-margin: {e}"))
                            })
                        })
                        .transpose()?;
                    let spec = SearchSpec {
                        n_sets: *sets,
                        n_faces: *faces,
                        value_min: *min,
                        value_max: *max,
                        copies: cli.copies,
                        required_cycle_len: cycle_len.unwrap_or(*sets),
                        min_margin,
                    };
                    cmd_search_dice(&spec, cli.jobs, cli.limit, &mut out)?
                }
                SearchKind::LaneTriples { lanes, palette } => {
                    let palette = parse_palette(palette)?;
                    let direction = cli
                        .rotation
                        .map(Into::into)
                        .unwrap_or(RotationDirection::Right);
                    cmd_search_lane_triples(
                        &palette, *lanes, direction, cli.jobs, cli.limit, &mut out,
                    )?
                }
            };
            out.flush()
                .map_err(|e| WorkbenchError::StreamWrite(e.to_string()))?;
            emit_report(&report, cli.format, &mut std::io::stderr())
        }
    }
}

fn geometry_from_flags(rx: Option<&str>, ry: Option<&str>) -> Result<GearGeometry, WorkbenchError> {
    match (rx, ry) {
        (None, None) => Ok(GearGeometry::default_two_one()),
        (Some(rx), Some(ry)) => {
            let parse = |s: &str| {
                parse_rational(s)
                    .map_err(|e| WorkbenchError::BadOption(format!("bad radius {s:?}: {e}")))
            };
            GearGeometry::new(parse(rx)?, parse(ry)?)
                .map_err(|e| WorkbenchError::BadOption(e.to_string()))
        }
        _ => Err(WorkbenchError::BadOption(
            "--rx and --ry must be given together".to_string(),
        )),
    }
}

fn emit_report(
    report: &RunReport,
    format: Format,
    out: &mut dyn Write,
) -> Result<u8, WorkbenchError> {
    let rendered = match format {
        Format::Text => report.to_text(),
        Format::Json => format!("{}\n", report.to_json()),
    };
    out.write_all(rendered.as_bytes())
        .map_err(|e| WorkbenchError::StreamWrite(e.to_string()))?;
    Ok(report.exit_code as u8)
}
