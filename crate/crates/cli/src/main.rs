use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};

use gridknot::bounds::{theorem3_bound, verify_theorem3, BoundKind};
use gridknot::census::{
    enumerate, max_stats, verify_theorem2, CensusFilter, CensusOptions,
};
use gridknot::geometry::to_planar;
use gridknot::realizer::{realize, replay_json};
use gridknot::render::{render, Format};
use gridknot::simplify::{is_trivial, scramble, SearchLimits, SimplificationWitness};
use gridknot::{apply, available_moves, io as grid_io, CromwellMove, GridDiagram};

/// Grid diagrams of knots: moves, simplification, census and Reidemeister bounds.
#[derive(Parser)]
#[command(name = "gridknot", version)]
struct Cli {
    /// Seed for generated inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Most diagrams a search may visit.
    #[arg(long, global = true)]
    limit_states: Option<usize>,
    /// Wall-clock limit for a search.
    #[arg(long, global = true)]
    limit_seconds: Option<f64>,
    /// Human-readable output instead of compact JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GridArg {
    /// Grid file in text or JSON form; `-` reads stdin.
    #[arg(long, value_name = "FILE")]
    grid: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a grid file describes a valid diagram.
    Validate(GridArg),
    /// Size, crossings, components and total edge length.
    Info(GridArg),
    /// List the available moves, or apply one.
    Moves {
        #[command(flatten)]
        grid: GridArg,
        /// Move JSON (inline or a file) to apply.
        #[arg(long, value_name = "MOVE")]
        apply: Option<String>,
    },
    /// Decide whether a knot diagram is trivial by monotone simplification.
    #[command(group(ArgGroup::new("input").required(true).args(["grid", "scramble"])))]
    Simplify {
        #[arg(long, value_name = "FILE")]
        grid: Option<PathBuf>,
        /// Start from the trivial diagram scrambled by this many moves.
        #[arg(long, value_name = "STEPS")]
        scramble: Option<usize>,
        /// Use merges and exchanges only.
        #[arg(long)]
        strict: bool,
        /// Also decide whether exterior exchanges are needed.
        #[arg(long)]
        check_exterior: bool,
        /// Write the witness here.
        #[arg(long, value_name = "FILE")]
        witness: Option<PathBuf>,
    },
    /// Enumerate diagrams of one size up to symmetry.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        knots: bool,
        /// Knot diagrams with no merge and no interior exchange.
        #[arg(long)]
        stuck: bool,
        /// Trivial knots only (implies --knots).
        #[arg(long)]
        trivial: bool,
        /// Stuck trivial diagrams whose only exchange is the exterior horizontal one.
        #[arg(long, conflicts_with_all = ["knots", "stuck", "trivial"])]
        only_exterior_horizontal: bool,
        /// Report on stuck trivial diagrams and their exterior moves.
        #[arg(long, conflicts_with_all = ["only_exterior_horizontal", "max_stats"])]
        theorem2: bool,
        /// Largest crossing count and edge length over all diagrams.
        #[arg(long, conflicts_with_all = ["knots", "stuck", "trivial", "only_exterior_horizontal"])]
        max_stats: bool,
        #[arg(long, value_name = "FILE")]
        checkpoint: Option<PathBuf>,
        /// Write representatives here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Filter after generation instead of pruning during it.
        #[arg(long)]
        no_pruning: bool,
    },
    /// Closed-form bounds, or the per-jump counts of one exterior move.
    #[command(group(ArgGroup::new("mode").required(true).args(["formula", "grid"])))]
    Bounds {
        /// Grid size and move kind.
        #[arg(long, num_args = 2, value_names = ["N", "KIND"])]
        formula: Option<Vec<String>>,
        #[arg(long, value_name = "FILE", requires = "move_json")]
        grid: Option<PathBuf>,
        #[arg(long = "move", value_name = "MOVE")]
        move_json: Option<String>,
    },
    /// Realize an exterior move as a sequence of Reidemeister moves.
    Realize {
        #[command(flatten)]
        grid: GridArg,
        #[arg(long = "move", value_name = "MOVE")]
        move_json: String,
        /// Write the trace here instead of into the report.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Draw a diagram.
    Render {
        #[command(flatten)]
        grid: GridArg,
        #[arg(long, default_value = "ascii")]
        format: String,
        /// Write the drawing here instead of into the report.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Check a simplification witness or a Reidemeister trace.
    #[command(group(ArgGroup::new("kind").required(true).args(["witness", "trace"])))]
    Replay {
        #[arg(long, value_name = "FILE")]
        witness: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
    },
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_grid(path: &Path) -> Result<GridDiagram> {
    Ok(grid_io::parse_any(&read_input(path)?)?)
}

fn read_json(path: &Path) -> Result<Value> {
    serde_json::from_str(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// A move given inline as JSON or as the name of a file holding it.
fn parse_move(arg: &str) -> Result<CromwellMove> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        read_input(Path::new(arg))?
    };
    let v: Value = serde_json::from_str(&text).context("parsing move JSON")?;
    Ok(CromwellMove::from_json(&v)?)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

struct Ctx {
    jobs: usize,
    seed: u64,
    limits: SearchLimits,
    pretty: bool,
}

impl Ctx {
    fn new(cli: &Cli) -> Result<Self> {
        let mut limits = SearchLimits {
            jobs: cli.jobs.max(1),
            max_seconds: cli.limit_seconds,
            ..SearchLimits::default()
        };
        if let Some(s) = cli.limit_states {
            limits.max_states = s;
        }
        if let Ok(mb) = std::env::var("GRIDKNOT_LIMIT_MB") {
            let mb: usize = mb.trim().parse().context("GRIDKNOT_LIMIT_MB must be an integer")?;
            limits = limits.with_memory_mb(mb);
        }
        Ok(Ctx {
            jobs: cli.jobs.max(1),
            seed: cli.seed,
            limits,
            pretty: cli.pretty,
        })
    }

    fn census_options(&self, checkpoint: Option<PathBuf>, no_pruning: bool) -> CensusOptions {
        CensusOptions {
            jobs: self.jobs,
            checkpoint,
            search: self.limits,
            no_pruning,
        }
    }

    fn emit(&self, v: &Value) -> Result<()> {
        let mut out = io::stdout().lock();
        if self.pretty {
            write!(out, "{}", pretty(v))?;
        } else {
            writeln!(out, "{v}")?;
        }
        Ok(())
    }
}

/// Flat objects as aligned two-column tables, anything else as indented JSON.
fn pretty(v: &Value) -> String {
    match v.as_object() {
        Some(map) if map.values().all(|x| !x.is_object() && !x.is_array()) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            map.iter()
                .map(|(k, x)| format!("{k:<width$}  {x}\n"))
                .collect()
        }
        _ => serde_json::to_string_pretty(v).unwrap_or_default() + "\n",
    }
}

fn run(cli: Cli) -> Result<()> {
    let ctx = Ctx::new(&cli)?;
    match cli.command {
        Command::Validate(g) => {
            let d = read_grid(&g.grid)?;
            ctx.emit(&json!({
                "valid": true,
                "n": d.n(),
                "knot": d.is_knot(),
            }))
        }
        Command::Info(g) => {
            let d = read_grid(&g.grid)?;
            let stats = d.length_stats();
            ctx.emit(&json!({
                "n": d.n(),
                "crossings": d.crossing_count(),
                "components": d.component_count(),
                "total_length": stats.total_all,
            }))
        }
        Command::Moves { grid, apply: None } => {
            let d = read_grid(&grid.grid)?;
            let moves: Vec<Value> = available_moves(&d).iter().map(CromwellMove::to_json).collect();
            ctx.emit(&Value::Array(moves))
        }
        Command::Moves {
            grid,
            apply: Some(m),
        } => {
            let d = read_grid(&grid.grid)?;
            let e = apply(&d, &parse_move(&m)?)?;
            ctx.emit(&grid_io::to_json(&e))
        }
        Command::Simplify {
            grid,
            scramble: steps,
            strict,
            check_exterior,
            witness,
        } => {
            let d = match (grid, steps) {
                (Some(p), _) => read_grid(&p)?,
                (None, Some(k)) => scramble(ctx.seed, k),
                (None, None) => unreachable!("clap requires one input"),
            };
            let limits = SearchLimits {
                strict,
                check_exterior,
                ..ctx.limits
            };
            let report = is_trivial(&d, &limits)?;
            if let (Some(path), Some(w)) = (&witness, &report.witness) {
                write_file(path, &(w.to_json().to_string() + "\n"))?;
            }
            ctx.emit(&report.to_json())
        }
        Command::Census {
            n,
            knots,
            stuck,
            trivial,
            only_exterior_horizontal,
            theorem2,
            max_stats: stats,
            checkpoint,
            out,
            no_pruning,
        } => {
            let opts = ctx.census_options(checkpoint, no_pruning);
            if theorem2 {
                return ctx.emit(&verify_theorem2(n, &opts)?.to_json());
            }
            if stats {
                let (c, l) = max_stats(n, &opts)?;
                return ctx.emit(&json!({ "n": n, "max_crossings": c, "max_length": l }));
            }
            let filter = if only_exterior_horizontal {
                CensusFilter::ONLY_EXTERIOR_HORIZONTAL
            } else {
                CensusFilter {
                    knots_only: knots || stuck || trivial,
                    stuck_only: stuck,
                    trivial_only: trivial,
                    ..CensusFilter::ALL
                }
            };
            let mut listing = String::new();
            let result = enumerate(n, filter, &opts, &mut |d| {
                listing.push_str(&grid_io::to_text(d));
            })?;
            match out {
                Some(path) => write_file(&path, &listing)?,
                None => io::stdout().lock().write_all(listing.as_bytes())?,
            }
            ctx.emit(&result.summary_json())
        }
        Command::Bounds {
            formula: Some(args),
            ..
        } => {
            let n: usize = args[0]
                .parse()
                .with_context(|| format!("grid size {:?}", args[0]))?;
            let kind = BoundKind::parse(&args[1])?;
            ctx.emit(&json!(theorem3_bound(n, kind)?))
        }
        Command::Bounds {
            grid: Some(path),
            move_json,
            ..
        } => {
            let d = read_grid(&path)?;
            let m = parse_move(move_json.as_deref().unwrap_or_default())?;
            ctx.emit(&serde_json::to_value(verify_theorem3(&d, &m)?)?)
        }
        Command::Bounds { .. } => unreachable!("clap requires --formula or --grid"),
        Command::Realize {
            grid,
            move_json,
            out,
        } => {
            let d = read_grid(&grid.grid)?;
            let m = parse_move(&move_json)?;
            let trace = realize(&d, &m)?;
            let expected = to_planar(&apply(&d, &m)?);
            let verified = trace.replay()?.gauss_code()? == expected.gauss_code()?;
            if !verified {
                bail!("replayed trace does not reach the moved diagram");
            }
            let budget: usize = trace.jumps.iter().map(|j| j.sigma.sigma_simple).sum();
            let jumps: Vec<Value> = trace
                .jumps
                .iter()
                .map(|j| {
                    json!({
                        "moves": j.moves,
                        "r1": j.r1,
                        "r3": j.r3,
                        "sigma": j.sigma,
                        "termination": j.termination.map(|t| t.name()),
                    })
                })
                .collect();
            let mut report = json!({
                "move": m.to_json(),
                "total": trace.moves.len(),
                "counts": trace.counts(),
                "budget": budget,
                "theorem3_bound": verify_theorem3(&d, &m)?.bound,
                "verified": verified,
                "jumps": jumps,
            });
            match out {
                Some(path) => write_file(&path, &(trace.to_json().to_string() + "\n"))?,
                None => report["trace"] = trace.to_json(),
            }
            ctx.emit(&report)
        }
        Command::Render { grid, format, out } => {
            let d = read_grid(&grid.grid)?;
            let drawing = render(&d, Format::parse(&format)?);
            let mut report = json!({ "format": format, "grid": grid_io::to_json(&d) });
            match out {
                Some(path) => write_file(&path, &drawing)?,
                None => report["drawing"] = Value::String(drawing),
            }
            ctx.emit(&report)
        }
        Command::Replay {
            witness: Some(path),
            ..
        } => {
            let w = SimplificationWitness::from_json(&read_json(&path)?)?;
            let end = w.replay()?;
            ctx.emit(&json!({
                "valid": true,
                "kind": "witness",
                "moves": w.moves.len(),
                "final": grid_io::to_json(&end),
                "uses_exterior": w.uses_exterior,
            }))
        }
        Command::Replay {
            trace: Some(path), ..
        } => {
            let (_, moves, fin) = replay_json(&read_json(&path)?)?;
            ctx.emit(&json!({
                "valid": true,
                "kind": "trace",
                "moves": moves.len(),
                "final_gauss": fin.gauss_code()?.to_string(),
            }))
        }
        Command::Replay { .. } => unreachable!("clap requires --witness or --trace"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
