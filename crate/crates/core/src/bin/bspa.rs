use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use bspa::bench::{family_averages, run_bench, write_csv};
use bspa::io::{parse_instance, width_warnings, Family, Format};
use bspa::render::{render_svg, RenderSpec};
use bspa::{solve, Rotation, Solution, SolveError, SolverConfig};

const EXIT_PARSE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "bspa", version, about = "Beam-search strip packing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file.
    Solve {
        path: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value = "auto")]
        format: Format,
        /// Write the solution file here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write an SVG drawing here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Solve every instance of a dataset directory.
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value = "results.csv")]
        csv: PathBuf,
        /// Comma-separated families, e.g. `C,KR`.
        #[arg(long, value_delimiter = ',')]
        families: Option<Vec<Family>>,
        /// At most this many instances per family.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Draw a solution file as SVG.
    Render {
        solution: PathBuf,
        instance: PathBuf,
        #[arg(long, default_value = "auto")]
        format: Format,
        #[arg(long, default_value = "of")]
        rotation: Rotation,
        #[arg(long, default_value_t = 10)]
        scale: u32,
        #[arg(long)]
        labels: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 0.1)]
    b: f64,
    /// Seconds for the minimum container search.
    #[arg(long, default_value_t = 30.0)]
    t1: f64,
    /// Seconds for each sweep length.
    #[arg(long, default_value_t = 30.0)]
    t3: f64,
    /// Parallel sweep searches.
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value = "of")]
    rotation: Rotation,
    /// Use node budgets instead of wall-clock limits.
    #[arg(long)]
    deterministic: bool,
    /// Node budget per search in deterministic mode.
    #[arg(long, default_value_t = 2000)]
    nodes: u64,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        let cfg = if self.deterministic {
            SolverConfig::deterministic(self.b, self.nodes, self.p)
        } else {
            SolverConfig::timed(
                self.b,
                Duration::from_secs_f64(self.t1),
                Duration::from_secs_f64(self.t3),
                self.p,
            )
        };
        cfg.with_rotation(self.rotation)
    }
}

struct Failure(u8, String);

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn read(path: &PathBuf) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, data: &[u8]) -> Result<(), Failure> {
    fs::write(path, data).map_err(|e| Failure(EXIT_INTERNAL, format!("{}: {e}", path.display())))
}

fn load_instance(path: &PathBuf, format: Format) -> Result<bspa::Instance, Failure> {
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_instance(&read(path)?, format, &name).map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { path, solver, format, out, svg } => {
            let instance = load_instance(&path, format)?;
            for w in width_warnings(&instance, solver.rotation) {
                eprintln!("warning: {w}");
            }
            let cfg = solver.config();
            let report = solve(&instance, &cfg).map_err(|e| match e {
                SolveError::Infeasible { .. } | SolveError::EmptyInstance => Failure(EXIT_INFEASIBLE, e.to_string()),
                _ => Failure(EXIT_INTERNAL, e.to_string()),
            })?;
            let sol = &report.solution;
            let gap = sol.gap_percent();
            println!(
                "{} length {} gap {:.4}% ({}/{}) config {}",
                instance.name,
                sol.used_length,
                *gap.numer() as f64 / *gap.denom() as f64,
                gap.numer(),
                gap.denom(),
                cfg.tag()
            );
            if let Some(out) = out {
                write(&out, sol.to_file_string().as_bytes())?;
            }
            if let Some(svg) = svg {
                let text = render_svg(&instance, sol, cfg.rotation, &RenderSpec::default())
                    .map_err(|e| Failure(EXIT_INTERNAL, e.to_string()))?;
                write(&svg, text.as_bytes())?;
            }
            Ok(())
        }
        Command::Bench { dir, solver, csv, families, limit } => {
            let cfg = solver.config();
            let records = run_bench(&dir, &cfg, families.as_deref(), limit, |r| match (&r.gap, &r.error) {
                (Some(g), _) => eprintln!(
                    "{} {} length {} gap {:.4}%",
                    r.family,
                    r.instance,
                    r.used_length.unwrap_or_default(),
                    *g.numer() as f64 / *g.denom() as f64
                ),
                (None, e) => eprintln!("{} {} failed: {}", r.family, r.instance, e.as_deref().unwrap_or("")),
            })
            .map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", dir.display())))?;
            let mut buf = Vec::new();
            write_csv(&mut buf, &records).map_err(|e| Failure(EXIT_INTERNAL, e.to_string()))?;
            write(&csv, &buf)?;
            for a in family_averages(&records) {
                println!(
                    "{} {} instances {} failures {} mean gap {:.4}% mean time {:.2}s",
                    a.family, a.mode, a.instances, a.failures, a.mean_gap, a.mean_time_s
                );
            }
            Ok(())
        }
        Command::Render { solution, instance, format, rotation, scale, labels, out } => {
            let inst = load_instance(&instance, format)?;
            let text = String::from_utf8(read(&solution)?)
                .map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", solution.display())))?;
            let sol = Solution::parse(&text, &inst)
                .map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", solution.display())))?;
            let spec = RenderSpec { scale, labels, ..Default::default() };
            let svg = render_svg(&inst, &sol, rotation, &spec).map_err(|e| Failure(EXIT_INTERNAL, e.to_string()))?;
            match out {
                Some(p) => write(&p, svg.as_bytes()),
                None => {
                    print!("{svg}");
                    Ok(())
                }
            }
        }
    }
}
