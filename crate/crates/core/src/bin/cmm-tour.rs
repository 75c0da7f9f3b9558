use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use log::info;

use cmm_tour::pipeline::{compare_solvers, export_plan, run_plan_from, ExportFormat, PlanReport, SceneSource};
use cmm_tour::scene::{generate_scene, write_scene, SceneFiles, SceneSpec};
use cmm_tour::timing::{build_time_matrix, TimeMatrix};
use cmm_tour::tsp::{solve_untainted, Solver, SolverParams};
use cmm_tour::{Error, PlanConfig, Result};

#[derive(Parser)]
#[command(name = "cmm-tour", version, about = "Collision-free inspection tours for CMM probes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a synthetic scene into node and MP CSV files.
    GenScene {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        nodes: PathBuf,
        #[arg(long)]
        mps: PathBuf,
    },
    /// Build the time matrix and write it as CSV.
    Matrix {
        #[command(flatten)]
        scene: SceneArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve a tour over a matrix CSV.
    Solve {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the tour as JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full pipeline and write the plan report.
    Plan {
        #[command(flatten)]
        scene: SceneArgs,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: SolverArgs,
        /// Also compare SA, GA and ACO over this many seeds.
        #[arg(long)]
        compare: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        obj: Option<PathBuf>,
    },
    /// Compare solvers over seeds 0..N on a matrix CSV.
    Compare {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
    },
    /// Convert a plan report to json, csv or obj.
    Export {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        format: ExportFormat,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SceneArgs {
    /// SceneSpec JSON; alternative to --nodes/--mps.
    #[arg(long, conflicts_with_all = ["nodes", "mps"])]
    spec: Option<PathBuf>,
    #[arg(long, requires = "mps")]
    nodes: Option<PathBuf>,
    #[arg(long, requires = "nodes")]
    mps: Option<PathBuf>,
    /// Seed for sampling MPs from --spec.
    #[arg(long, default_value_t = 0)]
    scene_seed: u64,
}

#[derive(Args)]
struct Common {
    /// PlanConfig JSON; missing fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value = "sa")]
    solver: Solver,
    /// SolverParams JSON.
    #[arg(long)]
    params: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<PlanConfig> {
        let mut cfg = match &self.config {
            Some(p) => PlanConfig::load(p)?,
            None => PlanConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl SceneArgs {
    fn source(&self) -> Result<SceneSource> {
        match (&self.spec, &self.nodes, &self.mps) {
            (Some(spec), _, _) => Ok(SceneSource::Spec { spec: SceneSpec::load(spec)?, seed: self.scene_seed }),
            (None, Some(nodes), Some(mps)) => Ok(SceneSource::Files { nodes: nodes.clone(), mps: mps.clone() }),
            _ => Err(Error::InvalidConfig("give either --spec or both --nodes and --mps".into())),
        }
    }
}

impl SolverArgs {
    fn params(&self, seed: u64) -> Result<SolverParams> {
        let mut p: SolverParams = match &self.params {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.clone(), source: e })?;
                serde_json::from_str(&text).map_err(|e| Error::Json { path: path.clone(), source: e })?
            }
            None => SolverParams::default(),
        };
        p.seed = seed;
        p.validate()?;
        Ok(p)
    }
}

fn write_json(value: &impl serde::Serialize, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    match path {
        Some(p) => cmm_tour::scene::write_file(p, &text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenScene { spec, seed, nodes, mps } => {
            let (cloud, points) = generate_scene(&SceneSpec::load(&spec)?, seed)?;
            write_scene(&cloud, &points, &SceneFiles { nodes, mps })?;
            info!("{} nodes, {} MPs", cloud.len(), points.len());
        }
        Command::Matrix { scene, common, out } => {
            let cfg = common.config()?;
            let (cloud, mps) = scene.source()?.load(&cfg)?;
            let start = Instant::now();
            let t = build_time_matrix(&mps, &cloud, &cfg);
            info!("time matrix: {} MPs in {:.3} s", mps.len(), start.elapsed().as_secs_f64());
            cmm_tour::scene::write_file(&out, &t.to_csv())?;
        }
        Command::Solve { matrix, common, solver, out } => {
            let cfg = common.config()?;
            let t = TimeMatrix::load_csv(&matrix, cfg.a_inf)?;
            let params = solver.params(cfg.seed)?;
            let start = Instant::now();
            let (tour, excluded) = solve_untainted(&t, solver.solver, &params)?;
            info!("{} solve: {:.3} s", solver.solver.name(), start.elapsed().as_secs_f64());
            if !excluded.is_empty() {
                info!("excluded indices: {excluded:?}");
            }
            write_json(&tour, out.as_deref())?;
        }
        Command::Plan { scene, common, solver, compare, out, csv, obj } => {
            let cfg = common.config()?;
            let params = solver.params(cfg.seed)?;
            let seeds: Option<Vec<u64>> = compare.map(|n| (0..n).collect());
            let report = run_plan_from(&scene.source()?, &cfg, solver.solver, &params, seeds.as_deref())?;
            info!(
                "total {:.3} s ({} SMPs, {} rotations, {} segments, {} inaccessible)",
                report.totals.total,
                report.counts.smps,
                report.counts.rotations,
                report.counts.segments,
                report.counts.inaccessible.len()
            );
            export_plan(&report, ExportFormat::Json, &out)?;
            if let Some(p) = csv {
                export_plan(&report, ExportFormat::Csv, &p)?;
            }
            if let Some(p) = obj {
                export_plan(&report, ExportFormat::Obj, &p)?;
            }
        }
        Command::Compare { matrix, common, solver, seeds } => {
            let cfg = common.config()?;
            let t = TimeMatrix::load_csv(&matrix, cfg.a_inf)?;
            let params = solver.params(cfg.seed)?;
            let seeds: Vec<u64> = (0..seeds).collect();
            let rows = compare_solvers(&t, &params, &[Solver::Sa, Solver::Ga, Solver::Aco], &seeds);
            println!("{:<10} {:>14} {:>14} {:>10}", "solver", "best", "median", "wall_s");
            for r in rows {
                println!("{:<10} {:>14.4} {:>14.4} {:>10.4}", r.solver.name(), r.best, r.median, r.wall_time);
            }
        }
        Command::Export { report, format, out } => {
            export_plan(&PlanReport::load(&report)?, format, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e @ Error::Invariant(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(_) => ExitCode::from(2),
    }
}
