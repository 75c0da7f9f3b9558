//! End-to-end planning: scene → time matrix → tour → probe program.

use std::path::{Path, PathBuf};
use std::time::Instant;

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::collision::segment_collides;
use crate::config::PlanConfig;
use crate::error::{Error, Result};
use crate::geometry::{approach_point, MeasurementPoint, Point3};
use crate::localpath::WaypointKind;
use crate::scene::{self, generate_scene, NodeCloud, NodeFormat, SceneSpec};
use crate::timing::{build_time_matrix, required_orientation, tour_time, TimeMatrix};
use crate::tsp::{nearest_neighbor, solve, solve_untainted, Solver, SolverParams, Tour};

/// Where the surface and measurement points come from.
#[derive(Debug, Clone)]
pub enum SceneSource {
    /// Synthetic scene sampled with the given seed.
    Spec { spec: SceneSpec, seed: u64 },
    /// Node cloud and MP files on disk.
    Files { nodes: PathBuf, mps: PathBuf },
}

impl SceneSource {
    pub fn load(&self, cfg: &PlanConfig) -> Result<(NodeCloud, Vec<MeasurementPoint>)> {
        let (cloud, mps) = match self {
            SceneSource::Spec { spec, seed } => generate_scene(spec, *seed)?,
            SceneSource::Files { nodes, mps } => {
                (scene::load_nodes(nodes, NodeFormat::from_path(nodes), cfg.l)?, scene::load_mps(mps)?)
            }
        };
        Ok((cloud.reindexed(cfg.cell_size()), mps))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum StepKind {
    Origin,
    Ap,
    Mp,
    Smp,
    Rotate,
}

impl StepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StepKind::Origin => "ORIGIN",
            StepKind::Ap => "AP",
            StepKind::Mp => "MP",
            StepKind::Smp => "SMP",
            StepKind::Rotate => "ROTATE",
        }
    }

    pub fn is_translation(&self) -> bool {
        *self != StepKind::Rotate
    }
}

/// One line of the probe program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub kind: StepKind,
    pub position: Point3,
    /// Target head angles, ROTATE only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mp_id: Option<String>,
    /// Seconds since leaving the origin, after this step.
    pub cumulative_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub transition: f64,
    pub rotation: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub smps: usize,
    pub rotations: usize,
    pub segments: usize,
    pub inaccessible: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub solver: Solver,
    pub best: f64,
    pub median: f64,
    /// Mean wall time per run, seconds.
    pub wall_time: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    /// Visiting order over the original MP indices (1-based, 0 is the origin).
    pub tour: Tour,
    pub visit_ids: Vec<String>,
    pub program: Vec<Step>,
    pub totals: Totals,
    pub counts: Counts,
    /// Nearest-neighbour tour time over the same accessible MPs.
    pub nn_total: f64,
    pub config: PlanConfig,
    pub solver_params: SolverParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Vec<ComparisonRow>>,
}

impl PlanReport {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path, e))
    }
}

/// Plans a tour over `mps` and expands it into a probe program.
///
/// The solver seed is taken from `cfg.seed`. MPs that only an `a_inf` leg
/// can reach are dropped and listed in `counts.inaccessible`; if none remain
/// the report holds an empty tour. With `compare` set, every solver is also
/// run over those seeds on the reduced matrix.
pub fn run_plan(
    cloud: &NodeCloud,
    mps: &[MeasurementPoint],
    cfg: &PlanConfig,
    solver: Solver,
    params: &SolverParams,
    compare: Option<&[u64]>,
) -> Result<PlanReport> {
    cfg.validate()?;
    let params = SolverParams { seed: cfg.seed, ..params.clone() };
    params.validate()?;

    let start = Instant::now();
    let matrix = build_time_matrix(mps, cloud, cfg);
    info!("time matrix: {} MPs in {:.3} s", mps.len(), start.elapsed().as_secs_f64());

    let start = Instant::now();
    let (tour, excluded) = solve_untainted(&matrix, solver, &params)?;
    info!("{} solve: {:.3} s, total {:.3} s", solver.name(), start.elapsed().as_secs_f64(), tour.total_time);

    let keep: Vec<usize> = (0..matrix.order()).filter(|k| excluded.binary_search(k).is_err()).collect();
    let reduced = matrix.submatrix(&keep);
    let nn_total = nearest_neighbor(&reduced).total_time;
    let comparison = compare.map(|seeds| {
        let start = Instant::now();
        let rows = compare_solvers(&reduced, &params, &[Solver::Sa, Solver::Ga, Solver::Aco], seeds);
        info!("solver comparison: {:.3} s", start.elapsed().as_secs_f64());
        rows
    });

    let report = assemble(&matrix, mps, tour, &excluded, cfg, params, nn_total, comparison)?;
    verify_program(&report, cloud, cfg)?;
    Ok(report)
}

/// Loads the scene and runs [`run_plan`].
pub fn run_plan_from(
    source: &SceneSource,
    cfg: &PlanConfig,
    solver: Solver,
    params: &SolverParams,
    compare: Option<&[u64]>,
) -> Result<PlanReport> {
    let start = Instant::now();
    let (cloud, mps) = source.load(cfg)?;
    info!("scene: {} nodes, {} MPs in {:.3} s", cloud.len(), mps.len(), start.elapsed().as_secs_f64());
    run_plan(&cloud, &mps, cfg, solver, params, compare)
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    matrix: &TimeMatrix,
    mps: &[MeasurementPoint],
    tour: Tour,
    excluded: &[usize],
    cfg: &PlanConfig,
    solver_params: SolverParams,
    nn_total: f64,
    comparison: Option<Vec<ComparisonRow>>,
) -> Result<PlanReport> {
    let mut program = vec![Step { kind: StepKind::Origin, position: cfg.origin, a: None, b: None, mp_id: None, cumulative_time: 0.0 }];
    let mut transition = 0.0;
    let mut rotation = 0.0;
    let mut leg_end = 0.0;
    let mut prev = 0;
    let stops: Vec<usize> = if tour.order.is_empty() { Vec::new() } else { tour.order.iter().copied().chain([0]).collect() };
    for next in stops {
        let leg = matrix
            .leg(prev, next)
            .ok_or_else(|| Error::Invariant(format!("no local path recorded for {prev} → {next}")))?;
        let path = matrix.oriented_path(prev, next).expect("leg exists");
        let entry = matrix.get(prev, next);
        if matrix.is_inf(prev, next) || !path.feasible {
            return Err(Error::Invariant(format!("tour uses an infeasible leg {prev} → {next}")));
        }
        transition += leg.transition;
        rotation += leg.rotation;

        let mut t = leg_end;
        if leg.rotation > 0.0 {
            let mp = &mps[next - 1];
            let o = required_orientation(mp, cfg.theta_max)
                .map_err(|e| Error::Invariant(format!("rotation towards `{}`: {e}", mp.id)))?;
            t += leg.rotation;
            program.push(Step {
                kind: StepKind::Rotate,
                position: path.waypoints[0].position,
                a: Some(o.a),
                b: Some(o.b),
                mp_id: Some(mp.id.clone()),
                cumulative_time: t,
            });
        }
        let mut travelled = 0.0;
        for w in path.waypoints.windows(2) {
            travelled += w[0].position.distance(&w[1].position);
            if w[1].kind == WaypointKind::Smp {
                program.push(Step {
                    kind: StepKind::Smp,
                    position: w[1].position,
                    a: None,
                    b: None,
                    mp_id: None,
                    cumulative_time: t + travelled / cfg.v,
                });
            }
        }
        // same summation order as tour_time, so the last row equals the total
        leg_end += entry;
        if next == 0 {
            program.push(Step { kind: StepKind::Origin, position: cfg.origin, a: None, b: None, mp_id: None, cumulative_time: leg_end });
        } else {
            let mp = &mps[next - 1];
            let ap = approach_point(mp, cfg.d);
            for (kind, position) in [(StepKind::Ap, ap), (StepKind::Mp, mp.position), (StepKind::Ap, ap)] {
                program.push(Step { kind, position, a: None, b: None, mp_id: Some(mp.id.clone()), cumulative_time: leg_end });
            }
        }
        prev = next;
    }

    let total = tour_time(&tour.order, matrix).total;
    if total != tour.total_time || total != leg_end {
        return Err(Error::Invariant(format!("tour total {} disagrees with program total {leg_end}", tour.total_time)));
    }
    let translations = program.iter().filter(|s| s.kind.is_translation()).count();
    let counts = Counts {
        smps: program.iter().filter(|s| s.kind == StepKind::Smp).count(),
        rotations: program.iter().filter(|s| s.kind == StepKind::Rotate).count(),
        segments: translations.saturating_sub(1),
        inaccessible: excluded.iter().map(|&k| mps[k - 1].id.clone()).collect(),
    };
    let visit_ids = tour.order.iter().map(|&k| mps[k - 1].id.clone()).collect();
    Ok(PlanReport {
        tour,
        visit_ids,
        program,
        totals: Totals { transition, rotation, total },
        counts,
        nn_total,
        config: cfg.clone(),
        solver_params,
        comparison,
    })
}

/// Re-checks every translation in the program except the AP↔MP dips, which
/// touch the surface by design.
pub fn verify_program(report: &PlanReport, cloud: &NodeCloud, cfg: &PlanConfig) -> Result<()> {
    let moves: Vec<&Step> = report.program.iter().filter(|s| s.kind.is_translation()).collect();
    for w in moves.windows(2) {
        if w[0].kind == StepKind::Mp || w[1].kind == StepKind::Mp {
            continue;
        }
        let r = segment_collides(cloud, &w[0].position, &w[1].position, cfg.eps(), cfg.d0);
        if r.collides {
            return Err(Error::Invariant(format!(
                "program move {:?} → {:?} passes {:.3} mm from the surface",
                w[0].position, w[1].position, r.min_distance
            )));
        }
    }
    Ok(())
}

/// Runs each solver once per seed and tabulates best, median and mean wall
/// time. A nearest-neighbour row is included as a baseline. Rows are sorted
/// by best cost, ties in solver order.
pub fn compare_solvers(t: &TimeMatrix, params: &SolverParams, solvers: &[Solver], seeds: &[u64]) -> Vec<ComparisonRow> {
    let runs: Vec<(Solver, u64)> = solvers.iter().flat_map(|&s| seeds.iter().map(move |&seed| (s, seed))).collect();
    let results: Vec<(f64, f64)> = runs
        .par_iter()
        .map(|&(s, seed)| {
            let start = Instant::now();
            let p = SolverParams { seed, ..params.clone() };
            let tour = solve(t, s, &p).expect("heuristic solvers do not fail");
            (tour.total_time, start.elapsed().as_secs_f64())
        })
        .collect();

    let mut rows: Vec<ComparisonRow> = solvers
        .iter()
        .enumerate()
        .filter(|_| !seeds.is_empty())
        .map(|(k, &solver)| {
            let slice = &results[k * seeds.len()..(k + 1) * seeds.len()];
            let mut costs: Vec<f64> = slice.iter().map(|r| r.0).collect();
            costs.sort_by(f64::total_cmp);
            let n = costs.len();
            let median = if n % 2 == 1 { costs[n / 2] } else { (costs[n / 2 - 1] + costs[n / 2]) / 2.0 };
            ComparisonRow {
                solver,
                best: costs[0],
                median,
                wall_time: slice.iter().map(|r| r.1).sum::<f64>() / n as f64,
                runs: n,
            }
        })
        .collect();
    let start = Instant::now();
    let nn = nearest_neighbor(t).total_time;
    rows.push(ComparisonRow { solver: Solver::Nn, best: nn, median: nn, wall_time: start.elapsed().as_secs_f64(), runs: 1 });
    rows.sort_by(|a, b| a.best.total_cmp(&b.best).then(a.solver.cmp(&b.solver)));
    rows
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Csv,
    Obj,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "obj" | "obj-polyline" => Ok(Self::Obj),
            other => Err(Error::InvalidConfig(format!("unknown export format `{other}`"))),
        }
    }
}

pub fn program_csv(report: &PlanReport) -> String {
    let mut out = String::from("index,kind,x,y,z,A,B,cumulative_time\n");
    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    for (i, s) in report.program.iter().enumerate() {
        out.push_str(&format!(
            "{i},{},{},{},{},{},{},{}\n",
            s.kind.as_str(),
            s.position.x,
            s.position.y,
            s.position.z,
            opt(s.a),
            opt(s.b),
            s.cumulative_time
        ));
    }
    out
}

/// Trajectory as OBJ vertices joined by a single polyline element.
pub fn program_obj(report: &PlanReport) -> String {
    let pts: Vec<&Point3> = report.program.iter().filter(|s| s.kind.is_translation()).map(|s| &s.position).collect();
    let mut out = String::from("o probe_trajectory\n");
    for p in &pts {
        out.push_str(&format!("v {} {} {}\n", p.x, p.y, p.z));
    }
    if pts.len() >= 2 {
        out.push('l');
        for k in 1..=pts.len() {
            out.push_str(&format!(" {k}"));
        }
        out.push('\n');
    }
    out
}

pub fn export_plan(report: &PlanReport, format: ExportFormat, path: &Path) -> Result<()> {
    let text = match format {
        ExportFormat::Json => serde_json::to_string_pretty(report).map_err(|e| Error::json(path, e))?,
        ExportFormat::Csv => program_csv(report),
        ExportFormat::Obj => program_obj(report),
    };
    scene::write_file(path, &text)
}
