//! Plans the bundled panel-and-wall scene end to end and exports the report,
//! the program CSV and the trajectory OBJ.
//!
//!     cargo run --release --example full_plan -- [out_dir]

use std::path::PathBuf;

use cmm_tour::pipeline::{export_plan, run_plan_from, ExportFormat, SceneSource};
use cmm_tour::scene::SceneSpec;
use cmm_tour::tsp::{Solver, SolverParams};
use cmm_tour::PlanConfig;

fn main() -> cmm_tour::Result<()> {
    let spec: SceneSpec = serde_json::from_str(include_str!("scenes/panel_wall.json")).expect("bundled scene parses");
    let cfg = PlanConfig::default();
    let report = run_plan_from(&SceneSource::Spec { spec, seed: 0 }, &cfg, Solver::Sa, &SolverParams::default(), Some(&[0, 1, 2]))?;

    println!("visit order: {}", report.visit_ids.join(" → "));
    println!(
        "total {:.3} s = {:.3} s translation + {:.3} s rotation (nearest neighbour: {:.3} s)",
        report.totals.total, report.totals.transition, report.totals.rotation, report.nn_total
    );
    println!(
        "{} SMPs, {} rotations, {} translation segments",
        report.counts.smps, report.counts.rotations, report.counts.segments
    );
    if !report.counts.inaccessible.is_empty() {
        println!("inaccessible: {}", report.counts.inaccessible.join(", "));
    }
    for row in report.comparison.iter().flatten() {
        println!("  {:<4} best {:.3}  median {:.3}", row.solver.name(), row.best, row.median);
    }

    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    for (format, name) in [(ExportFormat::Json, "plan.json"), (ExportFormat::Csv, "program.csv"), (ExportFormat::Obj, "trajectory.obj")] {
        export_plan(&report, format, &dir.join(name))?;
    }
    println!("exports written to {}", dir.display());
    Ok(())
}
