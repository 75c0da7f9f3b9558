//! Builds the inspection time matrix for the bundled scene and prints a
//! summary; pass a path to write it as CSV.
//!
//!     cargo run --release --example time_matrix -- [matrix.csv]

use std::time::Instant;

use cmm_tour::scene::{generate_scene, SceneSpec};
use cmm_tour::timing::build_time_matrix;
use cmm_tour::PlanConfig;

fn main() -> cmm_tour::Result<()> {
    let spec: SceneSpec = serde_json::from_str(include_str!("scenes/panel_wall.json")).expect("bundled scene parses");
    let cfg = PlanConfig::default();
    let (cloud, mps) = generate_scene(&spec, cfg.seed)?;
    let cloud = cloud.reindexed(cfg.cell_size());

    let start = Instant::now();
    let t = build_time_matrix(&mps, &cloud, &cfg);
    println!("{}x{} matrix in {:.2} s", t.order(), t.order(), start.elapsed().as_secs_f64());

    let n = t.order();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |q| (i, q))).collect();
    let inf = pairs.iter().filter(|&&(i, q)| t.is_inf(i, q)).count();
    let smp_legs = pairs.iter().filter_map(|&(i, q)| t.leg(i, q)).filter(|l| l.path.smp_count > 0).count();
    let rotating = pairs.iter().filter_map(|&(i, q)| t.leg(i, q)).filter(|l| l.rotation > 0.0).count();
    let inverted = pairs.iter().filter_map(|&(i, q)| t.leg(i, q)).filter(|l| l.inverted).count();
    println!("{} pairs: {inf} infeasible, {smp_legs} need SMPs, {rotating} need a rotation, {inverted} use the reverse plan", pairs.len());
    println!("symmetric: {}", t.is_symmetric());

    if let Some(path) = std::env::args().nth(1) {
        cmm_tour::scene::write_file(path.as_ref(), &t.to_csv())?;
        println!("wrote {path}");
    }
    Ok(())
}
