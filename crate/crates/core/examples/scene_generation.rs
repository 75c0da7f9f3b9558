//! Samples the bundled panel-and-wall scene plus a curved panel and writes
//! the node and MP files.
//!
//!     cargo run --example scene_generation -- [out_dir]

use cmm_tour::scene::{generate_scene, write_scene, CylindricalPatch, Primitive, SceneFiles, SceneSpec};
use cmm_tour::Point3;

fn main() -> cmm_tour::Result<()> {
    let mut spec: SceneSpec = serde_json::from_str(include_str!("scenes/panel_wall.json")).expect("bundled scene parses");
    spec.primitives.push(Primitive::CurvedPanel(CylindricalPatch {
        name: "arch".into(),
        axis_origin: Point3::new(-60.0, 120.0, 0.0),
        axis_dir: Point3::new(1.0, 0.0, 0.0),
        ref_dir: Point3::new(0.0, 1.0, 0.0),
        radius: 30.0,
        start_deg: 0.0,
        end_deg: 90.0,
        length: 120.0,
        spacing: None,
        mp_count: 4,
        inward: false,
    }));

    let (cloud, mps) = generate_scene(&spec, 7)?;
    println!("{} nodes, {} measurement points", cloud.len(), mps.len());
    for mp in &mps {
        let n = mp.normal;
        println!(
            "  {:<8} ({:7.2}, {:7.2}, {:7.2})  n = ({:5.2}, {:5.2}, {:5.2})",
            mp.id, mp.position.x, mp.position.y, mp.position.z, n.i, n.j, n.k
        );
    }

    if let Some(dir) = std::env::args().nth(1) {
        let dir = std::path::PathBuf::from(dir);
        let files = SceneFiles { nodes: dir.join("nodes.csv"), mps: dir.join("mps.csv") };
        write_scene(&cloud, &mps, &files)?;
        println!("wrote {} and {}", files.nodes.display(), files.mps.display());
    }
    Ok(())
}
