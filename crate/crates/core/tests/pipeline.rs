use cmm_tour::pipeline::{run_plan, StepKind};
use cmm_tour::scene::{closed_box, generate_scene, PlanarPatch, Primitive, SceneSpec};
use cmm_tour::timing::build_time_matrix;
use cmm_tour::tsp::{brute_force, nearest_neighbor, Solver, SolverParams};
use cmm_tour::{MeasurementPoint, PlanConfig, Point3, UnitVec3};

fn panel(mps: usize) -> Primitive {
    Primitive::FlatPanel(
        PlanarPatch::new("panel", Point3::new(-100., -100., 0.), Point3::new(1., 0., 0.), Point3::new(0., 1., 0.), 200., 200.)
            .mps(mps),
    )
}

#[test]
fn six_mps_on_clear_panel_hit_the_optimum() {
    let (cloud, mps) = generate_scene(&SceneSpec::new(4.0).with(panel(6)), 21).unwrap();
    let cfg = PlanConfig::default();
    let t = build_time_matrix(&mps, &cloud, &cfg);
    let opt = brute_force(&t).unwrap();
    for solver in [Solver::Sa, Solver::Ga, Solver::Aco] {
        let r = run_plan(&cloud, &mps, &cfg, solver, &SolverParams::default(), None).unwrap();
        assert!((r.totals.total - opt.total_time).abs() < 1e-9, "{solver:?}");
        assert_eq!(r.counts.smps, 0);
        assert_eq!(r.counts.rotations, 0);
    }
}

#[test]
fn enclosed_mp_is_reported_inaccessible() {
    let mut spec = SceneSpec::new(4.0).with(panel(8));
    spec.primitives.extend(closed_box("cage", Point3::new(40., 40., 10.), Point3::new(80., 80., 50.), 2.0));
    spec.mps.push(MeasurementPoint::new("caged", Point3::new(60., 60., 10.), UnitVec3::Z));
    let (cloud, mps) = generate_scene(&spec, 2).unwrap();
    let cfg = PlanConfig::default();
    let r = run_plan(&cloud, &mps, &cfg, Solver::Sa, &SolverParams::default(), None).unwrap();
    assert!(r.counts.inaccessible.contains(&"caged".to_owned()));
    assert!(!r.visit_ids.contains(&"caged".to_owned()));
    assert!(!r.tour.tainted);
    assert_eq!(r.tour.order.len() + r.counts.inaccessible.len(), mps.len());
}

#[test]
fn report_statistics_recount_from_program() {
    let spec: SceneSpec = serde_json::from_str(include_str!("../examples/scenes/panel_wall.json")).unwrap();
    let (cloud, mps) = generate_scene(&spec, 0).unwrap();
    let cfg = PlanConfig { seed: 11, ..PlanConfig::default() };
    let r = run_plan(&cloud, &mps, &cfg, Solver::Sa, &SolverParams::default(), None).unwrap();
    let p = &r.program;
    assert_eq!(r.counts.smps, p.iter().filter(|s| s.kind == StepKind::Smp).count());
    assert_eq!(r.counts.rotations, p.iter().filter(|s| s.kind == StepKind::Rotate).count());
    assert_eq!(r.counts.segments + 1, p.iter().filter(|s| s.kind != StepKind::Rotate).count());
    assert!((r.totals.transition + r.totals.rotation - r.totals.total).abs() < 1e-6);
    assert_eq!(p.first().unwrap().kind, StepKind::Origin);
    assert_eq!(p.last().unwrap().kind, StepKind::Origin);
    assert_eq!(p.last().unwrap().cumulative_time, r.totals.total);
    assert!(p.windows(2).all(|w| w[1].cumulative_time >= w[0].cumulative_time));
    assert!(r.counts.smps > 0);
    assert!(r.totals.total <= r.nn_total);
    for s in p.iter().filter(|s| s.kind == StepKind::Rotate) {
        assert!(s.a.is_some() && s.b.is_some());
    }

    // every MP dip sits between two identical approach points
    for w in p.windows(3).filter(|w| w[1].kind == StepKind::Mp) {
        assert_eq!(w[0].kind, StepKind::Ap);
        assert_eq!(w[2].kind, StepKind::Ap);
        assert_eq!(w[0].position, w[2].position);
    }
}

#[test]
fn nn_baseline_matches_reduced_matrix() {
    let (cloud, mps) = generate_scene(&SceneSpec::new(4.0).with(panel(9)), 8).unwrap();
    let cfg = PlanConfig::default();
    let r = run_plan(&cloud, &mps, &cfg, Solver::Nn, &SolverParams::default(), None).unwrap();
    let t = build_time_matrix(&mps, &cloud, &cfg);
    assert_eq!(r.nn_total, nearest_neighbor(&t).total_time);
    assert_eq!(r.totals.total, r.nn_total);
}
