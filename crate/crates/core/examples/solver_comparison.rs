//! SA, GA and ACO against the brute-force optimum on random 8-MP instances.
//!
//!     cargo run --release --example solver_comparison

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cmm_tour::pipeline::compare_solvers;
use cmm_tour::timing::TimeMatrix;
use cmm_tour::tsp::{brute_force, Solver, SolverParams};

fn main() {
    for instance in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(instance);
        let pts: Vec<(f64, f64)> = (0..9).map(|_| (rng.gen_range(0.0..300.0), rng.gen_range(0.0..300.0))).collect();
        let rows: Vec<Vec<f64>> = pts
            .iter()
            .map(|a| pts.iter().map(|b| ((a.0 - b.0).hypot(a.1 - b.1)) / 85.0).collect())
            .collect();
        let t = TimeMatrix::from_rows(&rows, 1e6).expect("valid matrix");

        let opt = brute_force(&t).expect("8 MPs").total_time;
        println!("instance {instance}: optimum {opt:.4} s");
        let rows = compare_solvers(&t, &SolverParams::default(), &[Solver::Sa, Solver::Ga, Solver::Aco], &[0, 1, 2, 3, 4]);
        for r in rows {
            println!(
                "  {:<4} best {:.4} ({:+.2}%)  median {:.4}  {:.1} ms/run",
                r.solver.name(),
                r.best,
                100.0 * (r.best - opt) / opt,
                r.median,
                1e3 * r.wall_time
            );
        }
    }
}
