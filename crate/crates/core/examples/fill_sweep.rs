//! Success rate of random feasible instances as the fill scale grows.
//!
//! `cargo run --release -p giep-core --example fill_sweep`

use giep::batch::{solve_batch, BatchSummary, Execution};
use giep::instance::random_instance;
use giep::solver::{Mode, SolveConfig};

fn main() {
    let instances: Vec<_> = (0..200u64)
        .map(|seed| {
            let n = 2 + (seed % 7) as usize;
            random_instance(n, (seed as usize / 7) % (n / 2 + 1), 0.4, seed, seed % 2 == 1).expect("valid sizes")
        })
        .collect();
    println!("fill_scale  solved  verified  numerical failures");
    for fill_scale in [0.1, 0.3, 1.0, 3.0, 10.0, 30.0] {
        let cfg = SolveConfig {
            fill_scale,
            ..SolveConfig::default()
        };
        let s = BatchSummary::of(&solve_batch(&instances, Mode::Generic, &cfg, Execution::Parallel));
        println!("{fill_scale:>10}  {:>6}  {:>8}  {:>18}", s.succeeded, s.verified, s.numerical);
    }
}
