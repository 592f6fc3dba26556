//! Benchmark a dataset directory and print per-family averages.
//!
//! Without an argument a tiny dataset is written to a temporary directory.
//!
//! ```text
//! cargo run --release --example benchmark_dataset -- path/to/datasets
//! ```

use std::path::PathBuf;

use bspa::bench::{family_averages, run_bench, write_csv};
use bspa::io::to_canonical;
use bspa::{Instance, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = match std::env::args().nth(1) {
        Some(p) => PathBuf::from(p),
        None => {
            let root = std::env::temp_dir().join("bspa-demo-dataset");
            std::fs::create_dir_all(root.join("C"))?;
            std::fs::create_dir_all(root.join("KR"))?;
            let c1 = Instance::from_items("c1", 20, [(10, 5), (10, 5), (20, 5), (5, 10), (15, 10)]);
            let k1 = Instance::from_items("k1", 15, [(7, 4), (8, 6), (5, 5), (10, 3), (6, 2), (9, 7)]);
            std::fs::write(root.join("C/c1.txt"), to_canonical(&c1))?;
            std::fs::write(root.join("KR/k1.txt"), to_canonical(&k1))?;
            root
        }
    };
    let cfg = SolverConfig::deterministic(0.1, 1_000, 2);
    let records = run_bench(&root, &cfg, None, None, |r| {
        println!("{} {}: {:?} {}", r.family, r.instance, r.used_length, r.error.as_deref().unwrap_or(""));
    })?;
    for a in family_averages(&records) {
        println!("{} {}: mean gap {:.3}% over {} instances", a.family, a.mode, a.mean_gap, a.instances);
    }
    let mut out = Vec::new();
    write_csv(&mut out, &records)?;
    print!("{}", String::from_utf8(out)?);
    Ok(())
}
