//! Solve an instance file, or a small built-in instance when no path is given.
//!
//! ```text
//! cargo run --example solve_instance -- path/to/instance.txt
//! ```

use bspa::io::{parse_instance, Format};
use bspa::{solve, Instance, Rotation, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let instance = match std::env::args().nth(1) {
        Some(path) => parse_instance(&std::fs::read(&path)?, Format::Auto, &path)?,
        None => Instance::from_items(
            "demo",
            20,
            [(8, 5), (12, 5), (6, 9), (14, 4), (14, 5), (5, 7), (7, 7), (8, 7), (20, 3), (10, 6), (10, 6)],
        ),
    };
    println!(
        "{}: {} boxes, width {}, area bound {}",
        instance.name,
        instance.box_count(),
        instance.strip_width,
        instance.lower_bound()
    );
    for rotation in [Rotation::Forbidden, Rotation::Allowed] {
        let cfg = SolverConfig::deterministic(0.1, 2_000, 4).with_rotation(rotation);
        let report = solve(&instance, &cfg)?;
        println!("{rotation}: {report}");
    }
    Ok(())
}
