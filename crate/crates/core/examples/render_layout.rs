//! Solve a small instance and write its layout as `layout.svg`.

use bspa::render::{render_svg, RenderSpec};
use bspa::{solve, Instance, Rotation, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let instance = Instance::from_items("render", 12, [(4, 5), (8, 5), (6, 3), (6, 3), (3, 7), (9, 4), (5, 2), (7, 2)]);
    let report = solve(&instance, &SolverConfig::deterministic(0.1, 500, 1))?;
    let spec = RenderSpec {
        scale: 20,
        labels: true,
        ..Default::default()
    };
    let svg = render_svg(&instance, &report.solution, Rotation::Forbidden, &spec)?;
    let path = std::env::args().nth(1).unwrap_or_else(|| "layout.svg".into());
    std::fs::write(&path, svg)?;
    println!("length {}, wrote {path}", report.solution.used_length);
    Ok(())
}
