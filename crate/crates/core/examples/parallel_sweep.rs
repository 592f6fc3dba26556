//! Run the sweep over container lengths directly and show what each length found.

use bspa::beam::{beam_search, quick_fill, BeamConfig, Catalog, PackingState, QuickFillConfig};
use bspa::blocks::{complex_blocks, BlockGenConfig};
use bspa::solver::{run_parallel_sweep, SweepPlan};
use bspa::{Instance, Rect, Rotation, Solution, SolverConfig};
use std::ops::ControlFlow;

fn main() -> Result<(), bspa::SolveError> {
    let instance = Instance::from_items(
        "sweep",
        10,
        [(6, 4), (7, 3), (4, 5), (3, 3), (5, 2), (8, 2), (2, 7), (6, 6), (4, 4), (3, 5), (7, 2), (5, 5)],
    );
    let width = instance.strip_width;
    let min_len = instance.lower_bound_ceil() as u32;
    let container = Rect::new(0, 0, width, min_len);
    let blocks = complex_blocks(&instance.boxes, container, &BlockGenConfig::default());
    let init = PackingState::new(Catalog::new(instance.boxes.clone(), blocks), container);
    let phase_one = beam_search(&init, &BeamConfig::with_nodes(0.1, 500), |_| ControlFlow::Continue(()));
    let best = phase_one.best;
    println!(
        "container {width}x{min_len}: {} of {} boxes placed",
        instance.box_count() - best.remaining_boxes(),
        instance.box_count()
    );

    let top = quick_fill(&instance.boxes, best.remaining(), width, &QuickFillConfig::new(Rotation::Forbidden));
    let baseline = Solution::stacked(
        &best.box_placements(),
        &top.placements,
        best.used_length(),
        width,
        instance.total_area(),
    );
    println!("baseline length {}", baseline.used_length);

    let plan = SweepPlan::new(instance.lower_bound(), baseline.used_length);
    let cfg = SolverConfig::deterministic(0.1, 300, 4);
    println!("{} lengths in {} rounds of {}", plan.len(), plan.batches(cfg.p), cfg.p);
    let (solution, tasks) = run_parallel_sweep(&instance, &plan, &cfg, baseline)?;
    for t in &tasks {
        println!(
            "  length {:>2}: best {:?} after {} expansions ({:?})",
            t.length, t.best_length, t.search.expansions, t.search.stop
        );
    }
    println!("final length {} gap {}%", solution.used_length, solution.gap_percent());
    Ok(())
}
