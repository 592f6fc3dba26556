//! Build simple and complex blocks for a few box types and print them.

use bspa::blocks::{complex_blocks, simple_blocks, BlockGenConfig};
use bspa::{Instance, Rect, Rotation};
use num_rational::Ratio;

fn main() {
    let instance = Instance::from_types("blocks", 10, [(3, 4, 3), (2, 3, 2), (5, 2, 2)]);
    let container = Rect::new(0, 0, 10, 8);

    let simple = simple_blocks(&instance.boxes, container, &BlockGenConfig::default());
    println!("{} simple blocks (OF):", simple.len());
    for b in &simple {
        println!("  {:>2} x {:<2} {:?}", b.width, b.length, b.composition());
    }

    for (label, cfg) in [
        ("exact fill, OF", BlockGenConfig::default()),
        ("exact fill, RF", BlockGenConfig::with_rotation(Rotation::Allowed)),
        (
            "fill >= 9/10, OF",
            BlockGenConfig {
                min_fill_rate: Ratio::new(9, 10),
                ..BlockGenConfig::default()
            },
        ),
    ] {
        let blocks = complex_blocks(&instance.boxes, container, &cfg);
        let joined = blocks.iter().filter(|b| !b.is_simple()).count();
        let largest = blocks.iter().max_by_key(|b| b.box_area).unwrap();
        println!(
            "{label}: {} blocks ({joined} joined), largest {}x{} holding {} boxes, fill {}",
            blocks.len(),
            largest.width,
            largest.length,
            largest.box_count(),
            largest.fill_rate()
        );
    }
}
