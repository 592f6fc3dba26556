//! Pack boxes into an open strip with the box-level beam used for leftovers.

use bspa::beam::{quick_fill, QuickFillConfig};
use bspa::{Instance, Rotation};

fn main() {
    let instance = Instance::from_types("leftovers", 12, [(5, 3, 4), (7, 2, 3), (3, 6, 2), (12, 1, 1)]);
    for rotation in [Rotation::Forbidden, Rotation::Allowed] {
        let fill = quick_fill(&instance.boxes, &instance.counts(), instance.strip_width, &QuickFillConfig::new(rotation));
        println!(
            "{rotation}: length {} (area bound {}), beam widths {:?}, {} expansions",
            fill.used_length,
            instance.lower_bound(),
            fill.widths,
            fill.expansions
        );
        for p in &fill.placements {
            println!("  box {} at {}{}", p.box_id, p.rect, if p.rotated { " rotated" } else { "" });
        }
    }
}
