//! Maximal free rectangles of a container as boxes are placed.

use bspa::geometry::{select_space, select_space_low_left, SpaceList};
use bspa::Rect;

fn show(spaces: &SpaceList) {
    let list: Vec<String> = spaces.iter().map(|s| s.rect.to_string()).collect();
    println!("  spaces: {}", list.join(" "));
}

fn main() {
    let mut spaces = SpaceList::new(Rect::new(0, 0, 10, 8));
    show(&spaces);
    for placed in [Rect::new(0, 0, 4, 3), Rect::new(4, 0, 3, 5), Rect::new(0, 3, 2, 4)] {
        spaces.place(placed).expect("placement inside the container");
        println!("placed {placed}");
        show(&spaces);
    }
    println!("nearest the origin: {}", select_space(&spaces).unwrap().rect);
    println!("lowest, then leftmost: {}", select_space_low_left(&spaces).unwrap().rect);
}
