//! Block generation.
//!
//! A block is a rectangle assembled from boxes and placed as one unit.
//! Simple blocks are `nx` x `ny` grids of a single box type; complex blocks
//! are built generation by generation by joining the previous generation
//! with every known block along the width or the length axis.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_rational::Ratio;

use crate::geometry::Rect;
pub use crate::instance::BoxType;
use crate::instance::Rotation;

pub type BlockRef = Arc<Block>;

/// Per-type box usage, sorted by type id. Counts are always positive.
pub type Composition = Vec<(u32, u32)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Side by side along the strip width.
    Width,
    /// Stacked along the strip length.
    Length,
}

#[derive(Debug, Clone)]
enum Shape {
    Grid {
        box_type: u32,
        rotated: bool,
        box_w: u32,
        box_l: u32,
        across: u32,
        along: u32,
    },
    Join {
        axis: Axis,
        first: BlockRef,
        second: BlockRef,
    },
}

#[derive(Debug, Clone)]
pub struct Block {
    pub width: u32,
    pub length: u32,
    pub box_area: u64,
    composition: Composition,
    shape: Shape,
}

/// One box inside a block (or inside a full layout).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxPlacement {
    pub box_id: u32,
    pub rotated: bool,
    pub rect: Rect,
}

impl Block {
    fn grid(b: &BoxType, rotated: bool, across: u32, along: u32) -> Block {
        let (box_w, box_l) = if rotated {
            (b.length, b.width)
        } else {
            (b.width, b.length)
        };
        let n = across * along;
        Block {
            width: box_w * across,
            length: box_l * along,
            box_area: b.area() * n as u64,
            composition: vec![(b.id, n)],
            shape: Shape::Grid {
                box_type: b.id,
                rotated,
                box_w,
                box_l,
                across,
                along,
            },
        }
    }

    fn join(first: &BlockRef, second: &BlockRef, axis: Axis) -> Block {
        let (width, length) = match axis {
            Axis::Width => (first.width + second.width, first.length.max(second.length)),
            Axis::Length => (first.width.max(second.width), first.length + second.length),
        };
        Block {
            width,
            length,
            box_area: first.box_area + second.box_area,
            composition: merge(&first.composition, &second.composition),
            shape: Shape::Join {
                axis,
                first: Arc::clone(first),
                second: Arc::clone(second),
            },
        }
    }

    pub fn area(&self) -> u64 {
        self.width as u64 * self.length as u64
    }

    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn box_count(&self) -> u64 {
        self.composition.iter().map(|&(_, c)| c as u64).sum()
    }

    /// `box_area / (width * length)`.
    pub fn fill_rate(&self) -> Ratio<u64> {
        Ratio::new(self.box_area, self.area())
    }

    pub fn is_simple(&self) -> bool {
        matches!(self.shape, Shape::Grid { .. })
    }

    /// Whether the block can still be formed from `remaining` (indexed by type id).
    pub fn is_feasible(&self, remaining: &[u32]) -> bool {
        self.composition
            .iter()
            .all(|&(t, c)| remaining.get(t as usize).is_some_and(|&r| c <= r))
    }

    /// Whether the block uses a box turned by 90 degrees.
    pub fn uses_rotation(&self) -> bool {
        match &self.shape {
            Shape::Grid { rotated, .. } => *rotated,
            Shape::Join { first, second, .. } => first.uses_rotation() || second.uses_rotation(),
        }
    }

    /// Every box of the block, positioned with the block's lower-left corner at `(x, y)`.
    pub fn boxes_at(&self, x: u32, y: u32) -> Vec<BoxPlacement> {
        let mut out = Vec::with_capacity(self.box_count() as usize);
        self.collect_boxes(x, y, &mut out);
        out
    }

    fn collect_boxes(&self, x: u32, y: u32, out: &mut Vec<BoxPlacement>) {
        match &self.shape {
            Shape::Grid {
                box_type,
                rotated,
                box_w,
                box_l,
                across,
                along,
            } => {
                for j in 0..*along {
                    for i in 0..*across {
                        out.push(BoxPlacement {
                            box_id: *box_type,
                            rotated: *rotated,
                            rect: Rect::new(x + i * box_w, y + j * box_l, *box_w, *box_l),
                        });
                    }
                }
            }
            Shape::Join { axis, first, second } => {
                first.collect_boxes(x, y, out);
                match axis {
                    Axis::Width => second.collect_boxes(x + first.width, y, out),
                    Axis::Length => second.collect_boxes(x, y + first.length, out),
                }
            }
        }
    }

    fn key(&self) -> BlockKey {
        (self.width, self.length, self.composition.clone())
    }
}

type BlockKey = (u32, u32, Composition);

fn merge(a: &Composition, b: &Composition) -> Composition {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Combined usage of two blocks stays within the instance multiplicities.
fn combined_within(a: &Composition, b: &Composition, counts: &[u32]) -> bool {
    let mut j = 0;
    for &(t, c) in a {
        while j < b.len() && b[j].0 < t {
            j += 1;
        }
        let extra = if j < b.len() && b[j].0 == t { b[j].1 } else { 0 };
        if c + extra > counts[t as usize] {
            return false;
        }
    }
    // Types only present in `b` are within limits since `b` itself is.
    true
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockGenConfig {
    pub max_num: usize,
    pub min_fill_rate: Ratio<u64>,
    pub rotation: Rotation,
}

impl Default for BlockGenConfig {
    fn default() -> Self {
        BlockGenConfig {
            max_num: 10_000,
            min_fill_rate: Ratio::from_integer(1),
            rotation: Rotation::Forbidden,
        }
    }
}

impl BlockGenConfig {
    pub fn with_rotation(rotation: Rotation) -> Self {
        BlockGenConfig {
            rotation,
            ..Default::default()
        }
    }

    fn fill_ok(&self, block: &Block) -> bool {
        // box_area / area >= num / den
        block.box_area as u128 * *self.min_fill_rate.denom() as u128
            >= *self.min_fill_rate.numer() as u128 * block.area() as u128
    }

    fn exact_fill(&self) -> bool {
        self.min_fill_rate >= Ratio::from_integer(1)
    }
}

fn push_unique(list: &mut Vec<BlockRef>, seen: &mut HashSet<BlockKey>, block: Block) {
    if seen.insert(block.key()) {
        list.push(Arc::new(block));
    }
}

/// Grid blocks of a single box type that fit `container`.
///
/// For a type with multiplicity `m` this emits every `x` across and `y` along
/// with `x * y <= m`. Under [`Rotation::Allowed`] the rotated variants follow
/// after all unrotated blocks. Duplicates (same size and composition) keep
/// their first occurrence; the list is cut to `max_num`.
pub fn simple_blocks(boxes: &[BoxType], container: Rect, cfg: &BlockGenConfig) -> Vec<BlockRef> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let passes: &[bool] = if cfg.rotation.allowed() {
        &[false, true]
    } else {
        &[false]
    };
    for &rotated in passes {
        for b in boxes {
            let (bw, bl) = if rotated {
                (b.length, b.width)
            } else {
                (b.width, b.length)
            };
            for x in 1..=b.count {
                if bw as u64 * x as u64 > container.w as u64 {
                    break;
                }
                for y in 1..=b.count / x {
                    if bl as u64 * y as u64 > container.h as u64 {
                        break;
                    }
                    push_unique(&mut out, &mut seen, Block::grid(b, rotated, x, y));
                }
            }
        }
    }
    out.truncate(cfg.max_num);
    out
}

/// Full block list: simple blocks plus generations of pairwise joins.
///
/// A join is kept when it fits `container`, stays within the multiplicities
/// of `boxes`, reaches `min_fill_rate`, and the list has room. Joining two
/// blocks of unequal cross extent yields their bounding block, so with a
/// fill rate of one only exactly matching edges survive. Within a
/// generation, larger box area is admitted first.
pub fn complex_blocks(boxes: &[BoxType], container: Rect, cfg: &BlockGenConfig) -> Vec<BlockRef> {
    let mut list = simple_blocks(boxes, container, cfg);
    let mut counts = vec![0u32; boxes.iter().map(|b| b.id as usize + 1).max().unwrap_or(0)];
    for b in boxes {
        counts[b.id as usize] = b.count;
    }
    let mut seen: HashSet<BlockKey> = list.iter().map(|b| b.key()).collect();
    let mut previous: Vec<usize> = (0..list.len()).collect();
    let exact = cfg.exact_fill();

    while list.len() < cfg.max_num {
        let generation_len = list.len();
        // Partner lookup for exact fill: a width join needs equal lengths,
        // a length join equal widths.
        let (by_length, by_width) = if exact {
            let mut by_length: HashMap<u32, Vec<usize>> = HashMap::new();
            let mut by_width: HashMap<u32, Vec<usize>> = HashMap::new();
            for (i, b) in list.iter().enumerate() {
                by_length.entry(b.length).or_default().push(i);
                by_width.entry(b.width).or_default().push(i);
            }
            (by_length, by_width)
        } else {
            (HashMap::new(), HashMap::new())
        };

        let mut fresh: Vec<Block> = Vec::new();
        let mut fresh_seen: HashSet<BlockKey> = HashSet::new();
        let mut partners: Vec<usize> = Vec::new();
        for &i in &previous {
            let first = &list[i];
            partners.clear();
            if exact {
                let empty = Vec::new();
                let a = by_length.get(&first.length).unwrap_or(&empty);
                let b = by_width.get(&first.width).unwrap_or(&empty);
                merge_sorted(a, b, &mut partners);
            } else {
                partners.extend(0..generation_len);
            }
            for &j in &partners {
                let second = &list[j];
                if !combined_within(&first.composition, &second.composition, &counts) {
                    continue;
                }
                for axis in [Axis::Width, Axis::Length] {
                    let (w, l) = match axis {
                        Axis::Width => (first.width + second.width, first.length.max(second.length)),
                        Axis::Length => (first.width.max(second.width), first.length + second.length),
                    };
                    if w > container.w || l > container.h {
                        continue;
                    }
                    let joined = Block::join(first, second, axis);
                    if !cfg.fill_ok(&joined) {
                        continue;
                    }
                    let key = joined.key();
                    if seen.contains(&key) || !fresh_seen.insert(key) {
                        continue;
                    }
                    fresh.push(joined);
                }
            }
        }

        if fresh.is_empty() {
            break;
        }
        fresh.sort_by_key(|b| std::cmp::Reverse(b.box_area));
        previous.clear();
        for block in fresh {
            if list.len() >= cfg.max_num {
                break;
            }
            seen.insert(block.key());
            previous.push(list.len());
            list.push(Arc::new(block));
        }
    }
    list
}

fn merge_sorted(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
}

/// Blocks that can still be formed from `remaining`.
pub fn feasible_blocks(blocks: &[BlockRef], remaining: &[u32]) -> Vec<BlockRef> {
    blocks
        .iter()
        .filter(|b| b.is_feasible(remaining))
        .cloned()
        .collect()
}
