use std::sync::Arc;

use crate::blocks::{BlockRef, BoxPlacement};
use crate::error::GeometryError;
use crate::geometry::{FreeSpace, Rect, SpaceList};
use crate::instance::BoxType;

/// Box types and the generated blocks a search draws from. Block ids are
/// positions in `blocks`.
#[derive(Debug)]
pub struct Catalog {
    pub boxes: Vec<BoxType>,
    pub blocks: Vec<BlockRef>,
}

impl Catalog {
    pub fn new(boxes: Vec<BoxType>, blocks: Vec<BlockRef>) -> Arc<Self> {
        Arc::new(Catalog { boxes, blocks })
    }

    pub fn block(&self, id: u32) -> &BlockRef {
        &self.blocks[id as usize]
    }
}

/// A partial layout of one fixed-size container.
#[derive(Debug, Clone)]
pub struct PackingState {
    catalog: Arc<Catalog>,
    spaces: SpaceList,
    available: Arc<[u32]>,
    remaining: Vec<u32>,
    remaining_boxes: u64,
    remaining_length: u64,
    placements: Vec<(u32, Rect)>,
    packed_area: u64,
    /// Packed area reached by the greedy roll-out from this state.
    pub score: u64,
}

impl PackingState {
    /// Empty container of the given size with the instance multiplicities available.
    pub fn new(catalog: Arc<Catalog>, container: Rect) -> Self {
        let spaces = SpaceList::new(container);
        let counts = catalog.boxes.iter().map(|b| b.count).collect();
        Self::with_spaces(catalog, spaces, counts)
    }

    /// A state over an explicit free-space list and box availability
    /// (indexed by box type id).
    pub fn with_spaces(catalog: Arc<Catalog>, spaces: SpaceList, mut remaining: Vec<u32>) -> Self {
        remaining.resize(catalog.boxes.len(), 0);
        let mut remaining_boxes = 0;
        let mut remaining_length = 0;
        for b in &catalog.boxes {
            let c = remaining.get(b.id as usize).copied().unwrap_or(0) as u64;
            remaining_boxes += c;
            remaining_length += c * b.length as u64;
        }
        PackingState {
            catalog,
            spaces,
            available: remaining.clone().into(),
            remaining,
            remaining_boxes,
            remaining_length,
            placements: Vec::new(),
            packed_area: 0,
            score: 0,
        }
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn spaces(&self) -> &SpaceList {
        &self.spaces
    }

    pub(crate) fn spaces_mut(&mut self) -> &mut SpaceList {
        &mut self.spaces
    }

    pub fn container(&self) -> Rect {
        self.spaces.container()
    }

    /// Available boxes per type id.
    pub fn remaining(&self) -> &[u32] {
        &self.remaining
    }

    pub fn remaining_boxes(&self) -> u64 {
        self.remaining_boxes
    }

    /// Summed length of all remaining boxes.
    pub fn remaining_length(&self) -> u64 {
        self.remaining_length
    }

    pub fn packed_area(&self) -> u64 {
        self.packed_area
    }

    /// Placed blocks as `(block id, rect)`.
    pub fn placements(&self) -> &[(u32, Rect)] {
        &self.placements
    }

    pub fn is_terminal(&self) -> bool {
        self.spaces.is_empty()
    }

    pub fn all_placed(&self) -> bool {
        self.remaining_boxes == 0
    }

    /// Highest edge reached by a placement.
    pub fn used_length(&self) -> u32 {
        self.placements.iter().map(|(_, r)| r.top()).max().unwrap_or(0)
    }

    /// Ids of blocks that can still be formed from the remaining boxes.
    pub fn feasible_blocks(&self) -> impl Iterator<Item = u32> + '_ {
        self.catalog
            .blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| b.is_feasible(&self.remaining))
            .map(|(i, _)| i as u32)
    }

    /// Feasible block ids that fit inside `space`.
    pub fn fitting_blocks(&self, space: &FreeSpace) -> impl Iterator<Item = u32> + '_ {
        let r = space.rect;
        self.catalog
            .blocks
            .iter()
            .enumerate()
            .filter(move |(_, b)| r.fits(b.width, b.length) && b.is_feasible(&self.remaining))
            .map(|(i, _)| i as u32)
    }

    /// Puts block `id` at `(x, y)` and updates spaces and box availability.
    pub fn place(&mut self, id: u32, x: u32, y: u32) -> Result<(), GeometryError> {
        let block = Arc::clone(self.catalog.block(id));
        let rect = Rect::new(x, y, block.width, block.length);
        self.spaces.place(rect)?;
        for &(t, c) in block.composition() {
            self.remaining[t as usize] -= c;
            self.remaining_boxes -= c as u64;
            self.remaining_length -= c as u64 * self.catalog.boxes[t as usize].length as u64;
        }
        self.packed_area += block.box_area;
        self.placements.push((id, rect));
        Ok(())
    }

    /// All boxes of the layout.
    pub fn box_placements(&self) -> Vec<BoxPlacement> {
        self.placements
            .iter()
            .flat_map(|&(id, r)| self.catalog.block(id).boxes_at(r.x, r.y))
            .collect()
    }

    /// Checks the state invariants, returning a description of the first violation.
    pub fn validate(&self) -> Result<(), String> {
        let container = self.container();
        let mut area = 0;
        let mut used = vec![0u32; self.remaining.len()];
        for (i, &(id, r)) in self.placements.iter().enumerate() {
            let block = self.catalog.block(id);
            if (r.w, r.h) != (block.width, block.length) {
                return Err(format!("placement {i} does not match block {id}"));
            }
            if !container.contains(&r) {
                return Err(format!("placement {i} {r} leaves container {container}"));
            }
            for &(_, other) in &self.placements[i + 1..] {
                if r.overlaps(&other) {
                    return Err(format!("placement {r} overlaps {other}"));
                }
            }
            for s in self.spaces.iter() {
                if s.rect.overlaps(&r) {
                    return Err(format!("space {} overlaps placement {r}", s.rect));
                }
            }
            area += block.box_area;
            for &(t, c) in block.composition() {
                used[t as usize] += c;
            }
        }
        if area != self.packed_area {
            return Err(format!("packed area {} != placed area {area}", self.packed_area));
        }
        for b in &self.catalog.boxes {
            let t = b.id as usize;
            let available = self.available.get(t).copied().unwrap_or(0);
            if used[t] + self.remaining[t] != available {
                return Err(format!(
                    "box type {t}: used {} + remaining {} != available {available}",
                    used[t], self.remaining[t]
                ));
            }
        }
        Ok(())
    }
}
