//! Beam packing of individual boxes into an open-ended strip.
//!
//! Each step takes the lowest (then leftmost) free space and branches on the
//! longest remaining boxes that fit it. Restarts widen the beam exactly like
//! the block search and stop once the width exceeds the number of boxes.

use crate::blocks::BoxPlacement;
use crate::geometry::{select_space_low_left, FreeSpace, Rect, SpaceList};
use crate::instance::{BoxType, Rotation};

use super::next_width;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuickFillConfig {
    pub rotation: Rotation,
    /// Stop widening once this many expansions have been spent. The search
    /// normally ends on its width rule long before.
    pub max_expansions: Option<u64>,
}

impl QuickFillConfig {
    pub fn new(rotation: Rotation) -> Self {
        QuickFillConfig {
            rotation,
            max_expansions: Some(20_000),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuickFill {
    pub placements: Vec<BoxPlacement>,
    pub used_length: u32,
    /// Beam width of each restart that ran.
    pub widths: Vec<usize>,
    pub expansions: u64,
}

#[derive(Debug, Clone)]
struct BoxState {
    spaces: SpaceList,
    remaining: Vec<u32>,
    left: u64,
    placements: Vec<BoxPlacement>,
    used: u32,
    score: u32,
}

impl BoxState {
    fn place(&mut self, box_id: u32, rotated: bool, rect: Rect) {
        self.spaces
            .place(rect)
            .expect("a fitting box placed in a free space stays inside the strip");
        self.remaining[box_id as usize] -= 1;
        self.left -= 1;
        self.used = self.used.max(rect.top());
        self.placements.push(BoxPlacement {
            box_id,
            rotated,
            rect,
        });
    }
}

struct Filler<'a> {
    boxes: &'a [BoxType],
    rotation: Rotation,
}

impl Filler<'_> {
    /// Orientation of `b` in `space`: longer side along the strip when
    /// rotation is allowed and that fits, otherwise whatever fits.
    fn orient(&self, b: &BoxType, space: &Rect) -> Option<(bool, u32, u32)> {
        let upright = (false, b.width, b.length);
        let turned = (true, b.length, b.width);
        let options: &[(bool, u32, u32)] = if !self.rotation.allowed() {
            &[upright]
        } else if b.length >= b.width {
            &[upright, turned]
        } else {
            &[turned, upright]
        };
        options.iter().copied().find(|&(_, w, h)| space.fits(w, h))
    }

    fn key_length(&self, b: &BoxType) -> u32 {
        if self.rotation.allowed() {
            b.width.max(b.length)
        } else {
            b.length
        }
    }

    /// Up to `w` longest remaining boxes fitting `space`, with orientation.
    /// Also reports whether more would have fitted.
    fn candidates(&self, state: &BoxState, space: &FreeSpace, w: usize) -> (Vec<(u32, bool, u32, u32)>, bool) {
        let mut all: Vec<(u32, u32, u32, bool, u32)> = self
            .boxes
            .iter()
            .filter(|b| state.remaining[b.id as usize] > 0)
            .filter_map(|b| {
                self.orient(b, &space.rect)
                    .map(|(rot, bw, bl)| (self.key_length(b), bw, b.id, rot, bl))
            })
            .collect();
        all.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));
        let truncated = all.len() > w;
        all.truncate(w);
        (
            all.into_iter().map(|(_, bw, id, rot, bl)| (id, rot, bw, bl)).collect(),
            truncated,
        )
    }

    fn expand(&self, state: &BoxState, w: usize) -> (Vec<BoxState>, bool) {
        let mut base = state.clone();
        loop {
            let Some(space) = select_space_low_left(&base.spaces) else {
                return (Vec::new(), false);
            };
            let (cands, truncated) = self.candidates(&base, &space, w);
            if cands.is_empty() {
                base.spaces.remove(&space);
                continue;
            }
            let children = cands
                .into_iter()
                .map(|(id, rot, bw, bl)| {
                    let mut child = base.clone();
                    child.place(id, rot, Rect::new(space.rect.x, space.rect.y, bw, bl));
                    child
                })
                .collect();
            return (children, truncated);
        }
    }

    fn rollout(&self, state: &BoxState) -> BoxState {
        let mut s = state.clone();
        while s.left > 0 {
            let Some(space) = select_space_low_left(&s.spaces) else {
                break;
            };
            let (cands, _) = self.candidates(&s, &space, 1);
            match cands.first() {
                Some(&(id, rot, bw, bl)) => s.place(id, rot, Rect::new(space.rect.x, space.rect.y, bw, bl)),
                None => {
                    s.spaces.remove(&space);
                }
            }
        }
        s.score = s.used;
        s
    }
}

/// Packs `remaining` boxes (counts indexed by type id) into a strip of width
/// `strip_width` and unbounded length, minimising the used length.
///
/// Every box must fit the strip width in some allowed orientation.
pub fn quick_fill(boxes: &[BoxType], remaining: &[u32], strip_width: u32, cfg: &QuickFillConfig) -> QuickFill {
    let mut counts = vec![0u32; boxes.len()];
    for b in boxes {
        counts[b.id as usize] = remaining.get(b.id as usize).copied().unwrap_or(0);
    }
    let total: u64 = counts.iter().map(|&c| c as u64).sum();
    if total == 0 {
        return QuickFill {
            placements: Vec::new(),
            used_length: 0,
            widths: Vec::new(),
            expansions: 0,
        };
    }
    // One box per row always fits, so this height never binds.
    let height: u64 = boxes
        .iter()
        .map(|b| counts[b.id as usize] as u64 * b.width.max(b.length) as u64)
        .sum();
    let height = u32::try_from(height).unwrap_or(u32::MAX);
    let init = BoxState {
        spaces: SpaceList::new(Rect::new(0, 0, strip_width, height)),
        remaining: counts,
        left: total,
        placements: Vec::new(),
        used: 0,
        score: 0,
    };
    let filler = Filler {
        boxes,
        rotation: cfg.rotation,
    };

    let mut best = filler.rollout(&init);
    let mut widths = Vec::new();
    let mut expansions = 0u64;
    let over_budget = |n: u64| cfg.max_expansions.is_some_and(|m| n >= m);
    let mut w = 1usize;

    'restarts: while (w as u64) <= total && !over_budget(expansions) {
        widths.push(w);
        let mut level = vec![init.clone()];
        let mut is_root = true;
        let mut exhaustive = true;
        while !level.is_empty() {
            if over_budget(expansions) {
                break 'restarts;
            }
            let mut successors = Vec::new();
            for state in &level {
                let width = if is_root { w * w } else { w };
                let (children, truncated) = filler.expand(state, width);
                expansions += 1;
                exhaustive &= !truncated;
                successors.extend(children);
            }
            for succ in successors.iter_mut() {
                let terminal = filler.rollout(succ);
                succ.score = terminal.score;
                if terminal.left == 0 && (best.left > 0 || terminal.used < best.used) {
                    best = terminal;
                }
            }
            successors.sort_by_key(|s| s.score);
            if successors.len() > w {
                exhaustive = false;
                successors.truncate(w);
            }
            level = successors;
            is_root = false;
        }
        if exhaustive {
            break;
        }
        w = next_width(w);
    }

    QuickFill {
        used_length: best.used,
        placements: best.placements,
        widths,
        expansions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn types(list: &[(u32, u32, u32)]) -> Vec<BoxType> {
        list.iter()
            .enumerate()
            .map(|(i, &(width, length, count))| BoxType {
                id: i as u32,
                width,
                length,
                count,
            })
            .collect()
    }

    #[test]
    fn single_box() {
        let boxes = types(&[(3, 5, 1)]);
        let q = quick_fill(&boxes, &[1], 10, &QuickFillConfig::new(Rotation::Forbidden));
        assert_eq!(q.used_length, 5);
        assert_eq!(q.placements.len(), 1);
        assert_eq!(q.placements[0].rect, Rect::new(0, 0, 3, 5));
    }

    #[test]
    fn longest_first_side_by_side() {
        let boxes = types(&[(2, 6, 1), (2, 4, 1)]);
        let q = quick_fill(&boxes, &[1, 1], 4, &QuickFillConfig::new(Rotation::Forbidden));
        assert_eq!(q.used_length, 6);
        assert_eq!(q.placements[0].rect, Rect::new(0, 0, 2, 6));
    }

    #[test]
    fn restart_widths_stop_past_the_box_count() {
        // Three boxes that never tile perfectly, so no restart is exhaustive early.
        let boxes = types(&[(3, 7, 1), (4, 5, 1), (5, 3, 1)]);
        let q = quick_fill(&boxes, &[1, 1, 1], 9, &QuickFillConfig::new(Rotation::Forbidden));
        assert_eq!(q.widths, vec![1, 2, 3]);
    }

    #[test]
    fn rotation_lets_wide_boxes_in() {
        let boxes = types(&[(8, 2, 2)]);
        let q = quick_fill(&boxes, &[2], 4, &QuickFillConfig::new(Rotation::Allowed));
        assert_eq!(q.used_length, 8);
        assert!(q.placements.iter().all(|p| p.rotated));
    }

    #[test]
    fn all_boxes_are_placed() {
        let boxes = types(&[(3, 7, 2), (4, 5, 3), (5, 3, 1), (1, 1, 4)]);
        let q = quick_fill(&boxes, &[2, 3, 1, 4], 9, &QuickFillConfig::new(Rotation::Allowed));
        assert_eq!(q.placements.len(), 10);
        for (i, a) in q.placements.iter().enumerate() {
            assert!(a.rect.right() <= 9);
            assert!(a.rect.top() <= q.used_length);
            for b in &q.placements[i + 1..] {
                assert!(!a.rect.overlaps(&b.rect));
            }
        }
    }

    #[test]
    fn nothing_to_place() {
        let boxes = types(&[(3, 7, 2)]);
        let q = quick_fill(&boxes, &[0], 9, &QuickFillConfig::new(Rotation::Allowed));
        assert_eq!(q.used_length, 0);
        assert!(q.widths.is_empty());
    }
}
