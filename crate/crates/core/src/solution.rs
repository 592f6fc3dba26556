//! Complete strip layouts, their validation and the placement file format.
//!
//! Placement file (ASCII, LF line endings):
//!
//! ```text
//! W usedLength
//! boxId x y w h
//! ...
//! ```

use std::fmt::Write as _;

use num_rational::Ratio;

use crate::blocks::BoxPlacement;
use crate::error::{ParseError, ValidationError};
use crate::geometry::Rect;
use crate::instance::{Instance, Rotation};

/// `(L_f / (S / W) - 1) * 100`, evaluated exactly.
pub fn compute_gap(used_length: u64, total_area: u64, strip_width: u64) -> Ratio<i128> {
    let used_area = used_length as i128 * strip_width as i128;
    Ratio::new(100 * (used_area - total_area as i128), total_area as i128)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub strip_width: u32,
    pub used_length: u32,
    pub placements: Vec<BoxPlacement>,
    total_area: u64,
}

impl Solution {
    /// Builds a solution; the used length is the highest placed edge.
    pub fn new(strip_width: u32, total_area: u64, mut placements: Vec<BoxPlacement>) -> Self {
        placements.sort_by_key(|p| (p.rect.y, p.rect.x, p.box_id));
        let used_length = placements.iter().map(|p| p.rect.top()).max().unwrap_or(0);
        Solution {
            strip_width,
            used_length,
            placements,
            total_area,
        }
    }

    /// Places `top` above `bottom`, shifting it up by `offset`.
    pub fn stacked(bottom: &[BoxPlacement], top: &[BoxPlacement], offset: u32, strip_width: u32, total_area: u64) -> Self {
        let mut all = bottom.to_vec();
        all.extend(top.iter().map(|p| BoxPlacement {
            rect: Rect::new(p.rect.x, p.rect.y + offset, p.rect.w, p.rect.h),
            ..*p
        }));
        Solution::new(strip_width, total_area, all)
    }

    pub fn total_area(&self) -> u64 {
        self.total_area
    }

    pub fn gap_percent(&self) -> Ratio<i128> {
        compute_gap(self.used_length as u64, self.total_area, self.strip_width as u64)
    }

    /// Checks coverage, orientation, bounds and overlap against `instance`.
    pub fn validate(&self, instance: &Instance, rotation: Rotation) -> Result<(), ValidationError> {
        if self.strip_width != instance.strip_width {
            return Err(ValidationError::WidthMismatch {
                expected: instance.strip_width,
                found: self.strip_width,
            });
        }
        let mut placed = vec![0u64; instance.boxes.len()];
        let mut top = 0;
        for (index, p) in self.placements.iter().enumerate() {
            let Some(b) = instance.boxes.get(p.box_id as usize) else {
                return Err(ValidationError::UnknownBox { index, box_id: p.box_id });
            };
            let (w, h) = (p.rect.w, p.rect.h);
            let upright = (w, h) == (b.width, b.length);
            let turned = (w, h) == (b.length, b.width);
            if !(upright || (rotation.allowed() && turned)) {
                return Err(ValidationError::BadOrientation { index, box_id: b.id, w, h });
            }
            if p.rect.right() > self.strip_width || p.rect.top() > self.used_length {
                return Err(ValidationError::OutOfBounds {
                    index,
                    rect: p.rect,
                    width: self.strip_width,
                    length: self.used_length,
                });
            }
            placed[b.id as usize] += 1;
            top = top.max(p.rect.top());
        }
        for b in &instance.boxes {
            if placed[b.id as usize] != b.count as u64 {
                return Err(ValidationError::CountMismatch {
                    box_id: b.id,
                    placed: placed[b.id as usize],
                    expected: b.count as u64,
                });
            }
        }
        if top != self.used_length {
            return Err(ValidationError::LengthMismatch {
                declared: self.used_length,
                actual: top,
            });
        }
        if let Some((a, b)) = find_overlap(&self.placements) {
            return Err(ValidationError::Overlap { a, b });
        }
        Ok(())
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.strip_width, self.used_length).unwrap();
        for p in &self.placements {
            let r = p.rect;
            writeln!(out, "{} {} {} {} {}", p.box_id, r.x, r.y, r.w, r.h).unwrap();
        }
        out
    }

    /// Reads a placement file. Orientation is recovered from the instance,
    /// so `instance` supplies box sizes and the total area.
    pub fn parse(text: &str, instance: &Instance) -> Result<Solution, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(ParseError::Empty)?;
        let head = ints(header, line)?;
        let [width, declared] = head[..] else {
            return Err(ParseError::Malformed {
                line,
                msg: "expected `W usedLength`".into(),
            });
        };
        let mut placements = Vec::new();
        for (line, text) in lines {
            let v = ints(text, line)?;
            let [box_id, x, y, w, h] = v[..] else {
                return Err(ParseError::Malformed {
                    line,
                    msg: "expected `boxId x y w h`".into(),
                });
            };
            if w == 0 || h == 0 {
                return Err(ParseError::NonPositive { line });
            }
            let rotated = instance
                .boxes
                .get(box_id as usize)
                .is_some_and(|b| (w, h) != (b.width, b.length) && (w, h) == (b.length, b.width));
            placements.push(BoxPlacement {
                box_id,
                rotated,
                rect: Rect::new(x, y, w, h),
            });
        }
        let mut solution = Solution::new(width, instance.total_area(), placements);
        // Keep the declared length so validation can compare it.
        solution.used_length = declared;
        Ok(solution)
    }
}

fn ints(text: &str, line: usize) -> Result<Vec<u32>, ParseError> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<u32>().map_err(|_| ParseError::Malformed {
                line,
                msg: format!("`{t}` is not a non-negative integer"),
            })
        })
        .collect()
}

/// First pair of overlapping placements, if any. Sweeps along `x`.
pub fn find_overlap(placements: &[BoxPlacement]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..placements.len()).collect();
    order.sort_by_key(|&i| placements[i].rect.x);
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let r = placements[i].rect;
        active.retain(|&j| placements[j].rect.right() > r.x);
        for &j in &active {
            if placements[j].rect.overlaps(&r) {
                return Some((j.min(i), j.max(i)));
            }
        }
        active.push(i);
    }
    None
}
