//! Independent oracles and instance generators shared by the integration tests.

#![allow(dead_code)]

use bspa::{Instance, Rect, Rotation};
use rand::Rng;

/// Occupancy grid of a `w` x `h` container.
pub struct Grid {
    pub w: u32,
    pub h: u32,
    cells: Vec<bool>,
}

impl Grid {
    pub fn new(w: u32, h: u32) -> Self {
        Grid {
            w,
            h,
            cells: vec![false; (w * h) as usize],
        }
    }

    pub fn filled(&self, x: u32, y: u32) -> bool {
        self.cells[(y * self.w + x) as usize]
    }

    pub fn set(&mut self, r: Rect, v: bool) {
        for y in r.y..r.top() {
            for x in r.x..r.right() {
                self.cells[(y * self.w + x) as usize] = v;
            }
        }
    }

    pub fn is_free(&self, r: Rect) -> bool {
        r.right() <= self.w
            && r.top() <= self.h
            && (r.y..r.top()).all(|y| (r.x..r.right()).all(|x| !self.filled(x, y)))
    }

    /// Every maximal empty rectangle, found by testing all rectangles of
    /// free cells for extendability in the four directions.
    pub fn maximal_empty_rects(&self) -> Vec<Rect> {
        let mut out = Vec::new();
        for y0 in 0..self.h {
            for x0 in 0..self.w {
                for y1 in y0 + 1..=self.h {
                    for x1 in x0 + 1..=self.w {
                        let r = Rect::new(x0, y0, x1 - x0, y1 - y0);
                        if !self.is_free(r) {
                            continue;
                        }
                        let grow = [
                            (x0 > 0).then(|| Rect::new(x0 - 1, y0, r.w + 1, r.h)),
                            (x1 < self.w).then(|| Rect::new(x0, y0, r.w + 1, r.h)),
                            (y0 > 0).then(|| Rect::new(x0, y0 - 1, r.w, r.h + 1)),
                            (y1 < self.h).then(|| Rect::new(x0, y0, r.w, r.h + 1)),
                        ];
                        if grow.iter().flatten().all(|g| !self.is_free(*g)) {
                            out.push(r);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// Optimal strip length by exhaustive search.
///
/// For each candidate length starting at the area bound, the first empty
/// cell in row-major order is either the lower-left corner of some box or
/// wasted; both branches are tried, bounded by the waste budget.
pub fn optimal_length(instance: &Instance, rotation: Rotation) -> u32 {
    let w = instance.strip_width;
    let area = instance.total_area();
    let mut counts = instance.counts();
    let dims: Vec<(u32, u32)> = instance.boxes.iter().map(|b| (b.width, b.length)).collect();
    let upper: u32 = instance
        .boxes
        .iter()
        .map(|b| if b.width <= w { b.length } else { b.width } * b.count)
        .sum();
    let mut len = area.div_ceil(w as u64) as u32;
    loop {
        let mut grid = Grid::new(w, len);
        let waste = w as u64 * len as u64 - area;
        if fill(&mut grid, 0, waste, &mut counts, &dims, rotation) {
            return len;
        }
        len += 1;
        assert!(len <= upper.max(1) + 1, "oracle exceeded the stacking bound");
    }
}

fn fill(
    grid: &mut Grid,
    from: u32,
    waste: u64,
    counts: &mut [u32],
    dims: &[(u32, u32)],
    rotation: Rotation,
) -> bool {
    let total = grid.w * grid.h;
    let mut cell = from;
    while cell < total && grid.cells[cell as usize] {
        cell += 1;
    }
    if cell == total {
        return counts.iter().all(|&c| c == 0);
    }
    let (x, y) = (cell % grid.w, cell / grid.w);
    for i in 0..counts.len() {
        if counts[i] == 0 {
            continue;
        }
        let (bw, bl) = dims[i];
        let mut orients = vec![(bw, bl)];
        if rotation.allowed() && bw != bl {
            orients.push((bl, bw));
        }
        for (ow, oh) in orients {
            let r = Rect::new(x, y, ow, oh);
            if grid.is_free(r) {
                grid.set(r, true);
                counts[i] -= 1;
                let ok = fill(grid, cell + 1, waste, counts, dims, rotation);
                counts[i] += 1;
                grid.set(r, false);
                if ok {
                    return true;
                }
            }
        }
    }
    if waste > 0 {
        let r = Rect::new(x, y, 1, 1);
        grid.set(r, true);
        let ok = fill(grid, cell + 1, waste - 1, counts, dims, rotation);
        grid.set(r, false);
        return ok;
    }
    false
}

/// Cuts a `w` x `l` rectangle into `pieces` rectangles by repeated
/// straight cuts of a random splittable piece.
pub fn zero_waste_pieces<R: Rng>(rng: &mut R, w: u32, l: u32, pieces: usize) -> Vec<(u32, u32)> {
    let mut parts = vec![(w, l)];
    while parts.len() < pieces {
        let splittable: Vec<usize> = (0..parts.len()).filter(|&i| parts[i].0 > 1 || parts[i].1 > 1).collect();
        if splittable.is_empty() {
            break;
        }
        let i = splittable[rng.gen_range(0..splittable.len())];
        let (pw, pl) = parts[i];
        let along_width = if pw > 1 && pl > 1 { rng.gen_bool(0.5) } else { pw > 1 };
        if along_width {
            let cut = rng.gen_range(1..pw);
            parts[i] = (cut, pl);
            parts.push((pw - cut, pl));
        } else {
            let cut = rng.gen_range(1..pl);
            parts[i] = (pw, cut);
            parts.push((pw, pl - cut));
        }
    }
    parts
}

/// Random instance with up to `max_boxes` boxes of sides in `1..=max_dim`.
/// Under OF the strip is at least as wide as the widest box; under RF at
/// least as wide as the widest shorter side.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    name: &str,
    max_boxes: usize,
    max_dim: u32,
    rotation: Rotation,
) -> Instance {
    let n = rng.gen_range(1..=max_boxes);
    let items: Vec<(u32, u32)> = (0..n)
        .map(|_| (rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim)))
        .collect();
    let need = items
        .iter()
        .map(|&(w, l)| if rotation.allowed() { w.min(l) } else { w })
        .max()
        .unwrap();
    let width = rng.gen_range(need..=need.max(max_dim));
    Instance::from_items(name, width, items)
}

/// Checks a layout against `instance` without using the library validator:
/// every box used exactly as often as declared, inside the strip, no two
/// boxes sharing area, orientation as declared unless rotation is allowed,
/// and the declared length equal to the topmost edge.
pub fn check_layout(instance: &Instance, solution: &bspa::Solution, rotation: Rotation) -> Result<(), String> {
    let w = instance.strip_width;
    if solution.strip_width != w {
        return Err(format!("strip width {} != {w}", solution.strip_width));
    }
    let mut used = vec![0u32; instance.boxes.len()];
    for p in &solution.placements {
        let b = instance
            .boxes
            .iter()
            .find(|b| b.id == p.box_id)
            .ok_or_else(|| format!("unknown box {}", p.box_id))?;
        used[instance.boxes.iter().position(|x| x.id == b.id).unwrap()] += 1;
        let r = p.rect;
        let upright = (r.w, r.h) == (b.width, b.length);
        let turned = (r.w, r.h) == (b.length, b.width);
        if !(upright || (rotation.allowed() && turned)) {
            return Err(format!("box {} placed as {}x{}", b.id, r.w, r.h));
        }
        if r.x + r.w > w || r.y + r.h > solution.used_length {
            return Err(format!("box {} at {r} leaves the strip", b.id));
        }
    }
    for (b, &n) in instance.boxes.iter().zip(&used) {
        if n != b.count {
            return Err(format!("box {} used {n} times, declared {}", b.id, b.count));
        }
    }
    let ps = &solution.placements;
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            let (a, c) = (ps[i].rect, ps[j].rect);
            if a.x < c.x + c.w && c.x < a.x + a.w && a.y < c.y + c.h && c.y < a.y + a.h {
                return Err(format!("{a} overlaps {c}"));
            }
        }
    }
    let top = ps.iter().map(|p| p.rect.y + p.rect.h).max().unwrap_or(0);
    if top != solution.used_length {
        return Err(format!("declared length {} but top edge {top}", solution.used_length));
    }
    Ok(())
}
