//! Integer rectangle arithmetic and the overlapping free-space model.
//!
//! Free space inside a container is kept as the set of *maximal* empty
//! rectangles. Unlike a guillotine-style partition these rectangles may
//! overlap each other; each one is as large as possible in all four
//! directions. Placing a rectangle splits every space it touches into at
//! most four residual strips and dominated strips are dropped.

use std::fmt;

use crate::error::GeometryError;

/// Axis-aligned rectangle. `x`/`w` run along the strip width, `y`/`h` along
/// the strip length. `(x, y)` is the lower-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl Rect {
    pub const fn new(x: u32, y: u32, w: u32, h: u32) -> Self {
        Rect { x, y, w, h }
    }

    #[inline]
    pub fn right(&self) -> u32 {
        self.x + self.w
    }

    #[inline]
    pub fn top(&self) -> u32 {
        self.y + self.h
    }

    #[inline]
    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.w == 0 || self.h == 0
    }

    /// True when the two rectangles share positive area.
    #[inline]
    pub fn overlaps(&self, other: &Rect) -> bool {
        self.x < other.right()
            && other.x < self.right()
            && self.y < other.top()
            && other.y < self.top()
    }

    #[inline]
    pub fn contains(&self, other: &Rect) -> bool {
        self.x <= other.x
            && self.y <= other.y
            && other.right() <= self.right()
            && other.top() <= self.top()
    }

    /// Whether a `w` x `h` rectangle fits inside this one.
    #[inline]
    pub fn fits(&self, w: u32, h: u32) -> bool {
        w <= self.w && h <= self.h
    }

    /// Sort key of the canonical space ordering.
    fn canonical_key(&self) -> (u64, u32, u32, u32, u32) {
        (self.x as u64 + self.y as u64, self.y, self.x, self.w, self.h)
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.x, self.y, self.w, self.h)
    }
}

/// Overlap of two rectangles, `None` when they only touch or are disjoint.
pub fn intersect(a: &Rect, b: &Rect) -> Option<Rect> {
    let x0 = a.x.max(b.x);
    let y0 = a.y.max(b.y);
    let x1 = a.right().min(b.right());
    let y1 = a.top().min(b.top());
    if x0 < x1 && y0 < y1 {
        Some(Rect::new(x0, y0, x1 - x0, y1 - y0))
    } else {
        None
    }
}

/// A maximal empty rectangle of the current layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FreeSpace {
    pub rect: Rect,
}

impl FreeSpace {
    pub fn area(&self) -> u64 {
        self.rect.area()
    }
}

impl From<Rect> for FreeSpace {
    fn from(rect: Rect) -> Self {
        FreeSpace { rect }
    }
}

/// The free spaces of a container, kept in canonical order
/// `(x + y, y, x, w, h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceList {
    container: Rect,
    spaces: Vec<FreeSpace>,
}

impl SpaceList {
    /// An empty container: its only free space is the container itself.
    pub fn new(container: Rect) -> Self {
        SpaceList {
            container,
            spaces: vec![FreeSpace { rect: container }],
        }
    }

    /// Builds a list from explicit spaces. The spaces are clipped to nothing;
    /// callers are responsible for them lying inside `container`.
    pub fn from_spaces(container: Rect, spaces: impl IntoIterator<Item = Rect>) -> Self {
        let mut list = SpaceList {
            container,
            spaces: spaces.into_iter().map(FreeSpace::from).collect(),
        };
        list.canonicalize();
        list
    }

    pub fn container(&self) -> Rect {
        self.container
    }

    pub fn spaces(&self) -> &[FreeSpace] {
        &self.spaces
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FreeSpace> {
        self.spaces.iter()
    }

    /// Drops a space (an unusable one, typically). Returns whether it was present.
    pub fn remove(&mut self, space: &FreeSpace) -> bool {
        match self.spaces.iter().position(|s| s == space) {
            Some(i) => {
                self.spaces.remove(i);
                true
            }
            None => false,
        }
    }

    /// Marks `placed` as occupied and updates the maximal spaces.
    pub fn place(&mut self, placed: Rect) -> Result<(), GeometryError> {
        if placed.is_empty() {
            return Err(GeometryError::EmptyPlacement(placed));
        }
        if !self.container.contains(&placed) {
            return Err(GeometryError::OutsideContainer {
                placed,
                container: self.container,
            });
        }

        let mut kept: Vec<Rect> = Vec::with_capacity(self.spaces.len() + 4);
        let mut fresh: Vec<Rect> = Vec::new();
        for space in &self.spaces {
            let s = space.rect;
            if !s.overlaps(&placed) {
                kept.push(s);
                continue;
            }
            if placed.x > s.x {
                fresh.push(Rect::new(s.x, s.y, placed.x - s.x, s.h));
            }
            if placed.right() < s.right() {
                fresh.push(Rect::new(placed.right(), s.y, s.right() - placed.right(), s.h));
            }
            if placed.y > s.y {
                fresh.push(Rect::new(s.x, s.y, s.w, placed.y - s.y));
            }
            if placed.top() < s.top() {
                fresh.push(Rect::new(s.x, placed.top(), s.w, s.top() - placed.top()));
            }
        }

        // Untouched spaces are already pairwise non-dominated, and a residual
        // is strictly smaller than the space it came from, so a residual can
        // never dominate an untouched space. Only residuals need checking.
        fresh.sort_unstable_by_key(|r| std::cmp::Reverse(r.area()));
        let mut accepted: Vec<Rect> = Vec::with_capacity(fresh.len());
        for r in fresh {
            if kept.iter().any(|k| k.contains(&r)) || accepted.iter().any(|a| a.contains(&r)) {
                continue;
            }
            accepted.push(r);
        }
        kept.extend(accepted);

        self.spaces = kept.into_iter().map(FreeSpace::from).collect();
        self.canonicalize();
        Ok(())
    }

    fn canonicalize(&mut self) {
        self.spaces.sort_unstable_by_key(|s| s.rect.canonical_key());
        self.spaces.dedup();
    }
}

/// Value-semantics variant of [`SpaceList::place`].
pub fn place_and_update(spaces: &SpaceList, placed: Rect) -> Result<SpaceList, GeometryError> {
    let mut next = spaces.clone();
    next.place(placed)?;
    Ok(next)
}

/// Space whose lower-left corner is closest to the origin (minimal `x + y`),
/// ties broken by smaller `y`, then smaller `x`.
pub fn select_space(spaces: &SpaceList) -> Option<FreeSpace> {
    // Canonical ordering already puts that space first.
    spaces.spaces.first().copied()
}

/// Lowest space, ties broken by leftmost.
pub fn select_space_low_left(spaces: &SpaceList) -> Option<FreeSpace> {
    spaces
        .spaces
        .iter()
        .min_by_key(|s| (s.rect.y, s.rect.x, s.rect.w, s.rect.h))
        .copied()
}
