//! Strip packing instances.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::SolveError;

/// One box size of an instance together with its multiplicity.
///
/// `width` runs along the strip width, `length` along the open strip axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoxType {
    pub id: u32,
    pub width: u32,
    pub length: u32,
    pub count: u32,
}

impl BoxType {
    pub fn area(&self) -> u64 {
        self.width as u64 * self.length as u64
    }

    /// Whether the box can be placed in a strip of width `strip_width`.
    pub fn fits_width(&self, strip_width: u32, rotation: Rotation) -> bool {
        self.width <= strip_width || (rotation.allowed() && self.length <= strip_width)
    }
}

/// Rotation mode: `OF` forbids 90 degree turns, `RF` allows them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Rotation {
    #[default]
    Forbidden,
    Allowed,
}

impl Rotation {
    pub fn allowed(self) -> bool {
        matches!(self, Rotation::Allowed)
    }

    pub fn tag(self) -> &'static str {
        match self {
            Rotation::Forbidden => "OF",
            Rotation::Allowed => "RF",
        }
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Rotation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "of" => Ok(Rotation::Forbidden),
            "rf" => Ok(Rotation::Allowed),
            other => Err(format!("unknown rotation mode `{other}` (expected of or rf)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub strip_width: u32,
    pub boxes: Vec<BoxType>,
    total_area: u64,
}

impl Instance {
    /// Builds an instance from `(width, length)` items, aggregating identical
    /// sizes into one box type. Type ids follow first appearance.
    pub fn from_items(
        name: impl Into<String>,
        strip_width: u32,
        items: impl IntoIterator<Item = (u32, u32)>,
    ) -> Self {
        let mut boxes: Vec<BoxType> = Vec::new();
        for (w, l) in items {
            match boxes.iter_mut().find(|b| b.width == w && b.length == l) {
                Some(b) => b.count += 1,
                None => boxes.push(BoxType {
                    id: boxes.len() as u32,
                    width: w,
                    length: l,
                    count: 1,
                }),
            }
        }
        Self::from_types(name, strip_width, boxes.into_iter().map(|b| (b.width, b.length, b.count)))
    }

    /// Builds an instance from `(width, length, count)` triples, merging
    /// repeated sizes.
    pub fn from_types(
        name: impl Into<String>,
        strip_width: u32,
        types: impl IntoIterator<Item = (u32, u32, u32)>,
    ) -> Self {
        let mut boxes: Vec<BoxType> = Vec::new();
        for (w, l, c) in types {
            if c == 0 {
                continue;
            }
            match boxes.iter_mut().find(|b| b.width == w && b.length == l) {
                Some(b) => b.count += c,
                None => boxes.push(BoxType {
                    id: boxes.len() as u32,
                    width: w,
                    length: l,
                    count: c,
                }),
            }
        }
        let total_area = boxes.iter().map(|b| b.area() * b.count as u64).sum();
        Instance {
            name: name.into(),
            strip_width,
            boxes,
            total_area,
        }
    }

    /// `S`, the summed area of all boxes.
    pub fn total_area(&self) -> u64 {
        self.total_area
    }

    pub fn box_count(&self) -> u64 {
        self.boxes.iter().map(|b| b.count as u64).sum()
    }

    pub fn counts(&self) -> Vec<u32> {
        self.boxes.iter().map(|b| b.count).collect()
    }

    /// Exact continuous lower bound `S / W`.
    pub fn lower_bound(&self) -> Ratio<u64> {
        Ratio::new(self.total_area, self.strip_width as u64)
    }

    /// `ceil(S / W)`.
    pub fn lower_bound_ceil(&self) -> u64 {
        self.total_area.div_ceil(self.strip_width as u64)
    }

    /// Checks the instance can be solved under `rotation`.
    pub fn check_solvable(&self, rotation: Rotation) -> Result<(), SolveError> {
        if self.boxes.is_empty() || self.strip_width == 0 {
            return Err(SolveError::EmptyInstance);
        }
        for b in &self.boxes {
            if b.width == 0 || b.length == 0 || !b.fits_width(self.strip_width, rotation) {
                return Err(SolveError::Infeasible {
                    box_id: b.id,
                    w: b.width,
                    h: b.length,
                    width: self.strip_width,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregates_identical_boxes() {
        let inst = Instance::from_items("t", 10, [(2, 2), (2, 2), (2, 2)]);
        assert_eq!(inst.boxes.len(), 1);
        assert_eq!(inst.boxes[0].count, 3);
        assert_eq!(inst.total_area(), 12);
    }

    #[test]
    fn lower_bounds() {
        let a = Instance::from_types("a", 20, [(20, 60, 1)]);
        assert_eq!(a.lower_bound(), Ratio::from_integer(60));
        assert_eq!(a.lower_bound_ceil(), 60);
        let b = Instance::from_types("b", 20, [(20, 60, 1), (1, 1, 1)]);
        assert_eq!(b.lower_bound(), Ratio::new(1201, 20));
        assert_eq!(b.lower_bound_ceil(), 61);
    }

    #[test]
    fn solvability_depends_on_rotation() {
        let inst = Instance::from_types("r", 5, [(8, 3, 1)]);
        assert!(inst.check_solvable(Rotation::Forbidden).is_err());
        assert!(inst.check_solvable(Rotation::Allowed).is_ok());
        let empty = Instance::from_types("e", 5, []);
        assert!(matches!(
            empty.check_solvable(Rotation::Allowed),
            Err(SolveError::EmptyInstance)
        ));
    }
}
