//! Beam search over block placements.
//!
//! A search state is a partially filled container. Expanding a state picks
//! the free space nearest the origin and branches on the best-scoring blocks
//! that fit it, each placed at the space's lower-left corner. States are
//! ranked by the area a greedy roll-out from them reaches. The search runs
//! as a sequence of restarts with widening beam (`1, 2, 3, 5, 8, ...`)
//! until its budget is used up.

mod quick_fill;
mod state;

use std::cmp::Ordering;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use num_rational::Ratio;

pub use quick_fill::{quick_fill, QuickFill, QuickFillConfig};
pub use state::{Catalog, PackingState};

use crate::blocks::Block;
use crate::error::ScoreError;
use crate::geometry::{select_space, FreeSpace};

/// What ends a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    /// Wall-clock limit.
    Time(Duration),
    /// Limit on the number of `expand` calls. Runs are reproducible.
    Nodes(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamConfig {
    /// Weight of the leftover-length term of the block score.
    pub b: f64,
    pub budget: Budget,
    /// Upper bound on the beam width. `None` lets the width grow freely.
    pub width_cap: Option<usize>,
}

impl Default for BeamConfig {
    fn default() -> Self {
        BeamConfig {
            b: 0.1,
            budget: Budget::Time(Duration::from_secs(30)),
            width_cap: None,
        }
    }
}

impl BeamConfig {
    pub fn with_nodes(b: f64, nodes: u64) -> Self {
        BeamConfig {
            b,
            budget: Budget::Nodes(nodes),
            width_cap: None,
        }
    }

    pub fn with_time(b: f64, limit: Duration) -> Self {
        BeamConfig {
            b,
            budget: Budget::Time(limit),
            width_cap: None,
        }
    }
}

/// Next beam width: `max(w + 1, ceil(sqrt(2) * w))`.
pub fn next_width(w: usize) -> usize {
    let w2 = 2 * (w as u128) * (w as u128);
    let mut root = w2.isqrt();
    if root * root < w2 {
        root += 1;
    }
    (w + 1).max(root as usize)
}

/// Beam widths used by successive restarts.
pub fn width_schedule() -> impl Iterator<Item = usize> {
    std::iter::successors(Some(1usize), |&w| Some(next_width(w)))
}

/// The terms of a block score `blockArea / spaceArea + b / avgHigh`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreBreakdown {
    pub block_area: u64,
    pub space_area: u64,
    /// Mean length of the boxes left after placing the block; `None` when
    /// the block uses up every remaining box, in which case the second term
    /// is zero.
    pub avg_high: Option<Ratio<u64>>,
    pub b: f64,
    pub value: f64,
}

/// Scores `block` for `space` in `state`.
pub fn block_score(
    block: &Block,
    space: &FreeSpace,
    state: &PackingState,
    b: f64,
) -> Result<ScoreBreakdown, ScoreError> {
    if !space.rect.fits(block.width, block.length) {
        return Err(ScoreError::BlockDoesNotFit {
            bw: block.width,
            bl: block.length,
            space: space.rect,
        });
    }
    let (count, length) = leftover_after(block, state);
    let avg_high = (count > 0).then(|| Ratio::new(length, count));
    Ok(ScoreBreakdown {
        block_area: block.area(),
        space_area: space.area(),
        avg_high,
        b,
        value: score_value(block, space.area(), state, b),
    })
}

fn leftover_after(block: &Block, state: &PackingState) -> (u64, u64) {
    let boxes = &state.catalog().boxes;
    let mut count = state.remaining_boxes();
    let mut length = state.remaining_length();
    for &(t, c) in block.composition() {
        count -= c as u64;
        length -= c as u64 * boxes[t as usize].length as u64;
    }
    (count, length)
}

#[inline]
fn score_value(block: &Block, space_area: u64, state: &PackingState, b: f64) -> f64 {
    let fill = block.area() as f64 / space_area as f64;
    let (count, length) = leftover_after(block, state);
    if count == 0 || length == 0 {
        fill
    } else {
        fill + b * count as f64 / length as f64
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    id: u32,
    value: f64,
    area: u64,
}

fn rank(a: &Candidate, b: &Candidate) -> Ordering {
    b.value
        .partial_cmp(&a.value)
        .unwrap_or(Ordering::Equal)
        .then(b.area.cmp(&a.area))
        .then(a.id.cmp(&b.id))
}

/// Ranked fitting blocks for `space`, best first, at most `w`. The second
/// value is how many blocks fit in total.
fn ranked_blocks(state: &PackingState, space: &FreeSpace, w: usize, b: f64) -> (Vec<u32>, usize) {
    let catalog = state.catalog();
    let space_area = space.area();
    let mut cands: Vec<Candidate> = state
        .fitting_blocks(space)
        .map(|id| {
            let block = catalog.block(id);
            Candidate {
                id,
                value: score_value(block, space_area, state, b),
                area: block.area(),
            }
        })
        .collect();
    let total = cands.len();
    if w == 0 {
        return (Vec::new(), total);
    }
    if cands.len() > w {
        cands.select_nth_unstable_by(w - 1, rank);
        cands.truncate(w);
    }
    cands.sort_by(rank);
    (cands.into_iter().map(|c| c.id).collect(), total)
}

/// Top `w` feasible blocks fitting `space`, best score first. Ties go to the
/// larger block, then to the smaller block id.
pub fn select_blocks(state: &PackingState, space: &FreeSpace, w: usize, b: f64) -> Vec<u32> {
    ranked_blocks(state, space, w, b).0
}

fn best_block(state: &PackingState, space: &FreeSpace, b: f64) -> Option<u32> {
    let catalog = state.catalog();
    let space_area = space.area();
    state
        .fitting_blocks(space)
        .map(|id| {
            let block = catalog.block(id);
            Candidate {
                id,
                value: score_value(block, space_area, state, b),
                area: block.area(),
            }
        })
        .min_by(rank)
        .map(|c| c.id)
}

pub(crate) struct Expansion {
    pub children: Vec<PackingState>,
    /// Whether some fitting block was left out because of `w`.
    pub truncated: bool,
}

pub(crate) fn expand_full(state: &PackingState, w: usize, b: f64) -> Expansion {
    let mut base = state.clone();
    loop {
        let Some(space) = select_space(base.spaces()) else {
            return Expansion {
                children: Vec::new(),
                truncated: false,
            };
        };
        let (blocks, total) = ranked_blocks(&base, &space, w, b);
        if blocks.is_empty() {
            base.spaces_mut().remove(&space);
            continue;
        }
        let children = blocks
            .into_iter()
            .map(|id| {
                let mut child = base.clone();
                child
                    .place(id, space.rect.x, space.rect.y)
                    .expect("a fitting block placed in a free space stays inside the container");
                child.score = 0;
                child
            })
            .collect();
        return Expansion {
            children,
            truncated: total > w,
        };
    }
}

/// Successor states of `state`: the space nearest the origin that admits
/// some block receives each of the `w` best blocks in turn. Spaces that admit
/// nothing are dropped from the successors.
pub fn expand(state: &PackingState, w: usize, b: f64) -> Vec<PackingState> {
    expand_full(state, w, b).children
}

/// Fills `state` greedily with the best block for the space nearest the
/// origin until no space is left. The returned state's score is its packed area.
pub fn greedy_rollout(state: &PackingState, b: f64) -> PackingState {
    let mut s = state.clone();
    while let Some(space) = select_space(s.spaces()) {
        match best_block(&s, &space, b) {
            Some(id) => s
                .place(id, space.rect.x, space.rect.y)
                .expect("a fitting block placed in a free space stays inside the container"),
            None => {
                s.spaces_mut().remove(&space);
            }
        }
    }
    s.score = s.packed_area();
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Budget,
    /// A restart explored every successor without truncation; wider beams
    /// would repeat it.
    Exhausted,
    /// The container is completely filled.
    Full,
    /// The completion hook asked to stop.
    Hook,
    WidthCap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStats {
    pub expansions: u64,
    pub rollouts: u64,
    pub restarts: u32,
    pub last_width: usize,
    pub stop: StopReason,
}

#[derive(Debug, Clone)]
pub struct BeamOutcome {
    /// Terminal state with the largest packed area seen.
    pub best: PackingState,
    pub stats: SearchStats,
}

struct Meter {
    start: Instant,
    budget: Budget,
    expansions: u64,
}

impl Meter {
    fn new(budget: Budget) -> Self {
        Meter {
            start: Instant::now(),
            budget,
            expansions: 0,
        }
    }

    fn exhausted(&self) -> bool {
        match self.budget {
            Budget::Time(limit) => self.start.elapsed() >= limit,
            Budget::Nodes(limit) => self.expansions >= limit,
        }
    }

    /// Only wall-clock budgets interrupt a level half way.
    fn must_abort_level(&self) -> bool {
        matches!(self.budget, Budget::Time(_)) && self.exhausted()
    }
}

/// Widening beam search from `init`.
///
/// `on_complete` sees every roll-out result (terminal state), including the
/// plain greedy roll-out of `init`, and may stop the search early. Budgets
/// are checked between levels; a wall-clock budget additionally interrupts
/// a level in progress, a node budget lets it finish.
pub fn beam_search<F>(init: &PackingState, cfg: &BeamConfig, mut on_complete: F) -> BeamOutcome
where
    F: FnMut(&PackingState) -> ControlFlow<()>,
{
    let mut meter = Meter::new(cfg.budget);
    let container_area = init.container().area();
    let mut rollouts = 1;
    let mut best = greedy_rollout(init, cfg.b);
    let mut restarts = 0;
    let mut w = 1usize;

    let finish = |best, meter: &Meter, rollouts, restarts, w, stop| BeamOutcome {
        best,
        stats: SearchStats {
            expansions: meter.expansions,
            rollouts,
            restarts,
            last_width: w,
            stop,
        },
    };

    if on_complete(&best).is_break() {
        return finish(best, &meter, rollouts, restarts, w, StopReason::Hook);
    }
    if best.packed_area() == container_area {
        return finish(best, &meter, rollouts, restarts, w, StopReason::Full);
    }
    if let Some(cap) = cfg.width_cap {
        w = w.min(cap.max(1));
    }

    loop {
        if meter.exhausted() {
            return finish(best, &meter, rollouts, restarts, w, StopReason::Budget);
        }
        restarts += 1;
        let mut level = vec![init.clone()];
        let mut is_root = true;
        let mut exhaustive = true;
        while !level.is_empty() {
            if meter.exhausted() {
                return finish(best, &meter, rollouts, restarts, w, StopReason::Budget);
            }
            let mut successors = Vec::new();
            for state in &level {
                if meter.must_abort_level() {
                    return finish(best, &meter, rollouts, restarts, w, StopReason::Budget);
                }
                let width = if is_root { w.saturating_mul(w) } else { w };
                let expansion = expand_full(state, width, cfg.b);
                meter.expansions += 1;
                exhaustive &= !expansion.truncated;
                successors.extend(expansion.children);
            }
            for succ in successors.iter_mut() {
                if meter.must_abort_level() {
                    return finish(best, &meter, rollouts, restarts, w, StopReason::Budget);
                }
                let terminal = greedy_rollout(succ, cfg.b);
                rollouts += 1;
                succ.score = terminal.packed_area();
                let hook = on_complete(&terminal);
                if terminal.packed_area() > best.packed_area() {
                    best = terminal;
                }
                if hook.is_break() {
                    return finish(best, &meter, rollouts, restarts, w, StopReason::Hook);
                }
                if best.packed_area() == container_area {
                    return finish(best, &meter, rollouts, restarts, w, StopReason::Full);
                }
            }
            // Stable: equal keys keep insertion order.
            successors.sort_by(|a, b| {
                b.score
                    .cmp(&a.score)
                    .then(b.packed_area().cmp(&a.packed_area()))
            });
            if successors.len() > w {
                exhaustive = false;
                successors.truncate(w);
            }
            level = successors;
            is_root = false;
        }

        if exhaustive {
            return finish(best, &meter, rollouts, restarts, w, StopReason::Exhausted);
        }
        let next = next_width(w);
        match cfg.width_cap {
            Some(cap) if next > cap => {
                if w >= cap {
                    return finish(best, &meter, rollouts, restarts, w, StopReason::WidthCap);
                }
                w = cap;
            }
            _ => w = next,
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::blocks::{complex_blocks, BlockGenConfig};
    use crate::geometry::{Rect, SpaceList};
    use crate::instance::{BoxType, Instance, Rotation};

    fn state_for(inst: &Instance, container: Rect, rotation: Rotation) -> PackingState {
        let blocks = complex_blocks(&inst.boxes, container, &BlockGenConfig::with_rotation(rotation));
        PackingState::new(Catalog::new(inst.boxes.clone(), blocks), container)
    }

    #[test]
    fn width_schedule_values() {
        let w: Vec<usize> = width_schedule().take(8).collect();
        assert_eq!(w, vec![1, 2, 3, 5, 8, 12, 17, 25]);
        let mut prev = 0;
        for w in width_schedule().take(60) {
            assert!(w > prev);
            prev = w;
        }
    }

    #[test]
    fn score_hand_value() {
        // Block of area 50 in a space of area 100; afterwards boxes of length 4 and 6 remain.
        let boxes = vec![
            BoxType { id: 0, width: 5, length: 10, count: 1 },
            BoxType { id: 1, width: 1, length: 4, count: 1 },
            BoxType { id: 2, width: 1, length: 6, count: 1 },
        ];
        let container = Rect::new(0, 0, 10, 10);
        let blocks = complex_blocks(&boxes, container, &BlockGenConfig::default());
        let block = blocks.iter().find(|b| (b.width, b.length) == (5, 10)).unwrap().clone();
        let state = PackingState::new(Catalog::new(boxes, blocks), container);
        let space = FreeSpace { rect: container };
        let s = block_score(&block, &space, &state, 0.1).unwrap();
        assert_eq!(s.avg_high, Some(Ratio::from_integer(5)));
        assert!((s.value - 0.52).abs() < 1e-12);

        let zero = block_score(&block, &space, &state, 0.0).unwrap();
        assert_eq!(zero.value, 0.5);

        let small = FreeSpace { rect: Rect::new(0, 0, 4, 10) };
        assert!(block_score(&block, &small, &state, 0.1).is_err());
    }

    #[test]
    fn score_without_leftovers() {
        let inst = Instance::from_types("one", 4, [(4, 4, 1)]);
        let state = state_for(&inst, Rect::new(0, 0, 4, 8), Rotation::Forbidden);
        let block = state.catalog().block(0).clone();
        let s = block_score(&block, &FreeSpace { rect: Rect::new(0, 0, 4, 8) }, &state, 0.1).unwrap();
        assert_eq!(s.avg_high, None);
        assert_eq!(s.value, 0.5);
    }

    #[test]
    fn expand_with_single_candidate() {
        let inst = Instance::from_types("one", 4, [(4, 4, 1)]);
        let state = state_for(&inst, Rect::new(0, 0, 4, 4), Rotation::Forbidden);
        let succ = expand(&state, 3, 0.1);
        assert_eq!(succ.len(), 1);
        assert_eq!(succ[0].placements().len(), 1);
        succ[0].validate().unwrap();
    }

    #[test]
    fn expand_skips_unusable_space() {
        // Container 6x4 with an obstacle at (1,0,5,2): spaces (0,0,1,4) and (0,2,6,2).
        let boxes = vec![BoxType { id: 0, width: 2, length: 2, count: 1 }];
        let container = Rect::new(0, 0, 6, 4);
        let blocks = complex_blocks(&boxes, container, &BlockGenConfig::default());
        let mut spaces = SpaceList::new(container);
        spaces.place(Rect::new(1, 0, 5, 2)).unwrap();
        assert_eq!(select_space(&spaces).unwrap().rect, Rect::new(0, 0, 1, 4));
        let state = PackingState::with_spaces(Catalog::new(boxes, blocks), spaces, vec![1]);

        let succ = expand(&state, 2, 0.1);
        assert_eq!(succ.len(), 1);
        assert_eq!(succ[0].placements()[0].1, Rect::new(0, 2, 2, 2));
        assert!(succ[0].spaces().iter().all(|s| s.rect != Rect::new(0, 0, 1, 4)));
    }

    #[test]
    fn expand_on_terminal_state() {
        let inst = Instance::from_types("one", 4, [(4, 4, 1)]);
        let state = state_for(&inst, Rect::new(0, 0, 4, 4), Rotation::Forbidden);
        let done = greedy_rollout(&state, 0.1);
        assert!(done.is_terminal());
        assert!(expand(&done, 2, 0.1).is_empty());
        let again = greedy_rollout(&done, 0.1);
        assert_eq!(again.score, done.packed_area());
        assert_eq!(again.placements(), done.placements());
    }

    #[test]
    fn rollout_packs_two_boxes() {
        let inst = Instance::from_types("two", 4, [(4, 2, 2)]);
        let state = state_for(&inst, Rect::new(0, 0, 4, 4), Rotation::Forbidden);
        let done = greedy_rollout(&state, 0.1);
        assert_eq!(done.score, 16);
        assert!(done.all_placed());
        done.validate().unwrap();
    }

    #[test]
    fn top_w_selection_and_ties() {
        // Three fitting blocks of different sizes in one space.
        let boxes = vec![
            BoxType { id: 0, width: 9, length: 10, count: 1 },
            BoxType { id: 1, width: 7, length: 10, count: 1 },
            BoxType { id: 2, width: 5, length: 10, count: 1 },
        ];
        let container = Rect::new(0, 0, 10, 10);
        let blocks = complex_blocks(&boxes, container, &BlockGenConfig::default());
        let state = PackingState::new(Catalog::new(boxes, blocks), container);
        let space = select_space(state.spaces()).unwrap();
        let top = select_blocks(&state, &space, 2, 0.0);
        let dims: Vec<_> = top.iter().map(|&id| state.catalog().block(id).width).collect();
        assert_eq!(dims, vec![9, 7]);

        // Equal score: larger area first is impossible with equal area, so id decides.
        let twins = vec![
            BoxType { id: 0, width: 5, length: 4, count: 1 },
            BoxType { id: 1, width: 4, length: 5, count: 1 },
        ];
        let blocks = complex_blocks(&twins, container, &BlockGenConfig::default());
        let state = PackingState::new(Catalog::new(twins, blocks), container);
        let top = select_blocks(&state, &space, 2, 0.0);
        assert_eq!(top, vec![0, 1]);

        let none = select_blocks(&state, &FreeSpace { rect: Rect::new(0, 0, 1, 1) }, 2, 0.1);
        assert!(none.is_empty());
    }

    #[test]
    fn width_one_search_equals_greedy() {
        let inst = Instance::from_types("g", 10, [(3, 4, 3), (7, 2, 2), (5, 5, 1), (2, 9, 2)]);
        let state = state_for(&inst, Rect::new(0, 0, 10, 12), Rotation::Forbidden);
        let greedy = greedy_rollout(&state, 0.1);
        let out = beam_search(&state, &BeamConfig::with_nodes(0.1, 1), |_| ControlFlow::Continue(()));
        assert_eq!(out.best.packed_area(), greedy.packed_area());
        assert_eq!(out.best.placements(), greedy.placements());
    }

    #[test]
    fn search_is_deterministic_and_valid() {
        let inst = Instance::from_types("d", 12, [(3, 4, 3), (7, 2, 2), (5, 5, 2), (2, 9, 2), (4, 3, 2)]);
        let state = state_for(&inst, Rect::new(0, 0, 12, 10), Rotation::Allowed);
        let cfg = BeamConfig::with_nodes(0.1, 300);
        let mut seen = 0;
        let a = beam_search(&state, &cfg, |t| {
            t.validate().unwrap();
            seen += 1;
            ControlFlow::Continue(())
        });
        let b = beam_search(&state, &cfg, |_| ControlFlow::Continue(()));
        assert!(seen > 1);
        assert_eq!(a.best.placements(), b.best.placements());
        assert_eq!(a.stats, b.stats);
        assert!(a.best.packed_area() >= greedy_rollout(&state, 0.1).packed_area());
    }

    #[test]
    fn hook_can_stop_the_search() {
        let inst = Instance::from_types("h", 10, [(3, 4, 3), (7, 2, 2)]);
        let state = state_for(&inst, Rect::new(0, 0, 10, 10), Rotation::Forbidden);
        let out = beam_search(&state, &BeamConfig::with_nodes(0.1, 1000), |_| ControlFlow::Break(()));
        assert_eq!(out.stats.stop, StopReason::Hook);
        assert_eq!(out.stats.rollouts, 1);
    }

    #[test]
    fn full_container_stops_immediately() {
        let inst = Instance::from_types("f", 4, [(2, 2, 4)]);
        let state = state_for(&inst, Rect::new(0, 0, 4, 4), Rotation::Forbidden);
        let out = beam_search(&state, &BeamConfig::with_nodes(0.1, 1000), |_| ControlFlow::Continue(()));
        assert_eq!(out.stats.stop, StopReason::Full);
        assert_eq!(out.best.packed_area(), 16);
    }

    #[test]
    fn catalog_is_shared_between_states() {
        let inst = Instance::from_types("s", 4, [(2, 2, 4)]);
        let state = state_for(&inst, Rect::new(0, 0, 4, 4), Rotation::Forbidden);
        let succ = expand(&state, 4, 0.1);
        for s in &succ {
            assert!(Arc::ptr_eq(s.catalog(), state.catalog()));
        }
    }
}
