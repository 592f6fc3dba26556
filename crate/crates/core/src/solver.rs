//! The full pipeline: block generation, filling the minimum container,
//! quick filling the leftovers, and the parallel sweep over container lengths.

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use num_rational::Ratio;

use crate::beam::{
    beam_search, quick_fill, BeamConfig, Budget, Catalog, PackingState, QuickFill, QuickFillConfig, SearchStats,
};
use crate::blocks::{complex_blocks, BlockGenConfig};
use crate::error::SolveError;
use crate::geometry::Rect;
use crate::instance::{Instance, Rotation};
use crate::solution::Solution;

pub use crate::solution::compute_gap;

/// Node budgets that replace the wall-clock limits for reproducible runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeBudgets {
    pub phase_one: u64,
    pub per_length: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub b: f64,
    /// Time for the minimum container, block generation included.
    pub t1: Duration,
    /// Time for each container length of the sweep, block generation included.
    pub t3: Duration,
    /// Number of sweep searches run at once.
    pub p: usize,
    pub rotation: Rotation,
    pub deterministic: Option<NodeBudgets>,
    pub blocks: BlockGenConfig,
    pub quick_fill_expansions: Option<u64>,
    pub width_cap: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            b: 0.1,
            t1: Duration::from_secs(30),
            t3: Duration::from_secs(30),
            p: 1,
            rotation: Rotation::Forbidden,
            deterministic: None,
            blocks: BlockGenConfig::default(),
            quick_fill_expansions: QuickFillConfig::new(Rotation::Forbidden).max_expansions,
            width_cap: None,
        }
    }
}

impl SolverConfig {
    /// Wall-clock configuration `(b, t1, t3, p)`.
    pub fn timed(b: f64, t1: Duration, t3: Duration, p: usize) -> Self {
        SolverConfig {
            b,
            t1,
            t3,
            p,
            ..Default::default()
        }
    }

    /// Node-budget configuration: `nodes` expand calls for every search.
    pub fn deterministic(b: f64, nodes: u64, p: usize) -> Self {
        SolverConfig {
            b,
            p,
            deterministic: Some(NodeBudgets {
                phase_one: nodes,
                per_length: nodes,
            }),
            ..Default::default()
        }
    }

    pub fn with_rotation(mut self, rotation: Rotation) -> Self {
        self.rotation = rotation;
        self
    }

    /// Tag in the `b,t1,t3,p` notation, e.g. `0.1,30,30,90`. Node-budget
    /// runs show the budgets with an `n` suffix.
    pub fn tag(&self) -> String {
        match self.deterministic {
            Some(n) => format!("{},{}n,{}n,{}", self.b, n.phase_one, n.per_length, self.p),
            None => format!(
                "{},{},{},{}",
                self.b,
                fmt_secs(self.t1),
                fmt_secs(self.t3),
                self.p
            ),
        }
    }

    fn beam(&self, time: Duration, nodes: impl Fn(&NodeBudgets) -> u64) -> BeamConfig {
        BeamConfig {
            b: self.b,
            budget: match &self.deterministic {
                Some(n) => Budget::Nodes(nodes(n)),
                None => Budget::Time(time),
            },
            width_cap: self.width_cap,
        }
    }

    fn block_config(&self) -> BlockGenConfig {
        BlockGenConfig {
            rotation: self.rotation,
            ..self.blocks.clone()
        }
    }

    fn quick_fill_config(&self) -> QuickFillConfig {
        QuickFillConfig {
            rotation: self.rotation,
            max_expansions: self.quick_fill_expansions,
        }
    }
}

fn fmt_secs(d: Duration) -> String {
    let s = d.as_secs_f64();
    if s.fract() == 0.0 {
        format!("{}", s as u64)
    } else {
        format!("{s}")
    }
}

/// Container lengths searched by the sweep: every integer in `(S/W, L_max]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepPlan {
    pub min_length: Ratio<u64>,
    pub max_length: u32,
    pub lengths: Vec<u32>,
}

impl SweepPlan {
    pub fn new(min_length: Ratio<u64>, max_length: u32) -> Self {
        let first = min_length.floor().to_integer() + 1;
        let lengths = (first..=max_length as u64).map(|l| l as u32).collect();
        SweepPlan {
            min_length,
            max_length,
            lengths,
        }
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// Number of sequential rounds with `p` searches at a time.
    pub fn batches(&self, p: usize) -> usize {
        self.lengths.len().div_ceil(p.max(1))
    }
}

/// Shared best solution. Keeps the shorter solution; on equal length the one
/// with the smaller origin index wins, so the outcome does not depend on
/// thread timing.
#[derive(Debug, Default)]
pub struct BestSink {
    inner: Mutex<SinkState>,
}

#[derive(Debug, Default)]
struct SinkState {
    best: Option<(u32, usize, Solution)>,
    history: Vec<u32>,
}

impl BestSink {
    pub fn new() -> Self {
        Self::default()
    }

    /// Offers `solution` found by origin `origin`. Returns whether it was kept.
    pub fn offer(&self, solution: Solution, origin: usize) -> bool {
        let mut g = self.inner.lock().unwrap_or_else(|e| e.into_inner());
        let key = (solution.used_length, origin);
        let better = match &g.best {
            None => true,
            Some((len, o, _)) => key < (*len, *o),
        };
        if better {
            g.history.push(solution.used_length);
            g.best = Some((key.0, key.1, solution));
        }
        better
    }

    pub fn best_length(&self) -> Option<u32> {
        let g = self.inner.lock().unwrap_or_else(|e| e.into_inner());
        g.best.as_ref().map(|(l, _, _)| *l)
    }

    /// Lengths of every accepted solution, in acceptance order.
    pub fn history(&self) -> Vec<u32> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner()).history.clone()
    }

    pub fn into_best(self) -> Option<Solution> {
        self.inner
            .into_inner()
            .unwrap_or_else(|e| e.into_inner())
            .best
            .map(|(_, _, s)| s)
    }
}

/// Greedy completion step of the sweep for a terminal state `state_c` of a
/// container of length `container_length`.
///
/// A state holding every box competes with its own length. Otherwise the
/// leftovers are quick-filled and stacked on top of the container. Returns
/// the candidate length and, when it beats `incumbent`, the solution.
pub fn sweep_greedy(
    state_c: &PackingState,
    container_length: u32,
    incumbent: Option<u32>,
    total_area: u64,
    fill: &mut dyn FnMut(&[u32]) -> Arc<QuickFill>,
) -> (u32, Option<Solution>) {
    let width = state_c.container().w;
    if state_c.all_placed() {
        let len = state_c.used_length();
        if incumbent.is_some_and(|best| len >= best) {
            return (len, None);
        }
        return (len, Some(Solution::new(width, total_area, state_c.box_placements())));
    }
    let top = fill(state_c.remaining());
    let len = container_length + top.used_length;
    if incumbent.is_some_and(|best| len >= best) {
        return (len, None);
    }
    let solution = Solution::stacked(&state_c.box_placements(), &top.placements, container_length, width, total_area);
    (len, Some(solution))
}

#[derive(Debug, Clone)]
pub struct SweepTaskStats {
    pub length: u32,
    pub best_length: Option<u32>,
    pub search: SearchStats,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: Solution,
    pub phase_one: SearchStats,
    /// Whether the minimum container already held every box.
    pub phase_one_complete: bool,
    /// Length of the phase-one layout stacked with its quick-filled leftovers.
    pub baseline_length: u32,
    pub sweep: Vec<SweepTaskStats>,
    pub elapsed: Duration,
}

impl SolveReport {
    /// Total `expand` calls over all searches.
    pub fn expansions(&self) -> u64 {
        self.phase_one.expansions + self.sweep.iter().map(|t| t.search.expansions).sum::<u64>()
    }
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gap = self.solution.gap_percent();
        write!(
            f,
            "length {} gap {:.4}% ({} sweep lengths, {:.2}s)",
            self.solution.used_length,
            ratio_f64(&gap),
            self.sweep.len(),
            self.elapsed.as_secs_f64()
        )
    }
}

pub(crate) fn ratio_f64(r: &Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Solves `instance` for the shortest strip length.
pub fn solve(instance: &Instance, cfg: &SolverConfig) -> Result<SolveReport, SolveError> {
    let start = Instant::now();
    instance.check_solvable(cfg.rotation)?;
    let width = instance.strip_width;
    let total_area = instance.total_area();
    let min_len = u32::try_from(instance.lower_bound_ceil())
        .map_err(|_| SolveError::Internal("strip length exceeds u32".into()))?;

    let container = Rect::new(0, 0, width, min_len);
    let blocks = complex_blocks(&instance.boxes, container, &cfg.block_config());
    let init = PackingState::new(Catalog::new(instance.boxes.clone(), blocks), container);
    let t1 = cfg.t1.saturating_sub(start.elapsed());
    let phase_one = beam_search(&init, &cfg.beam(t1, |n| n.phase_one), |_| ControlFlow::Continue(()));
    let best_a = phase_one.best;

    if best_a.all_placed() {
        let solution = Solution::new(width, total_area, best_a.box_placements());
        check(&solution, instance, cfg.rotation)?;
        return Ok(SolveReport {
            baseline_length: solution.used_length,
            solution,
            phase_one: phase_one.stats,
            phase_one_complete: true,
            sweep: Vec::new(),
            elapsed: start.elapsed(),
        });
    }

    let leftovers = quick_fill(&instance.boxes, best_a.remaining(), width, &cfg.quick_fill_config());
    let len_a = best_a.used_length();
    let baseline = Solution::stacked(&best_a.box_placements(), &leftovers.placements, len_a, width, total_area);
    check(&baseline, instance, cfg.rotation)?;
    let baseline_length = baseline.used_length;

    let plan = SweepPlan::new(instance.lower_bound(), baseline_length);
    let (solution, sweep) = run_parallel_sweep(instance, &plan, cfg, baseline)?;
    check(&solution, instance, cfg.rotation)?;
    Ok(SolveReport {
        solution,
        phase_one: phase_one.stats,
        phase_one_complete: false,
        baseline_length,
        sweep,
        elapsed: start.elapsed(),
    })
}

fn check(solution: &Solution, instance: &Instance, rotation: Rotation) -> Result<(), SolveError> {
    solution
        .validate(instance, rotation)
        .map_err(|e| SolveError::Internal(format!("produced an invalid layout: {e}")))
}

/// Runs one search per planned length, at most `cfg.p` at a time, and
/// returns the shortest solution found (or `baseline` if nothing beats it).
pub fn run_parallel_sweep(
    instance: &Instance,
    plan: &SweepPlan,
    cfg: &SolverConfig,
    baseline: Solution,
) -> Result<(Solution, Vec<SweepTaskStats>), SolveError> {
    let sink = BestSink::new();
    sink.offer(baseline, 0);
    let mut stats = Vec::with_capacity(plan.len());
    let p = cfg.p.max(1);

    for (batch_index, batch) in plan.lengths.chunks(p).enumerate() {
        let results: Vec<Result<SweepTaskStats, SolveError>> = thread::scope(|scope| {
            let handles: Vec<_> = batch
                .iter()
                .enumerate()
                .map(|(i, &length)| {
                    let origin = 1 + batch_index * p + i;
                    let sink = &sink;
                    scope.spawn(move || search_length(instance, length, cfg, sink, origin))
                })
                .collect();
            handles
                .into_iter()
                .zip(batch)
                .map(|(h, &length)| {
                    h.join().unwrap_or_else(|_| {
                        Err(SolveError::Internal(format!("sweep search for length {length} panicked")))
                    })
                })
                .collect()
        });
        for r in results {
            stats.push(r?);
        }
    }
    let best = sink
        .into_best()
        .ok_or_else(|| SolveError::Internal("sweep produced no solution".into()))?;
    Ok((best, stats))
}

fn search_length(
    instance: &Instance,
    length: u32,
    cfg: &SolverConfig,
    sink: &BestSink,
    origin: usize,
) -> Result<SweepTaskStats, SolveError> {
    let start = Instant::now();
    let width = instance.strip_width;
    let total_area = instance.total_area();
    let lower = instance.lower_bound_ceil() as u32;
    let container = Rect::new(0, 0, width, length);
    let blocks = complex_blocks(&instance.boxes, container, &cfg.block_config());
    let init = PackingState::new(Catalog::new(instance.boxes.clone(), blocks), container);

    let qf_cfg = cfg.quick_fill_config();
    let mut cache: HashMap<Vec<u32>, Arc<QuickFill>> = HashMap::new();
    let mut fill = |remaining: &[u32]| -> Arc<QuickFill> {
        cache
            .entry(remaining.to_vec())
            .or_insert_with(|| Arc::new(quick_fill(&instance.boxes, remaining, width, &qf_cfg)))
            .clone()
    };
    let mut local_best: Option<u32> = None;
    let mut failure: Option<SolveError> = None;

    let t3 = cfg.t3.saturating_sub(start.elapsed());
    let outcome = beam_search(&init, &cfg.beam(t3, |n| n.per_length), |terminal| {
        let (len, found) = sweep_greedy(terminal, length, local_best, total_area, &mut fill);
        if let Some(solution) = found {
            if let Err(e) = solution.validate(instance, cfg.rotation) {
                failure = Some(SolveError::Internal(format!("length {length}: {e}")));
                return ControlFlow::Break(());
            }
            local_best = Some(len);
            sink.offer(solution, origin);
        }
        if local_best.is_some_and(|l| l <= lower) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(SweepTaskStats {
        length,
        best_length: local_best,
        search: outcome.stats,
    })
}
