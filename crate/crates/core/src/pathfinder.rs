//! Shortest annealing schedules on a rasterized gap landscape.
//!
//! Cells are (Gamma index, kappa index) pairs. A schedule starts at
//! (Gamma = 1, kappa = 1) and ends at (Gamma = 0, kappa = 1); each step moves
//! to a 4-neighbour and costs the adiabatic time of that step.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fit::{fit_power_law, ScalingFit};
use crate::optimize::linspace;
use crate::spectrum::{scan_landscape, GapLandscape};
use crate::spinspace::{ControlPoint, TwiceSpin};

/// Gaps below this are treated as closed.
pub const SENTINEL_GAP: f64 = 1e-14;
/// Cost of any step whose weighting cell has a closed gap.
pub const SENTINEL_COST: f64 = 1e28;

/// (Gamma index, kappa index).
pub type Cell = (usize, usize);

/// Which endpoint's gap weights a step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum EdgeConvention {
    Source,
    #[default]
    Destination,
    /// Mean of the two 1/Delta^2 values.
    Average,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GraphOptions {
    pub convention: EdgeConvention,
    /// Only the kappa = 1 column is traversable (uncatalysed schedule).
    pub forced_kappa_one: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleGraph {
    pub gamma_axis: Vec<f64>,
    pub kappa_axis: Vec<f64>,
    /// 1/Delta^2 per cell, row-major by Gamma index.
    pub inv_gap_sq: Vec<f64>,
    /// Cells whose gap is below [`SENTINEL_GAP`].
    pub flagged: Vec<bool>,
    pub j: f64,
    pub options: GraphOptions,
    pub start: Cell,
    pub goal: Cell,
}

fn check_unit_axis(name: &'static str, axis: &[f64], needs_zero: bool) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::Empty(name));
    }
    if axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param(name, axis[0], "must be strictly ascending"));
    }
    if *axis.last().unwrap() != 1.0 || (needs_zero && axis[0] != 0.0) {
        return Err(Error::param(name, axis[0], "must run from 0 to 1"));
    }
    Ok(())
}

impl ScheduleGraph {
    /// Graph over explicit gaps (row-major by Gamma index). The Gamma axis must
    /// run from 0 to 1 and the kappa axis must end at 1.
    pub fn from_gaps(
        gamma_axis: &[f64],
        kappa_axis: &[f64],
        gaps: &[f64],
        j: f64,
        options: GraphOptions,
    ) -> Result<Self> {
        check_unit_axis("Gamma axis", gamma_axis, true)?;
        check_unit_axis("kappa axis", kappa_axis, false)?;
        if gamma_axis.len() < 2 {
            return Err(Error::param(
                "Gamma axis",
                gamma_axis.len() as f64,
                "needs at least two points",
            ));
        }
        if gaps.len() != gamma_axis.len() * kappa_axis.len() {
            return Err(Error::param(
                "gaps",
                gaps.len() as f64,
                "must have one entry per cell",
            ));
        }
        if !(j > 0.0) {
            return Err(Error::param("j", j, "must be positive"));
        }
        if let Some(&g) = gaps.iter().find(|g| !g.is_finite() || **g < 0.0) {
            return Err(Error::param("gap", g, "must be finite and non-negative"));
        }
        let flagged: Vec<bool> = gaps.iter().map(|&g| g < SENTINEL_GAP).collect();
        let inv_gap_sq = gaps
            .iter()
            .map(|&g| {
                if g < SENTINEL_GAP {
                    SENTINEL_COST
                } else {
                    1.0 / (g * g)
                }
            })
            .collect();
        let nk = kappa_axis.len();
        Ok(Self {
            gamma_axis: gamma_axis.to_vec(),
            kappa_axis: kappa_axis.to_vec(),
            inv_gap_sq,
            flagged,
            j,
            options,
            start: (gamma_axis.len() - 1, nk - 1),
            goal: (0, nk - 1),
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.gamma_axis.len(), self.kappa_axis.len())
    }

    fn index(&self, c: Cell) -> usize {
        c.0 * self.kappa_axis.len() + c.1
    }

    fn cell(&self, i: usize) -> Cell {
        (i / self.kappa_axis.len(), i % self.kappa_axis.len())
    }

    fn allowed(&self, c: Cell) -> bool {
        !self.options.forced_kappa_one || c.1 + 1 == self.kappa_axis.len()
    }

    pub fn control(&self, c: Cell) -> ControlPoint {
        ControlPoint {
            gamma: self.gamma_axis[c.0],
            kappa: self.kappa_axis[c.1],
        }
    }

    /// Traversable 4-neighbours of `c`, in lexicographic order.
    pub fn neighbors(&self, c: Cell) -> Vec<Cell> {
        let (ng, nk) = self.shape();
        let mut out = Vec::with_capacity(4);
        if c.0 > 0 {
            out.push((c.0 - 1, c.1));
        }
        if c.1 > 0 {
            out.push((c.0, c.1 - 1));
        }
        if c.1 + 1 < nk {
            out.push((c.0, c.1 + 1));
        }
        if c.0 + 1 < ng {
            out.push((c.0 + 1, c.1));
        }
        out.retain(|&n| self.allowed(n));
        out
    }

    /// Weight of the step `from -> to`; `None` unless they are traversable 4-neighbours.
    pub fn edge_weight(&self, from: Cell, to: Cell) -> Option<f64> {
        if !self.allowed(from)
            || !self.allowed(to)
            || from.0.abs_diff(to.0) + from.1.abs_diff(to.1) != 1
        {
            return None;
        }
        let (fi, ti) = (self.index(from), self.index(to));
        let (hot, w) = match self.options.convention {
            EdgeConvention::Source => (self.flagged[fi], self.inv_gap_sq[fi]),
            EdgeConvention::Destination => (self.flagged[ti], self.inv_gap_sq[ti]),
            EdgeConvention::Average => (
                self.flagged[fi] || self.flagged[ti],
                0.5 * (self.inv_gap_sq[fi] + self.inv_gap_sq[ti]),
            ),
        };
        if hot {
            return Some(SENTINEL_COST);
        }
        // |dH/dGamma| ~ 2 - kappa and |dH/dkappa| ~ 1 - Gamma; both constant along the step
        let norm_step = if from.0 != to.0 {
            (2.0 - self.kappa_axis[from.1])
                * (self.gamma_axis[to.0] - self.gamma_axis[from.0]).abs()
        } else {
            (1.0 - self.gamma_axis[from.0])
                * (self.kappa_axis[to.1] - self.kappa_axis[from.1]).abs()
        };
        Some(norm_step * w / self.j)
    }
}

/// Graph over the Delta01 values of a landscape.
pub fn build_graph(landscape: &GapLandscape, options: GraphOptions) -> Result<ScheduleGraph> {
    if landscape.summaries.is_empty() {
        return Err(Error::Empty("landscape"));
    }
    let gaps: Vec<f64> = landscape
        .summaries
        .iter()
        .map(|s| s.delta01.max(0.0))
        .collect();
    ScheduleGraph::from_gaps(
        &landscape.gamma_axis,
        &landscape.kappa_axis,
        &gaps,
        landscape.spin.j(),
        options,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub cells: Vec<Cell>,
    pub controls: Vec<ControlPoint>,
    pub total_time: f64,
    /// Running total at each cell; starts at 0.
    pub cumulative: Vec<f64>,
    /// Steps that paid the sentinel cost.
    pub sentinel_steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    cost: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    // min-heap on (cost, node)
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimal-cost schedule by Dijkstra. Among equal-cost predecessors the
/// lexicographically smallest cell wins, so the result is deterministic.
pub fn shortest_schedule(graph: &ScheduleGraph) -> Result<PathResult> {
    let (ng, nk) = graph.shape();
    let n = ng * nk;
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let (s, t) = (graph.index(graph.start), graph.index(graph.goal));
    dist[s] = 0.0;
    let mut heap = BinaryHeap::from([Entry { cost: 0.0, node: s }]);
    while let Some(Entry { cost, node }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        if node == t {
            break;
        }
        let u = graph.cell(node);
        for v in graph.neighbors(u) {
            let vi = graph.index(v);
            if done[vi] {
                continue;
            }
            let w = graph.edge_weight(u, v).expect("neighbour has a weight");
            let c = cost + w;
            if c < dist[vi] || (c == dist[vi] && node < pred[vi]) {
                dist[vi] = c;
                pred[vi] = node;
                heap.push(Entry { cost: c, node: vi });
            }
        }
    }
    if !done[t] {
        return Err(Error::Unreachable);
    }
    let mut idx = vec![t];
    while *idx.last().unwrap() != s {
        idx.push(pred[*idx.last().unwrap()]);
    }
    idx.reverse();
    let cells: Vec<Cell> = idx.iter().map(|&i| graph.cell(i)).collect();
    let mut cumulative = Vec::with_capacity(cells.len());
    let mut total = 0.0;
    let mut sentinel_steps = 0;
    cumulative.push(0.0);
    for w in cells.windows(2) {
        let c = graph.edge_weight(w[0], w[1]).expect("path steps are edges");
        if c >= SENTINEL_COST {
            sentinel_steps += 1;
        }
        total += c;
        cumulative.push(total);
    }
    Ok(PathResult {
        controls: cells.iter().map(|&c| graph.control(c)).collect(),
        cells,
        total_time: total,
        cumulative,
        sentinel_steps,
    })
}

/// Square raster on [0, 1]^2 with `raster` points per axis.
pub fn schedule_for_spin(
    spin: TwiceSpin,
    raster: usize,
    options: GraphOptions,
    exec: Exec,
) -> Result<PathResult> {
    if raster < 2 {
        return Err(Error::param(
            "raster",
            raster as f64,
            "needs at least two points per axis",
        ));
    }
    let axis = linspace(0.0, 1.0, raster);
    if !options.forced_kappa_one {
        let land = scan_landscape(spin, 3, &axis, &axis, exec)?;
        return shortest_schedule(&build_graph(&land, options)?);
    }
    // only the kappa = 1 column is reachable; other cells are never weighed
    let col = scan_landscape(spin, 3, &axis, &[1.0], exec)?;
    let mut gaps = vec![1.0; raster * raster];
    for gi in 0..raster {
        gaps[gi * raster + raster - 1] = col.delta01(gi, 0).max(0.0);
    }
    shortest_schedule(&ScheduleGraph::from_gaps(
        &axis,
        &axis,
        &gaps,
        spin.j(),
        options,
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TstarRow {
    pub j: f64,
    pub total_time: f64,
    /// Total time on the raster with doubled density, when checked.
    pub refined_time: Option<f64>,
}

impl TstarRow {
    /// Relative shift of total time under raster doubling.
    pub fn shift(&self) -> Option<f64> {
        self.refined_time
            .map(|r| (r - self.total_time).abs() / self.total_time)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TstarOptions {
    /// Points per axis of the square raster.
    pub raster: usize,
    /// Rerun on 2 * raster - 1 points and warn when t* moves by more than 10%.
    pub check_resolution: bool,
    pub graph: GraphOptions,
    pub exec: Exec,
}

impl Default for TstarOptions {
    fn default() -> Self {
        Self {
            raster: 201,
            check_resolution: true,
            graph: GraphOptions::default(),
            exec: Exec::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TstarScan {
    pub rows: Vec<TstarRow>,
    /// Power-law fit of total time against j; the exponent is the t* exponent.
    pub fit: ScalingFit,
    pub warnings: Vec<String>,
}

/// Relative t* shift above which a resolution warning is issued.
pub const RESOLUTION_SHIFT: f64 = 0.1;

/// Optimal-schedule time per j and its power-law fit.
pub fn tstar_scaling(js: &[f64], opts: &TstarOptions) -> Result<TstarScan> {
    if js.is_empty() {
        return Err(Error::Empty("j list"));
    }
    let mut rows = Vec::with_capacity(js.len());
    let mut warnings = Vec::new();
    for &j in js {
        let spin = TwiceSpin::from_j(j)?;
        let t = schedule_for_spin(spin, opts.raster, opts.graph, opts.exec)?.total_time;
        let refined_time = if opts.check_resolution {
            Some(schedule_for_spin(spin, 2 * opts.raster - 1, opts.graph, opts.exec)?.total_time)
        } else {
            None
        };
        let row = TstarRow {
            j,
            total_time: t,
            refined_time,
        };
        if let Some(s) = row.shift().filter(|&s| s > RESOLUTION_SHIFT) {
            warnings.push(format!(
                "j = {j}: t* moves by {:.1}% when the raster is refined from {} to {} points",
                100.0 * s,
                opts.raster,
                2 * opts.raster - 1
            ));
        }
        rows.push(row);
    }
    let x: Vec<f64> = rows.iter().map(|r| r.j).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.total_time).collect();
    let fit = fit_power_law(&x, &y)?;
    Ok(TstarScan {
        rows,
        fit,
        warnings,
    })
}
