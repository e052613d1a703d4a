//! Exhaustive backtracking for Γ-harmonious labelings of arbitrary small
//! graphs.
//!
//! Vertices are assigned group elements (as table ranks) one at a time;
//! an assignment is rejected as soon as a vertex label repeats or an edge
//! whose endpoints are both labeled repeats an edge label.

use std::collections::HashSet;
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::{CayleyTable, GroupSpec};
use crate::construct::Labeling;
use crate::error::{Error, Result};
use crate::families::FamilyGraph;
use crate::verify;

mod survey;

pub use survey::{survey, write_csv, SurveyConfig, SurveyRow};

/// Nodes between budget, clock and cancellation checks.
const CHECK_INTERVAL: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexOrder {
    /// Start at a maximum-degree vertex, then always take the vertex with
    /// the most already-placed neighbors (ties: higher degree, lower index).
    MostConstrained,
    /// The most-constrained order backwards; for order-independence checks.
    Reversed,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub node_budget: u64,
    pub time_budget: Duration,
    /// Count every labeling instead of stopping at the first.
    pub count_all: bool,
    /// Pin the first vertex to the identity.
    pub symmetry_breaking: bool,
    /// Single-threaded, lex-first solution.
    pub deterministic: bool,
    pub vertex_order: VertexOrder,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: 1_000_000_000,
            time_budget: Duration::from_secs(300),
            count_all: false,
            symmetry_breaking: true,
            deterministic: false,
            vertex_order: VertexOrder::MostConstrained,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    ExhaustedNone,
    BudgetExhausted,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::Found => "found",
            SearchStatus::ExhaustedNone => "exhausted_none",
            SearchStatus::BudgetExhausted => "budget_exhausted",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub labeling: Option<Labeling>,
    pub nodes_explored: u64,
    /// Set in counting mode when the search ran to completion.
    pub solutions_count: Option<u64>,
}

/// Placement order of vertex indices.
pub fn vertex_order(graph: &FamilyGraph, order: VertexOrder) -> Vec<usize> {
    let n = graph.vertex_count();
    let deg = graph.degrees();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in graph.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut placed = vec![false; n];
    let mut placed_nbrs = vec![0usize; n];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by(|&a, &b| {
                (placed_nbrs[a], deg[a])
                    .cmp(&(placed_nbrs[b], deg[b]))
                    .then(b.cmp(&a))
            })
            .expect("an unplaced vertex remains");
        placed[v] = true;
        out.push(v);
        for &w in &adj[v] {
            placed_nbrs[w] += 1;
        }
    }
    if order == VertexOrder::Reversed {
        out.reverse();
    }
    out
}

/// Decides whether `graph` has a Γ-harmonious labeling.
///
/// With symmetry breaking on, the first vertex is pinned to the identity:
/// if `f` is harmonious then so is `f − f(v)`, whose edge labels are those
/// of `f` shifted by `−2f(v)`, and a shift is a bijection of Γ whatever
/// its order. Counts are reported for the unpinned problem (each
/// translation orbit has exactly `|Γ|` members, one of them pinned).
pub fn search(graph: &FamilyGraph, g: &GroupSpec, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let edges = graph.edge_count() as u64;
    if edges != g.order() {
        return Err(Error::OrderMismatch {
            edges,
            order: g.order(),
        });
    }
    if graph.vertex_count() as u64 > g.order() {
        return Ok(SearchOutcome {
            status: SearchStatus::ExhaustedNone,
            labeling: None,
            nodes_explored: 0,
            solutions_count: cfg.count_all.then_some(0),
        });
    }
    let table = g.table()?;
    let kernel = Kernel::new(graph, &table, cfg);
    let shared = Shared {
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        budget_hit: AtomicBool::new(false),
        deadline: Instant::now() + cfg.time_budget,
        node_budget: cfg.node_budget,
        interval: CHECK_INTERVAL.min(cfg.node_budget.max(1)),
    };

    let results: Vec<TaskResult> = if cfg.deterministic {
        let mut state = kernel.state(&shared);
        let _ = kernel.dfs(&mut state, 0);
        vec![state.finish()]
    } else {
        let depth = (kernel.order.len()).min(if cfg.symmetry_breaking { 3 } else { 2 });
        let mut prefixes = Vec::new();
        let mut state = kernel.state(&shared);
        kernel.prefixes(&mut state, 0, depth, &mut prefixes);
        let prefix_nodes = state.finish().nodes;
        shared.nodes.fetch_add(prefix_nodes, Ordering::Relaxed);
        let mut results: Vec<TaskResult> = prefixes
            .par_iter()
            .map(|prefix| {
                let mut state = kernel.state(&shared);
                if shared.stop.load(Ordering::Relaxed) {
                    return state.finish();
                }
                kernel.replay(&mut state, prefix);
                let _ = kernel.dfs(&mut state, prefix.len());
                state.finish()
            })
            .collect();
        results.push(TaskResult {
            nodes: prefix_nodes,
            ..TaskResult::default()
        });
        results
    };

    let nodes_explored: u64 = results.iter().map(|r| r.nodes).sum();
    let pinned_count: u64 = results.iter().map(|r| r.solutions).sum();
    let first = results.into_iter().find_map(|r| r.first);
    let budget_hit = shared.budget_hit.load(Ordering::Relaxed);

    let labeling = match first {
        Some(ranks) => {
            let mut labels = vec![g.identity(); graph.vertex_count()];
            for (pos, &v) in kernel.order.iter().enumerate() {
                labels[v] = g.element_at(ranks[pos]);
            }
            let labeling = Labeling::new(graph.clone(), g.clone(), labels)?;
            if !verify::check(&labeling).valid {
                return Err(Error::Internal(
                    "search produced a labeling that fails verification".into(),
                ));
            }
            Some(labeling)
        }
        None => None,
    };
    let complete = !budget_hit || (!cfg.count_all && labeling.is_some());
    let status = match (&labeling, complete) {
        (Some(_), true) => SearchStatus::Found,
        (None, true) => SearchStatus::ExhaustedNone,
        (_, false) => SearchStatus::BudgetExhausted,
    };
    let multiplier = if cfg.symmetry_breaking { g.order() } else { 1 };
    let solutions_count = (cfg.count_all && complete).then(|| pinned_count * multiplier);
    Ok(SearchOutcome {
        status,
        labeling,
        nodes_explored,
        solutions_count,
    })
}

struct Shared {
    nodes: AtomicU64,
    stop: AtomicBool,
    budget_hit: AtomicBool,
    deadline: Instant,
    node_budget: u64,
    interval: u64,
}

#[derive(Default)]
struct TaskResult {
    nodes: u64,
    solutions: u64,
    first: Option<Vec<u32>>,
}

struct Kernel<'a> {
    table: &'a CayleyTable,
    /// Position → vertex index.
    order: Vec<usize>,
    /// Position → positions of earlier neighbors.
    back: Vec<Vec<usize>>,
    count_all: bool,
    pinned: bool,
}

struct State<'s> {
    shared: &'s Shared,
    labels: Vec<u32>,
    used_vertex: Vec<bool>,
    used_edge: Vec<bool>,
    sums: Vec<Vec<u32>>,
    nodes: u64,
    unflushed: u64,
    solutions: u64,
    first: Option<Vec<u32>>,
}

impl State<'_> {
    fn finish(self) -> TaskResult {
        TaskResult {
            nodes: self.nodes,
            solutions: self.solutions,
            first: self.first,
        }
    }

    /// Flushes the local node count and reports whether to stop.
    fn checkpoint(&mut self) -> bool {
        let total = self
            .shared
            .nodes
            .fetch_add(self.unflushed, Ordering::Relaxed)
            + self.unflushed;
        self.unflushed = 0;
        if total >= self.shared.node_budget || Instant::now() >= self.shared.deadline {
            self.shared.budget_hit.store(true, Ordering::Relaxed);
            self.shared.stop.store(true, Ordering::Relaxed);
        }
        self.shared.stop.load(Ordering::Relaxed)
    }
}

#[derive(PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
}

impl<'a> Kernel<'a> {
    fn new(graph: &FamilyGraph, table: &'a CayleyTable, cfg: &SearchConfig) -> Kernel<'a> {
        let order = vertex_order(graph, cfg.vertex_order);
        let mut position = vec![0; order.len()];
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }
        let mut back = vec![Vec::new(); order.len()];
        for &(a, b) in graph.edges() {
            let (pa, pb) = (position[a], position[b]);
            back[pa.max(pb)].push(pa.min(pb));
        }
        Kernel {
            table,
            order,
            back,
            count_all: cfg.count_all,
            pinned: cfg.symmetry_breaking,
        }
    }

    fn state<'s>(&self, shared: &'s Shared) -> State<'s> {
        let n = self.table.size();
        State {
            shared,
            labels: vec![u32::MAX; self.order.len()],
            used_vertex: vec![false; n],
            used_edge: vec![false; n],
            sums: self
                .back
                .iter()
                .map(|b| Vec::with_capacity(b.len()))
                .collect(),
            nodes: 0,
            unflushed: 0,
            solutions: 0,
            first: None,
        }
    }

    fn candidates(&self, pos: usize) -> std::ops::Range<u32> {
        if pos == 0 && self.pinned {
            0..1
        } else {
            0..self.table.size() as u32
        }
    }

    /// Tries `x` at `pos`; on success the state holds the assignment.
    fn place(&self, st: &mut State, pos: usize, x: u32) -> bool {
        if st.used_vertex[x as usize] {
            return false;
        }
        let mut sums = std::mem::take(&mut st.sums[pos]);
        sums.clear();
        let mut ok = true;
        for &bp in &self.back[pos] {
            let s = self.table.add(x, st.labels[bp]);
            if st.used_edge[s as usize] {
                ok = false;
                break;
            }
            st.used_edge[s as usize] = true;
            sums.push(s);
        }
        if !ok {
            for &s in &sums {
                st.used_edge[s as usize] = false;
            }
            sums.clear();
        } else {
            st.used_vertex[x as usize] = true;
            st.labels[pos] = x;
        }
        st.sums[pos] = sums;
        ok
    }

    fn unplace(&self, st: &mut State, pos: usize) {
        for &s in &st.sums[pos] {
            st.used_edge[s as usize] = false;
        }
        st.sums[pos].clear();
        st.used_vertex[st.labels[pos] as usize] = false;
        st.labels[pos] = u32::MAX;
    }

    fn dfs(&self, st: &mut State, pos: usize) -> Flow {
        if pos == self.order.len() {
            st.solutions += 1;
            if st.first.is_none() {
                st.first = Some(st.labels.clone());
            }
            if !self.count_all {
                st.shared.stop.store(true, Ordering::Relaxed);
                return Flow::Stop;
            }
            return Flow::Continue;
        }
        for x in self.candidates(pos) {
            st.nodes += 1;
            st.unflushed += 1;
            if st.unflushed >= st.shared.interval && st.checkpoint() {
                return Flow::Stop;
            }
            if self.place(st, pos, x) {
                let flow = self.dfs(st, pos + 1);
                self.unplace(st, pos);
                if flow == Flow::Stop {
                    return Flow::Stop;
                }
            }
        }
        Flow::Continue
    }

    fn prefixes(&self, st: &mut State, pos: usize, depth: usize, out: &mut Vec<Vec<u32>>) {
        if pos == depth {
            out.push(st.labels[..pos].to_vec());
            return;
        }
        for x in self.candidates(pos) {
            st.nodes += 1;
            if self.place(st, pos, x) {
                self.prefixes(st, pos + 1, depth, out);
                self.unplace(st, pos);
            }
        }
    }

    fn replay(&self, st: &mut State, prefix: &[u32]) {
        for (pos, &x) in prefix.iter().enumerate() {
            let ok = self.place(st, pos, x);
            debug_assert!(ok, "prefixes are consistent");
        }
    }
}

/// Second oracle for the harmonious property, written against raw
/// coordinates and hash sets only.
pub fn independent_check(
    factors: &[u64],
    vertices: usize,
    edges: &[(usize, usize)],
    labels: &[Vec<u64>],
) -> bool {
    let order: u64 = factors.iter().product();
    if labels.len() != vertices || edges.len() as u64 != order {
        return false;
    }
    let distinct: HashSet<&Vec<u64>> = labels.iter().collect();
    if distinct.len() != labels.len() {
        return false;
    }
    let mut seen = HashSet::new();
    for &(a, b) in edges {
        let sum: Vec<u64> = factors
            .iter()
            .enumerate()
            .map(|(i, m)| (labels[a][i] + labels[b][i]) % m)
            .collect();
        if !seen.insert(sum) {
            return false;
        }
    }
    true
}
