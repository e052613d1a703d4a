//! Harmonious groups: orderings `(g_1, …, g_n)` of all group elements whose
//! cyclic consecutive sums `g_i + g_{i+1}` again run through every element
//! exactly once.
//!
//! The structural predicate decides existence up front; the backtracking
//! search produces an actual sequence (and serves as ground truth in tests).

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use crate::abelian::{CayleyTable, Element, GroupSpec, QuotientView, Subgroup};
use crate::error::{Error, Result};

/// Knobs for the sequence search.
#[derive(Debug, Clone, Copy)]
pub struct SequenceConfig {
    pub node_budget: u64,
    /// Reject up front when a definitional necessary condition fails: the
    /// element sum must be zero (it equals the sum of all consecutive sums,
    /// which is twice itself), and every element must be `x + y` with `x ≠ y`.
    pub necessary_conditions: bool,
}

impl Default for SequenceConfig {
    fn default() -> Self {
        SequenceConfig {
            node_budget: 100_000_000,
            necessary_conditions: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmoniousSequence {
    group: GroupSpec,
    order: Vec<Element>,
}

impl HarmoniousSequence {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn elements(&self) -> &[Element] {
        &self.order
    }

    /// `order[i] + order[i+1 mod n]` for every `i`.
    pub fn sums(&self) -> Vec<Element> {
        cyclic_sums(&self.order)
    }

    /// Direct check of both invariants: a permutation of the group whose
    /// consecutive sums are again a permutation of the group.
    pub fn is_valid(&self) -> bool {
        is_harmonious_ordering(&self.group, &self.order)
    }
}

pub(crate) fn cyclic_sums(order: &[Element]) -> Vec<Element> {
    (0..order.len())
        .map(|i| {
            order[i]
                .add(&order[(i + 1) % order.len()])
                .expect("same group")
        })
        .collect()
}

/// Whether `order` lists every element of `g` once and its cyclic sums do too.
pub fn is_harmonious_ordering(g: &GroupSpec, order: &[Element]) -> bool {
    let n = g.size();
    if order.len() != n || order.iter().any(|x| x.group() != g) {
        return false;
    }
    let mut seen = vec![false; n];
    let mut sums = vec![false; n];
    for (x, s) in order.iter().zip(cyclic_sums(order)) {
        let (r, t) = (x.rank() as usize, s.rank() as usize);
        if seen[r] || sums[t] {
            return false;
        }
        seen[r] = true;
        sums[t] = true;
    }
    true
}

/// Structural criterion: a nontrivial Abelian group is harmonious iff its
/// Sylow 2-subgroup is trivial or non-cyclic and it is not an elementary
/// 2-group.
pub fn is_harmonious_group(g: &GroupSpec) -> bool {
    is_harmonious_canonical(g.canonical())
}

/// [`is_harmonious_group`] on a canonical form (empty means trivial).
pub fn is_harmonious_canonical(canonical: &[u64]) -> bool {
    if canonical.is_empty() {
        return false;
    }
    let even = canonical.iter().filter(|&&q| q % 2 == 0).count();
    even == 0 || (even >= 2 && canonical.iter().any(|&q| q != 2))
}

fn cache() -> &'static RwLock<HashMap<Vec<u64>, Option<Vec<u32>>>> {
    static CACHE: OnceLock<RwLock<HashMap<Vec<u64>, Option<Vec<u32>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// A harmonious sequence of `g`, or `None` when there is none.
///
/// Results are cached per presentation. Exceeding the node budget is
/// reported as [`Error::BudgetExhausted`], never as `None`.
pub fn harmonious_sequence(g: &GroupSpec) -> Result<Option<HarmoniousSequence>> {
    let key = g.factors().to_vec();
    let hit = cache().read().expect("cache lock").get(&key).cloned();
    let ranks = match hit {
        Some(ranks) => ranks,
        None => {
            let ranks = sequence_ranks(g, &SequenceConfig::default())?;
            cache()
                .write()
                .expect("cache lock")
                .insert(key, ranks.clone());
            ranks
        }
    };
    Ok(ranks.map(|r| to_sequence(g, &r)))
}

/// Uncached variant with explicit configuration.
pub fn harmonious_sequence_with(
    g: &GroupSpec,
    cfg: &SequenceConfig,
) -> Result<Option<HarmoniousSequence>> {
    Ok(sequence_ranks(g, cfg)?.map(|r| to_sequence(g, &r)))
}

fn to_sequence(g: &GroupSpec, ranks: &[u32]) -> HarmoniousSequence {
    HarmoniousSequence {
        group: g.clone(),
        order: ranks.iter().map(|&r| g.element_at(r)).collect(),
    }
}

fn sequence_ranks(g: &GroupSpec, cfg: &SequenceConfig) -> Result<Option<Vec<u32>>> {
    if let [n] = g.factors() {
        if n % 2 == 1 {
            // 2 is invertible mod n, so the sums 2i+1 are all distinct
            return Ok(Some((0..*n as u32).collect()));
        }
    }
    table_sequence(&*g.table()?, cfg)
}

/// A harmonious ordering of `h`'s elements, addition taken in the parent.
pub fn subgroup_sequence(h: &Subgroup, cfg: &SequenceConfig) -> Result<Option<Vec<Element>>> {
    let positions = table_sequence(&h.table()?, cfg)?;
    let elements = h.elements();
    Ok(positions.map(|p| p.iter().map(|&i| elements[i as usize].clone()).collect()))
}

/// A harmonious ordering of the cosets of `q`, as transversal positions,
/// starting with the identity coset.
pub fn quotient_sequence(q: &QuotientView, cfg: &SequenceConfig) -> Result<Option<Vec<usize>>> {
    Ok(table_sequence(q.table(), cfg)?.map(|p| p.into_iter().map(|i| i as usize).collect()))
}

/// Nodes spent on the exhaustive lex-order phase before switching to
/// randomized restarts.
const LEX_PHASE_NODES: u64 = 2_000_000;

/// Backtracking search over a table group. Index 0 is pinned first (every
/// rotation of a harmonious sequence is harmonious).
///
/// The first phase is a complete search trying candidates in index order; it
/// is the only phase that can answer `None`. If it runs out of its share of
/// the budget, seeded randomized restarts take over (deterministic for a
/// given table). Running out of the whole budget is an error.
pub fn table_sequence(t: &CayleyTable, cfg: &SequenceConfig) -> Result<Option<Vec<u32>>> {
    let n = t.size();
    if n < 2 {
        return Ok(None);
    }
    if cfg.necessary_conditions && !passes_necessary_conditions(t) {
        return Ok(None);
    }
    let lex_budget = cfg.node_budget.min(LEX_PHASE_NODES);
    let mut search = SequenceSearch::new(t, lex_budget, None);
    match search.dfs(0) {
        Ok(true) => return Ok(Some(search.seq)),
        Ok(false) => return Ok(None),
        Err(_) => {}
    }
    let mut spent = search.nodes;
    let mut restart_budget = (n * n) as u64;
    let mut seed = 0x9E37_79B9_7F4A_7C15u64;
    while spent < cfg.node_budget {
        let budget = restart_budget.min(cfg.node_budget - spent);
        let mut search = SequenceSearch::new(t, budget, Some(seed));
        let outcome = search.dfs(0);
        spent += search.nodes;
        if let Ok(true) = outcome {
            return Ok(Some(search.seq));
        }
        seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        restart_budget += restart_budget / 4;
    }
    Err(Error::BudgetExhausted { nodes: spent })
}

fn passes_necessary_conditions(t: &CayleyTable) -> bool {
    if t.total() != 0 {
        return false;
    }
    let n = t.size() as u32;
    let doubles: Vec<u32> = (0..n).map(|x| t.add(x, x)).collect();
    (0..n).all(|s| doubles.iter().any(|&d| d != s))
}

struct SequenceSearch<'a> {
    t: &'a CayleyTable,
    n: usize,
    seq: Vec<u32>,
    used_elem: Vec<bool>,
    used_sum: Vec<bool>,
    // unplaced elements whose value is still an unused sum
    overlap: usize,
    nodes: u64,
    budget: u64,
    // xorshift state; `None` means plain index order
    rng: Option<u64>,
}

impl<'a> SequenceSearch<'a> {
    fn new(t: &'a CayleyTable, budget: u64, seed: Option<u64>) -> Self {
        let n = t.size();
        let mut used_elem = vec![false; n];
        used_elem[0] = true;
        let mut seq = Vec::with_capacity(n);
        seq.push(0);
        SequenceSearch {
            t,
            n,
            seq,
            used_elem,
            used_sum: vec![false; n],
            overlap: n - 1,
            nodes: 0,
            budget,
            rng: seed.map(|s| s | 1),
        }
    }

    fn start_offset(&mut self) -> u32 {
        match &mut self.rng {
            None => 0,
            Some(state) => {
                *state ^= *state << 13;
                *state ^= *state >> 7;
                *state ^= *state << 17;
                (*state % self.n as u64) as u32
            }
        }
    }

    fn dfs(&mut self, prev: u32) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted { nodes: self.nodes });
        }
        if self.seq.len() == self.n {
            // closing sum prev + 0 = prev
            return Ok(!self.used_sum[prev as usize]);
        }
        // the closing sum equals the last element, so some unplaced element
        // must still be an unused sum
        if self.overlap == 0 {
            return Ok(false);
        }
        let n = self.n as u32;
        let offset = self.start_offset();
        for k in 0..n {
            let x = (offset + k) % n;
            if self.used_elem[x as usize] {
                continue;
            }
            let s = self.t.add(prev, x);
            if self.used_sum[s as usize] {
                continue;
            }
            self.place(x, s);
            if self.dfs(x)? {
                return Ok(true);
            }
            self.unplace(x, s);
        }
        Ok(false)
    }

    fn place(&mut self, x: u32, s: u32) {
        if !self.used_sum[x as usize] {
            self.overlap -= 1;
        }
        self.used_elem[x as usize] = true;
        if !self.used_elem[s as usize] {
            self.overlap -= 1;
        }
        self.used_sum[s as usize] = true;
        self.seq.push(x);
    }

    fn unplace(&mut self, x: u32, s: u32) {
        self.seq.pop();
        self.used_sum[s as usize] = false;
        if !self.used_elem[s as usize] {
            self.overlap += 1;
        }
        self.used_elem[x as usize] = false;
        if !self.used_sum[x as usize] {
            self.overlap += 1;
        }
    }
}

/// Rotates `seq` so that it starts at `anchor`.
pub fn cycle_labeling_from_sequence(
    seq: &HarmoniousSequence,
    anchor: &Element,
) -> Result<Vec<Element>> {
    let start = seq.order.iter().position(|x| x == anchor).ok_or_else(|| {
        Error::Internal(format!("{anchor} is not in the sequence of {}", seq.group))
    })?;
    Ok(seq.order[start..]
        .iter()
        .chain(&seq.order[..start])
        .cloned()
        .collect())
}
