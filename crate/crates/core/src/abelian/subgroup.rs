use std::collections::HashSet;
use std::fmt;

use super::{nested_form, CayleyTable, Element, GroupSpec};
use crate::error::{Error, Result};

/// Default bound on the parent order for subgroup enumeration.
pub const DEFAULT_ORDER_CAP: u64 = 1000;

/// An enumerated subgroup, stored as the sorted ranks of its elements.
/// Rank order equals lexicographic order, so `elements()` is lex-sorted and
/// starts with the identity.
#[derive(Clone)]
pub struct Subgroup {
    parent: GroupSpec,
    ranks: Vec<u32>,
    members: Vec<u64>,
}

fn bitset(size: usize, ranks: &[u32]) -> Vec<u64> {
    let mut bits = vec![0u64; size.div_ceil(64)];
    for &r in ranks {
        bits[r as usize / 64] |= 1 << (r % 64);
    }
    bits
}

#[inline]
fn bit(bits: &[u64], r: u32) -> bool {
    bits[r as usize / 64] >> (r % 64) & 1 == 1
}

impl Subgroup {
    fn from_sorted_ranks(parent: &GroupSpec, ranks: Vec<u32>) -> Subgroup {
        let members = bitset(parent.size(), &ranks);
        Subgroup {
            parent: parent.clone(),
            ranks,
            members,
        }
    }

    pub fn trivial(parent: &GroupSpec) -> Subgroup {
        Subgroup::from_sorted_ranks(parent, vec![0])
    }

    pub fn whole(parent: &GroupSpec) -> Subgroup {
        Subgroup::from_sorted_ranks(parent, (0..parent.order() as u32).collect())
    }

    /// The subgroup generated by `gens` (the trivial subgroup when empty).
    pub fn generated_by(parent: &GroupSpec, gens: &[Element]) -> Result<Subgroup> {
        for x in gens {
            check_parent(parent, x)?;
        }
        let table = parent.table()?;
        let mut current = Subgroup::trivial(parent);
        for x in gens {
            current = current.join_cyclic(&table, x.rank());
        }
        Ok(current)
    }

    /// Checks closure and builds the subgroup from an explicit element set.
    pub fn from_elements(parent: &GroupSpec, elements: &[Element]) -> Result<Subgroup> {
        for x in elements {
            check_parent(parent, x)?;
        }
        let mut ranks: Vec<u32> = elements.iter().map(Element::rank).collect();
        ranks.sort_unstable();
        ranks.dedup();
        let candidate = Subgroup::from_sorted_ranks(parent, ranks);
        if !candidate.is_closed()? {
            return Err(Error::NotASubgroup(format!(
                "{} elements of {} are not closed under addition and negation",
                elements.len(),
                parent
            )));
        }
        Ok(candidate)
    }

    pub fn parent(&self) -> &GroupSpec {
        &self.parent
    }

    pub fn order(&self) -> u64 {
        self.ranks.len() as u64
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn elements(&self) -> Vec<Element> {
        self.ranks
            .iter()
            .map(|&r| self.parent.element_at(r))
            .collect()
    }

    pub fn contains(&self, x: &Element) -> bool {
        x.group() == &self.parent && self.contains_rank(x.rank())
    }

    #[inline]
    pub fn contains_rank(&self, r: u32) -> bool {
        bit(&self.members, r)
    }

    /// Position of a member rank inside `ranks()`.
    pub fn position(&self, r: u32) -> Option<usize> {
        self.ranks.binary_search(&r).ok()
    }

    /// Exhaustive closure check: identity, sums and negatives stay inside.
    pub fn is_closed(&self) -> Result<bool> {
        let table = self.parent.table()?;
        if self.ranks.first() != Some(&0) {
            return Ok(false);
        }
        for &a in &self.ranks {
            if !self.contains_rank(table.neg(a)) {
                return Ok(false);
            }
            for &b in &self.ranks {
                if !self.contains_rank(table.add(a, b)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Addition table of the subgroup itself, indexed by position.
    pub fn table(&self) -> Result<CayleyTable> {
        let parent = self.parent.table()?;
        let size = self.ranks.len();
        let mut add = vec![0u32; size * size];
        for (i, &a) in self.ranks.iter().enumerate() {
            for (j, &b) in self.ranks.iter().enumerate() {
                add[i * size + j] = self.position(parent.add(a, b)).expect("closed") as u32;
            }
        }
        Ok(CayleyTable::from_add(size, add))
    }

    /// Canonical form of the subgroup's isomorphism type (empty when trivial).
    pub fn canonical(&self) -> Result<Vec<u64>> {
        Ok(self.table()?.canonical())
    }

    pub fn is_cyclic(&self) -> bool {
        self.ranks
            .iter()
            .any(|&r| self.parent.element_at(r).order() == self.order())
    }

    /// `self + ⟨x⟩`, built coset by coset.
    fn join_cyclic(&self, table: &CayleyTable, x: u32) -> Subgroup {
        let mut ranks = self.ranks.clone();
        let mut step = x;
        while !self.contains_rank(step) {
            ranks.extend(self.ranks.iter().map(|&h| table.add(h, step)));
            step = table.add(step, x);
        }
        ranks.sort_unstable();
        Subgroup::from_sorted_ranks(&self.parent, ranks)
    }

    /// Smallest `k ≥ 1` with `k·x` in the subgroup.
    fn relative_order(&self, table: &CayleyTable, x: u32) -> u64 {
        let mut k = 1;
        let mut step = x;
        while !self.contains_rank(step) {
            step = table.add(step, x);
            k += 1;
        }
        k
    }
}

fn check_parent(parent: &GroupSpec, x: &Element) -> Result<()> {
    if x.group() != parent {
        return Err(Error::GroupMismatch {
            left: parent.to_string(),
            right: x.group().to_string(),
        });
    }
    Ok(())
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.ranks == other.ranks
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("parent", &self.parent)
            .field("elements", &self.elements())
            .finish()
    }
}

/// All subgroups of order exactly `d`, sorted by their element lists.
pub fn subgroups_of_order(g: &GroupSpec, d: u64) -> Result<Vec<Subgroup>> {
    subgroups_of_order_capped(g, d, DEFAULT_ORDER_CAP)
}

/// Enumerates subgroups of order `d` by closing under joins with cyclic
/// subgroups, starting from the trivial subgroup. Only subgroups whose order
/// divides `d` are kept: every subgroup of order `d` is reachable through such
/// a chain, and only elements whose order divides `d` can occur in one.
pub fn subgroups_of_order_capped(g: &GroupSpec, d: u64, cap: u64) -> Result<Vec<Subgroup>> {
    if d == 0 || g.order() % d != 0 {
        return Err(Error::NotADivisor {
            divisor: d,
            order: g.order(),
        });
    }
    if g.order() > cap {
        return Err(Error::OrderCapExceeded {
            order: g.order(),
            cap,
        });
    }
    let table = g.table()?;
    let candidates: Vec<u32> = (1..g.order() as u32)
        .filter(|&x| d % table.order_of(x) == 0)
        .collect();

    let trivial = Subgroup::trivial(g);
    let mut seen: HashSet<Vec<u64>> = HashSet::from([trivial.members.clone()]);
    let mut frontier = vec![trivial];
    let mut found = Vec::new();
    while let Some(s) = frontier.pop() {
        if s.order() == d {
            found.push(s);
            continue;
        }
        for &x in &candidates {
            if s.contains_rank(x) {
                continue;
            }
            let grown = s.order() * s.relative_order(&table, x);
            if d % grown != 0 {
                continue;
            }
            let t = s.join_cyclic(&table, x);
            if seen.insert(t.members.clone()) {
                frontier.push(t);
            }
        }
    }
    found.sort_by(|a, b| a.ranks.cmp(&b.ranks));
    Ok(found)
}

/// Distinct cyclic subgroups `⟨x⟩`, sorted by element lists.
pub fn cyclic_subgroups(g: &GroupSpec) -> Result<Vec<Subgroup>> {
    let table = g.table()?;
    let trivial = Subgroup::trivial(g);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in 0..g.order() as u32 {
        let s = trivial.join_cyclic(&table, x);
        if seen.insert(s.ranks.clone()) {
            out.push(s);
        }
    }
    out.sort_by(|a, b| a.ranks.cmp(&b.ranks));
    Ok(out)
}

/// The quotient `Γ/H` with a lex-minimal transversal (identity first) and
/// its coset addition table.
#[derive(Clone)]
pub struct QuotientView {
    subgroup: Subgroup,
    transversal: Vec<u32>,
    coset_of: Vec<u32>,
    table: CayleyTable,
    canonical: Vec<u64>,
}

pub fn quotient(g: &GroupSpec, h: &Subgroup) -> Result<QuotientView> {
    if h.parent() != g {
        return Err(Error::GroupMismatch {
            left: g.to_string(),
            right: h.parent().to_string(),
        });
    }
    if !h.is_closed()? {
        return Err(Error::NotASubgroup(format!(
            "element set of order {} in {}",
            h.order(),
            g
        )));
    }
    let table = g.table()?;
    let n = g.size();
    let mut coset_of = vec![u32::MAX; n];
    let mut transversal = Vec::with_capacity(n / h.ranks.len());
    for r in 0..n as u32 {
        if coset_of[r as usize] != u32::MAX {
            continue;
        }
        let idx = transversal.len() as u32;
        transversal.push(r);
        for &x in h.ranks() {
            coset_of[table.add(r, x) as usize] = idx;
        }
    }
    let q = transversal.len();
    let mut add = vec![0u32; q * q];
    for (i, &a) in transversal.iter().enumerate() {
        for (j, &b) in transversal.iter().enumerate() {
            add[i * q + j] = coset_of[table.add(a, b) as usize];
        }
    }
    let table = CayleyTable::from_add(q, add);
    let canonical = table.canonical();
    Ok(QuotientView {
        subgroup: h.clone(),
        transversal,
        coset_of,
        table,
        canonical,
    })
}

impl QuotientView {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn parent(&self) -> &GroupSpec {
        self.subgroup.parent()
    }

    /// Number of cosets.
    pub fn index(&self) -> usize {
        self.transversal.len()
    }

    pub fn transversal_ranks(&self) -> &[u32] {
        &self.transversal
    }

    pub fn transversal(&self) -> Vec<Element> {
        self.transversal
            .iter()
            .map(|&r| self.parent().element_at(r))
            .collect()
    }

    pub fn representative(&self, coset: usize) -> Element {
        self.parent().element_at(self.transversal[coset])
    }

    /// Index of the coset containing `x`.
    pub fn coset_of(&self, x: &Element) -> usize {
        self.coset_of[x.rank() as usize] as usize
    }

    pub fn coset_of_rank(&self, r: u32) -> usize {
        self.coset_of[r as usize] as usize
    }

    pub fn coset_elements(&self, coset: usize) -> Vec<Element> {
        let table = self
            .parent()
            .table()
            .expect("quotient was built from a table");
        let rep = self.transversal[coset];
        let mut ranks: Vec<u32> = self
            .subgroup
            .ranks()
            .iter()
            .map(|&h| table.add(rep, h))
            .collect();
        ranks.sort_unstable();
        ranks
            .into_iter()
            .map(|r| self.parent().element_at(r))
            .collect()
    }

    /// Coset addition table indexed by transversal position.
    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    /// Canonical form of `Γ/H` (empty when `H = Γ`).
    pub fn canonical(&self) -> &[u64] {
        &self.canonical
    }

    pub fn nested(&self) -> Vec<u64> {
        nested_form(&self.canonical)
    }

    pub fn coset_order(&self, coset: usize) -> u64 {
        self.table.order_of(coset as u32)
    }

    /// Position of the lex-first coset generating the quotient.
    pub fn generator_index(&self) -> Option<usize> {
        let q = self.index() as u64;
        (0..self.index()).find(|&c| self.coset_order(c) == q)
    }

    pub fn is_cyclic(&self) -> bool {
        self.generator_index().is_some()
    }

    /// Lex-minimal representative `β` with `β + H` generating `Γ/H`.
    pub fn generator(&self) -> Option<Element> {
        self.generator_index().map(|c| self.representative(c))
    }

    /// Independent check that the cosets partition the parent: every element
    /// lies in exactly one `rep + H`, and each rep is its coset's minimum.
    pub fn is_partition(&self) -> bool {
        let g = self.parent();
        let mut hits = vec![0u32; g.size()];
        for c in 0..self.index() {
            let elems = self.coset_elements(c);
            if elems.first().map(Element::rank) != Some(self.transversal[c]) {
                return false;
            }
            for e in elems {
                hits[e.rank() as usize] += 1;
            }
        }
        hits.iter().all(|&h| h == 1) && self.index() as u64 * self.subgroup.order() == g.order()
    }
}

pub fn is_quotient_cyclic(q: &QuotientView) -> bool {
    q.is_cyclic()
}

pub fn quotient_generator(q: &QuotientView) -> Option<Element> {
    q.generator()
}

impl fmt::Debug for QuotientView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuotientView")
            .field("subgroup", &self.subgroup)
            .field("transversal", &self.transversal())
            .field("canonical", &self.canonical)
            .finish()
    }
}
