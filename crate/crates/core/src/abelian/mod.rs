//! Finite Abelian groups presented as direct sums of cyclic groups
//! `Z_{n_1} ⊕ … ⊕ Z_{n_t}`.
//!
//! Elements are coordinate vectors. Internally every element also has a
//! *rank*: its mixed-radix index with the first coordinate most significant,
//! so that rank order coincides with lexicographic order on coordinates.
//! Search kernels work on ranks through a [`CayleyTable`].

mod classify;
mod subgroup;
mod table;

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use classify::{abelian_groups_of_order, canonical_form, nested_form, prime_factors};
pub use subgroup::{
    cyclic_subgroups, is_quotient_cyclic, quotient, quotient_generator, subgroups_of_order,
    subgroups_of_order_capped, QuotientView, Subgroup, DEFAULT_ORDER_CAP,
};
pub use table::CayleyTable;

/// Largest order for which a dense addition table is built.
pub const TABLE_LIMIT: u64 = 4096;

/// A finite Abelian group given by its cyclic factor orders.
///
/// Cheap to clone; two specs are equal when their factor lists are equal
/// (isomorphic presentations such as `5,3` and `15` are distinct specs).
#[derive(Clone)]
pub struct GroupSpec(Arc<GroupInner>);

struct GroupInner {
    factors: Vec<u64>,
    canonical: Vec<u64>,
    nested: Vec<u64>,
    order: u64,
    // strides[i] = product of factors[i+1..]
    strides: Vec<u64>,
    table: OnceLock<Arc<CayleyTable>>,
}

/// Builds a group from its moduli, computing canonical and nested forms.
pub fn make_group(moduli: &[u64]) -> Result<GroupSpec> {
    if moduli.is_empty() {
        return Err(Error::EmptyGroup);
    }
    if let Some(&bad) = moduli.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidModulus(bad));
    }
    let mut order: u64 = 1;
    for &n in moduli {
        order = order
            .checked_mul(n)
            .filter(|&o| o <= u32::MAX as u64)
            .ok_or(Error::OrderCapExceeded {
                order: u64::MAX,
                cap: u32::MAX as u64,
            })?;
    }
    let canonical = canonical_form(moduli);
    let nested = nested_form(&canonical);
    let mut strides = vec![1u64; moduli.len()];
    for i in (0..moduli.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * moduli[i + 1];
    }
    Ok(GroupSpec(Arc::new(GroupInner {
        factors: moduli.to_vec(),
        canonical,
        nested,
        order,
        strides,
        table: OnceLock::new(),
    })))
}

impl GroupSpec {
    /// Accepts `4,2,6`, `Z4+Z2+Z6`, `Z4⊕Z2⊕Z6` and mixtures.
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let moduli = text
            .split([',', '+', '⊕'])
            .map(|part| {
                let part = part.trim();
                let part = part
                    .strip_prefix('Z')
                    .map(|p| p.strip_prefix('_').unwrap_or(p))
                    .unwrap_or(part);
                part.parse::<u64>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::GroupSyntax(text.to_string()))?;
        make_group(&moduli)
    }

    pub fn factors(&self) -> &[u64] {
        &self.0.factors
    }

    /// Prime-power decomposition, primes ascending and equal primes by
    /// ascending exponent.
    pub fn canonical(&self) -> &[u64] {
        &self.0.canonical
    }

    /// Invariant factors `n_1, …, n_t` with `n_{i+1} | n_i`.
    pub fn nested(&self) -> &[u64] {
        &self.0.nested
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn size(&self) -> usize {
        self.0.order as usize
    }

    pub fn is_cyclic(&self) -> bool {
        self.0.nested.len() == 1
    }

    pub fn is_elementary_two_group(&self) -> bool {
        self.0.canonical.iter().all(|&q| q == 2)
    }

    pub fn identity(&self) -> Element {
        Element {
            group: self.clone(),
            coords: vec![0; self.0.factors.len()],
        }
    }

    /// Builds an element, rejecting wrong lengths and unreduced coordinates.
    pub fn element(&self, coords: &[u64]) -> Result<Element> {
        let fits = coords.len() == self.0.factors.len()
            && coords.iter().zip(&self.0.factors).all(|(c, n)| c < n);
        if !fits {
            return Err(Error::InvalidElement {
                coords: coords.to_vec(),
                group: self.to_string(),
            });
        }
        Ok(Element {
            group: self.clone(),
            coords: coords.to_vec(),
        })
    }

    /// Element with the given rank (mixed-radix index).
    pub fn element_at(&self, rank: u32) -> Element {
        Element {
            group: self.clone(),
            coords: self.decode(rank),
        }
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.0.order as u32).map(move |r| self.element_at(r))
    }

    pub(crate) fn decode(&self, rank: u32) -> Vec<u64> {
        let mut rest = rank as u64;
        self.0
            .factors
            .iter()
            .zip(&self.0.strides)
            .map(|(_, &s)| {
                let c = rest / s;
                rest %= s;
                c
            })
            .collect()
    }

    pub(crate) fn encode(&self, coords: &[u64]) -> u32 {
        coords
            .iter()
            .zip(&self.0.strides)
            .map(|(c, s)| c * s)
            .sum::<u64>() as u32
    }

    /// Number of elements whose order divides `d`.
    pub fn count_dividing(&self, d: u64) -> u64 {
        self.0.factors.iter().map(|&n| gcd(n, d)).product()
    }

    /// Histogram `order -> number of elements of that order`, by enumeration.
    pub fn order_profile(&self) -> BTreeMap<u64, u64> {
        let mut profile = BTreeMap::new();
        let mut coords = vec![0u64; self.0.factors.len()];
        loop {
            let ord = coords
                .iter()
                .zip(&self.0.factors)
                .fold(1, |acc, (&c, &n)| lcm(acc, n / gcd(n, c)));
            *profile.entry(ord).or_insert(0) += 1;
            // odometer increment
            let mut i = coords.len();
            loop {
                if i == 0 {
                    return profile;
                }
                i -= 1;
                coords[i] += 1;
                if coords[i] < self.0.factors[i] {
                    break;
                }
                coords[i] = 0;
            }
        }
    }

    /// Dense addition table over ranks. Built once and shared.
    pub fn table(&self) -> Result<Arc<CayleyTable>> {
        if self.0.order > TABLE_LIMIT {
            return Err(Error::OrderCapExceeded {
                order: self.0.order,
                cap: TABLE_LIMIT,
            });
        }
        Ok(self
            .0
            .table
            .get_or_init(|| Arc::new(CayleyTable::for_group(self)))
            .clone())
    }

    pub fn forms(&self) -> GroupForms {
        GroupForms {
            factors: self.factors().to_vec(),
            canonical: self.canonical().to_vec(),
            nested: self.nested().to_vec(),
            order: self.order(),
        }
    }
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.factors == other.0.factors
    }
}

impl Eq for GroupSpec {}

impl Hash for GroupSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.factors.hash(state);
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.factors.iter().map(|n| format!("Z{n}")).collect();
        f.write_str(&parts.join("+"))
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({:?})", self.0.factors)
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupSpec::parse(s)
    }
}

/// The three presentations reported for every group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupForms {
    pub factors: Vec<u64>,
    pub canonical: Vec<u64>,
    pub nested: Vec<u64>,
    pub order: u64,
}

/// An element of a [`GroupSpec`]. Immutable; arithmetic across different
/// groups is an error.
#[derive(Clone)]
pub struct Element {
    group: GroupSpec,
    coords: Vec<u64>,
}

impl Element {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn rank(&self) -> u32 {
        self.group.encode(&self.coords)
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn same_group(&self, other: &Element) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch {
                left: self.group.to_string(),
                right: other.group.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same_group(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(self.group.factors())
            .map(|((a, b), n)| (a + b) % n)
            .collect();
        Ok(Element {
            group: self.group.clone(),
            coords,
        })
    }

    pub fn neg(&self) -> Element {
        let coords = self
            .coords
            .iter()
            .zip(self.group.factors())
            .map(|(a, n)| (n - a) % n)
            .collect();
        Element {
            group: self.group.clone(),
            coords,
        }
    }

    /// `k·self`.
    pub fn scale(&self, k: u64) -> Element {
        let coords = self
            .coords
            .iter()
            .zip(self.group.factors())
            .map(|(a, n)| (a * (k % n)) % n)
            .collect();
        Element {
            group: self.group.clone(),
            coords,
        }
    }

    /// Additive order: lcm of the coordinate orders.
    pub fn order(&self) -> u64 {
        self.coords
            .iter()
            .zip(self.group.factors())
            .fold(1, |acc, (&c, &n)| lcm(acc, n / gcd(n, c)))
    }
}

pub fn add(a: &Element, b: &Element) -> Result<Element> {
    a.add(b)
}

pub fn neg(a: &Element) -> Element {
    a.neg()
}

pub fn element_order(a: &Element) -> u64 {
    a.order()
}

/// Whether `g` contains a subgroup isomorphic to `Z_2 ⊕ Z_{2s}` with `s ≥ 2`.
///
/// Decided from the nested form: `n_2` even and `n_1 ≥ 4`.
pub fn has_subgroup_z2_z2s(g: &GroupSpec) -> bool {
    let nested = g.nested();
    nested.len() >= 2 && nested[1] % 2 == 0 && nested[0] >= 4
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.group == other.group
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.group.hash(state);
        self.coords.hash(state);
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.group
            .factors()
            .cmp(other.group.factors())
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
