use std::collections::BTreeMap;

use super::{abelian_groups_of_order, gcd, GroupSpec};

/// A finite Abelian group as an explicit addition table over indices
/// `0..size`, with index 0 the identity.
///
/// Used for whole groups (indices are ranks), subgroups (indices into the
/// sorted element list) and quotients (indices into the transversal).
#[derive(Debug, Clone)]
pub struct CayleyTable {
    size: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
}

impl CayleyTable {
    pub(crate) fn for_group(g: &GroupSpec) -> CayleyTable {
        let size = g.size();
        let coords: Vec<Vec<u64>> = (0..size as u32).map(|r| g.decode(r)).collect();
        let mut add = vec![0u32; size * size];
        let mut sum = vec![0u64; g.factors().len()];
        for (a, ca) in coords.iter().enumerate() {
            for (b, cb) in coords.iter().enumerate().skip(a) {
                for (i, n) in g.factors().iter().enumerate() {
                    sum[i] = (ca[i] + cb[i]) % n;
                }
                let r = g.encode(&sum);
                add[a * size + b] = r;
                add[b * size + a] = r;
            }
        }
        CayleyTable::from_add(size, add)
    }

    /// Builds a table from a full `size × size` addition array.
    pub(crate) fn from_add(size: usize, add: Vec<u32>) -> CayleyTable {
        debug_assert_eq!(add.len(), size * size);
        let mut neg = vec![0u32; size];
        for a in 0..size {
            let row = &add[a * size..(a + 1) * size];
            neg[a] = row
                .iter()
                .position(|&s| s == 0)
                .expect("every element has an inverse") as u32;
        }
        CayleyTable { size, add, neg }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    pub fn order_of(&self, a: u32) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    /// Sum of all elements.
    pub fn total(&self) -> u32 {
        (0..self.size as u32).fold(0, |acc, x| self.add(acc, x))
    }

    /// Full associativity, commutativity and identity check. Cubic; meant for
    /// small tables in tests.
    pub fn is_abelian_group(&self) -> bool {
        let n = self.size as u32;
        for a in 0..n {
            if self.add(0, a) != a || self.add(a, self.neg(a)) != 0 {
                return false;
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return false;
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Histogram `order -> count`.
    pub fn order_profile(&self) -> BTreeMap<u64, u64> {
        let mut profile = BTreeMap::new();
        for a in 0..self.size as u32 {
            *profile.entry(self.order_of(a)).or_insert(0) += 1;
        }
        profile
    }

    /// Canonical form of the isomorphism type, found by matching the order
    /// profile against every Abelian group of this order. The trivial group
    /// maps to the empty list.
    pub fn canonical(&self) -> Vec<u64> {
        self.identify()
            .map(|g| g.canonical().to_vec())
            .unwrap_or_default()
    }

    /// Representative (in nested form) of this table's isomorphism class.
    pub fn identify(&self) -> Option<GroupSpec> {
        let n = self.size as u64;
        if n < 2 {
            return None;
        }
        let profile = self.order_profile();
        let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        // elements whose order divides d
        let dividing: Vec<u64> = divisors
            .iter()
            .map(|&d| {
                profile
                    .iter()
                    .filter(|(o, _)| d % **o == 0)
                    .map(|(_, c)| c)
                    .sum()
            })
            .collect();
        abelian_groups_of_order(n).into_iter().find(|g| {
            divisors.iter().zip(&dividing).all(|(&d, &count)| {
                g.factors().iter().map(|&m| gcd(m, d)).product::<u64>() == count
            })
        })
    }
}
