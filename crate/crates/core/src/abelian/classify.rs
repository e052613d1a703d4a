use std::collections::BTreeMap;

use super::{make_group, GroupSpec};

/// Prime factorisation by trial division, primes ascending.
pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Splits each modulus into prime powers and sorts them by prime, then by
/// exponent.
pub fn canonical_form(moduli: &[u64]) -> Vec<u64> {
    let mut powers: Vec<(u64, u64)> = moduli
        .iter()
        .flat_map(|&n| prime_factors(n))
        .map(|(p, e)| (p, p.pow(e)))
        .collect();
    powers.sort_unstable();
    powers.into_iter().map(|(_, q)| q).collect()
}

/// Invariant factors from a list of prime powers: bucket by prime, sort each
/// bucket descending, and let `n_i` be the product of the i-th largest power
/// of every prime.
pub fn nested_form(prime_powers: &[u64]) -> Vec<u64> {
    let mut buckets: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &q in prime_powers {
        let p = prime_factors(q)[0].0;
        buckets.entry(p).or_default().push(q);
    }
    let depth = buckets.values().map(Vec::len).max().unwrap_or(0);
    for bucket in buckets.values_mut() {
        bucket.sort_unstable_by(|a, b| b.cmp(a));
    }
    (0..depth)
        .map(|i| buckets.values().filter_map(|b| b.get(i)).product())
        .collect()
}

fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(e, e, &mut Vec::new(), &mut out);
    out
}

/// One representative per isomorphism class of Abelian groups of order `n`,
/// presented in nested form, sorted by nested form descending (cyclic first).
/// Empty for `n < 2`.
pub fn abelian_groups_of_order(n: u64) -> Vec<GroupSpec> {
    if n < 2 {
        return Vec::new();
    }
    let mut combos: Vec<Vec<u64>> = vec![Vec::new()];
    for (p, e) in prime_factors(n) {
        let mut next = Vec::new();
        for combo in &combos {
            for part in partitions(e) {
                let mut c = combo.clone();
                c.extend(part.iter().map(|&k| p.pow(k)));
                next.push(c);
            }
        }
        combos = next;
    }
    let mut groups: Vec<GroupSpec> = combos
        .into_iter()
        .map(|powers| make_group(&nested_form(&powers)).expect("prime powers are >= 2"))
        .collect();
    groups.sort_by(|a, b| b.nested().cmp(a.nested()));
    groups
}
