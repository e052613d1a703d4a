//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints its PASS/FAIL line even when the others fail.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use harmony_core::abelian::{
    abelian_groups_of_order, cyclic_subgroups, quotient, subgroups_of_order, GroupSpec, Subgroup,
};
use harmony_core::construct::{
    all_witnesses, construct, find_witness, label_windmill, label_with_witness, predictions,
    Labeling,
};
use harmony_core::families::{self, expected_edge_count, Family, FamilyParams, VertexId};
use harmony_core::harmonic::{harmonious_sequence, is_harmonious_group};
use harmony_core::search::{independent_check, search, SearchConfig, SearchStatus};
use harmony_core::verify;

const GOLDEN: &str = include_str!("golden/windmill_5_3.json");

fn group(moduli: &str) -> GroupSpec {
    GroupSpec::parse(moduli).unwrap()
}

fn both_oracles(l: &Labeling) -> (bool, bool) {
    let graph = l.graph();
    let labels: Vec<Vec<u64>> = l.labels().iter().map(|e| e.coords().to_vec()).collect();
    let second = independent_check(
        l.group().factors(),
        graph.vertex_count(),
        graph.edges(),
        &labels,
    );
    (verify::check(l).valid, second)
}

/// Parameter sets of a generated family with at most `max_edges` edges.
fn params_up_to(family: Family, max_n: u64, max_m: u64, max_edges: u64) -> Vec<FamilyParams> {
    let mut out = Vec::new();
    for n in 3..=max_n {
        match family {
            Family::Cycle | Family::Wheel => out.push(FamilyParams::n(n)),
            Family::Superwheel => out.extend((1..=max_m).map(|k| FamilyParams::kn(k, n))),
            Family::Windmill | Family::Prism | Family::ClosedWeb | Family::OpenWeb => {
                out.extend((2..=max_m).map(|m| FamilyParams::mn(m, n)))
            }
            Family::Custom => {}
        }
    }
    out.retain(|p| expected_edge_count(family, p).is_ok_and(|e| e <= max_edges));
    out
}

fn cells(max_n: u64, max_m: u64, max_order: u64) -> Vec<(Family, FamilyParams, GroupSpec)> {
    let mut out = Vec::new();
    for family in Family::GENERATED {
        for p in params_up_to(family, max_n, max_m, max_order) {
            let order = expected_edge_count(family, &p).unwrap();
            out.extend(
                abelian_groups_of_order(order)
                    .into_iter()
                    .map(|g| (family, p, g)),
            );
        }
    }
    out
}

type Check = Result<String, String>;

fn sweep_soundness() -> Check {
    let start = Instant::now();
    let cells = cells(20, 6, 300);
    let results: Vec<Result<(usize, Vec<String>), String>> = cells
        .par_iter()
        .map(|(family, p, g)| {
            let witnesses =
                all_witnesses(*family, p, g).map_err(|e| format!("{family} {p:?} {g}: {e}"))?;
            let mut bad = Vec::new();
            for w in &witnesses {
                match label_with_witness(*family, p, g, w) {
                    Ok(l) if both_oracles(&l) == (true, true) => {}
                    Ok(_) => bad.push(format!("{family} {p:?} {g}: labeling rejected")),
                    Err(e) => bad.push(format!("{family} {p:?} {g}: {e}")),
                }
            }
            Ok((witnesses.len(), bad))
        })
        .collect();
    let mut witnesses = 0;
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok((n, bad)) => {
                witnesses += n;
                failures.extend(bad);
            }
            Err(e) => failures.push(e),
        }
    }
    let elapsed = start.elapsed();
    if !failures.is_empty() {
        return Err(format!(
            "{} failures, first: {}",
            failures.len(),
            failures[0]
        ));
    }
    if elapsed > Duration::from_secs(600) {
        return Err(format!("sweep took {elapsed:.1?}"));
    }
    Ok(format!(
        "{} instances, {witnesses} witnesses verified in {elapsed:.1?}",
        cells.len()
    ))
}

fn windmill_golden() -> Check {
    let g = group("5,3");
    let h = Subgroup::generated_by(&g, &[g.element(&[0, 1]).unwrap()]).unwrap();
    let l = label_windmill(5, 3, &g, &h).map_err(|e| e.to_string())?;
    if l.label(&VertexId::Center).unwrap().coords() != [0, 0] {
        return Err("center is not (0,0)".into());
    }
    for j in 1..=3u32 {
        for i in 1..=4u32 {
            let want = [u64::from(i), u64::from(j - 1)];
            let got = l
                .label(&VertexId::Blade { blade: j, index: i })
                .unwrap()
                .coords();
            if got != want {
                return Err(format!("v.{j}.{i} is {got:?}, expected {want:?}"));
            }
        }
    }
    let text = l.to_json_pretty().map_err(|e| e.to_string())? + "\n";
    if text != GOLDEN {
        return Err("JSON differs from the golden file".into());
    }
    let found =
        construct(Family::Windmill, &FamilyParams::mn(3, 5), &g).map_err(|e| e.to_string())?;
    if found.map(|l| l.to_json_pretty().unwrap() + "\n").as_deref() != Some(GOLDEN) {
        return Err("automatic witness gives a different labeling".into());
    }
    Ok("byte-identical".into())
}

fn cycle_dichotomy() -> Check {
    let start = Instant::now();
    let mut rows = 0;
    for n in 3..=12 {
        let graph = families::cycle(n).unwrap();
        for g in abelian_groups_of_order(n) {
            let out = search(&graph, &g, &SearchConfig::default()).map_err(|e| e.to_string())?;
            let predicted = is_harmonious_group(&g);
            let expected = if predicted {
                SearchStatus::Found
            } else {
                SearchStatus::ExhaustedNone
            };
            if out.status != expected {
                return Err(format!(
                    "C{n} over {g}: search {}, predicate {predicted}",
                    out.status
                ));
            }
            rows += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!("{rows} groups agree in {elapsed:.1?}"))
}

fn known_negatives() -> Check {
    let cases = [
        ("C4/Z4", families::cycle(4), "4"),
        ("C4/Z2^2", families::cycle(4), "2,2"),
        ("C6/Z6", families::cycle(6), "6"),
        ("D3^2/Z6", families::windmill(3, 2), "6"),
        ("Y2,4/Z12", families::prism(2, 4), "12"),
    ];
    let mut times = Vec::new();
    for (name, graph, g) in cases {
        let start = Instant::now();
        let cfg = SearchConfig {
            time_budget: Duration::from_secs(60),
            ..SearchConfig::default()
        };
        let out = search(&graph.unwrap(), &group(g), &cfg).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        if out.status != SearchStatus::ExhaustedNone {
            return Err(format!("{name}: {}", out.status));
        }
        if elapsed > Duration::from_secs(60) {
            return Err(format!("{name} took {elapsed:.1?}"));
        }
        times.push(format!("{name} {elapsed:.1?}"));
    }
    Ok(times.join(", "))
}

fn known_positives() -> Check {
    let cases = [
        ("C5/Z5", Family::Cycle, FamilyParams::n(5), "5"),
        ("C7/Z7", Family::Cycle, FamilyParams::n(7), "7"),
        ("W3/Z6", Family::Wheel, FamilyParams::n(3), "6"),
        ("D3^3/Z9", Family::Windmill, FamilyParams::mn(3, 3), "9"),
        ("Y2,3/Z9", Family::Prism, FamilyParams::mn(2, 3), "9"),
    ];
    for (name, family, p, g) in cases {
        let g = group(g);
        let graph = families::gen(family, &p).unwrap();
        let out = search(&graph, &g, &SearchConfig::default()).map_err(|e| e.to_string())?;
        let found = out
            .labeling
            .ok_or_else(|| format!("{name}: search {}", out.status))?;
        let built = construct(family, &p, &g)
            .map_err(|e| format!("{name}: {e}"))?
            .ok_or_else(|| format!("{name}: no witness"))?;
        for (how, l) in [("search", &found), ("construction", &built)] {
            let (a, b) = both_oracles(l);
            if !(a && b) {
                return Err(format!(
                    "{name} by {how}: verifier {a}, independent check {b}"
                ));
            }
        }
    }
    Ok("5 instances by search and construction".into())
}

fn group_characterization() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for order in 1..=20 {
        for g in abelian_groups_of_order(order) {
            let seq = harmonious_sequence(&g).map_err(|e| format!("{g}: {e}"))?;
            if seq.as_ref().is_some_and(|s| !s.is_valid()) {
                return Err(format!("{g}: returned sequence is not harmonious"));
            }
            if seq.is_some() != is_harmonious_group(&g) {
                return Err(format!(
                    "{g}: sequence {}, predicate {}",
                    seq.is_some(),
                    is_harmonious_group(&g)
                ));
            }
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(300) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!("{count} groups agree in {elapsed:.1?}"))
}

fn corollary_soundness() -> Check {
    let cells = cells(120, 60, 120);
    let predicted: Vec<_> = cells
        .iter()
        .filter(|(f, p, g)| !predictions(*f, p, g).is_empty())
        .collect();
    let failures: Vec<String> = predicted
        .par_iter()
        .filter_map(|(family, p, g)| {
            let verdict = find_witness(*family, p, g).and_then(|w| match w {
                Some(w) => {
                    label_with_witness(*family, p, g, &w).map(|l| both_oracles(&l) == (true, true))
                }
                None => Ok(false),
            });
            match verdict {
                Ok(true) => None,
                Ok(false) => Some(format!("{family} {p:?} {g}: no verified witness")),
                Err(e) => Some(format!("{family} {p:?} {g}: {e}")),
            }
        })
        .collect();
    if let Some(first) = failures.first() {
        return Err(format!("{} failures, first: {first}", failures.len()));
    }
    Ok(format!(
        "{} predicted instances all constructed",
        predicted.len()
    ))
}

fn structure_suite() -> Check {
    let mut groups = 0;
    let mut subgroups = 0;
    for order in 1..=100 {
        for g in abelian_groups_of_order(order) {
            groups += 1;
            let nested = g.nested();
            if nested.windows(2).any(|w| w[0] % w[1] != 0)
                || nested.iter().product::<u64>() != order
            {
                return Err(format!("{g}: nested form {nested:?}"));
            }
            if g.canonical().iter().product::<u64>() != order {
                return Err(format!("{g}: canonical form {:?}", g.canonical()));
            }
            let n1 = nested[0];
            if let Some(x) = g.elements().find(|x| n1 % x.order() != 0) {
                return Err(format!(
                    "{g}: element {:?} of order {} does not divide {n1}",
                    x.coords(),
                    x.order()
                ));
            }
            let cyclic = cyclic_subgroups(&g).map_err(|e| e.to_string())?;
            for d in (1..=order).filter(|d| order % d == 0) {
                let subs = subgroups_of_order(&g, d).map_err(|e| e.to_string())?;
                for c in cyclic.iter().filter(|c| c.order() == d) {
                    if !subs.contains(c) {
                        return Err(format!("{g}: cyclic subgroup of order {d} not enumerated"));
                    }
                }
                for h in &subs {
                    subgroups += 1;
                    let q = quotient(&g, h).map_err(|e| e.to_string())?;
                    if !q.is_partition()
                        || q.index() as u64 * d != order
                        || !q.representative(0).is_identity()
                    {
                        return Err(format!(
                            "{g}: quotient by a subgroup of order {d} is not a partition"
                        ));
                    }
                    for (i, rep) in q.transversal().iter().enumerate() {
                        let coset = q.coset_elements(i);
                        if coset.len() as u64 != d
                            || coset.iter().any(|x| q.coset_of(x) != i)
                            || q.coset_of(rep) != i
                        {
                            return Err(format!(
                                "{g}: coset {i} of a subgroup of order {d} is inconsistent"
                            ));
                        }
                    }
                    if q.canonical().iter().product::<u64>() != order / d {
                        return Err(format!(
                            "{g}: quotient type {:?} has the wrong order",
                            q.canonical()
                        ));
                    }
                }
            }
        }
    }
    Ok(format!("{groups} groups, {subgroups} subgroups"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("constructive sweep soundness", sweep_soundness),
        ("windmill D5^3 over Z5+Z3 golden labeling", windmill_golden),
        ("cycle dichotomy for n = 3..12", cycle_dichotomy),
        ("known negatives exhausted", known_negatives),
        (
            "known positives by search and construction",
            known_positives,
        ),
        ("harmonious groups of order <= 20", group_characterization),
        ("predicted instances up to order 120", corollary_soundness),
        ("structure theory up to order 100", structure_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({detail})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
